//! Dense Hermitian matrices and a cyclic-Jacobi eigensolver.
//!
//! The eigensolver is the reference oracle for everything else in the crate:
//! a complex Hermitian matrix `H = A + iB` is embedded as the real symmetric
//! `2d x 2d` block matrix `[[A, -B], [B, A]]`, diagonalized by cyclic Jacobi
//! rotations, and the doubled spectrum is folded back to `d` complex
//! eigenpairs. Robustness is preferred over speed; intended sizes are a few
//! hundred rows (hard cap 4096).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the dense dimension; beyond this the dense path is refused.
pub const MAX_DENSE_DIM: usize = 4096;

/// Maximum number of cyclic Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 50;

/// A dense complex matrix validated to be Hermitian on construction.
///
/// Storage is row-major: entry `(r, c)` lives at `data[r * dim + c]`.
#[derive(Debug, Clone)]
pub struct DenseHermitian {
    dim: usize,
    data: Vec<Complex64>,
}

/// Result of a dense eigendecomposition: ascending eigenvalues paired with
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit-norm column belonging to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl DenseHermitian {
    /// Builds a matrix from row-major complex entries, checking Hermiticity.
    ///
    /// The deviation `max |H - H^dagger|` must stay below `1e-12` relative to
    /// the largest entry magnitude (with a floor of 1).
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dense matrix dimension must be positive".into()));
        }
        if dim > MAX_DENSE_DIM {
            return Err(Error::SizeLimit(format!(
                "dense dimension {dim} exceeds cap {MAX_DENSE_DIM}"
            )));
        }
        if data.len() != dim * dim {
            return Err(Error::Validation(format!(
                "dense data length {} does not match dimension {dim}",
                data.len()
            )));
        }
        let scale = data.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut deviation = 0.0_f64;
        for r in 0..dim {
            for c in r..dim {
                let d = (data[r * dim + c] - data[c * dim + r].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > 1e-12 * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from row-major real entries (must be symmetric).
    pub fn from_real(dim: usize, data: Vec<f64>) -> Result<Self> {
        let complex = data.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Self::new(dim, complex)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at row `r`, column `c`.
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute deviation of the imaginary part from zero.
    fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Matrix-vector product `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            for (c, amp) in v.iter().enumerate() {
                acc += row[c] * amp;
            }
            out[r] = acc;
        }
        out
    }

    /// Full eigendecomposition: ascending eigenvalues with orthonormal columns.
    ///
    /// Real-symmetric input is diagonalized directly; genuinely complex input
    /// goes through the `2d x 2d` real embedding, after which the duplicated
    /// spectrum is reduced back to `d` complex eigenpairs.
    pub fn eigendecompose(&self) -> Result<EigenDecomposition> {
        let d = self.dim;
        if self.max_imag() <= 1e-14 * self.frobenius_norm().max(1.0) {
            // Real symmetric fast path.
            let a: Vec<f64> = self.data.iter().map(|z| z.re).collect();
            let (values, vectors) = jacobi_symmetric(a, d)?;
            let order = ascending_order(&values);
            let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
            let eigenvectors: Vec<Vec<Complex64>> = order
                .iter()
                .map(|&k| (0..d).map(|r| Complex64::new(vectors[r * d + k], 0.0)).collect())
                .collect();
            return Ok(EigenDecomposition { eigenvalues, eigenvectors });
        }

        // Real embedding [[A, -B], [B, A]] of H = A + iB.
        let n = 2 * d;
        let mut s = vec![0.0_f64; n * n];
        for r in 0..d {
            for c in 0..d {
                let z = self.data[r * d + c];
                s[r * n + c] = z.re;
                s[r * n + (c + d)] = -z.im;
                s[(r + d) * n + c] = z.im;
                s[(r + d) * n + (c + d)] = z.re;
            }
        }
        let (values, vectors) = jacobi_symmetric(s, n)?;
        let order = ascending_order(&values);

        // Each eigenvalue of H appears twice; the two real eigenvectors of a
        // pair span the same complex ray, so Gram-Schmidt against the accepted
        // set keeps exactly one representative per copy.
        let mut eigenvalues = Vec::with_capacity(d);
        let mut eigenvectors: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        for &k in &order {
            if eigenvalues.len() == d {
                break;
            }
            let mut v: Vec<Complex64> = (0..d)
                .map(|r| Complex64::new(vectors[r * n + k], vectors[(r + d) * n + k]))
                .collect();
            for u in &eigenvectors {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                for z in v.iter_mut() {
                    *z /= norm;
                }
                eigenvalues.push(values[k]);
                eigenvectors.push(v);
            }
        }
        if eigenvalues.len() != d {
            return Err(Error::Validation(
                "embedding eigenpair reduction did not recover a full basis".into(),
            ));
        }
        Ok(EigenDecomposition { eigenvalues, eigenvectors })
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigendecompose()?.eigenvalues)
    }
}

/// Indices that sort `values` ascending (stable under exact ties).
fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Returns unsorted eigenvalues and the accumulated rotation matrix `V`
/// (row-major; column `k` is the eigenvector of eigenvalue `k`). Converges
/// when the off-diagonal Frobenius mass falls below `1e-13` of the matrix
/// scale.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0_f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n == 1 {
        return Ok((vec![a[0]], v));
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-13 * scale;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        let off = (2.0 * off).sqrt();
        if off <= tol {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((values, v));
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                // Entries already below the per-entry share of the target
                // off-diagonal mass cannot block convergence; skip them.
                if apq.abs() * (n as f64) <= tol {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // tan of the rotation angle, smaller root for stability.
                let t = if theta.abs() > 1e12 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    let mut off = 0.0_f64;
    for p in 0..n {
        for q in (p + 1)..n {
            off += a[p * n + q] * a[p * n + q];
        }
    }
    Err(Error::EigensolverStalled { sweeps: MAX_SWEEPS, off_diagonal: (2.0 * off).sqrt() })
}
