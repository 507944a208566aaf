//! Shared oracle helpers for the integration tests: a Taylor-series matrix
//! exponential (independent of the production rotation code) and seeded
//! random generators for Hamiltonians, integrals, and states.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use evqe_core::fermion::MolecularIntegrals;
use evqe_core::state::Statevector;

/// Row-major identity matrix.
pub fn identity(dim: usize) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Row-major complex matrix product.
pub fn matmul(dim: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let av = a[r * dim + k];
            if av.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..dim {
                out[r * dim + c] += av * b[k * dim + c];
            }
        }
    }
    out
}

/// Row-major matrix-vector product.
pub fn matvec(dim: usize, a: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for r in 0..dim {
        for c in 0..dim {
            out[r] += a[r * dim + c] * v[c];
        }
    }
    out
}

/// Matrix exponential by scaling-and-squaring over a plain Taylor series.
pub fn expm(dim: usize, a: &[Complex64]) -> Vec<Complex64> {
    let bound: f64 = a.iter().map(|z| z.norm()).sum();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while bound * scale > 0.5 {
        squarings += 1;
        scale *= 0.5;
    }
    let scaled: Vec<Complex64> = a.iter().map(|z| z * scale).collect();

    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..=24u32 {
        term = matmul(dim, &term, &scaled);
        let inv = 1.0 / k as f64;
        term.iter_mut().for_each(|t| *t *= inv);
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
    }
    for _ in 0..squarings {
        result = matmul(dim, &result, &result);
    }
    result
}

/// Commutator Frobenius norm `||AB - BA||_F` for row-major matrices.
pub fn commutator_norm(dim: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let ab = matmul(dim, a, b);
    let ba = matmul(dim, b, a);
    ab.iter().zip(&ba).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Random real molecular integrals with full 8-fold two-body symmetry.
pub fn random_integrals(rng: &mut impl Rng, orbitals: usize) -> MolecularIntegrals {
    let mut ints = MolecularIntegrals::new(orbitals, rng.gen_range(-0.5..0.5)).unwrap();
    for p in 0..orbitals {
        for q in 0..=p {
            ints.set_one_body(p, q, rng.gen_range(-1.0..1.0)).unwrap();
        }
    }
    for p in 0..orbitals {
        for q in 0..orbitals {
            for r in 0..orbitals {
                for s in 0..orbitals {
                    ints.set_two_body(p, q, r, s, rng.gen_range(-0.3..0.3)).unwrap();
                }
            }
        }
    }
    ints
}

/// Random normalized statevector.
pub fn random_state(rng: &mut impl Rng, qubit_count: usize) -> Statevector {
    let dim = 1usize << qubit_count;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|a| a / norm).collect();
    Statevector::from_amplitudes(qubit_count, amps).unwrap()
}
