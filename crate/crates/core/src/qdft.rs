//! One-body orbital Hamiltonians and their binary qubit encoding.
//!
//! A real-symmetric `N x N` single-particle matrix (a Kohn-Sham or
//! tight-binding Hamiltonian in an orbital basis) is encoded on `M = log2 N`
//! qubits by identifying orbital `j` with computational basis state `|j>`.
//! The qubit operator is simply the Pauli expansion of the matrix, so
//! single-particle eigenpairs become qubit eigenpairs with no overhead in
//! particle number.
//!
//! For a closed-shell system with `N_occ` doubly occupied orbitals the total
//! band energy is `2 sum_k e_k` and the one-particle density matrix is
//! `gamma = 2 sum_k phi_k phi_k^T`, idempotent in the scaled sense
//! `gamma^2 = 2 gamma`.

use std::path::Path;

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// A real-symmetric single-particle Hamiltonian matrix.
#[derive(Debug, Clone)]
pub struct OneBodyMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl OneBodyMatrix {
    /// Validates symmetry (tolerance `1e-12` relative to the largest entry).
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("one-body matrix must be non-empty".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Validation(format!(
                "expected {} entries for a {dim} x {dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let scale = data.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in 0..r {
                worst = worst.max((data[r * dim + c] - data[c * dim + r]).abs());
            }
        }
        if worst > 1e-12 * scale {
            return Err(Error::NotHermitian { deviation: worst });
        }
        Ok(Self { dim, data })
    }

    /// Tridiagonal chain: `onsite` on the diagonal, `hopping` on the
    /// first off-diagonals (open boundary).
    pub fn chain_hamiltonian(sites: usize, onsite: f64, hopping: f64) -> Result<Self> {
        if sites == 0 {
            return Err(Error::Validation("chain needs at least one site".into()));
        }
        let mut data = vec![0.0; sites * sites];
        for i in 0..sites {
            data[i * sites + i] = onsite;
            if i + 1 < sites {
                data[i * sites + i + 1] = hopping;
                data[(i + 1) * sites + i] = hopping;
            }
        }
        Self::new(sites, data)
    }

    /// Matrix dimension (number of orbitals).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Dense Hermitian view for diagonalization.
    pub fn to_dense(&self) -> Result<DenseHermitian> {
        DenseHermitian::from_real(self.dim, self.data.clone())
    }

    /// Parses the plain-text format: first line `N`, then `N` rows of `N`
    /// whitespace-separated numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, message: "empty matrix file".into() })?;
        let dim: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: first_no + 1,
            message: format!("cannot parse dimension from {:?}", first.trim()),
        })?;
        if dim == 0 {
            return Err(Error::Parse { line: first_no + 1, message: "dimension must be positive".into() });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (idx, line) = lines.next().ok_or_else(|| Error::Parse {
                line: first_no + 1,
                message: format!("expected {dim} matrix rows"),
            })?;
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("cannot parse entry {tok:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != dim {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {dim} entries, found {}", row.len()),
                });
            }
            data.extend(row);
        }
        if let Some((idx, _)) = lines.next() {
            return Err(Error::Parse { line: idx + 1, message: "trailing content".into() });
        }
        Self::new(dim, data)
    }

    /// Reads a matrix from a plain-text file.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Formats the matrix in the plain-text format accepted by [`parse`](Self::parse).
    pub fn format(&self) -> String {
        let mut out = format!("{}\n", self.dim);
        for r in 0..self.dim {
            let row: Vec<String> =
                (0..self.dim).map(|c| format!("{:.16e}", self.entry(r, c))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Writes the matrix to a plain-text file.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.format())?;
        Ok(())
    }
}

/// Encodes an `N = 2^M` orbital Hamiltonian on `M` qubits by mapping orbital
/// `j` to basis state `|j>`.
pub fn binary_map(matrix: &OneBodyMatrix) -> Result<PauliOperator> {
    let dim = matrix.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Validation(format!(
            "binary encoding needs a power-of-two dimension >= 2, got {dim}"
        )));
    }
    PauliOperator::from_dense(&matrix.to_dense()?)
}

/// The lowest eigenvectors of a one-body matrix, with closed-shell
/// observables derived from them.
#[derive(Debug, Clone)]
pub struct OccupiedSubspace {
    dim: usize,
    orbital_energies: Vec<f64>,
    orbitals: Vec<Vec<f64>>,
}

impl OccupiedSubspace {
    /// Takes the `occupied` energetically lowest orbitals of `matrix`.
    pub fn from_matrix(matrix: &OneBodyMatrix, occupied: usize) -> Result<Self> {
        if occupied == 0 || occupied > matrix.dim() {
            return Err(Error::Validation(format!(
                "cannot occupy {occupied} of {} orbitals",
                matrix.dim()
            )));
        }
        let decomposition = matrix.to_dense()?.eigendecompose()?;
        let mut orbitals = Vec::with_capacity(occupied);
        for k in 0..occupied {
            let real: Vec<f64> = decomposition.eigenvectors[k]
                .iter()
                .map(|amp| {
                    debug_assert!(amp.im.abs() < 1e-10);
                    amp.re
                })
                .collect();
            orbitals.push(real);
        }
        Self::from_orbitals(decomposition.eigenvalues[..occupied].to_vec(), orbitals)
    }

    /// Builds the subspace from explicit orbitals, checking orthonormality
    /// to `1e-10`.
    pub fn from_orbitals(orbital_energies: Vec<f64>, orbitals: Vec<Vec<f64>>) -> Result<Self> {
        if orbitals.is_empty() || orbitals.len() != orbital_energies.len() {
            return Err(Error::Validation("orbital and energy counts differ".into()));
        }
        let dim = orbitals[0].len();
        for a in 0..orbitals.len() {
            if orbitals[a].len() != dim {
                return Err(Error::Validation("orbital length mismatch".into()));
            }
            for b in 0..=a {
                let dot: f64 = orbitals[a].iter().zip(&orbitals[b]).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "orbitals {a} and {b} are not orthonormal (dot {dot})"
                    )));
                }
            }
        }
        Ok(Self { dim, orbital_energies, orbitals })
    }

    /// Number of occupied orbitals.
    pub fn occupied_count(&self) -> usize {
        self.orbitals.len()
    }

    /// Orbital energies, ascending.
    pub fn orbital_energies(&self) -> &[f64] {
        &self.orbital_energies
    }

    /// Occupied orbitals as real coefficient vectors.
    pub fn orbitals(&self) -> &[Vec<f64>] {
        &self.orbitals
    }

    /// Closed-shell band energy `2 sum_k e_k`.
    pub fn occupied_trace(&self) -> f64 {
        2.0 * self.orbital_energies.iter().sum::<f64>()
    }

    /// Closed-shell density matrix `gamma = 2 sum_k phi_k phi_k^T`
    /// (row-major).
    pub fn density_matrix(&self) -> Vec<f64> {
        let mut gamma = vec![0.0; self.dim * self.dim];
        for phi in &self.orbitals {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    gamma[r * self.dim + c] += 2.0 * phi[r] * phi[c];
                }
            }
        }
        gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn chain_spectrum_matches_closed_form() {
        // Open chain: e_k = onsite + 2 hopping cos(k pi / (N + 1)).
        let sites = 16;
        let (onsite, hopping) = (0.3, -1.0);
        let chain = OneBodyMatrix::chain_hamiltonian(sites, onsite, hopping).unwrap();
        let mut expected: Vec<f64> = (1..=sites)
            .map(|k| onsite + 2.0 * hopping * (k as f64 * PI / (sites as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        let computed = chain.to_dense().unwrap().eigenvalues().unwrap();
        for (want, got) in expected.iter().zip(&computed) {
            assert!((want - got).abs() < 1e-10, "expected {want}, got {got}");
        }
    }

    #[test]
    fn binary_encoding_round_trips_matrix_entries() {
        let data = vec![
            0.5, -0.2, 0.1, 0.0, //
            -0.2, 0.3, 0.0, 0.7, //
            0.1, 0.0, -0.4, 0.2, //
            0.0, 0.7, 0.2, 0.6,
        ];
        let matrix = OneBodyMatrix::new(4, data).unwrap();
        let op = binary_map(&matrix).unwrap();
        assert_eq!(op.qubit_count(), 2);
        let dense = op.to_dense().unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert!((dense.entry(r, c).re - matrix.entry(r, c)).abs() < 1e-12);
                assert!(dense.entry(r, c).im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn binary_encoding_rejects_bad_dimensions() {
        let matrix = OneBodyMatrix::chain_hamiltonian(3, 0.0, 1.0).unwrap();
        assert!(binary_map(&matrix).is_err());
    }

    #[test]
    fn occupied_subspace_energies_and_trace() {
        let chain = OneBodyMatrix::chain_hamiltonian(8, 0.0, -1.0).unwrap();
        let occ = OccupiedSubspace::from_matrix(&chain, 4).unwrap();
        assert_eq!(occ.occupied_count(), 4);
        // Lowest four of e_k = -2 cos(k pi / 9): k = 1..4.
        let expected: f64 = (1..=4).map(|k| -2.0 * (k as f64 * PI / 9.0).cos()).sum();
        assert!((occ.occupied_trace() - 2.0 * expected).abs() < 1e-10);
        // Each orbital is a genuine eigenvector.
        for (phi, &e) in occ.orbitals().iter().zip(occ.orbital_energies()) {
            for r in 0..8 {
                let hv: f64 = (0..8).map(|c| chain.entry(r, c) * phi[c]).sum();
                assert!((hv - e * phi[r]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn density_matrix_is_idempotent_and_rotation_invariant() {
        let chain = OneBodyMatrix::chain_hamiltonian(6, 0.1, -0.8).unwrap();
        let occ = OccupiedSubspace::from_matrix(&chain, 3).unwrap();
        let gamma = occ.density_matrix();
        let dim = 6;

        // Trace counts electrons; gamma^2 = 2 gamma for a closed shell.
        let trace: f64 = (0..dim).map(|i| gamma[i * dim + i]).sum();
        assert!((trace - 6.0).abs() < 1e-10);
        for r in 0..dim {
            for c in 0..dim {
                let sq: f64 = (0..dim).map(|k| gamma[r * dim + k] * gamma[k * dim + c]).sum();
                assert!((sq - 2.0 * gamma[r * dim + c]).abs() < 1e-9);
            }
        }

        // Mixing two occupied orbitals by a rotation leaves gamma unchanged.
        let (c, s) = (0.6, 0.8);
        let orbitals = occ.orbitals();
        let mixed_0: Vec<f64> =
            orbitals[0].iter().zip(&orbitals[1]).map(|(a, b)| c * a + s * b).collect();
        let mixed_1: Vec<f64> =
            orbitals[0].iter().zip(&orbitals[1]).map(|(a, b)| -s * a + c * b).collect();
        let rotated = OccupiedSubspace::from_orbitals(
            occ.orbital_energies().to_vec(),
            vec![mixed_0, mixed_1, orbitals[2].clone()],
        )
        .unwrap();
        let gamma_rot = rotated.density_matrix();
        for (a, b) in gamma.iter().zip(&gamma_rot) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let chain = OneBodyMatrix::chain_hamiltonian(5, 0.25, -1.5).unwrap();
        let text = chain.format();
        let back = OneBodyMatrix::parse(&text).unwrap();
        assert_eq!(back.dim(), 5);
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(back.entry(r, c), chain.entry(r, c));
            }
        }
        assert!(OneBodyMatrix::parse("2\n1.0 0.0\n").is_err());
        assert!(OneBodyMatrix::parse("x\n").is_err());
        assert!(OneBodyMatrix::parse("1\n0.0\nextra\n").is_err());
    }
}
