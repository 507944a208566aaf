//! Determinant-basis construction of many-body Hamiltonian matrices.
//!
//! A determinant is a bitstring over spin-orbitals (bit `q` set means
//! spin-orbital `q` occupied), with the phase convention that the basis state
//! is the ascending-order creation product `a+_{q1} a+_{q2} ... |vac>` with
//! `q1 < q2 < ...`. Ladder operators then act as
//!
//! ```text
//! a_q   |D> = (-1)^{#occupied below q} |D without q>   (zero if q empty)
//! a+_q  |D> = (-1)^{#occupied below q} |D with q>      (zero if q occupied)
//! ```
//!
//! This route never touches Pauli operators, so it serves as an independent
//! cross-check of the qubit mapping: both assign determinant `D` the basis
//! index `D` itself.

use std::collections::HashMap;

use crate::dense::{DenseHermitian, MAX_DENSE_DIM};
use crate::error::{Error, Result};
use crate::fermion::{spin_orbital, FrozenCoreHamiltonian, Ladder};

/// Applies one ladder operator to a determinant; `None` means annihilation.
pub fn apply_ladder(determinant: usize, op: Ladder) -> Option<(usize, f64)> {
    let q = op.index();
    let bit = 1usize << q;
    let occupied = determinant & bit != 0;
    match op {
        Ladder::Annihilate(_) if !occupied => return None,
        Ladder::Create(_) if occupied => return None,
        _ => {}
    }
    let below = (determinant & (bit - 1)).count_ones();
    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
    Some((determinant ^ bit, sign))
}

/// Applies a product of ladder operators, rightmost factor first.
pub fn apply_ladder_string(determinant: usize, ops: &[Ladder]) -> Option<(usize, f64)> {
    let mut state = determinant;
    let mut sign = 1.0;
    for &op in ops.iter().rev() {
        let (next, s) = apply_ladder(state, op)?;
        state = next;
        sign *= s;
    }
    Some((state, sign))
}

/// An ordered list of determinants serving as a matrix basis.
#[derive(Debug, Clone)]
pub struct DeterminantBasis {
    spin_orbitals: usize,
    states: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl DeterminantBasis {
    /// All `2^m` determinants over `m` spin-orbitals, in index order.
    pub fn full(spin_orbitals: usize) -> Result<Self> {
        if spin_orbitals >= usize::BITS as usize {
            return Err(Error::SizeLimit(format!("{spin_orbitals} spin-orbitals overflow")));
        }
        Self::from_states(spin_orbitals, (0..1usize << spin_orbitals).collect())
    }

    /// All determinants with exactly `electrons` occupied spin-orbitals.
    pub fn with_particle_number(spin_orbitals: usize, electrons: usize) -> Result<Self> {
        if spin_orbitals >= usize::BITS as usize {
            return Err(Error::SizeLimit(format!("{spin_orbitals} spin-orbitals overflow")));
        }
        let states = (0..1usize << spin_orbitals)
            .filter(|d| d.count_ones() as usize == electrons)
            .collect();
        Self::from_states(spin_orbitals, states)
    }

    /// A basis from explicit determinants (kept in the given order).
    pub fn from_states(spin_orbitals: usize, states: Vec<usize>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Validation("determinant basis must be non-empty".into()));
        }
        if states.len() > MAX_DENSE_DIM {
            return Err(Error::SizeLimit(format!(
                "{} determinants exceed the dense limit {MAX_DENSE_DIM}",
                states.len()
            )));
        }
        let mut position = HashMap::with_capacity(states.len());
        for (i, &d) in states.iter().enumerate() {
            if d >> spin_orbitals != 0 {
                return Err(Error::Validation(format!(
                    "determinant {d} uses more than {spin_orbitals} spin-orbitals"
                )));
            }
            if position.insert(d, i).is_some() {
                return Err(Error::Validation(format!("duplicate determinant {d}")));
            }
        }
        Ok(Self { spin_orbitals, states, position })
    }

    /// Number of spin-orbitals the determinants live on.
    pub fn spin_orbitals(&self) -> usize {
        self.spin_orbitals
    }

    /// Basis size.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when the basis holds no determinants (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Determinants in basis order.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// Row index of a determinant, if present.
    pub fn position(&self, determinant: usize) -> Option<usize> {
        self.position.get(&determinant).copied()
    }
}

/// Builds the Hamiltonian matrix over a determinant basis.
///
/// Couplings that leave the basis are dropped, so a restricted basis yields
/// the projected Hamiltonian; closed sectors (fixed particle number) lose
/// nothing because the Hamiltonian conserves particle number.
pub fn hamiltonian_matrix(
    hamiltonian: &FrozenCoreHamiltonian,
    basis: &DeterminantBasis,
) -> Result<DenseHermitian> {
    let n = hamiltonian.active_count();
    if basis.spin_orbitals() != 2 * n {
        return Err(Error::Validation(format!(
            "basis over {} spin-orbitals does not match {} active orbitals",
            basis.spin_orbitals(),
            n
        )));
    }
    let dim = basis.len();
    let mut matrix = vec![0.0; dim * dim];

    for (col, &det) in basis.states().iter().enumerate() {
        matrix[col * dim + col] += hamiltonian.scalar_shift();

        for t in 0..n {
            for u in 0..n {
                let coeff = hamiltonian.h(t, u);
                if coeff == 0.0 {
                    continue;
                }
                for spin in 0..2 {
                    let ops = [
                        Ladder::Create(spin_orbital(t, spin)),
                        Ladder::Annihilate(spin_orbital(u, spin)),
                    ];
                    if let Some((target, sign)) = apply_ladder_string(det, &ops) {
                        if let Some(row) = basis.position(target) {
                            matrix[row * dim + col] += coeff * sign;
                        }
                    }
                }
            }
        }

        for t in 0..n {
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        let coeff = hamiltonian.g(t, u, v, w);
                        if coeff == 0.0 {
                            continue;
                        }
                        for spin_a in 0..2 {
                            for spin_b in 0..2 {
                                let ops = [
                                    Ladder::Create(spin_orbital(t, spin_a)),
                                    Ladder::Create(spin_orbital(v, spin_b)),
                                    Ladder::Annihilate(spin_orbital(w, spin_b)),
                                    Ladder::Annihilate(spin_orbital(u, spin_a)),
                                ];
                                if let Some((target, sign)) = apply_ladder_string(det, &ops) {
                                    if let Some(row) = basis.position(target) {
                                        matrix[row * dim + col] += 0.5 * coeff * sign;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    DenseHermitian::from_real(dim, matrix)
}
