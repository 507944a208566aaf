//! Ensemble cost, trace diagnostic, and subspace post-processing.
//!
//! An ensemble problem carries `K` orthonormal initial states pushed through
//! a shared circuit. The weighted cost and the uniform trace diagnostic are
//!
//! ```text
//! cost(theta)  = sum_j w_j ( E_j(theta) + mu * p_j(theta) )
//! trace(theta) = (1/K) sum_j E_j(theta)
//! ```
//!
//! with `E_j = <Psi_j|H|Psi_j>` and `p_j` the optional penalty expectation.
//! The trace always uses uniform weights regardless of the cost's scheme.
//! With strictly descending weights the exact minimum of the cost selects the
//! `K` lowest eigenstates in weight order; with equal weights any orthonormal
//! basis of the lowest-`K` subspace is optimal, and the physical eigenpairs
//! are recovered by diagonalizing the `K x K` subspace matrix
//! `<Psi_a|H|Psi_b>` afterwards.

use num_complex::Complex64;

use crate::ansatz::AnsatzCircuit;
use crate::dense::{DenseHermitian, EigenDecomposition};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::state::Statevector;

/// How the cost distributes weight over the ensemble members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Equi,
    Optimal,
    Explicit,
}

/// A normalized weight vector over `K` ensemble members.
#[derive(Debug, Clone)]
pub struct WeightScheme {
    kind: WeightKind,
    values: Vec<f64>,
}

impl WeightScheme {
    /// Uniform weights `1/K`.
    pub fn equi(ensemble_size: usize) -> Result<Self> {
        if ensemble_size == 0 {
            return Err(Error::Validation("ensemble size must be positive".into()));
        }
        let w = 1.0 / ensemble_size as f64;
        Ok(Self { kind: WeightKind::Equi, values: vec![w; ensemble_size] })
    }

    /// Descending weights `w_j = (2K - 1 - 2j) / K^2`.
    pub fn optimal(ensemble_size: usize) -> Result<Self> {
        if ensemble_size == 0 {
            return Err(Error::Validation("ensemble size must be positive".into()));
        }
        let k = ensemble_size as f64;
        let values = (0..ensemble_size).map(|j| (2.0 * k - 1.0 - 2.0 * j as f64) / (k * k)).collect();
        Ok(Self { kind: WeightKind::Optimal, values })
    }

    /// Explicit weights; must be positive and sum to 1 within `1e-12`.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("ensemble size must be positive".into()));
        }
        if values.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Validation("weights must be positive".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { kind: WeightKind::Explicit, values })
    }

    /// Scheme kind.
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Weight values in ensemble order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ensemble size `K`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true; schemes are validated non-empty.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One evaluation of the ensemble cost and its diagnostics.
#[derive(Debug, Clone)]
pub struct EnsembleEvaluation {
    /// `<Psi_j|H|Psi_j>` per ensemble member.
    pub per_state_energies: Vec<f64>,
    /// Penalty expectation per member (zeros without a penalty operator).
    pub per_state_penalties: Vec<f64>,
    /// Weighted cost including the penalty.
    pub cost: f64,
    /// Uniform average of the per-state energies.
    pub trace: f64,
    /// `strength * sum_j w_j p_j`.
    pub penalty_value: f64,
}

/// A weighted-ensemble VQE instance.
#[derive(Debug, Clone)]
pub struct EnsembleProblem {
    hamiltonian: PauliOperator,
    initial_states: Vec<Statevector>,
    circuit: AnsatzCircuit,
    weights: WeightScheme,
    penalty_operator: Option<PauliOperator>,
    penalty_strength: f64,
    effective_observable: PauliOperator,
}

impl EnsembleProblem {
    /// Validates qubit counts, ensemble sizes, and pairwise orthonormality
    /// of the initial states (tolerance `1e-12`).
    pub fn new(
        hamiltonian: PauliOperator,
        initial_states: Vec<Statevector>,
        circuit: AnsatzCircuit,
        weights: WeightScheme,
        penalty_operator: Option<PauliOperator>,
        penalty_strength: f64,
    ) -> Result<Self> {
        let qubit_count = circuit.qubit_count();
        if hamiltonian.qubit_count() != qubit_count {
            return Err(Error::QubitMismatch {
                left: hamiltonian.qubit_count(),
                right: qubit_count,
            });
        }
        if let Some(op) = &penalty_operator {
            if op.qubit_count() != qubit_count {
                return Err(Error::QubitMismatch { left: op.qubit_count(), right: qubit_count });
            }
        }
        if !(penalty_strength >= 0.0 && penalty_strength.is_finite()) {
            return Err(Error::Validation(format!(
                "penalty strength {penalty_strength} must be finite and non-negative"
            )));
        }
        if initial_states.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} initial states but {} weights",
                initial_states.len(),
                weights.len()
            )));
        }
        for (i, state) in initial_states.iter().enumerate() {
            if state.qubit_count() != qubit_count {
                return Err(Error::QubitMismatch {
                    left: state.qubit_count(),
                    right: qubit_count,
                });
            }
            for (j, other) in initial_states.iter().enumerate().take(i + 1) {
                let overlap = state.inner(other)?;
                let want = if i == j { 1.0 } else { 0.0 };
                if (overlap - Complex64::new(want, 0.0)).norm() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "initial states {i} and {j} are not orthonormal (overlap {overlap})"
                    )));
                }
            }
        }

        let effective_observable = match &penalty_operator {
            Some(op) if penalty_strength > 0.0 => {
                hamiltonian.add_scaled(op, penalty_strength)?
            }
            _ => hamiltonian.clone(),
        };

        Ok(Self {
            hamiltonian,
            initial_states,
            circuit,
            weights,
            penalty_operator,
            penalty_strength,
            effective_observable,
        })
    }

    /// The mapped Hamiltonian.
    pub fn hamiltonian(&self) -> &PauliOperator {
        &self.hamiltonian
    }

    /// The shared circuit.
    pub fn circuit(&self) -> &AnsatzCircuit {
        &self.circuit
    }

    /// The weight scheme of the cost.
    pub fn weights(&self) -> &WeightScheme {
        &self.weights
    }

    /// The ensemble's initial states.
    pub fn initial_states(&self) -> &[Statevector] {
        &self.initial_states
    }

    /// Ensemble size `K`.
    pub fn ensemble_size(&self) -> usize {
        self.initial_states.len()
    }

    /// `H + strength * penalty`, the observable whose weighted average is the
    /// cost.
    pub fn effective_observable(&self) -> &PauliOperator {
        &self.effective_observable
    }

    /// The circuit-evolved ensemble members.
    pub fn evolved_states(&self, params: &[f64]) -> Result<Vec<Statevector>> {
        self.initial_states.iter().map(|phi| self.circuit.apply(phi, params)).collect()
    }

    /// Evaluates cost, trace, and the per-state diagnostics.
    pub fn evaluate(&self, params: &[f64]) -> Result<EnsembleEvaluation> {
        let k = self.ensemble_size();
        let mut per_state_energies = Vec::with_capacity(k);
        let mut per_state_penalties = Vec::with_capacity(k);
        for phi in &self.initial_states {
            let psi = self.circuit.apply(phi, params)?;
            per_state_energies.push(psi.expectation(&self.hamiltonian)?);
            let penalty = match &self.penalty_operator {
                Some(op) => psi.expectation(op)?,
                None => 0.0,
            };
            per_state_penalties.push(penalty);
        }
        let weights = self.weights.values();
        let mut cost = 0.0;
        let mut penalty_value = 0.0;
        for j in 0..k {
            cost += weights[j] * per_state_energies[j];
            penalty_value += self.penalty_strength * weights[j] * per_state_penalties[j];
        }
        cost += penalty_value;
        let trace = per_state_energies.iter().sum::<f64>() / k as f64;
        Ok(EnsembleEvaluation { per_state_energies, per_state_penalties, cost, trace, penalty_value })
    }

    /// The `K x K` matrix `<Psi_a|H|Psi_b>` over the evolved members.
    pub fn subspace_matrix(&self, params: &[f64]) -> Result<DenseHermitian> {
        let evolved = self.evolved_states(params)?;
        let k = evolved.len();
        let mut data = vec![Complex64::new(0.0, 0.0); k * k];
        for a in 0..k {
            for b in 0..=a {
                let element = evolved[a].matrix_element(&self.hamiltonian, &evolved[b])?;
                data[a * k + b] = element;
                data[b * k + a] = element.conj();
            }
        }
        DenseHermitian::new(k, data)
    }

    /// Diagonalizes the subspace matrix: recovered energies ascending plus
    /// the orthonormal mixing matrix (eigenvectors over ensemble members).
    pub fn post_diagonalize(&self, params: &[f64]) -> Result<EigenDecomposition> {
        self.subspace_matrix(params)?.eigendecompose()
    }

    /// A copy whose initial states are premixed by a real `K x K` matrix
    /// (rows give the new states in terms of the old); the matrix must be
    /// orthogonal for the result to pass orthonormality validation.
    pub fn with_premixed_states(&self, mixing: &[Vec<f64>]) -> Result<EnsembleProblem> {
        let k = self.ensemble_size();
        if mixing.len() != k || mixing.iter().any(|row| row.len() != k) {
            return Err(Error::Validation(format!("mixing matrix must be {k} x {k}")));
        }
        let mut premixed = Vec::with_capacity(k);
        for row in mixing {
            let parts: Vec<(Complex64, &Statevector)> = row
                .iter()
                .zip(&self.initial_states)
                .map(|(&c, s)| (Complex64::new(c, 0.0), s))
                .collect();
            premixed.push(Statevector::linear_combination(&parts)?);
        }
        Self::new(
            self.hamiltonian.clone(),
            premixed,
            self.circuit.clone(),
            self.weights.clone(),
            self.penalty_operator.clone(),
            self.penalty_strength,
        )
    }

    /// A copy with two initial states swapped (weights unchanged).
    pub fn with_swapped_states(&self, a: usize, b: usize) -> Result<EnsembleProblem> {
        let k = self.ensemble_size();
        if a >= k || b >= k {
            return Err(Error::Validation(format!("swap indices ({a}, {b}) out of range {k}")));
        }
        let mut states = self.initial_states.clone();
        states.swap(a, b);
        Self::new(
            self.hamiltonian.clone(),
            states,
            self.circuit.clone(),
            self.weights.clone(),
            self.penalty_operator.clone(),
            self.penalty_strength,
        )
    }
}
