//! Parameterized circuits and initial-state preparation.
//!
//! Two ansatz families are provided. The disentangled generalized-UCCSD
//! circuit applies `prod_k exp(theta_k G_k)` with anti-Hermitian excitation
//! generators `G_k = t_k - t_k†`; each generator's Jordan-Wigner image
//! `-i sum_w c_w P_w` is applied word by word as `prod_w exp(-i theta c_w P_w)`
//! in a fixed lexicographic word order. The hardware-efficient alternative is
//! an initial `R_y` column followed by blocks of an `R_y` column and a linear
//! CNOT ladder (control `m`, target `m+1`):
//!
//! ```text
//! U = [prod_n (prod_m CNOT_{m,m+1}) (prod_m R_y,m(theta_m^n))] prod_m R_y,m(theta_m^0)
//! ```
//!
//! with the full-angle convention `R_y(theta) = exp(-i theta Y)`.

use crate::error::{Error, Result};
use crate::fermion::{enumerate_guccsd_generators, spin_orbital, Ladder};
use crate::occupation::apply_ladder_string;
use crate::pauli::{Pauli, PauliWord};
use crate::state::Statevector;

/// One multi-word rotation: `prod_w exp(-i theta c_w P_w)` over the stored
/// word order, sharing a single circuit parameter `theta`.
#[derive(Debug, Clone)]
pub struct RotationBundle {
    words: Vec<(PauliWord, f64)>,
}

impl RotationBundle {
    /// Validates that all words share a qubit count and none is trivial.
    pub fn new(words: Vec<(PauliWord, f64)>) -> Result<Self> {
        let Some(first) = words.first() else {
            return Err(Error::Validation("rotation bundle must be non-empty".into()));
        };
        let qubit_count = first.0.qubit_count();
        for (word, _) in &words {
            if word.qubit_count() != qubit_count {
                return Err(Error::QubitMismatch {
                    left: qubit_count,
                    right: word.qubit_count(),
                });
            }
        }
        Ok(Self { words })
    }

    /// Word/coefficient pairs in application order.
    pub fn words(&self) -> &[(PauliWord, f64)] {
        &self.words
    }
}

/// One circuit element: a parameterized rotation bundle or a fixed CNOT.
#[derive(Debug, Clone)]
pub enum Gate {
    Rotation { parameter: usize, bundle: RotationBundle },
    Cnot { control: usize, target: usize },
}

/// An immutable parameterized circuit.
#[derive(Debug, Clone)]
pub struct AnsatzCircuit {
    qubit_count: usize,
    parameter_count: usize,
    gates: Vec<Gate>,
}

impl AnsatzCircuit {
    /// Validates gate indices: rotation parameters must cover
    /// `0..parameter_count` densely, and all qubit references must be in
    /// range.
    pub fn new(qubit_count: usize, parameter_count: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut used = vec![false; parameter_count];
        for gate in &gates {
            match gate {
                Gate::Rotation { parameter, bundle } => {
                    if *parameter >= parameter_count {
                        return Err(Error::Validation(format!(
                            "parameter index {parameter} out of range ({parameter_count})"
                        )));
                    }
                    used[*parameter] = true;
                    for (word, _) in bundle.words() {
                        if word.qubit_count() != qubit_count {
                            return Err(Error::QubitMismatch {
                                left: qubit_count,
                                right: word.qubit_count(),
                            });
                        }
                    }
                }
                Gate::Cnot { control, target } => {
                    if *control >= qubit_count || *target >= qubit_count || control == target {
                        return Err(Error::Validation(format!(
                            "invalid CNOT ({control}, {target}) on {qubit_count} qubits"
                        )));
                    }
                }
            }
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::Validation(format!("parameter {missing} is never referenced")));
        }
        Ok(Self { qubit_count, parameter_count, gates })
    }

    /// Number of qubits the circuit acts on.
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Number of independent real parameters.
    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    /// Gates in application order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Applies the circuit to a start state.
    pub fn apply(&self, start: &Statevector, params: &[f64]) -> Result<Statevector> {
        if params.len() != self.parameter_count {
            return Err(Error::Validation(format!(
                "expected {} parameters, got {}",
                self.parameter_count,
                params.len()
            )));
        }
        if start.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch {
                left: self.qubit_count,
                right: start.qubit_count(),
            });
        }
        let mut state = start.clone();
        for gate in &self.gates {
            apply_gate(&mut state, gate, params)?;
        }
        Ok(state)
    }
}

/// Applies one gate in place; shared with the adjoint differentiation code.
pub(crate) fn apply_gate(state: &mut Statevector, gate: &Gate, params: &[f64]) -> Result<()> {
    match gate {
        Gate::Rotation { parameter, bundle } => {
            let theta = params[*parameter];
            for (word, coeff) in bundle.words() {
                state.rotate_in_place(word, theta * coeff)?;
            }
        }
        Gate::Cnot { control, target } => state.cnot_in_place(*control, *target)?,
    }
    Ok(())
}

/// Disentangled generalized-UCCSD circuit with `repetitions` independent
/// parameter blocks over `active_orbitals` spatial orbitals.
pub fn build_guccsd(active_orbitals: usize, repetitions: usize) -> Result<AnsatzCircuit> {
    if repetitions == 0 {
        return Err(Error::Validation("need at least one repetition".into()));
    }
    let qubit_count = 2 * active_orbitals;
    let generators = enumerate_guccsd_generators(active_orbitals)?;
    let mut bundles = Vec::with_capacity(generators.len());
    for generator in &generators {
        bundles.push(RotationBundle::new(generator.jw_rotation_coefficients(qubit_count)?)?);
    }
    let block = bundles.len();
    let mut gates = Vec::with_capacity(repetitions * block);
    for rep in 0..repetitions {
        for (k, bundle) in bundles.iter().enumerate() {
            gates.push(Gate::Rotation { parameter: rep * block + k, bundle: bundle.clone() });
        }
    }
    AnsatzCircuit::new(qubit_count, repetitions * block, gates)
}

/// Hardware-efficient ansatz: an initial `R_y` column, then `layers` blocks
/// of an `R_y` column followed by the ascending linear CNOT ladder.
pub fn build_rycnot(qubit_count: usize, layers: usize) -> Result<AnsatzCircuit> {
    if qubit_count == 0 {
        return Err(Error::Validation("circuit needs at least one qubit".into()));
    }
    let mut gates = Vec::new();
    let ry_column = |gates: &mut Vec<Gate>, column: usize| -> Result<()> {
        for m in 0..qubit_count {
            let word = PauliWord::single(qubit_count, m, Pauli::Y)?;
            gates.push(Gate::Rotation {
                parameter: column * qubit_count + m,
                bundle: RotationBundle::new(vec![(word, 1.0)])?,
            });
        }
        Ok(())
    };
    ry_column(&mut gates, 0)?;
    for layer in 1..=layers {
        for m in 0..qubit_count.saturating_sub(1) {
            gates.push(Gate::Cnot { control: m, target: m + 1 });
        }
        ry_column(&mut gates, layer)?;
    }
    AnsatzCircuit::new(qubit_count, qubit_count * (layers + 1), gates)
}

/// Recipe for an initial state of the ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialStateSpec {
    /// A single computational basis state by amplitude index.
    BasisState(usize),
    /// Lowest `electrons` spin-orbitals occupied (interleaved convention).
    HartreeFock { electrons: usize },
    /// Two-determinant open-shell singlet: the normalized singlet excitation
    /// `from_orbital -> to_orbital` (spatial indices) applied to the
    /// closed-shell reference with `electrons` electrons.
    OpenShellSingletCsf { electrons: usize, from_orbital: usize, to_orbital: usize },
}

/// Parses a qubit-0-first occupation string like `"111100"` into a basis
/// state index (here: 15).
pub fn parse_occupation_bitstring(text: &str) -> Result<usize> {
    if text.is_empty() || text.len() > 63 {
        return Err(Error::Validation(format!("bad occupation string {text:?}")));
    }
    let mut index = 0usize;
    for (qubit, ch) in text.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => index |= 1 << qubit,
            other => {
                return Err(Error::Validation(format!(
                    "occupation strings are 0/1 only, found {other:?}"
                )))
            }
        }
    }
    Ok(index)
}

impl InitialStateSpec {
    /// Materializes the state on `qubit_count` qubits.
    pub fn prepare(&self, qubit_count: usize) -> Result<Statevector> {
        match *self {
            InitialStateSpec::BasisState(index) => Statevector::basis_state(qubit_count, index),
            InitialStateSpec::HartreeFock { electrons } => {
                if electrons > qubit_count {
                    return Err(Error::Validation(format!(
                        "{electrons} electrons exceed {qubit_count} spin-orbitals"
                    )));
                }
                let index = if electrons == 0 { 0 } else { (1usize << electrons) - 1 };
                Statevector::basis_state(qubit_count, index)
            }
            InitialStateSpec::OpenShellSingletCsf { electrons, from_orbital, to_orbital } => {
                if electrons % 2 != 0 || electrons == 0 {
                    return Err(Error::Validation(
                        "singlet excitation needs a closed-shell (even) reference".into(),
                    ));
                }
                if electrons > qubit_count {
                    return Err(Error::Validation(format!(
                        "{electrons} electrons exceed {qubit_count} spin-orbitals"
                    )));
                }
                let occupied_spatial = electrons / 2;
                if from_orbital >= occupied_spatial {
                    return Err(Error::Validation(format!(
                        "orbital {from_orbital} is not doubly occupied in the reference"
                    )));
                }
                if to_orbital < occupied_spatial || 2 * to_orbital + 1 >= qubit_count {
                    return Err(Error::Validation(format!(
                        "orbital {to_orbital} is not virtual in the reference"
                    )));
                }
                let reference = (1usize << electrons) - 1;
                // (1/sqrt(2)) (a+_{t,up} a_{f,up} + a+_{t,dn} a_{f,dn}) |ref>:
                // the ladder algebra supplies the determinant signs that make
                // the combination a singlet.
                let mut parts = Vec::new();
                let mut states = Vec::new();
                for spin in 0..2 {
                    let ops = [
                        Ladder::Create(spin_orbital(to_orbital, spin)),
                        Ladder::Annihilate(spin_orbital(from_orbital, spin)),
                    ];
                    let (det, sign) = apply_ladder_string(reference, &ops)
                        .expect("excitation acts on an occupied -> empty pair");
                    states.push((det, sign));
                }
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                let built: Vec<Statevector> = states
                    .iter()
                    .map(|&(det, _)| Statevector::basis_state(qubit_count, det))
                    .collect::<Result<_>>()?;
                for ((_, sign), state) in states.iter().zip(&built) {
                    parts.push((num_complex::Complex64::new(sign * inv_sqrt2, 0.0), state));
                }
                Statevector::linear_combination(&parts)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::s_squared_operator;

    #[test]
    fn rycnot_shapes_and_zero_parameters() {
        let circuit = build_rycnot(4, 10).unwrap();
        assert_eq!(circuit.parameter_count(), 44);
        assert_eq!(circuit.qubit_count(), 4);

        let start = Statevector::basis_state(4, 0).unwrap();
        let out = circuit.apply(&start, &vec![0.0; 44]).unwrap();
        for (a, b) in out.amplitudes().iter().zip(start.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn rycnot_two_qubit_hand_computation() {
        // M=2, N_L=1: the gate sequence is R(theta^0), CNOT(0 -> 1),
        // R(theta^1) — rotation columns bracket every entangling ladder.
        let circuit = build_rycnot(2, 1).unwrap();
        assert_eq!(circuit.parameter_count(), 4);

        let start = Statevector::basis_state(2, 0).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        let out = circuit.apply(&start, &[half_pi, half_pi, 0.0, 0.0]).unwrap();
        let expected = [0.0, 1.0, 0.0, 0.0];
        for (amp, want) in out.amplitudes().iter().zip(expected) {
            assert!((amp.re - want).abs() < 1e-12 && amp.im.abs() < 1e-12);
        }

        // theta^0 = (a, 0), theta^1 = (0, b): Ry(a) on qubit 0 gives
        // cos a |00> + sin a |01> (qubit-0-first indices 0 and 1); the CNOT
        // maps index 1 to 3; Ry(b) on qubit 1 then mixes 0<->2 and 3<->1.
        let a = std::f64::consts::FRAC_PI_6;
        let b = 0.4_f64;
        let (ca, sa, cb, sb) = (a.cos(), a.sin(), b.cos(), b.sin());
        let out = circuit.apply(&start, &[a, 0.0, 0.0, b]).unwrap();
        let expected = [ca * cb, -sa * sb, ca * sb, sa * cb];
        for (amp, want) in out.amplitudes().iter().zip(expected) {
            assert!((amp.re - want).abs() < 1e-12 && amp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn guccsd_parameter_counts_and_identity() {
        // Two spatial orbitals: 8 generators per repetition.
        let one_rep = build_guccsd(2, 1).unwrap();
        assert_eq!(one_rep.parameter_count(), 8);
        let two_rep = build_guccsd(2, 2).unwrap();
        assert_eq!(two_rep.parameter_count(), 16);

        let hf = InitialStateSpec::HartreeFock { electrons: 2 }.prepare(4).unwrap();
        let out = one_rep.apply(&hf, &vec![0.0; 8]).unwrap();
        for (a, b) in out.amplitudes().iter().zip(hf.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn guccsd_second_block_at_zero_reduces_to_one_repetition() {
        let one_rep = build_guccsd(2, 1).unwrap();
        let two_rep = build_guccsd(2, 2).unwrap();
        let hf = InitialStateSpec::HartreeFock { electrons: 2 }.prepare(4).unwrap();

        let theta: Vec<f64> = (0..8).map(|k| 0.1 + 0.03 * k as f64).collect();
        let mut padded = theta.clone();
        padded.extend(std::iter::repeat(0.0).take(8));

        let a = one_rep.apply(&hf, &theta).unwrap();
        let b = two_rep.apply(&hf, &padded).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn circuits_preserve_inner_products() {
        let circuit = build_guccsd(2, 1).unwrap();
        let theta: Vec<f64> = (0..8).map(|k| (-0.2_f64).powi(k as i32 % 3 + 1)).collect();
        let u = InitialStateSpec::HartreeFock { electrons: 2 }.prepare(4).unwrap();
        let v = InitialStateSpec::OpenShellSingletCsf {
            electrons: 2,
            from_orbital: 0,
            to_orbital: 1,
        }
        .prepare(4)
        .unwrap();
        let before = u.inner(&v).unwrap();
        let after = circuit.apply(&u, &theta).unwrap().inner(&circuit.apply(&v, &theta).unwrap()).unwrap();
        assert!((before - after).norm() < 1e-12);
        assert!((circuit.apply(&u, &theta).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hartree_fock_occupies_lowest_spin_orbitals() {
        let state = InitialStateSpec::HartreeFock { electrons: 4 }.prepare(6).unwrap();
        for (i, amp) in state.amplitudes().iter().enumerate() {
            let want = if i == 15 { 1.0 } else { 0.0 };
            assert!((amp.re - want).abs() < 1e-15 && amp.im.abs() < 1e-15);
        }
        assert_eq!(parse_occupation_bitstring("111100").unwrap(), 15);
        assert_eq!(parse_occupation_bitstring("01").unwrap(), 2);
        assert!(parse_occupation_bitstring("012").is_err());
    }

    #[test]
    fn singlet_excitation_has_zero_total_spin() {
        // 4 electrons over 3 spatial orbitals, excitation 1 -> 2.
        let csf = InitialStateSpec::OpenShellSingletCsf {
            electrons: 4,
            from_orbital: 1,
            to_orbital: 2,
        }
        .prepare(6)
        .unwrap();
        let s2 = s_squared_operator(3).unwrap();
        assert!(csf.expectation(&s2).unwrap().abs() < 1e-12);
        // Two determinants, equal weight.
        let nonzero: Vec<usize> = csf
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero.len(), 2);

        // Exciting from a non-occupied or into a non-virtual orbital fails.
        let bad = InitialStateSpec::OpenShellSingletCsf {
            electrons: 4,
            from_orbital: 2,
            to_orbital: 2,
        };
        assert!(bad.prepare(6).is_err());
    }

    #[test]
    fn circuit_validation_rejects_sparse_parameters() {
        let word = PauliWord::single(2, 0, Pauli::Y).unwrap();
        let bundle = RotationBundle::new(vec![(word, 1.0)]).unwrap();
        // Parameter 1 of 2 never referenced.
        let gates = vec![Gate::Rotation { parameter: 0, bundle }];
        assert!(AnsatzCircuit::new(2, 2, gates).is_err());

        let gates = vec![Gate::Cnot { control: 0, target: 0 }];
        assert!(AnsatzCircuit::new(2, 0, gates).is_err());
    }
}
