//! Dense statevector simulation.
//!
//! Amplitudes are indexed so that qubit 0 is the least significant bit of the
//! basis-state index. Rotations use the anti-Hermitian convention
//! `exp(theta * A)` with `A = -i P` for a Pauli word `P`, i.e.
//! `exp(-i * theta * P) |psi> = cos(theta) |psi> - i sin(theta) P |psi>`,
//! which sends `|0>` to `cos(theta)|0> + sin(theta)|1>` for `P = Y`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliOperator, PauliWord};

/// Hard cap on register width for dense simulation (16 MiB of amplitudes).
pub const MAX_STATE_QUBITS: usize = 24;

/// A normalized dense state over `2^M` basis amplitudes.
#[derive(Debug, Clone)]
pub struct Statevector {
    qubit_count: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The computational basis state `|index>`.
    pub fn basis_state(qubit_count: usize, index: usize) -> Result<Self> {
        check_width(qubit_count)?;
        let dim = 1usize << qubit_count;
        if index >= dim {
            return Err(Error::Validation(format!(
                "basis index {index} out of range for {qubit_count} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { qubit_count, amps })
    }

    /// Builds a state from dense amplitudes, requiring unit norm within 1e-12.
    pub fn from_amplitudes(qubit_count: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_width(qubit_count)?;
        if amps.len() != 1usize << qubit_count {
            return Err(Error::Validation(format!(
                "amplitude count {} does not match {qubit_count} qubits",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "state norm {norm} deviates from 1 beyond 1e-12"
            )));
        }
        Ok(Self { qubit_count, amps })
    }

    /// Normalized linear combination of states on the same register.
    pub fn linear_combination(parts: &[(Complex64, &Statevector)]) -> Result<Self> {
        let qubit_count = parts
            .first()
            .map(|(_, s)| s.qubit_count)
            .ok_or_else(|| Error::Validation("empty linear combination".into()))?;
        let dim = 1usize << qubit_count;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (coeff, state) in parts {
            if state.qubit_count != qubit_count {
                return Err(Error::QubitMismatch { left: qubit_count, right: state.qubit_count });
            }
            for (a, b) in amps.iter_mut().zip(&state.amps) {
                *a += coeff * b;
            }
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            return Err(Error::Validation("linear combination has zero norm".into()));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(Self { qubit_count, amps })
    }

    /// Number of qubits.
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Dense amplitudes, basis index order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm (1 for valid states, up to float drift).
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self | other>`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: other.qubit_count });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies a Pauli word: `P |psi>`.
    pub fn apply_pauli_word(&self, word: &PauliWord) -> Result<Statevector> {
        if word.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: word.qubit_count() });
        }
        let action = word.action();
        let flip = action.flip as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (col, amp) in self.amps.iter().enumerate() {
            out[col ^ flip] = action.phase(col as u64) * amp;
        }
        Ok(Statevector { qubit_count: self.qubit_count, amps: out })
    }

    /// Applies the rotation `exp(-i * angle * P)` (norm preserving).
    pub fn apply_pauli_rotation(&self, word: &PauliWord, angle: f64) -> Result<Statevector> {
        let mut out = self.clone();
        out.rotate_in_place(word, angle)?;
        Ok(out)
    }

    /// In-place version of [`Statevector::apply_pauli_rotation`].
    pub fn rotate_in_place(&mut self, word: &PauliWord, angle: f64) -> Result<()> {
        if word.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: word.qubit_count() });
        }
        let action = word.action();
        let flip = action.flip as usize;
        let (cos, sin) = (angle.cos(), angle.sin());
        let minus_i_sin = Complex64::new(0.0, -sin);
        if flip == 0 {
            // Diagonal word: phase(col) is +1 or -1.
            for (col, amp) in self.amps.iter_mut().enumerate() {
                let phase = action.phase(col as u64);
                *amp *= Complex64::new(cos, 0.0) + minus_i_sin * phase;
            }
        } else {
            for col in 0..self.amps.len() {
                let partner = col ^ flip;
                if partner < col {
                    continue;
                }
                let a = self.amps[col];
                let b = self.amps[partner];
                let phase_col = action.phase(col as u64);
                let phase_partner = action.phase(partner as u64);
                self.amps[col] = cos * a + minus_i_sin * phase_partner * b;
                self.amps[partner] = cos * b + minus_i_sin * phase_col * a;
            }
        }
        Ok(())
    }

    /// Applies a CNOT gate (in place): flips `target` where `control` is set.
    pub fn cnot_in_place(&mut self, control: usize, target: usize) -> Result<()> {
        if control >= self.qubit_count || target >= self.qubit_count || control == target {
            return Err(Error::Validation(format!(
                "invalid CNOT pair ({control}, {target}) on {} qubits",
                self.qubit_count
            )));
        }
        let control_mask = 1usize << control;
        let target_mask = 1usize << target;
        for col in 0..self.amps.len() {
            if col & control_mask != 0 && col & target_mask == 0 {
                self.amps.swap(col, col | target_mask);
            }
        }
        Ok(())
    }

    /// Applies a Hermitian operator: `O |psi>` (not normalized).
    pub fn apply_operator(&self, op: &PauliOperator) -> Result<Statevector> {
        if op.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: op.qubit_count() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (word, coeff) in op.terms() {
            let action = word.action();
            let flip = action.flip as usize;
            for (col, amp) in self.amps.iter().enumerate() {
                out[col ^ flip] += coeff * action.phase(col as u64) * amp;
            }
        }
        Ok(Statevector { qubit_count: self.qubit_count, amps: out })
    }

    /// Expectation value `<psi| O |psi>` of a Hermitian operator (real).
    pub fn expectation(&self, op: &PauliOperator) -> Result<f64> {
        if op.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: op.qubit_count() });
        }
        let mut total = 0.0_f64;
        for (word, coeff) in op.terms() {
            total += coeff * self.pauli_inner(word, self).re;
        }
        Ok(total)
    }

    /// Matrix element `<self| O |other>` of a Hermitian operator.
    pub fn matrix_element(&self, op: &PauliOperator, other: &Statevector) -> Result<Complex64> {
        if op.qubit_count() != self.qubit_count || other.qubit_count != self.qubit_count {
            return Err(Error::QubitMismatch {
                left: self.qubit_count,
                right: op.qubit_count().max(other.qubit_count),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (word, coeff) in op.terms() {
            total += coeff * self.pauli_inner(word, other);
        }
        Ok(total)
    }

    /// `<self | P | other>` for a single word (register sizes already checked).
    pub(crate) fn pauli_inner(&self, word: &PauliWord, other: &Statevector) -> Complex64 {
        let action = word.action();
        let flip = action.flip as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, amp) in other.amps.iter().enumerate() {
            acc += self.amps[col ^ flip].conj() * action.phase(col as u64) * amp;
        }
        acc
    }
}

fn check_width(qubit_count: usize) -> Result<()> {
    if qubit_count == 0 || qubit_count > MAX_STATE_QUBITS {
        return Err(Error::SizeLimit(format!(
            "statevector supports 1..={MAX_STATE_QUBITS} qubits (got {qubit_count})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn word(s: &str) -> PauliWord {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => panic!("bad letter"),
            })
            .collect();
        PauliWord::from_letters(letters).unwrap()
    }

    #[test]
    fn basis_state_has_one_amplitude() {
        let s = Statevector::basis_state(3, 5).unwrap();
        assert_eq!(s.amplitudes()[5], Complex64::new(1.0, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(Statevector::basis_state(3, 8).is_err());
    }

    #[test]
    fn pauli_word_application_matches_hand_results() {
        // X|0> = |1>, Y|0> = i|1>, Z|1> = -|1>.
        let zero = Statevector::basis_state(1, 0).unwrap();
        let one = Statevector::basis_state(1, 1).unwrap();

        let x = zero.apply_pauli_word(&word("X")).unwrap();
        assert_eq!(x.amplitudes()[1], Complex64::new(1.0, 0.0));

        let y = zero.apply_pauli_word(&word("Y")).unwrap();
        assert_eq!(y.amplitudes()[1], Complex64::new(0.0, 1.0));

        let z = one.apply_pauli_word(&word("Z")).unwrap();
        assert_eq!(z.amplitudes()[1], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn y_rotation_rotates_zero_toward_one() {
        // exp(-i theta Y)|0> = cos(theta)|0> + sin(theta)|1>.
        let zero = Statevector::basis_state(1, 0).unwrap();
        let theta = 0.37;
        let rotated = zero.apply_pauli_rotation(&word("Y"), theta).unwrap();
        assert!((rotated.amplitudes()[0] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((rotated.amplitudes()[1] - Complex64::new(theta.sin(), 0.0)).norm() < 1e-15);
        assert!((rotated.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotations_preserve_norm_and_compose() {
        // Two quarter turns equal one half turn for the same generator.
        let start = Statevector::from_amplitudes(
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(-0.5, 0.0),
                Complex64::new(0.0, -0.5),
            ],
        )
        .unwrap();
        let w = word("XY");
        let quarter = 0.3;
        let twice = start
            .apply_pauli_rotation(&w, quarter)
            .unwrap()
            .apply_pauli_rotation(&w, quarter)
            .unwrap();
        let once = start.apply_pauli_rotation(&w, 2.0 * quarter).unwrap();
        for (a, b) in twice.amplitudes().iter().zip(once.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!((twice.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_rotation_is_a_phase() {
        // exp(-i theta Z)|1> = e^{i theta}|1>.
        let one = Statevector::basis_state(1, 1).unwrap();
        let theta = 0.81;
        let rotated = one.apply_pauli_rotation(&word("Z"), theta).unwrap();
        let expected = Complex64::new(theta.cos(), theta.sin());
        assert!((rotated.amplitudes()[1] - expected).norm() < 1e-15);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // |q1 q0> = |01> (control q0 set): target q1 flips -> |11>.
        let mut s = Statevector::basis_state(2, 0b01).unwrap();
        s.cnot_in_place(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0b11], Complex64::new(1.0, 0.0));

        // Control clear: nothing happens.
        let mut s = Statevector::basis_state(2, 0b10).unwrap();
        s.cnot_in_place(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0b10], Complex64::new(1.0, 0.0));

        assert!(Statevector::basis_state(2, 0).unwrap().cnot_in_place(0, 0).is_err());
    }

    #[test]
    fn expectation_matches_known_values() {
        // <0|Z|0> = 1, <1|Z|1> = -1, <+|X|+> = 1.
        let z = PauliOperator::from_terms(1, [(word("Z"), 1.0)]).unwrap();
        let x = PauliOperator::from_terms(1, [(word("X"), 1.0)]).unwrap();
        let zero = Statevector::basis_state(1, 0).unwrap();
        let one = Statevector::basis_state(1, 1).unwrap();
        let plus = Statevector::from_amplitudes(
            1,
            vec![
                Complex64::new(0.5_f64.sqrt(), 0.0),
                Complex64::new(0.5_f64.sqrt(), 0.0),
            ],
        )
        .unwrap();
        assert!((zero.expectation(&z).unwrap() - 1.0).abs() < 1e-15);
        assert!((one.expectation(&z).unwrap() + 1.0).abs() < 1e-15);
        assert!((plus.expectation(&x).unwrap() - 1.0).abs() < 1e-15);
        assert!(plus.expectation(&z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn matrix_element_is_conjugate_symmetric() {
        let op = PauliOperator::from_terms(
            2,
            [(word("XZ"), 0.7), (word("YI"), -0.3), (word("ZZ"), 1.1)],
        )
        .unwrap();
        let a = Statevector::from_amplitudes(
            2,
            vec![
                Complex64::new(0.5, 0.5),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let b = Statevector::basis_state(2, 2).unwrap();
        let ab = a.matrix_element(&op, &b).unwrap();
        let ba = b.matrix_element(&op, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);

        // Diagonal elements agree with expectation.
        let aa = a.matrix_element(&op, &a).unwrap();
        assert!((aa.re - a.expectation(&op).unwrap()).abs() < 1e-14);
        assert!(aa.im.abs() < 1e-14);
    }

    #[test]
    fn apply_operator_matches_dense_action() {
        let op = PauliOperator::from_terms(2, [(word("XY"), 0.4), (word("IZ"), -1.2)]).unwrap();
        let dense = op.to_dense().unwrap();
        let raw = [
            Complex64::new(0.1, 0.2),
            Complex64::new(0.3, -0.1),
            Complex64::new(-0.5, 0.4),
            Complex64::new(0.2, 0.6),
        ];
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let s =
            Statevector::from_amplitudes(2, raw.iter().map(|z| z / norm).collect()).unwrap();
        let applied = s.apply_operator(&op).unwrap();
        let expected = dense.apply(s.amplitudes());
        for (a, b) in applied.amplitudes().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
