//! Built-in synthetic two-state problem family on six qubits.
//!
//! The family prescribes a spectrum directly.  Two orthonormal reference
//! determinant states — the closed-shell reference `|Phi_A>` and the
//! open-shell singlet `|Phi_B>` (excitation 1 -> 2 on three spatial
//! orbitals, four electrons) — are pushed through a fixed one-repetition
//! excitation circuit at frozen reference parameters `theta*`, giving an
//! orthonormal pair `a, b`.  With mixing angle `g = alpha_degrees * pi/360`
//! the target eigenstates are
//!
//! `u0 = cos(g) a + sin(g) b`,  `u1 = -sin(g) a + cos(g) b`,
//!
//! and the Hamiltonian is
//!
//! `H = E_rest I + (E0 - E_rest)|u0><u0| + (E1 - E_rest)|u1><u1|`
//!
//! with `E0 < E1 < E_rest`.  The span of the two lowest eigenstates is
//! therefore reachable exactly by the same one-repetition circuit at
//! `theta*`, while the overlaps `|<a|u0>|^2 = cos^2 g` and
//! `|<b|u0>|^2 = sin^2 g` cross at `alpha = 90` degrees: below the crossing
//! the first reference state resembles the ground state, above it the
//! ordering is reversed.  At `alpha = 180` the reversal is total, which
//! makes `theta*` a stationary point of any weighted ensemble cost with the
//! state-to-weight assignment exactly wrong.

use evqe_core::ansatz::{build_guccsd, AnsatzCircuit, InitialStateSpec};
use evqe_core::dense::DenseHermitian;
use evqe_core::pauli::PauliOperator;
use evqe_core::state::Statevector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};

/// Qubits carried by every family instance.
pub const FAMILY_QUBITS: usize = 6;
/// Spatial orbitals behind the reference determinants.
pub const FAMILY_ORBITALS: usize = 3;
/// Electrons in both reference states.
pub const FAMILY_ELECTRONS: usize = 4;
/// Exact ground energy of every instance.
pub const FAMILY_GROUND_ENERGY: f64 = -1.25;
/// Exact first excited energy of every instance.
pub const FAMILY_EXCITED_ENERGY: f64 = -0.75;
/// Default energy of the 62-fold degenerate rest of the spectrum.
pub const FAMILY_DEFAULT_REST_ENERGY: f64 = 0.5;

/// Seed and half-width of the frozen reference parameters.
const REFERENCE_SEED: u64 = 0x00C0_FFEE;
const REFERENCE_HALF_WIDTH: f64 = 0.2;

/// One member of the family, ready for ensemble construction.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub hamiltonian: PauliOperator,
    pub ground_energy: f64,
    pub excited_energy: f64,
    pub rest_energy: f64,
    /// Mixing angle `g` in radians.
    pub mixing_angle: f64,
    /// Parameters at which the reference circuit spans the target subspace.
    pub reference_parameters: Vec<f64>,
    pub ground_state: Statevector,
    pub excited_state: Statevector,
}

/// The one-repetition excitation circuit shared by the whole family.
pub fn reference_circuit() -> Result<AnsatzCircuit> {
    Ok(build_guccsd(FAMILY_ORBITALS, 1)?)
}

/// Frozen reference parameters `theta*`.
pub fn reference_parameters(parameter_count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(REFERENCE_SEED);
    (0..parameter_count)
        .map(|_| rng.gen_range(-REFERENCE_HALF_WIDTH..REFERENCE_HALF_WIDTH))
        .collect()
}

/// The orthonormal reference determinant pair `(|Phi_A>, |Phi_B>)`.
pub fn initial_state_pair() -> Result<(Statevector, Statevector)> {
    let phi_a = InitialStateSpec::HartreeFock {
        electrons: FAMILY_ELECTRONS,
    }
    .prepare(FAMILY_QUBITS)?;
    let phi_b = InitialStateSpec::OpenShellSingletCsf {
        electrons: FAMILY_ELECTRONS,
        from_orbital: 1,
        to_orbital: 2,
    }
    .prepare(FAMILY_QUBITS)?;
    Ok((phi_a, phi_b))
}

/// Builds the instance at `alpha_degrees` with the given rest energy.
pub fn family_instance(alpha_degrees: f64, rest_energy: f64) -> Result<FamilyInstance> {
    if !alpha_degrees.is_finite() {
        return Err(HarnessError::Config(format!(
            "family angle {alpha_degrees} must be finite"
        )));
    }
    if !rest_energy.is_finite() || rest_energy <= FAMILY_EXCITED_ENERGY {
        return Err(HarnessError::Config(format!(
            "rest energy {rest_energy} must exceed the excited energy {FAMILY_EXCITED_ENERGY}"
        )));
    }

    let circuit = reference_circuit()?;
    let theta = reference_parameters(circuit.parameter_count());
    let (phi_a, phi_b) = initial_state_pair()?;
    let a = circuit.apply(&phi_a, &theta)?;
    let b = circuit.apply(&phi_b, &theta)?;

    let g = alpha_degrees.to_radians() / 2.0;
    let (cos_g, sin_g) = (g.cos(), g.sin());
    let one = Complex64::new(1.0, 0.0);
    let u0 = Statevector::linear_combination(&[(cos_g * one, &a), (sin_g * one, &b)])?;
    let u1 = Statevector::linear_combination(&[(-sin_g * one, &a), (cos_g * one, &b)])?;

    let dim = 1 << FAMILY_QUBITS;
    let mut data = vec![0.0f64; dim * dim];
    let real_amplitudes = |state: &Statevector| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(dim);
        for amp in state.amplitudes() {
            if amp.im.abs() > 1e-12 {
                return Err(HarnessError::Numerical(
                    "family construction produced a complex amplitude".into(),
                ));
            }
            out.push(amp.re);
        }
        Ok(out)
    };
    let v0 = real_amplitudes(&u0)?;
    let v1 = real_amplitudes(&u1)?;
    for r in 0..dim {
        for c in 0..dim {
            let mut entry = (FAMILY_GROUND_ENERGY - rest_energy) * v0[r] * v0[c]
                + (FAMILY_EXCITED_ENERGY - rest_energy) * v1[r] * v1[c];
            if r == c {
                entry += rest_energy;
            }
            data[r * dim + c] = entry;
        }
    }
    let dense = DenseHermitian::from_real(dim, data)?;
    let hamiltonian = PauliOperator::from_dense(&dense)?;

    Ok(FamilyInstance {
        hamiltonian,
        ground_energy: FAMILY_GROUND_ENERGY,
        excited_energy: FAMILY_EXCITED_ENERGY,
        rest_energy,
        mixing_angle: g,
        reference_parameters: theta,
        ground_state: u0,
        excited_state: u1,
    })
}
