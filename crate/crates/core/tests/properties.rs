//! Property tests for the structural invariants: the Fan equality of the
//! equi-weighted cost, the generalized variational bounds, trace rotation
//! invariance, unitarity transport, adjoint/finite-difference gradient
//! agreement, eigensolver residuals, and Pauli round trips.

mod common;

use proptest::prelude::*;

use evqe_core::ansatz::{build_guccsd, InitialStateSpec};
use evqe_core::dense::DenseHermitian;
use evqe_core::ensemble::{EnsembleProblem, WeightScheme};
use evqe_core::fermion::{freeze_core, jordan_wigner, ActiveSpaceSpec, MolecularIntegrals};
use evqe_core::optimizer::{finite_difference_gradient, gradient};
use evqe_core::pauli::{Pauli, PauliOperator, PauliWord};

/// A fixed two-orbital Hamiltonian with open-shell structure.
fn fixture_hamiltonian() -> PauliOperator {
    let mut ints = MolecularIntegrals::new(2, 0.71).unwrap();
    ints.set_one_body(0, 0, -1.25).unwrap();
    ints.set_one_body(1, 1, -0.47).unwrap();
    ints.set_one_body(0, 1, 0.09).unwrap();
    ints.set_two_body(0, 0, 0, 0, 0.67).unwrap();
    ints.set_two_body(1, 1, 1, 1, 0.70).unwrap();
    ints.set_two_body(0, 0, 1, 1, 0.66).unwrap();
    ints.set_two_body(1, 0, 1, 0, 0.18).unwrap();
    let fc = freeze_core(&ints, &ActiveSpaceSpec::full(2, 2)).unwrap();
    jordan_wigner(&fc).unwrap()
}

fn fixture_problem(weights: WeightScheme) -> EnsembleProblem {
    let circuit = build_guccsd(2, 1).unwrap();
    let states = vec![
        InitialStateSpec::HartreeFock { electrons: 2 }.prepare(4).unwrap(),
        InitialStateSpec::OpenShellSingletCsf { electrons: 2, from_orbital: 0, to_orbital: 1 }
            .prepare(4)
            .unwrap(),
    ];
    EnsembleProblem::new(fixture_hamiltonian(), states, circuit, weights, None, 0.0).unwrap()
}

fn theta_strategy() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-0.6..0.6f64, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equi_cost_equals_trace_everywhere(theta in theta_strategy()) {
        let problem = fixture_problem(WeightScheme::equi(2).unwrap());
        let eval = problem.evaluate(&theta).unwrap();
        prop_assert!((eval.cost - eval.trace).abs() < 1e-12);
    }

    #[test]
    fn weighted_cost_stays_above_exact_bound(theta in theta_strategy()) {
        let problem = fixture_problem(WeightScheme::optimal(2).unwrap());
        let exact = problem.hamiltonian().to_dense().unwrap().eigenvalues().unwrap();
        let bound: f64 = problem
            .weights()
            .values()
            .iter()
            .zip(&exact)
            .map(|(w, e)| w * e)
            .sum();
        let eval = problem.evaluate(&theta).unwrap();
        prop_assert!(eval.cost >= bound - 1e-10);
    }

    #[test]
    fn trace_stays_above_subspace_average(theta in theta_strategy()) {
        let problem = fixture_problem(WeightScheme::equi(2).unwrap());
        let exact = problem.hamiltonian().to_dense().unwrap().eigenvalues().unwrap();
        let bound = (exact[0] + exact[1]) / 2.0;
        let eval = problem.evaluate(&theta).unwrap();
        prop_assert!(eval.trace >= bound - 1e-10);
    }

    #[test]
    fn trace_is_invariant_under_initial_state_rotation(
        theta in theta_strategy(),
        angle in -3.0..3.0f64,
    ) {
        let problem = fixture_problem(WeightScheme::equi(2).unwrap());
        let (c, s) = (angle.cos(), angle.sin());
        let mixed = problem.with_premixed_states(&[vec![c, s], vec![-s, c]]).unwrap();
        let plain = problem.evaluate(&theta).unwrap().trace;
        let rotated = mixed.evaluate(&theta).unwrap().trace;
        prop_assert!((plain - rotated).abs() < 1e-10);
    }

    #[test]
    fn circuit_application_preserves_norm(theta in theta_strategy()) {
        let problem = fixture_problem(WeightScheme::equi(2).unwrap());
        for state in problem.evolved_states(&theta).unwrap() {
            prop_assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_gradient_matches_finite_differences(theta in theta_strategy()) {
        let problem = fixture_problem(WeightScheme::optimal(2).unwrap());
        let adjoint = gradient(&problem, &theta).unwrap();
        let numeric = finite_difference_gradient(&problem, &theta, 1e-5).unwrap();
        let scale = numeric.iter().fold(1.0_f64, |m, g| m.max(g.abs()));
        for (a, n) in adjoint.iter().zip(&numeric) {
            prop_assert!((a - n).abs() / scale < 1e-6, "adjoint {} vs numeric {}", a, n);
        }
    }

    #[test]
    fn eigensolver_residuals_stay_small(
        seed_entries in proptest::collection::vec(-1.0..1.0f64, 100),
        dim in 2..10usize,
    ) {
        let mut data = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in 0..=r {
                let v = seed_entries[r * dim + c];
                data[r * dim + c] = v;
                data[c * dim + r] = v;
            }
        }
        let matrix = DenseHermitian::from_real(dim, data.clone()).unwrap();
        let decomposition = matrix.eigendecompose().unwrap();
        let scale = matrix.frobenius_norm().max(1.0);
        for (value, vector) in
            decomposition.eigenvalues.iter().zip(&decomposition.eigenvectors)
        {
            let mut residual = 0.0_f64;
            for r in 0..dim {
                let mut hv = num_complex::Complex64::new(0.0, 0.0);
                for c in 0..dim {
                    hv += matrix.entry(r, c) * vector[c];
                }
                residual += (hv - value * vector[r]).norm_sqr();
            }
            prop_assert!(residual.sqrt() <= 1e-10 * scale);
        }
    }

    #[test]
    fn pauli_projection_round_trips(
        coeffs in proptest::collection::vec(-2.0..2.0f64, 6),
        word_picks in proptest::collection::vec(0..256usize, 6),
        qubits in 1..4usize,
    ) {
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut terms = Vec::new();
        for (pick, coeff) in word_picks.iter().zip(&coeffs) {
            let mut ls = Vec::with_capacity(qubits);
            let mut code = *pick;
            for _ in 0..qubits {
                ls.push(letters[code % 4]);
                code /= 4;
            }
            terms.push((PauliWord::from_letters(ls).unwrap(), *coeff));
        }
        let op = PauliOperator::from_terms(qubits, terms).unwrap();
        let back = PauliOperator::from_dense(&op.to_dense().unwrap()).unwrap();
        for (word, coeff) in op.terms() {
            prop_assert!((back.coefficient(word) - coeff).abs() < 1e-12);
        }
        prop_assert_eq!(back.term_count(), op.term_count());
    }
}
