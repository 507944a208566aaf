//! Gradients and limited-memory quasi-Newton minimization.
//!
//! The ensemble cost gradient is computed by an adjoint backward sweep: with
//! `psi = U(theta) phi` and `lambda = O psi`, each word rotation
//! `exp(-i theta c P)` contributes `2 c Im <lambda|P|psi>` to its parameter,
//! after which the word is peeled off both vectors. The sweep is exact (no
//! Trotter or commutativity assumptions) and costs about two circuit
//! applications per ensemble member.
//!
//! Minimization is L-BFGS with the standard two-loop recursion, Armijo
//! backtracking, and a curvature guard on history updates; a non-descent
//! direction resets the history to steepest descent. Iteration records start
//! at the initial point (iteration 0) so convergence curves include the
//! starting cost.

use crate::ansatz::Gate;
use crate::ensemble::{EnsembleEvaluation, EnsembleProblem};
use crate::error::{Error, Result};
use crate::state::Statevector;

/// L-BFGS and line-search knobs.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// History length of the two-loop recursion.
    pub memory: usize,
    /// Terminate when the gradient infinity-norm drops below this.
    pub gradient_tolerance: f64,
    /// Iteration budget (accepted steps).
    pub max_iterations: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo_c1: f64,
    /// Backtracking shrink factor in (0, 1).
    pub shrink: f64,
    /// Maximum backtracking steps per line search.
    pub max_backtracks: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            memory: 10,
            gradient_tolerance: 1e-8,
            max_iterations: 1000,
            armijo_c1: 1e-4,
            shrink: 0.5,
            max_backtracks: 50,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.memory == 0 {
            return Err(Error::Validation("history length must be >= 1".into()));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(Error::Validation("gradient tolerance must be positive".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::Validation("shrink factor must lie in (0, 1)".into()));
        }
        if !(self.armijo_c1 > 0.0 && self.armijo_c1 < 1.0) {
            return Err(Error::Validation("Armijo constant must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Why the minimizer stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationStatus {
    GradientConverged,
    MaxIterations,
    LineSearchFailure,
}

/// One accepted point of a generic minimization run.
#[derive(Debug, Clone)]
pub struct GenericIteration<Aux> {
    pub iteration: usize,
    pub value: f64,
    pub gradient_norm: f64,
    pub aux: Aux,
}

/// Outcome of a generic minimization run.
#[derive(Debug, Clone)]
pub struct MinimizeOutcome<Aux> {
    pub params: Vec<f64>,
    pub status: TerminationStatus,
    pub iterations: Vec<GenericIteration<Aux>>,
}

/// One accepted point of an ensemble minimization.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    pub cost: f64,
    pub trace: f64,
    pub per_state_energies: Vec<f64>,
    pub gradient_norm: f64,
}

/// Convergence curve plus terminal status.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub iterations: Vec<IterationRecord>,
    pub status: TerminationStatus,
}

impl ConvergenceRecord {
    /// The last accepted point.
    pub fn last(&self) -> &IterationRecord {
        self.iterations.last().expect("records always include iteration 0")
    }
}

fn infinity_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Adjoint gradient of one state's `<phi|U† O U|phi>` contribution.
fn state_gradient(
    problem: &EnsembleProblem,
    phi: &Statevector,
    params: &[f64],
    grad: &mut [f64],
    weight: f64,
) -> Result<()> {
    let circuit = problem.circuit();
    let mut psi = circuit.apply(phi, params)?;
    let mut lambda = psi.apply_operator(problem.effective_observable())?;
    for gate in circuit.gates().iter().rev() {
        match gate {
            Gate::Cnot { control, target } => {
                psi.cnot_in_place(*control, *target)?;
                lambda.cnot_in_place(*control, *target)?;
            }
            Gate::Rotation { parameter, bundle } => {
                let theta = params[*parameter];
                for (word, coeff) in bundle.words().iter().rev() {
                    grad[*parameter] += 2.0 * weight * coeff * lambda.pauli_inner(word, &psi).im;
                    psi.rotate_in_place(word, -theta * coeff)?;
                    lambda.rotate_in_place(word, -theta * coeff)?;
                }
            }
        }
    }
    Ok(())
}

/// Exact gradient of the ensemble cost by adjoint statevector
/// differentiation.
pub fn gradient(problem: &EnsembleProblem, params: &[f64]) -> Result<Vec<f64>> {
    if params.len() != problem.circuit().parameter_count() {
        return Err(Error::Validation(format!(
            "expected {} parameters, got {}",
            problem.circuit().parameter_count(),
            params.len()
        )));
    }
    let mut grad = vec![0.0; params.len()];
    let weights = problem.weights().values().to_vec();
    for (phi, weight) in problem.initial_states().iter().zip(weights) {
        state_gradient(problem, phi, params, &mut grad, weight)?;
    }
    Ok(grad)
}

/// Central-finite-difference gradient of the ensemble cost (oracle).
pub fn finite_difference_gradient(
    problem: &EnsembleProblem,
    params: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; params.len()];
    let mut probe = params.to_vec();
    for i in 0..params.len() {
        probe[i] = params[i] + step;
        let plus = problem.evaluate(&probe)?.cost;
        probe[i] = params[i] - step;
        let minus = problem.evaluate(&probe)?.cost;
        probe[i] = params[i];
        grad[i] = (plus - minus) / (2.0 * step);
    }
    Ok(grad)
}

/// L-BFGS over arbitrary value/gradient closures.
///
/// `value_and_gradient` is called once per accepted point and supplies the
/// recorded auxiliary data; `value` serves the line-search probes and must
/// compute the identical quantity (bit-for-bit) so the recorded costs are
/// monotone non-increasing.
pub fn minimize_with<Aux>(
    initial: &[f64],
    config: &OptimizerConfig,
    mut value_and_gradient: impl FnMut(&[f64]) -> Result<(f64, Vec<f64>, Aux)>,
    mut value: impl FnMut(&[f64]) -> Result<f64>,
) -> Result<MinimizeOutcome<Aux>> {
    config.validate()?;
    if initial.iter().any(|p| !p.is_finite()) {
        return Err(Error::Validation("initial parameters must be finite".into()));
    }

    let mut x = initial.to_vec();
    let (mut f, mut g, aux) = value_and_gradient(&x)?;
    if !f.is_finite() {
        return Err(Error::Validation(format!("cost is not finite at the start ({f})")));
    }

    let mut iterations = vec![GenericIteration {
        iteration: 0,
        value: f,
        gradient_norm: infinity_norm(&g),
        aux,
    }];
    let mut s_history: Vec<Vec<f64>> = Vec::new();
    let mut y_history: Vec<Vec<f64>> = Vec::new();

    let mut status = TerminationStatus::MaxIterations;
    for iteration in 1..=config.max_iterations {
        if infinity_norm(&g) <= config.gradient_tolerance {
            status = TerminationStatus::GradientConverged;
            break;
        }

        let mut direction = two_loop_direction(&g, &s_history, &y_history);
        let mut slope: f64 = direction.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if !(slope < 0.0) {
            // Not a descent direction: drop the history and restart from
            // steepest descent.
            s_history.clear();
            y_history.clear();
            direction = g.iter().map(|gi| -gi).collect();
            slope = -g.iter().map(|gi| gi * gi).sum::<f64>();
            if !(slope < 0.0) {
                status = TerminationStatus::GradientConverged;
                break;
            }
        }

        // Armijo backtracking.  The two-loop direction is well-scaled once
        // curvature history exists; without it the direction is raw steepest
        // descent, so the first trial step is normalized by the gradient
        // length to keep the initial move O(1).
        let mut step = if s_history.is_empty() {
            let g_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            (1.0 / g_norm).min(1.0)
        } else {
            1.0_f64
        };
        let mut accepted = None;
        for _ in 0..=config.max_backtracks {
            let candidate: Vec<f64> =
                x.iter().zip(&direction).map(|(xi, di)| xi + step * di).collect();
            let f_candidate = value(&candidate)?;
            if f_candidate <= f + config.armijo_c1 * step * slope {
                accepted = Some(candidate);
                break;
            }
            step *= config.shrink;
        }
        let Some(x_new) = accepted else {
            status = TerminationStatus::LineSearchFailure;
            break;
        };

        let (f_new, g_new, aux_new) = value_and_gradient(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let s_norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if sy > 1e-10 * s_norm * y_norm {
            s_history.push(s);
            y_history.push(y);
            if s_history.len() > config.memory {
                s_history.remove(0);
                y_history.remove(0);
            }
        }

        x = x_new;
        f = f_new;
        g = g_new;
        iterations.push(GenericIteration {
            iteration,
            value: f,
            gradient_norm: infinity_norm(&g),
            aux: aux_new,
        });
    }
    // A budget exhausted exactly at convergence still counts as converged;
    // a line-search failure never reaches this with a small gradient.
    if infinity_norm(&g) <= config.gradient_tolerance {
        status = TerminationStatus::GradientConverged;
    }
    Ok(MinimizeOutcome { params: x, status, iterations })
}

/// Two-loop recursion: approximates `H^{-1} g` and negates it.
fn two_loop_direction(g: &[f64], s_history: &[Vec<f64>], y_history: &[Vec<f64>]) -> Vec<f64> {
    let mut q = g.to_vec();
    let m = s_history.len();
    let mut alpha = vec![0.0; m];
    let mut rho = vec![0.0; m];
    for i in (0..m).rev() {
        let sy: f64 = s_history[i].iter().zip(&y_history[i]).map(|(a, b)| a * b).sum();
        rho[i] = 1.0 / sy;
        alpha[i] = rho[i] * s_history[i].iter().zip(&q).map(|(a, b)| a * b).sum::<f64>();
        for (qj, yj) in q.iter_mut().zip(&y_history[i]) {
            *qj -= alpha[i] * yj;
        }
    }
    if m > 0 {
        let last = m - 1;
        let sy: f64 = s_history[last].iter().zip(&y_history[last]).map(|(a, b)| a * b).sum();
        let yy: f64 = y_history[last].iter().map(|v| v * v).sum();
        let gamma = sy / yy;
        for qj in q.iter_mut() {
            *qj *= gamma;
        }
    }
    for i in 0..m {
        let beta = rho[i] * y_history[i].iter().zip(&q).map(|(a, b)| a * b).sum::<f64>();
        for (qj, sj) in q.iter_mut().zip(&s_history[i]) {
            *qj += (alpha[i] - beta) * sj;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Minimizes the ensemble cost, recording the convergence curve.
pub fn minimize(
    problem: &EnsembleProblem,
    initial: &[f64],
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, ConvergenceRecord)> {
    let outcome = minimize_with(
        initial,
        config,
        |params| {
            let eval = problem.evaluate(params)?;
            let grad = gradient(problem, params)?;
            Ok((eval.cost, grad, eval))
        },
        |params| Ok(problem.evaluate(params)?.cost),
    )?;

    let iterations = outcome
        .iterations
        .into_iter()
        .map(|it| {
            let eval: EnsembleEvaluation = it.aux;
            IterationRecord {
                iteration: it.iteration,
                cost: it.value,
                trace: eval.trace,
                per_state_energies: eval.per_state_energies,
                gradient_norm: it.gradient_norm,
            }
        })
        .collect();
    Ok((outcome.params, ConvergenceRecord { iterations, status: outcome.status }))
}
