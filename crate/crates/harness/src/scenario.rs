//! Scenario configuration and execution.
//!
//! A scenario names one problem source, one circuit, an ordered set of
//! initial states with a weight scheme, and an optimization budget.  The
//! runner expands an optional one-dimensional scan, derives one seed per
//! (scan point, trial) pair, minimizes every pair independently, and
//! reports all errors against the dense exact spectrum of the very same
//! mapped operator the optimizer saw.

use std::path::PathBuf;

use evqe_core::ansatz::{
    build_guccsd, build_rycnot, parse_occupation_bitstring, AnsatzCircuit, InitialStateSpec,
};
use evqe_core::ensemble::{EnsembleProblem, WeightScheme};
use evqe_core::fermion::{freeze_core, jordan_wigner, s_squared_operator, ActiveSpaceSpec};
use evqe_core::optimizer::{self, ConvergenceRecord, OptimizerConfig, TerminationStatus};
use evqe_core::pauli::PauliOperator;
use evqe_core::qdft::{binary_map, OneBodyMatrix};
use evqe_core::state::Statevector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::family::{family_instance, FAMILY_DEFAULT_REST_ENERGY, FAMILY_ORBITALS};
use crate::metrics::{swap_events, trapezoid_area};

/// Exact baselines become intractable past this many qubits.
pub const MAX_ORACLE_QUBITS: usize = 10;

/// Where the mapped operator comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSource {
    /// Electronic-structure integrals with an optional frozen core.
    Fcidump {
        path: String,
        #[serde(default)]
        frozen_orbitals: Vec<usize>,
        #[serde(default)]
        active_orbitals: Option<Vec<usize>>,
    },
    /// A symmetric one-body matrix read from a plain text file.
    MatrixFile { path: String },
    /// Uniform nearest-neighbour chain surrogate.
    Chain { sites: usize, onsite: f64, hopping: f64 },
    /// Built-in synthetic two-state family.
    TwoStateFamily {
        alpha_degrees: f64,
        #[serde(default = "default_rest_energy")]
        rest_energy: f64,
    },
}

fn default_rest_energy() -> f64 {
    FAMILY_DEFAULT_REST_ENERGY
}

/// A problem source resolved into a mapped operator plus exact baselines.
#[derive(Debug, Clone)]
pub struct BuiltProblem {
    pub operator: PauliOperator,
    pub qubit_count: usize,
    /// Full exact spectrum of the mapped operator, ascending.
    pub exact_eigenvalues: Vec<f64>,
    /// Spatial orbital count when the problem is fermionic.
    pub orbital_count: Option<usize>,
    /// Parameters spanning the target subspace (two-state family only).
    pub reference_parameters: Option<Vec<f64>>,
}

impl ProblemSource {
    /// Returns a copy with the named scan variable replaced.
    pub fn with_scan(&self, variable: &str, value: f64) -> Result<ProblemSource> {
        let mut copy = self.clone();
        match (&mut copy, variable) {
            (ProblemSource::Chain { onsite, .. }, "onsite") => *onsite = value,
            (ProblemSource::Chain { hopping, .. }, "hopping") => *hopping = value,
            (ProblemSource::TwoStateFamily { alpha_degrees, .. }, "alpha_degrees") => {
                *alpha_degrees = value
            }
            (ProblemSource::TwoStateFamily { rest_energy, .. }, "rest_energy") => {
                *rest_energy = value
            }
            _ => {
                return Err(HarnessError::Config(format!(
                    "scan variable {variable:?} is not a parameter of this problem source"
                )))
            }
        }
        Ok(copy)
    }

    /// Maps the source to a qubit operator and computes its dense spectrum.
    pub fn build(&self) -> Result<BuiltProblem> {
        let (operator, orbital_count, reference_parameters) = match self {
            ProblemSource::Fcidump {
                path,
                frozen_orbitals,
                active_orbitals,
            } => {
                let data = evqe_core::fcidump::read_fcidump(path)?;
                let orbital_count = data.integrals.orbital_count();
                let active = match active_orbitals {
                    Some(list) => list.clone(),
                    None => (0..orbital_count)
                        .filter(|p| !frozen_orbitals.contains(p))
                        .collect(),
                };
                let frozen_electrons = 2 * frozen_orbitals.len();
                if data.electron_count < frozen_electrons {
                    return Err(HarnessError::Config(format!(
                        "{} frozen orbitals need {} electrons but the file declares {}",
                        frozen_orbitals.len(),
                        frozen_electrons,
                        data.electron_count
                    )));
                }
                let spec = ActiveSpaceSpec {
                    frozen: frozen_orbitals.clone(),
                    active,
                    active_electrons: data.electron_count - frozen_electrons,
                };
                let reduced = freeze_core(&data.integrals, &spec)?;
                let operator = jordan_wigner(&reduced)?;
                (operator, Some(spec.active.len()), None)
            }
            ProblemSource::MatrixFile { path } => {
                let matrix = OneBodyMatrix::read(path)?;
                (binary_map(&matrix)?, None, None)
            }
            ProblemSource::Chain {
                sites,
                onsite,
                hopping,
            } => {
                let matrix = OneBodyMatrix::chain_hamiltonian(*sites, *onsite, *hopping)?;
                (binary_map(&matrix)?, None, None)
            }
            ProblemSource::TwoStateFamily {
                alpha_degrees,
                rest_energy,
            } => {
                let inst = family_instance(*alpha_degrees, *rest_energy)?;
                (
                    inst.hamiltonian,
                    Some(FAMILY_ORBITALS),
                    Some(inst.reference_parameters),
                )
            }
        };
        let qubit_count = operator.qubit_count();
        if qubit_count > MAX_ORACLE_QUBITS {
            return Err(HarnessError::Config(format!(
                "problem spans {qubit_count} qubits; exact baselines stop at {MAX_ORACLE_QUBITS}"
            )));
        }
        let exact = operator.to_dense()?.eigendecompose()?.eigenvalues;
        Ok(BuiltProblem {
            operator,
            qubit_count,
            exact_eigenvalues: exact,
            orbital_count,
            reference_parameters,
        })
    }
}

/// Circuit selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnsatzSpec {
    /// Spin- and number-conserving excitation circuit.
    Guccsd { repetitions: usize },
    /// Hardware-style rotation/entangler circuit.
    Rycnot { layers: usize },
}

impl AnsatzSpec {
    pub fn build(&self, qubit_count: usize, orbital_count: Option<usize>) -> Result<AnsatzCircuit> {
        match self {
            AnsatzSpec::Guccsd { repetitions } => {
                let orbitals = orbital_count.ok_or_else(|| {
                    HarnessError::Config(
                        "the excitation circuit needs a fermionic problem source".into(),
                    )
                })?;
                Ok(build_guccsd(orbitals, *repetitions)?)
            }
            AnsatzSpec::Rycnot { layers } => Ok(build_rycnot(qubit_count, *layers)?),
        }
    }
}

/// One mutually orthogonal starting state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateConfig {
    BasisState { index: usize },
    /// Qubit-0-first occupation pattern such as `"111100"`.
    Bitstring { pattern: String },
    HartreeFock { electrons: usize },
    OpenShellSingletCsf {
        electrons: usize,
        from_orbital: usize,
        to_orbital: usize,
    },
}

impl InitialStateConfig {
    pub fn prepare(&self, qubit_count: usize) -> Result<Statevector> {
        let spec = match self {
            InitialStateConfig::BasisState { index } => InitialStateSpec::BasisState(*index),
            InitialStateConfig::Bitstring { pattern } => {
                if pattern.len() != qubit_count {
                    return Err(HarnessError::Config(format!(
                        "occupation pattern {pattern:?} does not cover {qubit_count} qubits"
                    )));
                }
                InitialStateSpec::BasisState(parse_occupation_bitstring(pattern)?)
            }
            InitialStateConfig::HartreeFock { electrons } => InitialStateSpec::HartreeFock {
                electrons: *electrons,
            },
            InitialStateConfig::OpenShellSingletCsf {
                electrons,
                from_orbital,
                to_orbital,
            } => InitialStateSpec::OpenShellSingletCsf {
                electrons: *electrons,
                from_orbital: *from_orbital,
                to_orbital: *to_orbital,
            },
        };
        Ok(spec.prepare(qubit_count)?)
    }
}

/// Ensemble weight selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Equi,
    Optimal,
    Explicit { values: Vec<f64> },
}

impl WeightSpec {
    pub fn build(&self, ensemble_size: usize) -> Result<WeightScheme> {
        let scheme = match self {
            WeightSpec::Equi => WeightScheme::equi(ensemble_size)?,
            WeightSpec::Optimal => WeightScheme::optimal(ensemble_size)?,
            WeightSpec::Explicit { values } => {
                if values.len() != ensemble_size {
                    return Err(HarnessError::Config(format!(
                        "{} explicit weights for {} initial states",
                        values.len(),
                        ensemble_size
                    )));
                }
                WeightScheme::explicit(values.clone())?
            }
        };
        Ok(scheme)
    }
}

/// Optional symmetry penalty added to every per-state energy.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PenaltySpec {
    #[default]
    None,
    /// Total-spin penalty `mu <S^2>` (fermionic problems only).
    SSquared { strength: f64 },
}

impl PenaltySpec {
    pub fn build(&self, orbital_count: Option<usize>) -> Result<(Option<PauliOperator>, f64)> {
        match self {
            PenaltySpec::None => Ok((None, 0.0)),
            PenaltySpec::SSquared { strength } => {
                if !strength.is_finite() || *strength < 0.0 {
                    return Err(HarnessError::Config(format!(
                        "penalty strength {strength} must be finite and non-negative"
                    )));
                }
                let orbitals = orbital_count.ok_or_else(|| {
                    HarnessError::Config(
                        "the total-spin penalty needs a fermionic problem source".into(),
                    )
                })?;
                Ok((Some(s_squared_operator(orbitals)?), *strength))
            }
        }
    }
}

/// Serializable mirror of the optimizer knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSettings {
    pub memory: usize,
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    pub armijo_c1: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        let config = OptimizerConfig::default();
        Self {
            memory: config.memory,
            gradient_tolerance: config.gradient_tolerance,
            max_iterations: config.max_iterations,
            armijo_c1: config.armijo_c1,
            shrink: config.shrink,
            max_backtracks: config.max_backtracks,
        }
    }
}

impl OptimizerSettings {
    pub fn to_config(&self) -> OptimizerConfig {
        OptimizerConfig {
            memory: self.memory,
            gradient_tolerance: self.gradient_tolerance,
            max_iterations: self.max_iterations,
            armijo_c1: self.armijo_c1,
            shrink: self.shrink,
            max_backtracks: self.max_backtracks,
        }
    }
}

/// Where each trial's parameter vector starts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialParameterSpec {
    #[default]
    Zeros,
    /// Uniform draw from `[-half_width, half_width]`, seeded per trial.
    Random {
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    /// The two-state family's subspace-spanning reference point.
    FamilyReference,
}

fn default_half_width() -> f64 {
    std::f64::consts::PI
}

/// One-dimensional parameter sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub variable: String,
    pub values: Vec<f64>,
}

fn default_trials() -> usize {
    1
}

/// Complete experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub problem: ProblemSource,
    pub ansatz: AnsatzSpec,
    pub initial_states: Vec<InitialStateConfig>,
    pub weights: WeightSpec,
    #[serde(default)]
    pub penalty: PenaltySpec,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub initial_parameters: InitialParameterSpec,
    #[serde(default)]
    pub scan: Option<ScanSpec>,
}

impl ScenarioConfig {
    /// Structural checks that need no file access.
    pub fn validate(&self) -> Result<()> {
        if self.initial_states.is_empty() {
            return Err(HarnessError::Config(
                "a scenario needs at least one initial state".into(),
            ));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("a scenario needs at least one trial".into()));
        }
        if let WeightSpec::Explicit { values } = &self.weights {
            if values.len() != self.initial_states.len() {
                return Err(HarnessError::Config(format!(
                    "{} explicit weights for {} initial states",
                    values.len(),
                    self.initial_states.len()
                )));
            }
        }
        if let InitialParameterSpec::Random { half_width } = &self.initial_parameters {
            if !half_width.is_finite() || *half_width <= 0.0 {
                return Err(HarnessError::Config(format!(
                    "random start half-width {half_width} must be finite and positive"
                )));
            }
        }
        if let Some(scan) = &self.scan {
            if scan.values.is_empty() {
                return Err(HarnessError::Config("a scan needs at least one value".into()));
            }
            for pair in scan.values.windows(2) {
                if !(pair[1] > pair[0]) {
                    return Err(HarnessError::Config(format!(
                        "scan values must be strictly ascending, got {} then {}",
                        pair[0], pair[1]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses and validates a JSON scenario file.
    pub fn from_json(text: &str) -> Result<ScenarioConfig> {
        let config: ScenarioConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// Deterministic per-trial seed (SplitMix64 over the combined indices).
pub fn trial_seed(base: u64, scan_index: usize, trial: usize) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(scan_index as u64 + 1))
        .wrapping_add(0xBF58_476D_1CE4_E5B9u64.wrapping_mul(trial as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Execution options supplied by the command line.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub threads: usize,
    pub seed_override: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            threads: 1,
            seed_override: None,
        }
    }
}

/// Everything recorded about one (scan point, trial) minimization.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub scan_index: usize,
    pub scan_value: Option<f64>,
    pub trial: usize,
    pub seed: u64,
    pub record: ConvergenceRecord,
    /// |final cost - ideal weighted sum of exact eigenvalues|.
    pub cost_error: f64,
    /// |final trace - mean of the lowest exact eigenvalues|.
    pub trace_error: f64,
    /// Raw per-state energy errors against ascending exact levels.
    pub per_state_errors: Vec<f64>,
    /// Subspace-rotation-corrected level errors.
    pub post_diagonal_errors: Vec<f64>,
    pub swap_iterations: Vec<usize>,
    pub cost_error_curve: Vec<f64>,
    pub trace_error_curve: Vec<f64>,
}

impl TrialOutcome {
    pub fn status_label(&self) -> &'static str {
        match self.record.status {
            TerminationStatus::GradientConverged => "gradient_converged",
            TerminationStatus::MaxIterations => "max_iterations",
            TerminationStatus::LineSearchFailure => "line_search_failure",
        }
    }
}

/// Full result of a scenario run, ordered scan-major then trial.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub config: ScenarioConfig,
    pub scan_values: Vec<Option<f64>>,
    /// Lowest `K` exact eigenvalues per scan point.
    pub exact_levels: Vec<Vec<f64>>,
    pub trials: Vec<TrialOutcome>,
    /// Per-trial area under the trace-error-vs-scan curve (raw values);
    /// present only for scans with at least two points.
    pub scan_areas: Option<Vec<f64>>,
}

impl ScenarioOutcome {
    /// The outcome for (scan index, trial).
    pub fn trial(&self, scan_index: usize, trial: usize) -> &TrialOutcome {
        &self.trials[scan_index * self.config.trials + trial]
    }
}

struct PreparedPoint {
    problem: EnsembleProblem,
    exact: Vec<f64>,
    ideal_cost: f64,
    ideal_trace: f64,
    reference_parameters: Option<Vec<f64>>,
}

fn prepare_point(config: &ScenarioConfig, source: &ProblemSource) -> Result<PreparedPoint> {
    let built = source.build()?;
    let ensemble_size = config.initial_states.len();
    if built.exact_eigenvalues.len() < ensemble_size {
        return Err(HarnessError::Config(format!(
            "{} initial states exceed the operator dimension {}",
            ensemble_size,
            built.exact_eigenvalues.len()
        )));
    }
    let circuit = config.ansatz.build(built.qubit_count, built.orbital_count)?;
    let states = config
        .initial_states
        .iter()
        .map(|s| s.prepare(built.qubit_count))
        .collect::<Result<Vec<_>>>()?;
    let weights = config.weights.build(ensemble_size)?;
    let (penalty_operator, penalty_strength) = config.penalty.build(built.orbital_count)?;

    let ideal_cost: f64 = weights
        .values()
        .iter()
        .zip(&built.exact_eigenvalues)
        .map(|(w, e)| w * e)
        .sum();
    let ideal_trace: f64 =
        built.exact_eigenvalues[..ensemble_size].iter().sum::<f64>() / ensemble_size as f64;

    let problem = EnsembleProblem::new(
        built.operator,
        states,
        circuit,
        weights,
        penalty_operator,
        penalty_strength,
    )?;
    Ok(PreparedPoint {
        problem,
        exact: built.exact_eigenvalues,
        ideal_cost,
        ideal_trace,
        reference_parameters: built.reference_parameters,
    })
}

fn starting_parameters(
    spec: &InitialParameterSpec,
    parameter_count: usize,
    seed: u64,
    reference: Option<&Vec<f64>>,
) -> Result<Vec<f64>> {
    match spec {
        InitialParameterSpec::Zeros => Ok(vec![0.0; parameter_count]),
        InitialParameterSpec::Random { half_width } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..parameter_count)
                .map(|_| rng.gen_range(-half_width..*half_width))
                .collect())
        }
        InitialParameterSpec::FamilyReference => reference.cloned().ok_or_else(|| {
            HarnessError::Config(
                "the reference start is only defined for the two-state family".into(),
            )
        }),
    }
}

fn run_one(
    config: &ScenarioConfig,
    point: &PreparedPoint,
    scan_index: usize,
    scan_value: Option<f64>,
    trial: usize,
) -> Result<TrialOutcome> {
    let seed = trial_seed(config.seed, scan_index, trial);
    let initial = starting_parameters(
        &config.initial_parameters,
        point.problem.circuit().parameter_count(),
        seed,
        point.reference_parameters.as_ref(),
    )?;
    let (params, record) =
        optimizer::minimize(&point.problem, &initial, &config.optimizer.to_config())?;

    let last = record.last();
    if !last.cost.is_finite() || !last.trace.is_finite() {
        return Err(HarnessError::Numerical(format!(
            "non-finite cost at scan point {scan_index}, trial {trial}"
        )));
    }

    let ensemble_size = config.initial_states.len();
    let per_state_errors: Vec<f64> = last
        .per_state_energies
        .iter()
        .zip(&point.exact[..ensemble_size])
        .map(|(e, exact)| (e - exact).abs())
        .collect();
    let post = point.problem.post_diagonalize(&params)?;
    let post_diagonal_errors: Vec<f64> = post
        .eigenvalues
        .iter()
        .zip(&point.exact[..ensemble_size])
        .map(|(e, exact)| (e - exact).abs())
        .collect();

    let energy_trace: Vec<Vec<f64>> = record
        .iterations
        .iter()
        .map(|it| it.per_state_energies.clone())
        .collect();
    let swap_iterations = swap_events(&energy_trace);
    let cost_error_curve: Vec<f64> = record
        .iterations
        .iter()
        .map(|it| (it.cost - point.ideal_cost).abs())
        .collect();
    let trace_error_curve: Vec<f64> = record
        .iterations
        .iter()
        .map(|it| (it.trace - point.ideal_trace).abs())
        .collect();

    Ok(TrialOutcome {
        scan_index,
        scan_value,
        trial,
        seed,
        cost_error: (last.cost - point.ideal_cost).abs(),
        trace_error: (last.trace - point.ideal_trace).abs(),
        per_state_errors,
        post_diagonal_errors,
        swap_iterations,
        cost_error_curve,
        trace_error_curve,
        record,
    })
}

/// Runs every (scan point, trial) pair and gathers the outcomes.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> Result<ScenarioOutcome> {
    let mut config = config.clone();
    if let Some(seed) = options.seed_override {
        config.seed = seed;
    }
    config.validate()?;

    let scan_values: Vec<Option<f64>> = match &config.scan {
        Some(scan) => scan.values.iter().copied().map(Some).collect(),
        None => vec![None],
    };

    let mut points = Vec::with_capacity(scan_values.len());
    for value in &scan_values {
        let source = match (value, &config.scan) {
            (Some(v), Some(scan)) => config.problem.with_scan(&scan.variable, *v)?,
            _ => config.problem.clone(),
        };
        points.push(prepare_point(&config, &source)?);
    }

    let tasks: Vec<(usize, usize)> = (0..scan_values.len())
        .flat_map(|s| (0..config.trials).map(move |t| (s, t)))
        .collect();
    let execute = |&(s, t): &(usize, usize)| run_one(&config, &points[s], s, scan_values[s], t);

    let trials: Vec<TrialOutcome> = if options.threads <= 1 {
        tasks.iter().map(execute).collect::<Result<Vec<_>>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(execute).collect::<Result<Vec<_>>>())?
    };

    let ensemble_size = config.initial_states.len();
    let exact_levels: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.exact[..ensemble_size].to_vec())
        .collect();

    let scan_areas = match &config.scan {
        Some(scan) if scan.values.len() >= 2 => {
            let mut areas = Vec::with_capacity(config.trials);
            for t in 0..config.trials {
                let ys: Vec<f64> = (0..scan.values.len())
                    .map(|s| trials[s * config.trials + t].trace_error)
                    .collect();
                areas.push(trapezoid_area(&scan.values, &ys)?);
            }
            Some(areas)
        }
        _ => None,
    };

    Ok(ScenarioOutcome {
        config,
        scan_values,
        exact_levels,
        trials,
        scan_areas,
    })
}

/// Resolves the output directory for a scenario run.
pub fn default_out_dir(config: &ScenarioConfig) -> PathBuf {
    PathBuf::from("runs").join(&config.name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_config() -> ScenarioConfig {
        ScenarioConfig {
            name: "chain-smoke".into(),
            problem: ProblemSource::Chain {
                sites: 4,
                onsite: 0.0,
                hopping: -1.0,
            },
            ansatz: AnsatzSpec::Rycnot { layers: 2 },
            initial_states: vec![
                InitialStateConfig::BasisState { index: 0 },
                InitialStateConfig::BasisState { index: 1 },
            ],
            weights: WeightSpec::Equi,
            penalty: PenaltySpec::None,
            optimizer: OptimizerSettings {
                max_iterations: 400,
                gradient_tolerance: 1e-7,
                ..Default::default()
            },
            trials: 2,
            seed: 9,
            initial_parameters: InitialParameterSpec::Random { half_width: 0.5 },
            scan: None,
        }
    }

    #[test]
    fn config_round_trips_through_json_and_rejects_unknown_fields() {
        let config = chain_config();
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(back.name, config.name);
        assert_eq!(back.trials, 2);

        let broken = text.replace("\"seed\": 9", "\"seed\": 9, \"tyops\": 1");
        assert!(ScenarioConfig::from_json(&broken).is_err());
        assert!(ScenarioConfig::from_json("{\"name\": \"x\"}").is_err());
    }

    #[test]
    fn scan_substitution_hits_only_matching_sources() {
        let chain = ProblemSource::Chain {
            sites: 4,
            onsite: 0.0,
            hopping: -1.0,
        };
        match chain.with_scan("hopping", -2.0).unwrap() {
            ProblemSource::Chain { hopping, .. } => assert_eq!(hopping, -2.0),
            _ => unreachable!(),
        }
        assert!(chain.with_scan("alpha_degrees", 1.0).is_err());
        let family = ProblemSource::TwoStateFamily {
            alpha_degrees: 10.0,
            rest_energy: 0.5,
        };
        assert!(family.with_scan("alpha_degrees", 90.0).is_ok());
        assert!(family.with_scan("sites", 3.0).is_err());
    }

    #[test]
    fn excitation_circuit_rejects_non_fermionic_sources() {
        let built = ProblemSource::Chain {
            sites: 4,
            onsite: 0.0,
            hopping: -1.0,
        }
        .build()
        .unwrap();
        assert_eq!(built.qubit_count, 2);
        assert!(AnsatzSpec::Guccsd { repetitions: 1 }
            .build(built.qubit_count, built.orbital_count)
            .is_err());
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a = trial_seed(7, 0, 0);
        assert_eq!(a, trial_seed(7, 0, 0));
        let mut seen = std::collections::HashSet::new();
        for s in 0..4 {
            for t in 0..8 {
                assert!(seen.insert(trial_seed(7, s, t)));
            }
        }
        assert_ne!(trial_seed(7, 0, 1), trial_seed(8, 0, 1));
    }

    #[test]
    fn random_starts_are_reproducible_and_bounded() {
        let a = starting_parameters(
            &InitialParameterSpec::Random { half_width: 0.5 },
            10,
            42,
            None,
        )
        .unwrap();
        let b = starting_parameters(
            &InitialParameterSpec::Random { half_width: 0.5 },
            10,
            42,
            None,
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.abs() <= 0.5));
        assert!(a.iter().any(|x| *x != 0.0));
        assert!(starting_parameters(&InitialParameterSpec::FamilyReference, 3, 1, None).is_err());
    }

    #[test]
    fn small_chain_scenario_runs_and_reports_errors_against_the_oracle() {
        let outcome = run_scenario(&chain_config(), &RunOptions::default()).unwrap();
        assert_eq!(outcome.trials.len(), 2);
        assert_eq!(outcome.exact_levels[0].len(), 2);
        for trial in &outcome.trials {
            assert!(trial.record.iterations.len() >= 1);
            assert!(trial.trace_error.is_finite());
            // The two-qubit circuit with two layers can represent the exact
            // two-dimensional ground subspace.
            assert!(trial.trace_error < 1e-5, "trace error {}", trial.trace_error);
            assert_eq!(trial.per_state_errors.len(), 2);
            assert_eq!(trial.post_diagonal_errors.len(), 2);
        }
        // Different random starts give different seeds and different traces.
        assert_ne!(outcome.trials[0].seed, outcome.trials[1].seed);
    }

    #[test]
    fn family_reference_start_with_full_reversal_stalls_at_the_crafted_point() {
        let config = ScenarioConfig {
            name: "family-reversed".into(),
            problem: ProblemSource::TwoStateFamily {
                alpha_degrees: 180.0,
                rest_energy: FAMILY_DEFAULT_REST_ENERGY,
            },
            ansatz: AnsatzSpec::Guccsd { repetitions: 1 },
            initial_states: vec![
                InitialStateConfig::HartreeFock { electrons: 4 },
                InitialStateConfig::OpenShellSingletCsf {
                    electrons: 4,
                    from_orbital: 1,
                    to_orbital: 2,
                },
            ],
            weights: WeightSpec::Optimal,
            penalty: PenaltySpec::None,
            optimizer: OptimizerSettings::default(),
            trials: 1,
            seed: 3,
            initial_parameters: InitialParameterSpec::FamilyReference,
            scan: None,
        };
        let outcome = run_scenario(&config, &RunOptions::default()).unwrap();
        let trial = &outcome.trials[0];
        assert_eq!(trial.status_label(), "gradient_converged");
        // Weighted cost is pinned at the reversed assignment: the gap is
        // (w_A - w_B)(E1 - E0) = 0.5 * 0.5 = 0.25.
        assert!((trial.cost_error - 0.25).abs() < 1e-8);
        assert!(trial.trace_error < 1e-10);
    }

    #[test]
    fn equal_weight_runs_keep_cost_and_trace_errors_identical_at_every_iteration() {
        let config = ScenarioConfig {
            name: "family-equi".into(),
            problem: ProblemSource::TwoStateFamily {
                alpha_degrees: 120.0,
                rest_energy: FAMILY_DEFAULT_REST_ENERGY,
            },
            ansatz: AnsatzSpec::Guccsd { repetitions: 1 },
            initial_states: vec![
                InitialStateConfig::HartreeFock { electrons: 4 },
                InitialStateConfig::OpenShellSingletCsf {
                    electrons: 4,
                    from_orbital: 1,
                    to_orbital: 2,
                },
            ],
            weights: WeightSpec::Equi,
            penalty: PenaltySpec::None,
            optimizer: OptimizerSettings {
                max_iterations: 200,
                ..Default::default()
            },
            trials: 1,
            seed: 5,
            initial_parameters: InitialParameterSpec::Zeros,
            scan: None,
        };
        let outcome = run_scenario(&config, &RunOptions::default()).unwrap();
        let trial = &outcome.trials[0];
        assert!(!trial.cost_error_curve.is_empty());
        for (cost_err, trace_err) in trial
            .cost_error_curve
            .iter()
            .zip(&trial.trace_error_curve)
        {
            assert!(
                (cost_err - trace_err).abs() <= 1e-12,
                "equal-weight errors diverged: {cost_err} vs {trace_err}"
            );
        }
    }

    #[test]
    fn chain_ensemble_with_equal_weights_recovers_all_eight_levels() {
        let config = ScenarioConfig {
            name: "chain-eight".into(),
            problem: ProblemSource::Chain {
                sites: 16,
                onsite: 0.0,
                hopping: -1.0,
            },
            ansatz: AnsatzSpec::Rycnot { layers: 10 },
            initial_states: (0..8)
                .map(|index| InitialStateConfig::BasisState { index })
                .collect(),
            weights: WeightSpec::Equi,
            penalty: PenaltySpec::None,
            optimizer: OptimizerSettings {
                gradient_tolerance: 1e-7,
                max_iterations: 5000,
                ..Default::default()
            },
            trials: 2,
            seed: 23,
            initial_parameters: InitialParameterSpec::Random {
                half_width: std::f64::consts::PI,
            },
            scan: None,
        };
        let outcome = run_scenario(&config, &RunOptions::default()).unwrap();
        let recovered = outcome.trials.iter().any(|trial| {
            trial.post_diagonal_errors.len() == 8
                && trial.post_diagonal_errors.iter().all(|err| *err <= 1e-6)
        });
        assert!(
            recovered,
            "no trial recovered all eight levels within 1e-6: {:?}",
            outcome
                .trials
                .iter()
                .map(|t| t.post_diagonal_errors.clone())
                .collect::<Vec<_>>()
        );
    }
}
