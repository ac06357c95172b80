//! Reproducible experiments: the four-dimensional worked example, random
//! cases with half of the eigenphases zero, register-size sweeps and the
//! classical learning curve. Every run is a pure function of its
//! [`RunConfig`]; randomness comes from ChaCha8 streams keyed by
//! `(seed, Stream)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::evolution::{phase_wraparound_warning, EvolutionOperator, Provenance, TrotterPlan};
use crate::learning::{limit_weights, train, LearningConfig, TrainingSet, WeightMatrix};
use crate::linalg::{cis, ComplexMatrix, ComplexVector, C64};
use crate::pipeline::{
    exact_phase_coefficients, principal_projection, run_iterations, IterationTrace, RunOptions,
    StoppingRule, SubspaceCoefficients,
};
use crate::register::RegisterLayout;

/// The two test inputs of the worked example (normalized before use).
pub const WORKED_EXAMPLE_INPUTS: [[f64; 4]; 2] = [
    [0.3517, 0.3058, 0.6136, 0.6374],
    [0.7730, 0.1919, 0.1404, 0.5881],
];

/// Four-dimensional training set with two ±1 columns scaled by 1/10.
pub fn worked_example_training() -> TrainingSet {
    let raw =
        ComplexMatrix::from_real_rows(&[&[-1.0, 1.0], &[-1.0, -1.0], &[1.0, -1.0], &[-1.0, 1.0]]);
    TrainingSet::scaled(raw, 0.1).expect("fixed nonzero training set")
}

/// Independent random streams, one per draw site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    GaussianMatrix = 1,
    Eigenphases = 2,
    InputVector = 3,
    Measurement = 4,
}

/// ChaCha8 keyed by `seed`, on the stream reserved for `stream`.
pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Modified Gram–Schmidt with one re-orthogonalization pass; columns of the
/// result are orthonormal.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&v);
                v = v.sub(&q.scaled(proj));
            }
        }
        let n = v.norm();
        if n <= 1e-12 {
            return Err(Error::Zero("column after orthogonalization"));
        }
        basis.push(v.scaled(C64::new(1.0 / n, 0.0)));
    }
    Ok(ComplexMatrix::from_columns(&basis))
}

fn gaussian_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, Stream::GaussianMatrix);
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCaseSpec {
    /// `N`, a power of two.
    pub dim: usize,
    pub phase_qubits: usize,
    pub seed: u64,
}

impl RandomCaseSpec {
    /// Number of nonzero eigenphases, `⌈N/2⌉`.
    pub fn npc(&self) -> usize {
        self.dim.div_ceil(2)
    }
}

#[derive(Clone, Debug)]
pub struct RandomCase {
    pub spec: RandomCaseSpec,
    pub evolution: EvolutionOperator,
    pub input: ComplexVector,
    /// `QQ†x` over the eigenvectors with nonzero eigenphase.
    pub target: ComplexVector,
    /// `d_j`; the first `npc` are uniform in `[0, 1)`, the rest zero.
    pub eigenphases: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// `U = Q diag(e^{i2πd}) Q†` for a Haar-like orthogonal `Q`, plus a
/// positive uniform random input.
pub fn generate_random_case(spec: RandomCaseSpec) -> Result<RandomCase> {
    let n = spec.dim;
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::Config(format!(
            "random case dimension {n} must be a power of two >= 2"
        )));
    }
    let npc = spec.npc();
    let mut rng = stream_rng(spec.seed, Stream::Eigenphases);
    let eigenphases: Vec<f64> = (0..n)
        .map(|j| if j < npc { rng.random::<f64>() } else { 0.0 })
        .collect();

    let q = orthonormalize_columns(&gaussian_matrix(n, spec.seed))?;
    let phased = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * cis(2.0 * PI * eigenphases[j]));
    let u = phased.matmul(&q.adjoint());
    let evolution = EvolutionOperator::new(u, spec.phase_qubits, Provenance::Given)?;

    let mut rng = stream_rng(spec.seed, Stream::InputVector);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let input = ComplexVector::from_real(&raw).normalized()?;

    let mut target = ComplexVector::zeros(n);
    for j in (0..n).filter(|&j| eigenphases[j] != 0.0) {
        let col = q.column(j);
        target = target.add(&col.scaled(col.dot(&input)));
    }
    Ok(RandomCase {
        spec,
        evolution,
        input,
        target,
        eigenphases,
        eigenvectors: q,
    })
}

/// Synthetic `W` on `N = 8` whose eigenvalues are multiples of `1/16`, so
/// phase estimation on `m = 4` qubits is exact.
#[derive(Clone, Debug)]
pub struct ExactPhaseFixture {
    pub layout: RegisterLayout,
    pub weights: WeightMatrix,
    pub evolution: EvolutionOperator,
    pub input: ComplexVector,
    pub target: ComplexVector,
    pub coefficients: SubspaceCoefficients,
}

/// Nonzero eigenvalues of the exact-phase fixture, in units of `1/16`.
pub const EXACT_PHASE_NUMERATORS: [u32; 4] = [2, 5, 9, 13];

impl ExactPhaseFixture {
    /// Eigenvectors come from `seed`; the input is split between the
    /// principal and null subspaces so that `|f⟩|φ̄⟩` is reached exactly at
    /// iteration `peak` (`peak ≥ 3` on four phase qubits).
    pub fn new(seed: u64, peak: usize) -> Result<Self> {
        let layout = RegisterLayout::new(4, 3)?;
        let (m, n) = (layout.phase_dim(), layout.data_dim());
        let mu = 1.0 / ((m - 1) as f64).sqrt();
        let theta = PI / (2.0 * (2 * peak + 1) as f64);
        let success_probability = (theta.sin() / mu).powi(2);
        if success_probability >= 1.0 {
            return Err(Error::Config(format!(
                "peak iteration {peak} is unreachable with {} phase qubits",
                layout.phase_qubits()
            )));
        }

        let q = orthonormalize_columns(&gaussian_matrix(n, seed))?;
        let mut lambdas = vec![0.0; n];
        for (l, &k) in lambdas.iter_mut().zip(EXACT_PHASE_NUMERATORS.iter()) {
            *l = k as f64 / m as f64;
        }
        let w = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * lambdas[j])
            .matmul(&q.adjoint())
            .hermitian_part();

        let kappa = EXACT_PHASE_NUMERATORS.len();
        let mut principal = ComplexVector::zeros(n);
        let mut null = ComplexVector::zeros(n);
        for j in 0..n {
            if j < kappa {
                principal = principal.add(&q.column(j));
            } else {
                null = null.add(&q.column(j));
            }
        }
        let input = principal
            .normalized()?
            .scaled(C64::new(success_probability.sqrt(), 0.0))
            .add(
                &null
                    .normalized()?
                    .scaled(C64::new((1.0 - success_probability).sqrt(), 0.0)),
            )
            .normalized()?;

        let weights = WeightMatrix::new(w)?;
        let evolution = EvolutionOperator::exact(weights.matrix(), 1.0, layout.phase_qubits())?;
        let target = principal_projection(weights.spectral(), &input, 1e-10);
        let coefficients = exact_phase_coefficients(weights.spectral(), &input, layout)
            .ok_or_else(|| Error::Config("fixture eigenvalues are not exact phases".into()))?;
        Ok(Self {
            layout,
            weights,
            evolution,
            input,
            target,
            coefficients,
        })
    }
}

impl Default for ExactPhaseFixture {
    fn default() -> Self {
        Self::new(7, 3).expect("default exact-phase fixture")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvolutionKind {
    Exact,
    Trotter { steps: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Example,
    Random {
        dim: usize,
    },
    Sweep {
        dim: usize,
        phase_qubits: Vec<usize>,
    },
    Learn {
        eta: f64,
        epochs: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub phase_qubits: usize,
    pub max_iter: usize,
    pub stopping: StoppingRule,
    pub evolution: EvolutionKind,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            phase_qubits: 6,
            max_iter: 30,
            stopping: StoppingRule::default(),
            evolution: EvolutionKind::Exact,
            out_dir: PathBuf::from("out"),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.stopping.validate()?;
        let check_m = |m: usize| -> Result<()> {
            if !(1..=12).contains(&m) {
                return Err(Error::Config(format!(
                    "phase qubits must be in 1..=12, got {m}"
                )));
            }
            Ok(())
        };
        match &self.mode {
            Mode::Example => check_m(self.phase_qubits)?,
            Mode::Random { dim } | Mode::Sweep { dim, .. } => {
                if !dim.is_power_of_two() || *dim < 2 || *dim > 4096 {
                    return Err(Error::Config(format!(
                        "--n must be a power of two in 2..=4096, got {dim}"
                    )));
                }
                if let EvolutionKind::Trotter { .. } = self.evolution {
                    return Err(Error::Config(
                        "random cases are generated as a unitary; only --evolution exact applies"
                            .into(),
                    ));
                }
                match &self.mode {
                    Mode::Sweep { phase_qubits, .. } => {
                        if phase_qubits.is_empty() {
                            return Err(Error::Config("--m-list is empty".into()));
                        }
                        phase_qubits.iter().try_for_each(|&m| check_m(m))?;
                    }
                    _ => check_m(self.phase_qubits)?,
                }
            }
            Mode::Learn { eta, .. } => {
                if eta.is_nan() || *eta <= 0.0 {
                    return Err(Error::Config(format!("--eta must be positive, got {eta}")));
                }
            }
        }
        if let EvolutionKind::Trotter { steps: 0 } = self.evolution {
            return Err(Error::Config("--trotter-steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Files written by a run, plus its plain-text summary.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: String,
    pub traces: Vec<(String, IterationTrace)>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn prepare_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    match &config.mode {
        Mode::Example => run_example(config),
        Mode::Random { dim } => run_random(config, *dim),
        Mode::Sweep { dim, phase_qubits } => run_sweep(config, *dim, phase_qubits),
        Mode::Learn { eta, epochs } => run_learning_demo(config, *eta, *epochs),
    }
}

fn run_options(
    config: &RunConfig,
    layout: RegisterLayout,
    coefficients: Option<SubspaceCoefficients>,
) -> RunOptions {
    RunOptions {
        layout,
        max_iter: config.max_iter,
        stopping: config.stopping,
        coefficients,
    }
}

fn trace_summary_line(label: &str, trace: &IterationTrace) -> String {
    let peak = trace.peak_fidelity_iteration();
    let first = trace.first_peak_iteration();
    format!(
        "{label}: P_f = {:.6}, first peak {:.6} at iteration {first}, peak fidelity {:.6} at iteration {peak}, min p_zero {:.3e} at iteration {}, stop rule fired at {}",
        trace.success_probability,
        trace.records[first].fidelity,
        trace.peak_fidelity(),
        trace.records[trace.min_p_zero_iteration()].p_zero,
        trace.min_p_zero_iteration(),
        trace
            .stopping_iteration
            .map_or_else(|| "never".to_string(), |k| k.to_string()),
    )
}

/// Both worked-example inputs against the example weights, once with the
/// exact exponential and once with the split product.
pub fn run_example(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;
    let set = worked_example_training();
    let gram = WeightMatrix::from_training(&set)?;
    let layout = RegisterLayout::for_data_dim(config.phase_qubits, set.dim())?;
    let projector = limit_weights(&set)?;
    let steps = match config.evolution {
        EvolutionKind::Trotter { steps } => steps,
        EvolutionKind::Exact => 1,
    };
    let evolutions = [
        (
            "exact",
            EvolutionOperator::exact(gram.matrix(), 1.0, layout.phase_qubits())?,
        ),
        (
            "trotter",
            EvolutionOperator::trotter(
                TrotterPlan::from_matrix(set.matrix(), 1.0, steps)?,
                layout.phase_qubits(),
            )?,
        ),
    ];

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "worked example: N = 4, m = {}, max_iter = {}, seed = {}",
        layout.phase_qubits(),
        config.max_iter,
        config.seed
    );
    if let Some(w) = phase_wraparound_warning(gram.lambda_max(), 1.0) {
        let _ = writeln!(summary, "warning: {w}");
    }
    let mut files = Vec::new();
    let mut traces = Vec::new();
    for (i, raw) in WORKED_EXAMPLE_INPUTS.iter().enumerate() {
        let x = ComplexVector::from_real(raw).normalized()?;
        let target = projector.mul_vec(&x);
        let mut peaks = Vec::new();
        for (label, evolution) in &evolutions {
            let mut rng = stream_rng(config.seed, Stream::Measurement);
            let trace = run_iterations(
                evolution,
                &x,
                &target,
                &run_options(config, layout, None),
                &mut rng,
            )?;
            let name = format!("example_x{}_{label}", i + 1);
            let path = config.out_dir.join(format!("{name}.csv"));
            write_file(&path, &trace.to_csv())?;
            let _ = writeln!(summary, "{}", trace_summary_line(&name, &trace));
            peaks.push(trace.peak_fidelity());
            files.push(path);
            traces.push((name, trace));
        }
        let _ = writeln!(
            summary,
            "input x{}: peak fidelity exact - trotter = {:+.6}",
            i + 1,
            peaks[0] - peaks[1]
        );
    }
    let path = config.out_dir.join("example_summary.txt");
    write_file(&path, &summary)?;
    files.push(path);
    Ok(RunReport {
        files,
        summary,
        traces,
    })
}

fn random_trace(
    config: &RunConfig,
    case: &RandomCase,
    phase_qubits: usize,
) -> Result<IterationTrace> {
    let layout = RegisterLayout::for_data_dim(phase_qubits, case.spec.dim)?;
    let mut rng = stream_rng(config.seed, Stream::Measurement);
    run_iterations(
        &case.evolution,
        &case.input,
        &case.target,
        &run_options(config, layout, None),
        &mut rng,
    )
}

pub fn run_random(config: &RunConfig, dim: usize) -> Result<RunReport> {
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;
    let spec = RandomCaseSpec {
        dim,
        phase_qubits: config.phase_qubits,
        seed: config.seed,
    };
    let case = generate_random_case(spec)?;
    let trace = random_trace(config, &case, config.phase_qubits)?;
    let name = format!("random_n{dim}_m{}_seed{}", config.phase_qubits, config.seed);
    let path = config.out_dir.join(format!("{name}.csv"));
    write_file(&path, &trace.to_csv())?;
    let summary = format!(
        "random case: N = {dim}, m = {}, nonzero eigenphases = {}, seed = {}\n{}\n",
        config.phase_qubits,
        spec.npc(),
        config.seed,
        trace_summary_line(&name, &trace)
    );
    let summary_path = config.out_dir.join("random_summary.txt");
    write_file(&summary_path, &summary)?;
    Ok(RunReport {
        files: vec![path, summary_path],
        summary,
        traces: vec![(name, trace)],
    })
}

/// One random case (shared across all `m`), one trace per phase-register size.
pub fn run_sweep(config: &RunConfig, dim: usize, phase_qubits: &[usize]) -> Result<RunReport> {
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;
    let max_m = phase_qubits.iter().copied().max().unwrap_or(1);
    let case = generate_random_case(RandomCaseSpec {
        dim,
        phase_qubits: max_m,
        seed: config.seed,
    })?;

    let results: Vec<Result<(usize, IterationTrace, PathBuf)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = phase_qubits
            .iter()
            .map(|&m| {
                let case = &case;
                scope.spawn(move || -> Result<(usize, IterationTrace, PathBuf)> {
                    let trace = random_trace(config, case, m)?;
                    let path = config
                        .out_dir
                        .join(format!("sweep_n{dim}_seed{}_m{m}.csv", config.seed));
                    write_file(&path, &trace.to_csv())?;
                    Ok((m, trace, path))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut summary = format!("sweep: N = {dim}, seed = {}\nm,first_peak_iteration,first_peak_fidelity,peak_iteration,peak_fidelity,min_p_zero_iteration,stop_iteration\n", config.seed);
    let mut files = Vec::new();
    let mut traces = Vec::new();
    for result in results {
        let (m, trace, path) = result?;
        let _ = writeln!(
            summary,
            "{m},{},{},{},{},{},{}",
            trace.first_peak_iteration(),
            trace.records[trace.first_peak_iteration()].fidelity,
            trace.peak_fidelity_iteration(),
            trace.peak_fidelity(),
            trace.min_p_zero_iteration(),
            trace
                .stopping_iteration
                .map_or_else(String::new, |k| k.to_string())
        );
        files.push(path);
        traces.push((format!("m{m}"), trace));
    }
    let path = config.out_dir.join("sweep_summary.txt");
    write_file(&path, &summary)?;
    files.push(path);
    Ok(RunReport {
        files,
        summary,
        traces,
    })
}

/// Widrow–Hoff iteration on the worked-example data; one CSV row per epoch.
pub fn run_learning_demo(config: &RunConfig, eta: f64, epochs: usize) -> Result<RunReport> {
    config.validate()?;
    let set = worked_example_training();
    let learning = LearningConfig { eta, epochs };
    learning.validate(&WeightMatrix::from_training(&set)?)?;
    prepare_out_dir(&config.out_dir)?;
    let trace = train(&set, &learning)?;

    let n = set.dim();
    let mut csv = String::from("epoch,frobenius_error");
    for j in 0..n {
        let _ = write!(csv, ",phi_{j}");
    }
    csv.push('\n');
    for r in &trace.records {
        let _ = write!(csv, "{},{}", r.epoch, r.frobenius_error);
        for l in &r.eigenvalues {
            let _ = write!(csv, ",{l}");
        }
        csv.push('\n');
    }
    let path = config.out_dir.join("learn.csv");
    write_file(&path, &csv)?;

    let last = trace.records.last().expect("epoch 0 is always recorded");
    let summary = format!(
        "Widrow-Hoff learning: eta = {eta}, epochs run = {}, converged at {}, final ||W - QQ^T||_F = {:e}\n",
        last.epoch,
        trace
            .converged_at
            .map_or_else(|| "never".to_string(), |k| k.to_string()),
        last.frobenius_error
    );
    let summary_path = config.out_dir.join("learn_summary.txt");
    write_file(&summary_path, &summary)?;
    Ok(RunReport {
        files: vec![path, summary_path],
        summary,
        traces: Vec::new(),
    })
}
