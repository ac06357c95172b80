//! Phase estimation followed by amplitude amplification of every branch whose
//! eigenphase is nonzero.
//!
//! `|ψ⟩ = U_PEA|0⟩|0⟩ = Σ_j α_j|λ_j⟩|φ_j⟩`, the marking reflection is
//! `U_f = (I − 2|f⟩⟨f|) ⊗ I` with `|f⟩ = μ(0, 1, …, 1)`, and the iterate is
//! `G = U_ψ U_f` with `U_ψ = U_PEA U_0 U_PEA†`. As the phase register's
//! `|0⟩` amplitude is drained, the data register approaches `QQ†|x⟩`.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::evolution::EvolutionOperator;
use crate::linalg::{
    householder_unitary, ComplexMatrix, ComplexVector, SpectralDecomposition, C64,
};
use crate::register::{Register, RegisterLayout, StateVector};

/// Initial success probabilities below this abort the run.
pub const DEGENERATE_SUCCESS_PROBABILITY: f64 = 1e-6;

/// Reflection about `|f⟩ = (0, 1, …, 1)/√(M−1)` on the phase register.
#[derive(Clone, Debug)]
pub struct MarkingOperator {
    f: ComplexVector,
    mu: f64,
}

impl MarkingOperator {
    pub fn new(layout: RegisterLayout) -> Self {
        let m = layout.phase_dim();
        let mu = 1.0 / ((m - 1) as f64).sqrt();
        let mut entries = vec![C64::new(mu, 0.0); m];
        entries[0] = C64::new(0.0, 0.0);
        Self {
            f: ComplexVector::new(entries),
            mu,
        }
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.f
    }

    /// `1/√(M−1)`
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `I − 2|f⟩⟨f|` as a dense `M × M` matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.f.dim())
            .sub(&ComplexMatrix::outer(&self.f, &self.f).scaled(C64::new(2.0, 0.0)))
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.reflect_phase(&self.f)
    }
}

pub fn build_marking(layout: RegisterLayout) -> MarkingOperator {
    MarkingOperator::new(layout)
}

/// `U_input` with `U_input|0⟩ = |x⟩`.
pub fn build_input_preparation(x: &ComplexVector) -> Result<ComplexMatrix> {
    householder_unitary(x)
}

fn check_operators(
    state: &StateVector,
    evolution: &EvolutionOperator,
    input_prep: &ComplexMatrix,
) -> Result<()> {
    let n = state.layout().data_dim();
    for (context, found) in [
        ("evolution operator", evolution.dim()),
        ("input preparation", input_prep.rows()),
        ("input preparation", input_prep.cols()),
    ] {
        if found != n {
            return Err(Error::DimensionMismatch {
                context,
                expected: n,
                found,
            });
        }
    }
    Ok(())
}

/// `U_PEA`: input preparation, QFT, controlled powers, inverse QFT.
pub fn apply_pea(
    state: &mut StateVector,
    evolution: &EvolutionOperator,
    input_prep: &ComplexMatrix,
) -> Result<()> {
    check_operators(state, evolution, input_prep)?;
    state.apply_on_register(input_prep, Register::Data)?;
    state.qft();
    state.apply_controlled_powers(evolution)?;
    state.inverse_qft();
    Ok(())
}

/// `U_PEA†`
pub fn apply_pea_inverse(
    state: &mut StateVector,
    evolution: &EvolutionOperator,
    input_prep: &ComplexMatrix,
) -> Result<()> {
    check_operators(state, evolution, input_prep)?;
    state.qft();
    state.apply_controlled_powers_inverse(evolution)?;
    state.inverse_qft();
    state.apply_on_register(&input_prep.adjoint(), Register::Data)?;
    Ok(())
}

/// `U_ψ = U_PEA U_0 U_PEA† = I − 2|ψ⟩⟨ψ|`
pub fn apply_u_psi(
    state: &mut StateVector,
    evolution: &EvolutionOperator,
    input_prep: &ComplexMatrix,
) -> Result<()> {
    apply_pea_inverse(state, evolution, input_prep)?;
    state.reflect_about_zero();
    apply_pea(state, evolution, input_prep)
}

/// Closed two-dimensional dynamics of `G` for exact-phase inputs:
/// `G^k|ψ⟩ = a_k|ψ⟩ + b_k|f⟩|φ̄⟩` with
/// `a_{k+1} = c·a_k + 2μP_f·b_k`, `b_{k+1} = −2μ·a_k − b_k`, `c = 4μ²P_f − 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceCoefficients {
    pub mu: f64,
    pub success_probability: f64,
}

impl SubspaceCoefficients {
    pub fn new(mu: f64, success_probability: f64) -> Self {
        Self {
            mu,
            success_probability,
        }
    }

    /// `c = 4μ²P_f − 1`
    pub fn c(&self) -> f64 {
        4.0 * self.mu * self.mu * self.success_probability - 1.0
    }

    /// `[[c, 2μP_f], [−2μ, −1]]`
    pub fn transfer_matrix(&self) -> [[f64; 2]; 2] {
        let (mu, pf) = (self.mu, self.success_probability);
        [[self.c(), 2.0 * mu * pf], [-2.0 * mu, -1.0]]
    }

    /// `(a_k, b_k)` for `k = 0 … iterations`.
    pub fn sequence(&self, iterations: usize) -> Vec<(f64, f64)> {
        let t = self.transfer_matrix();
        let mut out = Vec::with_capacity(iterations + 1);
        let (mut a, mut b) = (1.0, 0.0);
        out.push((a, b));
        for _ in 0..iterations {
            (a, b) = (t[0][0] * a + t[0][1] * b, t[1][0] * a + t[1][1] * b);
            out.push((a, b));
        }
        out
    }
}

/// Phase index `round(λM) mod M` of eigenvalue `λ` when `e^{i2πλ}` is read on `m` qubits.
pub fn phase_index(lambda: f64, layout: RegisterLayout) -> usize {
    let m = layout.phase_dim() as f64;
    ((lambda * m).round().rem_euclid(m)) as usize
}

/// Coefficient oracle for a spectrum whose eigenvalues are all integer
/// multiples of `1/M`; `None` otherwise.
pub fn exact_phase_coefficients(
    spectral: &SpectralDecomposition,
    x: &ComplexVector,
    layout: RegisterLayout,
) -> Option<SubspaceCoefficients> {
    let m = layout.phase_dim() as f64;
    let exact = spectral
        .eigenvalues
        .iter()
        .all(|&l| ((l * m) - (l * m).round()).abs() <= 1e-9);
    if !exact {
        return None;
    }
    let pf = spectral
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &l)| phase_index(l, layout) != 0)
        .map(|(j, _)| spectral.eigenvector(j).dot(x).norm_sqr())
        .sum();
    Some(SubspaceCoefficients::new(
        MarkingOperator::new(layout).mu(),
        pf,
    ))
}

/// `Σ q_j q_j†x` over eigenvectors with eigenvalue above the relative cutoff.
pub fn principal_projection(
    spectral: &SpectralDecomposition,
    x: &ComplexVector,
    relative_cutoff: f64,
) -> ComplexVector {
    let lmax = spectral
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut out = ComplexVector::zeros(x.dim());
    for (j, &l) in spectral.eigenvalues.iter().enumerate() {
        if l.abs() > relative_cutoff * lmax {
            let q = spectral.eigenvector(j);
            out = out.add(&q.scaled(q.dot(x)));
        }
    }
    out
}

/// Stop once every phase qubit's sampled Hadamard-basis `P(|0⟩)` reaches `1 − tolerance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StoppingRule {
    pub shots: u64,
    pub tolerance: f64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            shots: 10,
            tolerance: 0.05,
        }
    }
}

impl StoppingRule {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config(
                "stopping rule needs at least one shot".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.tolerance) {
            return Err(Error::Config(format!(
                "stop tolerance must lie in [0, 1), got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn fires(&self, sampled_zero_probabilities: &[f64]) -> bool {
        let threshold = 1.0 - self.tolerance;
        sampled_zero_probabilities.iter().all(|&p| p >= threshold)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub p_zero: f64,
    pub p_marked: f64,
    pub phase_distribution: Vec<f64>,
    pub fidelity: f64,
    /// Exact Hadamard-basis `P(|0⟩)`, indexed by phase qubit (0 = least significant).
    pub hadamard_exact: Vec<f64>,
    pub hadamard_sampled: Vec<f64>,
    pub coefficients: Option<(f64, f64)>,
    pub stop: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub layout: RegisterLayout,
    pub success_probability: f64,
    pub records: Vec<IterationRecord>,
    /// First iteration at which the stopping rule fired.
    pub stopping_iteration: Option<usize>,
}

impl IterationTrace {
    /// Iteration of maximal fidelity (earliest on ties).
    pub fn peak_fidelity_iteration(&self) -> usize {
        argmax_by(&self.records, |r| r.fidelity)
    }

    /// First local maximum of the fidelity, i.e. the end of the first
    /// amplification swing. Later revivals are ignored.
    pub fn first_peak_iteration(&self) -> usize {
        let f: Vec<f64> = self.records.iter().map(|r| r.fidelity).collect();
        (0..f.len())
            .find(|&k| {
                let rising = k == 0 || f[k] >= f[k - 1];
                let falling = k + 1 == f.len() || f[k] > f[k + 1];
                rising && falling
            })
            .unwrap_or(0)
    }

    pub fn peak_fidelity(&self) -> f64 {
        self.records[self.peak_fidelity_iteration()].fidelity
    }

    pub fn min_p_zero_iteration(&self) -> usize {
        argmax_by(&self.records, |r| -r.p_zero)
    }

    pub fn csv_header(&self) -> String {
        let m = self.layout.phase_dim();
        let q = self.layout.phase_qubits();
        let mut h = String::from("iter,p_zero,p_marked,fidelity,");
        for j in 0..m {
            let _ = write!(h, "phase_p_{j},");
        }
        for j in 0..q {
            let _ = write!(h, "h0_q{j},");
        }
        for j in 0..q {
            let _ = write!(h, "h0s_q{j},");
        }
        h.push_str("a_k,b_k");
        h
    }

    /// Plot-ready CSV; floats use the shortest representation that round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for r in &self.records {
            let _ = write!(
                out,
                "{},{},{},{},",
                r.iteration, r.p_zero, r.p_marked, r.fidelity
            );
            for p in &r.phase_distribution {
                let _ = write!(out, "{p},");
            }
            for p in &r.hadamard_exact {
                let _ = write!(out, "{p},");
            }
            for p in &r.hadamard_sampled {
                let _ = write!(out, "{p},");
            }
            if let Some((a, b)) = r.coefficients {
                let _ = write!(out, "{a},{b}");
            } else {
                out.push(',');
            }
            out.push('\n');
        }
        out
    }
}

fn argmax_by<T>(items: &[T], key: impl Fn(&T) -> f64) -> usize {
    let mut best = 0;
    for (i, item) in items.iter().enumerate().skip(1) {
        if key(item) > key(&items[best]) {
            best = i;
        }
    }
    best
}

/// Stateful amplification run: holds `G^k|ψ⟩` and advances it one iterate at a time.
pub struct Amplifier<'a> {
    evolution: &'a EvolutionOperator,
    input_prep: ComplexMatrix,
    marking: MarkingOperator,
    state: StateVector,
    iteration: usize,
}

impl<'a> Amplifier<'a> {
    /// Prepares `|ψ⟩ = U_PEA|0⟩|0⟩` for input `x`.
    pub fn new(
        evolution: &'a EvolutionOperator,
        x: &ComplexVector,
        layout: RegisterLayout,
    ) -> Result<Self> {
        if x.dim() != layout.data_dim() {
            return Err(Error::DimensionMismatch {
                context: "input vector",
                expected: layout.data_dim(),
                found: x.dim(),
            });
        }
        let input_prep = build_input_preparation(x)?;
        let mut state = StateVector::init_zero(layout);
        apply_pea(&mut state, evolution, &input_prep)?;
        Ok(Self {
            evolution,
            input_prep,
            marking: MarkingOperator::new(layout),
            state,
            iteration: 0,
        })
    }

    /// `G = U_ψ U_f`
    pub fn step(&mut self) -> Result<()> {
        self.marking.apply(&mut self.state)?;
        apply_u_psi(&mut self.state, self.evolution, &self.input_prep)?;
        self.iteration += 1;
        Ok(())
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn marking(&self) -> &MarkingOperator {
        &self.marking
    }

    pub fn input_preparation(&self) -> &ComplexMatrix {
        &self.input_prep
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub layout: RegisterLayout,
    pub max_iter: usize,
    pub stopping: StoppingRule,
    /// Two-dimensional oracle to print alongside the trace, for exact-phase inputs.
    pub coefficients: Option<SubspaceCoefficients>,
}

/// Run `max_iter` amplification iterates on input `x`, tracking the data
/// register against `target = QQ†x` (unnormalized; its squared norm is `P_f`).
pub fn run_iterations<R: Rng + ?Sized>(
    evolution: &EvolutionOperator,
    x: &ComplexVector,
    target: &ComplexVector,
    options: &RunOptions,
    rng: &mut R,
) -> Result<IterationTrace> {
    options.stopping.validate()?;
    x.require_unit()?;
    let layout = options.layout;
    if target.dim() != layout.data_dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity target",
            expected: layout.data_dim(),
            found: target.dim(),
        });
    }
    let success_probability = target.norm_sqr();
    if success_probability < DEGENERATE_SUCCESS_PROBABILITY {
        return Err(Error::DegenerateInput {
            success_probability,
        });
    }
    let target_unit = target.normalized()?;
    let oracle = options.coefficients.map(|c| c.sequence(options.max_iter));

    let mut amplifier = Amplifier::new(evolution, x, layout)?;
    let mut records = Vec::with_capacity(options.max_iter + 1);
    let mut stopping_iteration = None;
    loop {
        let k = amplifier.iteration();
        let state = amplifier.state();
        let phase_distribution = state.register_probabilities(Register::Phase);
        let p_zero = phase_distribution[0];
        let mut hadamard_exact = Vec::with_capacity(layout.phase_qubits());
        let mut hadamard_sampled = Vec::with_capacity(layout.phase_qubits());
        for q in 0..layout.phase_qubits() {
            let est = state.hadamard_qubit_estimate(q, options.stopping.shots, rng)?;
            hadamard_exact.push(est.exact);
            hadamard_sampled.push(est.sampled);
        }
        let stop = options.stopping.fires(&hadamard_sampled);
        if stop && stopping_iteration.is_none() {
            stopping_iteration = Some(k);
        }
        records.push(IterationRecord {
            iteration: k,
            p_zero,
            p_marked: 1.0 - p_zero,
            phase_distribution,
            fidelity: state.data_register_fidelity(&target_unit)?,
            hadamard_exact,
            hadamard_sampled,
            coefficients: oracle.as_ref().map(|o| o[k]),
            stop,
        });
        if k == options.max_iter {
            break;
        }
        amplifier.step()?;
    }
    Ok(IterationTrace {
        layout,
        success_probability,
        records,
        stopping_iteration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::power_cache;
    use crate::linalg::c64;

    #[test]
    fn marking_vector_m4() {
        let layout = RegisterLayout::new(2, 1).unwrap();
        let mk = build_marking(layout);
        let s = 1.0 / 3f64.sqrt();
        let expected = ComplexVector::from_real(&[0.0, s, s, s]);
        assert!(mk.vector().max_abs_diff(&expected) < 1e-15);
        assert!((mk.mu() - s).abs() < 1e-15);
        let u = mk.matrix();
        assert!(u.matmul(&u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn coefficient_recurrence_first_terms() {
        let c = SubspaceCoefficients::new(0.3, 0.6);
        let seq = c.sequence(2);
        assert_eq!(seq[0], (1.0, 0.0));
        assert!((seq[1].0 - c.c()).abs() < 1e-15);
        assert!((seq[1].1 + 0.6).abs() < 1e-15);
        // a_2 = c² − c − 1, b_2 = −(c − 1)·2μ
        let cc = c.c();
        assert!((seq[2].0 - (cc * cc - cc - 1.0)).abs() < 1e-14);
        assert!((seq[2].1 + (cc - 1.0) * 2.0 * 0.3).abs() < 1e-14);
    }

    #[test]
    fn phase_index_rounding() {
        let layout = RegisterLayout::new(3, 1).unwrap();
        assert_eq!(phase_index(0.25, layout), 2);
        assert_eq!(phase_index(0.99, layout), 0);
        assert_eq!(phase_index(0.06, layout), 0);
        assert_eq!(phase_index(0.07, layout), 1);
    }

    #[test]
    fn stopping_rule_edges() {
        let rule = StoppingRule {
            shots: 10,
            tolerance: 0.0,
        };
        assert!(rule.fires(&[1.0, 1.0]));
        assert!(!rule.fires(&[1.0, 0.0]));
        assert!(StoppingRule {
            shots: 0,
            tolerance: 0.1
        }
        .validate()
        .is_err());
        assert!(StoppingRule {
            shots: 1,
            tolerance: 1.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn pea_with_identity_returns_input() {
        let layout = RegisterLayout::new(3, 2).unwrap();
        let evolution = power_cache(&ComplexMatrix::identity(4), 3).unwrap();
        let x = ComplexVector::from_real(&[0.1, 0.2, 0.3, 0.4])
            .normalized()
            .unwrap();
        let prep = build_input_preparation(&x).unwrap();
        let mut s = StateVector::init_zero(layout);
        apply_pea(&mut s, &evolution, &prep).unwrap();
        let expected = StateVector::product(layout, &ComplexVector::basis(8, 0), &x).unwrap();
        assert!(s.to_vector().max_abs_diff(&expected.to_vector()) < 1e-12);
    }

    #[test]
    fn pea_reads_quarter_as_010() {
        let layout = RegisterLayout::new(3, 1).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.0]]);
        let evolution = EvolutionOperator::exact(&w, 1.0, 3).unwrap();
        let prep = build_input_preparation(&ComplexVector::basis(2, 0)).unwrap();
        let mut s = StateVector::init_zero(layout);
        apply_pea(&mut s, &evolution, &prep).unwrap();
        let probs = s.register_probabilities(Register::Phase);
        assert!((probs[0b010] - 1.0).abs() < 1e-12, "{probs:?}");
    }

    #[test]
    fn u_psi_negates_psi() {
        let layout = RegisterLayout::new(2, 1).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.5]]);
        let evolution = EvolutionOperator::exact(&w, 1.0, 2).unwrap();
        let x = ComplexVector::from_real(&[0.6, 0.8]);
        let prep = build_input_preparation(&x).unwrap();
        let mut psi = StateVector::init_zero(layout);
        apply_pea(&mut psi, &evolution, &prep).unwrap();
        let mut s = psi.clone();
        apply_u_psi(&mut s, &evolution, &prep).unwrap();
        let neg = psi.to_vector().scaled(c64(-1.0, 0.0));
        assert!(s.to_vector().max_abs_diff(&neg) < 1e-12);
        apply_u_psi(&mut s, &evolution, &prep).unwrap();
        assert!(s.to_vector().max_abs_diff(&psi.to_vector()) < 1e-12);
    }

    #[test]
    fn degenerate_input_rejected() {
        let layout = RegisterLayout::new(2, 1).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.0]]);
        let evolution = EvolutionOperator::exact(&w, 1.0, 2).unwrap();
        let x = ComplexVector::basis(2, 1);
        let spectral = crate::linalg::eig_hermitian(&w).unwrap();
        let target = principal_projection(&spectral, &x, 1e-10);
        let options = RunOptions {
            layout,
            max_iter: 3,
            stopping: StoppingRule::default(),
            coefficients: None,
        };
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        let err = run_iterations(&evolution, &x, &target, &options, &mut rng);
        assert!(matches!(err, Err(Error::DegenerateInput { .. })));
    }

    #[test]
    fn eigen_input_has_full_fidelity_at_start() {
        let layout = RegisterLayout::new(2, 1).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.0]]);
        let evolution = EvolutionOperator::exact(&w, 1.0, 2).unwrap();
        let x = ComplexVector::basis(2, 0);
        let options = RunOptions {
            layout,
            max_iter: 4,
            stopping: StoppingRule::default(),
            coefficients: None,
        };
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let trace = run_iterations(&evolution, &x, &x, &options, &mut rng).unwrap();
        for r in &trace.records {
            assert!((r.fidelity - 1.0).abs() < 1e-12);
            assert!(r.p_zero < 1e-12);
        }
    }

    #[test]
    fn first_peak_ignores_revivals() {
        let record = |iteration, fidelity| IterationRecord {
            iteration,
            p_zero: 0.0,
            p_marked: 1.0,
            phase_distribution: vec![1.0],
            fidelity,
            hadamard_exact: vec![],
            hadamard_sampled: vec![],
            coefficients: None,
            stop: false,
        };
        let trace = |f: &[f64]| IterationTrace {
            layout: RegisterLayout::new(1, 1).unwrap(),
            success_probability: 0.5,
            records: f.iter().enumerate().map(|(k, &v)| record(k, v)).collect(),
            stopping_iteration: None,
        };
        let t = trace(&[0.2, 0.6, 0.9, 0.5, 0.3, 0.8, 0.95, 0.1]);
        assert_eq!(t.first_peak_iteration(), 2);
        assert_eq!(t.peak_fidelity_iteration(), 6);
        assert_eq!(trace(&[0.9, 0.5]).first_peak_iteration(), 0);
        assert_eq!(trace(&[0.1, 0.2, 0.3]).first_peak_iteration(), 2);
    }
}
