//! Two-register statevector: a phase register of `m` qubits and a data
//! register of `n` qubits. Global index is `phase · N + data`, and within the
//! phase register qubit `q` is bit `q` of the phase index (qubit `m−1` is the
//! leftmost, most significant one).
//!
//! Operators are applied block-wise; nothing of size `2^{m+n} × 2^{m+n}` is
//! ever formed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::evolution::EvolutionOperator;
use crate::linalg::{cis, ComplexMatrix, ComplexVector, C64};

/// Norm drift allowed on any public state operation.
pub const STATE_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    phase_qubits: usize,
    data_qubits: usize,
}

impl RegisterLayout {
    pub fn new(phase_qubits: usize, data_qubits: usize) -> Result<Self> {
        if phase_qubits == 0 || data_qubits == 0 {
            return Err(Error::InvalidLayout(format!(
                "both registers need at least one qubit (m = {phase_qubits}, n = {data_qubits})"
            )));
        }
        if phase_qubits + data_qubits > 30 {
            return Err(Error::InvalidLayout(format!(
                "{} qubits is beyond what a dense statevector can hold",
                phase_qubits + data_qubits
            )));
        }
        Ok(Self {
            phase_qubits,
            data_qubits,
        })
    }

    /// Layout for a data register of dimension `data_dim` (a power of two).
    pub fn for_data_dim(phase_qubits: usize, data_dim: usize) -> Result<Self> {
        if !data_dim.is_power_of_two() || data_dim < 2 {
            return Err(Error::InvalidLayout(format!(
                "data dimension {data_dim} is not a power of two >= 2"
            )));
        }
        Self::new(phase_qubits, data_dim.trailing_zeros() as usize)
    }

    /// `m`
    pub fn phase_qubits(&self) -> usize {
        self.phase_qubits
    }

    /// `n`
    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    /// `M = 2^m`
    pub fn phase_dim(&self) -> usize {
        1 << self.phase_qubits
    }

    /// `N = 2^n`
    pub fn data_dim(&self) -> usize {
        1 << self.data_qubits
    }

    pub fn total_dim(&self) -> usize {
        self.phase_dim() * self.data_dim()
    }

    pub fn dim(&self, which: Register) -> usize {
        match which {
            Register::Phase => self.phase_dim(),
            Register::Data => self.data_dim(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Register {
    Phase,
    Data,
}

/// Exact and shot-sampled probability of reading `|0⟩` after a Hadamard.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HadamardEstimate {
    pub exact: f64,
    pub sampled: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0⟩|0⟩`
    pub fn init_zero(layout: RegisterLayout) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); layout.total_dim()];
        amplitudes[0] = C64::new(1.0, 0.0);
        Self { layout, amplitudes }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "statevector amplitudes",
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(state)
    }

    /// `|phase⟩ ⊗ |data⟩`
    pub fn product(
        layout: RegisterLayout,
        phase: &ComplexVector,
        data: &ComplexVector,
    ) -> Result<Self> {
        for (which, v) in [(Register::Phase, phase), (Register::Data, data)] {
            if v.dim() != layout.dim(which) {
                return Err(Error::DimensionMismatch {
                    context: "product state factor",
                    expected: layout.dim(which),
                    found: v.dim(),
                });
            }
        }
        Self::from_amplitudes(layout, phase.kron(data).into_inner())
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amplitudes.clone())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_dim(&self, context: &'static str, expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context,
                expected,
                found,
            })
        }
    }

    /// `(A ⊗ I)` or `(I ⊗ A)` depending on `which`.
    pub fn apply_on_register(&mut self, a: &ComplexMatrix, which: Register) -> Result<()> {
        let dim = self.layout.dim(which);
        self.check_dim("register operator rows", dim, a.rows())?;
        self.check_dim("register operator cols", dim, a.cols())?;
        match which {
            Register::Data => self.apply_data_blocks(|_, block, scratch| {
                a.mul_slice_into(block, scratch);
                block.copy_from_slice(scratch);
            }),
            Register::Phase => self.apply_phase_matrix(a),
        }
        Ok(())
    }

    /// Run `f(phase_index, data_block, scratch)` over each contiguous data block.
    fn apply_data_blocks(&mut self, mut f: impl FnMut(usize, &mut [C64], &mut [C64])) {
        let n = self.layout.data_dim();
        let mut scratch = vec![C64::new(0.0, 0.0); n];
        for (p, block) in self.amplitudes.chunks_mut(n).enumerate() {
            f(p, block, &mut scratch);
        }
    }

    fn apply_phase_matrix(&mut self, a: &ComplexMatrix) {
        let (m, n) = (self.layout.phase_dim(), self.layout.data_dim());
        let mut out = vec![C64::new(0.0, 0.0); m * n];
        for p in 0..m {
            let out_row = &mut out[p * n..(p + 1) * n];
            for (q, &coef) in a.row(p).iter().enumerate() {
                if coef == C64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &s) in out_row.iter_mut().zip(&self.amplitudes[q * n..(q + 1) * n]) {
                    *o += coef * s;
                }
            }
        }
        self.amplitudes = out;
    }

    /// `Σ_j |j⟩⟨j| ⊗ U^j`, with `U^j` assembled from the cached `U^{2^k}`
    /// for the set bits of `j`.
    pub fn apply_controlled_powers(&mut self, evolution: &EvolutionOperator) -> Result<()> {
        self.controlled_powers(evolution, false)
    }

    /// Adjoint of [`Self::apply_controlled_powers`].
    pub fn apply_controlled_powers_inverse(&mut self, evolution: &EvolutionOperator) -> Result<()> {
        self.controlled_powers(evolution, true)
    }

    fn controlled_powers(&mut self, evolution: &EvolutionOperator, adjoint: bool) -> Result<()> {
        self.check_dim(
            "controlled power dimension",
            self.layout.data_dim(),
            evolution.dim(),
        )?;
        let m = self.layout.phase_qubits();
        if evolution.levels() < m {
            return Err(Error::DimensionMismatch {
                context: "power cache levels",
                expected: m,
                found: evolution.levels(),
            });
        }
        self.apply_data_blocks(|p, block, scratch| {
            for k in 0..m {
                if p >> k & 1 == 1 {
                    let u = if adjoint {
                        evolution.adjoint_power(k)
                    } else {
                        evolution.power(k)
                    };
                    u.mul_slice_into(block, scratch);
                    block.copy_from_slice(scratch);
                }
            }
        });
        Ok(())
    }

    /// Fourier transform `F_M`, `(F_M)_{jk} = e^{+i2πjk/M}/√M`, on the phase register.
    pub fn qft(&mut self) {
        self.apply_phase_matrix(&fourier_matrix(self.layout.phase_dim(), false));
    }

    pub fn inverse_qft(&mut self) {
        self.apply_phase_matrix(&fourier_matrix(self.layout.phase_dim(), true));
    }

    /// `(I − 2|v⟩⟨v|) ⊗ I` for a unit vector `v` on the phase register.
    pub fn reflect_phase(&mut self, v: &ComplexVector) -> Result<()> {
        let (m, n) = (self.layout.phase_dim(), self.layout.data_dim());
        self.check_dim("phase reflection vector", m, v.dim())?;
        let mut overlap = vec![C64::new(0.0, 0.0); n];
        for p in 0..m {
            let vp = v[p].conj();
            if vp == C64::new(0.0, 0.0) {
                continue;
            }
            for (o, s) in overlap.iter_mut().zip(&self.amplitudes[p * n..(p + 1) * n]) {
                *o += vp * s;
            }
        }
        for p in 0..m {
            let vp = v[p] * 2.0;
            for (s, o) in self.amplitudes[p * n..(p + 1) * n].iter_mut().zip(&overlap) {
                *s -= vp * o;
            }
        }
        Ok(())
    }

    /// `I − 2|0⟩|0⟩⟨0|⟨0|`
    pub fn reflect_about_zero(&mut self) {
        self.amplitudes[0] = -self.amplitudes[0];
    }

    pub fn register_probabilities(&self, which: Register) -> Vec<f64> {
        let n = self.layout.data_dim();
        let mut out = vec![0.0; self.layout.dim(which)];
        for (i, z) in self.amplitudes.iter().enumerate() {
            let idx = match which {
                Register::Phase => i / n,
                Register::Data => i % n,
            };
            out[idx] += z.norm_sqr();
        }
        out
    }

    /// `√⟨t|ρ_data|t⟩` for a unit target `t`.
    pub fn data_register_fidelity(&self, target: &ComplexVector) -> Result<f64> {
        let n = self.layout.data_dim();
        self.check_dim("fidelity target", n, target.dim())?;
        target.require_unit()?;
        let value: f64 = self
            .amplitudes
            .chunks(n)
            .map(|block| {
                block
                    .iter()
                    .zip(target.iter())
                    .map(|(a, t)| t.conj() * a)
                    .sum::<C64>()
                    .norm_sqr()
            })
            .sum();
        Ok(value.sqrt().min(1.0))
    }

    /// Probability of `|0⟩` on phase qubit `qubit` after a Hadamard on it.
    /// The state itself is left untouched.
    pub fn hadamard_zero_probability(&self, qubit: usize) -> f64 {
        assert!(
            qubit < self.layout.phase_qubits(),
            "phase qubit out of range"
        );
        let n = self.layout.data_dim();
        let bit = 1 << qubit;
        let mut p = 0.0;
        for phase in (0..self.layout.phase_dim()).filter(|j| j & bit == 0) {
            let lo = &self.amplitudes[phase * n..(phase + 1) * n];
            let hi = &self.amplitudes[(phase | bit) * n..((phase | bit) + 1) * n];
            p += lo
                .iter()
                .zip(hi)
                .map(|(a, b)| ((a + b) * FRAC_1_SQRT_2).norm_sqr())
                .sum::<f64>();
        }
        p.clamp(0.0, 1.0)
    }

    /// Exact Hadamard-basis `P(|0⟩)` plus `a/shots` with `a ~ Binomial(shots, P)`.
    pub fn hadamard_qubit_estimate<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        shots: u64,
        rng: &mut R,
    ) -> Result<HadamardEstimate> {
        if shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if qubit >= self.layout.phase_qubits() {
            return Err(Error::DimensionMismatch {
                context: "phase qubit index",
                expected: self.layout.phase_qubits(),
                found: qubit,
            });
        }
        let exact = self.hadamard_zero_probability(qubit);
        let draws = Binomial::new(shots, exact)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        Ok(HadamardEstimate {
            exact,
            sampled: draws as f64 / shots as f64,
        })
    }
}

/// Dense `F_M` (or its adjoint).
pub fn fourier_matrix(m: usize, inverse: bool) -> ComplexMatrix {
    let sign = if inverse { -1.0 } else { 1.0 };
    let scale = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |j, k| {
        cis(sign * 2.0 * PI * ((j * k) % m) as f64 / m as f64) * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::power_cache;
    use crate::linalg::c64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout(m: usize, n: usize) -> RegisterLayout {
        RegisterLayout::new(m, n).unwrap()
    }

    #[test]
    fn init_zero_examples() {
        let s = StateVector::init_zero(layout(1, 1));
        assert_eq!(
            s.amplitudes(),
            &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]
        );
        let s = StateVector::init_zero(layout(2, 1));
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn layout_validation() {
        assert!(RegisterLayout::new(0, 2).is_err());
        assert!(RegisterLayout::for_data_dim(3, 6).is_err());
        assert_eq!(RegisterLayout::for_data_dim(3, 8).unwrap().data_qubits(), 3);
    }

    #[test]
    fn identity_and_flip_on_data() {
        let mut s = StateVector::init_zero(layout(1, 1));
        s.apply_on_register(&ComplexMatrix::identity(2), Register::Data)
            .unwrap();
        assert_eq!(s, StateVector::init_zero(layout(1, 1)));

        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        s.apply_on_register(&x, Register::Data).unwrap();
        assert_eq!(s.amplitudes()[1], c64(1.0, 0.0));
    }

    #[test]
    fn register_operator_dimension_mismatch() {
        let mut s = StateVector::init_zero(layout(2, 1));
        let err = s.apply_on_register(&ComplexMatrix::identity(2), Register::Phase);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn controlled_powers_single_phase_qubit() {
        let u = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let cache = power_cache(&u, 1).unwrap();
        let h = ComplexMatrix::from_real_rows(&[
            &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ]);
        let mut s = StateVector::init_zero(layout(1, 1));
        s.apply_on_register(&h, Register::Phase).unwrap();
        s.apply_controlled_powers(&cache).unwrap();
        let a = s.amplitudes();
        // block 0 untouched, block 1 flipped
        assert!((a[0] - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!(a[1].norm() < 1e-15);
        assert!(a[2].norm() < 1e-15);
        assert!((a[3] - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn controlled_powers_phase_kickback_per_block() {
        let lambda = 0.3;
        let u = ComplexMatrix::from_diagonal(&[cis(2.0 * PI * lambda), c64(1.0, 0.0)]);
        let cache = power_cache(&u, 3).unwrap();
        let mut s = StateVector::init_zero(layout(3, 1));
        s.qft();
        s.apply_controlled_powers(&cache).unwrap();
        let scale = 1.0 / 8f64.sqrt();
        for j in 0..8 {
            let expected = cis(2.0 * PI * lambda * j as f64) * scale;
            assert!((s.amplitudes()[2 * j] - expected).norm() < 1e-12);
        }
        s.apply_controlled_powers_inverse(&cache).unwrap();
        for j in 0..8 {
            assert!((s.amplitudes()[2 * j] - c64(scale, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn qft_examples() {
        let l = layout(2, 1);
        let mut s = StateVector::init_zero(l);
        s.qft();
        for p in s.register_probabilities(Register::Phase) {
            assert!((p - 0.25).abs() < 1e-15);
        }

        // |1⟩ on the phase register → (1, i, −1, −i)/2
        let mut s =
            StateVector::product(l, &ComplexVector::basis(4, 1), &ComplexVector::basis(2, 0))
                .unwrap();
        s.qft();
        let expected = [c64(0.5, 0.0), c64(0.0, 0.5), c64(-0.5, 0.0), c64(0.0, -0.5)];
        for (p, e) in expected.iter().enumerate() {
            assert!((s.amplitudes()[2 * p] - e).norm() < 1e-15);
        }
        s.inverse_qft();
        assert!((s.amplitudes()[2] - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let l = layout(1, 1);
        let t = ComplexVector::basis(2, 0);
        let s = StateVector::product(l, &ComplexVector::basis(2, 0), &t).unwrap();
        assert!((s.data_register_fidelity(&t).unwrap() - 1.0).abs() < 1e-15);
        let s = StateVector::product(l, &ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1))
            .unwrap();
        assert_eq!(s.data_register_fidelity(&t).unwrap(), 0.0);

        // (|0⟩|a⟩ + |1⟩|b⟩)/√2 with a ⊥ b
        let r = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(
            l,
            vec![c64(r, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(r, 0.0)],
        )
        .unwrap();
        assert!((s.data_register_fidelity(&t).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hadamard_plus_and_minus() {
        let l = layout(1, 1);
        let r = FRAC_1_SQRT_2;
        let plus = ComplexVector::from_real(&[r, r]);
        let minus = ComplexVector::from_real(&[r, -r]);
        let data = ComplexVector::basis(2, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);

        let s = StateVector::product(l, &plus, &data).unwrap();
        let est = s.hadamard_qubit_estimate(0, 7, &mut rng).unwrap();
        assert!((est.exact - 1.0).abs() < 1e-15);
        assert_eq!(est.sampled, 1.0);

        let s = StateVector::product(l, &minus, &data).unwrap();
        let est = s.hadamard_qubit_estimate(0, 7, &mut rng).unwrap();
        assert!(est.exact < 1e-15);
        assert_eq!(est.sampled, 0.0);
    }

    #[test]
    fn hadamard_estimate_is_seeded() {
        let l = layout(1, 1);
        let s = StateVector::product(l, &ComplexVector::basis(2, 0), &ComplexVector::basis(2, 0))
            .unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            s.hadamard_qubit_estimate(0, 10, &mut rng).unwrap()
        };
        let a = draw(42);
        assert!((a.exact - 0.5).abs() < 1e-15);
        assert_eq!(a, draw(42));
        assert_eq!((a.sampled * 10.0).fract(), 0.0);
        assert!(s
            .hadamard_qubit_estimate(0, 0, &mut ChaCha8Rng::seed_from_u64(0))
            .is_err());
    }

    #[test]
    fn reflect_phase_leaves_orthogonal_branch() {
        let l = layout(2, 1);
        let f = ComplexVector::from_real(&[0.0, 1.0, 1.0, 1.0])
            .normalized()
            .unwrap();
        let mut s = StateVector::init_zero(l);
        let before = s.clone();
        s.reflect_phase(&f).unwrap();
        assert!(s.to_vector().max_abs_diff(&before.to_vector()) < 1e-15);
    }
}
