//! Evolution operator `U = e^{i2πWt}` for `W = Σ_j x_j x_j†`, built either
//! exactly from the spectrum or by symmetric (Strang) splitting into
//! Householder-conjugated rank-one exponentials, together with the
//! repeated-squaring table `U^{2^k}` that phase estimation consumes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{cis, householder_unitary, unitary_exponential, ComplexMatrix, ComplexVector};

/// `e^{i2πt·xx†} = H·Ī·H†` with `H` the Householder completion of `x/‖x‖` and
/// `Ī = diag(e^{i2πt‖x‖²}, 1, …, 1)`.
pub fn rank_one_exponential(x: &ComplexVector, t: f64) -> Result<ComplexMatrix> {
    let norm_sqr = x.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::Zero("rank-one exponential column"));
    }
    let h = householder_unitary(&x.normalized()?)?;
    let phase = cis(2.0 * PI * t * norm_sqr);
    // Ī only touches the first column of H.
    let mut hd = h.clone();
    for i in 0..x.dim() {
        hd[(i, 0)] *= phase;
    }
    Ok(hd.matmul(&h.adjoint()))
}

/// One factor `e^{i2π·time·x_j x_j†}` of a splitting, identified by column index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitFactor {
    pub column: usize,
    pub time: f64,
}

/// Symmetric second-order splitting of `e^{i2πt Σ x_j x_j†}` over `steps` slices.
#[derive(Clone, Debug)]
pub struct TrotterPlan {
    pub columns: Vec<ComplexVector>,
    pub t: f64,
    pub steps: usize,
}

impl TrotterPlan {
    pub fn new(columns: Vec<ComplexVector>, t: f64, steps: usize) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Config(
                "Trotter plan needs at least one column".into(),
            ));
        }
        if steps == 0 {
            return Err(Error::Config("Trotter plan needs at least one step".into()));
        }
        let dim = columns[0].dim();
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "Trotter plan columns",
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { columns, t, steps })
    }

    /// Columns of a training matrix, in order.
    pub fn from_matrix(x: &ComplexMatrix, t: f64, steps: usize) -> Result<Self> {
        let columns = (0..x.cols()).map(|j| x.column(j)).collect();
        Self::new(columns, t, steps)
    }

    pub fn dim(&self) -> usize {
        self.columns[0].dim()
    }

    /// Factor sequence of a single slice of length `t/steps`, leftmost first.
    ///
    /// The last column is peeled off first, so two columns give
    /// `E(x₂, τ/2)·E(x₁, τ)·E(x₂, τ/2)`.
    pub fn slice_factors(&self) -> Vec<SplitFactor> {
        fn recurse(kappa: usize, time: f64, out: &mut Vec<SplitFactor>) {
            if kappa == 1 {
                out.push(SplitFactor { column: 0, time });
                return;
            }
            let outer = SplitFactor {
                column: kappa - 1,
                time: time / 2.0,
            };
            out.push(outer);
            recurse(kappa - 1, time, out);
            out.push(outer);
        }
        let mut out = Vec::with_capacity(2 * self.columns.len() - 1);
        recurse(self.columns.len(), self.t / self.steps as f64, &mut out);
        out
    }
}

/// Product of the splitting factors, repeated over all slices.
pub fn strang_split(plan: &TrotterPlan) -> Result<ComplexMatrix> {
    let mut slice = ComplexMatrix::identity(plan.dim());
    for factor in plan.slice_factors() {
        let e = rank_one_exponential(&plan.columns[factor.column], factor.time)?;
        slice = slice.matmul(&e);
    }
    let mut total = slice.clone();
    for _ in 1..plan.steps {
        total = total.matmul(&slice);
    }
    Ok(total)
}

/// `Some(message)` when `λ_max·t ≥ 1`, i.e. eigenphases would wrap around.
pub fn phase_wraparound_warning(lambda_max: f64, t: f64) -> Option<String> {
    (lambda_max * t.abs() >= 1.0).then(|| {
        format!(
            "lambda_max * t = {} >= 1: eigenphases wrap around and alias smaller eigenvalues",
            lambda_max * t.abs()
        )
    })
}

#[derive(Clone, Debug)]
pub enum Provenance {
    /// From the spectral decomposition of `W`.
    Exact,
    Trotter(TrotterPlan),
    /// Supplied directly (e.g. a generated random case).
    Given,
}

/// A unitary together with the cache `U^{2^k}`, `k = 0 … m−1`.
#[derive(Clone, Debug)]
pub struct EvolutionOperator {
    unitary: ComplexMatrix,
    powers: Vec<ComplexMatrix>,
    adjoint_powers: Vec<ComplexMatrix>,
    provenance: Provenance,
}

impl EvolutionOperator {
    pub fn new(unitary: ComplexMatrix, levels: usize, provenance: Provenance) -> Result<Self> {
        unitary.require_unitary()?;
        let mut powers = Vec::with_capacity(levels);
        let mut current = unitary.clone();
        for k in 0..levels {
            if k > 0 {
                current = current.matmul(&current);
            }
            powers.push(current.clone());
        }
        let adjoint_powers = powers.iter().map(ComplexMatrix::adjoint).collect();
        Ok(Self {
            unitary,
            powers,
            adjoint_powers,
            provenance,
        })
    }

    /// `e^{i2πWt}` from the spectral decomposition.
    pub fn exact(w: &ComplexMatrix, t: f64, levels: usize) -> Result<Self> {
        Self::new(unitary_exponential(w, t)?, levels, Provenance::Exact)
    }

    pub fn trotter(plan: TrotterPlan, levels: usize) -> Result<Self> {
        let u = strang_split(&plan)?;
        Self::new(u, levels, Provenance::Trotter(plan))
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn levels(&self) -> usize {
        self.powers.len()
    }

    /// `U^{2^k}`
    pub fn power(&self, k: usize) -> &ComplexMatrix {
        &self.powers[k]
    }

    pub fn adjoint_power(&self, k: usize) -> &ComplexMatrix {
        &self.adjoint_powers[k]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest deviation of any cached power from unitarity.
    pub fn max_unitary_deviation(&self) -> f64 {
        self.powers
            .iter()
            .map(ComplexMatrix::unitary_deviation)
            .fold(0.0, f64::max)
    }
}

/// Repeated-squaring table for a unitary of unknown origin.
pub fn power_cache(u: &ComplexMatrix, levels: usize) -> Result<EvolutionOperator> {
    EvolutionOperator::new(u.clone(), levels, Provenance::Given)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn example_columns() -> Vec<ComplexVector> {
        vec![
            ComplexVector::from_real(&[-0.1, -0.1, 0.1, -0.1]),
            ComplexVector::from_real(&[0.1, -0.1, -0.1, 0.1]),
        ]
    }

    #[test]
    fn rank_one_at_zero_time_is_identity() {
        let e = rank_one_exponential(&example_columns()[0], 0.0).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn rank_one_of_e1() {
        let t = 0.3;
        let e = rank_one_exponential(&ComplexVector::basis(3, 0), t).unwrap();
        let expected =
            ComplexMatrix::from_diagonal(&[cis(2.0 * PI * t), c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(e.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn rank_one_matches_spectral_exponential() {
        let x = &example_columns()[0];
        let e = rank_one_exponential(x, 1.0).unwrap();
        let oracle = unitary_exponential(&ComplexMatrix::outer(x, x), 1.0).unwrap();
        assert!(e.max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn rank_one_rejects_zero() {
        assert!(rank_one_exponential(&ComplexVector::zeros(2), 1.0).is_err());
    }

    #[test]
    fn slice_factor_order() {
        let plan = TrotterPlan::new(example_columns(), 1.0, 1).unwrap();
        assert_eq!(
            plan.slice_factors(),
            vec![
                SplitFactor {
                    column: 1,
                    time: 0.5
                },
                SplitFactor {
                    column: 0,
                    time: 1.0
                },
                SplitFactor {
                    column: 1,
                    time: 0.5
                },
            ]
        );
        let three = TrotterPlan::new(
            vec![
                ComplexVector::basis(3, 0),
                ComplexVector::basis(3, 1),
                ComplexVector::basis(3, 2),
            ],
            2.0,
            4,
        )
        .unwrap();
        let f = three.slice_factors();
        assert_eq!(f.len(), 5);
        assert_eq!(
            f.iter().map(|s| s.column).collect::<Vec<_>>(),
            vec![2, 1, 0, 1, 2]
        );
        assert_eq!(
            f.iter().map(|s| s.time).collect::<Vec<_>>(),
            vec![0.25, 0.25, 0.5, 0.25, 0.25]
        );
    }

    #[test]
    fn single_column_split_is_exact() {
        let x = example_columns().remove(0);
        let plan = TrotterPlan::new(vec![x.clone()], 1.0, 1).unwrap();
        let s = strang_split(&plan).unwrap();
        let exact = unitary_exponential(&ComplexMatrix::outer(&x, &x), 1.0).unwrap();
        assert!(s.max_abs_diff(&exact) < 1e-10);
    }

    #[test]
    fn empty_plan_rejected() {
        assert!(TrotterPlan::new(vec![], 1.0, 1).is_err());
    }

    #[test]
    fn split_error_shrinks_with_slices() {
        let cols = example_columns();
        let w =
            ComplexMatrix::outer(&cols[0], &cols[0]).add(&ComplexMatrix::outer(&cols[1], &cols[1]));
        let exact = unitary_exponential(&w, 1.0).unwrap();
        let err = |r| {
            let plan = TrotterPlan::new(cols.clone(), 1.0, r).unwrap();
            strang_split(&plan).unwrap().sub(&exact).spectral_norm()
        };
        let (e1, e4) = (err(1), err(4));
        assert!(e1.is_finite() && e4 < e1, "e1={e1} e4={e4}");
    }

    #[test]
    fn power_cache_of_identity_and_diagonal() {
        let id = power_cache(&ComplexMatrix::identity(4), 3).unwrap();
        for k in 0..3 {
            assert!(id.power(k).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        }
        let d = ComplexMatrix::from_diagonal(&[cis(0.1), cis(-0.7)]);
        let cache = power_cache(&d, 4).unwrap();
        for k in 0..4 {
            let f = (1u32 << k) as f64;
            let expected = ComplexMatrix::from_diagonal(&[cis(0.1 * f), cis(-0.7 * f)]);
            assert!(cache.power(k).max_abs_diff(&expected) < 1e-13);
        }
    }

    #[test]
    fn power_cache_rejects_non_unitary() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(power_cache(&a, 2), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn wraparound_warning() {
        assert!(phase_wraparound_warning(0.06, 1.0).is_none());
        assert!(phase_wraparound_warning(1.2, 1.0).is_some());
    }
}
