//! Classical Widrow–Hoff (LMS) reference for the linear autoassociator.
//!
//! The batch rule `W ← W + η(X − WX)X†` leaves the eigenvectors of `XX†`
//! alone and drives each eigenvalue along `1 − (1 − ηλ)^j`, so the weights
//! converge to the projector `QQ†` onto the principal subspace of `X`.

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, svd_small, ComplexMatrix, ComplexVector, SpectralDecomposition, C64,
};

/// Step size below which the iteration is treated as converged.
pub const CONVERGENCE_STEP: f64 = 1e-12;

/// Training inputs as the columns of `X` (N × κ).
#[derive(Clone, Debug)]
pub struct TrainingSet {
    x: ComplexMatrix,
    scale: f64,
}

impl TrainingSet {
    pub fn new(x: ComplexMatrix) -> Result<Self> {
        Self::scaled(x, 1.0)
    }

    /// `scale · raw`
    pub fn scaled(raw: ComplexMatrix, scale: f64) -> Result<Self> {
        if raw.cols() == 0 || raw.rows() == 0 {
            return Err(Error::Zero("training set"));
        }
        let x = raw.scaled(C64::new(scale, 0.0));
        if (0..x.cols()).any(|j| x.column(j).norm_sqr() == 0.0) {
            return Err(Error::Zero("training column"));
        }
        Ok(Self { x, scale })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    /// κ
    pub fn len(&self) -> usize {
        self.x.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.x.cols() == 0
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        (0..self.x.cols()).map(|j| self.x.column(j)).collect()
    }
}

/// Hermitian PSD weight matrix with its spectrum cached.
#[derive(Clone, Debug)]
pub struct WeightMatrix {
    w: ComplexMatrix,
    spectral: SpectralDecomposition,
}

impl WeightMatrix {
    pub fn new(w: ComplexMatrix) -> Result<Self> {
        w.require_hermitian()?;
        let w = w.hermitian_part();
        let spectral = eig_hermitian(&w)?;
        if let Some(&min) = spectral.eigenvalues.last() {
            if min < -1e-12 {
                return Err(Error::Config(format!(
                    "weight matrix is not positive semidefinite (eigenvalue {min})"
                )));
            }
        }
        Ok(Self { w, spectral })
    }

    /// `W = XX†`
    pub fn from_training(set: &TrainingSet) -> Result<Self> {
        let x = set.matrix();
        Self::new(x.matmul(&x.adjoint()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectral.eigenvalues[0]
    }

    /// Largest learning constant for which the iteration still flattens: `2/λ_max`.
    pub fn stability_bound(&self) -> f64 {
        2.0 / self.lambda_max()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearningConfig {
    pub eta: f64,
    pub epochs: usize,
}

impl LearningConfig {
    /// Rejects `η ≤ 0` and `η > 2/λ_max` (with a relative slack of 1e-12 so a
    /// typed-in boundary value is still accepted).
    pub fn validate(&self, weights: &WeightMatrix) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.eta
            )));
        }
        let bound = weights.stability_bound();
        if self.eta > bound * (1.0 + 1e-12) {
            return Err(Error::UnstableLearningRate {
                eta: self.eta,
                bound,
            });
        }
        Ok(())
    }
}

/// `W + η(X − WX)X†`
pub fn widrow_hoff_step(
    w_prev: &ComplexMatrix,
    set: &TrainingSet,
    eta: f64,
) -> Result<ComplexMatrix> {
    let x = set.matrix();
    if w_prev.rows() != x.rows() || w_prev.cols() != x.rows() {
        return Err(Error::DimensionMismatch {
            context: "Widrow-Hoff weights",
            expected: x.rows(),
            found: if w_prev.rows() != x.rows() {
                w_prev.rows()
            } else {
                w_prev.cols()
            },
        });
    }
    let error = x.sub(&w_prev.matmul(x));
    Ok(w_prev.add(&error.matmul(&x.adjoint()).scaled(C64::new(eta, 0.0))))
}

/// `1 − (1 − ηλ)^j` per eigenvalue.
pub fn eigenvalue_flattening(eigenvalues: &[f64], eta: f64, epoch: usize) -> Vec<f64> {
    let j = i32::try_from(epoch).unwrap_or(i32::MAX);
    eigenvalues
        .iter()
        .map(|&l| 1.0 - (1.0 - eta * l).powi(j))
        .collect()
}

/// The limit `QQ†` of the iteration: projector onto the left singular
/// vectors of `X` above the rank cutoff.
pub fn limit_weights(set: &TrainingSet) -> Result<ComplexMatrix> {
    let svd = svd_small(set.matrix())?;
    if svd.rank() == 0 {
        return Err(Error::Zero("training set"));
    }
    let q = svd.principal_left();
    Ok(q.matmul(&q.adjoint()))
}

#[derive(Clone, Debug)]
pub struct NetworkOutput {
    /// `QQ†x`
    pub output: ComplexVector,
    /// `‖QQ†x‖²`
    pub success_probability: f64,
}

/// Output of the fully trained network on input `x`.
pub fn network_output(set: &TrainingSet, x: &ComplexVector) -> Result<NetworkOutput> {
    if x.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            context: "network input",
            expected: set.dim(),
            found: x.dim(),
        });
    }
    let projector = limit_weights(set)?;
    let output = projector.mul_vec(x);
    let success_probability = output.norm_sqr();
    Ok(NetworkOutput {
        output,
        success_probability,
    })
}

#[derive(Clone, Debug)]
pub struct EpochRecord {
    pub epoch: usize,
    /// `‖W_[j] − QQ†‖_F`
    pub frobenius_error: f64,
    /// `q_i† W_[j] q_i` along the eigenvectors of `XX†`, descending order.
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LearningTrace {
    pub records: Vec<EpochRecord>,
    /// First epoch whose update moved `W` by at most [`CONVERGENCE_STEP`].
    pub converged_at: Option<usize>,
    pub final_weights: ComplexMatrix,
}

/// Iterate the rule from `W = 0`, logging epoch 0 … `epochs` (or until converged).
pub fn train(set: &TrainingSet, config: &LearningConfig) -> Result<LearningTrace> {
    let gram = WeightMatrix::from_training(set)?;
    config.validate(&gram)?;
    let target = limit_weights(set)?;
    let directions: Vec<ComplexVector> = (0..gram.spectral().dim())
        .map(|j| gram.spectral().eigenvector(j))
        .collect();

    let record = |epoch: usize, w: &ComplexMatrix| EpochRecord {
        epoch,
        frobenius_error: w.sub(&target).frobenius_norm(),
        eigenvalues: directions.iter().map(|q| q.dot(&w.mul_vec(q)).re).collect(),
    };

    let n = set.dim();
    let mut w = ComplexMatrix::zeros(n, n);
    let mut records = vec![record(0, &w)];
    let mut converged_at = None;
    for epoch in 1..=config.epochs {
        let next = widrow_hoff_step(&w, set, config.eta)?;
        let step = next.sub(&w).frobenius_norm();
        w = next;
        records.push(record(epoch, &w));
        if step <= CONVERGENCE_STEP {
            converged_at = Some(epoch);
            break;
        }
    }
    Ok(LearningTrace {
        records,
        converged_at,
        final_weights: w,
    })
}

/// `P² = P = P†` within `tol`.
pub fn is_orthogonal_projector(p: &ComplexMatrix, tol: f64) -> bool {
    p.is_hermitian(tol) && p.matmul(p).max_abs_diff(p) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_data() -> TrainingSet {
        TrainingSet::scaled(
            ComplexMatrix::from_real_rows(&[
                &[-1.0, 1.0],
                &[-1.0, -1.0],
                &[1.0, -1.0],
                &[-1.0, 1.0],
            ]),
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn projector_is_fixed_point() {
        let set = example_data();
        let p = limit_weights(&set).unwrap();
        let next = widrow_hoff_step(&p, &set, 0.7).unwrap();
        assert!(next.max_abs_diff(&p) < 1e-14);
    }

    #[test]
    fn step_from_zero_is_scaled_gram() {
        let set = example_data();
        let w = widrow_hoff_step(&ComplexMatrix::zeros(4, 4), &set, 0.5).unwrap();
        let x = set.matrix();
        let expected = x.matmul(&x.adjoint()).scaled(C64::new(0.5, 0.0));
        assert!(w.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn two_steps_follow_closed_form() {
        let set = example_data();
        let mut w = ComplexMatrix::zeros(4, 4);
        for _ in 0..2 {
            w = widrow_hoff_step(&w, &set, 1.0).unwrap();
        }
        let eig = eig_hermitian(&w.hermitian_part()).unwrap().eigenvalues;
        assert!((eig[0] - 0.1164).abs() < 1e-12, "{eig:?}");
        assert!((eig[1] - 0.0396).abs() < 1e-12);
    }

    #[test]
    fn step_dimension_mismatch() {
        let err = widrow_hoff_step(&ComplexMatrix::zeros(3, 3), &example_data(), 1.0);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn flattening_examples() {
        assert_eq!(eigenvalue_flattening(&[0.0], 1.0, 17), vec![0.0]);
        assert!((eigenvalue_flattening(&[0.06], 1.0, 2)[0] - 0.1164).abs() < 1e-15);
        assert!((eigenvalue_flattening(&[0.06, 0.5], 1.9, 2000)[0] - 1.0).abs() < 1e-12);
        // ηλ = 2 oscillates 0, 2, 0, …
        let seq: Vec<f64> = (0..5)
            .map(|j| eigenvalue_flattening(&[0.5], 4.0, j)[0])
            .collect();
        assert_eq!(seq, vec![0.0, 2.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn limit_weights_example_data() {
        let p = limit_weights(&example_data()).unwrap();
        let third = 1.0 / 3.0;
        let expected = ComplexMatrix::from_real_rows(&[
            &[third, 0.0, -third, third],
            &[0.0, 1.0, 0.0, 0.0],
            &[-third, 0.0, third, -third],
            &[third, 0.0, -third, third],
        ]);
        assert!(p.max_abs_diff(&expected) < 1e-12);
        assert!(is_orthogonal_projector(&p, 1e-9));
    }

    #[test]
    fn limit_of_e1() {
        let set =
            TrainingSet::new(ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0]])).unwrap();
        let p = limit_weights(&set).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        assert!(p.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_training_rejected() {
        assert!(TrainingSet::new(ComplexMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn network_output_edges() {
        let set = example_data();
        let inside = ComplexVector::basis(4, 1);
        let out = network_output(&set, &inside).unwrap();
        assert!(out.output.max_abs_diff(&inside) < 1e-12);
        assert!((out.success_probability - 1.0).abs() < 1e-12);

        let outside = ComplexVector::from_real(&[1.0, 0.0, 1.0, 0.0])
            .normalized()
            .unwrap();
        let out = network_output(&set, &outside).unwrap();
        assert!(out.output.norm() < 1e-12);
        assert!(out.success_probability < 1e-24);
    }

    #[test]
    fn stability_bound_enforced() {
        let set = example_data();
        let gram = WeightMatrix::from_training(&set).unwrap();
        let bound = gram.stability_bound();
        assert!((bound - 2.0 / 0.06).abs() < 1e-9);
        assert!(LearningConfig {
            eta: bound,
            epochs: 3
        }
        .validate(&gram)
        .is_ok());
        let err = LearningConfig {
            eta: bound * 1.01,
            epochs: 3,
        }
        .validate(&gram);
        assert!(matches!(err, Err(Error::UnstableLearningRate { .. })));
        assert!(LearningConfig {
            eta: -1.0,
            epochs: 3
        }
        .validate(&gram)
        .is_err());
    }

    #[test]
    fn training_converges() {
        let trace = train(
            &example_data(),
            &LearningConfig {
                eta: 1.0,
                epochs: 2000,
            },
        )
        .unwrap();
        let last = trace.records.last().unwrap();
        assert!(last.frobenius_error <= 1e-6);
        assert!(trace.converged_at.is_some());
        for pair in trace.records.windows(2) {
            assert!(pair[1].frobenius_error <= pair[0].frobenius_error + 1e-15);
        }
    }
}
