//! Desk-scale statevector simulation of a quantum model of a Widrow–Hoff
//! trained linear autoassociator.
//!
//! Phase estimation over `U = e^{i2πW}` writes each eigenphase of the weight
//! matrix into a phase register; amplitude amplification then drains the
//! zero-eigenphase branch, leaving the data register in `QQ†|x⟩`, the output
//! of the fully trained network. The classical learning rule and dense
//! spectral routines are included as references.
//!
//! Modules, bottom up:
//! - [`linalg`]: dense complex kernels, Jacobi eigen/SVD, unitary exponential, Householder completion
//! - [`register`]: the two-register statevector and its structured operators
//! - [`learning`]: the Widrow–Hoff rule, eigenvalue flattening, the limit projector
//! - [`evolution`]: exact and split-product evolution operators with the `U^{2^k}` cache
//! - [`pipeline`]: phase estimation, marking, amplification and iteration traces
//! - [`experiment`]: seeded experiment runs and CSV output

pub mod error;
pub mod evolution;
pub mod experiment;
pub mod learning;
pub mod linalg;
pub mod pipeline;
pub mod register;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
