//! Dense reference constructions, built directly from definitions so they
//! share no code path with the structured operators they check.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qann::linalg::{ComplexMatrix, ComplexVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> ComplexVector {
    ComplexVector::new(
        (0..n)
            .map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect(),
    )
}

pub fn random_unit(n: usize, rng: &mut impl Rng) -> ComplexVector {
    let v = random_vector(n, rng);
    let norm = v.norm();
    v.scaled(C::new(1.0 / norm, 0.0))
}

/// `Σ_j c_j c_j†` over `k` random columns, scaled so the spectrum stays in `[0, 1)`.
pub fn random_psd(n: usize, k: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(n, n);
    for _ in 0..k {
        let c = random_vector(n, rng);
        w = w.add(&ComplexMatrix::outer(&c, &c));
    }
    let scale = 0.9 / w.trace().re;
    w.scaled(C::new(scale, 0.0))
}

/// `e^{i2πtW}` by scaling and squaring of a truncated Taylor series.
pub fn taylor_exp(w: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = w.rows();
    let a = w.scaled(C::new(0.0, 2.0 * PI * t));
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let a = a.scaled(C::new(0.5f64.powi(squarings as i32), 0.0));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..30 {
        term = term.matmul(&a).scaled(C::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Fourier matrix `e^{±i2πjk/M}/√M`.
pub fn dense_fourier(m: usize, inverse: bool) -> ComplexMatrix {
    let sign = if inverse { -1.0 } else { 1.0 };
    let s = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |j, k| {
        C::from_polar(s, sign * 2.0 * PI * ((j * k) % m) as f64 / m as f64)
    })
}

/// `Σ_p |p⟩⟨p| ⊗ U^p`, powers by repeated multiplication.
pub fn dense_controlled(u: &ComplexMatrix, phase_dim: usize) -> ComplexMatrix {
    let n = u.rows();
    let mut out = ComplexMatrix::zeros(phase_dim * n, phase_dim * n);
    let mut power = ComplexMatrix::identity(n);
    for p in 0..phase_dim {
        for i in 0..n {
            for j in 0..n {
                out[(p * n + i, p * n + j)] = power[(i, j)];
            }
        }
        power = power.matmul(u);
    }
    out
}

pub fn on_phase(a: &ComplexMatrix, data_dim: usize) -> ComplexMatrix {
    a.kron(&ComplexMatrix::identity(data_dim))
}

pub fn on_data(b: &ComplexMatrix, phase_dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(phase_dim).kron(b)
}

/// `(I − 2ff†) ⊗ I` with `f = (0, 1, …, 1)/√(M−1)`.
pub fn dense_marking(phase_dim: usize, data_dim: usize) -> ComplexMatrix {
    let mut f = vec![C::new(1.0 / ((phase_dim - 1) as f64).sqrt(), 0.0); phase_dim];
    f[0] = C::new(0.0, 0.0);
    let f = ComplexVector::new(f);
    let r = ComplexMatrix::identity(phase_dim)
        .sub(&ComplexMatrix::outer(&f, &f).scaled(C::new(2.0, 0.0)));
    on_phase(&r, data_dim)
}

/// Full phase-estimation circuit on `|0⟩|0⟩`, with input preparation `prep`.
pub fn dense_pea(u: &ComplexMatrix, prep: &ComplexMatrix, phase_dim: usize) -> ComplexMatrix {
    let n = u.rows();
    on_phase(&dense_fourier(phase_dim, true), n)
        .matmul(&dense_controlled(u, phase_dim))
        .matmul(&on_phase(&dense_fourier(phase_dim, false), n))
        .matmul(&on_data(prep, phase_dim))
}

/// `I − 2|v⟩⟨v|`
pub fn reflection(v: &ComplexVector) -> ComplexMatrix {
    ComplexMatrix::identity(v.dim()).sub(&ComplexMatrix::outer(v, v).scaled(C::new(2.0, 0.0)))
}

/// Dense matrix of a linear map given by its action on basis vectors.
pub fn matrix_of(
    dim: usize,
    mut apply: impl FnMut(ComplexVector) -> ComplexVector,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        out.set_column(j, &apply(ComplexVector::basis(dim, j)));
    }
    out
}

/// Orthonormal basis from the columns of a random square matrix (classical Gram–Schmidt, twice).
pub fn random_orthonormal(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = random_vector(n, rng);
        for _ in 0..2 {
            for q in &cols {
                v = v.sub(&q.scaled(q.dot(&v)));
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v.scaled(C::new(1.0 / norm, 0.0)));
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// `Σ_j λ_j q_j q_j†`
pub fn from_spectrum(q: &ComplexMatrix, lambdas: &[f64]) -> ComplexMatrix {
    let n = q.rows();
    let mut w = ComplexMatrix::zeros(n, n);
    for (j, &l) in lambdas.iter().enumerate() {
        let c = q.column(j);
        w = w.add(&ComplexMatrix::outer(&c, &c).scaled(C::new(l, 0.0)));
    }
    w
}
