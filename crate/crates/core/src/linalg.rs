//! Dense complex vectors and matrices, plus the spectral kernels the rest of
//! the crate is built on: Hermitian eigendecomposition (cyclic Jacobi),
//! thin SVD (one-sided Jacobi), the unitary exponential `e^{i2πWt}` and the
//! Householder unitary completion of a unit vector.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for "unit norm" preconditions.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance of the unitarity / Hermiticity predicates.
pub const OPERATOR_TOL: f64 = 1e-10;
/// Relative cutoff below which a singular value counts as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Column vector of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    pub fn require_unit(&self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::NotUnit { norm: self.norm() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Zero("vector"));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// Inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "sub: dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "add: dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            out.extend(other.0.iter().map(|b| a * b));
        }
        Self(out)
    }
}

impl Deref for ComplexVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(rows * cols, data.len(), "row-major data has wrong length");
        Self { rows, cols, data }
    }

    /// Real matrix from a slice of equally long rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_columns(columns: &[ComplexVector]) -> Self {
        let rows = columns.first().map_or(0, |c| c.dim());
        assert!(columns.iter().all(|c| c.dim() == rows), "ragged columns");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    /// `v w†`
    pub fn outer(v: &ComplexVector, w: &ComplexVector) -> Self {
        Self::from_fn(v.dim(), w.dim(), |i, j| v[i] * w[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector) {
        assert_eq!(v.dim(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> ComplexVector {
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        self.mul_slice_into(v, &mut out);
        ComplexVector::new(out)
    }

    /// `out = self · v` without allocating.
    pub fn mul_slice_into(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        assert_eq!(self.rows, out.len(), "mul_vec: output dimension mismatch");
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, via the eigenvalues of `A†A`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        let gram = gram.hermitian_part();
        eig_hermitian(&gram)
            .map(|d| {
                d.eigenvalues
                    .first()
                    .copied()
                    .unwrap_or(0.0)
                    .max(0.0)
                    .sqrt()
            })
            .unwrap_or(f64::NAN)
    }

    /// `(A + A†)/2`; strips rounding noise from matrices that are Hermitian by construction.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).max_abs()
    }

    /// `‖A†A − I‖_max`
    pub fn unitary_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.rows))
            .max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// Columns orthonormal: `‖A†A − I‖_max ≤ tol` for a possibly tall matrix.
    pub fn has_orthonormal_columns(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.cols))
            .max_abs()
            <= tol
    }

    pub fn require_unitary(&self) -> Result<()> {
        let deviation = self.unitary_deviation();
        if deviation <= OPERATOR_TOL {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    pub fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation <= OPERATOR_TOL {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    /// Apply a 2×2 block `[[a, b], [c, d]]` to columns `p`, `q` from the right.
    fn rotate_columns(&mut self, p: usize, q: usize, a: C64, b: C64, c: C64, d: C64) {
        for i in 0..self.rows {
            let xp = self[(i, p)];
            let xq = self[(i, q)];
            self[(i, p)] = xp * a + xq * c;
            self[(i, q)] = xp * b + xq * d;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order and
/// eigenvectors as the matching columns of `eigenvectors`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> ComplexVector {
        self.eigenvectors.column(j)
    }

    /// `Q f(Λ) Q†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let q = &self.eigenvectors;
        let n = self.dim();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * f(self.eigenvalues[j]));
        scaled.matmul(&q.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| C64::new(l, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eig_hermitian (square matrix)",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    a.require_hermitian()?;
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    let off_diagonal = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let g_abs = g.norm();
                if g_abs <= f64::MIN_POSITIVE || g_abs <= 1e-300 * scale {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Phase D = diag(1, conj(e)) turns the pair real, then a real rotation.
                let e = g / g_abs;
                let theta = (aqq - app) / (2.0 * g_abs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = [[c, s], [-s·ē, c·ē]]
                let ga = C64::new(c, 0.0);
                let gb = C64::new(s, 0.0);
                let gc = -e.conj() * s;
                let gd = e.conj() * c;
                m.rotate_columns(p, q, ga, gb, gc, gd);
                // rows: m ← G† m
                for j in 0..n {
                    let xp = m[(p, j)];
                    let xq = m[(q, j)];
                    m[(p, j)] = ga.conj() * xp + gc.conj() * xq;
                    m[(q, j)] = gb.conj() * xp + gd.conj() * xq;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                v.rotate_columns(p, q, ga, gb, gc, gd);
            }
        }
        converged = off_diagonal(&m) <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Thin singular value decomposition `X = L Σ R†`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    /// rows × k, orthonormal columns
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    /// cols × k, orthonormal columns
    pub right: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `RANK_CUTOFF · σ_max`.
    pub fn rank(&self) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .take_while(|&&s| s > RANK_CUTOFF * smax && s > 0.0)
            .count()
    }

    /// Leading `rank()` left singular vectors.
    pub fn principal_left(&self) -> ComplexMatrix {
        let r = self.rank();
        ComplexMatrix::from_fn(self.left.rows(), r, |i, j| self.left[(i, j)])
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let ls = ComplexMatrix::from_fn(self.left.rows(), k, |i, j| {
            self.left[(i, j)] * self.singular_values[j]
        });
        ls.matmul(&self.right.adjoint())
    }
}

/// One-sided (Hestenes) Jacobi SVD, suited to the small training matrices here.
pub fn svd_small(x: &ComplexMatrix) -> Result<Svd> {
    if x.rows() < x.cols() {
        let t = svd_small(&x.adjoint())?;
        return Ok(Svd {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        });
    }
    let (rows, cols) = (x.rows(), x.cols());
    let mut a = x.clone();
    let mut v = ComplexMatrix::identity(cols);

    let col_dot = |a: &ComplexMatrix, p: usize, q: usize| -> C64 {
        (0..rows).map(|i| a[(i, p)].conj() * a[(i, q)]).sum()
    };

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = col_dot(&a, p, p).re;
                let beta = col_dot(&a, q, q).re;
                let gamma = col_dot(&a, p, q);
                let g_abs = gamma.norm();
                if g_abs <= 1e-15 * (alpha * beta).sqrt() || g_abs == 0.0 {
                    continue;
                }
                rotated = true;
                let e = gamma / g_abs;
                let zeta = (beta - alpha) / (2.0 * g_abs);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // q-column rephased by ē, then real rotation:
                // a_p ← c a_p − s ē a_q ; a_q ← s a_p + c ē a_q
                let (ga, gb) = (C64::new(c, 0.0), C64::new(s, 0.0));
                let (gc, gd) = (-e.conj() * s, e.conj() * c);
                a.rotate_columns(p, q, ga, gb, gc, gd);
                v.rotate_columns(p, q, ga, gb, gc, gd);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
    }

    let norms: Vec<f64> = (0..cols).map(|j| col_dot(&a, j, j).re.sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);

    let mut left_cols: Vec<ComplexVector> = Vec::with_capacity(cols);
    for (&j, &sigma) in order.iter().zip(&singular_values) {
        if sigma > RANK_CUTOFF * smax && sigma > 0.0 {
            left_cols.push(a.column(j).scaled(C64::new(1.0 / sigma, 0.0)));
        }
    }
    complete_orthonormal(&mut left_cols, rows, cols);
    let left = ComplexMatrix::from_columns(&left_cols);
    let right = ComplexMatrix::from_fn(cols, cols, |i, k| v[(i, order[k])]);
    Ok(Svd {
        left,
        singular_values,
        right,
    })
}

/// Extend an orthonormal set to `target` vectors by Gram–Schmidt over the standard basis.
fn complete_orthonormal(vectors: &mut Vec<ComplexVector>, dim: usize, target: usize) {
    let mut candidate = 0;
    while vectors.len() < target && candidate < dim {
        let mut w = ComplexVector::basis(dim, candidate);
        candidate += 1;
        for _ in 0..2 {
            for q in vectors.iter() {
                let proj = q.dot(&w);
                w = w.sub(&q.scaled(proj));
            }
        }
        let n = w.norm();
        if n > 1e-8 {
            vectors.push(w.scaled(C64::new(1.0 / n, 0.0)));
        }
    }
}

/// `e^{i2πWt}` through the spectral decomposition of `W`.
pub fn unitary_exponential(w: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let spectral = eig_hermitian(w)?;
    Ok(exponential_from_spectrum(&spectral, t))
}

pub fn exponential_from_spectrum(spectral: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    spectral.reconstruct_with(|lambda| cis(2.0 * PI * lambda * t))
}

/// Unitary whose first column is exactly `x`.
///
/// Built as `ω·R` where `ω = x₀/|x₀|` (1 when `x₀ = 0`) and `R` is the
/// reflection exchanging `e₁` and `ω̄x`. Whenever `x₀` is real the result is a
/// Hermitian involution; `x = e₁` gives the identity and `x = −e₁` gives `−I`.
pub fn householder_unitary(x: &ComplexVector) -> Result<ComplexMatrix> {
    x.require_unit()?;
    let n = x.dim();
    let x0 = x[0];
    let omega = if x0.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        x0 / x0.norm()
    };
    // y = ω̄x has a real nonnegative leading entry.
    let y: Vec<C64> = x.iter().map(|z| omega.conj() * z).collect();
    let y0 = y[0].re;
    let tail_sqr: f64 = y[1..].iter().map(|z| z.norm_sqr()).sum();
    // u = y − e₁ with the leading entry formed without cancellation.
    let u0 = -tail_sqr / (1.0 + y0);
    let u_norm_sqr = u0 * u0 + tail_sqr;
    if u_norm_sqr.sqrt() < 1e-14 {
        return Ok(ComplexMatrix::identity(n).scaled(omega));
    }
    let mut u = y;
    u[0] = C64::new(u0, 0.0);
    let inv = 2.0 / u_norm_sqr;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        (C64::new(delta, 0.0) - u[i] * u[j].conj() * inv) * omega
    }))
}
