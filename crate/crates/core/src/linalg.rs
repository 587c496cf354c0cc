//! Dense complex matrices and the two spectral routines everything else is
//! built on: a cyclic Jacobi eigensolver for Hermitian matrices and a
//! one-sided (Hestenes) Jacobi singular value routine.
//!
//! Both are unconditionally convergent and accurate to a small multiple of
//! machine epsilon relative to the largest eigen/singular value, which is all
//! the frame predicates downstream ask for. Sizes here are desk scale
//! (a few dozen rows), so O(n^3) sweeps are fine.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

const MAX_SWEEPS: usize = 100;

/// Row-major complex matrix.
///
/// This is the computational representation of every algebra element,
/// module vector and adjointable operator in the crate.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl FlatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FlatMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape("flat matrix data length", rows * cols, data.len()));
        }
        Ok(FlatMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FlatMatrix { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &FlatMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape("matmul inner dimension", self.cols, rhs.rows));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &FlatMatrix) -> Result<()> {
        if self.rows != rhs.rows {
            return Err(Error::shape("elementwise operation row count", self.rows, rhs.rows));
        }
        if self.cols != rhs.cols {
            return Err(Error::shape("elementwise operation column count", self.cols, rhs.cols));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &FlatMatrix) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(FlatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &FlatMatrix) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(FlatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FlatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(A + A^*) / 2`.
    pub fn hermitian_part(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("hermitian part of non-square matrix", self.rows, self.cols));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Copies the `rows x cols` window starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &FlatMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Horizontal concatenation `[A | B | ...]`.
    pub fn hstack(parts: &[FlatMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |p| p.rows);
        let mut cols = 0;
        for p in parts {
            if p.rows != rows {
                return Err(Error::shape("hstack row count", rows, p.rows));
            }
            cols += p.cols;
        }
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.set_submatrix(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[FlatMatrix]) -> Result<Self> {
        let cols = parts.first().map_or(0, |p| p.cols);
        let mut rows = 0;
        for p in parts {
            if p.cols != cols {
                return Err(Error::shape("vstack column count", cols, p.cols));
            }
            rows += p.rows;
        }
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            out.set_submatrix(r0, 0, p);
            r0 += p.rows;
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for FlatMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FlatMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Unitary 2x2 `[[u00, u01], [u10, u11]]` that diagonalizes the Hermitian
/// `[[a, g], [conj(g), d]]` by congruence `U^* H U`.
///
/// The phase of `g` is removed first, then the classic symmetric Schur
/// rotation is applied to the real matrix that remains.
fn jacobi_rotation(a: f64, d: f64, g: Complex64) -> [Complex64; 4] {
    let b = g.norm();
    let phase = if b > 0.0 { g.conj() / b } else { ONE };
    let tau = (d - a) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    [Complex64::new(c, 0.0), Complex64::new(s, 0.0), phase * (-s), phase * c]
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose column `k` is the eigenvector for `values[k]`.
    pub vectors: FlatMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(lambda)) V^*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> FlatMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        FlatMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                acc += v[(i, k)] * v[(j, k)].conj() * mapped[k];
            }
            acc
        })
    }
}

/// Cyclic Jacobi on the Hermitian part of `m`.
///
/// Only the Hermitian part is used; callers that care about skewness check it
/// separately.
pub fn hermitian_eigen(m: &FlatMatrix) -> Result<HermitianEigen> {
    let mut h = m.hermitian_part()?;
    let n = h.rows();
    let mut v = FlatMatrix::identity(n);
    let scale = h.frobenius_norm();
    if scale == 0.0 || n < 2 {
        let values = (0..n).map(|i| h[(i, i)].re).collect();
        return Ok(HermitianEigen { values, vectors: v });
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let g = h[(p, q)];
                if g.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let u = jacobi_rotation(h[(p, p)].re, h[(q, q)].re, g);
                for k in 0..n {
                    let (hp, hq) = (h[(k, p)], h[(k, q)]);
                    h[(k, p)] = hp * u[0] + hq * u[2];
                    h[(k, q)] = hp * u[1] + hq * u[3];
                }
                for k in 0..n {
                    let (hp, hq) = (h[(p, k)], h[(q, k)]);
                    h[(p, k)] = u[0].conj() * hp + u[2].conj() * hq;
                    h[(q, k)] = u[1].conj() * hp + u[3].conj() * hq;
                }
                h[(p, q)] = ZERO;
                h[(q, p)] = ZERO;
                for k in 0..n {
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * u[0] + vq * u[2];
                    v[(k, q)] = vp * u[1] + vq * u[3];
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h[(a, a)].re.total_cmp(&h[(b, b)].re));
    let values = order.iter().map(|&k| h[(k, k)].re).collect();
    let vectors = FlatMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &FlatMatrix) -> Vec<f64> {
    // Orthogonalize the shorter side.
    let mut a = if m.cols() <= m.rows() { m.clone() } else { m.adjoint() };
    let (rows, cols) = (a.rows(), a.cols());
    if cols == 0 {
        return Vec::new();
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= 1e-15 * libm::sqrt(alpha * beta) || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let u = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * u[0] + y * u[2];
                    a[(k, q)] = x * u[1] + y * u[3];
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols).map(|j| libm::sqrt((0..rows).map(|k| a[(k, j)].norm_sqr()).sum())).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Largest singular value (spectral norm).
pub fn spectral_norm(m: &FlatMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Lower bound of `v -> v M` over unit row vectors `v`, i.e. the smallest
/// singular value when `M` has at most as many rows as columns, and `0`
/// otherwise (the map then has a kernel).
pub fn row_action_lower_bound(m: &FlatMatrix) -> f64 {
    if m.rows() > m.cols() || m.rows() == 0 {
        return 0.0;
    }
    let sv = singular_values(m);
    sv.get(m.rows() - 1).copied().unwrap_or(0.0)
}

/// Orthonormalizes the columns of `m` by modified Gram-Schmidt with one
/// round of reorthogonalization. The implied `R` has a positive real
/// diagonal, so for a Gaussian input the result is Haar distributed.
pub fn orthonormalize_columns(m: &FlatMatrix) -> Result<FlatMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols > rows {
        return Err(Error::shape("orthonormalize: more columns than rows", rows, cols));
    }
    let mut q = m.clone();
    for j in 0..cols {
        for _ in 0..2 {
            for i in 0..j {
                let mut dot = ZERO;
                for k in 0..rows {
                    dot += q[(k, i)].conj() * q[(k, j)];
                }
                for k in 0..rows {
                    let qi = q[(k, i)];
                    q[(k, j)] -= qi * dot;
                }
            }
        }
        let norm = libm::sqrt((0..rows).map(|k| q[(k, j)].norm_sqr()).sum());
        if norm <= 1e-300 {
            return Err(Error::Degenerate("orthonormalize: rank-deficient input"));
        }
        for k in 0..rows {
            q[(k, j)] /= norm;
        }
    }
    Ok(q)
}
