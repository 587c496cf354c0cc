//! The Hilbert C*-module `H = A^d` and adjointable maps between such modules.
//!
//! Conventions (left module, inner product linear over `A` in the first
//! argument):
//!
//! * `x in A^d` is stored as the `n x (n d)` matrix `X = [x_1 | ... | x_d]`,
//!   so `a . x` is the matrix product `a X` and `<x, y> = X Y^*`.
//! * `T: A^d -> A^d'` is stored as the `(n d) x (n d')` matrix `F` whose
//!   block `(i, j)` multiplies component `i` of the input and contributes to
//!   component `j` of the output: `(T x)_j = sum_i x_i F_ij`, i.e. `X F`.
//! * The module adjoint is then the conjugate transpose of `F`, and
//!   `T2 o T1` flattens to `F1 F2`.
//!
//! Direct sums `(+)_k H_k` are plain concatenation of component tuples.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::linalg::{self, FlatMatrix};

/// Element of `A^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector {
    n: usize,
    flat: FlatMatrix,
}

impl ModuleVector {
    pub fn new(components: &[AlgebraElement]) -> Result<Self> {
        let first = components.first().ok_or(Error::Invalid("module vector needs at least one component"))?;
        let n = first.dim();
        let mut parts = Vec::with_capacity(components.len());
        for c in components {
            if c.dim() != n {
                return Err(Error::shape("module vector component dimension", n, c.dim()));
            }
            parts.push(c.entries().clone());
        }
        Ok(ModuleVector { n, flat: FlatMatrix::hstack(&parts)? })
    }

    /// Wraps an `n x (n d)` row-block matrix.
    pub fn from_flat(n: usize, flat: FlatMatrix) -> Result<Self> {
        if n == 0 || flat.rows() != n || flat.cols() == 0 || !flat.cols().is_multiple_of(n) {
            return Err(Error::shape("module vector flat shape", n, flat.rows()));
        }
        if !flat.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(ModuleVector { n, flat })
    }

    pub fn zero(n: usize, len: usize) -> Self {
        ModuleVector { n, flat: FlatMatrix::zeros(n, n * len) }
    }

    /// The vector whose only nonzero row is `row` placed in row `r` of the
    /// flat form. Such rank-one vectors realize the extreme Rayleigh
    /// quotients of an operator.
    pub fn rank_one(n: usize, r: usize, row: &[Complex64]) -> Result<Self> {
        if row.is_empty() || !row.len().is_multiple_of(n) || r >= n {
            return Err(Error::shape("rank-one vector row length", n, row.len()));
        }
        let mut flat = FlatMatrix::zeros(n, row.len());
        for (j, &z) in row.iter().enumerate() {
            flat[(r, j)] = z;
        }
        Self::from_flat(n, flat)
    }

    #[inline]
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.flat.cols() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.flat.cols() == 0
    }

    pub fn component(&self, i: usize) -> AlgebraElement {
        AlgebraElement::from_flat_unchecked(self.flat.submatrix(0, i * self.n, self.n, self.n))
    }

    pub fn components(&self) -> Vec<AlgebraElement> {
        (0..self.len()).map(|i| self.component(i)).collect()
    }

    pub fn flat(&self) -> &FlatMatrix {
        &self.flat
    }

    fn check_same(&self, other: &ModuleVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::shape("module vector algebra dimension", self.n, other.n));
        }
        if self.len() != other.len() {
            return Err(Error::shape("module vector length", self.len(), other.len()));
        }
        Ok(())
    }

    /// Module action `a . x`.
    pub fn left_mul(&self, a: &AlgebraElement) -> Result<Self> {
        if a.dim() != self.n {
            return Err(Error::shape("module action algebra dimension", self.n, a.dim()));
        }
        Ok(ModuleVector { n: self.n, flat: a.entries().matmul(&self.flat)? })
    }

    pub fn add(&self, other: &ModuleVector) -> Result<Self> {
        self.check_same(other)?;
        Ok(ModuleVector { n: self.n, flat: self.flat.add(&other.flat)? })
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<Self> {
        self.check_same(other)?;
        Ok(ModuleVector { n: self.n, flat: self.flat.sub(&other.flat)? })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ModuleVector { n: self.n, flat: self.flat.scale(c) }
    }

    /// `<x, y> = sum_i x_i y_i^*`.
    pub fn inner_product(&self, y: &ModuleVector) -> Result<AlgebraElement> {
        self.check_same(y)?;
        Ok(AlgebraElement::from_flat_unchecked(self.flat.matmul(&y.flat.adjoint())?))
    }

    /// `||x|| = ||<x, x>||^{1/2}`, which equals the spectral norm of the flat
    /// form.
    pub fn scalar_norm(&self) -> f64 {
        let ip = self.inner_product(self).expect("same vector");
        libm::sqrt(ip.operator_norm())
    }

    /// Concatenates vectors into an element of the direct sum.
    pub fn concat(parts: &[ModuleVector]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Invalid("empty direct sum"))?;
        let n = first.n;
        for p in parts {
            if p.n != n {
                return Err(Error::shape("direct sum algebra dimension", n, p.n));
            }
        }
        let flats: Vec<FlatMatrix> = parts.iter().map(|p| p.flat.clone()).collect();
        Ok(ModuleVector { n, flat: FlatMatrix::hstack(&flats)? })
    }

    /// Splits an element of a direct sum into pieces of the given lengths.
    pub fn split(&self, lens: &[usize]) -> Result<Vec<ModuleVector>> {
        let total: usize = lens.iter().sum();
        if total != self.len() {
            return Err(Error::shape("direct sum split", total, self.len()));
        }
        let mut out = Vec::with_capacity(lens.len());
        let mut offset = 0;
        for &l in lens {
            out.push(ModuleVector { n: self.n, flat: self.flat.submatrix(0, offset * self.n, self.n, l * self.n) });
            offset += l;
        }
        Ok(out)
    }
}

/// Adjointable `A`-linear map `A^d -> A^d'`, stored flattened.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointableOp {
    n: usize,
    flat: FlatMatrix,
}

impl AdjointableOp {
    /// `blocks[i][j]` multiplies input component `i` into output component `j`.
    pub fn from_blocks(blocks: &[Vec<AlgebraElement>]) -> Result<Self> {
        let d = blocks.len();
        let d_out = blocks.first().map_or(0, Vec::len);
        if d == 0 || d_out == 0 {
            return Err(Error::Invalid("operator needs at least one block"));
        }
        let n = blocks[0][0].dim();
        let mut flat = FlatMatrix::zeros(n * d, n * d_out);
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != d_out {
                return Err(Error::shape("operator block row length", d_out, row.len()));
            }
            for (j, b) in row.iter().enumerate() {
                if b.dim() != n {
                    return Err(Error::shape("operator block dimension", n, b.dim()));
                }
                flat.set_submatrix(i * n, j * n, b.entries());
            }
        }
        Ok(AdjointableOp { n, flat })
    }

    pub fn from_flat(n: usize, flat: FlatMatrix) -> Result<Self> {
        if n == 0
            || flat.rows() == 0
            || flat.cols() == 0
            || !flat.rows().is_multiple_of(n)
            || !flat.cols().is_multiple_of(n)
        {
            return Err(Error::shape("operator flat shape must be a multiple of n", n, flat.rows()));
        }
        if !flat.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(AdjointableOp { n, flat })
    }

    pub fn identity(n: usize, d: usize) -> Self {
        AdjointableOp { n, flat: FlatMatrix::identity(n * d) }
    }

    pub fn zero(n: usize, source_len: usize, target_len: usize) -> Self {
        AdjointableOp { n, flat: FlatMatrix::zeros(n * source_len, n * target_len) }
    }

    pub fn scalar(n: usize, d: usize, c: Complex64) -> Self {
        AdjointableOp { n, flat: FlatMatrix::identity(n * d).scale(c) }
    }

    /// The module map `y -> (y_1 a, ..., y_len a)` on `A^len`: block-diagonal
    /// with every diagonal block equal to `a`. This is how an algebra element
    /// acts as an operator on a left module.
    pub fn diagonal(a: &AlgebraElement, len: usize) -> Self {
        let n = a.dim();
        let mut flat = FlatMatrix::zeros(n * len, n * len);
        for i in 0..len {
            flat.set_submatrix(i * n, i * n, a.entries());
        }
        AdjointableOp { n, flat }
    }

    #[inline]
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn source_len(&self) -> usize {
        self.flat.rows() / self.n
    }

    #[inline]
    pub fn target_len(&self) -> usize {
        self.flat.cols() / self.n
    }

    pub fn is_square(&self) -> bool {
        self.flat.is_square()
    }

    pub fn block(&self, i: usize, j: usize) -> AlgebraElement {
        AlgebraElement::from_flat_unchecked(self.flat.submatrix(i * self.n, j * self.n, self.n, self.n))
    }

    pub fn blocks(&self) -> Vec<Vec<AlgebraElement>> {
        (0..self.source_len()).map(|i| (0..self.target_len()).map(|j| self.block(i, j)).collect()).collect()
    }

    /// The `(n d) x (n d')` complex matrix of this operator.
    #[inline]
    pub fn flatten(&self) -> &FlatMatrix {
        &self.flat
    }

    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.algebra_dim() != self.n {
            return Err(Error::shape("apply: algebra dimension", self.n, x.algebra_dim()));
        }
        if x.len() != self.source_len() {
            return Err(Error::shape("apply: vector length vs operator source", self.source_len(), x.len()));
        }
        ModuleVector::from_flat(self.n, x.flat().matmul(&self.flat)?)
    }

    pub fn adjoint(&self) -> Self {
        AdjointableOp { n: self.n, flat: self.flat.adjoint() }
    }

    /// `self o first`: apply `first`, then `self`.
    pub fn compose(&self, first: &AdjointableOp) -> Result<Self> {
        if self.n != first.n {
            return Err(Error::shape("compose: algebra dimension", self.n, first.n));
        }
        if first.target_len() != self.source_len() {
            return Err(Error::shape("compose: inner module length", self.source_len(), first.target_len()));
        }
        Ok(AdjointableOp { n: self.n, flat: first.flat.matmul(&self.flat)? })
    }

    fn check_same(&self, other: &AdjointableOp) -> Result<()> {
        if self.n != other.n {
            return Err(Error::shape("operator algebra dimension", self.n, other.n));
        }
        if self.source_len() != other.source_len() {
            return Err(Error::shape("operator source length", self.source_len(), other.source_len()));
        }
        if self.target_len() != other.target_len() {
            return Err(Error::shape("operator target length", self.target_len(), other.target_len()));
        }
        Ok(())
    }

    pub fn add(&self, other: &AdjointableOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(AdjointableOp { n: self.n, flat: self.flat.add(&other.flat)? })
    }

    pub fn sub(&self, other: &AdjointableOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(AdjointableOp { n: self.n, flat: self.flat.sub(&other.flat)? })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AdjointableOp { n: self.n, flat: self.flat.scale(c) }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        AdjointableOp { n: self.n, flat: self.flat.scale_real(c) }
    }

    /// `T^* T` on the source module.
    pub fn gram(&self) -> Self {
        self.adjoint().compose(self).expect("adjoint composes with its operator")
    }

    /// Operator norm: largest singular value of the flat form.
    pub fn op_norm(&self) -> f64 {
        linalg::spectral_norm(&self.flat)
    }

    /// Best `m` with `||T x|| >= m ||x||` for all `x`.
    ///
    /// Rank-one vectors attain the infimum, so this is the smallest singular
    /// value of the flat form seen as acting on row vectors.
    pub fn lower_bound(&self) -> f64 {
        linalg::row_action_lower_bound(&self.flat)
    }

    /// `T` is surjective iff `T^*` is bounded below: the bounded-below
    /// constant of `T^*` must exceed `abs + rel * ||T||`. The zero operator
    /// is reported as not surjective.
    pub fn is_surjective(&self, tol: Tolerance) -> bool {
        let sigma = self.adjoint().lower_bound();
        sigma > tol.threshold(self.op_norm())
    }

    /// `||T^* T - I|| <= abs + rel`.
    pub fn is_isometry(&self, tol: Tolerance) -> bool {
        self.isometry_defect() <= tol.abs + tol.rel
    }

    /// `||T^* T - I||`.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.gram();
        let id = FlatMatrix::identity(g.flat.rows());
        linalg::spectral_norm(&g.flat.sub(&id).expect("square"))
    }
}

pub fn inner_product(x: &ModuleVector, y: &ModuleVector) -> Result<AlgebraElement> {
    x.inner_product(y)
}

pub fn scalar_norm(x: &ModuleVector) -> f64 {
    x.scalar_norm()
}

pub fn apply(t: &AdjointableOp, x: &ModuleVector) -> Result<ModuleVector> {
    t.apply(x)
}

pub fn adjoint_op(t: &AdjointableOp) -> AdjointableOp {
    t.adjoint()
}

/// `t2 o t1`.
pub fn compose(t2: &AdjointableOp, t1: &AdjointableOp) -> Result<AdjointableOp> {
    t2.compose(t1)
}

pub fn op_norm(t: &AdjointableOp) -> f64 {
    t.op_norm()
}

pub fn is_surjective(t: &AdjointableOp, tol: Tolerance) -> bool {
    t.is_surjective(tol)
}

pub fn is_isometry(t: &AdjointableOp, tol: Tolerance) -> bool {
    t.is_isometry(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_vector() -> ModuleVector {
        let a = AlgebraElement::from_rows(&[&[c(1.0, 0.5), c(0.0, -1.0)], &[c(2.0, 0.0), c(0.3, 0.3)]]).unwrap();
        let b = AlgebraElement::from_rows(&[&[c(0.0, 1.0), c(1.0, 1.0)], &[c(-1.0, 0.0), c(0.5, 0.0)]]).unwrap();
        ModuleVector::new(&[a, b]).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let id = AlgebraElement::identity(2);
        let x = ModuleVector::new(core::slice::from_ref(&id)).unwrap();
        assert_eq!(x.inner_product(&x).unwrap(), id);

        let a = sample_vector().component(0);
        let b = sample_vector().component(1);
        let z = AlgebraElement::zero(2);
        let x = ModuleVector::new(&[a, z.clone()]).unwrap();
        let y = ModuleVector::new(&[z.clone(), b]).unwrap();
        assert_eq!(x.inner_product(&y).unwrap().operator_norm(), 0.0);

        let short = ModuleVector::zero(2, 1);
        assert!(matches!(x.inner_product(&short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(ModuleVector::zero(3, 2).scalar_norm(), 0.0);
        let x = ModuleVector::new(&[AlgebraElement::identity(2)]).unwrap();
        assert!((x.scalar_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_and_zero_ops() {
        let x = sample_vector();
        assert_eq!(AdjointableOp::identity(2, 2).apply(&x).unwrap(), x);
        assert_eq!(AdjointableOp::zero(2, 2, 3).apply(&x).unwrap(), ModuleVector::zero(2, 3));
        assert!(matches!(AdjointableOp::identity(2, 3).apply(&x), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(AdjointableOp::identity(2, 3).adjoint(), AdjointableOp::identity(2, 3));
        let op =
            AdjointableOp::from_blocks(&[alloc::vec![AlgebraElement::from_rows(&[&[c(0.0, 1.0)]]).unwrap()]]).unwrap();
        assert_eq!(op.adjoint().block(0, 0).get(0, 0), c(0.0, -1.0));
    }

    #[test]
    fn blocks_round_trip_and_shapes() {
        let x = sample_vector();
        let op = AdjointableOp::from_blocks(&[
            alloc::vec![x.component(0), x.component(1), AlgebraElement::identity(2)],
            alloc::vec![x.component(1), AlgebraElement::zero(2), x.component(0)],
        ])
        .unwrap();
        assert_eq!(op.source_len(), 2);
        assert_eq!(op.target_len(), 3);
        assert_eq!(AdjointableOp::from_blocks(&op.blocks()).unwrap(), op);
        // component j of Tx is sum_i x_i B_ij
        let tx = op.apply(&x).unwrap();
        let expected =
            x.component(0).mul(&op.block(0, 1)).unwrap().add(&x.component(1).mul(&op.block(1, 1)).unwrap()).unwrap();
        assert!(tx.component(1).sub(&expected).unwrap().operator_norm() < 1e-14);
    }

    #[test]
    fn norm_surjectivity_isometry_examples() {
        let tol = Tolerance::default();
        let id = AdjointableOp::identity(2, 3);
        assert!((id.op_norm() - 1.0).abs() < 1e-15);
        assert!((AdjointableOp::scalar(2, 2, c(3.0, 4.0)).op_norm() - 5.0).abs() < 1e-14);
        assert!(id.is_surjective(tol));
        assert!(!AdjointableOp::zero(2, 3, 3).is_surjective(tol));
        assert!(id.is_isometry(tol));
        assert!(!id.scale_real(2.0).is_isometry(tol));
        // a projection onto the first component is not surjective
        let proj = AdjointableOp::from_blocks(&[
            alloc::vec![AlgebraElement::identity(2), AlgebraElement::zero(2)],
            alloc::vec![AlgebraElement::zero(2), AlgebraElement::zero(2)],
        ])
        .unwrap();
        assert!(!proj.is_surjective(tol));
    }

    #[test]
    fn split_inverts_concat() {
        let x = sample_vector();
        let y = ModuleVector::new(&[AlgebraElement::identity(2)]).unwrap();
        let cat = ModuleVector::concat(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(cat.len(), 3);
        let parts = cat.split(&[2, 1]).unwrap();
        assert_eq!(parts, alloc::vec![x, y]);
    }
}
