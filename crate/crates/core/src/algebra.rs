//! The scalar ring `A = M_n(C)`: adjoint, product, positivity, spectral norm
//! and the positive square root.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, FlatMatrix, HermitianEigen};

/// Relative/absolute slack used by every positivity and order predicate.
///
/// A quantity is treated as zero when it is below `abs + rel * scale`, where
/// `scale` is the magnitude of the objects being compared.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel >= 0.0 && abs >= 0.0) {
            return Err(Error::Invalid("tolerance components must be nonnegative"));
        }
        Ok(Tolerance { rel, abs })
    }

    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

/// Element of `M_n(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    entries: FlatMatrix,
}

impl AlgebraElement {
    /// Wraps a square, finite matrix.
    pub fn new(entries: FlatMatrix) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::shape("algebra element must be square", entries.rows(), entries.cols()));
        }
        if !entries.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(AlgebraElement { entries })
    }

    /// Row-major construction from complex entries.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = alloc::vec::Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::shape("algebra element row length", n, r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(FlatMatrix::from_vec(n, n, data)?)
    }

    pub(crate) fn from_flat_unchecked(entries: FlatMatrix) -> Self {
        debug_assert!(entries.is_square());
        AlgebraElement { entries }
    }

    pub fn identity(dim: usize) -> Self {
        AlgebraElement { entries: FlatMatrix::identity(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraElement { entries: FlatMatrix::zeros(dim, dim) }
    }

    pub fn scalar(dim: usize, c: Complex64) -> Self {
        AlgebraElement { entries: FlatMatrix::identity(dim).scale(c) }
    }

    pub fn real_diagonal(values: &[f64]) -> Result<Self> {
        Self::new(FlatMatrix::diagonal(values))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    #[inline]
    pub fn entries(&self) -> &FlatMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> FlatMatrix {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Conjugate transpose; an involution, exactly.
    pub fn adjoint(&self) -> Self {
        AlgebraElement { entries: self.entries.adjoint() }
    }

    fn check_dim(&self, other: &AlgebraElement) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::shape("algebra dimension", self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &AlgebraElement) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(AlgebraElement { entries: self.entries.matmul(&rhs.entries)? })
    }

    pub fn add(&self, rhs: &AlgebraElement) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(AlgebraElement { entries: self.entries.add(&rhs.entries)? })
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(AlgebraElement { entries: self.entries.sub(&rhs.entries)? })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement { entries: self.entries.scale(c) }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        AlgebraElement { entries: self.entries.scale_real(c) }
    }

    /// C*-norm: largest singular value.
    pub fn operator_norm(&self) -> f64 {
        linalg::spectral_norm(&self.entries)
    }

    /// Spectral decomposition of the Hermitian part.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        // Square by construction, so this cannot fail.
        linalg::hermitian_eigen(&self.entries).expect("algebra element is square")
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> alloc::vec::Vec<f64> {
        self.hermitian_eigen().values
    }

    /// Self-adjoint within tolerance and every eigenvalue of the Hermitian
    /// part at least `-(abs + rel * ||a||)`.
    pub fn is_positive(&self, tol: Tolerance) -> bool {
        self.positivity_margin(tol) >= 0.0
    }

    /// `lambda_min(Re a) + eps`, or `-inf` if `a` is not self-adjoint within
    /// `eps`. Nonnegative exactly when [`Self::is_positive`] holds.
    fn positivity_margin(&self, tol: Tolerance) -> f64 {
        let eps = tol.threshold(self.operator_norm());
        self.positivity_margin_at(eps)
    }

    fn positivity_margin_at(&self, eps: f64) -> f64 {
        let skew = self.entries.sub(&self.entries.adjoint()).expect("square");
        if linalg::spectral_norm(&skew) > eps {
            return f64::NEG_INFINITY;
        }
        self.hermitian_eigen().min() + eps
    }

    /// Positive square root by eigendecomposition, clamping round-off
    /// negatives to zero.
    pub fn sqrt_psd(&self, tol: Tolerance) -> Result<Self> {
        if !self.is_positive(tol) {
            return Err(Error::NotPositive { min_eigenvalue: self.hermitian_eigen().min() });
        }
        let e = self.hermitian_eigen();
        Ok(AlgebraElement { entries: e.map_spectrum(|l| libm::sqrt(l.max(0.0))) })
    }

    /// `|a| = (a^* a)^{1/2}`.
    pub fn abs(&self) -> Self {
        let ata = self.adjoint().mul(self).expect("same dimension");
        let e = ata.hermitian_eigen();
        AlgebraElement { entries: e.map_spectrum(|l| libm::sqrt(l.max(0.0))) }
    }

    /// `a <= b` in the order of `A`: `b - a` is positive.
    ///
    /// The slack scales with `max(||a||, ||b||)` rather than `||b - a||`, so
    /// that an exact equality computed with round-off is still accepted.
    pub fn psd_order_leq(&self, b: &AlgebraElement, tol: Tolerance) -> Result<bool> {
        self.check_dim(b)?;
        let diff = b.sub(self)?;
        let eps = tol.threshold(self.operator_norm().max(b.operator_norm()));
        Ok(diff.positivity_margin_at(eps) >= 0.0)
    }
}

/// Free-function form of [`AlgebraElement::adjoint`].
pub fn adjoint(a: &AlgebraElement) -> AlgebraElement {
    a.adjoint()
}

pub fn is_positive(a: &AlgebraElement, tol: Tolerance) -> bool {
    a.is_positive(tol)
}

pub fn sqrt_psd(a: &AlgebraElement, tol: Tolerance) -> Result<AlgebraElement> {
    a.sqrt_psd(tol)
}

pub fn abs_element(a: &AlgebraElement) -> AlgebraElement {
    a.abs()
}

pub fn operator_norm(a: &AlgebraElement) -> f64 {
    a.operator_norm()
}

pub fn psd_order_leq(a: &AlgebraElement, b: &AlgebraElement, tol: Tolerance) -> Result<bool> {
    a.psd_order_leq(b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        let i1 = AlgebraElement::from_rows(&[&[c(0.0, 1.0)]]).unwrap();
        assert_eq!(i1.adjoint().get(0, 0), c(0.0, -1.0));
        assert_eq!(AlgebraElement::identity(3).adjoint(), AlgebraElement::identity(3));
        let nil = AlgebraElement::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let expected = AlgebraElement::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(nil.adjoint(), expected);
    }

    #[test]
    fn positivity_examples() {
        let tol = Tolerance::default();
        assert!(AlgebraElement::identity(4).is_positive(tol));
        assert!(!AlgebraElement::real_diagonal(&[-1.0]).unwrap().is_positive(tol));
        // Positive spectrum but not self-adjoint.
        let skewed = AlgebraElement::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(!skewed.is_positive(tol));
        assert!(AlgebraElement::zero(2).is_positive(tol));
    }

    #[test]
    fn sqrt_examples() {
        let tol = Tolerance::default();
        let r = AlgebraElement::real_diagonal(&[4.0, 9.0]).unwrap().sqrt_psd(tol).unwrap();
        let expected = AlgebraElement::real_diagonal(&[2.0, 3.0]).unwrap();
        assert!(r.sub(&expected).unwrap().operator_norm() < 1e-14);
        let id = AlgebraElement::identity(3).sqrt_psd(tol).unwrap();
        assert!(id.sub(&AlgebraElement::identity(3)).unwrap().operator_norm() < 1e-15);
        let neg = AlgebraElement::real_diagonal(&[1.0, -2.0]).unwrap();
        assert!(matches!(neg.sqrt_psd(tol), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn abs_examples() {
        let a = AlgebraElement::real_diagonal(&[-3.0]).unwrap().abs();
        assert!((a.get(0, 0) - c(3.0, 0.0)).norm() < 1e-15);
        let nil = AlgebraElement::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let expected = AlgebraElement::real_diagonal(&[0.0, 1.0]).unwrap();
        assert!(nil.abs().sub(&expected).unwrap().operator_norm() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        assert!((AlgebraElement::identity(3).operator_norm() - 1.0).abs() < 1e-15);
        assert!((AlgebraElement::real_diagonal(&[2.0, -5.0]).unwrap().operator_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn order_examples() {
        let tol = Tolerance::default();
        let id = AlgebraElement::identity(2);
        assert!(AlgebraElement::zero(2).psd_order_leq(&id, tol).unwrap());
        assert!(!id.scale_real(2.0).psd_order_leq(&id, tol).unwrap());
        assert!(id.psd_order_leq(&id, tol).unwrap());
        assert!(matches!(id.psd_order_leq(&AlgebraElement::identity(3), tol), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(AlgebraElement::new(FlatMatrix::zeros(2, 3)), Err(Error::DimensionMismatch { .. })));
        let mut m = FlatMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(AlgebraElement::new(m), Err(Error::NonFinite));
        assert!(Tolerance::new(-1.0, 0.0).is_err());
    }
}
