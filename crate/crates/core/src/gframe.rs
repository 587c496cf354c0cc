//! g-frame families: analysis, synthesis and frame operators, optimal bounds
//! and classification.
//!
//! For a finite family every bound question reduces to the spectrum of the
//! flattened frame operator `S = sum_k Psi_k^* Psi_k`: the best constants in
//! `A <x,x> <= sum_k <Psi_k x, Psi_k x> <= B <x,x>` are `lambda_min(S)` and
//! `lambda_max(S)`, and they are attained on rank-one vectors built from the
//! extreme eigenvectors.

use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::gen::rng::SplitMix64;
use crate::hmodule::{AdjointableOp, ModuleVector};
use crate::linalg::{self, FlatMatrix, HermitianEigen};

/// Relative width within which `upper - lower` still counts as tight.
pub const TIGHT_REL: f64 = 1e-8;

/// Finite family `{Psi_k : A^d -> A^{d_k}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GFrameFamily {
    n: usize,
    d: usize,
    members: Vec<AdjointableOp>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub tight: bool,
    pub parseval: bool,
}

impl FrameBounds {
    /// Bounds from the extreme eigenvalues of a frame operator. Negative
    /// round-off below zero is clamped.
    pub fn from_spectrum(min: f64, max: f64, tol: Tolerance) -> Self {
        let upper = max.max(0.0);
        let lower = min.clamp(0.0, upper);
        let is_frame = min > tol.threshold(upper);
        let tight = is_frame && upper - lower <= TIGHT_REL * upper;
        let parseval = tight && (lower - 1.0).abs() <= TIGHT_REL && (upper - 1.0).abs() <= TIGHT_REL;
        FrameBounds { lower, upper, tight, parseval }
    }

    /// Midpoint; the tight constant when `tight` holds.
    pub fn tight_constant(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FrameKind {
    /// Satisfies only the upper inequality; every finite family does.
    BesselOnly,
    Frame,
    TightFrame,
    ParsevalFrame,
}

impl FrameKind {
    pub fn is_frame(self) -> bool {
        !matches!(self, FrameKind::BesselOnly)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    pub kind: FrameKind,
    pub bounds: FrameBounds,
}

impl GFrameFamily {
    pub fn new(members: Vec<AdjointableOp>) -> Result<Self> {
        let first = members.first().ok_or(Error::Invalid("family needs at least one member"))?;
        let (n, d) = (first.algebra_dim(), first.source_len());
        for m in &members {
            if m.algebra_dim() != n {
                return Err(Error::shape("family member algebra dimension", n, m.algebra_dim()));
            }
            if m.source_len() != d {
                return Err(Error::shape("family member source length", d, m.source_len()));
            }
        }
        Ok(GFrameFamily { n, d, members })
    }

    /// The family of zero maps with the given target lengths.
    pub fn zero(n: usize, d: usize, member_dims: &[usize]) -> Result<Self> {
        Self::new(member_dims.iter().map(|&dk| AdjointableOp::zero(n, d, dk)).collect())
    }

    #[inline]
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn source_len(&self) -> usize {
        self.d
    }

    /// `|Theta|`.
    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[AdjointableOp] {
        &self.members
    }

    pub fn member_dims(&self) -> Vec<usize> {
        self.members.iter().map(AdjointableOp::target_len).collect()
    }

    /// Flat dimension `n d` of `H`.
    pub fn flat_dim(&self) -> usize {
        self.n * self.d
    }

    fn check_vector(&self, x: &ModuleVector) -> Result<()> {
        if x.algebra_dim() != self.n {
            return Err(Error::shape("vector algebra dimension vs family", self.n, x.algebra_dim()));
        }
        if x.len() != self.d {
            return Err(Error::shape("vector length vs family source", self.d, x.len()));
        }
        Ok(())
    }

    /// `T^* x = {Psi_k x}`.
    pub fn analysis(&self, x: &ModuleVector) -> Result<Vec<ModuleVector>> {
        self.check_vector(x)?;
        self.members.iter().map(|m| m.apply(x)).collect()
    }

    /// `T {y_k} = sum_k Psi_k^* y_k`.
    pub fn synthesis(&self, ys: &[ModuleVector]) -> Result<ModuleVector> {
        if ys.len() != self.len() {
            return Err(Error::shape("synthesis: number of components", self.len(), ys.len()));
        }
        let mut acc = ModuleVector::zero(self.n, self.d);
        for (m, y) in self.members.iter().zip(ys) {
            acc = acc.add(&m.adjoint().apply(y)?)?;
        }
        Ok(acc)
    }

    /// Synthesis operator `(+)_k H_k -> H` as one operator with source length
    /// `sum_k d_k` (components ordered by member index).
    pub fn synthesis_op(&self) -> AdjointableOp {
        let parts: Vec<FlatMatrix> = self.members.iter().map(|m| m.flatten().adjoint()).collect();
        let flat = FlatMatrix::vstack(&parts).expect("members share the source module");
        AdjointableOp::from_flat(self.n, flat).expect("stacked blocks keep the block structure")
    }

    /// Analysis operator `H -> (+)_k H_k`.
    pub fn analysis_op(&self) -> AdjointableOp {
        self.synthesis_op().adjoint()
    }

    /// `S = sum_k Psi_k^* Psi_k`.
    pub fn frame_operator(&self) -> AdjointableOp {
        let dim = self.flat_dim();
        let mut acc = FlatMatrix::zeros(dim, dim);
        for m in &self.members {
            let f = m.flatten();
            acc = acc.add(&f.matmul(&f.adjoint()).expect("conformable")).expect("same shape");
        }
        AdjointableOp::from_flat(self.n, acc).expect("square block operator")
    }

    pub fn frame_spectrum(&self) -> HermitianEigen {
        linalg::hermitian_eigen(self.frame_operator().flatten()).expect("frame operator is square")
    }

    /// Best constants in the frame inequality, with tight/Parseval flags
    /// decided at the default tolerance.
    pub fn optimal_bounds(&self) -> FrameBounds {
        let e = self.frame_spectrum();
        FrameBounds::from_spectrum(e.min(), e.max(), Tolerance::default())
    }

    /// Frame iff `lambda_min(S) > abs + rel * lambda_max(S)`.
    pub fn classify(&self, tol: Tolerance) -> Classification {
        let e = self.frame_spectrum();
        let bounds = FrameBounds::from_spectrum(e.min(), e.max(), tol);
        let kind = if bounds.parseval {
            FrameKind::ParsevalFrame
        } else if bounds.tight {
            FrameKind::TightFrame
        } else if e.min() > tol.threshold(e.max()) {
            FrameKind::Frame
        } else {
            FrameKind::BesselOnly
        };
        Classification { kind, bounds }
    }

    pub fn is_frame(&self, tol: Tolerance) -> bool {
        self.classify(tol).kind.is_frame()
    }

    /// `sum_k <Psi_k x, Psi_k x>`, computed member by member.
    pub fn frame_form(&self, x: &ModuleVector) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::zero(self.n);
        for y in self.analysis(x)? {
            acc = acc.add(&y.inner_product(&y)?)?;
        }
        Ok(acc)
    }

    /// Rank-one unit vectors realizing `lambda_min(S)` and `lambda_max(S)`.
    pub fn extreme_witnesses(&self) -> (ModuleVector, ModuleVector) {
        let e = self.frame_spectrum();
        let dim = self.flat_dim();
        let witness = |k: usize| {
            let row: Vec<_> = (0..dim).map(|i| e.vectors[(i, k)].conj()).collect();
            ModuleVector::rank_one(self.n, 0, &row).expect("row length is n d")
        };
        (witness(0), witness(dim - 1))
    }

    /// Generalized eigenvalues of `(<S x, x>, <x, x>)`, i.e. the spectrum of
    /// `G^{-1/2} <Sx,x> G^{-1/2}` with `G = <x,x>`. All of them lie in
    /// `[lambda_min(S), lambda_max(S)]`. Requires `<x,x>` invertible.
    pub fn rayleigh_spectrum(&self, x: &ModuleVector) -> Result<Vec<f64>> {
        let g = x.inner_product(x)?;
        let ge = g.hermitian_eigen();
        if ge.min() <= 1e-12 * ge.max() {
            return Err(Error::Degenerate("rayleigh spectrum needs <x,x> invertible"));
        }
        let inv_sqrt = ge.map_spectrum(|l| 1.0 / libm::sqrt(l));
        let sx = self.frame_form(x)?;
        let m = inv_sqrt.matmul(sx.entries())?.matmul(&inv_sqrt)?;
        Ok(linalg::hermitian_eigen(&m)?.values)
    }

    /// Checks `A <x,x> <= sum_k <Psi_k x, Psi_k x> <= B <x,x>` both on
    /// sampled vectors (plus the two extreme witnesses) and spectrally.
    /// The two routes must agree; a disagreement is an error.
    pub fn verify_frame_inequality(&self, a: f64, b: f64, samples: usize, seed: u64, tol: Tolerance) -> Result<bool> {
        if a.is_nan() || b.is_nan() || a > b {
            return Err(Error::Invalid("frame inequality needs A <= B"));
        }
        let e = self.frame_spectrum();
        let spectral = a <= e.min() + tol.threshold(a.max(e.min())) && e.max() <= b + tol.threshold(b.max(e.max()));

        let mut rng = SplitMix64::new(seed);
        let (wmin, wmax) = self.extreme_witnesses();
        let mut sampled = true;
        let mut xs = Vec::with_capacity(samples + 2);
        xs.push(wmin);
        xs.push(wmax);
        for _ in 0..samples {
            xs.push(rng.module_vector(self.n, self.d));
        }
        for x in &xs {
            let ip = x.inner_product(x)?;
            let sx = self.frame_form(x)?;
            if !ip.scale_real(a).psd_order_leq(&sx, tol)? || !sx.psd_order_leq(&ip.scale_real(b), tol)? {
                sampled = false;
                break;
            }
        }
        if sampled != spectral {
            return Err(Error::InternalConsistency("sampled and spectral frame inequality checks disagree"));
        }
        Ok(spectral)
    }

    /// Self-test of the equivalence "synthesis surjective iff S > 0".
    pub fn lemma33_check(&self, tol: Tolerance) -> bool {
        let e = self.frame_spectrum();
        let positive = e.min() > tol.threshold(e.max());
        self.synthesis_op().is_surjective(tol) == positive
    }

    /// `{Psi_k o op}`.
    pub fn compose_members(&self, op: &AdjointableOp) -> Result<Self> {
        Self::new(self.members.iter().map(|m| m.compose(op)).collect::<Result<_>>()?)
    }

    /// `{c Psi_k}`.
    pub fn scale_real(&self, c: f64) -> Self {
        GFrameFamily { n: self.n, d: self.d, members: self.members.iter().map(|m| m.scale_real(c)).collect() }
    }

    fn check_parallel(&self, other: &GFrameFamily) -> Result<()> {
        if self.n != other.n {
            return Err(Error::shape("families: algebra dimension", self.n, other.n));
        }
        if self.d != other.d {
            return Err(Error::shape("families: source length", self.d, other.d));
        }
        if self.len() != other.len() {
            return Err(Error::shape("families: index set size", self.len(), other.len()));
        }
        for (a, b) in self.members.iter().zip(&other.members) {
            if a.target_len() != b.target_len() {
                return Err(Error::shape("families: member target length", a.target_len(), b.target_len()));
            }
        }
        Ok(())
    }

    /// `{Psi_k + Delta_k}`.
    pub fn add(&self, other: &GFrameFamily) -> Result<Self> {
        self.check_parallel(other)?;
        Self::new(self.members.iter().zip(&other.members).map(|(a, b)| a.add(b)).collect::<Result<_>>()?)
    }

    /// `{Psi_k - Delta_k}`.
    pub fn sub(&self, other: &GFrameFamily) -> Result<Self> {
        self.check_parallel(other)?;
        Self::new(self.members.iter().zip(&other.members).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?)
    }

    /// `{w_k Psi_k}` where `w_k` acts on `H_k` as the diagonal module map
    /// `y -> (y_1 w_k, ..., y_{d_k} w_k)`.
    pub fn weighted(&self, weights: &[AlgebraElement]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::shape("weights vs index set", self.len(), weights.len()));
        }
        let mut out = Vec::with_capacity(self.len());
        for (m, w) in self.members.iter().zip(weights) {
            if w.dim() != self.n {
                return Err(Error::shape("weight algebra dimension", self.n, w.dim()));
            }
            out.push(AdjointableOp::diagonal(w, m.target_len()).compose(m)?);
        }
        Self::new(out)
    }

    /// `T_Psi T_Delta^* = sum_k Psi_k^* Delta_k`, an operator on `H`.
    pub fn cross_operator(&self, other: &GFrameFamily) -> Result<AdjointableOp> {
        self.check_parallel(other)?;
        self.synthesis_op().compose(&other.analysis_op())
    }
}

pub fn analysis(f: &GFrameFamily, x: &ModuleVector) -> Result<Vec<ModuleVector>> {
    f.analysis(x)
}

pub fn synthesis(f: &GFrameFamily, ys: &[ModuleVector]) -> Result<ModuleVector> {
    f.synthesis(ys)
}

pub fn frame_operator(f: &GFrameFamily) -> AdjointableOp {
    f.frame_operator()
}

pub fn optimal_bounds(f: &GFrameFamily) -> FrameBounds {
    f.optimal_bounds()
}

pub fn classify(f: &GFrameFamily, tol: Tolerance) -> Classification {
    f.classify(tol)
}

pub fn verify_frame_inequality(
    f: &GFrameFamily,
    a: f64,
    b: f64,
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<bool> {
    f.verify_frame_inequality(a, b, samples, seed, tol)
}

pub fn lemma33_check(f: &GFrameFamily, tol: Tolerance) -> bool {
    f.lemma33_check(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn identity_family(copies: usize) -> GFrameFamily {
        GFrameFamily::new(vec![AdjointableOp::identity(2, 2); copies]).unwrap()
    }

    #[test]
    fn analysis_and_synthesis_of_identity() {
        let f = identity_family(2);
        let x = SplitMix64::new(3).module_vector(2, 2);
        assert_eq!(f.analysis(&x).unwrap(), vec![x.clone(), x.clone()]);
        let single = identity_family(1);
        assert_eq!(single.synthesis(core::slice::from_ref(&x)).unwrap(), x);
        let zeros = vec![ModuleVector::zero(2, 2); 2];
        assert_eq!(f.synthesis(&zeros).unwrap(), ModuleVector::zero(2, 2));
        assert!(f.synthesis(&zeros[..1]).is_err());
    }

    #[test]
    fn frame_operator_of_copies() {
        let s = identity_family(3).frame_operator();
        assert_eq!(s, AdjointableOp::scalar(2, 2, num_complex::Complex64::new(3.0, 0.0)));
        let one = GFrameFamily::new(vec![AdjointableOp::identity(2, 1)]).unwrap();
        assert_eq!(one.frame_operator(), AdjointableOp::identity(2, 1));
    }

    #[test]
    fn classification_examples() {
        let tol = Tolerance::default();
        assert_eq!(identity_family(1).classify(tol).kind, FrameKind::ParsevalFrame);
        assert_eq!(identity_family(2).classify(tol).kind, FrameKind::TightFrame);
        let zero = GFrameFamily::zero(2, 2, &[2]).unwrap();
        let c = zero.classify(tol);
        assert_eq!(c.kind, FrameKind::BesselOnly);
        assert_eq!((c.bounds.lower, c.bounds.upper), (0.0, 0.0));
        // Embedding onto the first component only: S = diag(I, 0).
        let proj = AdjointableOp::from_blocks(&[
            vec![AlgebraElement::identity(2), AlgebraElement::zero(2)],
            vec![AlgebraElement::zero(2), AlgebraElement::zero(2)],
        ])
        .unwrap();
        assert_eq!(GFrameFamily::new(vec![proj]).unwrap().classify(tol).kind, FrameKind::BesselOnly);
    }

    #[test]
    fn frame_inequality_examples() {
        let tol = Tolerance::default();
        let f = identity_family(1);
        assert!(f.verify_frame_inequality(1.0, 1.0, 50, 1, tol).unwrap());
        assert!(!f.verify_frame_inequality(2.0, 3.0, 50, 1, tol).unwrap());
        assert!(f.verify_frame_inequality(3.0, 2.0, 50, 1, tol).is_err());
    }

    #[test]
    fn lemma33_on_trivial_families() {
        let tol = Tolerance::default();
        assert!(identity_family(1).lemma33_check(tol));
        assert!(GFrameFamily::zero(2, 2, &[1, 3]).unwrap().lemma33_check(tol));
    }

    #[test]
    fn rejects_mixed_sources() {
        let err = GFrameFamily::new(vec![AdjointableOp::identity(2, 2), AdjointableOp::identity(2, 3)]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(GFrameFamily::new(vec![]).is_err());
    }
}
