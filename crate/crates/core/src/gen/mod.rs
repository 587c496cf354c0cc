//! Seeded generators for structured instances.
//!
//! Every generator is a pure function of its inputs and re-checks its own
//! postcondition before returning.

pub mod instances;
pub mod rng;

use alloc::vec::Vec;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::hmodule::AdjointableOp;
use crate::linalg::{self, FlatMatrix};
use crate::sums::ScalarWeights;
use rng::SplitMix64;

/// Slack on generated bounds and on Parseval normalization.
pub const GEN_BOUND_TOL: f64 = 1e-8;

/// Largest condition number accepted for a raw Gaussian frame operator
/// before the draw is repeated.
const MAX_RAW_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Target {
    /// Unnormalized Gaussian members.
    Random,
    Parseval,
    Tight(f64),
    /// Optimal bounds exactly `(A, B)`.
    Bounds(f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenSpec {
    pub seed: u64,
    pub algebra_dim: usize,
    pub module_len: usize,
    pub member_dims: Vec<usize>,
    pub target: Target,
}

impl GenSpec {
    pub fn new(seed: u64, algebra_dim: usize, module_len: usize, member_dims: Vec<usize>, target: Target) -> Self {
        GenSpec { seed, algebra_dim, module_len, member_dims, target }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algebra_dim == 0 || self.module_len == 0 {
            return Err(Error::Invalid("algebra dimension and module length must be at least 1"));
        }
        if self.member_dims.is_empty() || self.member_dims.contains(&0) {
            return Err(Error::Invalid("need at least one member and every member dimension at least 1"));
        }
        match self.target {
            Target::Tight(nu) if !(nu > 0.0 && nu.is_finite()) => {
                Err(Error::BadRange("tight constant must be positive"))
            }
            Target::Bounds(a, b) if !(a > 0.0 && a <= b && b.is_finite()) => {
                Err(Error::BadRange("bounds need 0 < A <= B"))
            }
            _ => Ok(()),
        }
    }

    fn with(&self, seed: u64, member_dims: Vec<usize>) -> Self {
        GenSpec { seed, member_dims, ..self.clone() }
    }
}

fn raw_family(rng: &mut SplitMix64, spec: &GenSpec) -> Result<GFrameFamily> {
    let (n, d) = (spec.algebra_dim, spec.module_len);
    GFrameFamily::new(spec.member_dims.iter().map(|&dk| rng.operator(n, d, dk, 1.0)).collect())
}

/// `{Psi_k o S^{-1/2}}`.
fn canonical_parseval(f: &GFrameFamily) -> Result<GFrameFamily> {
    let s = f.frame_operator();
    let e = linalg::hermitian_eigen(s.flatten())?;
    if e.min() <= e.max() / MAX_RAW_CONDITION {
        return Err(Error::Degenerate("frame operator too close to singular"));
    }
    let root = AdjointableOp::from_flat(f.algebra_dim(), e.map_spectrum(|l| 1.0 / libm::sqrt(l)))?;
    f.compose_members(&root)
}

fn check_bounds(f: &GFrameFamily, lower: f64, upper: f64) -> Result<()> {
    let e = f.frame_spectrum();
    let ok = (e.min() - lower).abs() <= GEN_BOUND_TOL * lower.max(1.0)
        && (e.max() - upper).abs() <= GEN_BOUND_TOL * upper.max(1.0);
    if ok {
        Ok(())
    } else {
        Err(Error::InternalConsistency("generated family misses its target bounds"))
    }
}

/// Random family shaped by `spec`, normalized to its target.
pub fn gen_family(spec: &GenSpec) -> Result<GFrameFamily> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    if spec.target == Target::Random {
        return raw_family(&mut rng, spec);
    }
    let total: usize = spec.member_dims.iter().sum();
    if total < spec.module_len {
        return Err(Error::DegenerateSpec("member dimensions cannot span the module"));
    }
    let nd = spec.algebra_dim * spec.module_len;
    if let Target::Bounds(a, b) = spec.target {
        if nd == 1 && a < b {
            return Err(Error::DegenerateSpec("a one-dimensional module admits only tight bounds"));
        }
    }

    let parseval = loop {
        let raw = raw_family(&mut rng, spec)?;
        match canonical_parseval(&raw) {
            // A second pass removes the round-off left by the first.
            Ok(p) => break canonical_parseval(&p)?,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    };

    let out = match spec.target {
        Target::Random => unreachable!(),
        Target::Parseval => parseval,
        Target::Tight(nu) => parseval.scale_real(libm::sqrt(nu)),
        Target::Bounds(a, b) => {
            let mut mu: Vec<f64> = Vec::with_capacity(nd);
            mu.push(a);
            let mut interior: Vec<f64> = (0..nd.saturating_sub(2)).map(|_| rng.uniform_in(a, b)).collect();
            interior.sort_by(f64::total_cmp);
            mu.extend(interior);
            if nd > 1 {
                mu.push(b);
            }
            let v = rng.unitary(nd);
            let root = FlatMatrix::diagonal(&mu.iter().map(|m| libm::sqrt(*m)).collect::<Vec<_>>());
            let g = v.matmul(&root)?.matmul(&v.adjoint())?;
            parseval.compose_members(&AdjointableOp::from_flat(spec.algebra_dim, g)?)?
        }
    };

    match spec.target {
        Target::Random => {}
        Target::Parseval => check_bounds(&out, 1.0, 1.0)?,
        Target::Tight(nu) => check_bounds(&out, nu, nu)?,
        Target::Bounds(a, b) => check_bounds(&out, a, b)?,
    }
    Ok(out)
}

/// Raw Gaussian family composed with `I - q q^*` for a random unit `q`: a
/// Bessel sequence whose frame operator has a kernel.
pub fn gen_deficient_family(spec: &GenSpec) -> Result<GFrameFamily> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let raw = raw_family(&mut rng, spec)?;
    let nd = spec.algebra_dim * spec.module_len;
    let q = rng.unit_vector(nd);
    let p = FlatMatrix::from_fn(nd, nd, |i, j| {
        let id = if i == j { linalg::ONE } else { linalg::ZERO };
        id - q[i] * q[j].conj()
    });
    let out = raw.compose_members(&AdjointableOp::from_flat(spec.algebra_dim, p)?)?;
    let e = out.frame_spectrum();
    if e.min() > 1e-10 * e.max().max(1.0) {
        return Err(Error::InternalConsistency("deficient family has no kernel"));
    }
    Ok(out)
}

/// Embeds each member of `f` into target length `dims[k]`, starting at
/// component `offsets[k]`, with zeros elsewhere.
fn pad_members(f: &GFrameFamily, dims: &[usize], offsets: &[usize]) -> Result<GFrameFamily> {
    let n = f.algebra_dim();
    let mut out = Vec::with_capacity(f.len());
    for ((m, &dk), &off) in f.members().iter().zip(dims).zip(offsets) {
        let mut flat = FlatMatrix::zeros(m.flatten().rows(), n * dk);
        flat.set_submatrix(0, n * off, m.flatten());
        out.push(AdjointableOp::from_flat(n, flat)?);
    }
    GFrameFamily::new(out)
}

/// Two families with `T_Psi T_Delta^* = 0` exactly.
///
/// In every target `A^{d_k}` the first family lives on components
/// `0..d_k/2` and the second on the rest. Each part is generated for the
/// spec target on its own component range.
pub fn gen_orthogonal_pair(spec: &GenSpec) -> Result<(GFrameFamily, GFrameFamily)> {
    spec.validate()?;
    if spec.member_dims.iter().any(|&dk| dk < 2) {
        return Err(Error::DegenerateSpec("orthogonal pair needs every member dimension at least 2"));
    }
    let first: Vec<usize> = spec.member_dims.iter().map(|dk| dk / 2).collect();
    let second: Vec<usize> = spec.member_dims.iter().zip(&first).map(|(dk, h)| dk - h).collect();
    if spec.target != Target::Random
        && (first.iter().sum::<usize>() < spec.module_len || second.iter().sum::<usize>() < spec.module_len)
    {
        return Err(Error::DegenerateSpec("component split cannot span the module for both families"));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let f_part = gen_family(&spec.with(rng.next_u64(), first.clone()))?;
    let g_part = gen_family(&spec.with(rng.next_u64(), second))?;
    let zeros = alloc::vec![0; first.len()];
    let f = pad_members(&f_part, &spec.member_dims, &zeros)?;
    let g = pad_members(&g_part, &spec.member_dims, &first)?;
    if f.cross_operator(&g)?.flatten().max_abs() != 0.0 {
        return Err(Error::InternalConsistency("orthogonal pair has a nonzero cross term"));
    }
    Ok((f, g))
}

/// Haar-distributed unitary on `A^d`.
pub fn gen_isometry(seed: u64, n: usize, d: usize) -> Result<AdjointableOp> {
    if n == 0 || d == 0 {
        return Err(Error::Invalid("isometry needs n, d >= 1"));
    }
    let mut rng = SplitMix64::new(seed);
    let op = AdjointableOp::from_flat(n, rng.unitary(n * d))?;
    if op.isometry_defect() > 1e-10 {
        return Err(Error::InternalConsistency("generated isometry is not isometric"));
    }
    Ok(op)
}

/// Hermitian positive weight `U diag(s) U^*` with `s^2` strictly inside
/// `(a_w, b_w)`.
pub fn gen_weight(rng: &mut SplitMix64, n: usize, a_w: f64, b_w: f64) -> AlgebraElement {
    let (lo, hi) = (libm::sqrt(a_w), libm::sqrt(b_w));
    let s: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * (0.05 + 0.9 * rng.uniform())).collect();
    let u = rng.unitary(n);
    let m = u.matmul(&FlatMatrix::diagonal(&s)).and_then(|m| m.matmul(&u.adjoint())).expect("square");
    AlgebraElement::new(m).expect("finite")
}

/// `count` pairs `(theta_k, delta_k)` with `a_w < |theta_k|^2, |delta_k|^2 < b_w`.
pub fn gen_weights(seed: u64, n: usize, count: usize, a_w: f64, b_w: f64) -> Result<ScalarWeights> {
    if !(a_w > 0.0 && a_w < b_w && b_w.is_finite()) {
        return Err(Error::BadRange("weights need 0 < A_w < B_w"));
    }
    if n == 0 {
        return Err(Error::Invalid("weights need n >= 1"));
    }
    let mut rng = SplitMix64::new(seed);
    let thetas = (0..count).map(|_| gen_weight(&mut rng, n, a_w, b_w)).collect();
    let deltas = (0..count).map(|_| gen_weight(&mut rng, n, a_w, b_w)).collect();
    let w = ScalarWeights::new(thetas, deltas, a_w, b_w)?;
    if !w.invariants_hold() {
        return Err(Error::InternalConsistency("generated weights violate their spectral range"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tolerance;
    use crate::gframe::FrameKind;
    use alloc::vec;

    fn spec(seed: u64, target: Target) -> GenSpec {
        GenSpec::new(seed, 2, 3, vec![2, 1, 2], target)
    }

    #[test]
    fn parseval_tight_and_bounds_targets() {
        let p = gen_family(&spec(1, Target::Parseval)).unwrap();
        assert_eq!(p.classify(Tolerance::default()).kind, FrameKind::ParsevalFrame);
        let t = gen_family(&spec(2, Target::Tight(3.0))).unwrap();
        assert!((t.optimal_bounds().tight_constant() - 3.0).abs() < 1e-8);
        let b = gen_family(&spec(3, Target::Bounds(0.5, 2.0))).unwrap();
        let fb = b.optimal_bounds();
        assert!((fb.lower - 0.5).abs() < 1e-8 && (fb.upper - 2.0).abs() < 1e-8);
    }

    #[test]
    fn deterministic() {
        let s = spec(9, Target::Bounds(1.0, 4.0));
        assert_eq!(gen_family(&s).unwrap(), gen_family(&s).unwrap());
    }

    #[test]
    fn degenerate_specs() {
        let s = GenSpec::new(0, 1, 4, vec![1, 2], Target::Parseval);
        assert!(matches!(gen_family(&s), Err(Error::DegenerateSpec(_))));
        let s = GenSpec::new(0, 1, 1, vec![1], Target::Bounds(1.0, 2.0));
        assert!(matches!(gen_family(&s), Err(Error::DegenerateSpec(_))));
        let s = GenSpec::new(0, 1, 2, vec![1, 3], Target::Parseval);
        assert!(matches!(gen_orthogonal_pair(&s), Err(Error::DegenerateSpec(_))));
        assert!(matches!(gen_weights(0, 2, 3, 2.0, 1.0), Err(Error::BadRange(_))));
    }

    #[test]
    fn orthogonal_pair_of_parseval_families() {
        let s = GenSpec::new(4, 1, 2, vec![4, 4], Target::Parseval);
        let (f, g) = gen_orthogonal_pair(&s).unwrap();
        assert!(f.cross_operator(&g).unwrap().op_norm() <= 1e-12);
        let sum = f.add(&g).unwrap();
        assert!((sum.optimal_bounds().tight_constant() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn deficient_family_is_bessel_only() {
        let f = gen_deficient_family(&spec(5, Target::Random)).unwrap();
        assert_eq!(f.classify(Tolerance::default()).kind, FrameKind::BesselOnly);
    }

    #[test]
    fn weights_inside_range() {
        let w = gen_weights(7, 3, 4, 0.99, 1.01).unwrap();
        assert!(w.invariants_hold());
        assert_eq!(w.thetas.len(), 4);
    }
}
