//! Random instances that satisfy the hypotheses of each checker by
//! construction.
//!
//! Builders that need an orthogonal pair double every member dimension, so
//! that each half can still span the module.

use alloc::vec::Vec;

use crate::algebra::AlgebraElement;
use crate::dispatch::{Instance, TheoremKind};
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::hmodule::AdjointableOp;
use crate::linalg::FlatMatrix;
use crate::report::{StabilityId, TheoremId};
use crate::sums::ScalarWeights;

use super::rng::SplitMix64;
use super::{gen_deficient_family, gen_family, gen_isometry, gen_orthogonal_pair, gen_weights, GenSpec, Target};

/// Shape shared by every family in an instance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InstanceShape {
    pub algebra_dim: usize,
    pub module_len: usize,
    pub member_dims: Vec<usize>,
}

impl InstanceShape {
    pub fn new(algebra_dim: usize, module_len: usize, member_dims: Vec<usize>) -> Self {
        InstanceShape { algebra_dim, module_len, member_dims }
    }

    fn spec(&self, seed: u64, target: Target) -> GenSpec {
        GenSpec::new(seed, self.algebra_dim, self.module_len, self.member_dims.clone(), target)
    }

    fn doubled(&self) -> Self {
        InstanceShape { member_dims: self.member_dims.iter().map(|d| 2 * d).collect(), ..self.clone() }
    }

    fn flat_dim(&self) -> usize {
        self.algebra_dim * self.module_len
    }
}

struct Ctx<'a> {
    rng: SplitMix64,
    shape: &'a InstanceShape,
}

impl<'a> Ctx<'a> {
    fn seed(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn coin(&mut self, k: u64) -> u64 {
        self.rng.below(k)
    }

    fn family(&mut self, target: Target) -> Result<GFrameFamily> {
        let s = self.seed();
        gen_family(&self.shape.spec(s, target))
    }

    /// Frame with optimal bounds `(a, b)` drawn from `[lo, lo + 1] x [a, a + spread]`.
    fn bounded_frame(&mut self, lo: f64, spread: f64) -> Result<GFrameFamily> {
        let a = self.rng.uniform_in(lo, lo + 1.0);
        let b = if self.shape.flat_dim() == 1 { a } else { a + self.rng.uniform_in(0.0, spread) };
        self.family(Target::Bounds(a, b))
    }

    fn pair(&mut self, target: Target) -> Result<(GFrameFamily, GFrameFamily)> {
        let s = self.seed();
        gen_orthogonal_pair(&self.shape.doubled().spec(s, target))
    }

    fn weights(&mut self) -> Result<ScalarWeights> {
        let a_w = self.rng.uniform_in(0.5, 1.0);
        let b_w = a_w * self.rng.uniform_in(1.2, 3.0);
        let s = self.seed();
        gen_weights(s, self.shape.algebra_dim, self.shape.member_dims.len(), a_w, b_w)
    }

    fn op_from_flat(&self, flat: FlatMatrix) -> Result<AdjointableOp> {
        AdjointableOp::from_flat(self.shape.algebra_dim, flat)
    }

    fn unitary(&mut self) -> Result<AdjointableOp> {
        let u = self.rng.unitary(self.shape.flat_dim());
        self.op_from_flat(u)
    }

    fn random_op(&mut self) -> AdjointableOp {
        let (n, d) = (self.shape.algebra_dim, self.shape.module_len);
        self.rng.operator(n, d, d, 1.0)
    }

    /// Random operator with norm one.
    fn unit_op(&mut self) -> AdjointableOp {
        let op = self.random_op();
        let norm = op.op_norm();
        op.scale_real(1.0 / norm)
    }

    fn identity(&self) -> AdjointableOp {
        AdjointableOp::identity(self.shape.algebra_dim, self.shape.module_len)
    }

    /// Random Bessel family rescaled to upper bound `upper`.
    fn bessel_with_upper(&mut self, upper: f64) -> Result<GFrameFamily> {
        let g = self.family(Target::Random)?;
        let top = g.frame_spectrum().max();
        Ok(g.scale_real(libm::sqrt(upper / top)))
    }

    /// `F o (I + eps E)` or `(1 + sign eps) F`.
    fn nearby(&mut self, f: &GFrameFamily, eps: f64, sign: f64) -> Result<GFrameFamily> {
        if self.coin(2) == 0 {
            let e = self.unit_op().scale_real(eps);
            f.compose_members(&self.identity().add(&e)?)
        } else {
            Ok(f.scale_real(1.0 + sign * eps))
        }
    }
}

/// `{theta_k = delta_k}` drawn as in [`gen_weights`].
fn equal_weights(w: ScalarWeights) -> Result<ScalarWeights> {
    let thetas: Vec<AlgebraElement> = w.thetas.clone();
    ScalarWeights::new(thetas.clone(), thetas, w.a_w, w.b_w)
}

fn bounds(f: &GFrameFamily) -> (f64, f64) {
    let e = f.frame_spectrum();
    (e.min(), e.max())
}

/// An instance for `kind` whose hypotheses hold by construction.
///
/// `Classify` instances alternate between frames and Bessel-only families.
pub fn build(kind: TheoremKind, shape: &InstanceShape, seed: u64) -> Result<Instance> {
    if shape.algebra_dim == 0 || shape.module_len == 0 || shape.member_dims.is_empty() {
        return Err(Error::Invalid("instance shape needs n, d >= 1 and at least one member"));
    }
    if shape.member_dims.iter().sum::<usize>() < shape.module_len {
        return Err(Error::DegenerateSpec("member dimensions cannot span the module"));
    }
    let mut cx = Ctx { rng: SplitMix64::new(seed), shape };
    match kind {
        TheoremKind::Classify => {
            let s = cx.seed();
            let f = if cx.coin(2) == 0 {
                gen_family(&shape.spec(s, Target::Random))?
            } else {
                gen_deficient_family(&shape.spec(s, Target::Random))?
            };
            Ok(Instance::new(f))
        }
        TheoremKind::Sum(id) => build_sum(&mut cx, id),
        TheoremKind::Stability(id) => build_stability(&mut cx, id),
    }
}

fn build_sum(cx: &mut Ctx<'_>, id: TheoremId) -> Result<Instance> {
    match id {
        TheoremId::PerturbLambda => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let lambda = if cx.coin(2) == 0 {
                let t = cx.rng.uniform_in(0.0, 1.0);
                cx.identity().scale_real(t)
            } else {
                // I + Lambda = S^{1/2} W S^{-1/2} with W W^* >= I.
                let e = f.frame_spectrum();
                let root = e.map_spectrum(libm::sqrt);
                let inv_root = e.map_spectrum(|l| 1.0 / libm::sqrt(l));
                let dim = cx.shape.flat_dim();
                let q: Vec<f64> = (0..dim).map(|_| cx.rng.uniform_in(1.0, 1.5)).collect();
                let w = cx.rng.unitary(dim).matmul(&FlatMatrix::diagonal(&q))?;
                let p = root.matmul(&w)?.matmul(&inv_root)?;
                cx.op_from_flat(p.sub(&FlatMatrix::identity(dim))?)?
            };
            Ok(Instance::new(f).with_lambda(lambda))
        }
        TheoremId::T3Equiv => {
            let f = cx.family(Target::Random)?;
            let g = cx.family(Target::Random)?;
            match cx.coin(4) {
                0 => {
                    let (m, n) = (cx.random_op(), cx.random_op());
                    Ok(Instance::new(f).with_delta(g).with_mn(m, n))
                }
                1 => {
                    let dim = cx.shape.flat_dim();
                    let q = cx.rng.unit_vector(dim);
                    let p = FlatMatrix::from_fn(dim, dim, |i, j| {
                        let id = if i == j { 1.0 } else { 0.0 };
                        num_complex::Complex64::new(id, 0.0) - q[i] * q[j].conj()
                    });
                    let p = cx.op_from_flat(p)?;
                    let m = cx.random_op().compose(&p)?;
                    let n = cx.random_op().compose(&p)?;
                    Ok(Instance::new(f).with_delta(g).with_mn(m, n))
                }
                2 => {
                    let id = cx.identity();
                    Ok(Instance::new(f.clone()).with_delta(f).with_mn(id.clone(), id))
                }
                _ => {
                    let zero = cx.identity().scale_real(0.0);
                    Ok(Instance::new(f).with_delta(g).with_mn(cx.identity(), zero))
                }
            }
        }
        TheoremId::T3Corollary => {
            if cx.coin(2) == 0 {
                let f = cx.bounded_frame(0.5, 2.0)?;
                let c = cx.rng.uniform_in(0.2, 2.0);
                let g = f.scale_real(c);
                Ok(Instance::new(f).with_delta(g))
            } else {
                let a = cx.rng.uniform_in(0.5, 1.5);
                let (f, g) = cx.pair(Target::Bounds(a, a + 1.0))?;
                Ok(Instance::new(f).with_delta(g))
            }
        }
        TheoremId::T7Scalar => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let w = cx.weights()?;
            let (d_low, _) = bounds(&f);
            let rho = cx.rng.uniform_in(0.1, 0.6);
            let g = cx.bessel_with_upper(rho * w.a_w * d_low / w.b_w)?;
            Ok(Instance::new(f).with_delta(g).with_weights(w))
        }
        TheoremId::T11Positive => {
            let w = cx.weights()?;
            let (f, g) = if cx.coin(2) == 0 {
                let f = cx.bounded_frame(0.5, 2.0)?;
                let c = cx.rng.uniform_in(0.3, 2.0);
                let g = f.scale_real(c);
                (f, g)
            } else {
                let a = cx.rng.uniform_in(0.5, 1.5);
                cx.pair(Target::Bounds(a, a + 1.0))?
            };
            Ok(Instance::new(f).with_delta(g).with_weights(w))
        }
        TheoremId::TightSum => {
            let (a1, a2) = (cx.rng.uniform_in(0.25, 3.0), cx.rng.uniform_in(0.25, 3.0));
            let (f, g) = cx.pair(Target::Parseval)?;
            Ok(Instance::new(f.scale_real(libm::sqrt(a1))).with_delta(g.scale_real(libm::sqrt(a2))))
        }
        TheoremId::IsometrySum => {
            let (f, g) = if cx.coin(2) == 0 {
                let f = cx.bounded_frame(0.5, 2.0)?;
                let c = cx.rng.uniform_in(0.0, 2.0);
                let g = f.scale_real(c);
                (f, g)
            } else {
                let a = cx.rng.uniform_in(0.5, 1.5);
                cx.pair(Target::Bounds(a, a + 1.0))?
            };
            let s = cx.seed();
            let lambda = gen_isometry(s, cx.shape.algebra_dim, cx.shape.module_len)?;
            Ok(Instance::new(f).with_delta(g).with_lambda(lambda))
        }
        TheoremId::LambdaLower => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let (d_low, _) = bounds(&f);
            let rho = cx.rng.uniform_in(0.05, 0.6);
            let g = cx.bessel_with_upper(rho * d_low)?;
            let dim = cx.shape.flat_dim();
            let s: Vec<f64> = (0..dim).map(|_| cx.rng.uniform_in(0.5, 1.5)).collect();
            let n_flat = FlatMatrix::diagonal(&s).matmul(&cx.rng.unitary(dim))?;
            let stretch = cx.rng.uniform_in(1.0, 2.0);
            let m_flat = n_flat.matmul(&cx.rng.unitary(dim))?.scale_real(stretch);
            let (m, n) = (cx.op_from_flat(m_flat)?, cx.op_from_flat(n_flat)?);
            let bound = 0.9 * n.lower_bound();
            let mut inst = Instance::new(f).with_delta(g).with_mn(m, n);
            inst.lambda_bound = Some(bound);
            Ok(inst)
        }
        TheoremId::TightMn => {
            let (a1, a2) = (cx.rng.uniform_in(0.25, 3.0), cx.rng.uniform_in(0.25, 3.0));
            let (f, g) = cx.pair(Target::Parseval)?;
            let (f, g) = (f.scale_real(libm::sqrt(a1)), g.scale_real(libm::sqrt(a2)));
            let (m, n) = if cx.coin(2) == 0 {
                let alpha = cx.rng.uniform_in(0.5, 2.0);
                let t = cx.rng.uniform_in(0.0, core::f64::consts::FRAC_PI_2);
                let (c, s) = (libm::cos(t), libm::sin(t));
                let u = cx.unitary()?;
                let v = cx.unitary()?;
                (u.scale_real(libm::sqrt(alpha / a1) * c), v.scale_real(libm::sqrt(alpha / a2) * s))
            } else {
                (cx.random_op(), cx.random_op())
            };
            Ok(Instance::new(f).with_delta(g).with_mn(m, n))
        }
    }
}

fn build_stability(cx: &mut Ctx<'_>, id: StabilityId) -> Result<Instance> {
    match id {
        StabilityId::PropMixed => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let w = equal_weights(cx.weights()?)?;
            let (c, d) = bounds(&f);
            // Keeps ||P(x) - Q(x)|| <= P(x) / 16 on every x.
            let eps = 0.1 * libm::sqrt(w.a_w * c / (w.b_w * d));
            let g = cx.nearby(&f, eps, 1.0)?;
            Ok(Instance::new(f).with_delta(g).with_weights(w).with_alphas(0.5, 0.5))
        }
        StabilityId::ThmDifference => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let w = equal_weights(cx.weights()?)?;
            let (c, d) = bounds(&f);
            let (a1, a2) = (0.5, 0.5);
            let eps = 0.5 * libm::sqrt(a1 * w.a_w * c / (w.b_w * d));
            let g = cx.nearby(&f, eps, -1.0)?;
            Ok(Instance::new(f).with_delta(g).with_weights(w).with_alphas(a1, a2))
        }
        StabilityId::T12Operator => {
            let (c, d) = if cx.shape.flat_dim() == 1 {
                let t = cx.rng.uniform_in(2.0, 3.0);
                (t, t)
            } else {
                let c = cx.rng.uniform_in(0.5, 2.0);
                (c, c + cx.rng.uniform_in(1.0, 2.0))
            };
            let f = cx.family(Target::Bounds(c, d))?;
            let (c, d) = bounds(&f);
            let rho = cx.rng.uniform_in(0.1, 0.9);
            let k = f.len();
            let raw: Vec<f64> = (0..k).map(|_| cx.rng.uniform_in(0.1, 1.0)).collect();
            let total: f64 = raw.iter().sum();
            let dim = cx.shape.flat_dim();
            let mut ops = Vec::with_capacity(k);
            for (m, r) in f.members().iter().zip(&raw) {
                let z = cx.rng.gaussian_matrix(dim, dim);
                let p = z.matmul(&z.adjoint())?;
                let p = p.scale_real(rho * c / d * r / total / crate::linalg::spectral_norm(&p));
                ops.push(m.gram().add(&cx.op_from_flat(p)?)?);
            }
            let mut inst = Instance::new(f);
            inst.delta_ops = Some(ops);
            Ok(inst)
        }
        StabilityId::FinalCorollary => {
            let f = cx.bounded_frame(0.5, 2.0)?;
            let (c, d) = bounds(&f);
            let eps = 0.2 * c / d;
            let g = cx.nearby(&f, eps, -1.0)?;
            let gap = f.frame_operator().sub(&g.frame_operator())?.op_norm();
            let mut inst = Instance::new(f).with_delta(g);
            inst.alpha = Some(gap + 0.5 * (c - gap));
            Ok(inst)
        }
    }
}
