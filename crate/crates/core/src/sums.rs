//! Sums and weighted combinations of g-frames, each paired with a checker
//! that measures the hypotheses and conclusion of the matching theorem.
//!
//! Members of two families are combined index by index, so both families
//! must share `H`, `|Theta|` and every target length `d_k`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::gen::rng::SplitMix64;
use crate::gframe::{FrameBounds, GFrameFamily};
use crate::hmodule::{AdjointableOp, ModuleVector};
use crate::linalg::{self, FlatMatrix, HermitianEigen};
use crate::report::{Check, CheckConfig, TheoremId, TheoremReport, FORMULA_REL};

/// Algebra weights `theta_k`, `delta_k` with `A_w < |w|^2 < B_w` read
/// spectrally.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarWeights {
    pub thetas: Vec<AlgebraElement>,
    pub deltas: Vec<AlgebraElement>,
    pub a_w: f64,
    pub b_w: f64,
}

impl ScalarWeights {
    pub fn new(thetas: Vec<AlgebraElement>, deltas: Vec<AlgebraElement>, a_w: f64, b_w: f64) -> Result<Self> {
        if thetas.len() != deltas.len() {
            return Err(Error::shape("weights: theta vs delta count", thetas.len(), deltas.len()));
        }
        if !(a_w > 0.0 && a_w < b_w && b_w.is_finite()) {
            return Err(Error::BadRange("weights need 0 < A_w < B_w"));
        }
        if let Some(first) = thetas.first() {
            let n = first.dim();
            if let Some(w) = thetas.iter().chain(&deltas).find(|w| w.dim() != n) {
                return Err(Error::shape("weights: algebra dimension", n, w.dim()));
            }
        }
        Ok(ScalarWeights { thetas, deltas, a_w, b_w })
    }

    /// Every weight equal to `c I`.
    pub fn scalar(n: usize, count: usize, c: f64, a_w: f64, b_w: f64) -> Result<Self> {
        let w = AlgebraElement::scalar(n, Complex64::new(c, 0.0));
        Self::new(alloc::vec![w.clone(); count], alloc::vec![w; count], a_w, b_w)
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Smallest of `lambda_min(|w|^2) - A_w` and `B_w - lambda_max(|w|^2)`
    /// over all weights; positive exactly when the invariants hold.
    pub fn range_margin(&self) -> f64 {
        self.thetas
            .iter()
            .chain(&self.deltas)
            .map(|w| {
                let e = w.adjoint().mul(w).expect("same dimension").hermitian_eigen();
                (e.min() - self.a_w).min(self.b_w - e.max())
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn invariants_hold(&self) -> bool {
        self.range_margin() > 0.0
    }
}

fn spectrum(op: &AdjointableOp) -> HermitianEigen {
    linalg::hermitian_eigen(op.flatten()).expect("frame operators are square")
}

fn as_element(op: &AdjointableOp) -> AlgebraElement {
    AlgebraElement::new(op.flatten().clone()).expect("square finite operator")
}

fn check_square_on(op: &AdjointableOp, f: &GFrameFamily, what: &'static str) -> Result<()> {
    if op.algebra_dim() != f.algebra_dim() {
        return Err(Error::shape(what, f.algebra_dim(), op.algebra_dim()));
    }
    if op.source_len() != f.source_len() || op.target_len() != f.source_len() {
        return Err(Error::shape(what, f.source_len(), op.source_len().max(op.target_len())));
    }
    Ok(())
}

fn check_weights(f: &GFrameFamily, w: &ScalarWeights) -> Result<()> {
    if w.len() != f.len() {
        return Err(Error::shape("weights vs index set", f.len(), w.len()));
    }
    Ok(())
}

pub(crate) fn frame_check(name: &str, f: &GFrameFamily, tol: Tolerance) -> Check {
    let e = f.frame_spectrum();
    Check::above(name, e.min(), tol.threshold(e.max()))
}

/// `formula` and `direct` agree within `FORMULA_REL` relative.
pub(crate) fn formula_check(
    name: &str,
    formula: &AdjointableOp,
    direct: &AdjointableOp,
    tol: Tolerance,
) -> Result<Check> {
    let gap = formula.sub(direct)?.op_norm();
    let scale = formula.op_norm().max(direct.op_norm());
    Ok(Check::at_most(name, gap, tol.abs + FORMULA_REL * scale))
}

/// `T_Psi T_Delta^*` is a positive operator on `H`.
pub(crate) fn cross_positive_check(c: &AdjointableOp, tol: Tolerance) -> Check {
    let el = as_element(c);
    let min = el.hermitian_eigen().min();
    Check::new("cross_term_positive", el.is_positive(tol), min, -tol.threshold(el.operator_norm()))
}

fn lower_check(cfg: &CheckConfig, achieved: &FrameBounds, predicted: f64) -> Check {
    let slack = cfg.bound_slack(predicted.abs().max(achieved.upper));
    Check::at_least("achieved_lower_vs_predicted", achieved.lower, predicted - slack)
}

fn upper_check(cfg: &CheckConfig, achieved: &FrameBounds, predicted: f64) -> Check {
    let slack = cfg.bound_slack(predicted.abs().max(achieved.upper));
    Check::at_most("achieved_upper_vs_predicted", achieved.upper, predicted + slack)
}

fn bounds_of(f: &GFrameFamily, tol: Tolerance) -> FrameBounds {
    f.classify(tol).bounds
}

pub(crate) fn sample_vectors(n: usize, d: usize, cfg: &CheckConfig) -> Vec<ModuleVector> {
    let mut rng = SplitMix64::new(cfg.seed);
    (0..cfg.samples).map(|_| rng.module_vector(n, d)).collect()
}

/// `{Psi_k o (I + Lambda)}`.
pub fn perturb_lambda(
    f: &GFrameFamily,
    lambda: &AdjointableOp,
    cfg: &CheckConfig,
) -> Result<(GFrameFamily, TheoremReport)> {
    check_square_on(lambda, f, "perturbation operator vs module")?;
    let tol = cfg.tol;
    let ipl = AdjointableOp::identity(f.algebra_dim(), f.source_len()).add(lambda)?;
    let out = f.compose_members(&ipl)?;
    let s = f.frame_operator();
    let s_formula = ipl.adjoint().compose(&s.compose(&ipl)?)?;
    let s_direct = out.frame_operator();

    let hyp = alloc::vec![
        frame_check("psi_is_frame", f, tol),
        Check::flag("perturbed_operator_dominates", as_element(&s).psd_order_leq(&as_element(&s_formula), tol)?),
    ];
    let b = spectrum(&s).max();
    let norm = lambda.op_norm();
    let predicted_upper = 2.0 * b * (1.0 + norm * norm);
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![
        frame_check("result_is_frame", &out, tol),
        formula_check("frame_operator_formula", &s_formula, &s_direct, tol)?,
        upper_check(cfg, &achieved, predicted_upper),
    ];
    let report = TheoremReport::assemble(TheoremId::PerturbLambda, hyp, concl, (None, Some(predicted_upper)), achieved);
    Ok((out, report))
}

/// `{Psi_k o M + Delta_k o N}`.
pub fn op_weighted_sum(
    f: &GFrameFamily,
    g: &GFrameFamily,
    m: &AdjointableOp,
    n: &AdjointableOp,
    cfg: &CheckConfig,
) -> Result<(GFrameFamily, TheoremReport)> {
    check_square_on(m, f, "M vs module")?;
    check_square_on(n, f, "N vs module")?;
    let tol = cfg.tol;
    let out = f.compose_members(m)?.add(&g.compose_members(n)?)?;

    let cond1 = frame_check("sum_is_frame", &out, tol);

    let synth = m.adjoint().compose(&f.synthesis_op())?.add(&n.adjoint().compose(&g.synthesis_op())?)?;
    let cond2 = synth.is_surjective(tol);

    let c = f.cross_operator(g)?;
    let (ma, na) = (m.adjoint(), n.adjoint());
    let s_formula = ma
        .compose(&f.frame_operator().compose(m)?)?
        .add(&ma.compose(&c.compose(n)?)?)?
        .add(&na.compose(&c.adjoint().compose(m)?)?)?
        .add(&na.compose(&g.frame_operator().compose(n)?)?)?;
    let e3 = spectrum(&s_formula);
    let cond3 = e3.min() > tol.threshold(e3.max());

    let concl = alloc::vec![
        Check::new("frame_iff_surjective", cond1.passed == cond2, cond1.measured, cond1.limit),
        Check::new("surjective_iff_positive", cond2 == cond3, e3.min(), tol.threshold(e3.max())),
        Check::flag("frame_iff_positive", cond1.passed == cond3),
        formula_check("frame_operator_formula", &s_formula, &out.frame_operator(), tol)?,
    ];
    let achieved = bounds_of(&out, tol);
    let report = TheoremReport::assemble(TheoremId::T3Equiv, Vec::new(), concl, (None, None), achieved);
    Ok((out, report))
}

/// `{Psi_k + Delta_k}` under a positive cross term.
///
/// Only asserted when at least one input is a frame: two Bessel-only inputs
/// are reported as a failed hypothesis.
pub fn t3_corollary_check(f: &GFrameFamily, g: &GFrameFamily, cfg: &CheckConfig) -> Result<TheoremReport> {
    let tol = cfg.tol;
    let out = f.add(g)?;
    let c = f.cross_operator(g)?;
    let (sf, sg) = (f.frame_operator(), g.frame_operator());
    let s_formula = sf.add(&c)?.add(&c.adjoint())?.add(&sg)?;

    let ef = spectrum(&sf);
    let eg = spectrum(&sg);
    let some_frame = ef.min() > tol.threshold(ef.max()) || eg.min() > tol.threshold(eg.max());
    let hyp = alloc::vec![cross_positive_check(&c, tol), Check::flag("some_input_is_frame", some_frame)];

    let predicted_lower = ef.min().max(0.0) + eg.min().max(0.0);
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![
        frame_check("sum_is_frame", &out, tol),
        formula_check("frame_operator_formula", &s_formula, &out.frame_operator(), tol)?,
        lower_check(cfg, &achieved, predicted_lower),
    ];
    Ok(TheoremReport::assemble(TheoremId::T3Corollary, hyp, concl, (Some(predicted_lower), None), achieved))
}

fn weighted_sum(f: &GFrameFamily, g: &GFrameFamily, w: &ScalarWeights) -> Result<GFrameFamily> {
    check_weights(f, w)?;
    f.weighted(&w.thetas)?.add(&g.weighted(&w.deltas)?)
}

fn weight_check(w: &ScalarWeights) -> Check {
    Check::above("weights_in_range", w.range_margin(), 0.0)
}

/// `{theta_k Psi_k + delta_k Delta_k}` with a frame `Psi` dominating a weak
/// Bessel `Delta`.
pub fn scalar_weighted_sum(
    f: &GFrameFamily,
    g: &GFrameFamily,
    w: &ScalarWeights,
    cfg: &CheckConfig,
) -> Result<(GFrameFamily, TheoremReport)> {
    let tol = cfg.tol;
    let out = weighted_sum(f, g, w)?;
    let ef = f.frame_spectrum();
    let (d_low, d_up) = (ef.min().max(0.0), ef.max());
    let d_delta = g.frame_spectrum().max().max(0.0);

    let hyp = alloc::vec![
        weight_check(w),
        frame_check("psi_is_frame", f, tol),
        Check::below("weighted_bessel_below_weighted_frame", w.b_w * d_delta, w.a_w * d_low),
    ];
    let gap = libm::sqrt(w.a_w * d_low) - libm::sqrt(w.b_w * d_delta);
    let predicted_lower = gap * gap;
    let predicted_upper = 2.0 * w.b_w * (d_delta + d_up);
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![
        frame_check("sum_is_frame", &out, tol),
        lower_check(cfg, &achieved, predicted_lower),
        upper_check(cfg, &achieved, predicted_upper),
    ];
    let report = TheoremReport::assemble(
        TheoremId::T7Scalar,
        hyp,
        concl,
        (Some(predicted_lower), Some(predicted_upper)),
        achieved,
    );
    Ok((out, report))
}

/// Weighted sum of two frames with a positive cross term; predicts the lower
/// bound `A_w (alpha + beta)`.
///
/// With general algebra weights the conclusion can fail: `theta = I`,
/// `delta = -I`, `G = F` satisfies every hypothesis and sums to zero. The
/// checker reports such instances as `ConclusionFails`.
pub fn t11_check(f: &GFrameFamily, g: &GFrameFamily, w: &ScalarWeights, cfg: &CheckConfig) -> Result<TheoremReport> {
    let tol = cfg.tol;
    let out = weighted_sum(f, g, w)?;
    let c = f.cross_operator(g)?;
    let hyp = alloc::vec![
        weight_check(w),
        frame_check("psi_is_frame", f, tol),
        frame_check("delta_is_frame", g, tol),
        cross_positive_check(&c, tol),
    ];
    let alpha = f.frame_spectrum().min().max(0.0);
    let beta = g.frame_spectrum().min().max(0.0);
    let predicted_lower = w.a_w * (alpha + beta);
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![frame_check("sum_is_frame", &out, tol), lower_check(cfg, &achieved, predicted_lower)];
    Ok(TheoremReport::assemble(TheoremId::T11Positive, hyp, concl, (Some(predicted_lower), None), achieved))
}

fn tight_constant(f: &GFrameFamily, which: &'static str, tol: Tolerance) -> Result<f64> {
    let b = bounds_of(f, tol);
    if !b.tight {
        return Err(Error::NotTight { which, spread: b.upper - b.lower });
    }
    Ok(b.tight_constant())
}

fn cross_vanishes_check(c: &AdjointableOp, scale: f64, tol: Tolerance) -> Check {
    Check::at_most("cross_term_vanishes", c.op_norm(), tol.threshold(scale))
}

/// Sum of an `alpha_1`-tight and an `alpha_2`-tight family with vanishing
/// cross term; predicts the tight constant `alpha_1 + alpha_2`.
pub fn tight_sum_check(f: &GFrameFamily, g: &GFrameFamily, cfg: &CheckConfig) -> Result<TheoremReport> {
    let tol = cfg.tol;
    let a1 = tight_constant(f, "psi", tol)?;
    let a2 = tight_constant(g, "delta", tol)?;
    let c = f.cross_operator(g)?;
    let out = f.add(g)?;
    let hyp = alloc::vec![cross_vanishes_check(&c, a1.max(a2), tol)];
    let alpha = a1 + a2;
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![
        Check::flag("sum_is_tight", achieved.tight),
        Check::at_most(
            "tight_constant_is_sum",
            (achieved.tight_constant() - alpha).abs(),
            cfg.bound_slack(alpha.max(1.0)),
        ),
    ];
    Ok(TheoremReport::assemble(TheoremId::TightSum, hyp, concl, (Some(alpha), Some(alpha)), achieved))
}

/// `{(Psi_k + Delta_k) o Lambda}` for an isometry `Lambda`; predicts the
/// lower bound of `Psi`.
pub fn isometry_sum_check(
    f: &GFrameFamily,
    g: &GFrameFamily,
    lambda: &AdjointableOp,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    check_square_on(lambda, f, "isometry vs module")?;
    let tol = cfg.tol;
    let out = f.add(g)?.compose_members(lambda)?;
    let c = f.cross_operator(g)?;
    let defect = lambda.isometry_defect();
    let hyp = alloc::vec![
        frame_check("psi_is_frame", f, tol),
        cross_positive_check(&c, tol),
        Check::at_most("lambda_is_isometry", defect, tol.abs + tol.rel),
    ];
    let predicted_lower = f.frame_spectrum().min().max(0.0);
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![frame_check("result_is_frame", &out, tol), lower_check(cfg, &achieved, predicted_lower)];
    Ok(TheoremReport::assemble(TheoremId::IsometrySum, hyp, concl, (Some(predicted_lower), None), achieved))
}

/// `{Psi_k o M + Delta_k o N}` with `N` bounded below by `lambda`.
///
/// The estimate behind the predicted bound also needs `||Mx|| >= ||Nx||`;
/// it is checked as an extra hypothesis, spectrally as `M^*M >= N^*N` and on
/// samples.
pub fn lambda_lower_check(
    f: &GFrameFamily,
    g: &GFrameFamily,
    m: &AdjointableOp,
    n: &AdjointableOp,
    lambda: f64,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    check_square_on(m, f, "M vs module")?;
    check_square_on(n, f, "N vs module")?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::BadRange("lambda must be positive"));
    }
    let tol = cfg.tol;
    let out = f.compose_members(m)?.add(&g.compose_members(n)?)?;
    let d_low = f.frame_spectrum().min().max(0.0);
    let d_delta = g.frame_spectrum().max().max(0.0);

    let n_low = n.lower_bound();
    let mut n_sampled = true;
    let mut dominated = true;
    for x in sample_vectors(f.algebra_dim(), f.source_len(), cfg) {
        let (mx, nx) = (m.apply(&x)?.scalar_norm(), n.apply(&x)?.scalar_norm());
        let xn = x.scalar_norm();
        n_sampled &= nx > lambda * xn;
        dominated &= mx >= nx * (1.0 - tol.rel) - tol.abs;
    }
    let dom_spectral = as_element(&n.gram()).psd_order_leq(&as_element(&m.gram()), tol)?;

    let hyp = alloc::vec![
        frame_check("psi_is_frame", f, tol),
        Check::new("n_bounded_below", n_low > lambda && n_sampled, n_low, lambda),
        Check::below("bessel_bound_below_lower_frame_bound", d_delta, d_low),
        Check::flag("m_dominates_n", dom_spectral && dominated),
    ];
    let gap = libm::sqrt(d_low) - libm::sqrt(d_delta);
    let predicted_lower = lambda * lambda * gap * gap;
    let achieved = bounds_of(&out, tol);
    let concl = alloc::vec![frame_check("sum_is_frame", &out, tol), lower_check(cfg, &achieved, predicted_lower)];
    Ok(TheoremReport::assemble(TheoremId::LambdaLower, hyp, concl, (Some(predicted_lower), None), achieved))
}

/// Tight-frame test for `{Psi_k o M + Delta_k o N}` via the residual of
/// `alpha_1 M^*M + alpha_2 N^*N - alpha I`, with `alpha` the trace mean.
///
/// Both directions are checked: a residual at most half the tightness
/// margin forces a tight sum, and a tight sum forces a residual within the
/// margin. The margin is `TIGHT_REL` times the top of the spectrum.
pub fn tight_mn_check(
    f: &GFrameFamily,
    g: &GFrameFamily,
    m: &AdjointableOp,
    n: &AdjointableOp,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    check_square_on(m, f, "M vs module")?;
    check_square_on(n, f, "N vs module")?;
    let tol = cfg.tol;
    let a1 = tight_constant(f, "psi", tol)?;
    let a2 = tight_constant(g, "delta", tol)?;
    let c = f.cross_operator(g)?;
    let out = f.compose_members(m)?.add(&g.compose_members(n)?)?;

    let r = m.gram().scale_real(a1).add(&n.gram().scale_real(a2))?;
    let dim = f.flat_dim();
    let alpha = r.flatten().trace().re / dim as f64;
    let residual = linalg::spectral_norm(&r.flatten().sub(&FlatMatrix::identity(dim).scale_real(alpha))?);

    let achieved = bounds_of(&out, tol);
    let margin = crate::gframe::TIGHT_REL * achieved.upper.max(spectrum(&r).max());
    let condition = alpha > 0.0 && residual <= 0.5 * margin;

    let hyp = alloc::vec![cross_vanishes_check(&c, a1.max(a2), tol)];
    let mut concl = alloc::vec![
        Check::new("condition_implies_tight", !condition || achieved.tight, residual, 0.5 * margin),
        Check::new("tight_implies_condition", !achieved.tight || residual <= margin, residual, margin),
    ];
    if condition {
        concl.push(Check::at_most(
            "tight_constant_is_alpha",
            (achieved.tight_constant() - alpha).abs(),
            cfg.bound_slack(alpha),
        ));
    }
    let predicted = if condition { (Some(alpha), Some(alpha)) } else { (None, None) };
    Ok(TheoremReport::assemble(TheoremId::TightMn, hyp, concl, predicted, achieved))
}
