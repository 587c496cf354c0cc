use gframe_core::dispatch::{self, Outcome, TheoremKind};
use gframe_core::gen::instances::{build, InstanceShape};
use gframe_core::gen::rng::SplitMix64;
use gframe_core::gen::{gen_family, gen_isometry, gen_orthogonal_pair, GenSpec, Target};
use gframe_core::stability::{self, lift_family};
use gframe_core::sums::{self, ScalarWeights};
use gframe_core::{AdjointableOp, CheckConfig, Complex64, Error, GFrameFamily, Verdict};

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

fn parseval(seed: u64, n: usize, d: usize, dims: Vec<usize>) -> GFrameFamily {
    gen_family(&GenSpec::new(seed, n, d, dims, Target::Parseval)).unwrap()
}

fn framed(seed: u64, a: f64, b: f64) -> GFrameFamily {
    gen_family(&GenSpec::new(seed, 2, 2, vec![1, 2, 1], Target::Bounds(a, b))).unwrap()
}

fn unit_weights(f: &GFrameFamily) -> ScalarWeights {
    ScalarWeights::scalar(f.algebra_dim(), f.len(), 1.0, 0.5, 1.5).unwrap()
}

fn near(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * (1.0 + a.abs().max(b.abs()))
}

fn id(f: &GFrameFamily) -> AdjointableOp {
    AdjointableOp::identity(f.algebra_dim(), f.source_len())
}

fn scalar_op(f: &GFrameFamily, c: f64) -> AdjointableOp {
    AdjointableOp::scalar(f.algebra_dim(), f.source_len(), Complex64::new(c, 0.0))
}

fn shapes() -> Vec<(InstanceShape, u64)> {
    vec![
        (InstanceShape::new(2, 2, vec![1, 2, 1]), 100),
        (InstanceShape::new(1, 3, vec![2, 1, 2]), 25),
        (InstanceShape::new(3, 1, vec![1, 1]), 25),
        (InstanceShape::new(2, 3, vec![2, 2, 1, 3]), 10),
    ]
}

#[test]
fn generated_instances_satisfy_every_theorem() {
    let cfg = cfg();
    for kind in TheoremKind::ALL.into_iter().filter(|k| *k != TheoremKind::Classify) {
        for (shape, seeds) in shapes() {
            for seed in 0..seeds {
                let inst = build(kind, &shape, seed).unwrap_or_else(|e| panic!("{kind} seed {seed}: {e}"));
                let out = dispatch::run(kind, &inst, &cfg).unwrap();
                assert_eq!(out.verdict(), Some(Verdict::ConclusionHolds), "{kind} {shape:?} seed {seed}: {out:?}");
                let a = out.achieved();
                let slack = cfg.bound_slack(a.upper);
                let (lo, hi) = out.predicted();
                if let Some(lo) = lo {
                    assert!(a.lower >= lo - slack, "{kind} seed {seed}: lower {} < {lo}", a.lower);
                }
                if let Some(hi) = hi {
                    assert!(a.upper <= hi + slack, "{kind} seed {seed}: upper {} > {hi}", a.upper);
                }
            }
        }
    }
}

#[test]
fn t12_neumann_step_holds_on_generated_instances() {
    let kind = TheoremKind::Stability(gframe_core::StabilityId::T12Operator);
    for (shape, seeds) in shapes() {
        for seed in 0..seeds {
            let inst = build(kind, &shape, seed).unwrap();
            let Outcome::Perturbation(r) = dispatch::run(kind, &inst, &cfg()).unwrap() else { panic!() };
            let step = r.check("neumann_step").unwrap();
            assert!(step.passed && step.measured <= step.limit, "{step:?}");
            assert!(r.check("k_invertible").unwrap().passed);
        }
    }
}

// ---- perturbation by (I + Lambda) ----

#[test]
fn perturb_by_zero_is_identity() {
    let f = framed(1, 0.5, 2.0);
    let z = AdjointableOp::zero(2, 2, 2);
    let (g, r) = sums::perturb_lambda(&f, &z, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(g.optimal_bounds().lower, 0.5, 1e-10));
    assert!(near(g.optimal_bounds().upper, 2.0, 1e-10));
}

#[test]
fn perturb_by_identity_quadruples_bounds() {
    let f = framed(2, 0.5, 2.0);
    let (_, r) = sums::perturb_lambda(&f, &id(&f), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 2.0, 1e-10));
    assert!(near(r.achieved.upper, 8.0, 1e-10));
    assert!(near(r.predicted_upper.unwrap(), 8.0, 1e-10));
}

#[test]
fn perturb_by_minus_identity_fails_hypothesis() {
    let f = framed(3, 0.5, 2.0);
    let (_, r) = sums::perturb_lambda(&f, &scalar_op(&f, -1.0), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

// ---- t3 equivalence and corollary ----

#[test]
fn t3_with_m_identity_n_zero_mirrors_classification() {
    for seed in 0..5 {
        let f = framed(seed, 0.5, 2.0);
        let g = gen_family(&GenSpec::new(seed + 50, 2, 2, vec![1, 2, 1], Target::Random)).unwrap();
        let (s, r) = sums::op_weighted_sum(&f, &g, &id(&f), &scalar_op(&f, 0.0), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::ConclusionHolds);
        assert_eq!(s, f);
    }
}

#[test]
fn t3_doubling_scales_frame_operator_by_four() {
    let f = framed(4, 0.5, 2.0);
    let (_, r) = sums::op_weighted_sum(&f, &f, &id(&f), &id(&f), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 2.0, 1e-10) && near(r.achieved.upper, 8.0, 1e-10));
}

#[test]
fn t3_conditions_agree_on_non_frames() {
    let f = framed(5, 0.5, 2.0);
    let zero = scalar_op(&f, 0.0);
    let (_, r) = sums::op_weighted_sum(&f, &f, &zero, &zero, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(!r.achieved.tight && r.achieved.upper == 0.0);
}

#[test]
fn t3_corollary_on_doubled_family() {
    let f = framed(6, 0.5, 2.0);
    let r = sums::t3_corollary_check(&f, &f, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(r.achieved.lower >= 4.0 * 0.5 * (1.0 - 1e-10));
}

#[test]
fn t3_corollary_on_orthogonal_pair_adds_spectra() {
    let (f, g) = gen_orthogonal_pair(&GenSpec::new(7, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
    let r = sums::t3_corollary_check(&f, &g, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 2.0, 1e-9) && near(r.achieved.upper, 2.0, 1e-9));
}

#[test]
fn t3_corollary_indefinite_cross_term_is_not_asserted() {
    let f = framed(8, 0.5, 2.0);
    let g = gen_family(&GenSpec::new(9, 2, 2, vec![1, 2, 1], Target::Random)).unwrap();
    let r = sums::t3_corollary_check(&f, &g, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
    assert!(!r.check("cross_term_positive").unwrap().passed);
}

// ---- scalar weights ----

#[test]
fn t7_with_vanishing_second_family() {
    let f = framed(10, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let eps = 0.1;
    let w = ScalarWeights::scalar(2, 3, 1.0, 1.0 - eps, 1.0 + eps).unwrap();
    let (_, r) = sums::scalar_weighted_sum(&f, &g, &w, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.predicted_lower.unwrap(), (1.0 - eps) * 0.5, 1e-12));
    assert!(r.achieved.lower >= r.predicted_lower.unwrap());
}

#[test]
fn t7_scaling_case() {
    let f = parseval(11, 2, 2, vec![1, 2, 1]);
    let w = ScalarWeights::scalar(2, 3, 2.0, 3.99, 4.01).unwrap();
    let (_, r) = sums::scalar_weighted_sum(&f, &f, &w, &cfg()).unwrap();
    assert!(near(r.achieved.lower, 16.0, 1e-9) && near(r.achieved.upper, 16.0, 1e-9));
    // B_w D_delta < A_w D fails here: 4.01 > 3.99.
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn t11_on_doubled_parseval() {
    let f = parseval(12, 2, 2, vec![1, 2, 1]);
    let eps = 0.01;
    let w = ScalarWeights::scalar(2, 3, 1.0, 1.0 - eps, 1.0 + eps).unwrap();
    let r = sums::t11_check(&f, &f, &w, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.predicted_lower.unwrap(), 2.0 * (1.0 - eps), 1e-12));
    assert!(near(r.achieved.lower, 4.0, 1e-9));
}

#[test]
fn t11_on_orthogonal_pair() {
    let (f, g) = gen_orthogonal_pair(&GenSpec::new(13, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
    let w = ScalarWeights::scalar(2, 3, 1.0, 0.9, 1.1).unwrap();
    let r = sums::t11_check(&f, &g, &w, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(r.achieved.lower >= r.predicted_lower.unwrap());
}

#[test]
fn t11_fails_for_opposite_weights() {
    // theta = I, delta = -I, G = F: every weighted member vanishes although
    // the cross term S_F is positive.
    let f = parseval(14, 2, 2, vec![1, 2, 1]);
    let one = gframe_core::AlgebraElement::identity(2);
    let minus = one.scale_real(-1.0);
    let w = ScalarWeights::new(vec![one; 3], vec![minus; 3], 0.5, 1.5).unwrap();
    let r = sums::t11_check(&f, &f, &w, &cfg()).unwrap();
    assert!(r.hypotheses_hold());
    assert_eq!(r.verdict, Verdict::ConclusionFails);
    assert!(r.achieved.upper < 1e-12);
}

// ---- tight sums ----

#[test]
fn tight_sum_constants_add() {
    for (a1, a2) in [(1.0, 1.0), (2.0, 3.0), (0.5, 0.25)] {
        for seed in 0..10 {
            let (f, g) = gen_orthogonal_pair(&GenSpec::new(seed, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
            let (f, g) = (f.scale_real(f64::sqrt(a1)), g.scale_real(f64::sqrt(a2)));
            let r = sums::tight_sum_check(&f, &g, &cfg()).unwrap();
            assert_eq!(r.verdict, Verdict::ConclusionHolds);
            assert!(r.achieved.tight);
            assert!((r.achieved.tight_constant() - (a1 + a2)).abs() <= 1e-8);
        }
    }
}

#[test]
fn tight_sum_with_cross_term_fails_hypothesis() {
    let f = parseval(15, 2, 2, vec![1, 2, 1]);
    let r = sums::tight_sum_check(&f, &f, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn tight_sum_rejects_non_tight_input() {
    let f = framed(16, 0.5, 2.0);
    assert!(matches!(sums::tight_sum_check(&f, &f, &cfg()), Err(Error::NotTight { .. })));
}

// ---- isometry ----

#[test]
fn isometry_sum_reduces_to_input() {
    let f = framed(17, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let r = sums::isometry_sum_check(&f, &g, &id(&f), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 0.5, 1e-10));
}

#[test]
fn isometry_sum_with_unitary() {
    let f = parseval(18, 2, 2, vec![1, 2, 1]);
    let u = gen_isometry(18, 2, 2).unwrap();
    let r = sums::isometry_sum_check(&f, &f, &u, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 4.0, 1e-9));
    assert!(near(r.predicted_lower.unwrap(), 1.0, 1e-9));
}

#[test]
fn isometry_sum_rejects_non_isometry() {
    let f = parseval(19, 2, 2, vec![1, 2, 1]);
    let r = sums::isometry_sum_check(&f, &f, &scalar_op(&f, 2.0), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
    assert!(!r.check("lambda_is_isometry").unwrap().passed);
}

// ---- lambda bounded below ----

#[test]
fn lambda_lower_with_zero_second_family() {
    let f = framed(20, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let lam = 0.99;
    let r = sums::lambda_lower_check(&f, &g, &id(&f), &id(&f), lam, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.predicted_lower.unwrap(), lam * lam * 0.5, 1e-12));
    assert!(near(r.achieved.lower, 0.5, 1e-10));
}

#[test]
fn lambda_lower_with_weak_bessel() {
    let f = parseval(21, 2, 2, vec![1, 2, 1]);
    let g = gen_family(&GenSpec::new(22, 2, 2, vec![1, 2, 1], Target::Bounds(0.005, 0.01))).unwrap();
    let r = sums::lambda_lower_check(&f, &g, &scalar_op(&f, 2.0), &id(&f), 0.9, &cfg()).unwrap();
    assert!(r.hypotheses_hold());
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
}

#[test]
fn lambda_lower_needs_n_bounded_below() {
    let f = framed(23, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let r = sums::lambda_lower_check(&f, &g, &id(&f), &scalar_op(&f, 0.0), 0.5, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
    assert!(!r.check("n_bounded_below").unwrap().passed);
}

#[test]
fn lambda_lower_needs_m_to_dominate_n() {
    let f = framed(24, 0.5, 2.0);
    let g = gen_family(&GenSpec::new(25, 2, 2, vec![1, 2, 1], Target::Bounds(0.01, 0.02))).unwrap();
    let r = sums::lambda_lower_check(&f, &g, &id(&f), &scalar_op(&f, 2.0), 1.5, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
    assert!(!r.check("m_dominates_n").unwrap().passed);
}

// ---- tight M, N ----

#[test]
fn tight_mn_trivial_case() {
    let f = parseval(26, 2, 2, vec![2, 2, 2]);
    let (p, q) = gen_orthogonal_pair(&GenSpec::new(26, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
    let r = sums::tight_mn_check(&p, &q, &id(&f), &scalar_op(&f, 0.0), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.tight_constant(), 1.0, 1e-9));
}

#[test]
fn tight_mn_balanced_halves() {
    let (p, q) = gen_orthogonal_pair(&GenSpec::new(27, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
    let h = scalar_op(&p, std::f64::consts::FRAC_1_SQRT_2);
    let r = sums::tight_mn_check(&p, &q, &h, &h, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(r.achieved.tight && near(r.achieved.tight_constant(), 1.0, 1e-9));
}

#[test]
fn tight_mn_non_scalar_is_consistently_not_tight() {
    let (p, q) = gen_orthogonal_pair(&GenSpec::new(28, 2, 2, vec![2, 2, 2], Target::Parseval)).unwrap();
    let mut rng = SplitMix64::new(28);
    let m = rng.operator(2, 2, 2, 1.0);
    let r = sums::tight_mn_check(&p, &q, &m, &id(&p), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(!r.achieved.tight);
}

// ---- stability ----

#[test]
fn prop_mixed_identical_families() {
    let f = framed(30, 0.5, 2.0);
    let r = stability::prop_mixed_check(&f, &f, &unit_weights(&f), 0.5, 0.5, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 0.5, 1e-10) && near(r.achieved.upper, 2.0, 1e-10));
    assert!(r.claimed_bounds.is_some());
}

#[test]
fn prop_mixed_slightly_scaled_family() {
    let f = framed(31, 0.5, 2.0);
    let g = f.scale_real(1.01);
    let r = stability::prop_mixed_check(&f, &g, &unit_weights(&f), 0.3, 0.3, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
}

#[test]
fn prop_mixed_zero_family_fails_hypothesis() {
    let f = framed(32, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let r = stability::prop_mixed_check(&f, &g, &unit_weights(&f), 0.5, 0.5, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn stability_alphas_are_range_checked() {
    let f = framed(33, 0.5, 2.0);
    let w = unit_weights(&f);
    assert!(matches!(stability::prop_mixed_check(&f, &f, &w, 1.0, 0.5, &cfg()), Err(Error::AlphaOutOfRange { .. })));
    assert!(matches!(stability::difference_check(&f, &f, &w, 0.5, 0.0, &cfg()), Err(Error::AlphaOutOfRange { .. })));
}

#[test]
fn difference_identical_families() {
    let f = framed(34, 0.5, 2.0);
    let r = stability::difference_check(&f, &f, &unit_weights(&f), 0.1, 0.1, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
}

#[test]
fn difference_one_member_shrunk() {
    let f = framed(35, 0.5, 2.0);
    let mut members = f.members().to_vec();
    members[0] = members[0].scale_real(1.0 - 1e-3);
    let g = GFrameFamily::new(members).unwrap();
    let r = stability::difference_check(&f, &g, &unit_weights(&f), 0.5, 0.5, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
}

#[test]
fn difference_unrelated_bessel_family_fails_hypothesis() {
    let f = framed(36, 0.5, 2.0);
    let g = gen_family(&GenSpec::new(37, 2, 2, vec![1, 2, 1], Target::Random)).unwrap().scale_real(3.0);
    let r = stability::difference_check(&f, &g, &unit_weights(&f), 0.2, 0.2, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn t12_exact_gram_operators() {
    let f = framed(40, 0.5, 2.0);
    let r = stability::t12_check(&f, &lift_family(&f), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(r.measured_lhs <= 1e-12);
    assert!(near(r.achieved.lower, 0.5, 1e-9) && near(r.achieved.upper, 2.0, 1e-9));
}

#[test]
fn t12_uniform_shift() {
    let f = framed(41, 0.5, 2.0);
    let eps = 0.1;
    let k = f.len() as f64;
    let ops: Vec<_> = lift_family(&f).iter().map(|g| g.add(&scalar_op(&f, eps / k)).unwrap()).collect();
    let r = stability::t12_check(&f, &ops, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    assert!(near(r.achieved.lower, 0.5 + eps, 1e-9));
    let step = r.check("neumann_step").unwrap();
    assert!(step.passed && near(step.limit, 0.5, 1e-9));
}

#[test]
fn t12_large_perturbation_fails_hypothesis() {
    let f = framed(42, 0.5, 2.0);
    let ops: Vec<_> = lift_family(&f).iter().map(|g| g.add(&scalar_op(&f, 1.0)).unwrap()).collect();
    let r = stability::t12_check(&f, &ops, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
    assert!(!r.check("subset_perturbation_bound").unwrap().passed);
}

#[test]
fn t12_needs_upper_bound_above_one() {
    let f = gen_family(&GenSpec::new(43, 2, 2, vec![1, 2, 1], Target::Tight(0.8))).unwrap();
    let r = stability::t12_check(&f, &lift_family(&f), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn final_corollary_identical_families() {
    let f = framed(44, 0.5, 2.0);
    for alpha in [0.01, 0.25, 0.49] {
        let r = stability::final_corollary_check(&f, &f, alpha, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::ConclusionHolds);
    }
}

#[test]
fn final_corollary_scaled_family() {
    let f = framed(45, 0.5, 2.0);
    let eps = 0.05;
    let g = f.scale_real(1.0 - eps);
    let r = stability::final_corollary_check(&f, &g, 0.4, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::ConclusionHolds);
    let s = (1.0 - eps) * (1.0 - eps);
    assert!(near(r.achieved.lower, s * 0.5, 1e-9) && near(r.achieved.upper, s * 2.0, 1e-9));
}

#[test]
fn final_corollary_zero_family_fails_hypothesis() {
    let f = framed(46, 0.5, 2.0);
    let g = GFrameFamily::zero(2, 2, &[1, 2, 1]).unwrap();
    let r = stability::final_corollary_check(&f, &g, 0.4, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisFails);
}

#[test]
fn final_corollary_alpha_must_stay_below_lower_bound() {
    let f = framed(47, 0.5, 2.0);
    assert!(matches!(stability::final_corollary_check(&f, &f, 0.6, &cfg()), Err(Error::AlphaOutOfRange { .. })));
}
