//! Cross-checks of the hand-written spectral kernels against nalgebra.

use gframe_core::gen::rng::SplitMix64;
use gframe_core::gen::{gen_family, GenSpec, Target};
use gframe_core::linalg::{self, FlatMatrix};
use gframe_core::{AdjointableOp, Complex64, GFrameFamily, ModuleVector};
use nalgebra::{Complex, DMatrix};

fn to_na(m: &FlatMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m[(i, j)];
        Complex::new(z.re, z.im)
    })
}

fn hermitian(rng: &mut SplitMix64, dim: usize) -> FlatMatrix {
    let z = rng.gaussian_matrix(dim, dim);
    z.add(&z.adjoint()).unwrap().scale_real(0.5)
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = SplitMix64::new(11);
    for dim in 1..=8 {
        for _ in 0..10 {
            let h = hermitian(&mut rng, dim);
            let ours = linalg::hermitian_eigen(&h).unwrap();
            let mut theirs: Vec<f64> = to_na(&h).symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.values.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn eigenvectors_reconstruct() {
    let mut rng = SplitMix64::new(12);
    for dim in 1..=8 {
        let h = hermitian(&mut rng, dim);
        let e = linalg::hermitian_eigen(&h).unwrap();
        let back = e.map_spectrum(|l| l);
        assert!(back.sub(&h).unwrap().max_abs() < 1e-12 * (1.0 + h.max_abs()));
        let v = &e.vectors;
        let gram = v.adjoint().matmul(v).unwrap();
        assert!(gram.sub(&FlatMatrix::identity(dim)).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn singular_values_match_nalgebra() {
    let mut rng = SplitMix64::new(13);
    for (r, c) in [(1, 1), (2, 5), (5, 2), (4, 4), (3, 7), (8, 6)] {
        let m = rng.gaussian_matrix(r, c);
        let ours = linalg::singular_values(&m);
        let mut theirs: Vec<f64> = to_na(&m).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(ours.len(), theirs.len());
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-12 * (1.0 + b), "{a} vs {b}");
        }
        assert!((linalg::spectral_norm(&m) - theirs[0]).abs() < 1e-12 * theirs[0]);
    }
}

#[test]
fn small_singular_value_keeps_accuracy() {
    // diag(1, 1e-9) rotated: an eigen-route through M^* M would lose the
    // small value to round-off.
    let mut rng = SplitMix64::new(14);
    let u = rng.unitary(2);
    let v = rng.unitary(2);
    let m = u.matmul(&FlatMatrix::diagonal(&[1.0, 1e-9])).unwrap().matmul(&v).unwrap();
    let s = linalg::singular_values(&m);
    assert!((s[1] - 1e-9).abs() < 1e-15, "{}", s[1]);
}

#[test]
fn optimal_bounds_match_nalgebra_frame_operator() {
    for seed in 0..20 {
        let f = gen_family(&GenSpec::new(seed, 2, 3, vec![1, 2, 2], Target::Random)).unwrap();
        let mut s = DMatrix::<Complex<f64>>::zeros(6, 6);
        for m in f.members() {
            let a = to_na(m.flatten());
            s += &a * a.adjoint();
        }
        let ev = s.symmetric_eigenvalues();
        let (lo, hi) = (ev.min(), ev.max());
        let b = f.optimal_bounds();
        assert!((b.lower - lo.max(0.0)).abs() < 1e-10 * hi);
        assert!((b.upper - hi).abs() < 1e-10 * hi);
    }
}

#[test]
fn frame_form_matches_direct_sum() {
    let mut rng = SplitMix64::new(15);
    let f: GFrameFamily = gen_family(&GenSpec::new(3, 2, 2, vec![2, 1], Target::Random)).unwrap();
    let x = rng.module_vector(2, 2);
    let form = f.frame_form(&x).unwrap();
    // <S x, x> computed as X S X^* with nalgebra.
    let xs = to_na(x.flat());
    let s = to_na(f.frame_operator().flatten());
    let direct = &xs * s * xs.adjoint();
    for i in 0..2 {
        for j in 0..2 {
            let a = form.get(i, j);
            let b = direct[(i, j)];
            assert!((a - Complex64::new(b.re, b.im)).norm() < 1e-12 * (1.0 + b.norm()));
        }
    }
}

#[test]
fn operator_lower_bound_is_rowwise_smallest_singular_value() {
    let mut rng = SplitMix64::new(16);
    for (d, dp) in [(2, 2), (2, 3), (3, 2)] {
        let t: AdjointableOp = rng.operator(2, d, dp, 1.0);
        let f = to_na(t.flatten());
        let sv = f.singular_values();
        let expected = if d <= dp { sv.min() } else { 0.0 };
        assert!((t.lower_bound() - expected).abs() < 1e-12 * (1.0 + sv.max()));
        // Spot-check ||T x|| >= m ||x|| on random vectors.
        for _ in 0..50 {
            let x: ModuleVector = rng.module_vector(2, d);
            let tx = t.apply(&x).unwrap();
            assert!(tx.scalar_norm() >= t.lower_bound() * x.scalar_norm() * (1.0 - 1e-12));
        }
    }
}
