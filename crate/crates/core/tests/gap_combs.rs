//! Gap-constrained coefficient vectors and their lattice measures.

mod common;

use crystalline::dft::dft_naive;
use crystalline::measure::{MeasureExpr, Weight};
use crystalline::meyer::{
    build_meyer, forbidden_freq_indices, forbidden_time_indices, verify_meyer, Method, WindowSpec,
};
use crystalline::rational::{int, ratio, Interval, Rational};
use crystalline::schwartz::Gaussian;
use crystalline::verify::poisson_check;
use num::{One, Zero};

fn window(m: u64) -> WindowSpec {
    WindowSpec::new(m, ratio(1, 8)).unwrap()
}

/// Forbidden set straight from `dist(j/M, M Z) <= alpha M`.
fn forbidden_by_definition(m: u64) -> Vec<usize> {
    let mr = int(m as i64);
    let r = ratio(m as i64, 8);
    (0..(m * m) as usize)
        .filter(|&j| {
            let x = ratio(j as i64, m as i64);
            let d = if x <= &mr - &x { x.clone() } else { &mr - &x };
            d <= r
        })
        .collect()
}

#[test]
fn forbidden_sets_follow_the_definition() {
    for m in [2u64, 4, 8, 16, 32] {
        let w = window(m);
        assert_eq!(forbidden_time_indices(&w), forbidden_by_definition(m), "M={m}");
        assert_eq!(forbidden_freq_indices(&w), forbidden_by_definition(m), "M={m}");
    }
    assert_eq!(forbidden_time_indices(&window(32)).len(), 257);
}

#[test]
fn nullspace_dimensions_for_small_windows() {
    for (m, nullity) in [(2u64, 2usize), (4, 6)] {
        let mc = build_meyer(&window(m), Method::Nullspace, 1, 1e-9).unwrap();
        assert_eq!(mc.nullity, Some(nullity), "M={m}");
    }
}

#[test]
fn both_methods_certify_at_m32() {
    let w = window(32);
    for method in [Method::Nullspace, Method::AlternatingProjection] {
        let mc = build_meyer(&w, method, 11, 1e-9).unwrap();
        let cert = verify_meyer(&mc, &w, 1e-8).unwrap();
        for j in forbidden_time_indices(&w) {
            assert_eq!(mc.coeffs()[j], Weight::zero());
        }
        // Independent transform for the frequency residual.
        let spec = dft_naive(mc.coeffs());
        let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let worst = forbidden_freq_indices(&w)
            .into_iter()
            .map(|m| spec[m].norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8 * peak, "{method:?}: {worst:e}");
        assert!(cert.freq_residual <= 1e-8);
        assert_eq!(mc.coeffs()[mc.j_star], Weight::one());
        assert!(mc.coeffs().iter().all(|z| z.norm() <= 1.0));
    }
}

#[test]
fn both_sides_avoid_the_central_window() {
    let mc = common::sigma32();
    let gap = Interval::closed(int(-4), int(4));
    let space = MeasureExpr::from_term(mc.space_side_measure(&Rational::zero(), Weight::one()));
    let freq = MeasureExpr::from_term(mc.fourier_side_measure(&Rational::zero(), Weight::one()));
    assert!(space.atoms_in(&gap).is_empty());
    assert!(freq.atoms_in(&gap).is_empty());
    let m4 = common::meyer(4);
    let s4 = MeasureExpr::from_term(m4.space_side_measure(&Rational::zero(), Weight::one()));
    assert!(s4
        .atoms_in(&Interval::closed(ratio(-1, 2), ratio(1, 2)))
        .is_empty());
}

#[test]
fn shifted_window_query_matches_translated_query() {
    let sigma =
        MeasureExpr::from_term(common::sigma32().space_side_measure(&Rational::zero(), Weight::one()));
    let h = ratio(5, 64);
    // [32, 33] sits in the gap around M = 32; [16, 17] does not.
    for (a, b, nonempty) in [(32, 33, false), (16, 17, true)] {
        let lhs = sigma.shift(&h).atoms_in(&Interval::closed(int(a), int(b)));
        let rhs: Vec<_> = sigma
            .atoms_in(&Interval::closed(int(a) - &h, int(b) - &h))
            .into_iter()
            .map(|mut x| {
                x.position += &h;
                x
            })
            .collect();
        assert_eq!(!lhs.is_empty(), nonempty);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn dipole_over_one_period_doubles_the_support() {
    let mc = common::sigma32();
    let sigma = MeasureExpr::from_term(mc.space_side_measure(&Rational::zero(), Weight::one()));
    let tau = ratio(1, 256);
    let d = sigma.shift(&tau).subtract(&sigma);
    let nonzero = mc.coeffs().iter().filter(|z| !z.is_zero()).count();
    let atoms = d.atoms_in(&Interval::closed_open(Rational::zero(), int(32)));
    assert_eq!(atoms.len(), 2 * nonzero);
}

#[test]
fn period_variation_is_additive_over_periods() {
    let mc = common::sigma32();
    let sigma = MeasureExpr::from_term(mc.space_side_measure(&Rational::zero(), Weight::one()));
    let direct: f64 = mc.coeffs().iter().map(|z| z.norm()).sum();
    let one = sigma.variation(&Interval::closed_open(Rational::zero(), int(32)));
    let two = sigma.variation(&Interval::closed_open(Rational::zero(), int(64)));
    assert!((one - direct).abs() <= 1e-12 * direct);
    assert_eq!(two, 2.0 * one);
}

#[test]
fn poisson_pairs_agree_for_the_standard_gaussian() {
    let mc = common::sigma32();
    let space = MeasureExpr::from_term(mc.space_side_measure(&Rational::zero(), Weight::one()));
    let freq = MeasureExpr::from_term(mc.fourier_side_measure(&Rational::zero(), Weight::one()));
    let r = poisson_check(&space, &freq, &Gaussian::standard(), &int(1000), 1e-8).unwrap();
    assert!(r.passed, "residual {:e}", r.residual);
}
