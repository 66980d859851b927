//! Blow-up, temperedness, growth and Poisson certificates on built measures.

mod common;

use std::f64::consts::PI;

use crystalline::build::{assemble, BuildConfig};
use crystalline::measure::{MeasureExpr, Weight};
use crystalline::rational::{self, int, pow2, Interval, Rational};
use crystalline::schwartz::{psi_eval, Gaussian};
use crystalline::verify::{
    blowup_series, blowup_time, boundedness_contrast, hat_convolution_at, hat_convolution_by_atoms,
    headline_report, dipole_pairing_check, poisson_check, poisson_gaussians, poisson_radius, psi_for,
    series_crossover, temperedness_certificate, variation_growth,
};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_pow(x: f64) -> f64 {
    x.exp2()
}

#[test]
fn convolution_vanishes_at_zero() {
    let fm = common::default_build();
    let v = hat_convolution_at(fm, &psi_for(fm), &Rational::zero()).unwrap();
    assert_eq!(v, Weight::zero());
}

#[test]
fn two_evaluation_paths_agree() {
    let fm = common::default_build();
    let p = psi_for(fm);
    let scale: f64 = fm.levels.iter().map(|l| l.params.tau_pow(-1.0 / 3.0)).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let t = Rational::new(
            rng.random_range(-(1i64 << 34)..(1i64 << 34)).into(),
            rng.random_range(1i64..64).into(),
        );
        let a = hat_convolution_at(fm, &p, &t).unwrap();
        let b = hat_convolution_by_atoms(fm, &p, &t).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm().max(scale), "t={t}: {a} vs {b}");
    }
}

#[test]
fn blowup_meets_the_stated_bounds() {
    let fm = common::default_build();
    let r = blowup_series(fm).unwrap();
    assert!(r.passed());
    let (f1, f2) = (r.rows[0].abs, r.rows[1].abs);
    assert!(f1 >= 2.0 / 3.0 * two_pow(8.0 / 3.0) && f1 >= 4.23);
    assert!(f2 >= 2.0 / 3.0 * two_pow(32.0 / 3.0) && f2 >= 1075.0);
    assert!(f2 >= 4.0 * f1);
    assert_eq!(r.rows[0].t, int(128));
    assert_eq!(r.rows[1].t, pow2(31));
    for row in &r.rows {
        assert!(row.two_path_error <= 1e-12);
        assert!((row.dipole_phase_gap - 2.0).abs() <= 1e-14);
    }
    let l1 = 2.0 * two_pow(8.0 / 3.0) - two_pow(32.0 / 3.0) * PI * two_pow(-24.0);
    let l2 = 2.0 * two_pow(32.0 / 3.0) - 2.0 * two_pow(8.0 / 3.0);
    assert!((r.rows[0].lower_bound - l1).abs() <= 1e-12 * l1);
    assert!((r.rows[1].lower_bound - l2).abs() <= 1e-12 * l2);
}

#[test]
fn single_level_build_still_blows_up() {
    let fm = common::single_level_build();
    let r = blowup_series(fm).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(
        r.rows[0].lower_bound,
        2.0 * fm.levels[0].params.tau_pow(-1.0 / 3.0)
    );
    let growth = variation_growth(&fm.mu, &[&fm.levels[0].placement.lambda * int(2)]);
    assert_eq!(growth.rows.len(), 1);
    let v = headline_report(fm).unwrap();
    assert!(v.crystalline && !v.quasicrystal, "{}", v.summary);
}

#[test]
fn bump_values_at_level_points() {
    let fm = common::default_build();
    let p = psi_for(fm);
    assert_eq!(psi_eval(&p, &Rational::zero(), 0), 0.0);
    for l in &fm.levels {
        let h = l.params.tau_pow(1.0 / 3.0);
        assert!((psi_eval(&p, &l.placement.lambda, 0) - h).abs() <= 1e-15 * h);
        let upper = &l.placement.lambda + &l.params.tau;
        assert!((psi_eval(&p, &upper, 0) - h).abs() <= 1e-15 * h);
    }
}

#[test]
fn single_levels_stay_bounded_on_a_grid() {
    let fm = common::default_build();
    let t1 = blowup_time(&fm.levels[0]);
    let ts: Vec<Rational> = (-8..=8).map(|k| &t1 + rational::ratio(k, 4)).collect();
    let r = boundedness_contrast(fm, &Gaussian::standard(), &ts).unwrap();
    assert!(r.passed());
    assert!(r.blowup[0].1 >= 4.23);
    let zero = assemble(&BuildConfig {
        levels: vec![],
        ..BuildConfig::default()
    })
    .unwrap();
    let z = boundedness_contrast(&zero, &Gaussian::standard(), &ts).unwrap();
    assert!(z.single_levels.is_empty() && z.blowup.is_empty());
}

#[test]
fn shifted_dipole_pairing_bound() {
    let sigma = common::sigma32().space_side_measure(&Rational::zero(), Weight::new(1.0, 0.0));
    let g = Gaussian::standard();
    let coarse = dipole_pairing_check(&sigma, &g, &pow2(-8), &Rational::zero()).unwrap();
    assert!(coarse.passed);
    let fine = dipole_pairing_check(&sigma, &g, &pow2(-20), &Rational::zero()).unwrap();
    assert!(fine.passed);
    assert!(fine.lhs < coarse.lhs);
    assert!((fine.rhs / coarse.rhs - two_pow(-12.0)).abs() <= 1e-12);
}

#[test]
fn temperedness_on_default_and_zero_measures() {
    let fm = common::default_build();
    let r = temperedness_certificate(fm, &Gaussian::standard()).unwrap();
    assert!(r.passed, "{} > {}", r.direct, r.bound);
    assert!((r.series[0].1 - 161.27).abs() < 0.01);
    assert!((r.series[1].1 - 645.08).abs() < 0.01);
    assert_eq!(r.crossover, Some(2));
    assert_eq!(series_crossover(8, 32), Some(2));

    let zero = assemble(&BuildConfig {
        levels: vec![],
        ..BuildConfig::default()
    })
    .unwrap();
    let z = temperedness_certificate(&zero, &Gaussian::standard()).unwrap();
    assert!(z.passed && z.direct == 0.0 && z.bound == 0.0);
}

#[test]
fn variation_exponents_escalate() {
    let fm = common::default_build();
    let radii: Vec<Rational> = std::iter::once(int(2))
        .chain(fm.levels.iter().map(|l| &l.placement.lambda * int(2)))
        .collect();
    let g = variation_growth(&fm.mu, &radii);
    assert_eq!(g.rows[0].mass, 0.0);
    assert!(g.rows[0].exponent.is_none());
    let e1 = g.rows[1].exponent.unwrap();
    let e2 = g.rows[2].exponent.unwrap();
    assert!(e2 >= e1 + 1.0, "{e1} -> {e2}");

    let dirac = MeasureExpr::dirac(int(1));
    let d = variation_growth(&dirac, &[int(4), int(1000)]);
    assert!(d.rows.iter().all(|r| r.mass == 1.0 && r.exponent == Some(0.0)));
}

#[test]
fn poisson_oracle_accepts_the_transform_and_rejects_a_rescaled_one() {
    let fm = common::default_build();
    let gs = poisson_gaussians(fm);
    assert_eq!(gs.len(), 5);
    for g in &gs {
        let r = poisson_check(&fm.mu, &fm.mu_hat, g, &poisson_radius(g), 1e-8).unwrap();
        assert!(r.passed);
    }
    let doubled = fm.mu_hat.scale(Weight::new(2.0, 0.0));
    assert!(poisson_check(&fm.mu, &doubled, &gs[0], &poisson_radius(&gs[0]), 1e-8).is_err());
}

#[test]
fn headline_verdict() {
    let fm = common::default_build();
    let v = headline_report(fm).unwrap();
    assert_eq!(
        v.summary,
        "crystalline: pass, quasicrystal: fail (blow-up certified)"
    );
    assert!(v.checks.iter().all(|c| c.passed));
    let window = Interval::closed(int(-1), int(1));
    assert!(fm.mu.atoms_in(&window).is_empty());
}
