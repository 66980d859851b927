//! Certificates for a built measure: the convolution blow-up along
//! `t_n = 1/(2 tau_n)`, shift-difference pairing bounds, Poisson
//! summation consistency and the growth of `|mu|(-r, r)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::build::{BuiltLevel, Check, CrystallineMeasure};
use crate::dft::C64;
use crate::error::{Error, Result};
use crate::measure::{Atom, MeasureExpr, PeriodicLatticeMeasure};
use crate::rational::{self, int, serde_rational, Interval, Rational};
use crate::schwartz::{eta_eval_exact, psi_eval, Gaussian, PsiFunction, PsiLevel, SmoothFunction};
use crate::sum::{pairwise_abs_sum, pairwise_sum_complex};

/// The bump sum matched to the built levels.
pub fn psi_for(fm: &CrystallineMeasure) -> PsiFunction {
    PsiFunction::new(
        fm.levels
            .iter()
            .map(|l| PsiLevel {
                tau: l.params.tau.clone(),
                lambda: l.placement.lambda.clone(),
            })
            .collect(),
    )
}

fn check_levels(fm: &CrystallineMeasure, p: &PsiFunction) -> Result<()> {
    let same = fm.levels.len() == p.levels.len()
        && fm
            .levels
            .iter()
            .zip(&p.levels)
            .all(|(l, q)| l.params.tau == q.tau && l.placement.lambda == q.lambda);
    if same {
        Ok(())
    } else {
        Err(Error::MismatchedLevels(
            "bump levels do not match the measure's (tau, lambda) pairs".into(),
        ))
    }
}

/// `(mu^ * psi^)(t) = sum_lambda c_lambda psi(lambda) e^{-2 pi i lambda t}`,
/// which reduces to one dipole per level:
/// `sum_n tau_n^{-1/3} [eta(tau_n lambda_n) e^{-2 pi i (lambda_n + tau_n) t} - e^{-2 pi i lambda_n t}]`.
pub fn hat_convolution_at(fm: &CrystallineMeasure, p: &PsiFunction, t: &Rational) -> Result<C64> {
    check_levels(fm, p)?;
    let terms: Vec<C64> = fm
        .levels
        .iter()
        .map(|l| {
            let lambda = &l.placement.lambda;
            let tau = &l.params.tau;
            let upper = lambda + tau;
            let eta = eta_eval_exact(&(tau * lambda), 0);
            let scale = l.params.tau_pow(-1.0 / 3.0);
            (rational::unit_phase(&(&upper * t)) * eta - rational::unit_phase(&(lambda * t))) * scale
        })
        .collect();
    Ok(pairwise_sum_complex(&terms))
}

/// The same quantity summed over every atom of `mu` inside the bump
/// supports, without using the dipole structure.
pub fn hat_convolution_by_atoms(fm: &CrystallineMeasure, p: &PsiFunction, t: &Rational) -> Result<C64> {
    check_levels(fm, p)?;
    let mut terms = Vec::new();
    for l in &p.levels {
        let window = Interval::closed(&l.lambda - l.half_width(), &l.lambda + l.half_width());
        for a in fm.mu.atoms_in(&window) {
            let v = psi_eval(p, &a.position, 0);
            terms.push(a.weight * v * rational::unit_phase(&(&a.position * t)));
        }
    }
    Ok(pairwise_sum_complex(&terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub n: u32,
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub value: C64,
    pub abs: f64,
    /// Lower bound from the dipole estimate with the built levels' sums.
    pub lower_bound: f64,
    /// `(2/3) tau_n^{-1/3}`.
    pub threshold: f64,
    pub margin: f64,
    /// Relative gap between the closed form and the atom sum.
    pub two_path_error: f64,
    /// `| e^{-2 pi i (lambda + tau) t} - e^{-2 pi i lambda t} |`, should be 2.
    pub dipole_phase_gap: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub rows: Vec<BlowupRow>,
    /// `|F(t_{n+1})| >= 4 |F(t_n)|` for consecutive levels.
    pub growth_ok: bool,
}

impl BlowupReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed) && self.growth_ok
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,t,value_re,value_im,abs,lower_bound,threshold,margin,two_path_error\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.n,
                rational::format(&r.t),
                r.value.re,
                r.value.im,
                r.abs,
                r.lower_bound,
                r.threshold,
                r.margin,
                r.two_path_error
            );
        }
        s
    }
}

/// `t_n = 1/(2 tau_n)`.
pub fn blowup_time(l: &BuiltLevel) -> Rational {
    (int(2) * &l.params.tau).recip()
}

/// `F(t_n)` for every level with its lower bound
/// `2 tau_n^{-1/3} - 2 sum_{p<n} tau_p^{-1/3} - sum_{p>n} tau_p^{-1/3} pi tau_p / tau_n`.
pub fn blowup_report(fm: &CrystallineMeasure) -> Result<BlowupReport> {
    let p = psi_for(fm);
    let rows: Vec<BlowupRow> = fm
        .levels
        .par_iter()
        .enumerate()
        .map(|(i, l)| -> Result<BlowupRow> {
            let t = blowup_time(l);
            let value = hat_convolution_at(fm, &p, &t)?;
            let by_atoms = hat_convolution_by_atoms(fm, &p, &t)?;
            let abs = value.norm();
            let two_path_error = (value - by_atoms).norm() / abs.max(f64::MIN_POSITIVE);

            let own = l.params.tau_pow(-1.0 / 3.0);
            let below: f64 = fm.levels[..i].iter().map(|q| q.params.tau_pow(-1.0 / 3.0)).sum();
            let above: f64 = fm.levels[i + 1..]
                .iter()
                .map(|q| {
                    let ratio = rational::to_f64(&(&q.params.tau / &l.params.tau));
                    q.params.tau_pow(-1.0 / 3.0) * PI * ratio
                })
                .sum();
            let lower_bound = 2.0 * own - 2.0 * below - above;
            let threshold = 2.0 * own / 3.0;

            let lambda = &l.placement.lambda;
            let upper = lambda + &l.params.tau;
            let dipole_phase_gap =
                (rational::unit_phase(&(&upper * &t)) - rational::unit_phase(&(lambda * &t))).norm();

            let passed = abs >= lower_bound
                && lower_bound >= threshold
                && two_path_error <= 1e-12
                && (dipole_phase_gap - 2.0).abs() <= 1e-14;
            Ok(BlowupRow {
                n: l.params.n,
                t,
                value,
                abs,
                lower_bound,
                threshold,
                margin: abs - lower_bound,
                two_path_error,
                dipole_phase_gap,
                passed,
            })
        })
        .collect::<Result<_>>()?;
    let growth_ok = rows.windows(2).all(|w| w[1].abs >= 4.0 * w[0].abs);
    Ok(BlowupReport { rows, growth_ok })
}

/// [`blowup_report`], failing on the first level that misses its bound.
pub fn blowup_series(fm: &CrystallineMeasure) -> Result<BlowupReport> {
    let report = blowup_report(fm)?;
    if let Some(r) = report.rows.iter().find(|r| !r.passed) {
        return Err(Error::certificate(
            "blow-up",
            format!(
                "level {}: |F(t)| = {:e}, lower bound {:e}, threshold {:e}, two-path error {:e}",
                r.n, r.abs, r.lower_bound, r.threshold, r.two_path_error
            ),
        ));
    }
    if !report.growth_ok {
        return Err(Error::certificate(
            "blow-up",
            "|F(t_n)| does not grow fourfold per level",
        ));
    }
    Ok(report)
}

/// `|F(t)|` on the grid `t_n (1 + k/64)`, `k = -32..=32`, for plotting.
pub fn blowup_profile(fm: &CrystallineMeasure) -> Result<Vec<(u32, Rational, f64)>> {
    let p = psi_for(fm);
    let mut out = Vec::new();
    for l in &fm.levels {
        let tn = blowup_time(l);
        for k in -32i64..=32 {
            let t = &tn * (Rational::one() + rational::ratio(k, 64));
            let v = hat_convolution_at(fm, &p, &t)?;
            out.push((l.params.n, t, v.norm()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContrastRow {
    pub n: u32,
    /// `max_t |sum_lambda c_lambda g(lambda) e^{-2 pi i t lambda}|` over the grid.
    pub grid_sup: f64,
    /// `sum |c_lambda| |g(lambda)|` plus the certified tail.
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub single_levels: Vec<ContrastRow>,
    /// `(n, |F(t_n)|)` for the full bump sum.
    pub blowup: Vec<(u32, f64)>,
}

impl ContrastReport {
    pub fn passed(&self) -> bool {
        self.single_levels.iter().all(|r| r.passed)
    }
}

fn dual_sum(atoms: &[Atom], values: &[C64], t: &Rational) -> C64 {
    let terms: Vec<C64> = atoms
        .iter()
        .zip(values)
        .map(|(a, v)| a.weight * v * rational::unit_phase(&(&a.position * t)))
        .collect();
    pairwise_sum_complex(&terms)
}

/// Each single level, paired against the fixed test function `g^v`,
/// stays below the bound `sum |c| |g^v|` on every grid point, while the
/// bump-sum convolution grows along `t_n`.
pub fn boundedness_contrast(
    fm: &CrystallineMeasure,
    g: &Gaussian,
    ts: &[Rational],
) -> Result<ContrastReport> {
    let gv = g.inverse_transform();
    let r = gv.default_radius();
    let radius = rational::from_f64(r.ceil());
    let window = Interval::closed(-radius.clone(), radius);
    let single_levels = fm
        .levels
        .par_iter()
        .map(|l| -> Result<ContrastRow> {
            let m = l.measure();
            let atoms = m.atoms_in(&window);
            let values: Vec<C64> = atoms.iter().map(|a| gv.eval_at(&a.position, 0)).collect();
            let weighted: Vec<C64> = atoms.iter().zip(&values).map(|(a, v)| a.weight * v).collect();
            let tail = m.terms.iter().map(|t| t.tail_mass(r)).sum::<f64>()
                * gv.tail_bound(r).unwrap_or(f64::INFINITY);
            let bound = pairwise_abs_sum(&weighted) + tail;
            let grid_sup = ts
                .iter()
                .map(|t| dual_sum(&atoms, &values, t).norm())
                .fold(0.0, f64::max);
            Ok(ContrastRow {
                n: l.params.n,
                grid_sup,
                bound,
                passed: grid_sup <= bound * (1.0 + 1e-12),
            })
        })
        .collect::<Result<_>>()?;
    let blowup = blowup_report(fm)?.rows.iter().map(|r| (r.n, r.abs)).collect();
    Ok(ContrastReport {
        single_levels,
        blowup,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipolePairingReport {
    /// `|pairing| + tail`.
    pub lhs: f64,
    /// `(5 M^2 + pi^2/3) max|c| N_{2,1} tau`.
    pub rhs: f64,
    pub seminorm_upper: f64,
    pub passed: bool,
}

/// `|(sigma^{h+tau} - sigma^h, phi)| <= (5 M^2 + pi^2/3) max|c| N_{2,1}(phi) tau`.
pub fn dipole_pairing_check(
    sigma: &PeriodicLatticeMeasure,
    phi: &Gaussian,
    tau: &Rational,
    h: &Rational,
) -> Result<DipolePairingReport> {
    let m = sigma.period();
    let mr = int(m as i64);
    if !(tau > &Rational::zero() && tau < &Rational::one()) {
        return Err(Error::InvalidWindow(format!(
            "tau = {} is not in (0, 1)",
            rational::format(tau)
        )));
    }
    if num::Signed::abs(h) * int(3) >= mr || m <= 2 {
        return Err(Error::InvalidWindow(format!(
            "need |h| < M/3 and M > 2, got h = {}, M = {m}",
            rational::format(h)
        )));
    }
    let base = sigma.translated(&-sigma.shift().clone());
    let diff = MeasureExpr::from_term(base.translated(&(h + tau)))
        .subtract(&MeasureExpr::from_term(base.translated(h)));
    let radius = rational::from_f64(phi.default_radius().ceil());
    let pairing = diff.pair(phi, &radius)?;
    let lhs = pairing.value.norm() + pairing.tail_bound;
    let max_c = sigma.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max) * sigma.scale().norm();
    let n21 = phi
        .seminorm_bound(2, 1)
        .ok_or_else(|| Error::NoDecayCertificate("N_{2,1}".into()))?;
    let rhs = (5.0 * (m as f64).powi(2) + PI * PI / 3.0) * max_c * n21 * rational::to_f64(tau);
    Ok(DipolePairingReport {
        lhs,
        rhs,
        seminorm_upper: n21,
        passed: lhs <= rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperednessReport {
    /// `|(mu, phi)| + tail`.
    pub direct: f64,
    /// `sum_n (5 M_n^2 + pi^2/3) tau_n^{1/3} N_{2,1}(phi)`.
    pub bound: f64,
    /// `tau_n^{1/3} M_n^2` per built level.
    pub series: Vec<(u32, f64)>,
    /// First level from which `tau_n^{1/3} M_n^2` decreases.
    pub crossover: Option<u32>,
    pub passed: bool,
}

/// First `n` with `tau_{n+1}^{1/3} M_{n+1}^2 < tau_n^{1/3} M_n^2` for
/// `tau_n = 2^{-q n^2}`, `M_n = B^n`.
pub fn series_crossover(q: u32, base: u64) -> Option<u32> {
    let log_term = |n: u32| -(q as f64) * (n * n) as f64 / 3.0 + 2.0 * n as f64 * (base as f64).log2();
    (1..=4096).find(|&n| log_term(n + 1) < log_term(n))
}

pub fn temperedness_certificate(fm: &CrystallineMeasure, phi: &Gaussian) -> Result<TemperednessReport> {
    let radius = rational::from_f64(phi.default_radius().ceil());
    let pairing = fm.mu.pair(phi, &radius)?;
    let direct = pairing.value.norm() + pairing.tail_bound;
    let n21 = phi
        .seminorm_bound(2, 1)
        .ok_or_else(|| Error::NoDecayCertificate("N_{2,1}".into()))?;
    let mut bound = 0.0;
    let mut series = Vec::new();
    for l in &fm.levels {
        let m2 = (l.params.m as f64).powi(2);
        let max_c = l.coeffs.c.iter().map(|c| c.norm()).fold(0.0, f64::max);
        bound += (5.0 * m2 + PI * PI / 3.0) * max_c * l.params.tau_pow(1.0 / 3.0) * n21;
        series.push((l.params.n, l.params.tau_pow(1.0 / 3.0) * m2));
    }
    Ok(TemperednessReport {
        direct,
        bound,
        series,
        crossover: series_crossover(fm.config.q, fm.config.base),
        passed: direct <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    /// `|mu|(-r, r)`.
    pub mass: f64,
    /// `log M(r) / log r`; undefined when `M(r) = 0` or `r <= 1`.
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    /// Exponents strictly increasing with steps of at least one.
    pub fn escalates(&self) -> bool {
        let e: Vec<Option<f64>> = self.rows.iter().map(|r| r.exponent).collect();
        e.windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b >= a + 1.0))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,mass,exponent\n");
        for row in &self.rows {
            let e = row.exponent.map_or(String::from("nan"), |e| format!("{e:.16e}"));
            let _ = writeln!(s, "{},{:.16e},{e}", rational::format(&row.r), row.mass);
        }
        s
    }
}

pub fn default_radii(fm: &CrystallineMeasure) -> Vec<Rational> {
    fm.levels.iter().map(|l| int(2) * &l.placement.lambda).collect()
}

pub fn variation_growth(m: &MeasureExpr, radii: &[Rational]) -> GrowthReport {
    let rows = radii
        .iter()
        .map(|r| {
            let mass = m.variation(&Interval::open(-r.clone(), r.clone()));
            let lr = rational::to_f64(r).ln();
            let exponent = (mass > 0.0 && lr > 0.0).then(|| mass.ln() / lr);
            GrowthRow {
                r: r.clone(),
                mass,
                exponent,
            }
        })
        .collect();
    GrowthReport { rows }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub space_side: C64,
    pub frequency_side: C64,
    pub residual: f64,
    pub allowed: f64,
    pub tail: f64,
    pub passed: bool,
}

/// `(m, g^) = (m^, g)` up to `tol (1 + |(m^, g)|)`, with certified tails
/// below a tenth of the tolerance.
pub fn poisson_check(
    m: &MeasureExpr,
    m_hat: &MeasureExpr,
    g: &Gaussian,
    radius: &Rational,
    tol: f64,
) -> Result<PoissonReport> {
    let gh = g.transform();
    let lhs = m.pair(&gh, radius)?;
    let rhs = m_hat.pair(g, radius)?;
    let residual = (lhs.value - rhs.value).norm();
    let allowed = tol * (1.0 + rhs.value.norm());
    let tail = lhs.tail_bound + rhs.tail_bound;
    let report = PoissonReport {
        space_side: lhs.value,
        frequency_side: rhs.value,
        residual,
        allowed,
        tail,
        passed: residual <= allowed && tail < allowed / 10.0,
    };
    if report.passed {
        Ok(report)
    } else {
        Err(Error::certificate(
            "poisson",
            format!("residual {residual:e} (allowed {allowed:e}), tail {tail:e}"),
        ))
    }
}

/// Radius covering both `g` and `g^` with room for the certified tails.
pub fn poisson_radius(g: &Gaussian) -> Rational {
    let gh = g.transform();
    rational::from_f64(g.default_radius().max(gh.default_radius()).ceil() + 4.0)
}

/// Deterministic probe Gaussians centred near the first level, where a
/// pairing only has to enumerate a few thousand atoms.
pub fn probe_gaussians(fm: &CrystallineMeasure) -> Vec<Gaussian> {
    let lam = fm
        .levels
        .first()
        .map_or(40.0, |l| rational::to_f64(&l.placement.lambda));
    vec![
        Gaussian::standard(),
        Gaussian::new(1.0, lam, 0.0),
        Gaussian::new(0.25, lam, 0.5),
        Gaussian::new(4.0, 8.0, -1.0),
        Gaussian::new(0.5, 20.0, 0.25),
    ]
}

/// Gaussians for the Poisson oracle: frequency-side centre past the first
/// level's gap, space-side centre near the first level's support.
pub fn poisson_gaussians(fm: &CrystallineMeasure) -> Vec<Gaussian> {
    let m = fm.levels.first().map_or(32.0, |l| l.params.m as f64);
    let x0 = [0.2, 0.35, 0.5, 0.65, 0.8];
    let xi = [1.3, 1.45, 1.6, 1.75, 1.9];
    x0.iter()
        .zip(&xi)
        .zip([1.0, 0.5, 2.0, 1.0, 0.75])
        .map(|((a, b), w)| Gaussian::new(w, (a * m).round() + 0.25, (b * m).round() - 0.125))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub crystalline: bool,
    pub quasicrystal: bool,
    pub summary: String,
    pub checks: Vec<Check>,
    pub blowup: Option<BlowupReport>,
    pub growth: GrowthReport,
    pub temperedness: Vec<TemperednessReport>,
    pub poisson: Vec<PoissonReport>,
}

/// Atom counts in windows never exceed what the lattice structure allows.
fn discreteness(m: &MeasureExpr) -> Check {
    let windows = [
        Interval::closed(int(-64), int(64)),
        Interval::closed(int(30), int(70)),
        Interval::closed_open(int(1000), int(1008)),
    ];
    for w in &windows {
        let count = m.atoms_in(w).len() as f64;
        let len = rational::to_f64(&w.length());
        let cap: f64 =
            m.terms.iter().map(|t| len * t.period() as f64 + 1.0).sum::<f64>() + m.extras.len() as f64;
        if count > cap {
            return Check::new(
                "discreteness",
                None,
                false,
                format!("{count} atoms in {w}, cap {cap}"),
            );
        }
    }
    Check::new(
        "discreteness",
        None,
        true,
        "finite atom counts within lattice caps",
    )
}

/// Aggregates every certificate into the verdict.
pub fn headline_report(fm: &CrystallineMeasure) -> Result<Verdict> {
    let mut checks: Vec<Check> = fm.recertify();

    let temperedness: Vec<TemperednessReport> = probe_gaussians(fm)
        .iter()
        .map(|g| temperedness_certificate(fm, g))
        .collect::<Result<_>>()?;
    checks.push(Check::new(
        "temperedness",
        None,
        temperedness.iter().all(|t| t.passed),
        format!("{} probe functions", temperedness.len()),
    ));

    let mut poisson = Vec::new();
    let mut poisson_ok = true;
    let mut poisson_detail = String::from("all probes agree");
    for g in poisson_gaussians(fm) {
        let radius = poisson_radius(&g);
        match poisson_check(&fm.mu, &fm.mu_hat, &g, &radius, 1e-8) {
            Ok(r) => poisson.push(r),
            Err(e) => {
                poisson_ok = false;
                poisson_detail = e.to_string();
            }
        }
    }
    checks.push(Check::new("poisson", None, poisson_ok, poisson_detail));

    let mut disc = discreteness(&fm.mu);
    let disc_hat = discreteness(&fm.mu_hat);
    if !disc_hat.passed {
        disc = disc_hat;
    }
    checks.push(disc);

    let blowup = if fm.levels.is_empty() {
        None
    } else {
        Some(blowup_report(fm)?)
    };
    let blowup_ok = blowup.as_ref().is_some_and(|b| b.passed());
    checks.push(Check::new(
        "blow-up",
        None,
        blowup_ok,
        match &blowup {
            Some(b) => b
                .rows
                .iter()
                .map(|r| format!("n={}: |F|={:.6e} >= {:.6e}", r.n, r.abs, r.threshold))
                .collect::<Vec<_>>()
                .join("; "),
            None => "no levels".into(),
        },
    ));

    let growth = variation_growth(&fm.mu, &default_radii(fm));
    let escalates = growth.escalates();
    checks.push(Check::new(
        "variation growth",
        None,
        escalates,
        growth
            .rows
            .iter()
            .map(|r| format!("r={}: e={:?}", rational::format(&r.r), r.exponent))
            .collect::<Vec<_>>()
            .join("; "),
    ));

    let construction_ok = checks.iter().all(|c| c.level.is_none() || c.passed)
        && checks.iter().any(|c| c.name == "support gap" && c.passed);
    let crystalline = construction_ok
        && temperedness.iter().all(|t| t.passed)
        && poisson_ok
        && checks.iter().any(|c| c.name == "discreteness" && c.passed);
    // Bounded convolutions are necessary for a tempered variation, so a
    // certified blow-up rules the quasicrystal property out.
    let quasicrystal = !blowup_ok;
    let summary = format!(
        "crystalline: {}, quasicrystal: {}{}",
        if crystalline { "pass" } else { "fail" },
        if quasicrystal { "undecided" } else { "fail" },
        if quasicrystal { "" } else { " (blow-up certified)" },
    );
    Ok(Verdict {
        crystalline,
        quasicrystal,
        summary,
        checks,
        blowup,
        growth,
        temperedness,
        poisson,
    })
}
