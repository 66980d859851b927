//! Multiscale assembly of `mu = sum_n tau_n^{-2/3} (sigma_n^{h_n + tau_n} - sigma_n^{h_n})`.
//!
//! Level `n` uses a gap comb of period `M_n = B^n`, a dyadic shift
//! `tau_n = 2^{-q n^2}` and a placement `h_n` chosen so that near
//! `lambda_n` the whole measure reduces to one dipole
//! `tau_n^{-2/3} (delta_{lambda_n + tau_n} - delta_{lambda_n})`.
//! Every placement fact is decided with exact rational arithmetic.

use std::collections::BTreeSet;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dft::C64;
use crate::error::{Error, Result};
use crate::measure::{Atom, MeasureExpr};
use crate::meyer::{build_meyer, Method, MeyerCoefficients, WindowSpec, DEFAULT_SEED, DEFAULT_TOL};
use crate::rational::{self, int, ratio, serde_rational, Interval, Rational};

/// Default cap on `M_n^2` for a single level.
pub const DEFAULT_MAX_LEN: usize = 1 << 22;

const THIN_SAFETY: f64 = 1.0 - 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub base: u64,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    /// Levels to build, strictly increasing. Empty gives the zero measure.
    pub levels: Vec<u32>,
    pub q: u32,
    pub tol: f64,
    pub seed: u64,
    pub method: Method,
    pub max_len: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            base: 32,
            alpha: ratio(1, 8),
            levels: vec![1, 2],
            q: 8,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            method: Method::AlternatingProjection,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base < 2 {
            return Err(Error::Parse(format!(
                "base must be at least 2, got {}",
                self.base
            )));
        }
        if self.q == 0 {
            return Err(Error::Parse("q must be positive".into()));
        }
        if !self.alpha.is_positive() {
            return Err(Error::InvalidWindow("alpha must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Parse(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.levels.contains(&0) {
            return Err(Error::Parse("levels start at 1".into()));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!(
                "levels must be strictly increasing, got {:?}",
                self.levels
            )));
        }
        Ok(())
    }

    pub fn level_seed(&self, n: u32) -> u64 {
        self.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelParams {
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
}

impl LevelParams {
    /// `tau^{-1/3}`, `tau^{-2/3}`, `tau^{2/3}` and friends: `tau^p` in floating point.
    pub fn tau_pow(&self, p: f64) -> f64 {
        (p * rational::log2_abs(&self.tau)).exp2()
    }

    pub fn m_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelPlacement {
    pub n: u32,
    /// Index of the coefficient pinned to one.
    pub j_star: usize,
    /// Index of the chosen subinterval `[M + j''/M, M + (j''+1)/M)`.
    pub j_dd: u64,
    #[serde(with = "serde_rational")]
    pub h: Rational,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    /// Full subintervals inside the candidate interval.
    pub available: u64,
    /// Full subintervals meeting the support of an earlier level.
    pub occupied: u64,
}

impl LevelPlacement {
    /// `(lambda - 1/(2 lambda), lambda + 1/(2 lambda))`.
    pub fn window(&self) -> Interval {
        let r = Rational::one() / (int(2) * &self.lambda);
        Interval::open_around(&self.lambda, &r)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuiltLevel {
    pub params: LevelParams,
    pub placement: LevelPlacement,
    pub coeffs: MeyerCoefficients,
}

impl BuiltLevel {
    /// `tau_n^{-2/3}`.
    pub fn weight(&self) -> f64 {
        self.params.tau_pow(-2.0 / 3.0)
    }

    /// `sigma^{h + tau}` and `sigma^h`, unscaled.
    pub fn shifted_pair(&self) -> [crate::measure::PeriodicLatticeMeasure; 2] {
        let h = &self.placement.h;
        [
            self.coeffs
                .space_side_measure(&(h + &self.params.tau), C64::one()),
            self.coeffs.space_side_measure(h, C64::one()),
        ]
    }

    /// This level's contribution to `mu`.
    pub fn measure(&self) -> MeasureExpr {
        let s = C64::new(self.weight(), 0.0);
        let h = &self.placement.h;
        MeasureExpr {
            terms: vec![
                self.coeffs.space_side_measure(&(h + &self.params.tau), s),
                self.coeffs.space_side_measure(h, -s),
            ],
            ..Default::default()
        }
    }

    /// This level's contribution to the Fourier transform of `mu`.
    pub fn transform(&self) -> MeasureExpr {
        let s = C64::new(self.weight(), 0.0);
        let h = &self.placement.h;
        MeasureExpr {
            terms: vec![
                self.coeffs.fourier_side_measure(&(h + &self.params.tau), s),
                self.coeffs.fourier_side_measure(h, -s),
            ],
            ..Default::default()
        }
    }
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub level: Option<u32>,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, level: Option<u32>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            level,
            passed,
            detail: detail.into(),
        }
    }

    pub fn from_result<T>(name: &str, level: Option<u32>, r: &Result<T>, ok: &str) -> Self {
        match r {
            Ok(_) => Check::new(name, level, true, ok),
            Err(e) => Check::new(name, level, false, e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MeasureRecord {
    config: BuildConfig,
    dropped_levels: Vec<u32>,
    levels: Vec<BuiltLevel>,
    certificates: Vec<Check>,
}

/// The assembled measure together with everything needed to re-check it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MeasureRecord", into = "MeasureRecord")]
pub struct CrystallineMeasure {
    pub config: BuildConfig,
    /// Levels removed by [`thin_taus`].
    pub dropped_levels: Vec<u32>,
    pub levels: Vec<BuiltLevel>,
    pub certificates: Vec<Check>,
    pub mu: MeasureExpr,
    pub mu_hat: MeasureExpr,
}

impl From<CrystallineMeasure> for MeasureRecord {
    fn from(fm: CrystallineMeasure) -> Self {
        MeasureRecord {
            config: fm.config,
            dropped_levels: fm.dropped_levels,
            levels: fm.levels,
            certificates: fm.certificates,
        }
    }
}

impl TryFrom<MeasureRecord> for CrystallineMeasure {
    type Error = Error;

    fn try_from(r: MeasureRecord) -> Result<Self> {
        CrystallineMeasure::from_parts(r.config, r.dropped_levels, r.levels, r.certificates)
    }
}

impl CrystallineMeasure {
    /// Rebuilds `mu` and `mu_hat` from stored levels without re-certifying.
    pub fn from_parts(
        config: BuildConfig,
        dropped_levels: Vec<u32>,
        levels: Vec<BuiltLevel>,
        certificates: Vec<Check>,
    ) -> Result<Self> {
        for lv in &levels {
            let len = (lv.coeffs.m as u128) * (lv.coeffs.m as u128);
            if lv.coeffs.m != lv.params.m || lv.coeffs.c.len() as u128 != len {
                return Err(Error::MismatchedLevels(format!(
                    "level {}: coefficient vector does not match M={}",
                    lv.params.n, lv.params.m
                )));
            }
            if lv.placement.n != lv.params.n {
                return Err(Error::MismatchedLevels(format!(
                    "placement for level {} stored under level {}",
                    lv.placement.n, lv.params.n
                )));
            }
        }
        let mut mu = MeasureExpr::zero();
        let mut mu_hat = MeasureExpr::zero();
        for lv in &levels {
            mu = mu.add(&lv.measure());
            mu_hat = mu_hat.add(&lv.transform());
        }
        Ok(CrystallineMeasure {
            config,
            dropped_levels,
            levels,
            certificates,
            mu,
            mu_hat,
        })
    }

    pub fn level(&self, n: u32) -> Option<&BuiltLevel> {
        self.levels.iter().find(|l| l.params.n == n)
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    /// Runs every construction certificate afresh.
    pub fn recertify(&self) -> Vec<Check> {
        certify(self)
    }
}

fn level_period(base: u64, n: u32, max_len: usize) -> Result<u64> {
    let m = BigInt::from(base).pow(n);
    let len = &m * &m;
    match (m.to_u64(), len.to_usize()) {
        (Some(m), Some(l)) if l <= max_len => Ok(m),
        _ => Err(Error::LevelTooLarge {
            n,
            len: len.to_u128().unwrap_or(u128::MAX),
            limit: max_len,
        }),
    }
}

/// `2^{q n^2} > 4 B^n`, i.e. `tau_n < 1/(4 M_n)`.
fn tau_bound_holds(q: u32, base: u64, n: u32) -> bool {
    let lhs = BigInt::one() << ((q as usize) * (n as usize) * (n as usize));
    lhs > BigInt::from(4) * BigInt::from(base).pow(n)
}

/// `tau_n = 2^{-q n^2}` for each configured level, checked against
/// `tau_n < 1/(4 M_n)`.
pub fn default_taus(cfg: &BuildConfig) -> Result<Vec<LevelParams>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.levels.len());
    for &n in &cfg.levels {
        if !tau_bound_holds(cfg.q, cfg.base, n) {
            let smallest_valid = (1..=u32::MAX)
                .find(|&k| tau_bound_holds(cfg.q, cfg.base, k))
                .expect("q n^2 eventually beats n log B");
            return Err(Error::ScheduleInfeasible {
                n,
                q: cfg.q,
                base: cfg.base,
                smallest_valid,
            });
        }
        let m = level_period(cfg.base, n, cfg.max_len).map_err(|e| e.at_level(n))?;
        let e = (cfg.q as i64) * (n as i64) * (n as i64);
        out.push(LevelParams {
            n,
            m,
            tau: rational::pow2(-e),
        });
    }
    Ok(out)
}

fn spacing_conditions(kept: &[LevelParams]) -> bool {
    let third: Vec<f64> = kept.iter().map(|l| l.tau_pow(-1.0 / 3.0)).collect();
    let two_thirds: Vec<f64> = kept.iter().map(|l| l.tau_pow(2.0 / 3.0)).collect();
    (0..kept.len()).all(|i| {
        let below: f64 = third[..i].iter().sum();
        let above: f64 = two_thirds[i + 1..].iter().sum();
        let s1 = below < THIN_SAFETY * third[i] / 3.0;
        let s2 = above < THIN_SAFETY * 2.0 * two_thirds[i] / (3.0 * std::f64::consts::PI);
        s1 && s2
    })
}

/// Greedy subsequence on which both
/// `sum_{p<n} tau_p^{-1/3} < tau_n^{-1/3} / 3` and
/// `sum_{p>n} tau_p^{2/3} < 2 tau_n^{2/3} / (3 pi)` hold.
pub fn thin_taus(taus: &[LevelParams]) -> Vec<LevelParams> {
    let mut kept: Vec<LevelParams> = Vec::new();
    for t in taus {
        kept.push(t.clone());
        if !spacing_conditions(&kept) {
            kept.pop();
        }
    }
    kept
}

/// `I_n = [M, 2M) ∩ (M + j'/M - M/32, M + j'/M + M/32)`.
pub fn candidate_interval(m: u64, j_star: usize) -> Result<Interval> {
    let mr = int(m as i64);
    let center = &mr + Rational::new(BigInt::from(j_star), BigInt::from(m));
    let half = &mr / int(32);
    let base = Interval::closed_open(mr.clone(), &mr * int(2));
    let around = Interval::open_around(&center, &half);
    base.intersect(&around)
        .filter(|i| !i.is_empty())
        .ok_or_else(|| Error::EmptyInterval(format!("I_n for M={m}, j'={j_star}")))
}

/// `I_{n,j} = [M + j/M, M + (j+1)/M)`.
pub fn subinterval(m: u64, j: u64) -> Interval {
    let mr = int(m as i64);
    let lo = &mr + Rational::new(BigInt::from(j), BigInt::from(m));
    let hi = &lo + Rational::new(BigInt::one(), BigInt::from(m));
    Interval::closed_open(lo, hi)
}

/// First and last `j` with `I_{n,j}` inside `interval`.
pub fn full_subintervals(m: u64, interval: &Interval) -> Option<(u64, u64)> {
    let mr = int(m as i64);
    let to_j = |x: &Rational| (x - &mr) * &mr;
    let first = rational::floor_int(&to_j(&interval.lo)).max(BigInt::zero());
    let last = rational::ceil_int(&to_j(&interval.hi));
    let mut j = first.to_u64()?;
    let end = last.to_u64()?;
    while j <= end && !subinterval(m, j).is_subset_of(interval) {
        j += 1;
    }
    if j > end {
        return None;
    }
    let lo = j;
    let mut hi = end;
    while !subinterval(m, hi).is_subset_of(interval) {
        hi -= 1;
    }
    Some((lo, hi))
}

/// Picks the first subinterval of `I_n` free of earlier levels' atoms and
/// derives `h_n` and `lambda_n` from it.
pub fn choose_placement(
    params: &LevelParams,
    coeffs: &MeyerCoefficients,
    prior: &[BuiltLevel],
) -> Result<LevelPlacement> {
    let n = params.n;
    let m = params.m;
    let mr = params.m_rat();
    let j_star = coeffs.j_star;
    let i_n = candidate_interval(m, j_star)?;
    let (first, last) = full_subintervals(m, &i_n).ok_or_else(|| Error::NoAdmissibleSubinterval {
        n,
        detail: format!("I_n = {i_n} contains no full subinterval of width 1/{m}"),
    })?;
    let available = last - first + 1;

    // Every prior atom in I_n marks the one subinterval containing it.
    let prior_terms: Vec<_> = prior.iter().flat_map(|p| p.shifted_pair()).collect();
    let mut occupied_set = BTreeSet::new();
    for t in &prior_terms {
        for a in t.atoms_in(&i_n) {
            let j = rational::floor_int(&((&a.position - &mr) * &mr));
            if let Some(j) = j.to_u64() {
                if (first..=last).contains(&j) {
                    occupied_set.insert(j);
                }
            }
        }
    }
    let j_dd = (first..=last)
        .find(|j| !occupied_set.contains(j))
        .ok_or_else(|| Error::NoAdmissibleSubinterval {
            n,
            detail: format!("all {available} subintervals of {i_n} meet earlier levels"),
        })?;
    // The exact query on the chosen cell, independent of the bookkeeping above.
    let cell = subinterval(m, j_dd);
    if let Some(t) = prior_terms.iter().find(|t| !t.atoms_in(&cell).is_empty()) {
        return Err(Error::certificate(
            "placement",
            format!(
                "level {n}: cell {cell} meets a term with shift {}",
                rational::format(t.shift())
            ),
        ));
    }

    let half_cell = Rational::new(BigInt::one(), BigInt::from(2 * m));
    let j_dd_rat = Rational::new(BigInt::from(j_dd), BigInt::from(m));
    let j_star_rat = Rational::new(BigInt::from(j_star), BigInt::from(m));
    let h = &j_dd_rat - &j_star_rat + &half_cell;
    let lambda = &mr + &j_dd_rat + &half_cell;
    let placement = LevelPlacement {
        n,
        j_star,
        j_dd,
        h,
        lambda,
        available,
        occupied: occupied_set.len() as u64,
    };

    let m32 = &mr / int(32);
    if placement.h.abs() >= m32 {
        return Err(Error::certificate(
            "placement",
            format!(
                "level {n}: |h_n| = {} is not below M/32",
                rational::format(&placement.h)
            ),
        ));
    }
    let offset = (&j_star_rat - &j_dd_rat).abs();
    let limit = &m32 - Rational::new(BigInt::one(), BigInt::from(m));
    if offset > limit {
        return Err(Error::certificate(
            "placement",
            format!(
                "level {n}: |j'/M - j''/M| = {} exceeds M/32 - 1/M",
                rational::format(&offset)
            ),
        ));
    }
    if !placement.window().is_subset_of(&cell) {
        return Err(Error::certificate(
            "placement",
            format!("level {n}: window {} is not inside {cell}", placement.window()),
        ));
    }
    Ok(placement)
}

/// Runs the whole pipeline: schedule, thinning, gap combs, placement,
/// assembly and certificates.
pub fn assemble(cfg: &BuildConfig) -> Result<CrystallineMeasure> {
    let taus = default_taus(cfg)?;
    let kept = thin_taus(&taus);
    let dropped_levels: Vec<u32> = taus
        .iter()
        .map(|t| t.n)
        .filter(|n| !kept.iter().any(|k| k.n == *n))
        .collect();

    let coeffs: Vec<MeyerCoefficients> = kept
        .par_iter()
        .map(|p| {
            let w = WindowSpec::new(p.m, cfg.alpha.clone())?;
            build_meyer(&w, cfg.method, cfg.level_seed(p.n), cfg.tol).map_err(|e| e.at_level(p.n))
        })
        .collect::<Result<_>>()?;

    let mut levels: Vec<BuiltLevel> = Vec::with_capacity(kept.len());
    for (params, coeffs) in kept.into_iter().zip(coeffs) {
        let placement = choose_placement(&params, &coeffs, &levels).map_err(|e| e.at_level(params.n))?;
        levels.push(BuiltLevel {
            params,
            placement,
            coeffs,
        });
    }

    let mut fm = CrystallineMeasure::from_parts(cfg.clone(), dropped_levels, levels, Vec::new())?;
    fm.certificates = certify(&fm);
    Ok(fm)
}

fn certify(fm: &CrystallineMeasure) -> Vec<Check> {
    let mut out = Vec::new();
    for lv in &fm.levels {
        let n = lv.params.n;
        let cert = lv
            .coeffs
            .window()
            .and_then(|w| crate::meyer::verify_meyer(&lv.coeffs, &w, fm.config.tol));
        out.push(Check::from_result(
            "gap comb",
            Some(n),
            &cert,
            "time and frequency gaps hold",
        ));
        let (ok, detail) = check_placement_record(fm, lv);
        out.push(Check::new("placement", Some(n), ok, detail));
        out.push(Check::from_result(
            "restriction identity",
            Some(n),
            &check_restriction_identity(fm, n),
            "exactly the dipole at lambda_n, lambda_n + tau_n",
        ));
        out.push(Check::from_result(
            "disjointness",
            Some(n),
            &check_disjointness(fm, n),
            "no foreign atoms in the level window",
        ));
        out.push(Check::from_result(
            "fourier gap",
            Some(n),
            &check_fourier_gap(lv),
            "no level atoms in (-M/8, M/8) on the frequency side",
        ));
    }
    out.push(Check::from_result(
        "support gap",
        None,
        &check_support_gap(fm),
        "no atoms in [-M/16, M/16] for the smallest level",
    ));
    out
}

/// Re-derives the stored placement from the stored coefficients and
/// earlier levels, so a tampered placement is caught.
fn check_placement_record(fm: &CrystallineMeasure, lv: &BuiltLevel) -> (bool, String) {
    let prior: Vec<BuiltLevel> = fm
        .levels
        .iter()
        .take_while(|p| p.params.n < lv.params.n)
        .cloned()
        .collect();
    match choose_placement(&lv.params, &lv.coeffs, &prior) {
        Ok(p) if p == lv.placement => (
            true,
            format!(
                "j''={} h={} lambda={}",
                p.j_dd,
                rational::format(&p.h),
                rational::format(&p.lambda)
            ),
        ),
        Ok(p) => (
            false,
            format!(
                "stored placement (j''={}, h={}) differs from recomputed (j''={}, h={})",
                lv.placement.j_dd,
                rational::format(&lv.placement.h),
                p.j_dd,
                rational::format(&p.h)
            ),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn describe(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(|a| format!("{} ({:.6e})", rational::format(&a.position), a.weight))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `mu` restricted to the level-`n` window is exactly
/// `tau_n^{-2/3} (delta_{lambda_n + tau_n} - delta_{lambda_n})`.
pub fn check_restriction_identity(fm: &CrystallineMeasure, n: u32) -> Result<()> {
    let lv = fm
        .level(n)
        .ok_or_else(|| Error::MismatchedLevels(format!("level {n} was not built")))?;
    let atoms = fm.mu.restrict(&lv.placement.window());
    let lambda = &lv.placement.lambda;
    let upper = lambda + &lv.params.tau;
    let w = lv.weight();
    let expect = [(lambda.clone(), -w), (upper, w)];
    let shape_ok = atoms.len() == 2 && atoms.iter().zip(&expect).all(|(a, (x, _))| &a.position == x);
    if !shape_ok {
        return Err(Error::certificate(
            "restriction identity",
            format!(
                "level {n}: expected atoms at lambda_n and lambda_n + tau_n, found [{}]",
                describe(&atoms)
            ),
        ));
    }
    for (a, (_, wt)) in atoms.iter().zip(&expect) {
        let err = (a.weight - C64::new(*wt, 0.0)).norm();
        if err > 1e-12 * wt.abs() {
            return Err(Error::certificate(
                "restriction identity",
                format!(
                    "level {n}: weight {} at {} differs from {wt:e}",
                    a.weight,
                    rational::format(&a.position)
                ),
            ));
        }
    }
    Ok(())
}

/// No other level has an atom in the level-`n` window.
pub fn check_disjointness(fm: &CrystallineMeasure, n: u32) -> Result<()> {
    let lv = fm
        .level(n)
        .ok_or_else(|| Error::MismatchedLevels(format!("level {n} was not built")))?;
    let window = lv.placement.window();
    for p in fm.levels.iter().filter(|p| p.params.n != n) {
        for t in p.shifted_pair() {
            if let Some(a) = t.atoms_in(&window).first() {
                return Err(Error::certificate(
                    "disjointness",
                    format!(
                        "level {} has an atom at {} inside the level-{n} window {window}",
                        p.params.n,
                        rational::format(&a.position)
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// The frequency-side terms of a level have no atoms in `(-M/8, M/8)`.
fn check_fourier_gap(lv: &BuiltLevel) -> Result<()> {
    let r = lv.params.m_rat() / int(8);
    let gap = Interval::open(-r.clone(), r);
    let atoms = lv.transform().atoms_in(&gap);
    if let Some(a) = atoms.first() {
        return Err(Error::certificate(
            "fourier gap",
            format!("level {}: atom at {}", lv.params.n, rational::format(&a.position)),
        ));
    }
    Ok(())
}

/// `mu` has no atoms in `[-M_lo/16, M_lo/16]`.
pub fn check_support_gap(fm: &CrystallineMeasure) -> Result<()> {
    let Some(first) = fm.levels.first() else {
        return Ok(());
    };
    let r = first.params.m_rat() / int(16);
    let gap = Interval::closed(-r.clone(), r);
    if let Some(a) = fm.mu.atoms_in(&gap).first() {
        return Err(Error::certificate(
            "support gap",
            format!("atom at {} inside {gap}", rational::format(&a.position)),
        ));
    }
    Ok(())
}

/// Every structural inequality the argument relies on, evaluated for the
/// built levels. Report only.
pub fn check_hypotheses(fm: &CrystallineMeasure) -> Vec<Check> {
    let mut out = Vec::new();
    let lv = &fm.levels;
    let ineq = |name: &str, n: Option<u32>, ok: bool, lhs: String, op: &str, rhs: String| {
        Check::new(name, n, ok, format!("{lhs} {op} {rhs}"))
    };

    for l in lv {
        let n = l.params.n;
        let tau = &l.params.tau;
        let lambda = &l.placement.lambda;
        let mr = l.params.m_rat();

        let rhs = Rational::one() / (int(4) * &mr);
        out.push(ineq(
            "tau < 1/(4M)",
            Some(n),
            tau < &rhs,
            rational::format(tau),
            "<",
            rational::format(&rhs),
        ));

        let prod = tau * lambda;
        let third = ratio(1, 3);
        out.push(ineq(
            "tau lambda < 1/3",
            Some(n),
            prod < third,
            rational::format(&prod),
            "<",
            "1/3".into(),
        ));

        let m32 = &mr / int(32);
        let h_abs = l.placement.h.abs();
        out.push(ineq(
            "|h| < M/32",
            Some(n),
            h_abs < m32,
            rational::format(&h_abs),
            "<",
            rational::format(&m32),
        ));

        let m2 = (l.params.m as f64).powi(2);
        out.push(ineq(
            "available >= M^2/32 - 1",
            Some(n),
            l.placement.available as f64 >= m2 / 32.0 - 1.0,
            l.placement.available.to_string(),
            ">=",
            format!("{}", m2 / 32.0 - 1.0),
        ));
        out.push(ineq(
            "occupied < M^2/124",
            Some(n),
            (l.placement.occupied as f64) < m2 / 124.0,
            l.placement.occupied.to_string(),
            "<",
            format!("{}", m2 / 124.0),
        ));
    }

    let kept: Vec<LevelParams> = lv.iter().map(|l| l.params.clone()).collect();
    for (i, l) in kept.iter().enumerate() {
        let below = kept[..i]
            .iter()
            .map(|p| p.tau_pow(-1.0 / 3.0))
            .fold(0.0, |a, b| a + b);
        let rhs = l.tau_pow(-1.0 / 3.0) / 3.0;
        out.push(ineq(
            "(s1)",
            Some(l.n),
            below < rhs,
            format!("{below:.6e}"),
            "<",
            format!("{rhs:.6e}"),
        ));
        let above = kept[i + 1..]
            .iter()
            .map(|p| p.tau_pow(2.0 / 3.0))
            .fold(0.0, |a, b| a + b);
        let rhs = 2.0 * l.tau_pow(2.0 / 3.0) / (3.0 * std::f64::consts::PI);
        out.push(ineq(
            "(s2)",
            Some(l.n),
            above < rhs,
            format!("{above:.6e}"),
            "<",
            format!("{rhs:.6e}"),
        ));
    }

    for w in lv.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let n = b.params.n;
        // (t): -log2 tau / n strictly increasing.
        let ta = -rational::log2_abs(&a.params.tau) / a.params.n as f64;
        let tb = -rational::log2_abs(&b.params.tau) / n as f64;
        out.push(ineq(
            "(t) proxy",
            Some(n),
            tb > ta,
            format!("{tb:.6}"),
            ">",
            format!("{ta:.6}"),
        ));
        // (g): log tau / log lambda strictly decreasing.
        let ga = rational::log2_abs(&a.params.tau) / rational::log2_abs(&a.placement.lambda);
        let gb = rational::log2_abs(&b.params.tau) / rational::log2_abs(&b.placement.lambda);
        out.push(ineq(
            "(g) proxy",
            Some(n),
            gb < ga,
            format!("{gb:.6}"),
            "<",
            format!("{ga:.6}"),
        ));
    }
    for (i, a) in lv.iter().enumerate() {
        for b in &lv[i + 1..] {
            let lhs = 2 * a.params.m as u128;
            let rhs = b.params.m as u128 / 16;
            out.push(ineq(
                "2 M_p <= M_n / 16",
                Some(b.params.n),
                16 * lhs <= b.params.m as u128,
                lhs.to_string(),
                "<=",
                format!("{rhs}"),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, e: i64) -> LevelParams {
        LevelParams {
            n,
            m: 32u64.pow(n),
            tau: rational::pow2(-e),
        }
    }

    #[test]
    fn default_schedule() {
        let t = default_taus(&BuildConfig::default()).unwrap();
        assert_eq!(t[0].tau, ratio(1, 256));
        assert_eq!(t[1].tau, rational::pow2(-32));
        assert_eq!(t[1].m, 1024);
    }

    #[test]
    fn schedule_rejects_slow_decay() {
        let cfg = BuildConfig {
            q: 1,
            levels: vec![1],
            ..Default::default()
        };
        match default_taus(&cfg) {
            Err(Error::ScheduleInfeasible {
                n, smallest_valid, ..
            }) => {
                assert_eq!(n, 1);
                // 2^{n^2} > 4 * 32^n first holds at n = 6.
                assert_eq!(smallest_valid, 6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn level_size_limit() {
        let cfg = BuildConfig {
            levels: vec![1, 2, 3],
            ..Default::default()
        };
        assert!(matches!(default_taus(&cfg), Err(Error::Level { n: 3, .. })));
    }

    #[test]
    fn thinning() {
        let all = vec![params(1, 8), params(2, 32), params(3, 72)];
        assert_eq!(thin_taus(&all).len(), 3);
        assert_eq!(thin_taus(&all[..1]), all[..1].to_vec());
        let close = vec![params(1, 8), params(2, 9)];
        assert_eq!(thin_taus(&close), vec![params(1, 8)]);
    }

    #[test]
    fn candidate_intervals() {
        let i = candidate_interval(32, 512).unwrap();
        assert_eq!(i, Interval::open(int(47), int(49)));
        let i0 = candidate_interval(32, 0).unwrap();
        assert_eq!(i0, Interval::closed_open(int(32), int(33)));
        for (m, j) in [(32u64, 0usize), (32, 512), (32, 1023), (1024, 77_777)] {
            let i = candidate_interval(m, j).unwrap();
            let (a, b) = full_subintervals(m, &i).unwrap();
            assert!((b - a + 1) as f64 >= (m * m) as f64 / 32.0 - 1.0);
        }
    }
}
