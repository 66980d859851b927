//! Periodic coefficient vectors with a time gap and a frequency gap.
//!
//! For a period `M` and width `alpha`, we look for `c` of length `L = M^2`
//! with `c_j = 0` whenever `j/M` lies in `[0, alpha M]` or `[M - alpha M, M)`
//! and whose unnormalized DFT vanishes (numerically) on the same index set.
//! The comb `sum_N c_{N mod L} delta_{N/M}` then has no atoms in
//! `[-alpha M, alpha M]`, and neither does its Fourier transform
//! `(1/M) sum_m c^_{m mod L} delta_{m/M}`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dft::{dft, DftPlan, C64};
use crate::error::{Error, Result};
use crate::measure::PeriodicLatticeMeasure;
use crate::rational::{self, serde_rational, Rational};

/// Largest `M^2` accepted by the dense nullspace method.
pub const NULLSPACE_MAX_LEN: usize = 4096;

/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-12;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    m: u64,
    alpha: Rational,
}

impl WindowSpec {
    pub fn new(m: u64, alpha: Rational) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidWindow("M must be at least 1".into()));
        }
        if !alpha.is_positive() {
            return Err(Error::InvalidWindow(format!(
                "alpha must be positive, got {}",
                rational::format(&alpha)
            )));
        }
        if (m as u128) * (m as u128) > usize::MAX as u128 / 2 {
            return Err(Error::InvalidWindow(format!("M={m} is too large")));
        }
        Ok(WindowSpec { m, alpha })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        (self.m * self.m) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indices `j` with `j <= alpha L` or `j >= L - alpha L`.
    ///
    /// Time and frequency share the same set since both live on `(1/M) Z`
    /// with period `M`.
    pub fn forbidden_indices(&self) -> Vec<usize> {
        let l = self.len();
        let a = &self.alpha * Rational::from_integer(BigInt::from(l));
        let low = rational::floor_int(&a);
        let high = rational::ceil_int(&(Rational::from_integer(BigInt::from(l)) - &a));
        let low = low.to_usize().map_or(l - 1, |x| x.min(l - 1));
        let high = if high.is_negative() {
            0
        } else {
            high.to_usize().unwrap_or(l).min(l)
        };
        let mut out: Vec<usize> = (0..=low).collect();
        out.extend((high.max(low + 1))..l);
        out
    }

    pub fn forbidden_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for j in self.forbidden_indices() {
            mask[j] = true;
        }
        mask
    }

    fn check_feasible(&self) -> Result<Vec<usize>> {
        let forbidden = self.forbidden_indices();
        let l = self.len();
        if 2 * forbidden.len() >= l {
            return Err(Error::InfeasibleWindow {
                m: self.m,
                forbidden_time: forbidden.len(),
                forbidden_freq: forbidden.len(),
                len: l,
            });
        }
        Ok(forbidden)
    }
}

pub fn forbidden_time_indices(w: &WindowSpec) -> Vec<usize> {
    w.forbidden_indices()
}

pub fn forbidden_freq_indices(w: &WindowSpec) -> Vec<usize> {
    w.forbidden_indices()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Dense SVD of the partial DFT, projection onto its kernel.
    Nullspace,
    /// Projection onto the intersection of the two gap subspaces.
    #[default]
    AlternatingProjection,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nullspace" => Ok(Method::Nullspace),
            "alternating-projection" | "ap" => Ok(Method::AlternatingProjection),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Tuning for [`Method::AlternatingProjection`].
#[derive(Clone, Debug)]
pub struct ProjectionOptions {
    /// Solve the normal equations with conjugate gradients instead of
    /// plain round-robin projections. Both converge to the same point.
    pub accelerate: bool,
    pub max_rounds: usize,
    pub max_cg_iterations: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            accelerate: true,
            max_rounds: 100_000,
            max_cg_iterations: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeyerCertificate {
    /// Largest `|c_j|` over forbidden time indices (zero when exact).
    pub max_forbidden_time: f64,
    /// `max |c^_m|` over forbidden frequencies divided by `max |c^|`.
    pub freq_residual: f64,
    pub worst_freq_index: Option<usize>,
    pub max_abs: f64,
    pub pivot_is_one: bool,
    pub tol: f64,
}

impl MeyerCertificate {
    pub fn passes(&self) -> bool {
        self.max_forbidden_time == 0.0
            && self.freq_residual <= self.tol
            && self.max_abs <= 1.0
            && self.pivot_is_one
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeyerCoefficients {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    pub j_star: usize,
    pub method: Method,
    pub seed: u64,
    pub nullity: Option<usize>,
    pub iterations: usize,
    pub certificate: MeyerCertificate,
    #[serde(rename = "coefficients")]
    pub c: Arc<Vec<C64>>,
}

impl MeyerCoefficients {
    /// Wraps an arbitrary vector, normalizing it the same way the builders
    /// do. The certificate is computed but not enforced.
    pub fn from_vector(w: &WindowSpec, mut c: Vec<C64>, tol: f64) -> Result<Self> {
        if c.len() != w.len() {
            return Err(Error::InvalidWindow(format!(
                "vector has length {}, expected {}",
                c.len(),
                w.len()
            )));
        }
        let j_star = normalize(&mut c).ok_or_else(|| Error::NoSolution {
            m: w.m,
            reason: "vector is zero".into(),
        })?;
        let certificate = certify(w, &c, j_star, tol);
        Ok(MeyerCoefficients {
            m: w.m,
            alpha: w.alpha.clone(),
            j_star,
            method: Method::AlternatingProjection,
            seed: 0,
            nullity: None,
            iterations: 0,
            certificate,
            c: Arc::new(c),
        })
    }

    pub fn window(&self) -> Result<WindowSpec> {
        WindowSpec::new(self.m, self.alpha.clone())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.c
    }

    pub fn transform(&self) -> Vec<C64> {
        dft(&self.c)
    }

    /// `s * sum_N c_{N mod M^2} delta_{N/M + h}`.
    pub fn space_side_measure(&self, h: &Rational, s: C64) -> PeriodicLatticeMeasure {
        PeriodicLatticeMeasure::new(self.m, Arc::clone(&self.c), h.clone(), s)
    }

    /// Fourier transform of [`Self::space_side_measure`], with the
    /// certified-negligible forbidden frequencies set to zero so that the
    /// frequency gap is exact.
    pub fn fourier_side_measure(&self, h: &Rational, s: C64) -> PeriodicLatticeMeasure {
        let mut chat = self.transform();
        if let Ok(w) = self.window() {
            for j in w.forbidden_indices() {
                chat[j] = C64::zero();
            }
        }
        fourier_lattice(self.m, chat, h, s)
    }
}

/// Fourier transform of `s * sum_N c_{N mod M^2} delta_{N/M + h}` for any
/// coefficient vector, without touching small entries.
pub fn fourier_side_measure_raw(m: u64, c: &[C64], h: &Rational, s: C64) -> PeriodicLatticeMeasure {
    fourier_lattice(m, dft(c), h, s)
}

fn fourier_lattice(m: u64, chat: Vec<C64>, h: &Rational, s: C64) -> PeriodicLatticeMeasure {
    PeriodicLatticeMeasure::new(m, Arc::new(chat), Rational::zero(), s / m as f64).with_modulation(h.clone())
}

/// Divides by the first entry of largest modulus, pins it to exactly one
/// and clips rounding overshoot. Returns that index, or `None` for zero.
fn normalize(c: &mut [C64]) -> Option<usize> {
    let (j_star, peak) = c.iter().enumerate().fold((0usize, 0.0f64), |(bj, bv), (j, z)| {
        let v = z.norm();
        if v > bv {
            (j, v)
        } else {
            (bj, bv)
        }
    });
    if !(peak > 0.0) || !peak.is_finite() {
        return None;
    }
    let inv = C64::one() / c[j_star];
    for z in c.iter_mut() {
        if !z.is_zero() {
            *z *= inv;
            let r = z.norm();
            if r > 1.0 {
                *z /= r;
            }
        }
    }
    c[j_star] = C64::one();
    Some(j_star)
}

fn certify(w: &WindowSpec, c: &[C64], j_star: usize, tol: f64) -> MeyerCertificate {
    let forbidden = w.forbidden_indices();
    let max_forbidden_time = forbidden.iter().map(|&j| c[j].norm()).fold(0.0, f64::max);
    let chat = dft(c);
    let top = chat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst = None;
    let mut worst_val = 0.0f64;
    for &m in &forbidden {
        let v = chat[m].norm();
        if v > worst_val || worst.is_none() {
            worst_val = v;
            worst = Some(m);
        }
    }
    let freq_residual = if top > 0.0 { worst_val / top } else { f64::INFINITY };
    MeyerCertificate {
        max_forbidden_time,
        freq_residual,
        worst_freq_index: worst,
        max_abs: c.iter().map(|z| z.norm()).fold(0.0, f64::max),
        pivot_is_one: c.get(j_star) == Some(&C64::one()),
        tol,
    }
}

/// Checks a coefficient vector against its window and returns the
/// certificate, or the first violated condition.
pub fn verify_meyer(mc: &MeyerCoefficients, w: &WindowSpec, tol: f64) -> Result<MeyerCertificate> {
    if mc.m != w.m || mc.c.len() != w.len() {
        return Err(Error::certificate(
            "shape",
            format!(
                "coefficients for M={} (len {}), window M={}",
                mc.m,
                mc.c.len(),
                w.m
            ),
        ));
    }
    for j in w.forbidden_indices() {
        if !mc.c[j].is_zero() {
            return Err(Error::certificate(
                "time gap",
                format!("c[{j}] = {} is not zero", mc.c[j]),
            ));
        }
    }
    if mc.c.get(mc.j_star) != Some(&C64::one()) {
        return Err(Error::certificate(
            "normalization",
            format!("c[j*={}] is not exactly 1", mc.j_star),
        ));
    }
    let cert = certify(w, &mc.c, mc.j_star, tol);
    if cert.max_abs > 1.0 {
        return Err(Error::certificate(
            "normalization",
            format!("max |c_j| = {} exceeds 1", cert.max_abs),
        ));
    }
    if cert.freq_residual > tol {
        return Err(Error::certificate(
            "frequency gap",
            format!(
                "relative |c^_{}| = {:e} exceeds {:e}",
                cert.worst_freq_index.unwrap_or(0),
                cert.freq_residual,
                tol
            ),
        ));
    }
    Ok(cert)
}

pub fn build_meyer(w: &WindowSpec, method: Method, seed: u64, tol: f64) -> Result<MeyerCoefficients> {
    build_meyer_with(w, method, seed, tol, &ProjectionOptions::default())
}

pub fn build_meyer_with(
    w: &WindowSpec,
    method: Method,
    seed: u64,
    tol: f64,
    opts: &ProjectionOptions,
) -> Result<MeyerCoefficients> {
    let forbidden = w.check_feasible()?;
    let l = w.len();
    let mask = w.forbidden_mask();
    let x0 = gaussian_start(w, &mask, seed);
    let start_norm = norm2(&x0);

    let (x, nullity, iterations) = match method {
        Method::Nullspace => {
            if l > NULLSPACE_MAX_LEN {
                return Err(Error::InvalidWindow(format!(
                    "nullspace method handles M^2 <= {NULLSPACE_MAX_LEN}, got {l}"
                )));
            }
            let (x, nullity) = nullspace_projection(l, &mask, &forbidden, &x0);
            (x, Some(nullity), 0)
        }
        Method::AlternatingProjection => {
            let plan = DftPlan::new(l);
            if opts.accelerate {
                let (x, it) = cg_projection(&plan, &mask, &forbidden, &x0, tol, opts)?;
                (x, None, it)
            } else {
                let (x, it) = plain_projection(&plan, &mask, &forbidden, x0, tol, opts.max_rounds);
                (x, None, it)
            }
        }
    };

    if !(norm2(&x) > 1e-8 * start_norm) {
        return Err(Error::NoSolution {
            m: w.m,
            reason: "projection collapsed to zero".into(),
        });
    }
    let mut c = x;
    let j_star = normalize(&mut c).ok_or_else(|| Error::NoSolution {
        m: w.m,
        reason: "projection collapsed to zero".into(),
    })?;
    let certificate = certify(w, &c, j_star, tol);
    if certificate.freq_residual > tol {
        return Err(Error::NoSolution {
            m: w.m,
            reason: format!(
                "frequency residual {:e} stalled above tolerance {:e}",
                certificate.freq_residual, tol
            ),
        });
    }
    Ok(MeyerCoefficients {
        m: w.m,
        alpha: w.alpha.clone(),
        j_star,
        method,
        seed,
        nullity,
        iterations,
        certificate,
        c: Arc::new(c),
    })
}

/// Smallest `M^2` at which the random start is smoothed before projecting.
pub const SMOOTH_START_LEN: usize = 4096;

/// Seeded complex Gaussian noise on the allowed indices. For long periods
/// it is also tapered in time and frequency, so the projection only has
/// to clean up rounding-level leakage.
fn gaussian_start(w: &WindowSpec, mask: &[bool], seed: u64) -> Vec<C64> {
    let l = mask.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<C64> = (0..l)
        .map(|j| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if mask[j] {
                C64::zero()
            } else {
                C64::new(re, im)
            }
        })
        .collect();
    if l >= SMOOTH_START_LEN {
        let taper = smooth_taper(w, mask);
        let plan = DftPlan::new(l);
        x.iter_mut().zip(&taper).for_each(|(z, t)| *z *= *t);
        plan.forward(&mut x);
        x.iter_mut().zip(&taper).for_each(|(z, t)| *z *= *t);
        plan.inverse(&mut x);
        for (j, z) in x.iter_mut().enumerate() {
            if mask[j] {
                *z = C64::zero();
            }
        }
    }
    x
}

/// One on the allowed block shrunk by `8e` at each end, Gaussian edges of
/// width `e = L/128`. The allowed indices form one cyclic block.
fn smooth_taper(w: &WindowSpec, mask: &[bool]) -> Vec<f64> {
    let l = mask.len();
    let allowed = allowed_indices(mask);
    let (a, b) = (allowed[0] as f64, allowed[allowed.len() - 1] as f64);
    let e = l as f64 / 128.0;
    let (lo, hi) = (a + 8.0 * e, b - 8.0 * e);
    debug_assert!(w.len() == l);
    (0..l)
        .map(|j| {
            if mask[j] {
                return 0.0;
            }
            let x = j as f64;
            let d = if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            };
            (-0.5 * (d / e).powi(2)).exp()
        })
        .collect()
}

fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn twiddle(j: usize, m: usize, l: usize) -> C64 {
    let idx = ((j as u128 * m as u128) % l as u128) as f64;
    C64::from_polar(1.0, -2.0 * std::f64::consts::PI * idx / l as f64)
}

/// Partial DFT (rows: forbidden frequencies, columns: allowed times) as
/// the real block matrix `[[Re, -Im], [Im, Re]]`. The complex SVD in
/// nalgebra loses accuracy on these matrices; the real one does not.
fn partial_dft_real(l: usize, allowed: &[usize], forbidden: &[usize]) -> DMatrix<f64> {
    let (r, c) = (forbidden.len(), allowed.len());
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let w = twiddle(allowed[j % c], forbidden[i % r], l);
        match (i < r, j < c) {
            (true, true) | (false, false) => w.re,
            (true, false) => -w.im,
            (false, true) => w.im,
        }
    })
}

fn allowed_indices(mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&j| !mask[j]).collect()
}

fn nullspace_projection(l: usize, mask: &[bool], forbidden: &[usize], x0: &[C64]) -> (Vec<C64>, usize) {
    let allowed = allowed_indices(mask);
    let c = allowed.len();
    let a = partial_dft_real(l, &allowed, forbidden);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut z: Vec<f64> = allowed
        .iter()
        .map(|&j| x0[j].re)
        .chain(allowed.iter().map(|&j| x0[j].im))
        .collect();
    let mut rank = 0;
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= RANK_TOL * smax {
            continue;
        }
        rank += 1;
        let row = v_t.row(i);
        let coef: f64 = row.iter().zip(&z).map(|(v, x)| v * x).sum();
        for (zk, v) in z.iter_mut().zip(row.iter()) {
            *zk -= coef * v;
        }
    }
    let mut x = vec![C64::zero(); l];
    for (k, &j) in allowed.iter().enumerate() {
        x[j] = C64::new(z[k], z[k + c]);
    }
    // Complex rank r shows up as real rank 2r.
    (x, c - rank / 2)
}

/// Relative frequency residual of `x` given its transform.
fn freq_residual(xhat: &[C64], forbidden: &[usize]) -> f64 {
    let top = xhat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = forbidden.iter().map(|&m| xhat[m].norm()).fold(0.0, f64::max);
    if top > 0.0 {
        worst / top
    } else {
        f64::INFINITY
    }
}

fn plain_projection(
    plan: &DftPlan,
    mask: &[bool],
    forbidden: &[usize],
    mut x: Vec<C64>,
    tol: f64,
    max_rounds: usize,
) -> (Vec<C64>, usize) {
    let target = 0.5 * tol;
    let mut buf = vec![C64::zero(); x.len()];
    for round in 0..max_rounds {
        buf.copy_from_slice(&x);
        plan.forward(&mut buf);
        if freq_residual(&buf, forbidden) <= target {
            return (x, round);
        }
        for &m in forbidden {
            buf[m] = C64::zero();
        }
        plan.inverse(&mut buf);
        for (j, z) in buf.iter().enumerate() {
            x[j] = if mask[j] { C64::zero() } else { *z };
        }
    }
    (x, max_rounds)
}

/// Computes `x0 - A* (A A*)^+ A x0`, the orthogonal projection of the start
/// onto the kernel of `A = (DFT restricted to forbidden frequencies) on
/// allowed times`, by conjugate gradients on the normal equations.
fn cg_projection(
    plan: &DftPlan,
    mask: &[bool],
    forbidden: &[usize],
    x0: &[C64],
    tol: f64,
    opts: &ProjectionOptions,
) -> Result<(Vec<C64>, usize)> {
    let l = plan.len();
    let mut buf = vec![C64::zero(); l];

    let apply_a = |x: &[C64], buf: &mut Vec<C64>| -> Vec<C64> {
        buf.copy_from_slice(x);
        plan.forward(buf);
        forbidden.iter().map(|&m| buf[m]).collect()
    };
    let apply_adj = |y: &[C64], buf: &mut Vec<C64>| -> Vec<C64> {
        buf.iter_mut().for_each(|z| *z = C64::zero());
        for (k, &m) in forbidden.iter().enumerate() {
            buf[m] = y[k];
        }
        plan.adjoint(buf);
        buf.iter()
            .enumerate()
            .map(|(j, z)| if mask[j] { C64::zero() } else { *z })
            .collect()
    };
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };

    let mut x = x0.to_vec();
    let mut total = 0usize;
    let x0_norm = norm2(x0);
    for _refine in 0..6 {
        let b = apply_a(&x, &mut buf);
        // ||A x||_2 <= eps ||x||_2 implies the max-norm ratio is <= eps.
        let stop = 0.05 * tol * x0_norm;
        if norm2(&b) <= stop {
            break;
        }
        let mut y = vec![C64::zero(); b.len()];
        let mut r = b.clone();
        let mut p = r.clone();
        let mut rs = dot(&r, &r).re;
        for _ in 0..opts.max_cg_iterations {
            if rs.sqrt() <= stop {
                break;
            }
            total += 1;
            let ap = apply_a(&apply_adj(&p, &mut buf), &mut buf);
            let denom = dot(&p, &ap).re;
            if !(denom > 0.0) {
                break;
            }
            let step = rs / denom;
            for k in 0..y.len() {
                y[k] += p[k] * step;
                r[k] -= ap[k] * step;
            }
            let rs_new = dot(&r, &r).re;
            let beta = rs_new / rs;
            for k in 0..p.len() {
                p[k] = r[k] + p[k] * beta;
            }
            rs = rs_new;
        }
        let correction = apply_adj(&y, &mut buf);
        for (xj, cj) in x.iter_mut().zip(&correction) {
            *xj -= cj;
        }
        buf.copy_from_slice(&x);
        plan.forward(&mut buf);
        if freq_residual(&buf, forbidden) <= 0.5 * tol {
            break;
        }
    }
    Ok((x, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, Interval};

    fn window(m: u64) -> WindowSpec {
        WindowSpec::new(m, ratio(1, 8)).unwrap()
    }

    #[test]
    fn forbidden_sets_match_hand_counts() {
        assert_eq!(window(4).forbidden_indices(), vec![0, 1, 2, 14, 15]);
        assert_eq!(window(2).forbidden_indices(), vec![0]);
        let f32 = window(32).forbidden_indices();
        assert_eq!(f32.len(), 257);
        assert_eq!(f32.iter().filter(|&&j| j <= 128).count(), 129);
        assert_eq!(window(1024).forbidden_indices().len(), 262_145);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WindowSpec::new(0, ratio(1, 8)).is_err());
        assert!(WindowSpec::new(4, int(0)).is_err());
        let w = WindowSpec::new(2, ratio(1, 2)).unwrap();
        assert!(matches!(
            build_meyer(&w, Method::Nullspace, 1, DEFAULT_TOL),
            Err(Error::InfeasibleWindow { .. })
        ));
    }

    #[test]
    fn small_builds_certify_with_both_methods() {
        for m in [2u64, 4, 8, 16, 32] {
            let w = window(m);
            for method in [Method::Nullspace, Method::AlternatingProjection] {
                let mc = build_meyer(&w, method, 11, DEFAULT_TOL).unwrap();
                let cert = verify_meyer(&mc, &w, DEFAULT_TOL).unwrap();
                assert!(cert.passes(), "M={m} {method:?}: {cert:?}");
            }
        }
    }

    #[test]
    fn methods_reach_the_same_projection() {
        let w = window(8);
        let a = build_meyer(&w, Method::Nullspace, 5, DEFAULT_TOL).unwrap();
        let b = build_meyer(&w, Method::AlternatingProjection, 5, DEFAULT_TOL).unwrap();
        assert_eq!(a.j_star, b.j_star);
        let diff =
            a.c.iter()
                .zip(b.c.iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
        assert!(diff < 1e-6, "diff {diff}");
    }

    #[test]
    fn plain_rounds_agree_with_accelerated_on_small_window() {
        let w = window(4);
        let opts = ProjectionOptions {
            accelerate: false,
            ..Default::default()
        };
        let plain = build_meyer_with(&w, Method::AlternatingProjection, 9, 1e-9, &opts).unwrap();
        assert!(verify_meyer(&plain, &w, 1e-9).is_ok());
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let w = window(16);
        let a = build_meyer(&w, Method::AlternatingProjection, 3, DEFAULT_TOL).unwrap();
        let b = build_meyer(&w, Method::AlternatingProjection, 3, DEFAULT_TOL).unwrap();
        assert_eq!(a.c, b.c);
    }

    #[test]
    fn rejects_vectors_that_break_the_gaps() {
        let w = window(4);
        let ones = MeyerCoefficients::from_vector(&w, vec![C64::one(); 16], DEFAULT_TOL).unwrap();
        match verify_meyer(&ones, &w, DEFAULT_TOL) {
            Err(Error::CertificateFailure { what, detail }) => {
                assert_eq!(what, "time gap");
                assert!(detail.contains("c[0]"));
            }
            other => panic!("expected failure, got {other:?}"),
        }

        let good = build_meyer(&w, Method::Nullspace, 2, DEFAULT_TOL).unwrap();
        let mut bumped = (*good.c).clone();
        let k = (0..16)
            .find(|&j| !bumped[j].is_zero() && j != good.j_star)
            .unwrap();
        bumped[k] += C64::new(1e-3, 0.0);
        let bad = MeyerCoefficients {
            c: Arc::new(bumped),
            ..good.clone()
        };
        assert!(matches!(
            verify_meyer(&bad, &w, DEFAULT_TOL),
            Err(Error::CertificateFailure { .. })
        ));
    }

    #[test]
    fn both_sides_have_an_atom_free_gap() {
        let w = window(32);
        let mc = build_meyer(&w, Method::AlternatingProjection, 1, DEFAULT_TOL).unwrap();
        let gap = Interval::closed(int(-4), int(4));
        let space = mc.space_side_measure(&int(0), C64::one());
        let freq = mc.fourier_side_measure(&int(0), C64::one());
        assert!(space.atoms_in(&gap).is_empty());
        assert!(freq.atoms_in(&gap).is_empty());
        assert!(!space.atoms_in(&Interval::closed(int(0), int(32))).is_empty());
    }

    #[test]
    fn delta_at_origin_transforms_to_flat_comb() {
        let mut e0 = vec![C64::zero(); 4];
        e0[0] = C64::one();
        let f = fourier_side_measure_raw(2, &e0, &int(0), C64::one());
        let atoms = f.atoms_in(&Interval::closed_open(int(0), int(2)));
        assert_eq!(atoms.len(), 4);
        for a in atoms {
            assert!((a.weight - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let w = window(8);
        let mc = build_meyer(&w, Method::AlternatingProjection, 4, DEFAULT_TOL).unwrap();
        let s = serde_json::to_string(&mc).unwrap();
        let back: MeyerCoefficients = serde_json::from_str(&s).unwrap();
        assert_eq!(back.c, mc.c);
        assert_eq!(back.alpha, mc.alpha);
        assert!(verify_meyer(&back, &w, DEFAULT_TOL).is_ok());
    }
}
