//! Test functions: the plateau bump, bump sums adapted to a built measure,
//! modulated Gaussians with closed-form transforms, and Schwartz seminorms
//! `N_{n,m}(f) = sup_x max_{k <= m} |(1 + |x|^n) f^{(k)}(x)|`.
//!
//! The Fourier convention throughout is `f^(t) = int f(x) e^{-2 pi i x t} dx`.

use std::f64::consts::PI;

use num::{Complex, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, ratio, serde_rational, Rational};

pub type Value = Complex<f64>;

/// A smooth test function that can be evaluated with derivatives and may
/// carry analytic decay certificates.
pub trait SmoothFunction: Send + Sync {
    /// `f^{(k)}(x)`.
    fn eval(&self, x: f64, k: u32) -> Value;

    /// Evaluation at an exact position; overridden where exactness matters.
    fn eval_at(&self, x: &Rational, k: u32) -> Value {
        self.eval(rational::to_f64(x), k)
    }

    /// Highest derivative order supported.
    fn max_order(&self) -> u32;

    /// Certified upper bound on `N_{n,m}`.
    fn seminorm_bound(&self, _n: u32, _m: u32) -> Option<f64> {
        None
    }

    /// Certified upper bound on `sup_{|x| > r} |f(x)| (1 + x^2)`.
    fn tail_bound(&self, _radius: f64) -> Option<f64> {
        None
    }

    /// `(center, scale)` pairs where the function lives; seeds grid searches.
    fn regions(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0)]
    }
}

// ---------------------------------------------------------------------------
// The plateau bump

/// Even bump equal to one on `[-1/3, 1/3]` and zero outside `(-1/2, 1/2)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BumpEta;

/// Derivatives of the logistic `p(u) = 1/(1+e^u)` up to order four,
/// written through `p` and `q = 1 - p` to avoid cancellation.
fn logistic_derivatives(u: f64) -> [f64; 5] {
    let (p, q) = if u >= 0.0 {
        let e = (-u).exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    } else {
        let e = u.exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    };
    let pq = p * q;
    let d = q - p;
    [
        p,
        -pq,
        pq * d,
        pq * (2.0 * pq - d * d),
        -pq * d * (8.0 * pq - d * d),
    ]
}

/// The smooth step `g(s) = f(s) / (f(s) + f(1 - s))`, `f(s) = e^{-1/s}`,
/// and its derivatives on `0 < s < 1`.
pub fn smooth_step(s: f64, k: u32) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    // g(s) = p(phi(s)) with phi(s) = 1/s - 1/(1-s).
    let t = 1.0 - s;
    let l = logistic_derivatives(1.0 / s - 1.0 / t);
    if k == 0 {
        return l[0];
    }
    if l[1] == 0.0 {
        return 0.0;
    }
    let phi = |j: i32| {
        let fact = (1..=j).product::<i32>() as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * fact / s.powi(j + 1) - fact / t.powi(j + 1)
    };
    let (p1, p2, p3, p4) = (phi(1), phi(2), phi(3), phi(4));
    match k {
        1 => l[1] * p1,
        2 => l[2] * p1 * p1 + l[1] * p2,
        3 => l[3] * p1.powi(3) + 3.0 * l[2] * p1 * p2 + l[1] * p3,
        4 => {
            l[4] * p1.powi(4) + 6.0 * l[3] * p1 * p1 * p2 + l[2] * (3.0 * p2 * p2 + 4.0 * p1 * p3) + l[1] * p4
        }
        _ => {
            let h = 1e-4 * s.min(t);
            (smooth_step(s + h, k - 1) - smooth_step(s - h, k - 1)) / (2.0 * h)
        }
    }
}

/// `eta^{(k)}(x)`; closed form up to `k = 4`, nested central differences above.
pub fn eta_eval(x: f64, k: u32) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 / 3.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if ax >= 0.5 {
        return 0.0;
    }
    if k > 4 {
        let h = 1e-4 * (ax - 1.0 / 3.0).min(0.5 - ax);
        return (eta_eval(x + h, k - 1) - eta_eval(x - h, k - 1)) / (2.0 * h);
    }
    let chain = (-6.0 * x.signum()).powi(k as i32);
    chain * smooth_step(3.0 - 6.0 * ax, k)
}

/// `eta^{(k)}(u)` with the plateau and support regions decided exactly.
pub fn eta_eval_exact(u: &Rational, k: u32) -> f64 {
    let au = u.abs();
    if au <= ratio(1, 3) {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if au >= ratio(1, 2) {
        return 0.0;
    }
    eta_eval(rational::to_f64(u), k)
}

impl SmoothFunction for BumpEta {
    fn eval(&self, x: f64, k: u32) -> Value {
        Value::new(eta_eval(x, k), 0.0)
    }

    fn eval_at(&self, x: &Rational, k: u32) -> Value {
        Value::new(eta_eval_exact(x, k), 0.0)
    }

    fn max_order(&self) -> u32 {
        6
    }

    fn tail_bound(&self, radius: f64) -> Option<f64> {
        Some(if radius >= 0.5 { 0.0 } else { 1.25 })
    }

    fn regions(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 0.5)]
    }
}

// ---------------------------------------------------------------------------
// Bump sums

/// `psi(x) = sum_n tau_n^{1/3} eta(lambda_n (x - lambda_n))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiFunction {
    pub levels: Vec<PsiLevel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiLevel {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

impl PsiLevel {
    /// `tau^{1/3}`.
    pub fn height(&self) -> f64 {
        (rational::log2_abs(&self.tau) / 3.0).exp2()
    }

    /// Half-width `1 / (2 lambda)` of the bump's support.
    pub fn half_width(&self) -> Rational {
        (rational::int(2) * &self.lambda).recip()
    }
}

impl PsiFunction {
    pub fn new(levels: Vec<PsiLevel>) -> Self {
        PsiFunction { levels }
    }

    /// Index of the level whose bump support contains `x`, if any.
    pub fn level_at(&self, x: &Rational) -> Option<usize> {
        self.levels.iter().position(|l| {
            let d = (x - &l.lambda).abs();
            d < l.half_width()
        })
    }
}

/// `psi^{(k)}(x)`: at most one summand is nonzero, and the chain rule
/// contributes `lambda_n^k`.
pub fn psi_eval(p: &PsiFunction, x: &Rational, k: u32) -> f64 {
    let Some(i) = p.level_at(x) else {
        return 0.0;
    };
    let l = &p.levels[i];
    let u = &l.lambda * (x - &l.lambda);
    let lam = rational::to_f64(&l.lambda);
    l.height() * lam.powi(k as i32) * eta_eval_exact(&u, k)
}

impl SmoothFunction for PsiFunction {
    fn eval(&self, x: f64, k: u32) -> Value {
        self.eval_at(&rational::from_f64(x), k)
    }

    fn eval_at(&self, x: &Rational, k: u32) -> Value {
        Value::new(psi_eval(self, x, k), 0.0)
    }

    fn max_order(&self) -> u32 {
        4
    }

    fn seminorm_bound(&self, n: u32, m: u32) -> Option<f64> {
        if m > 0 {
            return None;
        }
        Some(
            self.levels
                .iter()
                .map(|l| {
                    let edge = rational::to_f64(&(&l.lambda + l.half_width()));
                    l.height() * weight(n, edge)
                })
                .fold(0.0, f64::max),
        )
    }

    fn tail_bound(&self, radius: f64) -> Option<f64> {
        Some(
            self.levels
                .iter()
                .filter(|l| rational::to_f64(&(&l.lambda + l.half_width())) > radius)
                .map(|l| {
                    let edge = rational::to_f64(&(&l.lambda + l.half_width()));
                    l.height() * (1.0 + edge * edge)
                })
                .fold(0.0, f64::max),
        )
    }

    fn regions(&self) -> Vec<(f64, f64)> {
        self.levels
            .iter()
            .map(|l| (rational::to_f64(&l.lambda), rational::to_f64(&l.half_width())))
            .collect()
    }
}

/// One row of the finite-level decay report for `psi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiDecayRow {
    pub level: usize,
    pub k: u32,
    pub big_n: u32,
    /// `tau^{1/3} (1 + (2 lambda)^N)`, finite for every built level.
    pub weighted_height: f64,
    /// `tau^{1/3} lambda^k`.
    pub derivative_scale: f64,
    /// `lambda^{-N}`.
    pub target: f64,
    pub holds: bool,
}

/// Checks `tau^{1/3} lambda^k <= lambda^{-N}` for `k, N <= 2` on each level.
///
/// The inequality is asymptotic in the level index; at desk scale it usually
/// fails and the report says so rather than asserting it.
pub fn psi_decay_report(p: &PsiFunction) -> Vec<PsiDecayRow> {
    let mut rows = Vec::new();
    for (i, l) in p.levels.iter().enumerate() {
        let lam = rational::to_f64(&l.lambda);
        for k in 0..=2u32 {
            for big_n in 0..=2u32 {
                let derivative_scale = l.height() * lam.powi(k as i32);
                let target = lam.powi(-(big_n as i32));
                rows.push(PsiDecayRow {
                    level: i,
                    k,
                    big_n,
                    weighted_height: l.height() * (1.0 + (2.0 * lam).powi(big_n as i32)),
                    derivative_scale,
                    target,
                    holds: derivative_scale <= target,
                });
            }
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// Gaussians

/// `A e^{-pi a (x - x0)^2} e^{2 pi i xi x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "GaussianParams", into = "GaussianParams")]
pub struct Gaussian {
    pub amplitude: Value,
    pub a: f64,
    pub center: f64,
    pub modulation: f64,
    polys: Vec<Vec<Value>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct GaussianParams {
    amplitude: Value,
    a: f64,
    center: f64,
    modulation: f64,
}

impl From<GaussianParams> for Gaussian {
    fn from(p: GaussianParams) -> Self {
        Gaussian::with_amplitude(p.amplitude, p.a, p.center, p.modulation)
    }
}

impl From<Gaussian> for GaussianParams {
    fn from(g: Gaussian) -> Self {
        GaussianParams {
            amplitude: g.amplitude,
            a: g.a,
            center: g.center,
            modulation: g.modulation,
        }
    }
}

const GAUSSIAN_ORDER: u32 = 6;

impl Gaussian {
    pub fn new(a: f64, center: f64, modulation: f64) -> Self {
        Self::with_amplitude(Value::one(), a, center, modulation)
    }

    pub fn with_amplitude(amplitude: Value, a: f64, center: f64, modulation: f64) -> Self {
        assert!(a > 0.0, "Gaussian width parameter must be positive");
        let mut g = Gaussian {
            amplitude,
            a,
            center,
            modulation,
            polys: Vec::new(),
        };
        g.polys = g.derivative_polys();
        g
    }

    /// `e^{-pi x^2}`.
    pub fn standard() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    /// `P_k(u)` with `f^{(k)}(x) = A P_k(x - x0) e^{-pi a u^2} e^{2 pi i xi x}`.
    fn derivative_polys(&self) -> Vec<Vec<Value>> {
        let lin = Value::new(-2.0 * PI * self.a, 0.0);
        let cst = Value::new(0.0, 2.0 * PI * self.modulation);
        let mut out = vec![vec![Value::one()]];
        for _ in 0..GAUSSIAN_ORDER {
            let p = out.last().unwrap();
            let mut next = vec![Value::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                if i > 0 {
                    next[i - 1] += *c * i as f64;
                }
                next[i] += *c * cst;
                next[i + 1] += *c * lin;
            }
            out.push(next);
        }
        out
    }

    /// `int f(x) e^{-2 pi i x t} dx` in closed form.
    pub fn transform(&self) -> Gaussian {
        let phase = 2.0 * PI * self.center * self.modulation;
        let amp = self.amplitude * Value::from_polar(self.a.powf(-0.5), phase);
        Gaussian::with_amplitude(amp, 1.0 / self.a, self.modulation, -self.center)
    }

    /// `int f(t) e^{2 pi i x t} dt`, i.e. `f^(-x)`.
    pub fn inverse_transform(&self) -> Gaussian {
        let t = self.transform();
        Gaussian::with_amplitude(t.amplitude, t.a, -t.center, -t.modulation)
    }

    /// Radius beyond which the Gaussian envelope is below `e^{-64 pi}`.
    pub fn default_radius(&self) -> f64 {
        self.center.abs() + 8.0 / self.a.sqrt()
    }

    /// Certified bound on `sup_u (b0 + b1 |u| + ...) e^{-pi a u^2}` using
    /// `sup_u |u|^j e^{-pi a u^2} = (j / (2 pi a e))^{j/2}`.
    fn poly_gauss_sup(&self, coeffs: &[f64]) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == 0 {
                    *b
                } else {
                    b * (j as f64 / (2.0 * PI * self.a * std::f64::consts::E)).powf(j as f64 / 2.0)
                }
            })
            .sum()
    }
}

/// `1 + |x|^n` for `n >= 1`; one for `n = 0`.
pub fn weight(n: u32, x: f64) -> f64 {
    if n == 0 {
        1.0
    } else {
        1.0 + x.abs().powi(n as i32)
    }
}

impl SmoothFunction for Gaussian {
    fn eval(&self, x: f64, k: u32) -> Value {
        let u = x - self.center;
        let p = &self.polys[k as usize];
        let mut poly = Value::zero();
        for c in p.iter().rev() {
            poly = poly * u + c;
        }
        let env = (-PI * self.a * u * u).exp();
        let phase = Value::from_polar(1.0, 2.0 * PI * self.modulation * x);
        self.amplitude * poly * env * phase
    }

    fn max_order(&self) -> u32 {
        GAUSSIAN_ORDER
    }

    fn seminorm_bound(&self, n: u32, m: u32) -> Option<f64> {
        if m > GAUSSIAN_ORDER {
            return None;
        }
        // 1 + |x|^n <= 1 + 2^{n-1} (|x0|^n + |u|^n).
        let mut w = vec![0.0; n as usize + 1];
        if n == 0 {
            w[0] = 1.0;
        } else {
            let c = 2f64.powi(n as i32 - 1);
            w[0] = 1.0 + c * self.center.abs().powi(n as i32);
            w[n as usize] += c;
        }
        let amp = self.amplitude.norm();
        let mut best: f64 = 0.0;
        for p in &self.polys[..=m as usize] {
            let abs: Vec<f64> = p.iter().map(|c| c.norm()).collect();
            let mut prod = vec![0.0; abs.len() + w.len() - 1];
            for (i, a) in abs.iter().enumerate() {
                for (j, b) in w.iter().enumerate() {
                    prod[i + j] += a * b;
                }
            }
            best = best.max(amp * self.poly_gauss_sup(&prod));
        }
        // Outward rounding for the floating evaluation above.
        Some(best * (1.0 + 1e-12))
    }

    fn tail_bound(&self, radius: f64) -> Option<f64> {
        let amp = self.amplitude.norm();
        let b = 1.0 + 2.0 * self.center * self.center;
        let u0 = radius - self.center.abs();
        let bound = if u0 > 0.0 && u0 * u0 >= 1.0 / (PI * self.a) {
            (b + 2.0 * u0 * u0) * (-PI * self.a * u0 * u0).exp()
        } else {
            b + 2.0 / (PI * self.a * std::f64::consts::E)
        };
        Some(amp * bound * (1.0 + 1e-12))
    }

    fn regions(&self) -> Vec<(f64, f64)> {
        vec![(self.center, 1.0 / self.a.sqrt())]
    }
}

// ---------------------------------------------------------------------------
// Seminorms

/// Evaluation policy for `N_{n,m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub n: u32,
    pub m: u32,
    /// Half-width of each search region in units of the region's scale.
    pub span: f64,
    pub points: usize,
    pub refinements: usize,
}

impl SeminormSpec {
    pub fn new(n: u32, m: u32) -> Self {
        SeminormSpec {
            n,
            m,
            span: 8.0,
            points: 4001,
            refinements: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    /// Grid maximum: always a lower bound for the true seminorm.
    pub lower: f64,
    /// Analytic upper bound when the function carries one.
    pub upper: Option<f64>,
    pub argmax: f64,
}

impl SeminormEstimate {
    pub fn certified_upper(&self) -> crate::error::Result<f64> {
        self.upper
            .ok_or_else(|| crate::error::Error::NoDecayCertificate("seminorm upper bound".into()))
    }
}

/// Grid maximization of `|(1+|x|^n) f^{(k)}(x)|` over `k <= m`, refined
/// around the best point, paired with the certified bound if any.
pub fn seminorm(f: &dyn SmoothFunction, spec: &SeminormSpec) -> SeminormEstimate {
    let m = spec.m.min(f.max_order());
    let objective = |x: f64| {
        (0..=m)
            .map(|k| weight(spec.n, x) * f.eval(x, k).norm())
            .fold(0.0, f64::max)
    };
    let points = spec.points.max(3);
    let mut best = (f64::NEG_INFINITY, 0.0);
    let consider = |x: f64, best: &mut (f64, f64)| {
        let v = objective(x);
        if v > best.0 {
            *best = (v, x);
        }
    };
    let mut regions = f.regions();
    regions.push((0.0, 1.0));
    let mut step = f64::INFINITY;
    for (c, s) in &regions {
        consider(*c, &mut best);
        let lo = c - spec.span * s;
        let h = 2.0 * spec.span * s / (points - 1) as f64;
        for i in 0..points {
            consider(lo + h * i as f64, &mut best);
        }
        step = step.min(h);
    }
    let mut h = step;
    for _ in 0..spec.refinements {
        let centre = best.1;
        let lo = centre - 2.0 * h;
        let hh = 4.0 * h / 40.0;
        for i in 0..=40 {
            consider(lo + hh * i as f64, &mut best);
        }
        h = hh;
    }
    SeminormEstimate {
        lower: best.0.max(0.0),
        upper: f.seminorm_bound(spec.n, spec.m),
        argmax: best.1,
    }
}
