//! Discrete measures with exact atom positions.
//!
//! A [`PeriodicLatticeMeasure`] denotes
//! `s * sum_k sum_j c_j delta_{kM + j/M + h}` (optionally modulated by a
//! character `e^{-2 pi i w x}`), and a [`MeasureExpr`] is a finite sum of
//! such terms plus loose atoms. Atoms are never materialized for a whole
//! period: every query solves for the lattice indices that land inside the
//! requested window.

use std::sync::Arc;

use num::{BigInt, Complex, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, serde_rational, Interval, Rational};
use crate::schwartz::SmoothFunction;
use crate::sum::{pairwise_abs_sum, pairwise_sum, pairwise_sum_complex};

pub type Weight = Complex<f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "serde_rational")]
    pub position: Rational,
    pub weight: Weight,
}

impl Atom {
    pub fn new(position: Rational, weight: Weight) -> Self {
        Atom { position, weight }
    }

    pub fn unit(position: Rational) -> Self {
        Atom::new(position, Weight::one())
    }
}

/// `s * sum_{N in Z} c_{N mod M^2} e^{-2 pi i w N/M} delta_{N/M + h}`.
///
/// The modulation `w` is zero for space-side measures; Fourier-side
/// measures of shifted combs carry the shift there.
#[derive(Clone, Debug)]
pub struct PeriodicLatticeMeasure {
    period: u64,
    coeffs: Arc<Vec<Weight>>,
    shift: Rational,
    scale: Weight,
    modulation: Rational,
}

impl PeriodicLatticeMeasure {
    pub fn new(period: u64, coeffs: Arc<Vec<Weight>>, shift: Rational, scale: Weight) -> Self {
        assert!(period >= 1, "period must be positive");
        assert_eq!(
            coeffs.len() as u128,
            (period as u128) * (period as u128),
            "coefficient vector must have length M^2"
        );
        PeriodicLatticeMeasure {
            period,
            coeffs,
            shift,
            scale,
            modulation: Rational::zero(),
        }
    }

    pub fn with_modulation(mut self, modulation: Rational) -> Self {
        self.modulation = modulation;
        self
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn coeffs(&self) -> &[Weight] {
        &self.coeffs
    }

    pub fn shared_coeffs(&self) -> Arc<Vec<Weight>> {
        Arc::clone(&self.coeffs)
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn scale(&self) -> Weight {
        self.scale
    }

    pub fn modulation(&self) -> &Rational {
        &self.modulation
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn m_rat(&self) -> Rational {
        rational::int(self.period as i64)
    }

    pub fn position(&self, n: &BigInt) -> Rational {
        Rational::new(n.clone(), BigInt::from(self.period)) + &self.shift
    }

    pub fn weight(&self, n: &BigInt) -> Weight {
        let c = self.coeffs[rational::mod_index(n, self.len())];
        if c.is_zero() {
            return Weight::zero();
        }
        let w = self.scale * c;
        if self.modulation.is_zero() {
            w
        } else {
            let theta = &self.modulation * Rational::new(n.clone(), BigInt::from(self.period));
            w * rational::unit_phase(&theta)
        }
    }

    pub fn translated(&self, h: &Rational) -> Self {
        PeriodicLatticeMeasure {
            shift: &self.shift + h,
            ..self.clone()
        }
    }

    pub fn scaled(&self, s: Weight) -> Self {
        PeriodicLatticeMeasure {
            scale: self.scale * s,
            ..self.clone()
        }
    }

    /// Atoms with nonzero coefficient inside `window`, ascending.
    pub fn atoms_in(&self, window: &Interval) -> Vec<Atom> {
        let Some((lo, hi)) = window.lattice_range(self.period, &self.shift) else {
            return Vec::new();
        };
        let len = self.len();
        let count = (&hi - &lo + 1u32).to_u64().expect("window too wide to enumerate");
        let r0 = rational::mod_index(&lo, len);
        let mut out = Vec::new();
        for i in 0..count {
            // Residues walk in machine integers; BigInt only for live atoms.
            let r = ((r0 as u64 + i) % len as u64) as usize;
            if self.coeffs[r].is_zero() {
                continue;
            }
            let n = &lo + i;
            let w = self.weight(&n);
            if !w.is_zero() {
                out.push(Atom::new(self.position(&n), w));
            }
        }
        out
    }

    /// Number of lattice sites (zero coefficients included) inside `window`.
    pub fn sites_in(&self, window: &Interval) -> BigInt {
        match window.lattice_range(self.period, &self.shift) {
            Some((lo, hi)) => hi - lo + 1,
            None => BigInt::zero(),
        }
    }

    /// Total variation over one period, `|s| * sum_j |c_j|`.
    pub fn period_variation(&self) -> f64 {
        self.scale.norm() * pairwise_abs_sum(&self.coeffs)
    }

    /// `|mu|(window)` from full-period counts plus one partial residue run.
    pub fn variation_closed_form(&self, window: &Interval) -> f64 {
        let Some((lo, hi)) = window.lattice_range(self.period, &self.shift) else {
            return 0.0;
        };
        let len = self.len();
        let count: BigInt = &hi - &lo + 1;
        let (full, rem) = count.div_rem(&BigInt::from(len));
        let rem = rem.to_usize().expect("remainder below period length");
        let start = rational::mod_index(&lo, len);
        let mut parts = Vec::with_capacity(2);
        if !full.is_zero() {
            parts.push(full.to_f64().unwrap() * pairwise_abs_sum(&self.coeffs));
        }
        if rem > 0 {
            let end = start + rem;
            if end <= len {
                parts.push(pairwise_abs_sum(&self.coeffs[start..end]));
            } else {
                parts.push(
                    pairwise_abs_sum(&self.coeffs[start..]) + pairwise_abs_sum(&self.coeffs[..end - len]),
                );
            }
        }
        self.scale.norm() * pairwise_sum(&parts)
    }

    /// Upper bound on `sum_{|x| > r} |w_x| / (1 + x^2)`.
    pub fn tail_mass(&self, radius: f64) -> f64 {
        let v = self.period_variation();
        if v == 0.0 {
            return 0.0;
        }
        let r = radius.max(0.0);
        let m = self.period as f64;
        2.0 * v * (1.0 / (1.0 + r * r) + (std::f64::consts::FRAC_PI_2 - r.atan()) / m)
    }

    /// Whether the two underlying lattices share any point.
    pub fn lattice_meets(&self, other: &PeriodicLatticeMeasure) -> bool {
        let l = self.period.lcm(&other.period);
        let d = (&self.shift - &other.shift) * rational::int(l as i64);
        rational::is_integer(&d)
    }

    pub fn lattice_contains(&self, x: &Rational) -> bool {
        rational::is_integer(&((x - &self.shift) * self.m_rat()))
    }
}

/// A finite sum of lattice terms plus explicit atoms.
#[derive(Clone, Debug, Default)]
pub struct MeasureExpr {
    pub terms: Vec<PeriodicLatticeMeasure>,
    pub extras: Vec<Atom>,
    /// Merged atoms with `|w| <= drop_epsilon` are removed (and `w == 0` always).
    pub drop_epsilon: f64,
}

/// Result of pairing a measure with a test function over `[-R, R]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub value: Weight,
    /// Certified bound on the contribution of atoms outside `[-R, R]`.
    pub tail_bound: f64,
    pub atoms: usize,
}

impl MeasureExpr {
    pub fn zero() -> Self {
        MeasureExpr::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        MeasureExpr {
            extras: atoms,
            ..Default::default()
        }
    }

    pub fn from_term(term: PeriodicLatticeMeasure) -> Self {
        MeasureExpr {
            terms: vec![term],
            ..Default::default()
        }
    }

    pub fn dirac(x: Rational) -> Self {
        Self::from_atoms(vec![Atom::unit(x)])
    }

    pub fn with_drop_epsilon(mut self, eps: f64) -> Self {
        self.drop_epsilon = eps;
        self
    }

    pub fn is_structurally_empty(&self) -> bool {
        self.terms.is_empty() && self.extras.is_empty()
    }

    /// Atoms in `window`, merged at coincident positions and sorted.
    pub fn atoms_in(&self, window: &Interval) -> Vec<Atom> {
        let mut raw: Vec<Atom> = Vec::new();
        for t in &self.terms {
            raw.extend(t.atoms_in(window));
        }
        raw.extend(
            self.extras
                .iter()
                .filter(|a| window.contains(&a.position))
                .cloned(),
        );
        self.merge(raw)
    }

    fn merge(&self, mut raw: Vec<Atom>) -> Vec<Atom> {
        // Stable: weights at one position are added in term order, after
        // exactly opposite pairs are removed so that m - m is exactly zero.
        raw.sort_by(|a, b| a.position.cmp(&b.position));
        let mut out: Vec<Atom> = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let mut j = i + 1;
            while j < raw.len() && raw[j].position == raw[i].position {
                j += 1;
            }
            let weight = if j == i + 1 {
                raw[i].weight
            } else {
                cancel_and_sum(raw[i..j].iter().map(|a| a.weight).collect())
            };
            out.push(Atom::new(std::mem::take(&mut raw[i].position), weight));
            i = j;
        }
        out.retain(|a| !a.weight.is_zero() && a.weight.norm() > self.drop_epsilon);
        out
    }

    /// The measure-theoretic restriction to `window`.
    pub fn restrict(&self, window: &Interval) -> Vec<Atom> {
        self.atoms_in(window)
    }

    pub fn shift(&self, h: &Rational) -> Self {
        MeasureExpr {
            terms: self.terms.iter().map(|t| t.translated(h)).collect(),
            extras: self
                .extras
                .iter()
                .map(|a| Atom::new(&a.position + h, a.weight))
                .collect(),
            drop_epsilon: self.drop_epsilon,
        }
    }

    pub fn scale(&self, s: Weight) -> Self {
        MeasureExpr {
            terms: self.terms.iter().map(|t| t.scaled(s)).collect(),
            extras: self
                .extras
                .iter()
                .map(|a| Atom::new(a.position.clone(), a.weight * s))
                .collect(),
            drop_epsilon: self.drop_epsilon,
        }
    }

    pub fn add(&self, other: &MeasureExpr) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out.extras.extend(other.extras.iter().cloned());
        out
    }

    pub fn subtract(&self, other: &MeasureExpr) -> Self {
        self.add(&other.scale(-Weight::one()))
    }

    /// `|mu|(window)`.
    ///
    /// Terms whose lattice meets no other term's lattice (and carries no
    /// loose atom) are summed in closed form; everything else is merged
    /// atom by atom so cancellations are honoured.
    pub fn variation(&self, window: &Interval) -> f64 {
        let n = self.terms.len();
        let mut brute = vec![false; n];
        for i in 0..n {
            for j in i + 1..n {
                if self.terms[i].lattice_meets(&self.terms[j]) {
                    brute[i] = true;
                    brute[j] = true;
                }
            }
            if self
                .extras
                .iter()
                .any(|a| self.terms[i].lattice_contains(&a.position))
            {
                brute[i] = true;
            }
        }
        let mut parts: Vec<f64> = self
            .terms
            .iter()
            .zip(&brute)
            .filter(|(_, b)| !**b)
            .map(|(t, _)| t.variation_closed_form(window))
            .collect();
        let mixed = MeasureExpr {
            terms: self
                .terms
                .iter()
                .zip(&brute)
                .filter(|(_, b)| **b)
                .map(|(t, _)| t.clone())
                .collect(),
            extras: self.extras.clone(),
            drop_epsilon: self.drop_epsilon,
        };
        if !mixed.is_structurally_empty() {
            parts.push(variation_brute_force(&mixed, window));
        }
        pairwise_sum(&parts)
    }

    /// `sum_{|x| <= R} w_x f(x)` with a certified bound for the rest.
    pub fn pair(&self, f: &dyn SmoothFunction, radius: &Rational) -> Result<Pairing> {
        let window = Interval::closed(-radius.clone(), radius.clone());
        let atoms = self.atoms_in(&window);
        let terms: Vec<Weight> = atoms
            .iter()
            .map(|a| a.weight * f.eval_at(&a.position, 0))
            .collect();
        let value = pairwise_sum_complex(&terms);

        let r = rational::to_f64(radius);
        let mut mass: Vec<f64> = self.terms.iter().map(|t| t.tail_mass(r)).collect();
        mass.extend(
            self.extras
                .iter()
                .filter(|a| !window.contains(&a.position))
                .map(|a| {
                    let x = rational::to_f64(&a.position);
                    a.weight.norm() / (1.0 + x * x)
                }),
        );
        let mass = pairwise_sum(&mass);
        let tail_bound = if mass == 0.0 {
            0.0
        } else {
            let sup = f.tail_bound(r).ok_or_else(|| {
                Error::NoDecayCertificate(format!("tail beyond radius {}", rational::format(radius)))
            })?;
            sup * mass
        };
        Ok(Pairing {
            value,
            tail_bound,
            atoms: atoms.len(),
        })
    }
}

/// Drops pairs `w, -w`, then adds what is left in order.
fn cancel_and_sum(mut ws: Vec<Weight>) -> Weight {
    let mut k = 0;
    while k < ws.len() {
        let w = ws[k];
        match (k + 1..ws.len()).find(|&l| ws[l] == -w) {
            Some(l) => {
                ws.remove(l);
                ws.remove(k);
            }
            None => k += 1,
        }
    }
    ws.into_iter().fold(Weight::zero(), |acc, w| acc + w)
}

/// `sum |w|` over merged atoms, ascending, pairwise.
pub fn variation_brute_force(m: &MeasureExpr, window: &Interval) -> f64 {
    let abs: Vec<f64> = m.atoms_in(window).iter().map(|a| a.weight.norm()).collect();
    pairwise_sum(&abs)
}
