//! Unnormalized discrete Fourier transforms.
//!
//! `dft(c)_m = sum_j c_j e^{-2 pi i j m / L}`. Planned transforms run in
//! `O(L log L)` for every length; [`dft_naive`] is the direct sum.

use std::f64::consts::PI;
use std::sync::Arc;

use num::{Complex, Zero};
use rustfft::{Fft, FftPlanner};

pub type C64 = Complex<f64>;

/// Forward and inverse plans for one length.
#[derive(Clone)]
pub struct DftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl DftPlan {
    pub fn new(len: usize) -> Self {
        assert!(len >= 1, "transform length must be positive");
        let mut planner = FftPlanner::new();
        DftPlan {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place forward transform.
    pub fn forward(&self, buf: &mut [C64]) {
        assert_eq!(buf.len(), self.len);
        self.forward.process(buf);
    }

    /// In-place `sum_m z_m e^{+2 pi i j m / L}` (no `1/L` factor).
    pub fn adjoint(&self, buf: &mut [C64]) {
        assert_eq!(buf.len(), self.len);
        self.inverse.process(buf);
    }

    /// In-place inverse, `1/L` included.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.adjoint(buf);
        let s = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }
}

pub fn dft(c: &[C64]) -> Vec<C64> {
    let mut out = c.to_vec();
    if !out.is_empty() {
        DftPlan::new(out.len()).forward(&mut out);
    }
    out
}

pub fn idft(c: &[C64]) -> Vec<C64> {
    let mut out = c.to_vec();
    if !out.is_empty() {
        DftPlan::new(out.len()).inverse(&mut out);
    }
    out
}

/// Direct `O(L^2)` evaluation with exactly reduced twiddle indices.
pub fn dft_naive(c: &[C64]) -> Vec<C64> {
    let l = c.len();
    (0..l)
        .map(|m| {
            let mut acc = C64::zero();
            for (j, x) in c.iter().enumerate() {
                let idx = ((j as u128 * m as u128) % l as u128) as f64;
                acc += x * C64::from_polar(1.0, -2.0 * PI * idx / l as f64);
            }
            acc
        })
        .collect()
}
