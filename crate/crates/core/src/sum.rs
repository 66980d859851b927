//! Pairwise (binary-tree) accumulation.

use num::Complex;

const LEAF: usize = 16;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn pairwise_sum_complex(xs: &[Complex<f64>]) -> Complex<f64> {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum_complex(a) + pairwise_sum_complex(b)
}

/// Pairwise sum of `|x|` over a slice.
pub fn pairwise_abs_sum(xs: &[Complex<f64>]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().map(|z| z.norm()).sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_abs_sum(a) + pairwise_abs_sum(b)
}
