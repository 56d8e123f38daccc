#![allow(dead_code)]

/// `Σ_bins |empirical mass - model mass|` over `bins` equal bins on
/// `[lo, hi]`, i.e. the L1 distance between the histogram density and the
/// bin-averaged model density. Model mass per bin comes from `cdf`.
pub fn histogram_l1(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    bins: usize,
) -> f64 {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut outside = 0usize;
    for &s in samples {
        if s < lo || s > hi {
            outside += 1;
            continue;
        }
        let b = (((s - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let n = samples.len() as f64;
    let mut l1 = outside as f64 / n;
    for (b, &c) in counts.iter().enumerate() {
        let a = lo + b as f64 * width;
        let model = cdf(a + width) - cdf(a);
        l1 += (c as f64 / n - model).abs();
    }
    l1
}

/// Kolmogorov-Smirnov distance between the sample and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

pub fn theta_standalone_cdf(theta: f64, m0: f64, m_max: f64, h: f64) -> f64 {
    ((h * theta.tan() - m0) / (m_max - m0)).clamp(0.0, 1.0)
}

pub fn phi_hat_cdf(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let x = x.clamp(0.0, TAU);
    (TAU * x - x * x / 2.0) / (2.0 * PI * PI)
}

pub fn rayleigh_cdf(r: f64, b: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        1.0 - (-r * r / (2.0 * b * b)).exp()
    }
}

pub fn uniform_cdf(x: f64, lo: f64, hi: f64) -> f64 {
    ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
}
