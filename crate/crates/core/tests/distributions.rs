mod common;

use std::f64::consts::TAU;

use aerial_interference::analytic::quadrature::{integrate, Tolerance};
use aerial_interference::geometry::{
    pdf_phi_hat, pdf_r_hat, pdf_theta_multipair, pdf_theta_standalone, sample_multipair,
    sample_r_hat, sample_standalone, theta_multipair_max, TopologyConfig,
};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 1_000_000;
const BINS: usize = 50;

fn config(h: f64) -> TopologyConfig {
    TopologyConfig::table_defaults().with_height(h).unwrap()
}

#[test]
fn pdfs_are_normalized() {
    let tol = Tolerance::default();
    for h in [50.0, 100.0, 400.0] {
        let c = config(h);
        let (lo, hi) = ((10.0f64 / h).atan(), (100.0f64 / h).atan());
        let mass = integrate(|t| pdf_theta_standalone(t, &c), lo, hi, tol)
            .unwrap()
            .value;
        assert!((mass - 1.0).abs() < 1e-6, "θ stand-alone h={h}: {mass}");

        let mass = integrate(
            |t| pdf_theta_multipair(t, &c),
            0.0,
            theta_multipair_max(&c),
            tol,
        )
        .unwrap()
        .value;
        assert!((mass - 1.0).abs() < 1e-2, "θ multi-pair h={h}: {mass}");
    }
    let mass = integrate(pdf_phi_hat, 0.0, TAU, tol).unwrap().value;
    assert!((mass - 1.0).abs() < 1e-6);
    let b = config(100.0).rayleigh_b();
    let mass = integrate(|r| pdf_r_hat(r, b), 0.0, 40.0 * b, tol)
        .unwrap()
        .value;
    assert!((mass - 1.0).abs() < 1e-6);
}

#[test]
fn standalone_theta_histogram() {
    let c = config(100.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let thetas: Vec<f64> = (0..N)
        .map(|_| sample_standalone(&c, &mut rng).theta)
        .collect();
    let cdf = |t| theta_standalone_cdf(t, 10.0, 100.0, 100.0);
    let l1 = histogram_l1(&thetas, cdf, 0.1f64.atan(), 1f64.atan(), BINS);
    assert!(l1 < 0.01, "L1 = {l1}");
    let ks = ks_distance(&thetas, cdf);
    assert!(ks < 0.005, "KS = {ks}");
}

#[test]
fn phi_hat_histogram() {
    let c = config(100.0).with_pairs(1, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let phis: Vec<f64> = (0..N)
        .map(|_| sample_multipair(&c, &mut rng).link(0, 0).phi_hat)
        .collect();
    let l1 = histogram_l1(&phis, phi_hat_cdf, 0.0, TAU, BINS);
    assert!(l1 < 0.01, "L1 = {l1}");
    let ks = ks_distance(&phis, phi_hat_cdf);
    assert!(ks < 0.005, "KS = {ks}");
}

#[test]
fn transmitter_radius_is_uniform() {
    let c = config(100.0).with_pairs(1, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r: Vec<f64> = (0..100_000)
        .map(|_| sample_multipair(&c, &mut rng).tx[0].r)
        .collect();
    let ks = ks_distance(&r, |x| uniform_cdf(x, 10.0, 100.0));
    assert!(ks < 0.005, "KS = {ks}");
}

#[test]
fn rayleigh_fit_ks_distances() {
    let c = config(100.0);
    let b = c.rayleigh_b();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = sample_r_hat(&c, N, &mut rng);
    let ks_r = ks_distance(&r, |x| rayleigh_cdf(x, b));
    let thetas: Vec<f64> = r.iter().map(|x| (x / 100.0).atan()).collect();
    let ks_theta = ks_distance(&thetas, |t: f64| rayleigh_cdf(100.0 * t.tan(), b));
    assert!(
        ks_r < 0.02 && ks_theta < 0.02,
        "KS r̂ = {ks_r}, KS θ = {ks_theta}"
    );
}
