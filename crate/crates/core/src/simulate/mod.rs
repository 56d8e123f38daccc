//! Monte Carlo estimation of ergodic rates.
//!
//! Every trial draws fresh node positions and fresh fading, evaluates the
//! exact per-receiver rate `log2(1 + |g_ii|² / (Σ_{j≠i} |g_ij|² + σ²))` with
//! noise included, and the trials of a sweep point are averaged into a mean
//! and a standard error.
//!
//! Within a trial the random draws happen in a fixed order: node placement,
//! then the `K × K` data-phase fading matrix (row = receiver). Preamble
//! measurements for antenna selection come from a separate per-trial stream,
//! so every strategy sees the same deployments and data fading.

mod engine;

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::analytic::Dipole;
use crate::antenna::{select_antenna, AntennaKind};
use crate::channel::{db_to_linear, mean_link_gain, sample_fading, Fading, RadioConfig};
use crate::geometry::{sample_multipair, sample_standalone, Deployment, RxKind, TopologyConfig};
use crate::{Error, Result};

pub use engine::{mean_and_se, trial_rng, Execution};
use engine::{preamble_rng, run_trials};

/// Preamble symbol power. It scales both candidate measurements alike.
pub const PREAMBLE_POWER: f64 = 1.0;

/// Antenna strategy of the multi-pair transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Every transmitter uses its z dipole.
    AllZ,
    /// y dipole towards aerial receivers, z dipole towards ground receivers.
    CrossDipolePerfect,
    /// Each transmitter picks the dipole with the stronger measured preamble.
    CrossDipoleMeasured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    /// `Σ_i S_i` over all receivers.
    SumRate,
    /// Mean rate of the aerial receivers.
    AerialRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XAxis {
    HeightMeters,
    AerialPercent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Single aerial receiver at `(0, 0, h)`; the connected transmitter uses
    /// `antenna`, the interferers use z dipoles.
    Standalone {
        antenna: Dipole,
    },
    MultiPair {
        strategy: Strategy,
    },
}

/// Sweep axis of a multi-pair run. Fields of the base config that are not
/// swept stay fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Sweep {
    Heights(Vec<f64>),
    AerialCounts(Vec<usize>),
}

impl Sweep {
    fn x_axis(&self) -> XAxis {
        match self {
            Sweep::Heights(_) => XAxis::HeightMeters,
            Sweep::AerialCounts(_) => XAxis::AerialPercent,
        }
    }

    fn configs(&self, base: &TopologyConfig) -> Result<Vec<TopologyConfig>> {
        let configs = match self {
            Sweep::Heights(hs) => hs
                .iter()
                .map(|&h| base.with_height(h))
                .collect::<Result<Vec<_>>>()?,
            Sweep::AerialCounts(ks) => ks
                .iter()
                .map(|&k| base.with_aerial(k))
                .collect::<Result<Vec<_>>>()?,
        };
        if configs.is_empty() {
            return Err(Error::InvalidConfig {
                field: "sweep",
                reason: "must contain at least one point".into(),
            });
        }
        Ok(configs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    /// Height in meters or aerial share in percent, per [`RateCurve::x_axis`].
    pub x: f64,
    pub height: f64,
    pub aerial: usize,
    /// bits/s/Hz
    pub mean: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub x_axis: XAxis,
    pub scheme: Scheme,
    pub metric: Metric,
    pub fading: Fading,
    pub pairs: usize,
    pub trials: usize,
    pub seed: u64,
    pub points: Vec<RatePoint>,
}

/// Mean received powers at one height of a stand-alone sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub height: f64,
    pub desired_w: f64,
    /// Summed over the `K - 1` interferers.
    pub interference_w: f64,
}

impl PowerPoint {
    pub fn gap_db(&self) -> f64 {
        10.0 * (self.desired_w / self.interference_w).log10()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandaloneSweep {
    pub curve: RateCurve,
    pub powers: Vec<PowerPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSweep {
    pub perfect: RateCurve,
    pub measured: RateCurve,
    /// Per point, the fraction of transmitters whose measured choice equals
    /// the perfect-knowledge choice.
    pub agreement: Vec<f64>,
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig {
            field: "trials",
            reason: "must satisfy trials >= 1, got 0".into(),
        });
    }
    Ok(())
}

fn x_value(axis: XAxis, config: &TopologyConfig) -> f64 {
    match axis {
        XAxis::HeightMeters => config.height(),
        XAxis::AerialPercent => 100.0 * config.aerial() as f64 / config.pairs() as f64,
    }
}

/// Per-receiver rates from a row-major gain matrix, `gains[rx * K + tx]`.
pub fn sinr_rates(gains: &[f64], pairs: usize, noise: f64) -> Vec<f64> {
    assert_eq!(gains.len(), pairs * pairs, "gain matrix must be K x K");
    (0..pairs)
        .map(|rx| {
            let row = &gains[rx * pairs..(rx + 1) * pairs];
            let interference: f64 = row
                .iter()
                .enumerate()
                .filter(|&(tx, _)| tx != rx)
                .map(|(_, g)| g)
                .sum();
            (row[rx] / (interference + noise)).ln_1p() / LN_2
        })
        .collect()
}

fn fading_powers<R: Rng + ?Sized>(pairs: usize, fading: Fading, rng: &mut R) -> Vec<f64> {
    (0..pairs * pairs)
        .map(|_| sample_fading(fading, rng).norm_sqr())
        .collect()
}

fn gain_matrix(
    deployment: &Deployment,
    assignment: &[AntennaKind],
    fading: &[f64],
    radio: &RadioConfig,
) -> Result<Vec<f64>> {
    let k = deployment.pairs();
    if assignment.len() != k {
        return Err(Error::RatePrecondition(format!(
            "{} antenna assignments for {k} transmitters",
            assignment.len()
        )));
    }
    let mut gains = Vec::with_capacity(k * k);
    for rx in 0..k {
        for (tx, &antenna) in assignment.iter().enumerate() {
            gains.push(
                mean_link_gain(&deployment.link(tx, rx), antenna, radio)? * fading[rx * k + tx],
            );
        }
    }
    Ok(gains)
}

/// One realization of every receiver's rate for a given deployment and
/// antenna assignment, with fresh fading on every link.
pub fn trial_rates<R: Rng + ?Sized>(
    deployment: &Deployment,
    assignment: &[AntennaKind],
    radio: &RadioConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let fading = fading_powers(deployment.pairs(), radio.fading, rng);
    let gains = gain_matrix(deployment, assignment, &fading, radio)?;
    Ok(sinr_rates(
        &gains,
        deployment.pairs(),
        radio.noise_power_w(),
    ))
}

/// y dipole for aerial receivers, z dipole for ground receivers.
pub fn perfect_assignment(deployment: &Deployment) -> Vec<AntennaKind> {
    deployment
        .rx_kind
        .iter()
        .map(|kind| match kind {
            RxKind::Aerial => AntennaKind::DipoleY,
            RxKind::Ground => AntennaKind::DipoleZ,
        })
        .collect()
}

fn cn<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * (variance / 2.0).sqrt()
}

/// Preamble-based selection. Transmitter `i` sends one preamble per dipole
/// to its own receiver within one coherence interval, so both measurements
/// share the link's fading draw and differ in pattern gain and receiver noise.
pub fn measured_assignment<R: Rng + ?Sized>(
    deployment: &Deployment,
    radio: &RadioConfig,
    rng: &mut R,
) -> Result<Vec<AntennaKind>> {
    let noise = radio.noise_power_w();
    (0..deployment.pairs())
        .map(|i| {
            let link = deployment.link(i, i);
            let alpha = sample_fading(radio.fading, rng);
            let mut measure = |antenna| -> Result<(AntennaKind, f64)> {
                let amplitude = (mean_link_gain(&link, antenna, radio)? * PREAMBLE_POWER).sqrt();
                Ok((antenna, (alpha * amplitude + cn(noise, rng)).norm_sqr()))
            };
            let z = measure(AntennaKind::DipoleZ)?;
            let y = measure(AntennaKind::DipoleY)?;
            select_antenna([z, y])
        })
        .collect()
}

fn metric_value(metric: Metric, rates: &[f64], aerial: usize) -> f64 {
    match metric {
        Metric::SumRate => rates.iter().sum(),
        Metric::AerialRate => rates[..aerial].iter().sum::<f64>() / aerial as f64,
    }
}

fn check_metric(metric: Metric, configs: &[TopologyConfig]) -> Result<()> {
    if metric == Metric::AerialRate && configs.iter().any(|c| c.aerial() == 0) {
        return Err(Error::InvalidConfig {
            field: "k_arl",
            reason: "the aerial-rate metric needs k_arl >= 1".into(),
        });
    }
    Ok(())
}

/// Stand-alone scenario swept over `heights`.
pub fn run_standalone_sweep(
    config: &TopologyConfig,
    radio: &RadioConfig,
    antenna: Dipole,
    heights: &[f64],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<StandaloneSweep> {
    check_trials(trials)?;
    radio.validate()?;
    let configs = Sweep::Heights(heights.to_vec()).configs(config)?;
    let k = config.pairs();
    if k == 0 {
        return Err(Error::InvalidConfig {
            field: "k",
            reason: "must satisfy K >= 1, got 0".into(),
        });
    }
    let noise = radio.noise_power_w();
    let mut points = Vec::with_capacity(configs.len());
    let mut powers = Vec::with_capacity(configs.len());
    for (p, cfg) in configs.iter().enumerate() {
        let samples = run_trials(exec, trials, |t| {
            let mut rng = trial_rng(seed, p, t);
            let links: Vec<_> = (0..k).map(|_| sample_standalone(cfg, &mut rng)).collect();
            let mut desired = 0.0;
            let mut interference = 0.0;
            for (j, link) in links.iter().enumerate() {
                let kind = if j == 0 {
                    antenna.into()
                } else {
                    AntennaKind::DipoleZ
                };
                let g = mean_link_gain(link, kind, radio)?
                    * sample_fading(radio.fading, &mut rng).norm_sqr();
                if j == 0 {
                    desired = g;
                } else {
                    interference += g;
                }
            }
            let rate = (desired / (interference + noise)).ln_1p() / LN_2;
            Ok([rate, desired, interference])
        })?;
        let column = |c: usize| samples.iter().map(|s| s[c]).collect::<Vec<_>>();
        let (mean, se) = mean_and_se(&column(0));
        points.push(RatePoint {
            x: cfg.height(),
            height: cfg.height(),
            aerial: 1,
            mean,
            se,
        });
        powers.push(PowerPoint {
            height: cfg.height(),
            desired_w: mean_and_se(&column(1)).0,
            interference_w: mean_and_se(&column(2)).0,
        });
    }
    Ok(StandaloneSweep {
        curve: RateCurve {
            x_axis: XAxis::HeightMeters,
            scheme: Scheme::Standalone { antenna },
            metric: Metric::AerialRate,
            fading: radio.fading,
            pairs: k,
            trials,
            seed,
            points,
        },
        powers,
    })
}

/// Multi-pair scenario under `strategy`, swept over heights or aerial counts.
#[allow(clippy::too_many_arguments)]
pub fn run_multipair_sweep(
    config: &TopologyConfig,
    radio: &RadioConfig,
    strategy: Strategy,
    sweep: &Sweep,
    metric: Metric,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<RateCurve> {
    check_trials(trials)?;
    radio.validate()?;
    let configs = sweep.configs(config)?;
    check_metric(metric, &configs)?;
    let x_axis = sweep.x_axis();
    let mut points = Vec::with_capacity(configs.len());
    for (p, cfg) in configs.iter().enumerate() {
        let values = run_trials(exec, trials, |t| {
            let mut rng = trial_rng(seed, p, t);
            let deployment = sample_multipair(cfg, &mut rng);
            let assignment = match strategy {
                Strategy::AllZ => vec![AntennaKind::DipoleZ; cfg.pairs()],
                Strategy::CrossDipolePerfect => perfect_assignment(&deployment),
                Strategy::CrossDipoleMeasured => {
                    measured_assignment(&deployment, radio, &mut preamble_rng(seed, p, t))?
                }
            };
            let rates = trial_rates(&deployment, &assignment, radio, &mut rng)?;
            Ok(metric_value(metric, &rates, cfg.aerial()))
        })?;
        let (mean, se) = mean_and_se(&values);
        points.push(RatePoint {
            x: x_value(x_axis, cfg),
            height: cfg.height(),
            aerial: cfg.aerial(),
            mean,
            se,
        });
    }
    Ok(RateCurve {
        x_axis,
        scheme: Scheme::MultiPair { strategy },
        metric,
        fading: radio.fading,
        pairs: config.pairs(),
        trials,
        seed,
        points,
    })
}

/// [`run_multipair_sweep`] with Rician fading of K-factor `kappa_db` on
/// every link.
#[allow(clippy::too_many_arguments)]
pub fn run_rician_sweep(
    config: &TopologyConfig,
    radio: &RadioConfig,
    kappa_db: f64,
    strategy: Strategy,
    sweep: &Sweep,
    metric: Metric,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<RateCurve> {
    let radio = radio.with_fading(Fading::Rician {
        kappa: db_to_linear(kappa_db),
    });
    run_multipair_sweep(config, &radio, strategy, sweep, metric, trials, seed, exec)
}

/// Perfect-knowledge and measured selection on shared deployments and data
/// fading.
#[allow(clippy::too_many_arguments)]
pub fn run_measured_selection(
    config: &TopologyConfig,
    radio: &RadioConfig,
    sweep: &Sweep,
    metric: Metric,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<SelectionSweep> {
    check_trials(trials)?;
    radio.validate()?;
    let configs = sweep.configs(config)?;
    check_metric(metric, &configs)?;
    let x_axis = sweep.x_axis();
    let mut perfect = Vec::with_capacity(configs.len());
    let mut measured = Vec::with_capacity(configs.len());
    let mut agreement = Vec::with_capacity(configs.len());
    for (p, cfg) in configs.iter().enumerate() {
        let samples = run_trials(exec, trials, |t| {
            let mut rng = trial_rng(seed, p, t);
            let deployment = sample_multipair(cfg, &mut rng);
            let fading = fading_powers(cfg.pairs(), radio.fading, &mut rng);
            let known = perfect_assignment(&deployment);
            let chosen = measured_assignment(&deployment, radio, &mut preamble_rng(seed, p, t))?;
            let noise = radio.noise_power_w();
            let rates_known = sinr_rates(
                &gain_matrix(&deployment, &known, &fading, radio)?,
                cfg.pairs(),
                noise,
            );
            let rates_chosen = sinr_rates(
                &gain_matrix(&deployment, &chosen, &fading, radio)?,
                cfg.pairs(),
                noise,
            );
            let agree = known.iter().zip(&chosen).filter(|(a, b)| a == b).count() as f64
                / cfg.pairs() as f64;
            Ok([
                metric_value(metric, &rates_known, cfg.aerial()),
                metric_value(metric, &rates_chosen, cfg.aerial()),
                agree,
            ])
        })?;
        let column = |c: usize| samples.iter().map(|s| s[c]).collect::<Vec<_>>();
        let point = |(mean, se): (f64, f64)| RatePoint {
            x: x_value(x_axis, cfg),
            height: cfg.height(),
            aerial: cfg.aerial(),
            mean,
            se,
        };
        perfect.push(point(mean_and_se(&column(0))));
        measured.push(point(mean_and_se(&column(1))));
        agreement.push(mean_and_se(&column(2)).0);
    }
    let curve = |strategy, points| RateCurve {
        x_axis,
        scheme: Scheme::MultiPair { strategy },
        metric,
        fading: radio.fading,
        pairs: config.pairs(),
        trials,
        seed,
        points,
    };
    Ok(SelectionSweep {
        perfect: curve(Strategy::CrossDipolePerfect, perfect),
        measured: curve(Strategy::CrossDipoleMeasured, measured),
        agreement,
    })
}
