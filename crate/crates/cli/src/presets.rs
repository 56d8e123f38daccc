//! One runner per preset; each returns the tables of its figure panels.

use aerial_interference::analytic::{
    expected_gain_multipair, expected_gain_standalone, rate_multipair_aerial, rate_standalone_y,
    rate_standalone_z, Dipole, GainMethod,
};
use aerial_interference::channel::{watts_to_dbm, Fading};
use aerial_interference::geometry::{
    pdf_phi_hat, pdf_r_hat, pdf_theta_multipair, pdf_theta_standalone, sample_multipair,
    sample_r_hat, sample_standalone, theta_multipair_max, TopologyConfig,
};
use aerial_interference::simulate::{
    run_measured_selection, run_multipair_sweep, run_standalone_sweep, Execution, Metric,
    RateCurve, Strategy, Sweep,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentSpec, Preset};
use crate::error::CliError;
use crate::output::Table;

pub const HISTOGRAM_BINS: usize = 50;

type Tables = Result<Vec<Table>, CliError>;

pub fn run(spec: &ExperimentSpec) -> Tables {
    match spec.preset {
        Preset::Fig3PdfTheta => pdf_theta(spec),
        Preset::Fig5Pdfs => pdfs_multipair(spec),
        Preset::Fig6GainStandalone => gains(spec, false),
        Preset::Fig7GainMultipair => gains(spec, true),
        Preset::Fig7RateStandalone => rate_standalone(spec),
        Preset::Fig8RateMultipair => rate_multipair(spec),
        Preset::Fig9Sumrate => sum_rate(spec),
        Preset::Fig9bSumrateVsPercent => sum_rate_vs_percent(spec),
        Preset::Fig10AntennaSelection => antenna_selection(spec),
        Preset::Fig11Rician => sum_rate(spec),
        Preset::Custom => custom(spec),
    }
}

fn exec(spec: &ExperimentSpec) -> Execution {
    Execution::Parallel {
        threads: spec.threads,
    }
}

fn at_height(spec: &ExperimentSpec, h: f64) -> Result<TopologyConfig, CliError> {
    Ok(spec.topology.with_height(h)?)
}

pub fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::AllZ => "all-z",
        Strategy::CrossDipolePerfect => "cross-dipole-perfect",
        Strategy::CrossDipoleMeasured => "cross-dipole-measured",
    }
}

fn fading_name(f: Fading) -> &'static str {
    match f {
        Fading::Rayleigh => "rayleigh",
        Fading::Rician { .. } => "rician",
    }
}

fn antenna_name(d: Dipole) -> &'static str {
    match d {
        Dipole::Z => "z",
        Dipole::Y => "y",
    }
}

/// Density histogram on `bins` equal bins over `[lo, hi]`; samples outside
/// are counted in the normalization but not binned.
fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64)> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &s in samples {
        if (lo..=hi).contains(&s) {
            counts[(((s - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let n = samples.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (lo + (i as f64 + 0.5) * width, c as f64 / (n * width)))
        .collect()
}

fn histogram_table(
    name: String,
    columns: &[&'static str],
    hist: &[(f64, f64)],
    pdf: impl Fn(f64) -> f64,
) -> Table {
    let mut t = Table::new(name, columns);
    for &(x, density) in hist {
        t.push(vec![x.into(), density.into(), x.into(), pdf(x).into()]);
    }
    t
}

fn pdf_theta(spec: &ExperimentSpec) -> Tables {
    let c = at_height(spec, spec.heights[0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let thetas: Vec<f64> = (0..spec.samples)
        .map(|_| sample_standalone(&c, &mut rng).theta)
        .collect();
    let lo = (c.m0() / c.height()).atan();
    let hi = (c.m_max() / c.height()).atan();
    let hist = histogram(&thetas, lo, hi, HISTOGRAM_BINS);
    Ok(vec![histogram_table(
        spec.preset.name(),
        &["theta_bin_center", "density", "theta", "pdf"],
        &hist,
        |t| pdf_theta_standalone(t, &c),
    )])
}

fn pdfs_multipair(spec: &ExperimentSpec) -> Tables {
    let c = at_height(spec, spec.heights[0])?;
    let name = spec.preset.name();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let pair = c.with_pairs(1, 1)?;
    let phis: Vec<f64> = (0..spec.samples)
        .map(|_| sample_multipair(&pair, &mut rng).link(0, 0).phi_hat)
        .collect();
    let r_hat = sample_r_hat(&c, spec.samples, &mut rng);
    let thetas: Vec<f64> = r_hat.iter().map(|r| (r / c.height()).atan()).collect();
    let b = c.rayleigh_b();

    let phi = histogram_table(
        format!("{name}-phi_hat"),
        &["phi_hat_bin_center", "density", "phi_hat", "pdf"],
        &histogram(&phis, 0.0, std::f64::consts::TAU, HISTOGRAM_BINS),
        pdf_phi_hat,
    );
    let r = histogram_table(
        format!("{name}-r_hat"),
        &["r_hat_bin_center", "density", "r_hat", "pdf_fitted"],
        &histogram(&r_hat, 0.0, 2.0 * c.m_max(), HISTOGRAM_BINS),
        |x| pdf_r_hat(x, b),
    );
    let theta = histogram_table(
        format!("{name}-theta"),
        &["theta_bin_center", "density", "theta", "pdf_fitted"],
        &histogram(&thetas, 0.0, theta_multipair_max(&c), HISTOGRAM_BINS),
        |t| pdf_theta_multipair(t, &c),
    );
    Ok(vec![phi, r, theta])
}

fn gains(spec: &ExperimentSpec, multipair: bool) -> Tables {
    let mut t = Table::new(
        spec.preset.name(),
        &[
            "h",
            "zeta_z_exact",
            "zeta_z_closed_form",
            "zeta_y_exact",
            "zeta_y_closed_form",
        ],
    );
    for &h in &spec.heights {
        let c = at_height(spec, h)?;
        let mut row = vec![h.into()];
        for d in [Dipole::Z, Dipole::Y] {
            for m in [GainMethod::QuadratureExact, GainMethod::TaylorClosedForm] {
                let g = if multipair {
                    expected_gain_multipair(d, &c, &spec.radio, m)?
                } else {
                    expected_gain_standalone(d, &c, &spec.radio, m)?
                };
                row.push(g.value.into());
            }
        }
        t.push(row);
    }
    Ok(vec![t])
}

fn rate_standalone(spec: &ExperimentSpec) -> Tables {
    let name = spec.preset.name();
    let k = spec.topology.pairs();
    let mut rates = Table::new(
        format!("{name}-rate"),
        &[
            "h",
            "antenna",
            "rate_mean",
            "rate_se",
            "analytic_exact",
            "analytic_closed_form",
        ],
    );
    let mut powers = Table::new(
        format!("{name}-power"),
        &["h", "antenna", "desired_dbm", "interference_dbm", "gap_db"],
    );
    for d in [Dipole::Z, Dipole::Y] {
        let sweep = run_standalone_sweep(
            &spec.topology,
            &spec.radio,
            d,
            &spec.heights,
            spec.trials,
            spec.seed,
            exec(spec),
        )?;
        for (p, pw) in sweep.curve.points.iter().zip(&sweep.powers) {
            let c = at_height(spec, p.height)?;
            let (exact, closed) = match d {
                Dipole::Z if k >= 2 => (rate_standalone_z(k)?, rate_standalone_z(k)?),
                Dipole::Y if k >= 2 => (
                    rate_standalone_y(k, &c, &spec.radio, GainMethod::QuadratureExact)?,
                    rate_standalone_y(k, &c, &spec.radio, GainMethod::TaylorClosedForm)?,
                ),
                _ => (f64::NAN, f64::NAN),
            };
            rates.push(vec![
                p.height.into(),
                antenna_name(d).into(),
                p.mean.into(),
                p.se.into(),
                exact.into(),
                closed.into(),
            ]);
            powers.push(vec![
                p.height.into(),
                antenna_name(d).into(),
                watts_to_dbm(pw.desired_w).into(),
                watts_to_dbm(pw.interference_w).into(),
                pw.gap_db().into(),
            ]);
        }
    }
    Ok(vec![rates, powers])
}

fn height_sweep(
    spec: &ExperimentSpec,
    strategy: Strategy,
    k_arl: usize,
    metric: Metric,
) -> Result<RateCurve, CliError> {
    Ok(run_multipair_sweep(
        &spec.topology.with_aerial(k_arl)?,
        &spec.radio,
        strategy,
        &Sweep::Heights(spec.heights.clone()),
        metric,
        spec.trials,
        spec.seed,
        exec(spec),
    )?)
}

fn rate_multipair(spec: &ExperimentSpec) -> Tables {
    let mut t = Table::new(
        spec.preset.name(),
        &[
            "h",
            "k_arl",
            "rate_mean",
            "rate_se",
            "analytic_exact",
            "analytic_closed_form",
            "strategy",
        ],
    );
    let k = spec.topology.pairs();
    for &k_arl in &spec.aerial_counts {
        let curve = height_sweep(spec, spec.strategy, k_arl, Metric::AerialRate)?;
        for p in &curve.points {
            let c = at_height(spec, p.height)?;
            let analytic = |m| {
                if k >= 2 {
                    rate_multipair_aerial(k - k_arl, k_arl, &c, &spec.radio, m)
                } else {
                    Ok(f64::NAN)
                }
            };
            t.push(vec![
                p.height.into(),
                k_arl.into(),
                p.mean.into(),
                p.se.into(),
                analytic(GainMethod::QuadratureExact)?.into(),
                analytic(GainMethod::TaylorClosedForm)?.into(),
                strategy_name(spec.strategy).into(),
            ]);
        }
    }
    Ok(vec![t])
}

fn sum_rate(spec: &ExperimentSpec) -> Tables {
    let mut t = Table::new(
        spec.preset.name(),
        &[
            "h",
            "k_arl",
            "sum_rate_mean",
            "sum_rate_se",
            "strategy",
            "fading",
        ],
    );
    let mut strategies = vec![spec.strategy];
    if spec.preset == Preset::Fig9Sumrate && spec.strategy != Strategy::AllZ {
        strategies.push(Strategy::AllZ);
    }
    for &k_arl in &spec.aerial_counts {
        for &s in &strategies {
            let curve = height_sweep(spec, s, k_arl, Metric::SumRate)?;
            for p in &curve.points {
                t.push(vec![
                    p.height.into(),
                    k_arl.into(),
                    p.mean.into(),
                    p.se.into(),
                    strategy_name(s).into(),
                    fading_name(curve.fading).into(),
                ]);
            }
        }
    }
    Ok(vec![t])
}

fn sum_rate_vs_percent(spec: &ExperimentSpec) -> Tables {
    let name = spec.preset.name();
    let mut t = Table::new(
        name.clone(),
        &[
            "h",
            "aerial_percent",
            "k_arl",
            "sum_rate_mean",
            "sum_rate_se",
            "strategy",
        ],
    );
    let mut peaks = Table::new(
        format!("{name}-peaks"),
        &["h", "peak_percent", "peak_k_arl"],
    );
    for &h in &spec.heights {
        let curve = run_multipair_sweep(
            &at_height(spec, h)?,
            &spec.radio,
            spec.strategy,
            &Sweep::AerialCounts(spec.aerial_counts.clone()),
            Metric::SumRate,
            spec.trials,
            spec.seed,
            exec(spec),
        )?;
        for p in &curve.points {
            t.push(vec![
                h.into(),
                p.x.into(),
                p.aerial.into(),
                p.mean.into(),
                p.se.into(),
                strategy_name(spec.strategy).into(),
            ]);
        }
        let best = curve
            .points
            .iter()
            .max_by(|a, b| a.mean.total_cmp(&b.mean))
            .expect("sweep has points");
        peaks.push(vec![h.into(), best.x.into(), best.aerial.into()]);
    }
    Ok(vec![t, peaks])
}

fn antenna_selection(spec: &ExperimentSpec) -> Tables {
    let name = spec.preset.name();
    let mut t = Table::new(
        name.clone(),
        &["h", "k_arl", "sum_rate_mean", "sum_rate_se", "strategy"],
    );
    let mut agreement = Table::new(format!("{name}-agreement"), &["h", "k_arl", "agreement"]);
    for &k_arl in &spec.aerial_counts {
        let s = run_measured_selection(
            &spec.topology.with_aerial(k_arl)?,
            &spec.radio,
            &Sweep::Heights(spec.heights.clone()),
            Metric::SumRate,
            spec.trials,
            spec.seed,
            exec(spec),
        )?;
        for curve in [&s.perfect, &s.measured] {
            let strategy = match curve.scheme {
                aerial_interference::simulate::Scheme::MultiPair { strategy } => strategy,
                aerial_interference::simulate::Scheme::Standalone { .. } => {
                    unreachable!("multi-pair run")
                }
            };
            for p in &curve.points {
                t.push(vec![
                    p.height.into(),
                    k_arl.into(),
                    p.mean.into(),
                    p.se.into(),
                    strategy_name(strategy).into(),
                ]);
            }
        }
        for (p, a) in s.perfect.points.iter().zip(&s.agreement) {
            agreement.push(vec![p.height.into(), k_arl.into(), (*a).into()]);
        }
    }
    Ok(vec![t, agreement])
}

fn custom(spec: &ExperimentSpec) -> Tables {
    let mut t = Table::new(
        spec.preset.name(),
        &[
            "h",
            "k_arl",
            "aerial_percent",
            "metric",
            "mean",
            "se",
            "strategy",
            "fading",
        ],
    );
    let metric = match spec.metric {
        Metric::SumRate => "sum-rate",
        Metric::AerialRate => "aerial-rate",
    };
    for &k_arl in &spec.aerial_counts {
        let curve = height_sweep(spec, spec.strategy, k_arl, spec.metric)?;
        for p in &curve.points {
            t.push(vec![
                p.height.into(),
                k_arl.into(),
                (100.0 * k_arl as f64 / spec.topology.pairs() as f64).into(),
                metric.into(),
                p.mean.into(),
                p.se.into(),
                strategy_name(spec.strategy).into(),
                fading_name(spec.radio.fading).into(),
            ]);
        }
    }
    Ok(vec![t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_density_integrates_to_inside_mass() {
        let samples: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).chain([5.0]).collect();
        let h = histogram(&samples, 0.0, 1.0, 10);
        let mass: f64 = h.iter().map(|(_, d)| d * 0.1).sum();
        assert!((mass - 1000.0 / 1001.0).abs() < 1e-12);
        assert!((h[0].0 - 0.05).abs() < 1e-15);
    }
}
