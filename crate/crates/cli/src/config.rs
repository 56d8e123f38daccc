//! Experiment configuration: preset defaults, JSON file overrides and
//! command-line overrides, resolved into an [`ExperimentSpec`].

use std::path::PathBuf;

use aerial_interference::channel::{db_to_linear, dbm_to_watts, watts_to_dbm, Fading, RadioConfig};
use aerial_interference::geometry::TopologyConfig;
use aerial_interference::simulate::{Metric, Strategy};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest accepted pair count.
pub const MAX_PAIRS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Elevation-angle histogram and density, stand-alone receiver.
    Fig3PdfTheta,
    /// Relative azimuth, separation and multi-pair elevation densities.
    Fig5Pdfs,
    /// Expected gains vs height, stand-alone receiver.
    Fig6GainStandalone,
    /// Expected gains vs height, multi-pair network (the panel laid out like fig6).
    Fig7GainMultipair,
    /// Stand-alone rate and received powers vs height, K = 5.
    Fig7RateStandalone,
    /// Per-aerial-receiver rate vs height for several aerial counts.
    Fig8RateMultipair,
    /// Sum rate vs height, proposed assignment against all-z.
    Fig9Sumrate,
    /// Sum rate vs share of aerial receivers at fixed heights.
    Fig9bSumrateVsPercent,
    /// Measured against perfect-knowledge antenna selection.
    Fig10AntennaSelection,
    /// Sum rate vs height under Rician fading.
    Fig11Rician,
    /// Multi-pair sweep driven entirely by the config file.
    Custom,
}

impl Preset {
    pub fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_owned()
    }

    fn is_distribution(self) -> bool {
        matches!(self, Preset::Fig3PdfTheta | Preset::Fig5Pdfs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FadingName {
    Rayleigh,
    Rician,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    AllZ,
    CrossDipolePerfect,
    CrossDipoleMeasured,
}

impl From<StrategyName> for Strategy {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::AllZ => Strategy::AllZ,
            StrategyName::CrossDipolePerfect => Strategy::CrossDipolePerfect,
            StrategyName::CrossDipoleMeasured => Strategy::CrossDipoleMeasured,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    SumRate,
    AerialRate,
}

impl From<MetricName> for Metric {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::SumRate => Metric::SumRate,
            MetricName::AerialRate => Metric::AerialRate,
        }
    }
}

/// Keys accepted in the JSON config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub m0: Option<f64>,
    pub m_max: Option<f64>,
    pub h: Option<f64>,
    pub k: Option<usize>,
    pub k_arl: Option<usize>,
    pub rayleigh_b: Option<f64>,
    pub tx_power_dbm: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub fading: Option<FadingName>,
    pub kappa_db: Option<f64>,
    pub heights: Option<Vec<f64>>,
    pub aerial_counts: Option<Vec<usize>>,
    pub strategy: Option<StrategyName>,
    pub metric: Option<MetricName>,
    pub trials: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        if bytes.iter().all(u8::is_ascii_whitespace) {
            return Ok(Self::default());
        }
        serde_json::from_slice(bytes).map_err(|e| CliError::Config(format!("config file: {e}")))
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub topology: TopologyConfig,
    pub radio: RadioConfig,
    pub tx_power_dbm: f64,
    pub kappa_db: f64,
    pub heights: Vec<f64>,
    pub aerial_counts: Vec<usize>,
    pub strategy: Strategy,
    pub metric: Metric,
    /// Monte Carlo trials per sweep point.
    pub trials: usize,
    /// Histogram sample count of the distribution presets.
    pub samples: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub format: Format,
    pub output_dir: PathBuf,
}

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_KAPPA_DB: f64 = 10.0;

fn height_grid(step: f64) -> Vec<f64> {
    let n = (350.0 / step).round() as usize;
    (0..=n).map(|i| 50.0 + step * i as f64).collect()
}

struct PresetDefaults {
    pairs: usize,
    aerial: usize,
    heights: Vec<f64>,
    aerial_counts: Vec<usize>,
    fading: FadingName,
    strategy: StrategyName,
    metric: MetricName,
}

fn preset_defaults(preset: Preset) -> PresetDefaults {
    let mut d = PresetDefaults {
        pairs: 10,
        aerial: 1,
        heights: height_grid(50.0),
        aerial_counts: vec![1, 3, 5, 7],
        fading: FadingName::Rayleigh,
        strategy: StrategyName::CrossDipolePerfect,
        metric: MetricName::SumRate,
    };
    match preset {
        Preset::Fig3PdfTheta | Preset::Fig5Pdfs => d.heights = vec![100.0],
        Preset::Fig6GainStandalone | Preset::Fig7GainMultipair => {
            d.pairs = 5;
            d.heights = height_grid(10.0);
        }
        Preset::Fig7RateStandalone => d.pairs = 5,
        Preset::Fig9bSumrateVsPercent => d.heights = vec![50.0, 150.0, 400.0],
        Preset::Fig10AntennaSelection => d.aerial_counts = vec![5],
        Preset::Fig11Rician => d.fading = FadingName::Rician,
        Preset::Fig8RateMultipair => d.metric = MetricName::AerialRate,
        Preset::Fig9Sumrate | Preset::Custom => {}
    }
    d
}

fn range_error(key: &str, range: &str, got: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("`{key}` must be in {range}, got {got}"))
}

fn check_positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(range_error(key, "(0, inf)", v))
    }
}

/// Merges preset defaults, file values and flags (in increasing precedence)
/// and validates the result.
pub fn resolve(
    preset: Preset,
    file: &FileConfig,
    flags: &FlagOverrides,
    format: Format,
    output_dir: PathBuf,
) -> Result<ExperimentSpec, CliError> {
    let d = preset_defaults(preset);

    let m0 = check_positive("m0", file.m0.unwrap_or(10.0))?;
    let m_max = file.m_max.unwrap_or(100.0);
    if !(m_max.is_finite() && m_max > m0) {
        return Err(CliError::Config(format!(
            "`m_max` must satisfy m0 < m_max, got m0 = {m0}, m_max = {m_max}"
        )));
    }
    let pairs = file.k.unwrap_or(d.pairs);
    if !(1..=MAX_PAIRS).contains(&pairs) {
        return Err(range_error("k", &format!("1..={MAX_PAIRS}"), pairs));
    }
    let aerial = file.k_arl.unwrap_or(d.aerial.min(pairs));
    if aerial > pairs {
        return Err(range_error("k_arl", &format!("0..={pairs} (k)"), aerial));
    }
    let heights = match (&file.heights, file.h) {
        (Some(hs), _) => hs.clone(),
        (None, Some(h)) => vec![h],
        (None, None) => d.heights,
    };
    if heights.is_empty() {
        return Err(CliError::Config(
            "`heights` must list at least one height".into(),
        ));
    }
    for &h in &heights {
        check_positive("heights", h)?;
    }
    let base_height = file.h.unwrap_or(heights[0]);
    check_positive("h", base_height)?;

    let aerial_counts = match &file.aerial_counts {
        Some(ks) => ks.clone(),
        None if file.k_arl.is_some() => vec![aerial],
        None => d
            .aerial_counts
            .into_iter()
            .filter(|&k| k <= pairs)
            .collect(),
    };
    if aerial_counts.is_empty() {
        return Err(CliError::Config(
            "`aerial_counts` must list at least one count".into(),
        ));
    }
    if let Some(&bad) = aerial_counts.iter().find(|&&k| k > pairs) {
        return Err(range_error(
            "aerial_counts",
            &format!("0..={pairs} (k)"),
            bad,
        ));
    }

    let mut topology = TopologyConfig::new(m0, m_max, base_height, pairs, aerial)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(b) = file.rayleigh_b {
        topology = topology
            .with_rayleigh_b(check_positive("rayleigh_b", b)?)
            .map_err(|e| CliError::Config(e.to_string()))?;
    }

    let tx_power_dbm = file
        .tx_power_dbm
        .unwrap_or(watts_to_dbm(RadioConfig::default().tx_power_w));
    if !(tx_power_dbm.is_finite() && (-100.0..=80.0).contains(&tx_power_dbm)) {
        return Err(range_error("tx_power_dbm", "[-100, 80]", tx_power_dbm));
    }
    let kappa_db = file.kappa_db.unwrap_or(DEFAULT_KAPPA_DB);
    if !(kappa_db.is_finite() && (-50.0..=50.0).contains(&kappa_db)) {
        return Err(range_error("kappa_db", "[-50, 50]", kappa_db));
    }
    let fading = match file.fading.unwrap_or(d.fading) {
        FadingName::Rayleigh => Fading::Rayleigh,
        FadingName::Rician => Fading::Rician {
            kappa: db_to_linear(kappa_db),
        },
    };
    let radio = RadioConfig {
        tx_power_w: dbm_to_watts(tx_power_dbm),
        carrier_hz: check_positive("carrier_hz", file.carrier_hz.unwrap_or(800e6))?,
        bandwidth_hz: check_positive("bandwidth_hz", file.bandwidth_hz.unwrap_or(200e3))?,
        fading,
    };

    let metric: Metric = file.metric.unwrap_or(d.metric).into();
    if metric == Metric::AerialRate && aerial_counts.contains(&0) {
        return Err(range_error(
            "aerial_counts",
            "1..=k for the aerial-rate metric",
            0,
        ));
    }

    let trials = flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(range_error("trials", "1..", 0));
    }
    let samples = if preset.is_distribution() {
        flags.trials.or(file.samples).unwrap_or(DEFAULT_SAMPLES)
    } else {
        file.samples.unwrap_or(DEFAULT_SAMPLES)
    };
    if samples == 0 {
        return Err(range_error("samples", "1..", 0));
    }
    if flags.threads == Some(0) {
        return Err(range_error("threads", "1..", 0));
    }

    Ok(ExperimentSpec {
        preset,
        topology,
        radio,
        tx_power_dbm,
        kappa_db,
        heights,
        aerial_counts,
        strategy: file.strategy.unwrap_or(d.strategy).into(),
        metric,
        trials,
        samples,
        seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        threads: flags.threads,
        format,
        output_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_json(preset: Preset, json: &str) -> Result<ExperimentSpec, CliError> {
        let file = FileConfig::parse(json.as_bytes())?;
        resolve(
            preset,
            &file,
            &FlagOverrides::default(),
            Format::Csv,
            "out".into(),
        )
    }

    #[test]
    fn empty_config_gives_table_defaults() {
        let spec = resolve_json(Preset::Fig7RateStandalone, "").unwrap();
        assert_eq!(spec.topology.pairs(), 5);
        assert_eq!(spec.topology.m0(), 10.0);
        assert_eq!(spec.topology.m_max(), 100.0);
        assert!((spec.tx_power_dbm - 23.0).abs() < 1e-12);
        assert_eq!(spec.radio.carrier_hz, 800e6);
        assert_eq!(spec.radio.bandwidth_hz, 200e3);
        assert_eq!(
            spec.heights,
            vec![50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0]
        );
        assert_eq!(spec.trials, DEFAULT_TRIALS);
        assert_eq!(
            resolve_json(Preset::Fig9Sumrate, "{}")
                .unwrap()
                .topology
                .pairs(),
            10
        );
    }

    #[test]
    fn annulus_order_is_enforced() {
        let err = resolve_json(Preset::Custom, r#"{"m0": 200}"#).unwrap_err();
        assert!(err.to_string().contains("m0 < m_max"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = resolve_json(Preset::Custom, r#"{"height": 100}"#).unwrap_err();
        assert!(err.to_string().contains("height"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn range_diagnostics_name_the_key() {
        for (json, key) in [
            (r#"{"trials": 0}"#, "trials"),
            (r#"{"k": 0}"#, "k"),
            (r#"{"k": 4, "k_arl": 5}"#, "k_arl"),
            (r#"{"heights": [100, -1]}"#, "heights"),
            (r#"{"kappa_db": 99}"#, "kappa_db"),
            (r#"{"bandwidth_hz": 0}"#, "bandwidth_hz"),
            (r#"{"aerial_counts": [11]}"#, "aerial_counts"),
        ] {
            let err = resolve_json(Preset::Custom, json).unwrap_err();
            assert!(
                err.to_string().contains(&format!("`{key}`")),
                "{json}: {err}"
            );
        }
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse(br#"{"seed": 5, "trials": 20}"#).unwrap();
        let flags = FlagOverrides {
            seed: Some(42),
            trials: None,
            threads: Some(2),
        };
        let spec = resolve(Preset::Fig9Sumrate, &file, &flags, Format::Json, "o".into()).unwrap();
        assert_eq!(spec.seed, 42);
        assert_eq!(spec.trials, 20);
        assert_eq!(spec.threads, Some(2));
    }

    #[test]
    fn rician_preset_and_override() {
        let spec = resolve_json(Preset::Fig11Rician, "{}").unwrap();
        assert_eq!(spec.radio.fading, Fading::Rician { kappa: 10.0 });
        let spec = resolve_json(Preset::Fig11Rician, r#"{"fading": "rayleigh"}"#).unwrap();
        assert_eq!(spec.radio.fading, Fading::Rayleigh);
    }

    #[test]
    fn preset_names() {
        assert_eq!(
            Preset::Fig9bSumrateVsPercent.name(),
            "fig9b-sumrate-vs-percent"
        );
        assert_eq!(Preset::Fig7GainMultipair.name(), "fig7-gain-multipair");
        assert_eq!(Preset::Fig3PdfTheta.name(), "fig3-pdf-theta");
    }
}
