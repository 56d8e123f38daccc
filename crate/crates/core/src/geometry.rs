//! Node placement on the ground annulus and the link geometry it induces.
//!
//! Every node's ground position is drawn independently with radius uniform
//! on `[m0, m_max)` and azimuth uniform on `[0, 2π)`. Aerial receivers hover
//! at a common height `h`; ground nodes sit at `z = 0`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tx-Rx links shorter than this (meters) are rejected at deployment time.
pub const MIN_SEPARATION: f64 = 1.0;

/// Samples used when the Rayleigh scale has to be fitted on demand.
pub const DEFAULT_FIT_SAMPLES: usize = 1_000_000;

const FIT_SEED: u64 = 0x5eed_b0a7;

/// Annulus geometry and node counts for one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologyConfig {
    m0: f64,
    m_max: f64,
    height: f64,
    pairs: usize,
    aerial: usize,
    rayleigh_b: Option<f64>,
}

impl TopologyConfig {
    pub fn new(m0: f64, m_max: f64, height: f64, pairs: usize, aerial: usize) -> Result<Self> {
        let config = Self {
            m0,
            m_max,
            height,
            pairs,
            aerial,
            rayleigh_b: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// Table defaults: `m0 = 10 m`, `m_max = 100 m`, `h = 100 m`, `K = 10`,
    /// no aerial receivers.
    pub fn table_defaults() -> Self {
        Self {
            m0: 10.0,
            m_max: 100.0,
            height: 100.0,
            pairs: 10,
            aerial: 0,
            rayleigh_b: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(invalid(
                "m0",
                format!("must satisfy 0 < m0, got {}", self.m0),
            ));
        }
        if !(self.m_max.is_finite() && self.m_max > self.m0) {
            return Err(invalid(
                "m_max",
                format!(
                    "must satisfy m0 < m_max, got m0 = {}, m_max = {}",
                    self.m0, self.m_max
                ),
            ));
        }
        if !(self.height.is_finite() && self.height > 0.0) {
            return Err(invalid(
                "h",
                format!("must satisfy h > 0, got {}", self.height),
            ));
        }
        if self.aerial > self.pairs {
            return Err(invalid(
                "k_arl",
                format!(
                    "must satisfy 0 <= k_arl <= K = {}, got {}",
                    self.pairs, self.aerial
                ),
            ));
        }
        if let Some(b) = self.rayleigh_b {
            if !(b.is_finite() && b > 0.0) {
                return Err(invalid("rayleigh_b", format!("must be > 0, got {b}")));
            }
        }
        Ok(())
    }

    pub fn with_height(mut self, height: f64) -> Result<Self> {
        self.height = height;
        self.validate()?;
        Ok(self)
    }

    pub fn with_pairs(mut self, pairs: usize, aerial: usize) -> Result<Self> {
        self.pairs = pairs;
        self.aerial = aerial;
        self.validate()?;
        Ok(self)
    }

    pub fn with_aerial(mut self, aerial: usize) -> Result<Self> {
        self.aerial = aerial;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rayleigh_b(mut self, b: f64) -> Result<Self> {
        self.rayleigh_b = Some(b);
        self.validate()?;
        Ok(self)
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn m_max(&self) -> f64 {
        self.m_max
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Number of Tx/Rx pairs `K`.
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// Number of aerial receivers `K_arl`.
    pub fn aerial(&self) -> usize {
        self.aerial
    }

    /// Number of ground receivers `K_grd = K - K_arl`.
    pub fn ground(&self) -> usize {
        self.pairs - self.aerial
    }

    /// The configured Rayleigh scale, if one was supplied.
    pub fn rayleigh_b_override(&self) -> Option<f64> {
        self.rayleigh_b
    }

    /// Rayleigh scale of the ground-plane Tx-Rx separation.
    ///
    /// Falls back to a maximum-likelihood fit over [`DEFAULT_FIT_SAMPLES`]
    /// simulated separations when none was configured. Fits are cached per
    /// annulus.
    pub fn rayleigh_b(&self) -> f64 {
        if let Some(b) = self.rayleigh_b {
            return b;
        }
        static CACHE: Mutex<Vec<((u64, u64), f64)>> = Mutex::new(Vec::new());
        let key = (self.m0.to_bits(), self.m_max.to_bits());
        let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&(_, b)) = cache.iter().find(|(k, _)| *k == key) {
            return b;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(FIT_SEED);
        let samples = sample_r_hat(self, DEFAULT_FIT_SAMPLES, &mut rng);
        let b = fit_rayleigh_b(&samples).expect("non-empty sample set");
        cache.push((key, b));
        b
    }
}

fn invalid(field: &'static str, reason: String) -> Error {
    Error::InvalidConfig { field, reason }
}

/// Ground-plane polar position of a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundPoint {
    pub r: f64,
    pub phi: f64,
}

/// Receiver position: ground-plane polar coordinates plus altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RxPoint {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RxKind {
    Ground,
    Aerial,
}

/// One realized multi-pair topology. Transmitter `i` serves receiver `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub tx: Vec<GroundPoint>,
    pub rx: Vec<RxPoint>,
    pub rx_kind: Vec<RxKind>,
    /// Whole-deployment redraws caused by a link shorter than [`MIN_SEPARATION`].
    pub resamples: u32,
}

impl Deployment {
    pub fn pairs(&self) -> usize {
        self.tx.len()
    }

    /// Geometry of the link from transmitter `tx` to receiver `rx`.
    pub fn link(&self, tx: usize, rx: usize) -> LinkGeometry {
        link_geometry(self.tx[tx], self.rx[rx])
    }
}

/// Geometry of one transmitter-to-receiver link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Ground-plane separation, meters.
    pub r_hat: f64,
    /// Relative azimuth `|φ_rx - φ_tx|`, radians in `[0, 2π)`.
    pub phi_hat: f64,
    /// Angle between the receiver's zenith and the link; `π/2` on the ground.
    pub theta: f64,
    /// 3D distance, meters.
    pub distance: f64,
}

pub fn link_geometry(tx: GroundPoint, rx: RxPoint) -> LinkGeometry {
    let phi_hat = (rx.phi - tx.phi).abs();
    let r_hat_sq = tx.r * tx.r + rx.r * rx.r - 2.0 * tx.r * rx.r * phi_hat.cos();
    // rounding can push a co-located pair slightly negative
    let r_hat = r_hat_sq.max(0.0).sqrt();
    let theta = if rx.z > 0.0 {
        (r_hat / rx.z).atan()
    } else {
        FRAC_PI_2
    };
    LinkGeometry {
        r_hat,
        phi_hat,
        theta,
        distance: r_hat.hypot(rx.z),
    }
}

fn sample_ground<R: Rng + ?Sized>(config: &TopologyConfig, rng: &mut R) -> GroundPoint {
    GroundPoint {
        r: rng.random_range(config.m0..config.m_max),
        phi: rng.random_range(0.0..TAU),
    }
}

/// Stand-alone scenario: one ground transmitter in the annulus, receiver fixed
/// at `(0, 0, h)`.
pub fn sample_standalone<R: Rng + ?Sized>(config: &TopologyConfig, rng: &mut R) -> LinkGeometry {
    let tx = sample_ground(config, rng);
    let rx = RxPoint {
        r: 0.0,
        phi: 0.0,
        z: config.height,
    };
    link_geometry(tx, rx)
}

/// Multi-pair scenario: `K` transmitters and `K` receivers drawn i.i.d. on the
/// annulus. Receivers `0..K_arl` are aerial.
///
/// A draw containing any Tx-Rx link shorter than [`MIN_SEPARATION`] is
/// discarded and redrawn in full; the count is kept in
/// [`Deployment::resamples`].
pub fn sample_multipair<R: Rng + ?Sized>(config: &TopologyConfig, rng: &mut R) -> Deployment {
    let k = config.pairs;
    let mut resamples = 0;
    loop {
        let tx: Vec<GroundPoint> = (0..k).map(|_| sample_ground(config, rng)).collect();
        let rx: Vec<RxPoint> = (0..k)
            .map(|i| {
                let p = sample_ground(config, rng);
                let z = if i < config.aerial {
                    config.height
                } else {
                    0.0
                };
                RxPoint {
                    r: p.r,
                    phi: p.phi,
                    z,
                }
            })
            .collect();
        let too_close = tx.iter().any(|&t| {
            rx.iter()
                .any(|&r| link_geometry(t, r).distance < MIN_SEPARATION)
        });
        if too_close {
            resamples += 1;
            continue;
        }
        let rx_kind = (0..k)
            .map(|i| {
                if i < config.aerial {
                    RxKind::Aerial
                } else {
                    RxKind::Ground
                }
            })
            .collect();
        return Deployment {
            tx,
            rx,
            rx_kind,
            resamples,
        };
    }
}

/// Draws `n` ground-plane separations between two independent annulus points.
pub fn sample_r_hat<R: Rng + ?Sized>(config: &TopologyConfig, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let tx = sample_ground(config, rng);
            let rx = sample_ground(config, rng);
            link_geometry(
                tx,
                RxPoint {
                    r: rx.r,
                    phi: rx.phi,
                    z: 0.0,
                },
            )
            .r_hat
        })
        .collect()
}

/// Density of the elevation angle in the stand-alone scenario.
pub fn pdf_theta_standalone(theta: f64, config: &TopologyConfig) -> f64 {
    let h = config.height;
    let lo = (config.m0 / h).atan();
    let hi = (config.m_max / h).atan();
    if theta < lo || theta > hi {
        return 0.0;
    }
    let t = theta.tan();
    h / (config.m_max - config.m0) * (t * t + 1.0)
}

/// Density of the relative azimuth `|φ_rx - φ_tx|` of two independent
/// uniform azimuths.
pub fn pdf_phi_hat(phi_hat: f64) -> f64 {
    if !(0.0..=TAU).contains(&phi_hat) {
        return 0.0;
    }
    (TAU - phi_hat) / (2.0 * PI * PI)
}

/// Maximum-likelihood Rayleigh scale `sqrt(Σ x² / 2n)`.
pub fn fit_rayleigh_b(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let sum_sq: f64 = samples.iter().map(|x| x * x).sum();
    Ok((sum_sq / (2.0 * samples.len() as f64)).sqrt())
}

/// Rayleigh density with scale `b`.
pub fn pdf_r_hat(r_hat: f64, b: f64) -> f64 {
    if r_hat < 0.0 {
        return 0.0;
    }
    let b2 = b * b;
    r_hat / b2 * (-r_hat * r_hat / (2.0 * b2)).exp()
}

/// Upper end of the elevation-angle support in the multi-pair scenario.
pub fn theta_multipair_max(config: &TopologyConfig) -> f64 {
    (2.0 * config.m_max / config.height).atan()
}

/// Density of the aerial elevation angle in the multi-pair scenario, obtained
/// from the Rayleigh fit of the separation. Not renormalized over the
/// truncated support.
pub fn pdf_theta_multipair(theta: f64, config: &TopologyConfig) -> f64 {
    if theta < 0.0 || theta > theta_multipair_max(config) {
        return 0.0;
    }
    let h = config.height;
    let b = config.rayleigh_b();
    let t = theta.tan();
    let sec2 = 1.0 + t * t;
    h * h * t / (b * b) * (-h * h * t * t / (2.0 * b * b)).exp() * sec2
}
