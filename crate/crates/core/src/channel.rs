//! Free-space pathloss, small-scale fading and the composed link gain
//! `|g|² = P · G_tx · β(R) · G_rx · |α|²` with an omni-directional receiver.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::antenna::{gain, AntennaKind};
use crate::geometry::LinkGeometry;
use crate::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density, dBm/Hz.
pub const NOISE_DENSITY_DBM_HZ: f64 = -174.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Fading {
    Rayleigh,
    /// `kappa` is the linear LoS-to-scattered power ratio.
    Rician {
        kappa: f64,
    },
}

/// Radio parameters. All quantities are linear (watts, hertz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub tx_power_w: f64,
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub fading: Fading,
}

impl Default for RadioConfig {
    /// 23 dBm, 800 MHz carrier, 200 kHz bandwidth, Rayleigh fading.
    fn default() -> Self {
        Self {
            tx_power_w: dbm_to_watts(23.0),
            carrier_hz: 800e6,
            bandwidth_hz: 200e3,
            fading: Fading::Rayleigh,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        };
        positive("tx_power", self.tx_power_w)?;
        positive("carrier_hz", self.carrier_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        if let Fading::Rician { kappa } = self.fading {
            if kappa.is_nan() || kappa < 0.0 {
                return Err(Error::InvalidConfig {
                    field: "rician_k",
                    reason: format!("must be >= 0, got {kappa}"),
                });
            }
        }
        Ok(())
    }

    pub fn with_fading(mut self, fading: Fading) -> Self {
        self.fading = fading;
        self
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// `-174 + 10 log10(B)` dBm, in watts.
    pub fn noise_power_w(&self) -> f64 {
        dbm_to_watts(NOISE_DENSITY_DBM_HZ + 10.0 * self.bandwidth_hz.log10())
    }

    /// `P λ² / (16 π²)`: the received power at unit distance and unit gain.
    pub fn k1(&self) -> f64 {
        let lambda = self.wavelength();
        self.tx_power_w * lambda * lambda / (16.0 * PI * PI)
    }
}

/// `(λ / (4π d))²`.
pub fn free_space_pathloss(distance: f64, wavelength: f64) -> Result<f64> {
    // rejects NaN as well
    if distance.is_nan() || distance <= 0.0 {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok((wavelength / (4.0 * PI * distance)).powi(2))
}

/// Draws one complex small-scale fading amplitude with `E|α|² = 1`.
pub fn sample_fading<R: Rng + ?Sized>(fading: Fading, rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let scattered = Complex64::new(re, im) * FRAC_1_SQRT_2;
    match fading {
        Fading::Rayleigh => scattered,
        Fading::Rician { kappa } if kappa.is_infinite() => Complex64::new(1.0, 0.0),
        Fading::Rician { kappa } => {
            let los = (kappa / (kappa + 1.0)).sqrt();
            let nlos = (1.0 / (kappa + 1.0)).sqrt();
            los + scattered * nlos
        }
    }
}

/// One realization of `|g|²` on a link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGainSample {
    pub gain: f64,
    pub tx: usize,
    pub rx: usize,
    pub tx_antenna: AntennaKind,
}

/// Deterministic part of `|g|²`: everything except the fading power.
pub fn mean_link_gain(
    geom: &LinkGeometry,
    tx_antenna: AntennaKind,
    radio: &RadioConfig,
) -> Result<f64> {
    let beta = free_space_pathloss(geom.distance, radio.wavelength())?;
    Ok(radio.tx_power_w * gain(tx_antenna, geom.theta, geom.phi_hat) * beta)
}

/// Draws `|g|²` for the link `(tx, rx)` with geometry `geom`.
pub fn link_gain<R: Rng + ?Sized>(
    geom: &LinkGeometry,
    tx_antenna: AntennaKind,
    radio: &RadioConfig,
    link: (usize, usize),
    rng: &mut R,
) -> Result<LinkGainSample> {
    let mean = mean_link_gain(geom, tx_antenna, radio)?;
    let alpha = sample_fading(radio.fading, rng);
    Ok(LinkGainSample {
        gain: mean * alpha.norm_sqr(),
        tx: link.0,
        rx: link.1,
        tx_antenna,
    })
}
