//! Normalized field patterns of the cross-dipole transmit antenna.
//!
//! Both dipoles are half-wave. The z-axis dipole is omni-directional in
//! azimuth; the y-axis dipole's pattern depends on azimuth and elevation
//! through the angle `acos(sin θ sin φ)` between the link and the y axis.
//! Power gain is the squared field magnitude.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Below this angle from a dipole axis the patterns switch to their series.
const AXIS_SERIES_ANGLE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AntennaKind {
    DipoleZ,
    DipoleY,
    Omni,
}

/// Half-wave dipole pattern as a function of the angle `psi` between the
/// propagation direction and the dipole axis.
fn half_wave(psi: f64) -> f64 {
    let psi = if psi > FRAC_PI_2 { PI - psi } else { psi };
    if psi < AXIS_SERIES_ANGLE {
        // cos(π/2 cos ψ) / sin ψ = (π/4) ψ (1 + ψ²/12) + O(ψ⁵)
        return FRAC_PI_4 * psi * (1.0 + psi * psi / 12.0);
    }
    (FRAC_PI_2 * psi.cos()).cos() / psi.sin()
}

/// Field pattern of the z-axis half-wave dipole; `theta` is measured from
/// the z axis. Returns the limit 0 along the axis.
pub fn field_pattern_z(theta: f64) -> f64 {
    half_wave(theta)
}

/// Field pattern of the y-axis half-wave dipole.
pub fn field_pattern_y(theta: f64, phi: f64) -> f64 {
    let u = theta.sin() * phi.sin();
    let a = u.abs().min(1.0);
    let sin_psi_sq = (1.0 - a) * (1.0 + a);
    if sin_psi_sq < AXIS_SERIES_ANGLE * AXIS_SERIES_ANGLE {
        return half_wave(sin_psi_sq.sqrt().asin());
    }
    (FRAC_PI_2 * u).cos() / sin_psi_sq.sqrt()
}

/// Field pattern of a z-axis dipole of arbitrary length.
///
/// `electrical_length` is `π f0 d_len / c`; `π/2` gives the half-wave case.
/// The result is not normalized to a unit peak.
pub fn field_pattern_dipole(electrical_length: f64, theta: f64) -> f64 {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        return 0.0;
    }
    ((electrical_length * theta.cos()).cos() - electrical_length.cos()) / s
}

/// Power gain of `kind` towards `(theta, phi)`.
pub fn gain(kind: AntennaKind, theta: f64, phi: f64) -> f64 {
    match kind {
        AntennaKind::DipoleZ => field_pattern_z(theta).powi(2),
        AntennaKind::DipoleY => field_pattern_y(theta, phi).powi(2),
        AntennaKind::Omni => 1.0,
    }
}

/// Picks the dipole with the higher received preamble power.
///
/// Both dipoles must be present; `Omni` entries are not candidates and are
/// ignored. Ties go to `DipoleZ`.
pub fn select_antenna<I>(preamble_powers: I) -> Result<AntennaKind>
where
    I: IntoIterator<Item = (AntennaKind, f64)>,
{
    let mut z = None;
    let mut y = None;
    for (kind, power) in preamble_powers {
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::IncompleteSelection(format!(
                "{kind:?} power is {power}"
            )));
        }
        match kind {
            AntennaKind::DipoleZ => z = Some(power),
            AntennaKind::DipoleY => y = Some(power),
            AntennaKind::Omni => {}
        }
    }
    match (z, y) {
        (Some(z), Some(y)) => Ok(select_dipole(z, y)),
        (None, _) => Err(Error::IncompleteSelection("missing DipoleZ".into())),
        (_, None) => Err(Error::IncompleteSelection("missing DipoleY".into())),
    }
}

#[inline]
pub(crate) fn select_dipole(z_power: f64, y_power: f64) -> AntennaKind {
    if y_power > z_power {
        AntennaKind::DipoleY
    } else {
        AntennaKind::DipoleZ
    }
}
