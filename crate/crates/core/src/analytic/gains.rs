//! Expected channel gain `E{|g|²}` seen by an aerial receiver.
//!
//! Two scenarios:
//!
//! * stand-alone: receiver fixed at `(0, 0, h)`, transmitter uniform on the
//!   annulus, so `θ = atan(r/h)` has the density of
//!   [`pdf_theta_standalone`](crate::geometry::pdf_theta_standalone);
//! * multi-pair: receiver also random, `θ = atan(r̂/h)` with the Rayleigh fit
//!   of `r̂` and the triangular law of the relative azimuth.
//!
//! Each has an exact form, evaluated by adaptive quadrature, and a Taylor
//! closed form around `θ = 0` that becomes tight as `h` grows. The multi-pair
//! closed forms contain `erfi` of an imaginary argument because
//! `k2 = -h²/(2b²) < 0`; they are evaluated in complex arithmetic and the
//! real part is returned once the imaginary residue is confirmed negligible.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, integrate_2d, Tolerance};
use super::special::erfi_difference;
use crate::antenna::{field_pattern_y, field_pattern_z, AntennaKind};
use crate::channel::RadioConfig;
use crate::geometry::{theta_multipair_max, TopologyConfig};
use crate::{Error, Result};

/// The two transmit dipoles of the cross-dipole antenna.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dipole {
    Z,
    Y,
}

impl From<Dipole> for AntennaKind {
    fn from(d: Dipole) -> Self {
        match d {
            Dipole::Z => AntennaKind::DipoleZ,
            Dipole::Y => AntennaKind::DipoleY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GainMethod {
    QuadratureExact,
    TaylorClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    Standalone,
    MultiPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainExpectation {
    pub value: f64,
    pub method: GainMethod,
    pub scenario: Scenario,
    pub antenna: Dipole,
}

/// Tolerance of the exact-gain quadratures (applied to the dimensionless
/// integrals, before the `k1` prefactor).
pub const GAIN_TOLERANCE: Tolerance = Tolerance {
    abs: 1e-14,
    rel: 1e-8,
};

/// Annuli narrower than this fraction of `m_max` are treated as a circle.
const DEGENERATE_WIDTH: f64 = 1e-9;

/// Below this `|k2|` the multi-pair closed forms switch to their power
/// series in `k2`, since the erfi form divides by `k2` and `√k2`.
const K2_SERIES_LIMIT: f64 = 1e-3;

/// `(4π - π³)/12`, the φ-averaged second-order coefficient of `F_y²`, times 2π.
const Y_STANDALONE_CUBIC: f64 = (4.0 * PI - PI * PI * PI) / 12.0;

fn y_multipair_cubic() -> f64 {
    5.0 * PI * PI / 3.0 - PI.powi(4) / 4.0
}

/// Expected gain in the stand-alone scenario.
pub fn expected_gain_standalone(
    antenna: Dipole,
    config: &TopologyConfig,
    radio: &RadioConfig,
    method: GainMethod,
) -> Result<GainExpectation> {
    let value = match method {
        GainMethod::QuadratureExact => standalone_exact(antenna, config, radio)?,
        GainMethod::TaylorClosedForm => standalone_taylor(antenna, config, radio),
    };
    Ok(GainExpectation {
        value,
        method,
        scenario: Scenario::Standalone,
        antenna,
    })
}

fn standalone_exact(antenna: Dipole, config: &TopologyConfig, radio: &RadioConfig) -> Result<f64> {
    let (h, m0, m_max) = (config.height(), config.m0(), config.m_max());
    let k1 = radio.k1();
    let lo = (m0 / h).atan();
    let hi = (m_max / h).atan();

    if m_max - m0 <= DEGENERATE_WIDTH * m_max {
        // all transmitters on the circle r = m0: a point mass at θ*
        let cos2 = lo.cos().powi(2);
        let pattern = match antenna {
            Dipole::Z => field_pattern_z(lo).powi(2),
            Dipole::Y => {
                integrate(
                    |phi| field_pattern_y(lo, phi).powi(2),
                    0.0,
                    TAU,
                    GAIN_TOLERANCE,
                )?
                .value
                    / TAU
            }
        };
        return Ok(k1 * pattern * cos2 / (h * h));
    }

    // with the θ density h sec²θ / (m_max - m0), cos²θ / h² · f_θ collapses to
    // 1 / (h (m_max - m0))
    let scale = k1 / ((m_max - m0) * h);
    match antenna {
        Dipole::Z => {
            let i = integrate(|t| field_pattern_z(t).powi(2), lo, hi, GAIN_TOLERANCE)?;
            Ok(scale * i.value)
        }
        Dipole::Y => {
            let i = integrate_2d(
                |phi, t| field_pattern_y(t, phi).powi(2),
                (0.0, TAU),
                (lo, hi),
                GAIN_TOLERANCE,
            )?;
            Ok(scale * i.value / TAU)
        }
    }
}

fn standalone_taylor(antenna: Dipole, config: &TopologyConfig, radio: &RadioConfig) -> f64 {
    let (h, m0, m_max) = (config.height(), config.m0(), config.m_max());
    let k1 = radio.k1();
    let lo = (m0 / h).atan();
    let hi = (m_max / h).atan();
    let width = m_max - m0;

    if width <= DEGENERATE_WIDTH * m_max {
        // limit of the bracket difference over the width: d/dm of atan(m/h)
        let dtheta = h / (h * h + m0 * m0);
        return match antenna {
            Dipole::Z => PI * PI * k1 * 3.0 * lo * lo * dtheta / (48.0 * h),
            Dipole::Y => k1 / (TAU * h) * (Y_STANDALONE_CUBIC * 3.0 * lo * lo + TAU) * dtheta,
        };
    }

    let cubes = hi.powi(3) - lo.powi(3);
    match antenna {
        Dipole::Z => PI * PI * k1 * cubes / (48.0 * width * h),
        Dipole::Y => k1 / (TAU * h * width) * (Y_STANDALONE_CUBIC * cubes + TAU * (hi - lo)),
    }
}

/// Expected gain in the multi-pair scenario.
pub fn expected_gain_multipair(
    antenna: Dipole,
    config: &TopologyConfig,
    radio: &RadioConfig,
    method: GainMethod,
) -> Result<GainExpectation> {
    let value = match method {
        GainMethod::QuadratureExact => multipair_exact(antenna, config, radio)?,
        GainMethod::TaylorClosedForm => {
            let z = multipair_closed_form_complex(antenna, config, radio)?;
            let residue = if z.re == 0.0 {
                z.im.abs()
            } else {
                (z.im / z.re).abs()
            };
            if residue >= 1e-9 {
                return Err(Error::ImaginaryResidue { residue });
            }
            z.re
        }
    };
    Ok(GainExpectation {
        value,
        method,
        scenario: Scenario::MultiPair,
        antenna,
    })
}

/// `k2 = -h² / (2 b²)`.
pub fn k2(config: &TopologyConfig) -> f64 {
    let b = config.rayleigh_b();
    -config.height().powi(2) / (2.0 * b * b)
}

fn multipair_exact(antenna: Dipole, config: &TopologyConfig, radio: &RadioConfig) -> Result<f64> {
    let b = config.rayleigh_b();
    let k2 = k2(config);
    let upper = theta_multipair_max(config);
    let k1 = radio.k1();
    // F² cos²θ / h² · f_θ(θ) = F² tanθ exp(k2 tan²θ) / b²
    let weight = move |t: f64| {
        let tan = t.tan();
        tan * (k2 * tan * tan).exp()
    };
    match antenna {
        Dipole::Z => {
            let i = integrate(
                |t| field_pattern_z(t).powi(2) * weight(t),
                0.0,
                upper,
                GAIN_TOLERANCE,
            )?;
            Ok(k1 / (b * b) * i.value)
        }
        Dipole::Y => {
            let i = integrate_2d(
                |phi, t| field_pattern_y(t, phi).powi(2) * weight(t) * (TAU - phi),
                (0.0, TAU),
                (0.0, upper),
                GAIN_TOLERANCE,
            )?;
            Ok(k1 / (2.0 * PI * PI * b * b) * i.value)
        }
    }
}

/// The multi-pair Taylor closed form, evaluated in complex arithmetic.
///
/// The antiderivatives are evaluated at `θ = atan(2 m_max / h)` and `θ = 0`.
/// For `|k2|` below 1e-3 the same Taylor integrals are summed as a power
/// series in `k2` instead; the result is then real by construction.
pub fn multipair_closed_form_complex(
    antenna: Dipole,
    config: &TopologyConfig,
    radio: &RadioConfig,
) -> Result<Complex64> {
    let b = config.rayleigh_b();
    let k2 = k2(config);
    let upper = theta_multipair_max(config);
    let k1 = radio.k1();

    if k2.abs() < K2_SERIES_LIMIT {
        let value = match antenna {
            Dipole::Z => k1 / (b * b) * PI * PI / 16.0 * taylor_moment_series(3, k2, upper),
            Dipole::Y => {
                k1 / (2.0 * PI * PI * b * b)
                    * (2.0 * PI * PI * taylor_moment_series(1, k2, upper)
                        + y_multipair_cubic() * taylor_moment_series(3, k2, upper))
            }
        };
        return Ok(Complex64::new(value, 0.0));
    }

    let k2c = Complex64::new(k2, 0.0);
    let sqrt_k2 = if k2 < 0.0 {
        Complex64::new(0.0, (-k2).sqrt())
    } else {
        Complex64::new(k2.sqrt(), 0.0)
    };
    let erfi_arg = |t: f64| sqrt_k2 * (4.0 * t * t + 3.0) / (2.0 * 6f64.sqrt());
    let gauss = |t: f64| (k2 * (4.0 * t * t + 3.0).powi(2) / 24.0).exp();
    let shift = (-3.0 * k2 / 8.0).exp();

    let erfi_diff = erfi_difference(erfi_arg(upper), erfi_arg(0.0))?;
    let gauss_diff = Complex64::new(gauss(upper) - gauss(0.0), 0.0);
    let sqrt_6pi_k2 = sqrt_k2 * (6.0 * PI).sqrt();
    // (√(6π k2) erfi(...) - 4 exp(...)) between the limits
    let cubic_bracket = sqrt_6pi_k2 * erfi_diff - gauss_diff * 4.0;

    let b2 = b * b;
    Ok(match antenna {
        Dipole::Z => cubic_bracket * (-3.0 * PI * PI * k1 * shift / (512.0 * b2)) / k2c,
        Dipole::Y => {
            let cubic = cubic_bracket * (-3.0 * k1 * shift / (64.0 * PI * PI * b2)) / k2c
                * y_multipair_cubic();
            let linear = erfi_diff * (1.5 * PI).sqrt() * (k1 * shift / (4.0 * b2)) / sqrt_k2;
            cubic + linear
        }
    })
}

/// `∫₀^T θ^p exp(k2 (θ² + 2θ⁴/3)) dθ` for small `|k2|`, by expanding the
/// exponential: `Σ_n k2ⁿ/n! Σ_j C(n, j) (2/3)^j T^(p+1+2n+2j) / (p+1+2n+2j)`.
fn taylor_moment_series(p: i32, k2: f64, upper: f64) -> f64 {
    let mut total = 0.0;
    let mut k2_pow_over_fact = 1.0;
    for n in 0..60 {
        if n > 0 {
            k2_pow_over_fact *= k2 / n as f64;
        }
        let mut inner = 0.0;
        let mut binom = 1.0;
        for j in 0..=n {
            if j > 0 {
                binom *= (n - j + 1) as f64 / j as f64;
            }
            let e = p + 1 + 2 * n + 2 * j;
            inner += binom * (2.0f64 / 3.0).powi(j) * upper.powi(e) / e as f64;
        }
        let term = k2_pow_over_fact * inner;
        total += term;
        if n > 2 && term.abs() < 1e-18 * total.abs() {
            break;
        }
    }
    total
}
