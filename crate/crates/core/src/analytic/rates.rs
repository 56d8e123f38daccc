//! Ergodic-rate approximations.
//!
//! The exact rate `E{log2(1 + S / (I + N))}` is only available by Monte
//! Carlo. The closed forms here drop the noise (interference-limited) and
//! move the expectation inside the logarithm, giving `log2(1 + E{S} / E{I})`.

use serde::{Deserialize, Serialize};

use super::gains::{expected_gain_multipair, expected_gain_standalone, Dipole, GainMethod};
use crate::channel::RadioConfig;
use crate::geometry::TopologyConfig;
use crate::{Error, Result};

/// How far a rate has been approximated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApproximationLevel {
    /// `E{log2(1 + S/(I + N))}`, Monte Carlo only.
    Exact,
    /// Noise dropped: `E{log2(1 + S/I)}`.
    InterferenceLimited,
    /// Expectations moved inside: `log2(1 + E{S}/E{I})`.
    Jensen,
}

/// `log2(1 + desired / (interference + noise))` from mean powers.
pub fn jensen_rate(desired: f64, interference: f64, noise: f64) -> f64 {
    (desired / (interference + noise)).ln_1p() / std::f64::consts::LN_2
}

fn check_pairs(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::RatePrecondition(format!(
            "need at least 2 pairs for an interference-limited rate, got {k}"
        )));
    }
    Ok(())
}

/// Stand-alone rate with a z dipole on every transmitter: all gains share one
/// expectation, so only `K` remains.
pub fn rate_standalone_z(pairs: usize) -> Result<f64> {
    check_pairs(pairs)?;
    Ok(jensen_rate(1.0, (pairs - 1) as f64, 0.0))
}

/// Stand-alone rate with a y dipole on the connected transmitter and z
/// dipoles on the `K - 1` interferers.
pub fn rate_standalone_y(
    pairs: usize,
    config: &TopologyConfig,
    radio: &RadioConfig,
    method: GainMethod,
) -> Result<f64> {
    check_pairs(pairs)?;
    let zeta_y = expected_gain_standalone(Dipole::Y, config, radio, method)?.value;
    let zeta_z = expected_gain_standalone(Dipole::Z, config, radio, method)?.value;
    Ok(jensen_rate(zeta_y, (pairs - 1) as f64 * zeta_z, 0.0))
}

/// Rate of one aerial receiver in the multi-pair network: the other aerial
/// pairs interfere through y dipoles, the ground pairs through z dipoles.
pub fn rate_multipair_aerial(
    ground: usize,
    aerial: usize,
    config: &TopologyConfig,
    radio: &RadioConfig,
    method: GainMethod,
) -> Result<f64> {
    if aerial < 1 {
        return Err(Error::RatePrecondition(
            "need at least one aerial receiver".into(),
        ));
    }
    check_pairs(ground + aerial)?;
    let zeta_y = expected_gain_multipair(Dipole::Y, config, radio, method)?.value;
    let zeta_z = if ground > 0 {
        expected_gain_multipair(Dipole::Z, config, radio, method)?.value
    } else {
        0.0
    };
    let interference = ground as f64 * zeta_z + (aerial - 1) as f64 * zeta_y;
    Ok(jensen_rate(zeta_y, interference, 0.0))
}
