//! Closed-form expected gains and ergodic-rate approximations, with the
//! special functions and quadrature they rest on.

mod gains;
pub mod quadrature;
mod rates;
pub mod special;

pub use gains::{
    expected_gain_multipair, expected_gain_standalone, k2, multipair_closed_form_complex, Dipole,
    GainExpectation, GainMethod, Scenario, GAIN_TOLERANCE,
};
pub use rates::{
    jensen_rate, rate_multipair_aerial, rate_standalone_y, rate_standalone_z, ApproximationLevel,
};
pub use special::{dawson, erfi, erfi_complex, erfi_difference, ERFI_MAX_ARG};
