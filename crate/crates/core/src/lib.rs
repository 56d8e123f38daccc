//! Interference model for uncoordinated IoT networks that mix ground and
//! aerial receivers.
//!
//! Ground transmitters carry a cross-dipole antenna (one z-axis and one
//! y-axis half-wave dipole) and excite one of the two per link. Receivers are
//! omni-directional. The crate provides:
//!
//! * [`geometry`]: random annulus deployments and the distributions of the
//!   link distance and elevation angle they induce,
//! * [`antenna`]: normalized dipole field patterns and preamble-based antenna
//!   selection,
//! * [`channel`]: free-space pathloss, Rayleigh/Rician fading and the composed
//!   per-link gain,
//! * [`analytic`]: expected channel gains (exact quadrature and Taylor closed
//!   forms) and the interference-limited rate approximations,
//! * [`simulate`]: the Monte Carlo engine that produces ergodic rate and sum
//!   rate curves under each antenna strategy.
//!
//! Monte Carlo trials run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise. Results do not depend on the
//! number of workers.

pub mod analytic;
pub mod antenna;
pub mod channel;
mod error;
pub mod geometry;
pub mod simulate;

pub use error::{Error, Result};
