//! Simulation and estimation of the ground-reflection height fingerprint of
//! road vehicles observed by a stationary roadside FMCW radar.
//!
//! The crate is organised along the processing chain:
//!
//! ```text
//! model ──► synth ──► dsp ──► heightspec ──► classify
//! (physics)  (cube)   (FFT, CFAR,  (Lomb-Scargle   (power above
//!                      tracking)    height PSD)     threshold)
//! ```
//!
//! All quantities are SI: meters, seconds, hertz, radians.

pub mod classify;
pub mod cube_io;
pub mod dsp;
pub mod error;
pub mod export;
pub mod heightspec;
pub mod model;
pub mod scenario;
pub mod synth;

pub use error::{Error, Result};
pub use model::SPEED_OF_LIGHT;
