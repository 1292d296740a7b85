//! Fluid-antenna spectrum sensing library.
//!
//! Models a cognitive-radio secondary user that detects a primary
//! transmitter by energy detection over a beamformed multi-antenna front
//! end, where the receive antennas are movable within a planar region. The
//! crate provides:
//!
//! - the planar far-field channel model and seeded realization sampling,
//! - analytical energy-detection statistics plus a sample-level simulator,
//! - joint receive-beamforming and antenna-position optimization
//!   (alternating optimization with successive convex approximation),
//! - fixed, random, and exhaustive-selection baseline array designs,
//! - reproducible Monte Carlo campaigns with CSV emission.

pub mod baselines;
pub mod channel;
pub mod detector;
mod error;
pub mod experiments;
pub mod numerics;
pub mod optimizer;

pub use error::{Error, Result};
