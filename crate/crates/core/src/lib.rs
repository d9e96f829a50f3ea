//! Rate-induced tipping toolkit.
//!
//! Forced box models of the Atlantic overturning circulation and a 1-D
//! fold-overshoot example, deterministic and stochastic integrators, the
//! time-evolving R-tipping threshold with its signed-distance indicator, and
//! ROC-based skill analysis of early-warning indicators.
//!
//! All AMOC salinities are carried in rescaled units `100 (S - S0)`; time is
//! in years.

pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod ews;
pub mod integrators;
pub mod pipeline;
pub mod skill;
pub mod threshold;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
