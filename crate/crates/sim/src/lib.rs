//! Simulation oracle, experiment presets and CSV output for the
//! intersection outage model in [`crossway_core`].
//!
//! [`montecarlo`] re-derives outage probabilities by direct simulation of
//! the point processes and fading, independently of the analytical path;
//! [`experiments`] packages the named parameter sweeps behind the `crossway`
//! CLI; [`validate`] pairs the two for the analytic-versus-simulation
//! comparison grid; [`csvout`] writes the resulting tables.

pub mod csvout;
pub mod experiments;
pub mod montecarlo;
pub mod validate;

pub use crossway_core as core;
