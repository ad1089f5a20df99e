//! Downlink SINR analysis of K-tier heterogeneous cellular networks with
//! biased cell association.
//!
//! Base stations of each tier form an independent Poisson point process with
//! their own transmit power, density, path-loss exponent and association bias.
//! A user attaches to the base station with the largest biased received power
//! and sees Rayleigh fading on every link. The crate computes:
//!
//! * association probabilities, cell loads and serving-distance laws ([`analysis`]),
//! * outage probability (the SINR distribution) per tier and network-wide,
//!   with the closed forms of the interference-limited equal-exponent cases,
//! * average ergodic rate and minimum average user throughput,
//!
//! and checks all of it against a Poisson point process simulator
//! ([`montecarlo`]). The interference kernel and the quadrature engine live in
//! [`specfun`]; [`cli`] holds the command implementations of the `hetnet` binary.
//!
//! ```
//! use hetnet::{analysis, model::{NetworkConfig, TierParams}, specfun::QuadratureSettings};
//!
//! let config = NetworkConfig::new(vec![
//!     TierParams::from_interface_units(53.0, 1.0, 4.0, 0.0),
//!     TierParams::from_interface_units(33.0, 5.0, 4.0, 0.0),
//! ]);
//! let q = QuadratureSettings::default();
//! let o = analysis::outage_network(&config, 1.0, &q).unwrap();
//! assert!((o - (1.0 - 1.0 / (1.0 + std::f64::consts::FRAC_PI_4))).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{NetworkConfig, TierParams};
pub use specfun::QuadratureSettings;
