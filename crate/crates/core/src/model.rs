//! Network description shared by the analytic and simulation paths.
//!
//! Everything is stored in linear SI units: watts, base stations per square
//! meter, meters. Decibel quantities only appear in the unit helpers and in
//! the configuration file format.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Parameters of one tier of base stations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams {
    /// Transmit power in watts.
    pub power: f64,
    /// Base station density in BS per square meter.
    pub density: f64,
    /// Path-loss exponent, strictly greater than 2.
    pub pathloss_exp: f64,
    /// Linear association bias.
    pub bias: f64,
}

impl TierParams {
    pub fn new(power: f64, density: f64, pathloss_exp: f64, bias: f64) -> Self {
        Self {
            power,
            density,
            pathloss_exp,
            bias,
        }
    }

    /// Builds a tier from interface units: dBm power, BS per km², dB bias.
    pub fn from_interface_units(
        power_dbm: f64,
        density_per_km2: f64,
        pathloss_exp: f64,
        bias_db: f64,
    ) -> Self {
        Self {
            power: dbm_to_watts(power_dbm),
            density: per_km2_to_per_m2(density_per_km2),
            pathloss_exp,
            bias: db_to_linear(bias_db),
        }
    }

    /// Biased received power at distance `d` (in units of the reference distance).
    pub fn biased_received_power(&self, ref_pathloss: f64, d: f64) -> f64 {
        self.power * ref_pathloss * d.powf(-self.pathloss_exp) * self.bias
    }
}

/// A K-tier network together with the global propagation constants.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub tiers: Vec<TierParams>,
    /// Thermal noise power W in watts; zero means interference-limited.
    pub noise_power: f64,
    /// Path-loss gain L0 at the reference distance.
    pub ref_pathloss: f64,
    /// Reference distance r0 in meters.
    pub ref_distance: f64,
    /// User density in users per square meter.
    pub user_density: f64,
}

impl NetworkConfig {
    /// Interference-limited network with unit reference path loss and no users.
    pub fn new(tiers: Vec<TierParams>) -> Self {
        Self {
            tiers,
            noise_power: 0.0,
            ref_pathloss: 1.0,
            ref_distance: 1.0,
            user_density: 0.0,
        }
    }

    pub fn with_noise_power(mut self, watts: f64) -> Self {
        self.noise_power = watts;
        self
    }

    pub fn with_ref_pathloss(mut self, gain: f64) -> Self {
        self.ref_pathloss = gain;
        self
    }

    pub fn with_user_density(mut self, per_m2: f64) -> Self {
        self.user_density = per_m2;
        self
    }

    pub fn with_ref_distance(mut self, meters: f64) -> Self {
        self.ref_distance = meters;
        self
    }

    pub fn num_tiers(&self) -> usize {
        self.tiers.len()
    }

    /// Returns the zero-based position of the 1-based tier index `k`.
    pub fn tier_position(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.tiers.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                tiers: self.tiers.len(),
            });
        }
        Ok(k - 1)
    }

    pub fn tier(&self, k: usize) -> Result<&TierParams> {
        Ok(&self.tiers[self.tier_position(k)?])
    }

    /// Density of tier `pos` (zero-based) expressed per squared reference distance.
    pub(crate) fn normalized_density(&self, pos: usize) -> f64 {
        self.tiers[pos].density * self.ref_distance * self.ref_distance
    }

    /// True when every tier has a bitwise-identical path-loss exponent.
    pub fn equal_exponents(&self) -> bool {
        let first = self.tiers[0].pathloss_exp.to_bits();
        self.tiers.iter().all(|t| t.pathloss_exp.to_bits() == first)
    }

    /// True when every tier has a bitwise-identical bias.
    pub fn equal_biases(&self) -> bool {
        let first = self.tiers[0].bias.to_bits();
        self.tiers.iter().all(|t| t.bias.to_bits() == first)
    }

    /// Loads and validates a configuration file.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Parses and validates a configuration in the TOML file format.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        if file.tier.is_empty() {
            return Err(Error::ConfigParse("no [[tier]] entries".into()));
        }
        let config = NetworkConfig {
            tiers: file
                .tier
                .iter()
                .map(|t| {
                    TierParams::from_interface_units(
                        t.power_dbm,
                        t.density_per_km2,
                        t.alpha,
                        t.bias_db,
                    )
                })
                .collect(),
            noise_power: dbm_to_watts(file.noise_dbm),
            ref_pathloss: db_to_linear(file.l0_db),
            ref_distance: file.ref_distance_m,
            user_density: per_km2_to_per_m2(file.user_density_per_km2),
        };
        validate(config).map_err(|e| Error::ConfigParse(e.to_string()))
    }
}

/// On-disk configuration layout.
///
/// ```toml
/// noise_dbm = -104.0          # -inf for an interference-limited network
/// l0_db = -38.5
/// user_density_per_km2 = 50.0
///
/// [[tier]]
/// power_dbm = 53.0
/// density_per_km2 = 1.2732
/// alpha = 3.5
/// bias_db = 0.0
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    noise_dbm: f64,
    l0_db: f64,
    #[serde(default)]
    user_density_per_km2: f64,
    #[serde(default = "default_ref_distance")]
    ref_distance_m: f64,
    #[serde(default)]
    tier: Vec<TierEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TierEntry {
    power_dbm: f64,
    density_per_km2: f64,
    alpha: f64,
    #[serde(default)]
    bias_db: f64,
}

fn default_ref_distance() -> f64 {
    1.0
}

/// Power, bias and exponent ratios of every tier relative to a serving tier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierRatios {
    pub p_hat: f64,
    pub b_hat: f64,
    pub a_hat: f64,
}

/// Checks every invariant of the configuration, returning it unchanged on success.
pub fn validate(config: NetworkConfig) -> Result<NetworkConfig> {
    if config.tiers.is_empty() {
        return Err(Error::EmptyTierList);
    }
    for (i, t) in config.tiers.iter().enumerate() {
        let tier = Some(i + 1);
        for (what, value) in [
            ("power", t.power),
            ("density", t.density),
            ("bias", t.bias),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveParameter { tier, what, value });
            }
        }
        if !(t.pathloss_exp > 2.0 && t.pathloss_exp.is_finite()) {
            return Err(Error::InvalidExponent {
                tier: i + 1,
                alpha: t.pathloss_exp,
            });
        }
    }
    if !(config.noise_power >= 0.0 && config.noise_power.is_finite()) {
        return Err(Error::NonPositiveParameter {
            tier: None,
            what: "noise power (non-negative)",
            value: config.noise_power,
        });
    }
    for (what, value) in [
        ("reference path loss", config.ref_pathloss),
        ("reference distance", config.ref_distance),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveParameter {
                tier: None,
                what,
                value,
            });
        }
    }
    if !(config.user_density >= 0.0 && config.user_density.is_finite()) {
        return Err(Error::NonPositiveParameter {
            tier: None,
            what: "user density (non-negative)",
            value: config.user_density,
        });
    }
    Ok(config)
}

/// Ratios of every tier against serving tier `k` (1-based).
pub fn ratios(config: &NetworkConfig, k: usize) -> Result<Vec<TierRatios>> {
    let serving = *config.tier(k)?;
    let pos = k - 1;
    Ok(config
        .tiers
        .iter()
        .enumerate()
        .map(|(j, t)| {
            if j == pos {
                TierRatios {
                    p_hat: 1.0,
                    b_hat: 1.0,
                    a_hat: 1.0,
                }
            } else {
                TierRatios {
                    p_hat: t.power / serving.power,
                    b_hat: t.bias / serving.bias,
                    a_hat: t.pathloss_exp / serving.pathloss_exp,
                }
            }
        })
        .collect())
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn per_km2_to_per_m2(x: f64) -> f64 {
    x / 1e6
}
