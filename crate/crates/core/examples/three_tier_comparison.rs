//! Full analytic-versus-simulation report for a three-tier network with
//! distinct path-loss exponents, then against a simulation of a biased variant.

use hetnet::cli::{cmd_compare, SimOptions, TauGrid};
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let three = NetworkConfig::from_file(format!("{dir}/three_tier_mixed_alpha.toml"))?;
    let q = QuadratureSettings::default();
    let grid = TauGrid::default();
    let opts = SimOptions::new(20_000, 7);

    let report = cmd_compare(&three, &three, &opts, &grid, &q)?;
    println!("matching model:\n{}", report.to_text());
    let mut biased = three.clone();
    biased.tiers[2].bias = 10.0;
    let report = cmd_compare(&three, &biased, &opts, &grid, &q)?;
    println!("mismatched model:\n{}", report.to_text());
    Ok(())
}
