//! Builds a network in code, prints the equivalent TOML configuration, and
//! reads it back.

use hetnet::model::{per_km2_to_per_m2, watts_to_dbm};
use hetnet::{NetworkConfig, TierParams};

fn main() -> hetnet::Result<()> {
    let config = NetworkConfig::new(vec![
        TierParams::from_interface_units(46.0, 2.0, 3.7, 0.0),
        TierParams::from_interface_units(30.0, 15.0, 3.4, 8.0),
    ])
    .with_noise_power(hetnet::model::dbm_to_watts(-104.0))
    .with_ref_pathloss(hetnet::model::db_to_linear(-38.5))
    .with_user_density(per_km2_to_per_m2(60.0));

    let mut text = format!(
        "noise_dbm = {}\nl0_db = -38.5\nuser_density_per_km2 = 60.0\n",
        watts_to_dbm(config.noise_power)
    );
    for t in &config.tiers {
        text.push_str(&format!(
            "\n[[tier]]\npower_dbm = {}\ndensity_per_km2 = {}\nalpha = {}\nbias_db = {}\n",
            watts_to_dbm(t.power),
            t.density * 1e6,
            t.pathloss_exp,
            hetnet::model::linear_to_db(t.bias)
        ));
    }
    print!("{text}");
    let parsed = NetworkConfig::from_toml_str(&text)?;
    for (a, b) in parsed.tiers.iter().zip(&config.tiers) {
        assert!((a.power / b.power - 1.0).abs() < 1e-12);
        assert!((a.density / b.density - 1.0).abs() < 1e-12);
    }
    println!("round trip ok: {} tiers", parsed.num_tiers());
    Ok(())
}
