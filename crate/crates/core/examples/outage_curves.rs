//! Outage (SINR CDF) curves for a biased two-tier network, plus the closed
//! forms available when noise is negligible and exponents are equal.

use hetnet::analysis::outage_closed_form;
use hetnet::cli::{cmd_outage, TauGrid};
use hetnet::model::db_to_linear;
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let q = QuadratureSettings::default();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/macro_pico_biased.toml");
    let config = NetworkConfig::from_file(path)?;
    let grid = TauGrid {
        min_db: -10.0,
        max_db: 20.0,
        steps: 7,
    };
    print!("{}", cmd_outage(&config, &grid, &q)?.to_csv());

    let mut quiet = config.clone();
    quiet.noise_power = 0.0;
    for tau_db in [-5.0, 0.0, 5.0] {
        let cf = outage_closed_form(&quiet, db_to_linear(tau_db), &q)?;
        println!(
            "interference limited, {tau_db} dB: {:?} network = {:.6} per tier = {:?}",
            cf.case, cf.network, cf.per_tier
        );
    }
    Ok(())
}
