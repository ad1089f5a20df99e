//! Sweeps the pico bias and reports the minimum average user throughput,
//! which first rises as load moves off the macro tier and then falls.

use hetnet::cli::{sweep, SweepMetric, SweepVariable, TauGrid};
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/macro_pico_sweep.toml");
    let config = NetworkConfig::from_file(path)?;
    let biases = TauGrid {
        min_db: 0.0,
        max_db: 20.0,
        steps: 11,
    }
    .values_db()?;
    let curve = sweep(
        &config,
        SweepVariable::BiasDb { tier: 2 },
        &biases,
        SweepMetric::UserThroughput,
        &QuadratureSettings::default(),
    )?;
    print!("{}", curve.to_csv());
    let best = curve.rows.iter().max_by(|a, b| a.network.total_cmp(&b.network)).unwrap();
    println!("best bias: {} dB (Q = {:.4e} nats/s/Hz per user)", best.x, best.network);
    Ok(())
}
