//! Ergodic rate per tier and network-wide; for equal exponents without bias
//! or noise every tier reduces to the same single integral.

use hetnet::analysis::{ergodic_rate_unbiased, ergodic_rates};
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let q = QuadratureSettings::default();
    for alpha in [3.0, 3.5, 4.0, 5.0] {
        let r = ergodic_rate_unbiased(alpha, &q)?;
        println!("alpha = {alpha}: {r:.6} nats/s/Hz = {:.4} bit/s/Hz", r / std::f64::consts::LN_2);
    }
    for name in ["two_tier_equal_alpha.toml", "macro_pico_biased.toml", "three_tier_mixed_alpha.toml"] {
        let path = format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"));
        let c = NetworkConfig::from_file(path)?;
        let r = ergodic_rates(&c, &q)?;
        println!("{name}: per tier {:?}, network {:.6}", r.per_tier, r.network.unwrap());
    }
    Ok(())
}
