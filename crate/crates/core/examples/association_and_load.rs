//! Association probabilities, cell loads and serving-distance laws of a
//! macro/pico network, before and after biasing the pico tier.

use hetnet::analysis::{association_probabilities, cell_loads, serving_distance_cdf};
use hetnet::model::db_to_linear;
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/macro_pico_sweep.toml");
    let base = NetworkConfig::from_file(path)?;
    let q = QuadratureSettings::default();
    for bias_db in [0.0, 10.0, 20.0] {
        let mut c = base.clone();
        c.tiers[1].bias = db_to_linear(bias_db);
        let a = association_probabilities(&c, &q)?;
        let n = cell_loads(&c, &q)?;
        println!("pico bias {bias_db} dB");
        for k in 1..=c.num_tiers() {
            let median = bisect(|x| serving_distance_cdf(&c, k, x, &q).map(|f| f - 0.5))?;
            println!(
                "  tier {k}: A = {:.4}  N = {:.2} users/BS  median serving distance = {:.1} m",
                a.tier(k),
                n.tier(k),
                median
            );
        }
    }
    Ok(())
}

fn bisect(f: impl Fn(f64) -> hetnet::Result<f64>) -> hetnet::Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi)? < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
