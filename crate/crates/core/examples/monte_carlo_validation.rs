//! Simulates the typical user in a Poisson deployment and compares the
//! empirical SINR distribution, rate and association with the analysis.

use hetnet::analysis::{association_probabilities, ergodic_rate_network, outage_network};
use hetnet::model::db_to_linear;
use hetnet::montecarlo::{empirical_cdf, empirical_rate, run_campaign, SimSettings};
use hetnet::{NetworkConfig, QuadratureSettings};

fn main() -> hetnet::Result<()> {
    let q = QuadratureSettings::default();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/macro_pico_biased.toml");
    let config = NetworkConfig::from_file(path)?;
    let settings = SimSettings::new(config.clone(), 20_000, 2024);
    println!("window radius {:.0} m", settings.window_radius);
    let result = run_campaign(&settings)?;

    let taus_db = [-10.0, -5.0, 0.0, 5.0, 10.0, 20.0];
    let taus: Vec<f64> = taus_db.iter().map(|&d| db_to_linear(d)).collect();
    let cdf = empirical_cdf(&result.sinr, &taus)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "tau_db", "analytic", "simulated", "std_err");
    for ((db, tau), p) in taus_db.iter().zip(&taus).zip(&cdf.overall) {
        let o = outage_network(&config, *tau, &q)?;
        println!("{db:>8} {o:>10.5} {:>10.5} {:>10.5}", p.estimate, p.std_err);
    }

    let rate = empirical_rate(&result.sinr)?;
    println!(
        "rate: analytic {:.5}, simulated {:.5} +- {:.5} nats/s/Hz",
        ergodic_rate_network(&config, &q)?,
        rate.overall.mean,
        rate.overall.std_err
    );
    let a = association_probabilities(&config, &q)?;
    for k in 1..=config.num_tiers() {
        println!(
            "tier {k}: association analytic {:.4}, simulated {:.4}",
            a.tier(k),
            result.association_fractions[k - 1]
        );
    }
    Ok(())
}
