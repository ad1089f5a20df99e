//! Poisson point process simulation of the downlink seen by a typical user.
//!
//! Each replication drops every tier as a homogeneous PPP on a disc centered
//! at the user, associates the user with the base station of largest biased
//! received power, and draws unit-mean Rayleigh fading for the serving link
//! and every interferer. Replications use independent keyed random streams
//! (see [`rng`]) and run in parallel; results are merged in replication order.

mod grid;
pub mod rng;
pub mod stats;

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{validate, NetworkConfig};

use grid::BucketGrid;
pub use stats::{
    empirical_cdf, empirical_rate, ks_p_value, ks_statistic, EmpiricalCdf, EmpiricalRate, MeanEstimate,
    Proportion,
};

/// Rules used to size and check the simulation disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRule {
    /// Minimum expected number of base stations of the sparsest tier.
    pub min_sparse_count: f64,
    /// Maximum ratio between the mean interference from outside the disc and
    /// the mean interference inside it (see [`tail_interference_ratio`]).
    pub max_tail_ratio: f64,
}

impl Default for WindowRule {
    fn default() -> Self {
        Self {
            min_sparse_count: 500.0,
            max_tail_ratio: 1e-2,
        }
    }
}

/// Ratio of mean interference beyond `radius` to mean interference inside it.
///
/// Interference inside the disc is counted from each tier's mean
/// nearest-neighbor distance `1/(2√λ_j)` outward, which is where the closest
/// interferers of a typical user sit.
pub fn tail_interference_ratio(config: &NetworkConfig, radius: f64) -> f64 {
    let r0 = config.ref_distance;
    let radius = radius / r0;
    let mut tail = 0.0;
    let mut inside = 0.0;
    for (j, t) in config.tiers.iter().enumerate() {
        let lambda = config.normalized_density(j);
        let a = t.pathloss_exp;
        let near = 0.5 / lambda.sqrt();
        let w = 2.0 * PI * lambda * t.power / (a - 2.0);
        tail += w * radius.powf(2.0 - a);
        if radius > near {
            inside += w * (near.powf(2.0 - a) - radius.powf(2.0 - a));
        }
    }
    if inside > 0.0 {
        tail / inside
    } else {
        f64::INFINITY
    }
}

/// Smallest disc radius (meters) satisfying `rule` for `config`.
pub fn default_window_radius(config: &NetworkConfig, rule: &WindowRule) -> f64 {
    let lambda_min = config.tiers.iter().map(|t| t.density).fold(f64::INFINITY, f64::min);
    let mut radius = (rule.min_sparse_count / (PI * lambda_min)).sqrt();
    if tail_interference_ratio(config, radius) <= rule.max_tail_ratio {
        return radius;
    }
    let mut lo = radius;
    while tail_interference_ratio(config, radius) > rule.max_tail_ratio {
        lo = radius;
        radius *= 2.0;
    }
    let mut hi = radius;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail_interference_ratio(config, mid) > rule.max_tail_ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub config: NetworkConfig,
    /// Radius of the simulation disc in meters.
    pub window_radius: f64,
    pub replications: usize,
    pub fading_draws_per_realization: usize,
    pub master_seed: u64,
    /// Replications (from the first) that also drop users to measure cell load; 0 disables it.
    pub load_replications: usize,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    /// Re-derive the exclusion discs of every sample and fail on a violation.
    pub verify_exclusion: bool,
    pub window_rule: WindowRule,
}

impl SimSettings {
    /// Settings with the default window for `config` and one fading draw per realization.
    pub fn new(config: NetworkConfig, replications: usize, master_seed: u64) -> Self {
        let window_rule = WindowRule::default();
        Self {
            window_radius: default_window_radius(&config, &window_rule),
            config,
            replications,
            fading_draws_per_realization: 1,
            master_seed,
            load_replications: 0,
            threads: 0,
            verify_exclusion: false,
            window_rule,
        }
    }

    pub fn with_window_radius(mut self, radius: f64) -> Self {
        self.window_radius = radius;
        self
    }

    pub fn with_fading_draws(mut self, draws: usize) -> Self {
        self.fading_draws_per_realization = draws;
        self
    }

    pub fn with_load_replications(mut self, n: usize) -> Self {
        self.load_replications = n;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_exclusion_check(mut self, on: bool) -> Self {
        self.verify_exclusion = on;
        self
    }

    /// Checks counts and the window rule.
    pub fn validate(&self) -> Result<()> {
        validate(self.config.clone())?;
        let bad = |m: String| Err(Error::InvalidSimSettings(m));
        if !(self.window_radius > 0.0 && self.window_radius.is_finite()) {
            return bad(format!("window radius {} must be positive", self.window_radius));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.fading_draws_per_realization == 0 {
            return bad("fading draws per realization must be at least 1".into());
        }
        let lambda_min = self.config.tiers.iter().map(|t| t.density).fold(f64::INFINITY, f64::min);
        let sparse = lambda_min * PI * self.window_radius * self.window_radius;
        // Small slack so the default radius passes its own check.
        if sparse < self.window_rule.min_sparse_count * (1.0 - 1e-9) {
            return bad(format!(
                "window radius {:.1} m holds only {sparse:.1} base stations of the sparsest tier (need {})",
                self.window_radius, self.window_rule.min_sparse_count
            ));
        }
        let tail = tail_interference_ratio(&self.config, self.window_radius);
        if tail > self.window_rule.max_tail_ratio * (1.0 + 1e-9) {
            return bad(format!(
                "window radius {:.1} m leaves tail interference ratio {tail:.3e} above {:.1e}",
                self.window_radius, self.window_rule.max_tail_ratio
            ));
        }
        Ok(())
    }
}

/// Base station positions per tier, in meters, relative to the typical user.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Deployment {
    pub tiers: Vec<Vec<[f64; 2]>>,
}

impl Deployment {
    pub fn total(&self) -> usize {
        self.tiers.iter().map(Vec::len).sum()
    }
}

/// Serving base station of the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    /// 1-based tier.
    pub tier: usize,
    /// Index into `Deployment::tiers[tier - 1]`.
    pub index: usize,
    /// Distance in meters.
    pub distance: f64,
}

/// One simulated SINR observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    /// 1-based serving tier.
    pub tier: usize,
    pub sinr: f64,
    /// Serving distance in meters.
    pub distance: f64,
    /// `ln(1 + sinr)` in nats.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSinr {
    pub samples: Vec<SinrSample>,
    pub seed: u64,
    pub replications: usize,
    pub draws_per_realization: usize,
    pub tiers: usize,
}

impl EmpiricalSinr {
    /// Columnar CSV: `tier,sinr,distance,rate`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "tier,sinr,distance_m,rate_nats")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{}",
                s.tier,
                crate::cli::fmt_sig(s.sinr),
                crate::cli::fmt_sig(s.distance),
                crate::cli::fmt_sig(s.rate)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub sinr: EmpiricalSinr,
    /// Realizations served by each tier.
    pub association_counts: Vec<u64>,
    pub association_fractions: Vec<f64>,
    /// Mean users per interior base station of each tier, when load was measured.
    pub mean_load: Option<Vec<f64>>,
}

/// Drops one PPP realization per tier on the simulation disc.
pub fn sample_deployment(settings: &SimSettings, seed: u64) -> Deployment {
    let mut rng = rng::substream(seed, 0, rng::DEPLOYMENT_DRAW);
    let mut deployment = Deployment::default();
    fill_deployment(&settings.config, settings.window_radius, &mut rng, &mut deployment);
    deployment
}

fn fill_deployment(config: &NetworkConfig, radius: f64, rng: &mut ChaCha8Rng, out: &mut Deployment) {
    out.tiers.resize_with(config.num_tiers(), Vec::new);
    let area = PI * radius * radius;
    for (t, points) in config.tiers.iter().zip(out.tiers.iter_mut()) {
        drop_ppp(t.density * area, radius, rng, points);
    }
}

fn drop_ppp(mean: f64, radius: f64, rng: &mut ChaCha8Rng, points: &mut Vec<[f64; 2]>) {
    points.clear();
    let n = if mean > 0.0 {
        Poisson::new(mean).expect("finite positive Poisson mean").sample(rng) as usize
    } else {
        0
    };
    points.reserve(n);
    let r2 = radius * radius;
    while points.len() < n {
        let x = radius * (2.0 * rng.random::<f64>() - 1.0);
        let y = radius * (2.0 * rng.random::<f64>() - 1.0);
        if x * x + y * y <= r2 {
            points.push([x, y]);
        }
    }
}

/// Per-tier association constants: `ln(P_j B_j)` and `α_j / 2`.
struct AssocKeys {
    log_pb: Vec<f64>,
    half_alpha: Vec<f64>,
    log_r0_sq: f64,
}

impl AssocKeys {
    fn new(config: &NetworkConfig) -> Self {
        Self {
            log_pb: config.tiers.iter().map(|t| (t.power * t.bias).ln()).collect(),
            half_alpha: config.tiers.iter().map(|t| 0.5 * t.pathloss_exp).collect(),
            log_r0_sq: 2.0 * config.ref_distance.ln(),
        }
    }

    /// Log of biased received power (up to the common `ln L0`) at squared distance `d2`.
    #[inline]
    fn key(&self, tier: usize, log_d2: f64) -> f64 {
        self.log_pb[tier] - self.half_alpha[tier] * (log_d2 - self.log_r0_sq)
    }
}

/// `(key, tier, d2)` ordering: larger key, then lower tier, then closer.
#[inline]
fn better(a: (f64, usize, f64), b: (f64, usize, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && a.2 < b.2)))
}

/// Base station of maximum biased received power at the origin.
///
/// Ties go to the lower tier index, then the smaller distance.
pub fn associate(deployment: &Deployment, config: &NetworkConfig) -> Result<Association> {
    let keys = AssocKeys::new(config);
    let mut best: Option<((f64, usize, f64), usize)> = None;
    for (j, points) in deployment.tiers.iter().enumerate() {
        for (i, p) in points.iter().enumerate() {
            let d2 = p[0] * p[0] + p[1] * p[1];
            let cand = (keys.key(j, d2.ln()), j, d2);
            if best.is_none_or(|(b, _)| better(cand, b)) {
                best = Some((cand, i));
            }
        }
    }
    let ((_, j, d2), i) = best.ok_or(Error::EmptyDeployment)?;
    Ok(Association {
        tier: j + 1,
        index: i,
        distance: d2.sqrt(),
    })
}

/// One SINR draw with fresh unit-mean exponential fading on every link.
pub fn draw_sinr<R: Rng + ?Sized>(
    deployment: &Deployment,
    association: &Association,
    config: &NetworkConfig,
    rng: &mut R,
) -> f64 {
    let r0 = config.ref_distance;
    let serving = &config.tiers[association.tier - 1];
    let g: f64 = Exp1.sample(rng);
    let signal = serving.power * g * (association.distance / r0).powf(-serving.pathloss_exp);
    let mut interference = 0.0;
    for (j, points) in deployment.tiers.iter().enumerate() {
        let t = &config.tiers[j];
        for (i, p) in points.iter().enumerate() {
            if j + 1 == association.tier && i == association.index {
                continue;
            }
            let h: f64 = Exp1.sample(rng);
            let d = (p[0] * p[0] + p[1] * p[1]).sqrt() / r0;
            interference += t.power * h * d.powf(-t.pathloss_exp);
        }
    }
    signal / (interference + config.noise_power / config.ref_pathloss)
}

/// Number of base stations inside the exclusion disc of their tier.
///
/// Given serving tier `k` at distance `x`, no tier-`j` base station may lie
/// closer than `(P̂_j B̂_j)^{1/α_j} x^{α_k/α_j}` (distances in units of `r0`).
pub fn exclusion_violations(deployment: &Deployment, association: &Association, config: &NetworkConfig) -> usize {
    let k = association.tier - 1;
    let serving = &config.tiers[k];
    let x = association.distance / config.ref_distance;
    let mut violations = 0;
    for (j, points) in deployment.tiers.iter().enumerate() {
        let t = &config.tiers[j];
        let pb = (t.power / serving.power) * (t.bias / serving.bias);
        let radius = pb.powf(1.0 / t.pathloss_exp) * x.powf(serving.pathloss_exp / t.pathloss_exp);
        for (i, p) in points.iter().enumerate() {
            if j == k && i == association.index {
                continue;
            }
            let d = (p[0] * p[0] + p[1] * p[1]).sqrt() / config.ref_distance;
            if d < radius * (1.0 - 1e-9) {
                violations += 1;
            }
        }
    }
    violations
}

/// Scratch buffers reused across the replications of one worker.
#[derive(Default)]
struct Scratch {
    deployment: Deployment,
    log_d2: Vec<Vec<f64>>,
}

struct ReplicationOutput {
    samples: Vec<SinrSample>,
    serving_tier: usize,
    /// Per tier: (users served by interior base stations, interior base stations).
    load: Option<Vec<(u64, u64)>>,
}

fn run_replication(settings: &SimSettings, keys: &AssocKeys, rep: u64, scratch: &mut Scratch) -> Result<ReplicationOutput> {
    let config = &settings.config;
    let seed = settings.master_seed;
    let mut rng = rng::substream(seed, rep, rng::DEPLOYMENT_DRAW);
    fill_deployment(config, settings.window_radius, &mut rng, &mut scratch.deployment);
    let deployment = &scratch.deployment;

    scratch.log_d2.resize_with(config.num_tiers(), Vec::new);
    let mut best: Option<((f64, usize, f64), usize)> = None;
    for (j, points) in deployment.tiers.iter().enumerate() {
        let logs = &mut scratch.log_d2[j];
        logs.clear();
        for (i, p) in points.iter().enumerate() {
            let d2 = p[0] * p[0] + p[1] * p[1];
            let ld = d2.ln();
            logs.push(ld);
            let cand = (keys.key(j, ld), j, d2);
            if best.is_none_or(|(b, _)| better(cand, b)) {
                best = Some((cand, i));
            }
        }
    }
    let ((_, k, d2), serving_index) = best.ok_or(Error::EmptyDeployment)?;
    let association = Association {
        tier: k + 1,
        index: serving_index,
        distance: d2.sqrt(),
    };
    if settings.verify_exclusion {
        let v = exclusion_violations(deployment, &association, config);
        if v > 0 {
            return Err(Error::InvalidSimSettings(format!(
                "replication {rep}: {v} base stations inside their exclusion disc"
            )));
        }
    }

    let noise = config.noise_power / config.ref_pathloss;
    let serving = &config.tiers[k];
    let path_gain = |j: usize, ld: f64| (-keys.half_alpha[j] * (ld - keys.log_r0_sq)).exp();
    let serving_gain = serving.power * path_gain(k, scratch.log_d2[k][serving_index]);
    let mut samples = Vec::with_capacity(settings.fading_draws_per_realization);
    for d in 0..settings.fading_draws_per_realization as u64 {
        let mut frng = rng::substream(seed, rep, rng::fading_draw(d));
        let g: f64 = Exp1.sample(&mut frng);
        let mut interference = 0.0;
        for (j, logs) in scratch.log_d2.iter().enumerate() {
            let power = config.tiers[j].power;
            let mut tier_sum = 0.0;
            for (i, &ld) in logs.iter().enumerate() {
                let h: f64 = Exp1.sample(&mut frng);
                if j == k && i == serving_index {
                    continue;
                }
                tier_sum += h * path_gain(j, ld);
            }
            interference += power * tier_sum;
        }
        let sinr = serving_gain * g / (interference + noise);
        samples.push(SinrSample {
            tier: k + 1,
            sinr,
            distance: association.distance,
            rate: sinr.ln_1p(),
        });
    }

    let load = if (rep as usize) < settings.load_replications {
        Some(measure_load(settings, keys, rep, deployment))
    } else {
        None
    };
    Ok(ReplicationOutput {
        samples,
        serving_tier: k + 1,
        load,
    })
}

/// Drops a user PPP, associates every user, and counts users per interior base station.
fn measure_load(settings: &SimSettings, keys: &AssocKeys, rep: u64, deployment: &Deployment) -> Vec<(u64, u64)> {
    let config = &settings.config;
    let radius = settings.window_radius;
    let interior2 = (0.9 * radius).powi(2);
    let mut rng = rng::substream(settings.master_seed, rep, rng::USER_DRAW);
    let mut users = Vec::new();
    drop_ppp(config.user_density * PI * radius * radius, radius, &mut rng, &mut users);

    let grids: Vec<BucketGrid> = deployment.tiers.iter().map(|p| BucketGrid::new(p, radius)).collect();
    let mut counts: Vec<(u64, u64)> = deployment
        .tiers
        .iter()
        .map(|p| (0, p.iter().filter(|q| q[0] * q[0] + q[1] * q[1] < interior2).count() as u64))
        .collect();
    for u in &users {
        let mut best: Option<((f64, usize, f64), usize)> = None;
        for (j, g) in grids.iter().enumerate() {
            if let Some((i, d2)) = g.nearest(u) {
                let cand = (keys.key(j, d2.ln()), j, d2);
                if best.is_none_or(|(b, _)| better(cand, b)) {
                    best = Some((cand, i));
                }
            }
        }
        if let Some(((_, j, _), i)) = best {
            let p = deployment.tiers[j][i];
            if p[0] * p[0] + p[1] * p[1] < interior2 {
                counts[j].0 += 1;
            }
        }
    }
    counts
}

/// Runs every replication and merges the results in replication order.
pub fn run_campaign(settings: &SimSettings) -> Result<CampaignResult> {
    settings.validate()?;
    let keys = AssocKeys::new(&settings.config);
    let work = || -> Result<Vec<ReplicationOutput>> {
        (0..settings.replications as u64)
            .into_par_iter()
            .map_init(Scratch::default, |scratch, rep| run_replication(settings, &keys, rep, scratch))
            .collect()
    };
    let outputs = if settings.threads == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(settings.threads)
            .build()
            .map_err(|e| Error::InvalidSimSettings(e.to_string()))?
            .install(work)?
    };

    let k = settings.config.num_tiers();
    let mut association_counts = vec![0u64; k];
    let mut load_totals = vec![(0u64, 0u64); k];
    let mut measured_load = false;
    let mut samples = Vec::with_capacity(settings.replications * settings.fading_draws_per_realization);
    for out in outputs {
        association_counts[out.serving_tier - 1] += 1;
        samples.extend(out.samples);
        if let Some(load) = out.load {
            measured_load = true;
            for (acc, (users, bs)) in load_totals.iter_mut().zip(load) {
                acc.0 += users;
                acc.1 += bs;
            }
        }
    }
    let total = settings.replications as f64;
    Ok(CampaignResult {
        sinr: EmpiricalSinr {
            samples,
            seed: settings.master_seed,
            replications: settings.replications,
            draws_per_realization: settings.fading_draws_per_realization,
            tiers: k,
        },
        association_fractions: association_counts.iter().map(|&c| c as f64 / total).collect(),
        association_counts,
        mean_load: measured_load.then(|| {
            load_totals
                .iter()
                .map(|&(users, bs)| if bs == 0 { f64::NAN } else { users as f64 / bs as f64 })
                .collect()
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TierParams;
    use rand::SeedableRng;

    fn one_tier(alpha: f64) -> NetworkConfig {
        NetworkConfig::new(vec![TierParams::new(1.0, 1e-4, alpha, 1.0)])
    }

    #[test]
    fn single_base_station_is_served() {
        let d = Deployment {
            tiers: vec![vec![[3.0, 4.0]]],
        };
        let a = associate(&d, &one_tier(4.0)).unwrap();
        assert_eq!((a.tier, a.index), (1, 0));
        assert!((a.distance - 5.0).abs() < 1e-12);
    }

    #[test]
    fn nearer_base_station_wins_within_tier() {
        let d = Deployment {
            tiers: vec![vec![[0.0, 200.0], [100.0, 0.0]]],
        };
        assert_eq!(associate(&d, &one_tier(3.5)).unwrap().index, 1);
    }

    #[test]
    fn empty_deployment_is_an_error() {
        let d = Deployment { tiers: vec![vec![]] };
        assert_eq!(associate(&d, &one_tier(4.0)).unwrap_err(), Error::EmptyDeployment);
    }

    #[test]
    fn exact_tie_goes_to_lower_tier() {
        let c = NetworkConfig::new(vec![
            TierParams::new(1.0, 1e-4, 4.0, 1.0),
            TierParams::new(1.0, 1e-4, 4.0, 1.0),
        ]);
        let d = Deployment {
            tiers: vec![vec![[0.0, 10.0]], vec![[10.0, 0.0]]],
        };
        assert_eq!(associate(&d, &c).unwrap().tier, 1);
    }

    #[test]
    fn bias_moves_association() {
        let mut c = NetworkConfig::new(vec![
            TierParams::new(100.0, 1e-4, 4.0, 1.0),
            TierParams::new(1.0, 1e-4, 4.0, 1.0),
        ]);
        let d = Deployment {
            tiers: vec![vec![[0.0, 200.0]], vec![[100.0, 0.0]]],
        };
        // 100·200⁻⁴ > 1·100⁻⁴ until the small cell gets a bias above 6.25.
        assert_eq!(associate(&d, &c).unwrap().tier, 1);
        c.tiers[1].bias = 10.0;
        assert_eq!(associate(&d, &c).unwrap().tier, 2);
    }

    #[test]
    fn no_interferers_gives_exponential_snr() {
        let c = one_tier(4.0).with_noise_power(1e-3);
        let d = Deployment {
            tiers: vec![vec![[10.0, 0.0]]],
        };
        let a = associate(&d, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20000;
        let mean_snr = 1.0 * 10f64.powf(-4.0) / 1e-3;
        let mean: f64 = (0..n).map(|_| draw_sinr(&d, &a, &c, &mut rng)).sum::<f64>() / n as f64;
        // Exponential: standard error of the mean is mean/√n.
        assert!((mean / mean_snr - 1.0).abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn equal_distance_interferer_gives_ratio_of_exponentials() {
        let c = one_tier(3.0);
        let d = Deployment {
            tiers: vec![vec![[50.0, 0.0], [0.0, 50.0]]],
        };
        let a = associate(&d, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 40000;
        let draws: Vec<f64> = (0..n).map(|_| draw_sinr(&d, &a, &c, &mut rng)).collect();
        for tau in [0.25, 1.0, 4.0] {
            let emp = draws.iter().filter(|&&s| s <= tau).count() as f64 / n as f64;
            let exact = tau / (1.0 + tau);
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!((emp - exact).abs() < 4.0 * se, "tau={tau}: {emp} vs {exact}");
        }
    }

    #[test]
    fn deployment_is_deterministic() {
        let c = one_tier(4.0);
        let s = SimSettings::new(c, 1, 0);
        assert_eq!(sample_deployment(&s, 42), sample_deployment(&s, 42));
        assert_ne!(sample_deployment(&s, 42), sample_deployment(&s, 43));
    }

    #[test]
    fn deployment_points_lie_in_window() {
        let s = SimSettings::new(one_tier(4.0), 1, 0);
        let d = sample_deployment(&s, 1);
        let r2 = s.window_radius * s.window_radius;
        assert!(d.tiers[0].iter().all(|p| p[0] * p[0] + p[1] * p[1] <= r2));
    }

    #[test]
    fn default_window_meets_rules() {
        let c = NetworkConfig::new(vec![
            TierParams::new(200.0, 1.0 / (PI * 500.0 * 500.0), 3.5, 1.0),
            TierParams::new(2.0, 10.0 / (PI * 500.0 * 500.0), 3.5, 1.0),
        ]);
        let s = SimSettings::new(c.clone(), 1, 0);
        s.validate().unwrap();
        // 500 macro base stations on average.
        assert!((s.window_radius - 500.0 * 500f64.sqrt()).abs() < 1e-6);
        assert!(s.clone().with_window_radius(0.5 * s.window_radius).validate().is_err());

        let small_alpha = NetworkConfig::new(vec![TierParams::new(1.0, 1e-4, 2.5, 1.0)]);
        let r = default_window_radius(&small_alpha, &WindowRule::default());
        assert!(tail_interference_ratio(&small_alpha, r) <= 1e-2 * (1.0 + 1e-9));
        assert!(tail_interference_ratio(&small_alpha, 0.99 * r) > 1e-2);
    }

    #[test]
    fn zero_replications_rejected() {
        let s = SimSettings::new(one_tier(4.0), 0, 0);
        assert!(matches!(run_campaign(&s), Err(Error::InvalidSimSettings(_))));
    }

    #[test]
    fn one_replication_one_sample() {
        let s = SimSettings::new(one_tier(4.0), 1, 9);
        let r = run_campaign(&s).unwrap();
        assert_eq!(r.sinr.samples.len(), 1);
        assert_eq!(r.association_counts, vec![1]);
        assert!(r.sinr.samples[0].sinr > 0.0);
    }

    #[test]
    fn multiple_draws_per_realization() {
        let s = SimSettings::new(one_tier(4.0), 3, 9).with_fading_draws(4);
        let r = run_campaign(&s).unwrap();
        assert_eq!(r.sinr.samples.len(), 12);
        // Draws within a realization share geometry.
        assert!(r.sinr.samples[..4].iter().all(|x| x.distance == r.sinr.samples[0].distance));
    }
}
