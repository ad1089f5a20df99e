//! Command implementations behind the `hetnet` binary.
//!
//! Each command takes an already-loaded [`NetworkConfig`] and returns a
//! report that renders to CSV (or text, for `compare`). The binary only
//! parses flags, loads the config file and writes the output.

use std::fmt::Write as _;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analysis::{
    association_probabilities, avg_user_throughputs, cell_loads, ergodic_rates, min_with_ties, outage,
    MinThroughput, PerTierMetric,
};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, NetworkConfig};
use crate::montecarlo::{empirical_cdf, empirical_rate, run_campaign, CampaignResult, SimSettings};
use crate::specfun::QuadratureSettings;

/// Maximum |analytic − empirical| network outage accepted by `compare`.
pub const OUTAGE_TOLERANCE: f64 = 0.015;
/// Maximum relative error of the simulated network ergodic rate accepted by `compare`.
pub const RATE_REL_TOLERANCE: f64 = 0.02;
/// `compare` fails when the association χ² test rejects at this level.
pub const CHI2_SIGNIFICANCE: f64 = 1e-3;

/// Formats with 9 significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.8e}")
    }
}

/// Evenly spaced SINR thresholds in dB, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    pub min_db: f64,
    pub max_db: f64,
    pub steps: usize,
}

impl Default for TauGrid {
    fn default() -> Self {
        Self {
            min_db: -10.0,
            max_db: 20.0,
            steps: 31,
        }
    }
}

impl TauGrid {
    pub fn values_db(&self) -> Result<Vec<f64>> {
        linspace(self.min_db, self.max_db, self.steps)
    }
}

fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Usage("grid needs at least one step".into()));
    }
    if !(min <= max) {
        return Err(Error::Usage(format!("grid minimum {min} exceeds maximum {max}")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { max } else { min + h * i as f64 }).collect())
}

/// What a curve is swept over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepVariable {
    /// SINR threshold in dB.
    TauDb,
    /// Bias of one tier (1-based) in dB.
    BiasDb { tier: usize },
    /// Density of one tier (1-based) as a multiple of tier 1's density.
    DensityRatio { tier: usize },
}

impl SweepVariable {
    fn column(&self) -> String {
        match self {
            SweepVariable::TauDb => "tau_db".into(),
            SweepVariable::BiasDb { tier } => format!("bias_db_tier{tier}"),
            SweepVariable::DensityRatio { tier } => format!("density_ratio_tier{tier}"),
        }
    }
}

/// Metric evaluated at each point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMetric {
    /// Outage at a fixed linear threshold (ignored for threshold sweeps).
    Outage { tau: f64 },
    ErgodicRate,
    /// Per-tier average user throughput; the network column holds their minimum.
    UserThroughput,
}

impl SweepMetric {
    fn name(&self) -> &'static str {
        match self {
            SweepMetric::Outage { .. } => "outage",
            SweepMetric::ErgodicRate => "rate_nats",
            SweepMetric::UserThroughput => "user_throughput_nats",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub x: f64,
    pub per_tier: Vec<f64>,
    pub network: f64,
    /// Simulated network value and its standard error.
    pub mc: Option<(f64, f64)>,
}

/// A swept metric table, rows ascending in the sweep variable.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveResult {
    pub sweep: SweepVariable,
    pub metric: String,
    pub tiers: usize,
    pub rows: Vec<CurveRow>,
}

impl CurveResult {
    /// Value columns, excluding the extra linear threshold column of τ sweeps.
    pub fn column_count(&self) -> usize {
        let mc = self.rows.first().is_some_and(|r| r.mc.is_some());
        1 + self.tiers + 1 + if mc { 2 } else { 0 }
    }

    pub fn to_csv(&self) -> String {
        let mc = self.rows.first().is_some_and(|r| r.mc.is_some());
        let mut out = self.sweep.column();
        if self.sweep == SweepVariable::TauDb {
            out.push_str(",tau_linear");
        }
        for k in 1..=self.tiers {
            let _ = write!(out, ",{}_tier{k}", self.metric);
        }
        let _ = write!(out, ",{}_network", self.metric);
        if mc {
            let _ = write!(out, ",mc_{}_network,mc_std_err", self.metric);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&fmt_sig(row.x));
            if self.sweep == SweepVariable::TauDb {
                let _ = write!(out, ",{}", fmt_sig(db_to_linear(row.x)));
            }
            for v in &row.per_tier {
                let _ = write!(out, ",{}", fmt_sig(*v));
            }
            let _ = write!(out, ",{}", fmt_sig(row.network));
            if let Some((est, se)) = row.mc {
                let _ = write!(out, ",{},{}", fmt_sig(est), fmt_sig(se));
            }
            out.push('\n');
        }
        out
    }
}

/// Per-tier and network outage on a dB threshold grid.
pub fn cmd_outage(config: &NetworkConfig, grid: &TauGrid, q: &QuadratureSettings) -> Result<CurveResult> {
    let rows = grid
        .values_db()?
        .into_iter()
        .map(|tau_db| {
            let m = outage(config, db_to_linear(tau_db), q).map_err(|e| at_tau(e, tau_db))?;
            Ok(CurveRow {
                x: tau_db,
                network: m.network.unwrap_or(f64::NAN),
                per_tier: m.per_tier,
                mc: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveResult {
        sweep: SweepVariable::TauDb,
        metric: "outage".into(),
        tiers: config.num_tiers(),
        rows,
    })
}

fn at_tau(e: Error, tau_db: f64) -> Error {
    match e {
        Error::QuadratureFailure(m) => Error::QuadratureFailure(format!("at tau = {tau_db} dB: {m}")),
        other => other,
    }
}

/// Ergodic rate, load and per-user throughput of every tier.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rates: PerTierMetric,
    pub association: PerTierMetric,
    pub loads: Option<PerTierMetric>,
    pub throughput: Option<MinThroughput>,
}

impl RateReport {
    /// Rows `metric,tier1..tierK,network`; the network column of the
    /// throughput row holds the minimum, and `min_throughput_tier` its argmin.
    pub fn to_csv(&self) -> String {
        let k = self.rates.per_tier.len();
        let mut out = String::from("metric");
        for j in 1..=k {
            let _ = write!(out, ",tier{j}");
        }
        out.push_str(",network\n");
        let mut row = |name: &str, vals: &[f64], net: Option<f64>| {
            out.push_str(name);
            for v in vals {
                let _ = write!(out, ",{}", fmt_sig(*v));
            }
            let _ = writeln!(out, ",{}", net.map(fmt_sig).unwrap_or_default());
        };
        row("ergodic_rate_nats", &self.rates.per_tier, self.rates.network);
        row("assoc_prob", &self.association.per_tier, self.association.network);
        if let (Some(loads), Some(t)) = (&self.loads, &self.throughput) {
            row("cell_load", &loads.per_tier, None);
            row("user_throughput_nats", &t.per_tier, Some(t.value));
            out.push_str("min_throughput_tier");
            for _ in 0..k {
                out.push(',');
            }
            let _ = writeln!(out, ",{}", t.tier);
        }
        out
    }
}

/// Rates for every tier; load and throughput only when users are present.
pub fn cmd_rate(config: &NetworkConfig, q: &QuadratureSettings) -> Result<RateReport> {
    let rates = ergodic_rates(config, q)?;
    let association = association_probabilities(config, q)?;
    let (loads, throughput) = if config.user_density > 0.0 {
        let loads = cell_loads(config, q)?;
        let per_user = rates.per_tier.iter().zip(&loads.per_tier).map(|(r, n)| r / n).collect();
        (Some(loads), Some(min_with_ties(per_user)))
    } else {
        (None, None)
    };
    Ok(RateReport {
        rates,
        association,
        loads,
        throughput,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssocReport {
    pub association: PerTierMetric,
    pub loads: PerTierMetric,
}

impl AssocReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tier,assoc_prob,cell_load\n");
        for (k, (a, n)) in self.association.per_tier.iter().zip(&self.loads.per_tier).enumerate() {
            let _ = writeln!(out, "{},{},{}", k + 1, fmt_sig(*a), fmt_sig(*n));
        }
        out
    }
}

pub fn cmd_assoc(config: &NetworkConfig, q: &QuadratureSettings) -> Result<AssocReport> {
    Ok(AssocReport {
        association: association_probabilities(config, q)?,
        loads: cell_loads(config, q)?,
    })
}

/// Evaluates `metric` while one tier's bias or density moves over `values`.
///
/// Bias values are in dB; density values are multiples of tier 1's density.
pub fn sweep(
    config: &NetworkConfig,
    variable: SweepVariable,
    values: &[f64],
    metric: SweepMetric,
    q: &QuadratureSettings,
) -> Result<CurveResult> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = sorted
        .into_iter()
        .map(|x| {
            let mut c = config.clone();
            let metric = match variable {
                SweepVariable::TauDb => match metric {
                    SweepMetric::Outage { .. } => SweepMetric::Outage { tau: db_to_linear(x) },
                    _ => return Err(Error::Usage("threshold sweeps only apply to outage".into())),
                },
                SweepVariable::BiasDb { tier } => {
                    let pos = c.tier_position(tier)?;
                    c.tiers[pos].bias = db_to_linear(x);
                    metric
                }
                SweepVariable::DensityRatio { tier } => {
                    let pos = c.tier_position(tier)?;
                    c.tiers[pos].density = config.tiers[0].density * x;
                    metric
                }
            };
            let c = crate::model::validate(c)?;
            let (per_tier, network) = match metric {
                SweepMetric::Outage { tau } => {
                    let m = outage(&c, tau, q)?;
                    (m.per_tier, m.network.unwrap_or(f64::NAN))
                }
                SweepMetric::ErgodicRate => {
                    let m = ergodic_rates(&c, q)?;
                    (m.per_tier, m.network.unwrap_or(f64::NAN))
                }
                SweepMetric::UserThroughput => {
                    let m = min_with_ties(avg_user_throughputs(&c, q)?.per_tier);
                    (m.per_tier, m.value)
                }
            };
            Ok(CurveRow {
                x,
                per_tier,
                network,
                mc: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveResult {
        sweep: variable,
        metric: metric.name().into(),
        tiers: config.num_tiers(),
        rows,
    })
}

/// Monte Carlo controls shared by `simulate` and `compare`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub replications: usize,
    pub seed: u64,
    pub threads: usize,
    pub draws_per_realization: usize,
    pub window_radius: Option<f64>,
    pub load_replications: usize,
}

impl SimOptions {
    pub fn new(replications: usize, seed: u64) -> Self {
        Self {
            replications,
            seed,
            threads: 0,
            draws_per_realization: 1,
            window_radius: None,
            load_replications: 0,
        }
    }

    fn settings(&self, config: &NetworkConfig) -> Result<SimSettings> {
        if self.replications == 0 {
            return Err(Error::Usage("--replications must be at least 1".into()));
        }
        let mut s = SimSettings::new(config.clone(), self.replications, self.seed)
            .with_threads(self.threads)
            .with_fading_draws(self.draws_per_realization)
            .with_load_replications(self.load_replications);
        if let Some(r) = self.window_radius {
            s = s.with_window_radius(r);
        }
        Ok(s)
    }
}

pub struct SimulateOutput {
    /// Analytic outage per tier and network with the simulated network outage alongside.
    pub curve: CurveResult,
    pub campaign: CampaignResult,
    pub summary: String,
}

/// Runs a campaign and tabulates its outage next to the analytic curve.
pub fn cmd_simulate(
    config: &NetworkConfig,
    opts: &SimOptions,
    grid: &TauGrid,
    q: &QuadratureSettings,
) -> Result<SimulateOutput> {
    let settings = opts.settings(config)?;
    let campaign = run_campaign(&settings)?;
    let mut curve = cmd_outage(config, grid, q)?;
    let taus: Vec<f64> = curve.rows.iter().map(|r| db_to_linear(r.x)).collect();
    let cdf = empirical_cdf(&campaign.sinr, &taus)?;
    for (row, p) in curve.rows.iter_mut().zip(&cdf.overall) {
        row.mc = Some((p.estimate, p.std_err));
    }
    let rate = empirical_rate(&campaign.sinr)?;
    let assoc = association_probabilities(config, q)?;
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "replications={} seed={} window_radius_m={} samples={}",
        settings.replications,
        settings.master_seed,
        fmt_sig(settings.window_radius),
        campaign.sinr.samples.len()
    );
    for k in 0..config.num_tiers() {
        let _ = writeln!(
            summary,
            "tier {}: assoc empirical={} analytic={} mean_rate_nats={}",
            k + 1,
            fmt_sig(campaign.association_fractions[k]),
            fmt_sig(assoc.per_tier[k]),
            fmt_sig(rate.per_tier[k].mean)
        );
    }
    let _ = writeln!(
        summary,
        "network mean_rate_nats={} std_err={}",
        fmt_sig(rate.overall.mean),
        fmt_sig(rate.overall.std_err)
    );
    if let Some(load) = &campaign.mean_load {
        let loads: Vec<String> = load.iter().map(|v| fmt_sig(*v)).collect();
        let _ = writeln!(summary, "empirical mean load per tier: {}", loads.join(" "));
    }
    Ok(SimulateOutput {
        curve,
        campaign,
        summary,
    })
}

/// Outcome of checking analytic results against a simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub max_outage_deviation: f64,
    pub max_deviation_tau_db: f64,
    pub analytic_rate: f64,
    pub simulated_rate: f64,
    pub rate_rel_error: f64,
    pub chi2: f64,
    pub chi2_p_value: f64,
    pub outage_pass: bool,
    pub rate_pass: bool,
    pub association_pass: bool,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.outage_pass && self.rate_pass && self.association_pass
    }

    pub fn to_text(&self) -> String {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "outage: max |analytic - empirical| = {} at tau = {} dB (tolerance {}) {}",
            fmt_sig(self.max_outage_deviation),
            fmt_sig(self.max_deviation_tau_db),
            OUTAGE_TOLERANCE,
            verdict(self.outage_pass)
        );
        let _ = writeln!(
            out,
            "rate: analytic = {} empirical = {} relative error = {} (tolerance {}) {}",
            fmt_sig(self.analytic_rate),
            fmt_sig(self.simulated_rate),
            fmt_sig(self.rate_rel_error),
            RATE_REL_TOLERANCE,
            verdict(self.rate_pass)
        );
        let _ = writeln!(
            out,
            "association: chi2 = {} p = {} (reject below {}) {}",
            fmt_sig(self.chi2),
            fmt_sig(self.chi2_p_value),
            CHI2_SIGNIFICANCE,
            verdict(self.association_pass)
        );
        let _ = writeln!(out, "overall: {}", verdict(self.passed()));
        out
    }
}

/// Compares the analytic metrics of `analytic` with a simulation of `simulated`.
///
/// Passing different configurations gives a negative control.
pub fn cmd_compare(
    analytic: &NetworkConfig,
    simulated: &NetworkConfig,
    opts: &SimOptions,
    grid: &TauGrid,
    q: &QuadratureSettings,
) -> Result<CompareReport> {
    if analytic.num_tiers() != simulated.num_tiers() {
        return Err(Error::Usage("compared configurations must have the same number of tiers".into()));
    }
    let campaign = run_campaign(&opts.settings(simulated)?)?;
    let curve = cmd_outage(analytic, grid, q)?;
    let taus: Vec<f64> = curve.rows.iter().map(|r| db_to_linear(r.x)).collect();
    let cdf = empirical_cdf(&campaign.sinr, &taus)?;
    let (max_outage_deviation, max_deviation_tau_db) = curve
        .rows
        .iter()
        .zip(&cdf.overall)
        .map(|(row, p)| ((row.network - p.estimate).abs(), row.x))
        .fold((0.0, f64::NAN), |acc, cur| if cur.0 > acc.0 || acc.1.is_nan() { cur } else { acc });

    let analytic_rate = ergodic_rates(analytic, q)?.network.unwrap_or(f64::NAN);
    let simulated_rate = empirical_rate(&campaign.sinr)?.overall.mean;
    let rate_rel_error = (simulated_rate - analytic_rate).abs() / analytic_rate;

    let assoc = association_probabilities(analytic, q)?;
    let n = campaign.sinr.replications as f64;
    let chi2: f64 = campaign
        .association_counts
        .iter()
        .zip(&assoc.per_tier)
        .map(|(&obs, &a)| {
            let expected = n * a;
            (obs as f64 - expected).powi(2) / expected
        })
        .sum();
    let dof = analytic.num_tiers() - 1;
    let chi2_p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Usage(e.to_string()))?;
        1.0 - dist.cdf(chi2)
    };
    Ok(CompareReport {
        max_outage_deviation,
        max_deviation_tau_db,
        analytic_rate,
        simulated_rate,
        rate_rel_error,
        chi2,
        chi2_p_value,
        outage_pass: max_outage_deviation <= OUTAGE_TOLERANCE,
        rate_pass: rate_rel_error <= RATE_REL_TOLERANCE,
        association_pass: chi2_p_value >= CHI2_SIGNIFICANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TierParams;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn single_alpha4() -> NetworkConfig {
        NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)])
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.4399008464884426), "4.39900846e-1");
        assert_eq!(fmt_sig(1.0), "1.00000000e0");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = TauGrid::default().values_db().unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!(g[0], -10.0);
        assert_eq!(g[30], 20.0);
        assert_eq!(g[10], 0.0);
        assert!(TauGrid { steps: 0, ..TauGrid::default() }.values_db().is_err());
    }

    #[test]
    fn outage_curve_single_tier() {
        let grid = TauGrid {
            min_db: -10.0,
            max_db: 10.0,
            steps: 3,
        };
        let curve = cmd_outage(&single_alpha4(), &grid, &q()).unwrap();
        assert_eq!(curve.rows.len(), 3);
        assert_eq!(curve.column_count(), 3);
        let at0 = &curve.rows[1];
        assert!((at0.network - 0.439_900_846_488_442_6).abs() < 1e-9);
        for row in &curve.rows {
            let tau = db_to_linear(row.x);
            let expected = 1.0 - 1.0 / (1.0 + tau.sqrt() * tau.sqrt().atan());
            assert!((row.network - expected).abs() < 1e-9);
        }
        let csv = curve.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "tau_db,tau_linear,outage_tier1,outage_network");
        assert_eq!(lines.count(), 3);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn rate_report_csv_layout() {
        let c = NetworkConfig::new(vec![
            TierParams::new(10.0, 1e-5, 4.0, 1.0),
            TierParams::new(1.0, 3e-5, 4.0, 1.0),
        ])
        .with_user_density(1e-4);
        let report = cmd_rate(&c, &q()).unwrap();
        let r = &report.rates.per_tier;
        assert!((r[0] / r[1] - 1.0).abs() < 1e-8);
        let csv = report.to_csv();
        assert!(csv.starts_with("metric,tier1,tier2,network\n"));
        assert!(csv.contains("\nmin_throughput_tier,,,"));
    }

    #[test]
    fn assoc_report_rows() {
        let c = single_alpha4().with_user_density(1e-4);
        let csv = cmd_assoc(&c, &q()).unwrap().to_csv();
        assert_eq!(csv, "tier,assoc_prob,cell_load\n1,1.00000000e0,1.00000000e1\n");
    }

    #[test]
    fn bias_sweep_rows_are_sorted() {
        let c = NetworkConfig::new(vec![
            TierParams::new(10.0, 1e-5, 4.0, 1.0),
            TierParams::new(1.0, 3e-5, 4.0, 1.0),
        ]);
        let curve = sweep(
            &c,
            SweepVariable::BiasDb { tier: 2 },
            &[10.0, 0.0, 5.0],
            SweepMetric::Outage { tau: 1.0 },
            &q(),
        )
        .unwrap();
        let xs: Vec<f64> = curve.rows.iter().map(|r| r.x).collect();
        assert_eq!(xs, vec![0.0, 5.0, 10.0]);
        // Offloaded users land in the biased tier with worse SINR.
        assert!(curve.rows[2].per_tier[1] > curve.rows[0].per_tier[1]);
        assert!(curve.to_csv().starts_with("bias_db_tier2,outage_tier1,outage_tier2,outage_network\n"));
    }

    #[test]
    fn zero_replications_is_usage_error() {
        let opts = SimOptions::new(0, 1);
        let err = cmd_simulate(&single_alpha4(), &opts, &TauGrid::default(), &q()).err().unwrap();
        assert!(matches!(err, Error::Usage(_)));
    }
}
