//! Analytic downlink metrics for biased association in a K-tier network.
//!
//! Every operation takes a 1-based serving tier index `k`. Distances and
//! densities are normalized by the reference distance internally, so the
//! formulas below are written for `r0 = 1`.
//!
//! For serving tier `k` and any tier `j`, with `P̂ = P_j/P_k`, `B̂ = B_j/B_k`
//! and `α̂ = α_j/α_k`:
//!
//! * association: `A_k = 2πλ_k ∫ x exp(-π Σ_j λ_j (P̂B̂)^{2/α_j} x^{2/α̂}) dx`
//! * outage: `O_k = 1 - (2πλ_k/A_k) ∫ x exp(-τ W x^{α_k}/(P_k L0) - π Σ_j C_j x^{2/α̂}) dx`
//!   with `C_j = λ_j P̂^{2/α_j} (B̂^{2/α_j} + Z(τ, α_j, B̂))`
//! * ergodic rate: the outage integrand with `τ = e^t - 1`, integrated over `t > 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ratios, NetworkConfig};
use crate::specfun::{integrate_finite, integrate_semi_infinite_scaled, z_kernel, QuadratureSettings};

/// One value per tier plus an optional network-wide aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct PerTierMetric {
    pub per_tier: Vec<f64>,
    pub network: Option<f64>,
}

impl PerTierMetric {
    /// Value for 1-based tier `k`.
    pub fn tier(&self, k: usize) -> f64 {
        self.per_tier[k - 1]
    }
}

/// Which closed form produced a [`ClosedFormOutage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormCase {
    /// Equal exponents, arbitrary biases.
    EqualExponent,
    /// Equal exponents, unbiased.
    EqualExponentUnbiased,
    /// All exponents equal to 4, arbitrary biases (arctangent form).
    ExponentFour,
    /// All exponents equal to 4, unbiased.
    ExponentFourUnbiased,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormOutage {
    pub case: ClosedFormCase,
    pub per_tier: Vec<f64>,
    pub network: f64,
}

/// Minimum over tiers of the average per-user throughput.
#[derive(Debug, Clone, PartialEq)]
pub struct MinThroughput {
    pub value: f64,
    /// 1-based tier attaining the minimum (lowest index among ties).
    pub tier: usize,
    /// Every tier within relative `1e-9` of the minimum, ascending.
    pub ties: Vec<usize>,
    pub per_tier: Vec<f64>,
}

/// Per-tier coefficients seen from serving tier `k`.
struct ServingView {
    lambda_k: f64,
    alpha_k: f64,
    /// `W / (P_k L0)`; zero when interference-limited.
    noise_factor: f64,
    others: Vec<TierTerm>,
}

struct TierTerm {
    lambda: f64,
    alpha: f64,
    b_hat: f64,
    /// `P̂^{2/α_j}`.
    p_factor: f64,
    /// `(P̂ B̂)^{2/α_j}`.
    pb_factor: f64,
    /// Distance exponent `2/α̂_j = 2 α_k / α_j`.
    exponent: f64,
}

impl ServingView {
    fn new(config: &NetworkConfig, k: usize) -> Result<Self> {
        let r = ratios(config, k)?;
        let pos = k - 1;
        let serving = &config.tiers[pos];
        let others = config
            .tiers
            .iter()
            .zip(&r)
            .enumerate()
            .map(|(j, (t, rt))| {
                let two_over_alpha = 2.0 / t.pathloss_exp;
                TierTerm {
                    lambda: config.normalized_density(j),
                    alpha: t.pathloss_exp,
                    b_hat: rt.b_hat,
                    p_factor: rt.p_hat.powf(two_over_alpha),
                    pb_factor: (rt.p_hat * rt.b_hat).powf(two_over_alpha),
                    exponent: if j == pos { 2.0 } else { 2.0 / rt.a_hat },
                }
            })
            .collect();
        Ok(Self {
            lambda_k: config.normalized_density(pos),
            alpha_k: serving.pathloss_exp,
            noise_factor: config.noise_power / (serving.power * config.ref_pathloss),
            others,
        })
    }

    fn association_terms(&self) -> Vec<(f64, f64)> {
        self.others
            .iter()
            .map(|t| (PI * t.lambda * t.pb_factor, t.exponent))
            .collect()
    }

    /// `(π C_j, exponent)` pairs for threshold `tau`.
    fn interference_terms(&self, tau: f64, q: &QuadratureSettings) -> Result<Vec<(f64, f64)>> {
        self.others
            .iter()
            .map(|t| {
                let z = z_kernel(tau, t.alpha, t.b_hat, q)?;
                let c = t.lambda * t.p_factor * (t.b_hat.powf(2.0 / t.alpha) + z);
                Ok((PI * c, t.exponent))
            })
            .collect()
    }

    fn all_exponents_two(&self) -> bool {
        self.others.iter().all(|t| t.exponent == 2.0)
    }
}

/// `exp(-noise x^{α_k} - Σ c_j x^{e_j})` as a closure-friendly evaluator.
fn exp_weight(x: f64, noise: f64, alpha_k: f64, terms: &[(f64, f64)]) -> f64 {
    let mut s = if noise > 0.0 { noise * x.powf(alpha_k) } else { 0.0 };
    for &(c, e) in terms {
        s += if e == 2.0 { c * x * x } else { c * x.powf(e) };
    }
    (-s).exp()
}

/// Distance at which `noise x^{α_k} + Σ c_j x^{e_j}` reaches one; used as the
/// first panel width of semi-infinite integrals.
fn decay_scale(noise: f64, alpha_k: f64, terms: &[(f64, f64)]) -> f64 {
    let g = |y: f64| {
        let x = y.exp();
        let mut s = if noise > 0.0 { noise * x.powf(alpha_k) } else { 0.0 };
        for &(c, e) in terms {
            s += c * x.powf(e);
        }
        s
    };
    let (mut lo, mut hi) = (-700.0f64 / 2.0, 700.0f64 / 2.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// `∫_0^∞ x exp(-noise x^{α_k} - Σ c_j x^{e_j}) dx` by quadrature.
fn radial_integral_quadrature(
    noise: f64,
    alpha_k: f64,
    terms: &[(f64, f64)],
    q: &QuadratureSettings,
) -> Result<f64> {
    let scale = decay_scale(noise, alpha_k, terms);
    integrate_semi_infinite_scaled(|x| x * exp_weight(x, noise, alpha_k, terms), scale, q)
}

/// Probability that the typical user is served by tier `k`.
///
/// With bitwise-equal exponents the closed form
/// `λ_k (P_k B_k)^{2/α} / Σ_j λ_j (P_j B_j)^{2/α}` is used directly.
pub fn association_probability(config: &NetworkConfig, k: usize, q: &QuadratureSettings) -> Result<f64> {
    config.tier_position(k)?;
    if config.equal_exponents() {
        Ok(association_probability_closed_form(config, k))
    } else {
        association_probability_quadrature(config, k, q)
    }
}

/// Association probability through the general radial integral, regardless of exponents.
pub fn association_probability_quadrature(
    config: &NetworkConfig,
    k: usize,
    q: &QuadratureSettings,
) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let integral = radial_integral_quadrature(0.0, view.alpha_k, &view.association_terms(), q)?;
    Ok(2.0 * PI * view.lambda_k * integral)
}

fn association_probability_closed_form(config: &NetworkConfig, k: usize) -> f64 {
    let weight = |t: &crate::model::TierParams| {
        t.density * (t.power * t.bias).powf(2.0 / t.pathloss_exp)
    };
    let total: f64 = config.tiers.iter().map(weight).sum();
    weight(&config.tiers[k - 1]) / total
}

pub fn association_probabilities(config: &NetworkConfig, q: &QuadratureSettings) -> Result<PerTierMetric> {
    let per_tier = (1..=config.num_tiers())
        .map(|k| association_probability(config, k, q))
        .collect::<Result<Vec<_>>>()?;
    let total = per_tier.iter().sum();
    Ok(PerTierMetric {
        per_tier,
        network: Some(total),
    })
}

/// Mean number of users served by one tier-`k` base station, `A_k λ_u / λ_k`.
pub fn cell_load(config: &NetworkConfig, k: usize, q: &QuadratureSettings) -> Result<f64> {
    let a = association_probability(config, k, q)?;
    Ok(a * config.user_density / config.tier(k)?.density)
}

pub fn cell_loads(config: &NetworkConfig, q: &QuadratureSettings) -> Result<PerTierMetric> {
    let per_tier = (1..=config.num_tiers())
        .map(|k| cell_load(config, k, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(PerTierMetric {
        per_tier,
        network: None,
    })
}

/// Density (per meter) of the distance to the serving base station, given tier `k` serves.
pub fn serving_distance_pdf(config: &NetworkConfig, k: usize, x: f64, q: &QuadratureSettings) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let a = association_probability(config, k, q)?;
    let r0 = config.ref_distance;
    let xn = x / r0;
    let terms = view.association_terms();
    Ok(2.0 * PI * view.lambda_k / a * xn * exp_weight(xn, 0.0, view.alpha_k, &terms) / r0)
}

/// Distribution function of the serving distance given tier `k` serves.
pub fn serving_distance_cdf(config: &NetworkConfig, k: usize, x: f64, q: &QuadratureSettings) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let a = association_probability(config, k, q)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let terms = view.association_terms();
    let xn = x / config.ref_distance;
    let f = |r: f64| r * exp_weight(r, 0.0, view.alpha_k, &terms);
    let scale = decay_scale(0.0, view.alpha_k, &terms);
    let mass = if xn.is_infinite() {
        integrate_semi_infinite_scaled(f, scale, q)?
    } else {
        let mut lo = 0.0;
        let mut hi = xn.min(scale);
        let mut mass = 0.0;
        loop {
            let part = integrate_finite(f, lo, hi, q)?.value;
            mass += part;
            if hi >= xn || part <= q.truncation_tol * mass {
                break;
            }
            lo = hi;
            hi = (2.0 * hi).min(xn);
        }
        mass
    };
    Ok((2.0 * PI * view.lambda_k / a * mass).min(1.0))
}

/// `∫ x exp(-τ W x^{α_k}/(P_k L0) - π Σ C_j x^{2/α̂_j}) dx` for serving tier `k`.
fn coverage_integral(view: &ServingView, tau: f64, q: &QuadratureSettings) -> Result<f64> {
    let terms = view.interference_terms(tau, q)?;
    radial_integral_quadrature(tau * view.noise_factor, view.alpha_k, &terms, q)
}

/// Outage probability `P[SINR ≤ τ]` of a user served by tier `k`.
pub fn outage_tier(config: &NetworkConfig, k: usize, tau: f64, q: &QuadratureSettings) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let a = association_probability(config, k, q)?;
    outage_from_view(&view, a, tau, q)
}

fn outage_from_view(view: &ServingView, a: f64, tau: f64, q: &QuadratureSettings) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    if tau.is_infinite() {
        return Ok(1.0);
    }
    let coverage = 2.0 * PI * view.lambda_k / a * coverage_integral(view, tau, q)?;
    Ok((1.0 - coverage).clamp(0.0, 1.0))
}

/// Per-tier outage with the network outage `Σ_k O_k A_k` as aggregate.
pub fn outage(config: &NetworkConfig, tau: f64, q: &QuadratureSettings) -> Result<PerTierMetric> {
    let assoc = association_probabilities(config, q)?;
    let per_tier = (1..=config.num_tiers())
        .map(|k| outage_from_view(&ServingView::new(config, k)?, assoc.tier(k), tau, q))
        .collect::<Result<Vec<_>>>()?;
    let network: f64 = per_tier.iter().zip(&assoc.per_tier).map(|(o, a)| o * a).sum();
    Ok(PerTierMetric {
        per_tier,
        network: Some(network.clamp(0.0, 1.0)),
    })
}

/// Outage of a randomly located user, weighted over tiers by association probability.
pub fn outage_network(config: &NetworkConfig, tau: f64, q: &QuadratureSettings) -> Result<f64> {
    Ok(outage(config, tau, q)?.network.expect("network outage is always set"))
}

/// Network outage through the single combined expression
/// `1 - Σ_k 2πλ_k ∫ x exp(...) dx`, without going through `A_k`.
pub fn outage_network_combined(config: &NetworkConfig, tau: f64, q: &QuadratureSettings) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let mut coverage = 0.0;
    for k in 1..=config.num_tiers() {
        let view = ServingView::new(config, k)?;
        coverage += 2.0 * PI * view.lambda_k * coverage_integral(&view, tau, q)?;
    }
    Ok((1.0 - coverage).clamp(0.0, 1.0))
}

/// Closed-form outage for interference-limited networks with equal exponents.
///
/// Applies only when the noise power is exactly zero and every exponent is
/// bitwise equal; the arctangent forms additionally need `α = 4`, and the
/// unbiased forms need all biases equal. Returns [`Error::NotApplicable`]
/// otherwise.
pub fn outage_closed_form(config: &NetworkConfig, tau: f64, q: &QuadratureSettings) -> Result<ClosedFormOutage> {
    if config.noise_power != 0.0 {
        return Err(Error::NotApplicable("noise power is not zero"));
    }
    if !config.equal_exponents() {
        return Err(Error::NotApplicable("path-loss exponents differ across tiers"));
    }
    let alpha = config.tiers[0].pathloss_exp;
    let unbiased = config.equal_biases();
    let four = alpha == 4.0;
    let case = match (four, unbiased) {
        (true, true) => ClosedFormCase::ExponentFourUnbiased,
        (true, false) => ClosedFormCase::ExponentFour,
        (false, true) => ClosedFormCase::EqualExponentUnbiased,
        (false, false) => ClosedFormCase::EqualExponent,
    };
    let z = |b_hat: f64| -> Result<f64> {
        if four {
            Ok(tau.sqrt() * (tau / b_hat).sqrt().atan())
        } else {
            z_kernel(tau, alpha, b_hat, q)
        }
    };

    if unbiased {
        let o = 1.0 - 1.0 / (1.0 + z(1.0)?);
        return Ok(ClosedFormOutage {
            case,
            per_tier: vec![o; config.num_tiers()],
            network: o,
        });
    }

    let delta = 2.0 / alpha;
    let mut per_tier = Vec::with_capacity(config.num_tiers());
    let mut network_coverage = 0.0;
    for k in 1..=config.num_tiers() {
        let r = ratios(config, k)?;
        let lambda_k = config.tiers[k - 1].density;
        let mut assoc_sum = 0.0;
        let mut interf_sum = 0.0;
        for (t, rt) in config.tiers.iter().zip(&r) {
            assoc_sum += t.density * (rt.p_hat * rt.b_hat).powf(delta);
            interf_sum += t.density * rt.p_hat.powf(delta) * (rt.b_hat.powf(delta) + z(rt.b_hat)?);
        }
        per_tier.push(1.0 - assoc_sum / interf_sum);
        network_coverage += lambda_k / interf_sum;
    }
    Ok(ClosedFormOutage {
        case,
        per_tier,
        network: 1.0 - network_coverage,
    })
}

/// `∫_t ∫_x exp(-(e^t-1) W x^{α_k}/(P_k L0) - π Σ_j C_j(t) x^{2/α̂_j}) x dx dt`.
///
/// The inner `x` integral is Gaussian, `1/(2π Σ C_j(t))`, when the network is
/// interference-limited with equal exponents; `force_nested` disables that.
fn rate_integral(view: &ServingView, q: &QuadratureSettings, force_nested: bool) -> Result<f64> {
    let inner_q = q.tightened(10.0);
    let closed_inner = !force_nested && view.noise_factor == 0.0 && view.all_exponents_two();
    let inner = |t: f64| -> Result<f64> {
        let tau = t.exp_m1();
        let terms = view.interference_terms(tau, &inner_q)?;
        if closed_inner {
            let total: f64 = terms.iter().map(|&(c, _)| c).sum();
            Ok(0.5 / total)
        } else {
            radial_integral_quadrature(tau * view.noise_factor, view.alpha_k, &terms, &inner_q)
        }
    };
    // The closure passed to the integrator cannot return errors; stash the first one.
    let failure = std::cell::RefCell::new(None);
    let value = integrate_semi_infinite_scaled(
        |t| match inner(t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        1.0,
        q,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Average ergodic rate (nats/s/Hz) of a user served by tier `k`.
pub fn ergodic_rate_tier(config: &NetworkConfig, k: usize, q: &QuadratureSettings) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let a = association_probability(config, k, q)?;
    Ok(2.0 * PI * view.lambda_k / a * rate_integral(&view, q, false)?)
}

/// Per-tier ergodic rates with the association-weighted network rate.
/// Per-tier rate through nested adaptive quadrature in both `t` and `x`,
/// even where the inner integral has a closed form.
pub fn ergodic_rate_tier_nested(config: &NetworkConfig, k: usize, q: &QuadratureSettings) -> Result<f64> {
    let view = ServingView::new(config, k)?;
    let a = association_probability(config, k, q)?;
    Ok(2.0 * PI * view.lambda_k / a * rate_integral(&view, q, true)?)
}

pub fn ergodic_rates(config: &NetworkConfig, q: &QuadratureSettings) -> Result<PerTierMetric> {
    let assoc = association_probabilities(config, q)?;
    let per_tier = (1..=config.num_tiers())
        .map(|k| {
            let view = ServingView::new(config, k)?;
            Ok(2.0 * PI * view.lambda_k / assoc.tier(k) * rate_integral(&view, q, false)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let network = per_tier.iter().zip(&assoc.per_tier).map(|(r, a)| r * a).sum();
    Ok(PerTierMetric {
        per_tier,
        network: Some(network),
    })
}

pub fn ergodic_rate_network(config: &NetworkConfig, q: &QuadratureSettings) -> Result<f64> {
    Ok(ergodic_rates(config, q)?.network.expect("network rate is always set"))
}

/// Network ergodic rate as `Σ_k 2πλ_k ∫∫ ...`, without association weights.
pub fn ergodic_rate_network_direct(config: &NetworkConfig, q: &QuadratureSettings) -> Result<f64> {
    let mut total = 0.0;
    for k in 1..=config.num_tiers() {
        let view = ServingView::new(config, k)?;
        total += 2.0 * PI * view.lambda_k * rate_integral(&view, q, false)?;
    }
    Ok(total)
}

/// Ergodic rate of an interference-limited, unbiased, equal-exponent network:
/// `∫_0^∞ dt / (1 + Z(e^t - 1, α, 1))`. Independent of densities, powers and K.
pub fn ergodic_rate_unbiased(alpha: f64, q: &QuadratureSettings) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let inner_q = q.tightened(10.0);
    let failure = std::cell::RefCell::new(None);
    let value = integrate_semi_infinite_scaled(
        |t| {
            let tau = t.exp_m1();
            let z = if alpha == 4.0 {
                Ok(tau.sqrt() * tau.sqrt().atan())
            } else {
                z_kernel(tau, alpha, 1.0, &inner_q)
            };
            match z {
                Ok(z) => 1.0 / (1.0 + z),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        1.0,
        q,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Average throughput of one user in a tier-`k` cell, `R_k / N_k`.
pub fn avg_user_throughput(config: &NetworkConfig, k: usize, q: &QuadratureSettings) -> Result<f64> {
    if config.user_density <= 0.0 {
        return Err(Error::ZeroUserDensity);
    }
    Ok(ergodic_rate_tier(config, k, q)? / cell_load(config, k, q)?)
}

pub fn avg_user_throughputs(config: &NetworkConfig, q: &QuadratureSettings) -> Result<PerTierMetric> {
    if config.user_density <= 0.0 {
        return Err(Error::ZeroUserDensity);
    }
    let rates = ergodic_rates(config, q)?;
    let loads = cell_loads(config, q)?;
    let per_tier = rates
        .per_tier
        .iter()
        .zip(&loads.per_tier)
        .map(|(r, n)| r / n)
        .collect();
    Ok(PerTierMetric {
        per_tier,
        network: None,
    })
}

/// Minimum over tiers of the average user throughput.
pub fn min_avg_user_throughput(config: &NetworkConfig, q: &QuadratureSettings) -> Result<MinThroughput> {
    let per_tier = avg_user_throughputs(config, q)?.per_tier;
    Ok(min_with_ties(per_tier))
}

pub(crate) fn min_with_ties(per_tier: Vec<f64>) -> MinThroughput {
    let value = per_tier.iter().copied().fold(f64::INFINITY, f64::min);
    let ties: Vec<usize> = per_tier
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - value).abs() <= 1e-9 * value.abs())
        .map(|(i, _)| i + 1)
        .collect();
    MinThroughput {
        value,
        tier: ties[0],
        ties,
        per_tier,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TierParams;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn two_tier(p: [f64; 2], l: [f64; 2], a: [f64; 2], b: [f64; 2]) -> NetworkConfig {
        NetworkConfig::new(vec![
            TierParams::new(p[0], l[0], a[0], b[0]),
            TierParams::new(p[1], l[1], a[1], b[1]),
        ])
    }

    #[test]
    fn single_tier_association_is_one() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 3.3, 1.0)]);
        assert_eq!(association_probability(&c, 1, &q()).unwrap(), 1.0);
        let quad = association_probability_quadrature(&c, 1, &q()).unwrap();
        assert!((quad - 1.0).abs() < 1e-9);
    }

    #[test]
    fn association_density_weighting() {
        let c = two_tier([1.0, 1.0], [1e-5, 2e-5], [4.0, 4.0], [1.0, 1.0]);
        let a = association_probabilities(&c, &q()).unwrap();
        assert!((a.tier(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.tier(2) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn association_power_weighting() {
        let c = two_tier([100.0, 1.0], [1e-5, 1e-5], [4.0, 4.0], [1.0, 1.0]);
        let a1 = association_probability(&c, 1, &q()).unwrap();
        assert!((a1 - 1.0 / 1.1).abs() < 1e-14);
        let quad = association_probability_quadrature(&c, 1, &q()).unwrap();
        assert!((quad - a1).abs() < 1e-9);
    }

    #[test]
    fn cell_load_examples() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)]).with_user_density(1e-4);
        assert!((cell_load(&c, 1, &q()).unwrap() - 10.0).abs() < 1e-12);
        let c = two_tier([1.0, 1.0], [1e-5, 1e-5], [4.0, 4.0], [1.0, 1.0]).with_user_density(1e-4);
        let n = cell_loads(&c, &q()).unwrap();
        assert!((n.tier(1) - 5.0).abs() < 1e-12 && (n.tier(2) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn distance_pdf_single_tier_rayleigh() {
        let lambda = 1e-5;
        let c = NetworkConfig::new(vec![TierParams::new(1.0, lambda, 4.0, 1.0)]);
        assert_eq!(serving_distance_pdf(&c, 1, 0.0, &q()).unwrap(), 0.0);
        for x in [10.0, 100.0, 300.0] {
            let f = serving_distance_pdf(&c, 1, x, &q()).unwrap();
            let expected = 2.0 * PI * lambda * x * (-PI * lambda * x * x).exp();
            assert!((f / expected - 1.0).abs() < 1e-12);
            let cdf = serving_distance_cdf(&c, 1, x, &q()).unwrap();
            assert!((cdf - (1.0 - (-PI * lambda * x * x).exp())).abs() < 1e-10);
        }
    }

    #[test]
    fn distance_pdf_respects_reference_distance() {
        let lambda = 1e-5;
        let c = NetworkConfig::new(vec![TierParams::new(1.0, lambda, 4.0, 1.0)]).with_ref_distance(10.0);
        let x = 120.0;
        let f = serving_distance_pdf(&c, 1, x, &q()).unwrap();
        let expected = 2.0 * PI * lambda * x * (-PI * lambda * x * x).exp();
        assert!((f / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outage_at_zero_threshold() {
        let c = two_tier([10.0, 1.0], [1e-5, 3e-5], [3.8, 3.5], [1.0, 4.0]).with_noise_power(1e-12);
        for k in 1..=2 {
            assert_eq!(outage_tier(&c, k, 0.0, &q()).unwrap(), 0.0);
        }
        assert_eq!(outage_network_combined(&c, 0.0, &q()).unwrap(), 0.0);
    }

    #[test]
    fn unbiased_alpha_four_outage() {
        let c = two_tier([10.0, 1.0], [1e-5, 3e-5], [4.0, 4.0], [1.0, 1.0]);
        let expected = 1.0 - 1.0 / (1.0 + PI / 4.0);
        for k in 1..=2 {
            let o = outage_tier(&c, k, 1.0, &q()).unwrap();
            assert!((o - expected).abs() < 1e-9, "{o}");
        }
        assert!((expected - 0.439_900_846_488_442_6).abs() < 1e-15);
    }

    #[test]
    fn single_tier_network_outage_equals_tier_outage() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)]);
        let tier = outage_tier(&c, 1, 3.0, &q()).unwrap();
        assert_eq!(outage_network(&c, 3.0, &q()).unwrap(), tier);
    }

    #[test]
    fn closed_form_dispatch() {
        let base = two_tier([10.0, 1.0], [1e-5, 3e-5], [4.0, 4.0], [1.0, 1.0]);
        let cf = outage_closed_form(&base, 1.0, &q()).unwrap();
        assert_eq!(cf.case, ClosedFormCase::ExponentFourUnbiased);

        let mut biased = base.clone();
        biased.tiers[1].bias = 10.0;
        assert_eq!(outage_closed_form(&biased, 1.0, &q()).unwrap().case, ClosedFormCase::ExponentFour);

        let mut a35 = biased.clone();
        a35.tiers.iter_mut().for_each(|t| t.pathloss_exp = 3.5);
        assert_eq!(outage_closed_form(&a35, 1.0, &q()).unwrap().case, ClosedFormCase::EqualExponent);
        a35.tiers[1].bias = 1.0;
        assert_eq!(
            outage_closed_form(&a35, 1.0, &q()).unwrap().case,
            ClosedFormCase::EqualExponentUnbiased
        );

        let noisy = base.clone().with_noise_power(1e-15);
        assert!(matches!(outage_closed_form(&noisy, 1.0, &q()), Err(Error::NotApplicable(_))));
        let mut unequal = base.clone();
        unequal.tiers[1].pathloss_exp = 4.0 + 1e-12;
        assert!(matches!(outage_closed_form(&unequal, 1.0, &q()), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn closed_form_unbiased_alpha_four_at_ten() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)]);
        let cf = outage_closed_form(&c, 10.0, &q()).unwrap();
        // Reference values from a 20-digit evaluation of the arctangent form.
        assert!((10f64.sqrt().atan() - 1.264_518_957_625_227_2).abs() < 1e-15);
        assert!((cf.network - 0.799_950_389_719_458_5).abs() < 1e-14, "{}", cf.network);
    }

    #[test]
    fn biased_arctangent_matches_equal_exponent_form() {
        // α = 4 with B₂/B₁ = 10: arctangent form against the quadrature Z kernel.
        let c = two_tier([20.0, 1.0], [1e-5, 4e-5], [4.0, 4.0], [1.0, 10.0]);
        let arctan = outage_closed_form(&c, 1.0, &q()).unwrap();
        let delta = 0.5;
        for k in 1..=2 {
            let r = ratios(&c, k).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for (t, rt) in c.tiers.iter().zip(&r) {
                num += t.density * (rt.p_hat * rt.b_hat).powf(delta);
                den += t.density
                    * rt.p_hat.powf(delta)
                    * (rt.b_hat.powf(delta) + z_kernel(1.0, 4.0, rt.b_hat, &q()).unwrap());
            }
            let general = 1.0 - num / den;
            assert!((arctan.per_tier[k - 1] - general).abs() < 1e-10);
        }
    }

    #[test]
    fn ergodic_rate_ignores_user_density() {
        let c = two_tier([10.0, 1.0], [1e-5, 3e-5], [3.8, 3.5], [1.0, 4.0]).with_noise_power(1e-13);
        let r1 = ergodic_rate_tier(&c, 2, &q()).unwrap();
        let r2 = ergodic_rate_tier(&c.clone().with_user_density(1e-3), 2, &q()).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn single_tier_network_rate_equals_tier_rate() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 3.5, 1.0)]).with_noise_power(1e-12);
        let tier = ergodic_rate_tier(&c, 1, &q()).unwrap();
        assert_eq!(ergodic_rate_network(&c, &q()).unwrap(), tier);
    }

    #[test]
    fn throughput_requires_users() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)]);
        assert_eq!(avg_user_throughput(&c, 1, &q()).unwrap_err(), Error::ZeroUserDensity);
        assert_eq!(min_avg_user_throughput(&c, &q()).unwrap_err(), Error::ZeroUserDensity);
    }

    #[test]
    fn one_user_per_cell_throughput_is_rate() {
        let c = NetworkConfig::new(vec![TierParams::new(1.0, 1e-5, 4.0, 1.0)]).with_user_density(1e-5);
        let r = ergodic_rate_tier(&c, 1, &q()).unwrap();
        let t = avg_user_throughput(&c, 1, &q()).unwrap();
        assert!((t / r - 1.0).abs() < 1e-14);
        let m = min_avg_user_throughput(&c, &q()).unwrap();
        assert_eq!(m.tier, 1);
        assert_eq!(m.value, t);
    }

    #[test]
    fn symmetric_tiers_tie() {
        let c = two_tier([1.0, 1.0], [1e-5, 1e-5], [3.5, 3.5], [1.0, 1.0]).with_user_density(1e-4);
        let m = min_avg_user_throughput(&c, &q()).unwrap();
        assert_eq!(m.ties, vec![1, 2]);
        assert_eq!(m.tier, 1);
        assert!((m.per_tier[0] / m.per_tier[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn doubling_users_halves_throughput() {
        let c = two_tier([10.0, 1.0], [1e-5, 3e-5], [3.8, 3.5], [1.0, 4.0]).with_user_density(1e-4);
        let a = avg_user_throughputs(&c, &q()).unwrap();
        let b = avg_user_throughputs(&c.clone().with_user_density(2e-4), &q()).unwrap();
        for (x, y) in a.per_tier.iter().zip(&b.per_tier) {
            assert!((x / y - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn min_tie_breaking_picks_lowest_index() {
        let m = min_with_ties(vec![3.0, 2.0, 2.0, 5.0]);
        assert_eq!(m.tier, 2);
        assert_eq!(m.ties, vec![2, 3]);
    }
}
