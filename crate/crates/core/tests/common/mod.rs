//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's quadrature or kernels: integrals are
//! plain composite Simpson sums on finite ranges after a change of variables.

#![allow(dead_code)]

use hetnet::NetworkConfig;
use std::f64::consts::PI;

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `τ^{2/α} ∫_L^∞ du / (1 + u^{α/2})` with `L = (b/τ)^{2/α}`, via `w = u^{1-α/2}`,
/// which maps the tail onto the finite smooth range `[0, L^{1-α/2}]`.
pub fn z_oracle(tau: f64, alpha: f64, b: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    let a = alpha / 2.0;
    let lower = (b / tau).powf(2.0 / alpha);
    let top = lower.powf(1.0 - a);
    let p = a / (a - 1.0);
    let integral = simpson(|w| 1.0 / (1.0 + w.powf(p)), 0.0, top, 200_000);
    tau.powf(2.0 / alpha) * integral / (a - 1.0)
}

/// Arctangent form of the kernel for `α = 4`.
pub fn z_alpha4(tau: f64, b: f64) -> f64 {
    tau.sqrt() * (PI / 2.0 - (b / tau).sqrt().atan())
}

/// `1 - 1/(1 + √τ arctan √τ)`.
pub fn outage_alpha4_unbiased(tau: f64) -> f64 {
    1.0 - 1.0 / (1.0 + tau.sqrt() * tau.sqrt().atan())
}

/// `∫_0^∞ g(x) dx` for `g` decaying at least like `exp(-c x^e)`, found by doubling
/// the range until the integrand is negligible, then Simpson on a fine grid.
fn radial(g: impl Fn(f64) -> f64, scale: f64) -> f64 {
    let mut top = scale;
    let peak = (1..=400).map(|i| g(scale * i as f64 / 100.0).abs()).fold(0.0, f64::max);
    while g(top).abs() > 1e-18 * peak || g(2.0 * top).abs() > 1e-18 * peak {
        top *= 2.0;
    }
    simpson(g, 0.0, top, 400_000)
}

struct View {
    lambda_k: f64,
    alpha_k: f64,
    snr_coeff: f64,
    others: Vec<(f64, f64, f64, f64, f64)>,
}

fn view(config: &NetworkConfig, k: usize) -> View {
    let t = &config.tiers[k - 1];
    View {
        lambda_k: t.density,
        alpha_k: t.pathloss_exp,
        snr_coeff: config.noise_power / (t.power * config.ref_pathloss),
        others: config
            .tiers
            .iter()
            .map(|j| {
                (
                    j.density,
                    j.power / t.power,
                    j.bias / t.bias,
                    j.pathloss_exp,
                    2.0 * t.pathloss_exp / j.pathloss_exp,
                )
            })
            .collect(),
    }
}

fn typical_scale(config: &NetworkConfig) -> f64 {
    let total: f64 = config.tiers.iter().map(|t| t.density).sum();
    0.5 / total.sqrt()
}

/// Probability of being served by tier `k`; reference distance must be 1 m.
pub fn association_oracle(config: &NetworkConfig, k: usize) -> f64 {
    let v = view(config, k);
    let g = |x: f64| {
        let s: f64 = v
            .others
            .iter()
            .map(|&(l, p, b, a, e)| l * (p * b).powf(2.0 / a) * x.powf(e))
            .sum();
        x * (-PI * s).exp()
    };
    2.0 * PI * v.lambda_k * radial(g, typical_scale(config))
}

/// Outage of tier `k` at linear threshold `tau`; reference distance must be 1 m.
pub fn outage_oracle(config: &NetworkConfig, k: usize, tau: f64) -> f64 {
    let v = view(config, k);
    let coeffs: Vec<(f64, f64)> = v
        .others
        .iter()
        .map(|&(l, p, b, a, e)| (l * p.powf(2.0 / a) * (b.powf(2.0 / a) + z_oracle(tau, a, b)), e))
        .collect();
    let g = |x: f64| {
        let s: f64 = coeffs.iter().map(|&(c, e)| c * x.powf(e)).sum();
        x * (-tau * v.snr_coeff * x.powf(v.alpha_k) - PI * s).exp()
    };
    let covered = 2.0 * PI * v.lambda_k * radial(g, typical_scale(config));
    1.0 - covered / association_oracle(config, k)
}

pub fn network_outage_oracle(config: &NetworkConfig, tau: f64) -> f64 {
    (1..=config.num_tiers())
        .map(|k| association_oracle(config, k) * outage_oracle(config, k, tau))
        .sum()
}
