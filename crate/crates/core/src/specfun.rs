//! Quadrature engine and the interference kernel Z(τ, α, B̂).
//!
//! All integrals go through an adaptive 15-point Gauss–Kronrod rule with a
//! global error heap. Semi-infinite integrals are split into geometrically
//! growing panels and truncated once the integrand has decayed far below its
//! running maximum.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budgets shared by every numerical integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of interval bisections per finite integral.
    pub max_subdivisions: usize,
    /// A semi-infinite integral stops once the integrand falls below this
    /// fraction of its running maximum.
    pub truncation_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            truncation_tol: 1e-14,
        }
    }
}

impl QuadratureSettings {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Same budget with both tolerances divided by `factor`.
    pub fn tightened(mut self, factor: f64) -> Self {
        self.rel_tol /= factor;
        self.abs_tol /= factor;
        self
    }

    pub fn validate(self) -> Result<Self> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.truncation_tol > 0.0
            && self.max_subdivisions >= 1;
        if ok {
            Ok(self)
        } else {
            Err(Error::QuadratureFailure(format!(
                "invalid quadrature settings {self:?}"
            )))
        }
    }
}

// Kronrod abscissae (descending) and weights; the Gauss 7-point rule uses the
// odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of one 15-point rule on `[a, b]`.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    fmax: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fmax = fc.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        fmax = fmax.max(f1.abs()).max(f2.abs());
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Panel {
        a,
        b,
        value,
        error,
        fmax,
    }
}

/// Estimate of a finite integral with its absolute error bound and the
/// largest integrand magnitude seen.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub fmax: f64,
}

/// Adaptive Gauss–Kronrod integration of `f` over the finite interval `[a, b]`.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    q: &QuadratureSettings,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            fmax: 0.0,
        });
    }
    let first = gauss_kronrod_15(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let mut value = first.value;
    let mut error = first.error;
    let mut fmax = first.fmax;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut splits = 0;
    while error > q.abs_tol.max(q.rel_tol * value.abs()) {
        if splits >= q.max_subdivisions {
            return Err(Error::QuadratureFailure(format!(
                "subdivision budget {} exhausted on [{a}, {b}] (estimate {value:e}, error {error:e})",
                q.max_subdivisions
            )));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval can no longer be split in floating point; accept it.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error = heap.iter().map(|p| p.error).sum();
            if error == 0.0 {
                break;
            }
            continue;
        }
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        fmax = fmax.max(left.fmax).max(right.fmax);
        heap.push(left);
        heap.push(right);
        splits += 1;
        // Re-sum periodically so cancellation in the running totals does not drift.
        if splits % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
        if !value.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    Ok(Estimate {
        value,
        error: error.max(0.0),
        fmax,
    })
}

/// `∫_0^∞ f(x) dx` for a nonnegative, eventually decaying integrand.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, q: &QuadratureSettings) -> Result<f64> {
    integrate_semi_infinite_scaled(f, 1.0, q)
}

/// Like [`integrate_semi_infinite`], with `scale` giving the width of the
/// first panel (the length over which the integrand varies appreciably).
pub fn integrate_semi_infinite_scaled<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    const MAX_PANELS: usize = 256;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::QuadratureFailure(format!("invalid panel scale {scale}")));
    }
    let mut start = 0.0;
    let mut width = scale;
    let mut total = 0.0;
    let mut running_max: f64 = 0.0;
    for _ in 0..MAX_PANELS {
        let end = start + width;
        let est = integrate_finite(&f, start, end, q)?;
        total += est.value;
        let f_end = f(end).abs();
        running_max = running_max.max(est.fmax).max(f_end);
        let decayed = f_end <= q.truncation_tol * running_max;
        let negligible = est.value.abs() <= q.rel_tol * total.abs() || est.value == 0.0;
        if decayed && negligible {
            return Ok(total);
        }
        if running_max == 0.0 && end > scale * 2f64.powi(64) {
            return Ok(0.0);
        }
        start = end;
        width *= 2.0;
    }
    Err(Error::QuadratureFailure(format!(
        "integrand did not decay within {MAX_PANELS} panels (reached x = {start:e})"
    )))
}

/// Interference kernel `Z(τ, α, B̂) = τ^{2/α} ∫_{(B̂/τ)^{2/α}}^∞ du / (1 + u^{α/2})`.
///
/// Evaluated in log space (`u = e^s`), where the integrand decays
/// exponentially. The upper limit `T` is chosen from the tail bound
/// `∫_T^∞ du/(1+u^{α/2}) ≤ 2 T^{1-α/2} / (α-2)`.
pub fn z_kernel(tau: f64, alpha: f64, b_hat: f64, q: &QuadratureSettings) -> Result<f64> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(tau >= 0.0) {
        return Err(Error::NonPositiveParameter {
            tier: None,
            what: "SINR threshold (non-negative)",
            value: tau,
        });
    }
    if !(b_hat > 0.0 && b_hat.is_finite()) {
        return Err(Error::NonPositiveParameter {
            tier: None,
            what: "bias ratio",
            value: b_hat,
        });
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    if tau.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let half_alpha = 0.5 * alpha;
    let decay = half_alpha - 1.0;
    let s_lo = (b_hat.ln() - tau.ln()) / half_alpha;
    // Lower bound on the integral keeps the truncation relative for tiny τ.
    let lower = s_lo.exp();
    let lower_bound = lower.powf(-decay) / (decay * (1.0 + lower.powf(-half_alpha)));
    let tail_target = q.abs_tol.min(q.rel_tol * lower_bound);
    let s_hi = ((1.0 / decay) / tail_target).ln() / decay;
    let integral = if s_hi <= s_lo {
        0.0
    } else {
        let integrand = |s: f64| 1.0 / ((-s).exp() + (decay * s).exp());
        let inner = q.tightened(10.0);
        integrate_finite(integrand, s_lo, s_hi, &inner)?.value
    };
    let z = tau.powf(1.0 / half_alpha) * integral;
    debug_assert!(
        alpha != 4.0 || {
            let closed = tau.sqrt() * (tau / b_hat).sqrt().atan();
            (z - closed).abs() <= 1e-6 * closed.max(1e-300)
        },
        "z_kernel disagrees with the arctangent form at tau={tau}, b_hat={b_hat}"
    );
    Ok(z)
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real `z < 1`.
///
/// Direct power series for `|z| < 0.9` and for `0.9 ≤ z < 1`; the Pfaff
/// transformation `₂F₁(a,b;c;z) = (1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))` for
/// `z ≤ -0.9`. Only the kernels this crate cross-checks are targeted.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::QuadratureFailure(format!(
            "hyp2f1 argument {z} outside (-inf, 1)"
        )));
    }
    if z <= -0.9 {
        let w = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * hyp2f1_series(a, c - b, c, w)?);
    }
    hyp2f1_series(a, b, c, z)
}

fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    const MAX_TERMS: usize = 10_000_000;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::QuadratureFailure(format!(
        "hyp2f1 series did not converge for z = {z}"
    )))
}

/// `Z(τ, α, B̂)` through its hypergeometric representation. Cross-check only.
pub fn z_kernel_hypergeometric(tau: f64, alpha: f64, b_hat: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let delta = 2.0 / alpha;
    let f = hyp2f1(1.0, 1.0 - delta, 2.0 - delta, -tau / b_hat)?;
    Ok(2.0 * tau * b_hat.powf(delta - 1.0) / (alpha - 2.0) * f)
}
