//! Bandwidth selectors: oracle plug-in from known curvature, the
//! generalized-curvature plug-in (data-driven curvature via U-statistic),
//! Silverman's robust normal reference, least-squares cross-validation, and
//! the scalar multivariate plug-in. Also the AMISE value and the risk ratio
//! of a misscaled bandwidth.

use crate::curvature::{self, PilotSpec};
use crate::error::{Error, Result};
use crate::estimator::Sample;
use crate::kernels::KernelSpec;
use std::collections::BTreeMap;

/// A selected bandwidth together with named diagnostic values.
#[derive(Clone, Debug)]
pub struct BandwidthResult {
    pub selector: String,
    pub h: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

/// h = (roughness / (mu2² curvature n))^{1/5}.
pub fn amise_bandwidth(roughness: f64, mu2: f64, curvature: f64, n: usize) -> Result<f64> {
    if curvature <= 0.0 {
        return Err(Error::DegenerateCurvature(curvature));
    }
    if mu2 == 0.0 {
        return Err(Error::DegenerateKernel);
    }
    Ok((roughness / (mu2 * mu2 * curvature * n as f64)).powf(0.2))
}

/// AMISE(h) = (h⁴/4) mu2² curvature + roughness/(n h).
pub fn amise_value(h: f64, roughness: f64, mu2: f64, curvature: f64, n: usize) -> f64 {
    assert!(h > 0.0);
    0.25 * h.powi(4) * mu2 * mu2 * curvature + roughness / (n as f64 * h)
}

/// Risk inflation for h = a·h_opt: AMISE(a h_opt)/AMISE(h_opt) = (4/a + a⁴)/5.
pub fn amise_ratio(a: f64) -> f64 {
    assert!(a > 0.0);
    (4.0 / a + a.powi(4)) / 5.0
}

/// How the pilot bandwidth b is chosen for the plug-in selector.
#[derive(Clone, Copy, Debug)]
pub enum PilotRule {
    /// b = n^{-alpha}; suited to standardized simulation targets.
    Exponent(f64),
    /// b = s_rob · n^{-alpha}; suited to raw data on arbitrary scales.
    ScaledExponent(f64),
    /// Explicit pilot bandwidth.
    Fixed(f64),
}

impl PilotRule {
    pub fn bandwidth(&self, sample: &Sample) -> Result<f64> {
        match *self {
            PilotRule::Exponent(alpha) => Ok((sample.len() as f64).powf(-alpha)),
            PilotRule::ScaledExponent(alpha) => {
                Ok(robust_scale(sample)? * (sample.len() as f64).powf(-alpha))
            }
            PilotRule::Fixed(b) => {
                assert!(b > 0.0);
                Ok(b)
            }
        }
    }
}

/// Plug-in bandwidth with the curvature functional estimated from the sample
/// by the truncated U-statistic.
pub fn gcpi_bandwidth(
    sample: &Sample,
    kernel: &KernelSpec,
    pilot: &PilotSpec,
    rule: PilotRule,
    tau: f64,
) -> Result<BandwidthResult> {
    let mu2 = kernel.second_moment();
    if mu2 == 0.0 {
        return Err(Error::DegenerateKernel);
    }
    let b = rule.bandwidth(sample)?;
    let est = curvature::estimate_curvature(sample, pilot, b, tau)?;
    let h = amise_bandwidth(kernel.roughness(), mu2, est.truncated, sample.len())?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("curvature_raw".to_string(), est.raw);
    diagnostics.insert("curvature_truncated".to_string(), est.truncated);
    diagnostics.insert("pilot_bandwidth".to_string(), est.pilot_bandwidth);
    diagnostics.insert(
        "truncation_hit".to_string(),
        if est.truncation_hit { 1.0 } else { 0.0 },
    );
    Ok(BandwidthResult {
        selector: "gcpi".to_string(),
        h,
        diagnostics,
    })
}

/// Linear-interpolation sample quantile (inclusive scheme) of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// min(s, IQR/1.34) with s the n-1 divisor standard deviation.
pub fn robust_scale(sample: &Sample) -> Result<f64> {
    let xs = sample.univariate_view()?;
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientSample {
            required: 2,
            actual: n,
        });
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let s = var.sqrt();
    if s == 0.0 {
        return Err(Error::ZeroSpread);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    Ok(s.min(iqr / 1.34))
}

/// Robust normal-reference rule: 0.9 · min(s, IQR/1.34) · n^{-1/5}.
pub fn silverman_bandwidth(sample: &Sample) -> Result<f64> {
    let s_rob = robust_scale(sample)?;
    Ok(0.9 * s_rob * (sample.len() as f64).powf(-0.2))
}

pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Default cross-validation grid: 200 log-spaced points spanning
/// [0.05 s_rob, 2 s_rob].
pub fn lscv_default_grid(sample: &Sample) -> Result<Vec<f64>> {
    let s_rob = robust_scale(sample)?;
    Ok(log_spaced(0.05 * s_rob, 2.0 * s_rob, 200))
}

fn lscv_objective(xs: &[f64], kernel: &KernelSpec, h: f64) -> f64 {
    let n = xs.len() as f64;
    // ∫ f̂² = (1/(n²h)) Σ_{i,j} C((Xi-Xj)/h); leave-one-out term doubles over i<j.
    let mut sq = xs.len() as f64 * kernel.self_convolution(0.0);
    let mut loo = 0.0;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            let u = (xs[i] - xs[j]) / h;
            sq += 2.0 * kernel.self_convolution(u);
            loo += 2.0 * kernel.eval(u);
        }
    }
    sq / (n * n * h) - 2.0 * loo / (n * (n - 1.0) * h)
}

/// Grid minimizer of the least-squares cross-validation objective
/// ∫f̂_h² - (2/n) Σ_i f̂_{h,-i}(X_i). Smallest h wins ties.
pub fn lscv_bandwidth(
    sample: &Sample,
    kernel: &KernelSpec,
    h_grid: &[f64],
) -> Result<BandwidthResult> {
    let xs = sample.univariate_view()?;
    if xs.len() < 3 {
        return Err(Error::InsufficientSample {
            required: 3,
            actual: xs.len(),
        });
    }
    assert!(!h_grid.is_empty() && h_grid.iter().all(|&h| h > 0.0));
    let mut best_h = f64::INFINITY;
    let mut best_obj = f64::INFINITY;
    for &h in h_grid {
        let obj = lscv_objective(xs, kernel, h);
        if obj < best_obj || (obj == best_obj && h < best_h) {
            best_obj = obj;
            best_h = h;
        }
    }
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("objective".to_string(), best_obj);
    Ok(BandwidthResult {
        selector: "lscv".to_string(),
        h: best_h,
        diagnostics,
    })
}

/// Scalar bandwidth minimizing the d-dimensional AMISE:
/// h = (d·roughness / (lk_norm_sq · n))^{1/(d+4)}, where lk_norm_sq is the
/// squared L² norm of the leading bias operator applied to f (at d=1 this is
/// mu2² R(f'')).
pub fn multivariate_amise_bandwidth(
    roughness: f64,
    lk_norm_sq: f64,
    d: usize,
    n: usize,
) -> Result<f64> {
    if lk_norm_sq <= 0.0 {
        return Err(Error::DegenerateCurvature(lk_norm_sq));
    }
    assert!(d >= 1 && n >= 1);
    Ok((d as f64 * roughness / (lk_norm_sq * n as f64)).powf(1.0 / (d as f64 + 4.0)))
}
