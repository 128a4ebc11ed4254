//! Estimation of the weak-curvature functional R(f'') from data: pilot
//! second-derivative smoothing, the pilot autocorrelation kernel, the
//! leave-one-out U-statistic, and the truncation safeguard.

use crate::error::{Error, Result};
use crate::estimator::Sample;
use std::f64::consts::PI;

/// Pilot kernel for curvature estimation. Only the Gaussian pilot ships; its
/// autocorrelation kernel has the closed form
/// G_L(z) = phi_{√2}(z) (z⁴ - 12z² + 12) / 16.
#[derive(Clone, Copy, Debug)]
pub struct PilotSpec {
    _private: (),
}

impl PilotSpec {
    pub fn gaussian() -> PilotSpec {
        PilotSpec { _private: () }
    }

    pub fn name(&self) -> &'static str {
        "gaussian"
    }

    /// L''(u) = (u² - 1) phi(u).
    #[inline]
    pub fn second_derivative(&self, u: f64) -> f64 {
        (u * u - 1.0) * (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
    }

    /// R(L'') = ∫(L'')² = 3 / (8√π).
    pub fn roughness_second(&self) -> f64 {
        3.0 / (8.0 * PI.sqrt())
    }

    /// Autocorrelation kernel G_L(z) = ∫ L''(y) L''(y + z) dy.
    ///
    /// For an even pilot, G_L = L'' * L'', i.e. the fourth derivative of the
    /// N(0, 2) density.
    #[inline]
    pub fn autocorrelation(&self, z: f64) -> f64 {
        let z2 = z * z;
        (-0.25 * z2).exp() / (2.0 * PI.sqrt()) * (z2 * z2 - 12.0 * z2 + 12.0) / 16.0
    }
}

/// Curvature estimate with its intermediate diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureEstimate {
    pub raw: f64,
    pub truncated: f64,
    pub pilot_bandwidth: f64,
    pub truncation_hit: bool,
    pub n: usize,
}

/// Pilot estimator of f''(x): (1/(n b³)) Σ L''((x - X_i)/b).
pub fn pilot_second_derivative(sample: &Sample, pilot: &PilotSpec, b: f64, x: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let xs = sample.univariate_view()?;
    assert!(b > 0.0);
    let mut acc = 0.0;
    for &xi in xs {
        acc += pilot.second_derivative((x - xi) / b);
    }
    Ok(acc / (xs.len() as f64 * b * b * b))
}

/// Off-diagonal U-statistic estimator of R(f''):
/// (1/(n(n-1) b⁵)) Σ_{i≠j} G_L((X_i - X_j)/b).
///
/// The pairwise sum runs over i < j (doubled; G_L is even) with Neumaier
/// compensated accumulation, since the n² terms have mixed sign.
pub fn u_stat_curvature(sample: &Sample, pilot: &PilotSpec, b: f64) -> Result<f64> {
    let xs = sample.univariate_view()?;
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientSample {
            required: 2,
            actual: n,
        });
    }
    assert!(b > 0.0);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let term = pilot.autocorrelation((xs[i] - xs[j]) / b);
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
    }
    let total = 2.0 * (sum + comp);
    Ok(total / (n as f64 * (n - 1) as f64 * b.powi(5)))
}

/// Truncation safeguard: max(raw, tau) plus whether it bit.
pub fn truncate_curvature(raw: f64, tau: f64) -> (f64, bool) {
    assert!(tau > 0.0);
    if raw < tau {
        (tau, true)
    } else {
        (raw, false)
    }
}

/// Full curvature estimation pipeline for a given pilot bandwidth.
pub fn estimate_curvature(
    sample: &Sample,
    pilot: &PilotSpec,
    b: f64,
    tau: f64,
) -> Result<CurvatureEstimate> {
    let raw = u_stat_curvature(sample, pilot, b)?;
    let (truncated, hit) = truncate_curvature(raw, tau);
    Ok(CurvatureEstimate {
        raw,
        truncated,
        pilot_bandwidth: b,
        truncation_hit: hit,
        n: sample.len(),
    })
}

/// True iff the pilot rate b = n^{-alpha} satisfies b -> 0, n b⁴ -> ∞ and
/// n² b⁹ -> ∞, i.e. 0 < alpha < 2/9.
pub fn validate_pilot_rate(alpha: f64) -> bool {
    alpha > 0.0 && alpha < 2.0 / 9.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn pilot_single_point_values() {
        let p = PilotSpec::gaussian();
        let s = Sample::univariate(vec![0.0], 0, "test");
        let at0 = pilot_second_derivative(&s, &p, 1.0, 0.0).unwrap();
        assert!((at0 - -0.398942).abs() < 1e-6);
        let at1 = pilot_second_derivative(&s, &p, 1.0, 1.0).unwrap();
        assert!(at1.abs() < 1e-15);
    }

    #[test]
    fn autocorrelation_closed_form() {
        let p = PilotSpec::gaussian();
        assert!((p.autocorrelation(0.0) - 0.211571).abs() < 1e-6);
        assert!((p.autocorrelation(0.0) - p.roughness_second()).abs() < 1e-12);
        assert_eq!(p.autocorrelation(5.0), p.autocorrelation(-5.0));
        for z in [0.5, 1.0, 2.0] {
            let direct = quad::simpson(
                |y| p.second_derivative(y) * p.second_derivative(y + z),
                -30.0,
                30.0,
                40_001,
            );
            assert!((p.autocorrelation(z) - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn u_stat_coincident_points() {
        let p = PilotSpec::gaussian();
        let s = Sample::univariate(vec![0.0, 0.0], 0, "test");
        let v = u_stat_curvature(&s, &p, 1.0).unwrap();
        assert!((v - 0.211571).abs() < 1e-6);
    }

    #[test]
    fn u_stat_needs_two_points() {
        let p = PilotSpec::gaussian();
        let s = Sample::univariate(vec![0.0], 0, "test");
        assert!(matches!(
            u_stat_curvature(&s, &p, 1.0),
            Err(Error::InsufficientSample { .. })
        ));
    }

    #[test]
    fn u_stat_scale_law() {
        let p = PilotSpec::gaussian();
        let xs = vec![-1.3, -0.2, 0.4, 0.9, 2.2];
        let base = u_stat_curvature(&Sample::univariate(xs.clone(), 0, "t"), &p, 0.7).unwrap();
        let s = 3.0;
        let scaled = u_stat_curvature(
            &Sample::univariate(xs.iter().map(|v| v * s).collect(), 0, "t"),
            &p,
            0.7 * s,
        )
        .unwrap();
        assert!((scaled - base / s.powi(5)).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn u_stat_permutation_invariant() {
        let p = PilotSpec::gaussian();
        let xs = vec![0.3, -1.1, 2.0, 0.7, -0.4, 1.5];
        let mut rev = xs.clone();
        rev.reverse();
        let a = u_stat_curvature(&Sample::univariate(xs, 0, "t"), &p, 0.5).unwrap();
        let b = u_stat_curvature(&Sample::univariate(rev, 0, "t"), &p, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_paths() {
        assert_eq!(truncate_curvature(0.3, 1e-8), (0.3, false));
        assert_eq!(truncate_curvature(-0.05, 1e-8), (1e-8, true));
        assert_eq!(truncate_curvature(0.0, 1e-8), (1e-8, true));
    }

    #[test]
    fn pilot_rate_window() {
        assert!(validate_pilot_rate(1.0 / 6.0));
        assert!(!validate_pilot_rate(0.25));
        assert!(!validate_pilot_rate(0.0));
        assert!(!validate_pilot_rate(2.0 / 9.0));
    }
}
