//! Second-order smoothing kernels and their exact moment functionals.
//!
//! Every bandwidth formula in this crate is driven by two kernel constants:
//! the second moment mu2 = ∫u²K(u)du and the roughness R(K) = ∫K(u)²du.
//! The shipped kernels store closed-form constants; the test suite
//! cross-checks them by quadrature.

use crate::error::{Error, Result};
use crate::quad;
use std::f64::consts::PI;
use std::sync::Arc;

/// Effective integration range used for kernels with unbounded support.
/// Gaussian tails beyond |u| = 40 are below 1e-300.
pub const GAUSSIAN_QUAD_RADIUS: f64 = 40.0;

/// Built-in kernel families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// K(u) = (3/4)(1 - u²) on [-1, 1].
    Epanechnikov,
    /// Standard normal density.
    Gaussian,
    /// K(u) = (15/16)(1 - u²)² on [-1, 1].
    Biweight,
    /// Epanechnikov rescaled to unit second moment, support [-√5, √5].
    EpanechnikovSqrt5,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [
        Kernel::Epanechnikov,
        Kernel::Gaussian,
        Kernel::Biweight,
        Kernel::EpanechnikovSqrt5,
    ];

    pub fn from_name(name: &str) -> Result<Kernel> {
        match name {
            "epanechnikov" => Ok(Kernel::Epanechnikov),
            "gaussian" => Ok(Kernel::Gaussian),
            "biweight" => Ok(Kernel::Biweight),
            "epanechnikov_sqrt5" => Ok(Kernel::EpanechnikovSqrt5),
            other => Err(Error::UnknownKernel(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Gaussian => "gaussian",
            Kernel::Biweight => "biweight",
            Kernel::EpanechnikovSqrt5 => "epanechnikov_sqrt5",
        }
    }

    #[inline]
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if u.abs() > 1.0 {
                    0.0
                } else {
                    0.75 * (1.0 - u * u)
                }
            }
            Kernel::Gaussian => (-0.5 * u * u).exp() / (2.0 * PI).sqrt(),
            Kernel::Biweight => {
                if u.abs() > 1.0 {
                    0.0
                } else {
                    let t = 1.0 - u * u;
                    0.9375 * t * t
                }
            }
            Kernel::EpanechnikovSqrt5 => {
                let s5 = 5.0_f64.sqrt();
                if u.abs() > s5 {
                    0.0
                } else {
                    0.75 / s5 * (1.0 - u * u / 5.0)
                }
            }
        }
    }
}

enum EvalFn {
    Builtin(Kernel),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Clone for EvalFn {
    fn clone(&self) -> Self {
        match self {
            EvalFn::Builtin(k) => EvalFn::Builtin(*k),
            EvalFn::Custom(f) => EvalFn::Custom(Arc::clone(f)),
        }
    }
}

/// A named second-order kernel together with its exact functionals.
///
/// Immutable after construction; safe to share across workers.
#[derive(Clone)]
pub struct KernelSpec {
    pub name: String,
    eval_fn: EvalFn,
    /// Support radius A with supp K ⊂ [-A, A]; infinite for the Gaussian.
    pub support_radius: f64,
    /// mu2(K) = ∫u²K(u)du.
    pub mu2: f64,
    /// R(K) = ∫K(u)²du.
    pub roughness: f64,
    /// ∫u²|K(u)|du; equals mu2 for the shipped nonnegative kernels.
    pub abs_second_moment: f64,
}

impl KernelSpec {
    pub fn builtin(kind: Kernel) -> KernelSpec {
        let (support, mu2, roughness) = match kind {
            Kernel::Epanechnikov => (1.0, 0.2, 0.6),
            Kernel::Gaussian => (f64::INFINITY, 1.0, 0.5 / PI.sqrt()),
            Kernel::Biweight => (1.0, 1.0 / 7.0, 5.0 / 7.0),
            Kernel::EpanechnikovSqrt5 => (5.0_f64.sqrt(), 1.0, 0.6 / 5.0_f64.sqrt()),
        };
        KernelSpec {
            name: kind.name().to_string(),
            eval_fn: EvalFn::Builtin(kind),
            support_radius: support,
            mu2,
            roughness,
            abs_second_moment: mu2,
        }
    }

    pub fn from_name(name: &str) -> Result<KernelSpec> {
        Kernel::from_name(name).map(KernelSpec::builtin)
    }

    /// Wraps a user-supplied evaluator; its moment functionals are computed by
    /// composite Simpson quadrature over the support (or [-40, 40]).
    pub fn custom(
        name: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_radius: f64,
    ) -> Result<KernelSpec> {
        let radius = if support_radius.is_finite() {
            support_radius
        } else {
            GAUSSIAN_QUAD_RADIUS
        };
        let pts = 200_001;
        let mu2 = quad::simpson(|u| u * u * eval(u), -radius, radius, pts);
        let abs2 = quad::simpson(|u| u * u * eval(u).abs(), -radius, radius, pts);
        if !mu2.is_finite() || !abs2.is_finite() {
            return Err(Error::NonIntegrableSecondMoment);
        }
        let roughness = quad::simpson(|u| eval(u) * eval(u), -radius, radius, pts);
        if !roughness.is_finite() {
            return Err(Error::NonIntegrableSquare);
        }
        Ok(KernelSpec {
            name: name.to_string(),
            eval_fn: EvalFn::Custom(Arc::new(eval)),
            support_radius,
            mu2,
            roughness,
            abs_second_moment: abs2,
        })
    }

    /// K(u); exactly zero outside a finite support.
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        if u.abs() > self.support_radius {
            return 0.0;
        }
        match &self.eval_fn {
            EvalFn::Builtin(k) => k.eval(u),
            EvalFn::Custom(f) => f(u),
        }
    }

    pub fn second_moment(&self) -> f64 {
        self.mu2
    }

    pub fn roughness(&self) -> f64 {
        self.roughness
    }

    /// Radius actually used for quadrature against this kernel.
    pub fn effective_radius(&self) -> f64 {
        if self.support_radius.is_finite() {
            self.support_radius
        } else {
            GAUSSIAN_QUAD_RADIUS
        }
    }

    /// Kernel-dependent part of the optimized AMISE: |mu2|^{2/5} R(K)^{4/5}.
    pub fn amise_constant(&self) -> Result<f64> {
        if self.mu2 == 0.0 {
            return Err(Error::DegenerateKernel);
        }
        Ok(self.mu2.abs().powf(0.4) * self.roughness.powf(0.8))
    }

    /// Self-convolution (K*K)(t), used for the exact ∫f̂² term of LSCV.
    pub fn self_convolution(&self, t: f64) -> f64 {
        match &self.eval_fn {
            EvalFn::Builtin(Kernel::Gaussian) => {
                // N(0,1) * N(0,1) = N(0,2)
                (-0.25 * t * t).exp() / (4.0 * PI).sqrt()
            }
            EvalFn::Builtin(Kernel::Epanechnikov) => epanechnikov_self_conv(t),
            EvalFn::Builtin(Kernel::EpanechnikovSqrt5) => {
                // K(u) = (1/√5) K_std(u/√5) implies (K*K)(t) = (1/√5)(K_std*K_std)(t/√5)
                let s5 = 5.0_f64.sqrt();
                epanechnikov_self_conv(t / s5) / s5
            }
            _ => {
                let a = self.effective_radius();
                let lo = (-a).max(t - a);
                let hi = a.min(t + a);
                if hi <= lo {
                    return 0.0;
                }
                quad::simpson(|u| self.eval(u) * self.eval(t - u), lo, hi, 401)
            }
        }
    }
}

/// Closed-form (K*K)(t) for the standard Epanechnikov kernel, support [-2, 2].
fn epanechnikov_self_conv(t: f64) -> f64 {
    let t = t.abs();
    if t >= 2.0 {
        return 0.0;
    }
    let d = 2.0 - t;
    3.0 / 160.0 * d * d * d * (t * t + 6.0 * t + 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let epa = KernelSpec::builtin(Kernel::Epanechnikov);
        assert_eq!(epa.eval(0.0), 0.75);
        assert_eq!(epa.eval(2.0), 0.0);
        let paper = KernelSpec::builtin(Kernel::EpanechnikovSqrt5);
        assert!((paper.eval(0.0) - 0.335410).abs() < 1e-6);
    }

    #[test]
    fn stored_constants() {
        let g = KernelSpec::builtin(Kernel::Gaussian);
        assert_eq!(g.second_moment(), 1.0);
        assert!((g.roughness() - 0.282095).abs() < 1e-6);
        let b = KernelSpec::builtin(Kernel::Biweight);
        assert!((b.roughness() - 0.714286).abs() < 1e-6);
        let e = KernelSpec::builtin(Kernel::Epanechnikov);
        assert_eq!(e.second_moment(), 0.2);
        assert_eq!(e.roughness(), 0.6);
    }

    #[test]
    fn amise_constants_and_epanechnikov_minimality() {
        let epa = KernelSpec::builtin(Kernel::Epanechnikov);
        let c_epa = epa.amise_constant().unwrap();
        assert!((c_epa - 0.3491).abs() < 1e-3);
        assert!((KernelSpec::builtin(Kernel::Gaussian).amise_constant().unwrap() - 0.3633).abs() < 1e-3);
        assert!((KernelSpec::builtin(Kernel::Biweight).amise_constant().unwrap() - 0.3508).abs() < 1e-3);
        for k in Kernel::ALL {
            if k != Kernel::Epanechnikov {
                let c = KernelSpec::builtin(k).amise_constant().unwrap();
                // the √5-rescaled kernel ties the standard one up to rounding
                assert!(c_epa <= c + 1e-12, "{}", k.name());
            }
        }
    }

    #[test]
    fn paper_kernel_is_rescaled_standard() {
        let std = KernelSpec::builtin(Kernel::Epanechnikov);
        let paper = KernelSpec::builtin(Kernel::EpanechnikovSqrt5);
        let s5 = 5.0_f64.sqrt();
        for i in 0..=400 {
            let u = -3.0 + 6.0 * i as f64 / 400.0;
            let want = std.eval(u / s5) / s5;
            assert!((paper.eval(u) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn custom_kernel_matches_builtin_constants() {
        let tri = KernelSpec::custom("triangular", |u| if u.abs() <= 1.0 { 1.0 - u.abs() } else { 0.0 }, 1.0)
            .unwrap();
        assert!((tri.mu2 - 1.0 / 6.0).abs() < 1e-8);
        assert!((tri.roughness - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn degenerate_kernel_guard() {
        // a signed fourth-order kernel with vanishing second moment
        let k = KernelSpec {
            name: "higher_order".into(),
            eval_fn: EvalFn::Builtin(Kernel::Gaussian),
            support_radius: f64::INFINITY,
            mu2: 0.0,
            roughness: 0.3,
            abs_second_moment: 0.5,
        };
        assert!(matches!(k.amise_constant(), Err(Error::DegenerateKernel)));
    }

    #[test]
    fn self_convolution_closed_forms_match_quadrature() {
        for kind in [Kernel::Epanechnikov, Kernel::Gaussian, Kernel::EpanechnikovSqrt5] {
            let k = KernelSpec::builtin(kind);
            for t in [0.0, 0.3, 1.0, 1.7, 2.5] {
                let a = k.effective_radius();
                let lo = (-a).max(t - a);
                let hi = a.min(t + a);
                let direct = if hi <= lo {
                    0.0
                } else {
                    quad::simpson(|u| k.eval(u) * k.eval(t - u), lo, hi, 20_001)
                };
                assert!(
                    (k.self_convolution(t) - direct).abs() < 1e-9,
                    "{} at t={t}",
                    kind.name()
                );
            }
        }
    }
}
