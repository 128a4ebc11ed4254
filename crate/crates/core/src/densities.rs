//! Example densities with Lipschitz first derivative but kinked curvature,
//! together with their almost-everywhere second derivatives, weak-curvature
//! functionals, exact samplers, and set-valued curvature at kink points.

use crate::error::{Error, Result};
use crate::estimator::Sample;
use crate::quad;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).unwrap()
}

/// psi(x) = x|x| / (1 + x²): C¹ with Lipschitz derivative, kinked curvature at 0.
fn psi(x: f64) -> f64 {
    x * x.abs() / (1.0 + x * x)
}

fn psi_prime(x: f64) -> f64 {
    let d = 1.0 + x * x;
    x.signum() * 2.0 * x / (d * d)
}

fn psi_second(x: f64) -> f64 {
    let d = 1.0 + x * x;
    x.signum() * 2.0 * (1.0 - 3.0 * x * x) / (d * d * d)
}

/// Smooth transition s(t) = exp(-1/t) for t > 0, else 0.
fn bump_s(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth plateau: 1 on [-1/2, 1/2], 0 outside [-1, 1].
fn plateau(x: f64) -> f64 {
    let a = bump_s(2.0 - 2.0 * x.abs());
    let b = bump_s(2.0 * x.abs() - 1.0);
    if a == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Unnormalized mollifier on (-3, 3).
fn mollifier_raw(x: f64) -> f64 {
    let t = x / 3.0;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

#[derive(Clone, Debug)]
enum Family {
    /// f(x) = phi(x){1 + eps * psi(x)}
    Kinked { eps: f64 },
    /// f(x) = exp(-U_c(x)) / Z_c with Gaussian core and exponential tails.
    Huber { c: f64 },
    /// f(x) = exp(-x²/2 - (lambda/2)(x-a)₊²) / Z.
    Threshold { a: f64, lambda: f64 },
    /// Normalized mollifier plus eps * x|x| * plateau(x) on (-3, 3).
    CompactKinked { eps: f64, moll_norm: f64 },
}

/// One of the shipped example densities; immutable after construction.
#[derive(Clone, Debug)]
pub struct DensityModel {
    family: Family,
    name: String,
    kinks: Vec<f64>,
    quad_domain: (f64, f64),
    normalization: f64,
    lipschitz_fprime: f64,
}

/// Closed convex hull of nearby classical second derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureInterval {
    pub lower: f64,
    pub upper: f64,
}

impl CurvatureInterval {
    pub fn singleton(v: f64) -> CurvatureInterval {
        CurvatureInterval { lower: v, upper: v }
    }

    pub fn is_singleton(&self) -> bool {
        self.lower == self.upper
    }
}

impl DensityModel {
    pub fn kinked(eps: f64) -> Result<DensityModel> {
        if !(eps.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                family: "kinked".into(),
                message: format!("need |eps| < 1, got {eps}"),
            });
        }
        let mut m = DensityModel {
            family: Family::Kinked { eps },
            name: format!("kinked:eps={eps}"),
            kinks: if eps == 0.0 { vec![] } else { vec![0.0] },
            quad_domain: (-12.0, 12.0),
            normalization: 1.0,
            lipschitz_fprime: 0.0,
        };
        m.lipschitz_fprime = m.certify_lipschitz();
        Ok(m)
    }

    pub fn huber(c: f64) -> Result<DensityModel> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter {
                family: "huber".into(),
                message: format!("need c > 0, got {c}"),
            });
        }
        let n = std_normal();
        // Z_c = √(2π)(2Φ(c) - 1) + (2/c) e^{-c²/2}
        let z = (2.0 * PI).sqrt() * (2.0 * n.cdf(c) - 1.0) + 2.0 / c * (-0.5 * c * c).exp();
        let mut m = DensityModel {
            family: Family::Huber { c },
            name: format!("huber:c={c}"),
            kinks: vec![-c, c],
            quad_domain: (-15.0, 15.0),
            normalization: z,
            lipschitz_fprime: 0.0,
        };
        m.lipschitz_fprime = m.certify_lipschitz();
        Ok(m)
    }

    pub fn threshold(a: f64, lambda: f64) -> Result<DensityModel> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter {
                family: "threshold".into(),
                message: format!("need lambda > 0, got {lambda}"),
            });
        }
        let pot = move |x: f64| {
            let p = (x - a).max(0.0);
            0.5 * x * x + 0.5 * lambda * p * p
        };
        let z = quad::simpson_split(|x| (-pot(x)).exp(), -15.0, 15.0, &[a], 40_001);
        let mut m = DensityModel {
            family: Family::Threshold { a, lambda },
            name: format!("threshold:a={a},lambda={lambda}"),
            kinks: vec![a],
            quad_domain: (-15.0, 15.0),
            normalization: z,
            lipschitz_fprime: 0.0,
        };
        m.lipschitz_fprime = m.certify_lipschitz();
        Ok(m)
    }

    /// `eps = None` selects eps0/2, where eps0 is the largest perturbation
    /// keeping the density nonnegative.
    pub fn compact_kinked(eps: Option<f64>) -> Result<DensityModel> {
        let moll_mass = quad::simpson(mollifier_raw, -3.0, 3.0, 100_001);
        let moll_norm = 1.0 / moll_mass;
        let q = |x: f64| x * x.abs() * plateau(x);
        // eps0 = min b/|q| over the grid points where q != 0
        let mut eps0 = f64::INFINITY;
        for i in 0..=20_000 {
            let x = -1.0 + 2.0 * i as f64 / 20_000.0;
            let qx = q(x).abs();
            if qx > 1e-12 {
                eps0 = eps0.min(moll_norm * mollifier_raw(x) / qx);
            }
        }
        let eps = match eps {
            Some(e) => {
                if e.abs() >= eps0 {
                    return Err(Error::InvalidParameter {
                        family: "compact_kinked".into(),
                        message: format!("need |eps| < eps0 = {eps0:.6}, got {e}"),
                    });
                }
                e
            }
            None => 0.5 * eps0,
        };
        let mut m = DensityModel {
            family: Family::CompactKinked { eps, moll_norm },
            name: format!("compact_kinked:eps={eps}"),
            kinks: if eps == 0.0 { vec![] } else { vec![0.0] },
            quad_domain: (-3.0, 3.0),
            normalization: 1.0,
            lipschitz_fprime: 0.0,
        };
        m.lipschitz_fprime = m.certify_lipschitz();
        Ok(m)
    }

    /// Parses specs of the form `kinked:eps=0.5`, `huber:c=1`,
    /// `threshold:a=0.5,lambda=4`, `compact_kinked:eps=auto`.
    pub fn from_spec(spec: &str) -> Result<DensityModel> {
        let bad = |msg: String| Error::InvalidParameter {
            family: spec.to_string(),
            message: msg,
        };
        let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got '{part}'")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |params: &std::collections::BTreeMap<String, String>, key: &str| -> Result<f64> {
            params
                .get(key)
                .ok_or_else(|| bad(format!("missing parameter '{key}'")))?
                .parse::<f64>()
                .map_err(|e| bad(format!("parameter '{key}': {e}")))
        };
        match family {
            "kinked" => DensityModel::kinked(num(&params, "eps")?),
            "huber" => DensityModel::huber(num(&params, "c")?),
            "threshold" => DensityModel::threshold(num(&params, "a")?, num(&params, "lambda")?),
            "compact_kinked" => {
                let eps = match params.get("eps").map(|s| s.as_str()) {
                    Some("auto") | None => None,
                    Some(_) => Some(num(&params, "eps")?),
                };
                DensityModel::compact_kinked(eps)
            }
            other => Err(bad(format!("unknown density family '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kink_points(&self) -> &[f64] {
        &self.kinks
    }

    pub fn quad_domain(&self) -> (f64, f64) {
        self.quad_domain
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Numerically certified bound on ‖f''‖_∞ = Lip(f').
    pub fn lipschitz_fprime(&self) -> f64 {
        self.lipschitz_fprime
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Kinked { eps } => phi(x) * (1.0 + eps * psi(x)),
            Family::Huber { c } => (-huber_potential(*c, x)).exp() / self.normalization,
            Family::Threshold { a, lambda } => {
                let p = (x - a).max(0.0);
                (-0.5 * x * x - 0.5 * lambda * p * p).exp() / self.normalization
            }
            Family::CompactKinked { eps, moll_norm } => {
                let v = moll_norm * mollifier_raw(x) + eps * x * x.abs() * plateau(x);
                v.max(0.0)
            }
        }
    }

    /// Almost-everywhere second derivative; errors at a kink point.
    pub fn second_ae(&self, x: f64) -> Result<f64> {
        if self.kinks.contains(&x) {
            return Err(Error::AtKinkPoint(x));
        }
        Ok(self.second_off_kink(x))
    }

    /// Closed-form (or stencil-based) f'' valid away from kinks.
    fn second_off_kink(&self, x: f64) -> f64 {
        match &self.family {
            Family::Kinked { eps } => {
                phi(x)
                    * ((x * x - 1.0) * (1.0 + eps * psi(x)) - 2.0 * eps * x * psi_prime(x)
                        + eps * psi_second(x))
            }
            Family::Huber { c } => {
                let (up, upp) = if x.abs() < *c {
                    (x, 1.0)
                } else {
                    (c * x.signum(), 0.0)
                };
                (up * up - upp) * self.pdf(x)
            }
            Family::Threshold { a, lambda } => {
                let (up, upp) = if x < *a {
                    (x, 1.0)
                } else {
                    (x + lambda * (x - a), 1.0 + lambda)
                };
                (up * up - upp) * self.pdf(x)
            }
            Family::CompactKinked { .. } => self.stencil_second(x),
        }
    }

    /// 5-point second-derivative stencil that never straddles the kink at 0.
    fn stencil_second(&self, x: f64) -> f64 {
        let mut h = 1e-3;
        if x != 0.0 && x.abs() < 2.5 * h {
            h = x.abs() / 4.0;
        }
        let f = |t: f64| self.pdf(t);
        (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
            / (12.0 * h * h)
    }

    /// One-sided limit of f'' at a kink; `side > 0` approaches from the right.
    pub fn second_one_sided(&self, kink: f64, side: f64) -> f64 {
        let s = side.signum();
        match &self.family {
            Family::Kinked { eps } => {
                // limit of the a.e. formula as x -> 0±
                phi(kink)
                    * ((kink * kink - 1.0) * (1.0 + eps * psi(kink))
                        - 2.0 * eps * kink * psi_prime(kink)
                        + eps * s * 2.0 * (1.0 - 3.0 * kink * kink)
                            / (1.0 + kink * kink).powi(3))
            }
            Family::Huber { c } => {
                let inside = (kink + s * 1e-12).abs() < *c;
                let up = if inside { kink } else { c * kink.signum() };
                let upp = if inside { 1.0 } else { 0.0 };
                (up * up - upp) * self.pdf(kink)
            }
            Family::Threshold { a, lambda } => {
                let right = kink + s * 1e-12 > *a;
                let up = if right {
                    kink + lambda * (kink - a)
                } else {
                    kink
                };
                let upp = if right { 1.0 + lambda } else { 1.0 };
                (up * up - upp) * self.pdf(kink)
            }
            Family::CompactKinked { .. } => {
                // Richardson extrapolation of the one-sided stencil values
                let d = 1e-3;
                let v1 = self.second_off_kink(kink + s * d);
                let v2 = self.second_off_kink(kink + s * 2.0 * d);
                2.0 * v1 - v2
            }
        }
    }

    /// Generalized second-order derivative: singleton at smooth points, the
    /// convex hull of one-sided curvature limits at kinks.
    pub fn generalized_second_interval(&self, x: f64) -> CurvatureInterval {
        if self.kinks.contains(&x) {
            let a = self.second_one_sided(x, -1.0);
            let b = self.second_one_sided(x, 1.0);
            CurvatureInterval {
                lower: a.min(b),
                upper: a.max(b),
            }
        } else {
            CurvatureInterval::singleton(self.second_off_kink(x))
        }
    }

    /// sup{|eta| : eta in ∂²f(y), |y - x| <= A h} on a fine grid, with
    /// one-sided limits at any enclosed kink.
    pub fn local_curvature_bound(&self, x: f64, h: f64, support_radius: f64) -> f64 {
        let lo = x - support_radius * h;
        let hi = x + support_radius * h;
        let mut best: f64 = 0.0;
        let count = 2001;
        for i in 0..count {
            let y = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            if self.kinks.contains(&y) {
                continue;
            }
            best = best.max(self.second_off_kink(y).abs());
        }
        for &k in &self.kinks {
            if k >= lo && k <= hi {
                best = best.max(self.second_one_sided(k, -1.0).abs());
                best = best.max(self.second_one_sided(k, 1.0).abs());
            }
        }
        best
    }

    /// Weak-curvature functional R(f'') = ∫(f'')² by trapezoid quadrature on
    /// `points` grid nodes over `[lo, hi]`, splitting the grid at kinks.
    pub fn weak_curvature_on(&self, lo: f64, hi: f64, points: usize) -> f64 {
        let mut edges: Vec<f64> = vec![lo];
        for &k in &self.kinks {
            if k > lo && k < hi {
                edges.push(k);
            }
        }
        edges.push(hi);
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total = hi - lo;
        let mut acc = 0.0;
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let seg_pts = ((points as f64 * (b - a) / total).round() as usize).max(9);
            let spacing = (b - a) / (seg_pts - 1) as f64;
            let vals: Vec<f64> = (0..seg_pts)
                .map(|i| {
                    let y = if i == 0 && self.kinks.contains(&a) {
                        self.second_one_sided(a, 1.0)
                    } else if i == seg_pts - 1 && self.kinks.contains(&b) {
                        self.second_one_sided(b, -1.0)
                    } else {
                        self.second_off_kink(a + i as f64 * spacing)
                    };
                    y * y
                })
                .collect();
            acc += quad::trapezoid(&vals, spacing);
        }
        acc
    }

    /// R(f'') over the model's quadrature domain with the default 200001-point grid.
    pub fn weak_curvature(&self) -> f64 {
        let (lo, hi) = self.quad_domain;
        self.weak_curvature_on(lo, hi, 200_001)
    }

    /// Draws `n` i.i.d. observations; a pure function of `(seed, n)`.
    pub fn sample(&self, seed: u64, n: usize) -> Sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        match &self.family {
            Family::Kinked { eps } => {
                // rejection from N(0,1) with envelope constant 1 + |eps|
                while out.len() < n {
                    let z: f64 = rng.sample(StandardNormal);
                    let u: f64 = rng.random();
                    if u * (1.0 + eps.abs()) <= 1.0 + eps * psi(z) {
                        out.push(z);
                    }
                }
            }
            Family::Huber { c } => {
                // exact inversion of the piecewise closed-form CDF
                let c = *c;
                let z = self.normalization;
                let tail = (1.0 / c) * (-0.5 * c * c).exp();
                let norm = std_normal();
                while out.len() < n {
                    let u: f64 = rng.random();
                    if u <= 0.0 || u >= 1.0 {
                        continue;
                    }
                    let m = u * z;
                    let x = if m < tail {
                        ((c * m).ln() - 0.5 * c * c) / c
                    } else if z - m < tail {
                        (0.5 * c * c - (c * (z - m)).ln()) / c
                    } else {
                        let p = norm.cdf(-c) + (m - tail) / (2.0 * PI).sqrt();
                        norm.inverse_cdf(p)
                    };
                    out.push(x);
                }
            }
            Family::Threshold { a, lambda } => {
                // rejection from N(0,1); the extra factor is bounded by one
                while out.len() < n {
                    let x: f64 = rng.sample(StandardNormal);
                    let p = (x - a).max(0.0);
                    let u: f64 = rng.random();
                    if u <= (-0.5 * lambda * p * p).exp() {
                        out.push(x);
                    }
                }
            }
            Family::CompactKinked { .. } => {
                // rejection from the uniform envelope on the support
                let mut peak: f64 = 0.0;
                for i in 0..=6000 {
                    let x = -3.0 + 6.0 * i as f64 / 6000.0;
                    peak = peak.max(self.pdf(x));
                }
                let envelope = peak * 1.001;
                while out.len() < n {
                    let x: f64 = rng.random::<f64>() * 6.0 - 3.0;
                    let u: f64 = rng.random();
                    if u * envelope <= self.pdf(x) {
                        out.push(x);
                    }
                }
            }
        }
        Sample::univariate(out, seed, &self.name)
    }

    /// Acceptance fraction of the rejection sampler over `proposals` draws;
    /// only meaningful for the rejection-based families.
    pub fn rejection_acceptance_rate(&self, seed: u64, proposals: usize) -> Option<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match &self.family {
            Family::Kinked { eps } => {
                let mut acc = 0usize;
                for _ in 0..proposals {
                    let z: f64 = rng.sample(StandardNormal);
                    let u: f64 = rng.random();
                    if u * (1.0 + eps.abs()) <= 1.0 + eps * psi(z) {
                        acc += 1;
                    }
                }
                Some(acc as f64 / proposals as f64)
            }
            _ => None,
        }
    }

    /// Grid supremum of |f''| inflated by 5%, including one-sided kink limits.
    fn certify_lipschitz(&self) -> f64 {
        let (lo, hi) = self.quad_domain;
        let count = 20_001;
        let mut sup: f64 = 0.0;
        for i in 0..count {
            let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            if self.kinks.contains(&x) {
                continue;
            }
            sup = sup.max(self.second_off_kink(x).abs());
        }
        for &k in &self.kinks {
            sup = sup.max(self.second_one_sided(k, -1.0).abs());
            sup = sup.max(self.second_one_sided(k, 1.0).abs());
        }
        sup * 1.05
    }
}

fn huber_potential(c: f64, x: f64) -> f64 {
    if x.abs() <= c {
        0.5 * x * x
    } else {
        c * x.abs() - 0.5 * c * c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinked_pdf_values() {
        let m = DensityModel::kinked(0.5).unwrap();
        assert!((m.pdf(0.0) - 0.398942).abs() < 1e-6);
        let g = DensityModel::kinked(0.0).unwrap();
        assert!((g.pdf(0.0) - 0.398942).abs() < 1e-6);
    }

    #[test]
    fn huber_pdf_and_one_sided_limits() {
        let m = DensityModel::huber(1.0).unwrap();
        assert!((m.pdf(0.0) - 0.341961).abs() < 1e-6);
        assert!(m.second_one_sided(1.0, -1.0).abs() < 1e-12);
        assert!((m.second_one_sided(1.0, 1.0) - 0.207410).abs() < 1e-6);
        assert!(matches!(m.second_ae(1.0), Err(Error::AtKinkPoint(_))));
    }

    #[test]
    fn kinked_interval_at_origin() {
        let m = DensityModel::kinked(0.5).unwrap();
        let iv = m.generalized_second_interval(0.0);
        assert!((iv.lower - -0.797885).abs() < 1e-6);
        assert!(iv.upper.abs() < 1e-12);
        let s = m.generalized_second_interval(1.0);
        assert!(s.is_singleton());
        assert_eq!(s.lower, m.second_ae(1.0).unwrap());
    }

    #[test]
    fn huber_interval_at_kink() {
        let m = DensityModel::huber(1.0).unwrap();
        let iv = m.generalized_second_interval(1.0);
        assert!(iv.lower.abs() < 1e-12);
        assert!((iv.upper - 0.207410).abs() < 1e-6);
    }

    #[test]
    fn threshold_jump_is_lambda_times_pdf() {
        for lambda in [1.0, 4.0] {
            let m = DensityModel::threshold(0.5, lambda).unwrap();
            let jump = m.second_one_sided(0.5, -1.0) - m.second_one_sided(0.5, 1.0);
            assert!((jump.abs() - lambda * m.pdf(0.5)).abs() < 1e-8);
        }
    }

    #[test]
    fn weak_curvature_values() {
        let m = DensityModel::kinked(0.5).unwrap();
        assert!((m.weak_curvature() - 0.325427).abs() < 1e-4);
        let g = DensityModel::kinked(0.0).unwrap();
        let gaussian_exact = 3.0 / (8.0 * PI.sqrt());
        assert!((g.weak_curvature() - gaussian_exact).abs() < 1e-6);
        assert!((gaussian_exact - 0.211571).abs() < 1e-6);
    }

    #[test]
    fn huber_curvature_stable_under_refinement() {
        let m = DensityModel::huber(1.0).unwrap();
        let (lo, hi) = m.quad_domain();
        let a = m.weak_curvature_on(lo, hi, 100_001);
        let b = m.weak_curvature_on(lo, hi, 200_001);
        assert!(a > 0.0);
        assert!(((a - b) / b).abs() < 1e-4);
    }

    #[test]
    fn second_ae_matches_finite_difference_at_smooth_point() {
        let m = DensityModel::kinked(0.5).unwrap();
        let x = 2.0;
        let h = 1e-4;
        let fd = (m.pdf(x + h) - 2.0 * m.pdf(x) + m.pdf(x - h)) / (h * h);
        assert!((m.second_ae(x).unwrap() - fd).abs() < 1e-5);
    }

    #[test]
    fn sampler_is_deterministic() {
        let m = DensityModel::kinked(0.5).unwrap();
        let a = m.sample(42, 1000);
        let b = m.sample(42, 1000);
        assert_eq!(a.univariate_view().unwrap(), b.univariate_view().unwrap());
        let c = m.sample(43, 1000);
        assert_ne!(a.univariate_view().unwrap(), c.univariate_view().unwrap());
    }

    #[test]
    fn kinked_acceptance_rate() {
        let m = DensityModel::kinked(0.5).unwrap();
        let rate = m.rejection_acceptance_rate(7, 100_000).unwrap();
        assert!((rate - 2.0 / 3.0).abs() < 0.005);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(DensityModel::kinked(1.0).is_err());
        assert!(DensityModel::huber(0.0).is_err());
        assert!(DensityModel::threshold(0.5, 0.0).is_err());
        assert!(DensityModel::compact_kinked(Some(10.0)).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            DensityModel::from_spec("kinked:eps=0.5").unwrap().name(),
            "kinked:eps=0.5"
        );
        assert!(DensityModel::from_spec("threshold:a=0.5,lambda=4").is_ok());
        assert!(DensityModel::from_spec("compact_kinked:eps=auto").is_ok());
        assert!(DensityModel::from_spec("cauchy:x=1").is_err());
    }

    #[test]
    fn local_bound_dominated_by_lipschitz() {
        let m = DensityModel::kinked(0.5).unwrap();
        for x in [-2.0, 0.0, 0.3, 5.0] {
            for h in [0.01, 0.1, 0.5] {
                assert!(m.local_curvature_bound(x, h, 1.0) <= m.lipschitz_fprime() + 1e-9);
            }
        }
        // window containing the kink sees the interval endpoint magnitude
        assert!(m.local_curvature_bound(0.0, 0.1, 1.0) >= 0.797884);
        // smooth window far from the kink: close to |f''(5)|
        let b = m.local_curvature_bound(5.0, 0.01, 1.0);
        let f5 = m.second_ae(5.0).unwrap().abs();
        // |f''| moves a few percent across the 0.02-wide window.
        assert!((b - f5).abs() <= 0.1 * f5);
    }
}
