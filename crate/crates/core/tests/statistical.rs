//! Monte Carlo checks: estimator expectations, variance identities,
//! sampler distributions, and the exact diagonal decomposition of the
//! integrated squared pilot derivative.

use curvkde::curvature::{u_stat_curvature, PilotSpec};
use curvkde::densities::DensityModel;
use curvkde::estimator::{self, EvaluationGrid, Sample};
use curvkde::kernels::{Kernel, KernelSpec};
use curvkde::quad;
use curvkde::risk;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn diagonal_decomposition_is_exact() {
    // Integrated squared pilot second-derivative estimate
    //   ((n-1)/n) * u_stat + R(L'')/(n b^5)
    // checked against direct quadrature for ten random samples.
    let pilot = PilotSpec::gaussian();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..10 {
        let n = 5 + trial;
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let b = rng.random_range(0.3..1.2);
        let sample = Sample::univariate(xs.clone(), 0, "mc");
        let u = u_stat_curvature(&sample, &pilot, b).unwrap();
        let nf = n as f64;
        let identity = (nf - 1.0) / nf * u + pilot.roughness_second() / (nf * b.powi(5));
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 12.0 * b;
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 12.0 * b;
        let direct = quad::simpson(
            |x| {
                let v = curvkde::curvature::pilot_second_derivative(&sample, &pilot, b, x).unwrap();
                v * v
            },
            lo,
            hi,
            20_001,
        );
        assert!(
            ((direct - identity) / identity).abs() < 1e-6,
            "trial {trial}: direct {direct} vs identity {identity}"
        );
    }
}

#[test]
fn kde_mean_matches_expectation() {
    let model = DensityModel::kinked(0.5).unwrap();
    let kernel = KernelSpec::builtin(Kernel::Epanechnikov);
    let (h, n, reps) = (0.4, 200usize, 400usize);
    for x in [-1.0, 0.0, 0.7] {
        let expected = estimator::kde_expectation(&model, &kernel, h, x);
        let mut values = Vec::with_capacity(reps);
        for r in 0..reps {
            let sample = model.sample(1000 + r as u64, n);
            values.push(estimator::kde_eval(&sample, &kernel, h, &[x]).unwrap());
        }
        let m = values.iter().sum::<f64>() / reps as f64;
        let sd = (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (reps - 1) as f64)
            .sqrt();
        let se = sd / (reps as f64).sqrt();
        assert!(
            (m - expected).abs() <= 4.0 * se,
            "x={x}: mean {m}, expectation {expected}, se {se}"
        );
    }
}

#[test]
fn integrated_variance_matches_simulation() {
    let model = DensityModel::kinked(0.5).unwrap();
    let kernel = KernelSpec::builtin(Kernel::Epanechnikov);
    let (h, n, reps) = (0.4, 200usize, 500usize);
    let grid = EvaluationGrid::new(-6.0, 6.0, 601);
    let expectation: Vec<f64> = grid
        .points()
        .map(|x| estimator::kde_expectation(&model, &kernel, h, x))
        .collect();
    // Per replication: grid-integrated squared deviation from the exact mean
    // function. Its average estimates the integrated variance.
    let mut w = Vec::with_capacity(reps);
    for r in 0..reps {
        let sample = model.sample(7000 + r as u64, n);
        let est = estimator::kde_eval_grid(&sample, &kernel, h, &grid).unwrap();
        w.push(risk::ise(&est, &expectation, &grid).unwrap());
    }
    let m = w.iter().sum::<f64>() / reps as f64;
    let sd = (w.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (reps - 1) as f64).sqrt();
    let se = sd / (reps as f64).sqrt();
    let exact = risk::integrated_variance(&model, &kernel, h, n);
    assert!(
        (m - exact).abs() <= 4.0 * se,
        "mc {m} vs exact {exact}, se {se}"
    );
}

#[test]
fn mise_bound_holds_in_simulation() {
    let model = DensityModel::kinked(0.5).unwrap();
    let kernel = KernelSpec::builtin(Kernel::Epanechnikov);
    let (h, n, reps) = (0.3, 500usize, 500usize);
    let grid = EvaluationGrid::new(-6.0, 6.0, 601);
    let truth: Vec<f64> = grid.points().map(|x| model.pdf(x)).collect();
    let mut ises = Vec::with_capacity(reps);
    for r in 0..reps {
        let sample = model.sample(9000 + r as u64, n);
        let est = estimator::kde_eval_grid(&sample, &kernel, h, &grid).unwrap();
        ises.push(risk::ise(&est, &truth, &grid).unwrap());
    }
    let m = ises.iter().sum::<f64>() / reps as f64;
    let sd = (ises.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (reps - 1) as f64).sqrt();
    let se = sd / (reps as f64).sqrt();
    let curvature = model.weak_curvature_on(-12.0, 12.0, 50_001);
    let bound = risk::mise_upper_bound(&kernel, h, n, curvature);
    assert!(m <= bound + 4.0 * se, "mc mise {m} vs bound {bound}");
}

/// Kolmogorov-Smirnov distance of a sample against a numeric CDF.
fn ks_statistic(model: &DensityModel, seed: u64, n: usize) -> f64 {
    let (lo, hi) = model.quad_domain();
    let count = 200_001;
    let spacing = (hi - lo) / (count - 1) as f64;
    let pdf_vals: Vec<f64> = (0..count).map(|i| model.pdf(lo + i as f64 * spacing)).collect();
    let cdf = quad::cumulative_trapezoid(&pdf_vals, spacing);
    let cdf_at = |x: f64| -> f64 {
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let pos = (x - lo) / spacing;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        cdf[i] * (1.0 - frac) + cdf[i + 1] * frac
    };
    let sample = model.sample(seed, n);
    let mut xs = sample.univariate_view().unwrap().to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let c = cdf_at(x);
        d = d.max((c - i as f64 / n as f64).abs());
        d = d.max(((i + 1) as f64 / n as f64 - c).abs());
    }
    d
}

#[test]
fn samplers_match_their_densities() {
    let n = 20_000;
    // 1% critical value for the KS statistic.
    let critical = 1.63 / (n as f64).sqrt();
    let models = [
        DensityModel::kinked(0.5).unwrap(),
        DensityModel::huber(1.345).unwrap(),
        DensityModel::threshold(0.5, 4.0).unwrap(),
        DensityModel::compact_kinked(None).unwrap(),
    ];
    for m in &models {
        let d = ks_statistic(m, 2024, n);
        assert!(d < critical, "{}: KS {d} vs {critical}", m.name());
    }
}

#[test]
fn pilot_estimator_mean_matches_convolution() {
    // E pilot_second_derivative(x) = (1/b^3) integral of L''((x-y)/b) f(y) dy.
    let model = DensityModel::kinked(0.5).unwrap();
    let pilot = PilotSpec::gaussian();
    let (b, n, reps, x) = (0.5, 300usize, 300usize, 0.4);
    let (lo, hi) = model.quad_domain();
    let expected = quad::simpson(
        |y| pilot.second_derivative((x - y) / b) * model.pdf(y),
        lo,
        hi,
        50_001,
    ) / b.powi(3);
    let mut vals = Vec::with_capacity(reps);
    for r in 0..reps {
        let sample = model.sample(31_000 + r as u64, n);
        vals.push(
            curvkde::curvature::pilot_second_derivative(&sample, &pilot, b, x).unwrap(),
        );
    }
    let m = vals.iter().sum::<f64>() / reps as f64;
    let sd = (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (reps - 1) as f64).sqrt();
    let se = sd / (reps as f64).sqrt();
    assert!((m - expected).abs() <= 4.0 * se, "mc {m} vs {expected}, se {se}");
}

#[test]
fn silverman_normal_reference_recovers_unit_scale() {
    // Standard normal data: s -> 1 and IQR/1.34 -> 1, so the rule approaches
    // 0.9 n^{-1/5}.
    let n = 10_000;
    let mut ratio_sum = 0.0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                let d: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng);
                d
            })
            .collect();
        let h = curvkde::bandwidth::silverman_bandwidth(&Sample::univariate(xs, 0, "mc")).unwrap();
        ratio_sum += h / (0.9 * (n as f64).powf(-0.2));
    }
    let mean_ratio = ratio_sum / 20.0;
    assert!((mean_ratio - 1.0).abs() < 0.02, "mean ratio {mean_ratio}");
}
