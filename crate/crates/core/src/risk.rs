//! Integrated risk computation and the seeded Monte Carlo harness: ISE,
//! integrated variance and squared bias, the finite-sample MISE upper bound,
//! replicated experiments over (sample size, kernel, selector) cells, and the
//! log-log rate slope.

use crate::bandwidth::{self, PilotRule};
use crate::curvature::PilotSpec;
use crate::densities::DensityModel;
use crate::error::{Error, Result};
use crate::estimator::{self, EvaluationGrid, Sample};
use crate::kernels::KernelSpec;
use crate::quad;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Which bandwidth rule a Monte Carlo cell uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Oracle,
    Gcpi,
    Silverman,
    Lscv,
}

impl Selector {
    pub fn from_name(name: &str) -> Result<Selector> {
        match name {
            "oracle" => Ok(Selector::Oracle),
            "gcpi" => Ok(Selector::Gcpi),
            "silverman" => Ok(Selector::Silverman),
            "lscv" => Ok(Selector::Lscv),
            other => Err(Error::UnknownSelector(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Selector::Oracle => "oracle",
            Selector::Gcpi => "gcpi",
            Selector::Silverman => "silverman",
            Selector::Lscv => "lscv",
        }
    }
}

/// Full description of a replicated experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub density: String,
    pub sizes: Vec<usize>,
    pub kernels: Vec<String>,
    pub selectors: Vec<String>,
    pub reps: usize,
    pub master_seed: u64,
    pub grid: EvaluationGrid,
    pub pilot_alpha: f64,
    pub tau: f64,
}

/// Aggregated outcome of one (n, kernel, selector) cell.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub n: usize,
    pub kernel: String,
    pub selector: String,
    pub bandwidth_mean: f64,
    pub mean_ise: f64,
    pub se_ise: f64,
    /// Median selected-to-oracle bandwidth ratio; plug-in selectors only.
    pub median_h_ratio: Option<f64>,
    pub failed_reps: usize,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-replication RNG seed derived from the experiment coordinates, so the
/// stream assigned to a replication does not depend on scheduling.
pub fn rep_seed(master_seed: u64, n: usize, kernel: &str, selector: &str, rep: usize) -> u64 {
    let mut state = master_seed;
    let mut out = splitmix64(&mut state);
    state ^= n as u64;
    out ^= splitmix64(&mut state);
    for b in kernel.bytes().chain(selector.bytes()) {
        state ^= b as u64;
        out ^= splitmix64(&mut state);
    }
    state ^= rep as u64;
    out ^ splitmix64(&mut state)
}

/// Trapezoid integral of the squared difference between two grid vectors.
pub fn ise(estimate: &[f64], truth: &[f64], grid: &EvaluationGrid) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch(estimate.len(), truth.len()));
    }
    assert_eq!(estimate.len(), grid.count);
    let sq: Vec<f64> = estimate
        .iter()
        .zip(truth)
        .map(|(e, t)| (e - t) * (e - t))
        .collect();
    Ok(quad::trapezoid(&sq, grid.spacing()))
}

/// Exact integrated variance of the KDE:
/// R(K)/(nh) - (1/n) ||K_h * f||².
pub fn integrated_variance(model: &DensityModel, kernel: &KernelSpec, h: f64, n: usize) -> f64 {
    assert!(h > 0.0 && n >= 1);
    let (lo, hi) = model.quad_domain();
    let conv_norm_sq = quad::simpson(
        |x| {
            let e = estimator::kde_expectation(model, kernel, h, x);
            e * e
        },
        lo,
        hi,
        2001,
    );
    kernel.roughness() / (n as f64 * h) - conv_norm_sq / n as f64
}

/// ∫ (E f̂_h - f)² over the model's quadrature domain.
pub fn integrated_squared_bias(model: &DensityModel, kernel: &KernelSpec, h: f64) -> f64 {
    assert!(h > 0.0);
    let (lo, hi) = model.quad_domain();
    quad::simpson(
        |x| {
            let d = estimator::kde_expectation(model, kernel, h, x) - model.pdf(x);
            d * d
        },
        lo,
        hi,
        2001,
    )
}

/// Finite-sample MISE bound (h⁴/4)(∫u²|K|)² ||f''||² + R(K)/(nh), with the
/// curvature functional ||f''||² supplied by the caller.
pub fn mise_upper_bound(kernel: &KernelSpec, h: f64, n: usize, curvature: f64) -> f64 {
    assert!(h > 0.0 && n >= 1 && curvature >= 0.0);
    let m = kernel.abs_second_moment;
    0.25 * h.powi(4) * m * m * curvature + kernel.roughness() / (n as f64 * h)
}

struct RepOutcome {
    h: f64,
    ise: f64,
    h_ratio: Option<f64>,
}

fn run_rep(
    model: &DensityModel,
    kernel: &KernelSpec,
    selector: Selector,
    n: usize,
    seed: u64,
    grid: &EvaluationGrid,
    truth: &[f64],
    oracle_h: f64,
    pilot_alpha: f64,
    tau: f64,
) -> Result<RepOutcome> {
    let sample = model.sample(seed, n);
    let (h, ratio) = match selector {
        Selector::Oracle => (oracle_h, None),
        Selector::Gcpi => {
            let r = bandwidth::gcpi_bandwidth(
                &sample,
                kernel,
                &PilotSpec::gaussian(),
                PilotRule::Exponent(pilot_alpha),
                tau,
            )?;
            (r.h, Some(r.h / oracle_h))
        }
        Selector::Silverman => (bandwidth::silverman_bandwidth(&sample)?, None),
        Selector::Lscv => {
            let grid_h = bandwidth::lscv_default_grid(&sample)?;
            (bandwidth::lscv_bandwidth(&sample, kernel, &grid_h)?.h, None)
        }
    };
    let est = estimator::kde_eval_grid(&sample, kernel, h, grid)?;
    let ise = ise(&est, truth, grid)?;
    Ok(RepOutcome {
        h,
        ise,
        h_ratio: ratio,
    })
}

/// Lower median of an unsorted slice (deterministic for even lengths).
fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[(values.len() - 1) / 2]
}

/// Runs the replicated experiment. Replications are distributed over
/// `threads` workers by index stride; each replication's RNG stream depends
/// only on its coordinates and results are aggregated in replication order,
/// so the output is identical for any worker count.
pub fn monte_carlo_mise(config: &ExperimentConfig, threads: usize) -> Result<Vec<ResultRow>> {
    assert!(config.reps >= 1 && !config.sizes.is_empty());
    let threads = threads.max(1);
    let model = DensityModel::from_spec(&config.density)?;
    let curvature = model.weak_curvature();
    let truth: Vec<f64> = config.grid.points().map(|x| model.pdf(x)).collect();
    let kernels: Vec<KernelSpec> = config
        .kernels
        .iter()
        .map(|k| KernelSpec::from_name(k))
        .collect::<Result<_>>()?;
    let selectors: Vec<Selector> = config
        .selectors
        .iter()
        .map(|s| Selector::from_name(s))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &n in &config.sizes {
        for kernel in &kernels {
            let oracle_h =
                bandwidth::amise_bandwidth(kernel.roughness(), kernel.second_moment(), curvature, n)?;
            for &selector in &selectors {
                let mut outcomes: Vec<Option<Result<RepOutcome>>> =
                    (0..config.reps).map(|_| None).collect();
                std::thread::scope(|scope| {
                    for (worker, chunk) in outcomes.chunks_mut(config.reps.div_ceil(threads)).enumerate() {
                        let model = &model;
                        let truth = &truth;
                        let grid = &config.grid;
                        let base = worker * config.reps.div_ceil(threads);
                        let master = config.master_seed;
                        let (alpha, tau) = (config.pilot_alpha, config.tau);
                        scope.spawn(move || {
                            for (offset, slot) in chunk.iter_mut().enumerate() {
                                let r = base + offset;
                                let seed =
                                    rep_seed(master, n, &kernel.name, selector.name(), r);
                                *slot = Some(run_rep(
                                    model, kernel, selector, n, seed, grid, truth, oracle_h,
                                    alpha, tau,
                                ));
                            }
                        });
                    }
                });

                let mut ises = Vec::with_capacity(config.reps);
                let mut hs = Vec::with_capacity(config.reps);
                let mut ratios = Vec::new();
                let mut failed = 0usize;
                for outcome in outcomes {
                    match outcome.expect("worker filled every slot") {
                        Ok(o) => {
                            ises.push(o.ise);
                            hs.push(o.h);
                            if let Some(r) = o.h_ratio {
                                ratios.push(r);
                            }
                        }
                        Err(_) => failed += 1,
                    }
                }
                if ises.is_empty() {
                    return Err(Error::InsufficientSample {
                        required: 1,
                        actual: 0,
                    });
                }
                let m = ises.len() as f64;
                let mean_ise = ises.iter().sum::<f64>() / m;
                let se_ise = if ises.len() > 1 {
                    (ises.iter().map(|v| (v - mean_ise) * (v - mean_ise)).sum::<f64>()
                        / (m - 1.0))
                        .sqrt()
                        / m.sqrt()
                } else {
                    0.0
                };
                rows.push(ResultRow {
                    n,
                    kernel: kernel.name.clone(),
                    selector: selector.name().to_string(),
                    bandwidth_mean: hs.iter().sum::<f64>() / m,
                    mean_ise,
                    se_ise,
                    median_h_ratio: if ratios.is_empty() {
                        None
                    } else {
                        Some(lower_median(&mut ratios))
                    },
                    failed_reps: failed,
                });
            }
        }
    }
    Ok(rows)
}

/// Monte Carlo mean ISE for the d=2 standard normal with the product Gaussian
/// kernel at the oracle scalar bandwidth h = n^{-1/6}. ISE by tensor-grid
/// trapezoid on [-5,5]².
pub fn monte_carlo_mise_2d(sizes: &[usize], reps: usize, master_seed: u64) -> Result<Vec<(usize, f64)>> {
    let kernel = KernelSpec::from_name("gaussian")?;
    let grid = EvaluationGrid::new(-5.0, 5.0, 201);
    let dx = grid.spacing();
    let phi: Vec<f64> = grid
        .points()
        .map(|x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt())
        .collect();
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        // Oracle scalar bandwidth: with R(K)=1/(4pi) and ||(d/dx²+d/dy²)f||² =
        // 1/(2pi), h = (2R(K)/(lk n))^{1/6} = n^{-1/6} exactly.
        let h = (n as f64).powf(-1.0 / 6.0);
        let mut sum = 0.0;
        for r in 0..reps {
            let seed = rep_seed(master_seed, n, "gaussian2d", "oracle", r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<f64> = (0..2 * n)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let sample = Sample::multivariate(data, 2, seed, "std_normal_2d");
            let est = estimator::kde_eval_grid_2d(&sample, &kernel, h, &grid, &grid)?;
            let mut ise2 = 0.0;
            for i in 0..grid.count {
                let wi = if i == 0 || i == grid.count - 1 { 0.5 } else { 1.0 };
                for j in 0..grid.count {
                    let wj = if j == 0 || j == grid.count - 1 { 0.5 } else { 1.0 };
                    let d = est[i * grid.count + j] - phi[i] * phi[j];
                    ise2 += wi * wj * d * d;
                }
            }
            sum += ise2 * dx * dx;
        }
        out.push((n, sum / reps as f64));
    }
    Ok(out)
}

/// Ordinary least-squares slope of log(mean_ise) against log(n).
pub fn rate_slope(ns: &[usize], mean_ises: &[f64]) -> Result<f64> {
    if ns.len() != mean_ises.len() {
        return Err(Error::LengthMismatch(ns.len(), mean_ises.len()));
    }
    if ns.len() < 2 {
        return Err(Error::InsufficientPoints {
            required: 2,
            actual: ns.len(),
        });
    }
    assert!(mean_ises.iter().all(|&v| v > 0.0));
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mean_ises.iter().map(|&v| v.ln()).collect();
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Ok(sxy / sxx)
}
