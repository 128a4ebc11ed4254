//! Command-line front end: seeded simulation experiments, bandwidth
//! selection on CSV data, curvature estimation, and density grid emission.

use clap::{Parser, Subcommand};
use curvkde::bandwidth::{self, PilotRule};
use curvkde::cli;
use curvkde::curvature::{self, PilotSpec};
use curvkde::error::Error;
use curvkde::estimator::EvaluationGrid;
use curvkde::kernels::KernelSpec;

#[derive(Parser)]
#[command(name = "curvkde", about = "Kernel density estimation with curvature-driven bandwidth selection", version)]
struct Args {
    /// Master seed override for simulation commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker count; never changes numeric output.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated experiment from a config file; write a result CSV.
    Simulate {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: String,
    },
    /// Select a bandwidth for one column of a CSV file.
    Bandwidth {
        #[arg(long)]
        input: String,
        #[arg(long)]
        column: String,
        /// One of: amise_oracle, gcpi, silverman, lscv.
        #[arg(long)]
        method: String,
        #[arg(long, default_value = "epanechnikov")]
        kernel: String,
        /// Known curvature functional R(f''); required for amise_oracle.
        #[arg(long, allow_hyphen_values = true)]
        curvature: Option<f64>,
        /// Pilot rule b = s_rob * n^(-alpha) for gcpi.
        #[arg(long, default_value_t = 1.0 / 9.0)]
        pilot_alpha: f64,
        /// Explicit pilot bandwidth; overrides --pilot-alpha.
        #[arg(long)]
        pilot_b: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tau: f64,
        /// Cross-validation grid as lo,hi,count; defaults to a log-spaced
        /// grid spanning [0.05, 2] times the robust scale.
        #[arg(long, allow_hyphen_values = true)]
        h_grid: Option<String>,
    },
    /// Estimate the curvature functional R(f'') from one column of a CSV.
    Curvature {
        #[arg(long)]
        input: String,
        #[arg(long)]
        column: String,
        /// Pilot rule b = s_rob * n^(-alpha).
        #[arg(long, default_value_t = 1.0 / 9.0)]
        pilot_alpha: f64,
        #[arg(long, default_value_t = 1e-8)]
        tau: f64,
    },
    /// Write a density and its a.e. second derivative over a grid.
    Density {
        /// Model spec, e.g. kinked:eps=0.5 or huber:c=1.345.
        #[arg(long)]
        model: String,
        /// Grid as lo,hi,count.
        #[arg(long, default_value = "-6,6,1201", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: String,
    },
}

fn parse_grid(text: &str) -> Result<EvaluationGrid, Error> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || Error::ConfigError {
        line: 0,
        message: format!("grid must be lo,hi,count, got {text:?}"),
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if lo >= hi || count < 2 {
        return Err(bad());
    }
    Ok(EvaluationGrid::new(lo, hi, count))
}

fn run(args: Args) -> Result<(), Error> {
    match args.command {
        Command::Simulate { config, out } => cli::run_experiment(&config, &out, args.seed, args.threads),
        Command::Bandwidth {
            input,
            column,
            method,
            kernel,
            curvature,
            pilot_alpha,
            pilot_b,
            tau,
            h_grid,
        } => {
            let sample = cli::ingest_csv(&input, &column)?;
            let kernel = KernelSpec::from_name(&kernel)?;
            match method.as_str() {
                "amise_oracle" => {
                    let c = curvature.ok_or_else(|| Error::ConfigError {
                        line: 0,
                        message: "amise_oracle requires --curvature".to_string(),
                    })?;
                    let h = bandwidth::amise_bandwidth(
                        kernel.roughness(),
                        kernel.second_moment(),
                        c,
                        sample.len(),
                    )?;
                    println!("selector=amise_oracle");
                    println!("h={h:.16e}");
                    println!("curvature={c:.16e}");
                }
                "gcpi" => {
                    let rule = match pilot_b {
                        Some(b) => PilotRule::Fixed(b),
                        None => PilotRule::ScaledExponent(pilot_alpha),
                    };
                    let r = bandwidth::gcpi_bandwidth(
                        &sample,
                        &kernel,
                        &PilotSpec::gaussian(),
                        rule,
                        tau,
                    )?;
                    println!("selector={}", r.selector);
                    println!("h={:.16e}", r.h);
                    for (k, v) in &r.diagnostics {
                        println!("{k}={v:.16e}");
                    }
                }
                "silverman" => {
                    let h = bandwidth::silverman_bandwidth(&sample)?;
                    println!("selector=silverman");
                    println!("h={h:.16e}");
                }
                "lscv" => {
                    let grid = match h_grid {
                        Some(text) => {
                            let g = parse_grid(&text)?;
                            bandwidth::log_spaced(g.lo, g.hi, g.count)
                        }
                        None => bandwidth::lscv_default_grid(&sample)?,
                    };
                    let r = bandwidth::lscv_bandwidth(&sample, &kernel, &grid)?;
                    println!("selector={}", r.selector);
                    println!("h={:.16e}", r.h);
                    for (k, v) in &r.diagnostics {
                        println!("{k}={v:.16e}");
                    }
                }
                other => return Err(Error::UnknownSelector(other.to_string())),
            }
            Ok(())
        }
        Command::Curvature {
            input,
            column,
            pilot_alpha,
            tau,
        } => {
            let sample = cli::ingest_csv(&input, &column)?;
            let b = PilotRule::ScaledExponent(pilot_alpha).bandwidth(&sample)?;
            let est = curvature::estimate_curvature(&sample, &PilotSpec::gaussian(), b, tau)?;
            println!("raw={:.16e}", est.raw);
            println!("truncated={:.16e}", est.truncated);
            println!("pilot_bandwidth={:.16e}", est.pilot_bandwidth);
            println!("truncation_hit={}", if est.truncation_hit { 1 } else { 0 });
            Ok(())
        }
        Command::Density { model, grid, out } => {
            let grid = parse_grid(&grid)?;
            cli::emit_density_grid(&model, &grid, &out)
        }
    }
}

fn main() {
    let args = Args::parse();
    if let Err(e) = run(args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
