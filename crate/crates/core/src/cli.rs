//! File-facing plumbing for the command-line tool: CSV dataset ingestion,
//! the line-oriented experiment config format, experiment CSV emission, and
//! density grid emission for plotting.

use crate::densities::DensityModel;
use crate::error::{Error, Result};
use crate::estimator::{EvaluationGrid, Sample};
use crate::risk::{self, ExperimentConfig, ResultRow};
use std::fmt::Write as _;
use std::path::Path;

/// A parsed rectangular CSV file.
#[derive(Clone, Debug)]
pub struct DataSet {
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub source_path: String,
}

pub fn read_dataset(path: &str) -> Result<DataSet> {
    if !Path::new(path).exists() {
        return Err(Error::FileNotFound(path.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line,
        None => return Err(Error::EmptySample),
    };
    let column_names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != column_names.len() {
            return Err(Error::ParseError {
                row: idx + 1,
                message: format!(
                    "expected {} cells, found {}",
                    column_names.len(),
                    cells.len()
                ),
            });
        }
        let mut row = Vec::with_capacity(cells.len());
        for cell in cells {
            let trimmed = cell.trim();
            // Empty cells stand for not-applicable values (e.g. the second
            // derivative at a kink); carry them as NaN.
            if trimmed.is_empty() {
                row.push(f64::NAN);
                continue;
            }
            row.push(trimmed.parse::<f64>().map_err(|e| Error::ParseError {
                row: idx + 1,
                message: format!("{trimmed:?}: {e}"),
            })?);
        }
        rows.push(row);
    }
    Ok(DataSet {
        column_names,
        rows,
        source_path: path.to_string(),
    })
}

/// Reads one named numeric column as a univariate sample.
pub fn ingest_csv(path: &str, column: &str) -> Result<Sample> {
    let ds = read_dataset(path)?;
    let col = ds
        .column_names
        .iter()
        .position(|c| c == column)
        .ok_or_else(|| Error::UnknownColumn(column.to_string()))?;
    if ds.rows.is_empty() {
        return Err(Error::EmptySample);
    }
    let values: Vec<f64> = ds.rows.iter().map(|r| r[col]).collect();
    Ok(Sample::univariate(values, 0, "file"))
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigError {
        line,
        message: message.into(),
    }
}

fn parse_list<T: std::str::FromStr>(value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| config_err(line, format!("bad list item {:?}", s.trim())))
        })
        .collect()
}

/// Parses the line-oriented `key = value` config format. `#` starts a
/// comment; lists are comma-separated.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut density = None;
    let mut sizes = None;
    let mut kernels = None;
    let mut selectors = None;
    let mut reps = None;
    let mut master_seed = 123u64;
    let mut grid = EvaluationGrid::new(-6.0, 6.0, 1201);
    let mut pilot_alpha = 1.0 / 6.0;
    let mut tau = 1e-8;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(line_no, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "density" => density = Some(value.to_string()),
            "sizes" => {
                let v: Vec<usize> = parse_list(value, line_no)?;
                if v.is_empty() || v.contains(&0) {
                    return Err(config_err(line_no, "sizes must be positive"));
                }
                sizes = Some(v);
            }
            "kernels" => kernels = Some(parse_list::<String>(value, line_no)?),
            "selectors" => selectors = Some(parse_list::<String>(value, line_no)?),
            "reps" => {
                let r: usize = value
                    .parse()
                    .map_err(|_| config_err(line_no, "reps must be a positive integer"))?;
                if r == 0 {
                    return Err(config_err(line_no, "reps must be at least 1"));
                }
                reps = Some(r);
            }
            "master_seed" => {
                master_seed = value
                    .parse()
                    .map_err(|_| config_err(line_no, "master_seed must be a 64-bit unsigned integer"))?;
            }
            "grid" => {
                let parts: Vec<f64> = parse_list(value, line_no)?;
                if parts.len() != 3 {
                    return Err(config_err(line_no, "grid must be lo,hi,count"));
                }
                let count = parts[2] as usize;
                if parts[0] >= parts[1] || count < 2 || parts[2] != count as f64 {
                    return Err(config_err(line_no, "grid must be lo,hi,count with lo < hi"));
                }
                grid = EvaluationGrid::new(parts[0], parts[1], count);
            }
            "pilot_alpha" => {
                pilot_alpha = value
                    .parse()
                    .map_err(|_| config_err(line_no, "pilot_alpha must be a real"))?;
            }
            "tau" => {
                tau = value
                    .parse()
                    .map_err(|_| config_err(line_no, "tau must be a positive real"))?;
                if tau <= 0.0 {
                    return Err(config_err(line_no, "tau must be positive"));
                }
            }
            other => return Err(config_err(line_no, format!("unknown key {other:?}"))),
        }
    }

    let density = density.ok_or_else(|| config_err(0, "missing key: density"))?;
    let sizes = sizes.ok_or_else(|| config_err(0, "missing key: sizes"))?;
    let kernels = kernels.ok_or_else(|| config_err(0, "missing key: kernels"))?;
    let selectors = selectors.ok_or_else(|| config_err(0, "missing key: selectors"))?;
    let reps = reps.ok_or_else(|| config_err(0, "missing key: reps"))?;
    Ok(ExperimentConfig {
        density,
        sizes,
        kernels,
        selectors,
        reps,
        master_seed,
        grid,
        pilot_alpha,
        tau,
    })
}

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn result_rows_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("n,kernel,selector,bandwidth_mean,mean_ise,se_ise,median_h_ratio\n");
    for r in rows {
        let ratio = r.median_h_ratio.map(fmt_real).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.kernel,
            r.selector,
            fmt_real(r.bandwidth_mean),
            fmt_real(r.mean_ise),
            fmt_real(r.se_ise),
            ratio
        );
    }
    out
}

/// Parses a config file, runs the experiment, writes the result CSV.
pub fn run_experiment(
    config_path: &str,
    out_path: &str,
    seed_override: Option<u64>,
    threads: usize,
) -> Result<()> {
    if !Path::new(config_path).exists() {
        return Err(Error::FileNotFound(config_path.to_string()));
    }
    let text = std::fs::read_to_string(config_path)?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = seed_override {
        config.master_seed = seed;
    }
    // Surface name errors before the long computation.
    DensityModel::from_spec(&config.density)?;
    for k in &config.kernels {
        crate::kernels::KernelSpec::from_name(k)?;
    }
    for s in &config.selectors {
        risk::Selector::from_name(s)?;
    }
    let rows = risk::monte_carlo_mise(&config, threads)?;
    std::fs::write(out_path, result_rows_csv(&rows))?;
    Ok(())
}

/// Writes `x,f,f_second_ae` over the grid; the second-derivative cell is left
/// empty at kink points.
pub fn emit_density_grid(model_spec: &str, grid: &EvaluationGrid, out_path: &str) -> Result<()> {
    let model = DensityModel::from_spec(model_spec)?;
    let mut out = String::from("x,f,f_second_ae\n");
    for x in grid.points() {
        let f = model.pdf(x);
        let second = match model.second_ae(x) {
            Ok(v) => fmt_real(v),
            Err(Error::AtKinkPoint(_)) => String::new(),
            Err(e) => return Err(e),
        };
        let _ = writeln!(out, "{},{},{}", fmt_real(x), fmt_real(f), second);
    }
    std::fs::write(out_path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let text = "\
# experiment
density = kinked:eps=0.5
sizes = 250, 500
kernels = epanechnikov,gaussian
selectors = oracle
reps = 10
master_seed = 123
grid = -6,6,1201
pilot_alpha = 0.1666666
tau = 1e-8
";
        let c = parse_config(text).unwrap();
        assert_eq!(c.sizes, vec![250, 500]);
        assert_eq!(c.kernels, vec!["epanechnikov", "gaussian"]);
        assert_eq!(c.reps, 10);
        assert_eq!(c.grid.count, 1201);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let bad = "density = kinked:eps=0.5\nsizes 250\n";
        match parse_config(bad) {
            Err(Error::ConfigError { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected: {other:?}"),
        }
        let zero = "density = kinked:eps=0.5\nsizes = 250\nkernels = gaussian\nselectors = oracle\nreps = 0\n";
        assert!(matches!(parse_config(zero), Err(Error::ConfigError { line: 5, .. })));
    }

    #[test]
    fn faithful_ingestion() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/faithful.csv");
        let s = ingest_csv(path, "eruptions").unwrap();
        assert_eq!(s.len(), 272);
        assert!(matches!(
            ingest_csv(path, "waiting"),
            Err(Error::UnknownColumn(_))
        ));
        assert!(matches!(
            ingest_csv("/nonexistent/file.csv", "eruptions"),
            Err(Error::FileNotFound(_))
        ));
    }

    #[test]
    fn parse_error_names_row() {
        let dir = std::env::temp_dir().join("curvkde_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "v\n1.0\nabc\n").unwrap();
        match ingest_csv(path.to_str().unwrap(), "v") {
            Err(Error::ParseError { row, .. }) => assert_eq!(row, 3),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn reals_round_trip_exactly() {
        let v = std::f64::consts::PI / 7.0;
        let s = fmt_real(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
    }

    #[test]
    fn density_grid_emission() {
        let dir = std::env::temp_dir().join("curvkde_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("grid.csv");
        let grid = EvaluationGrid::new(-6.0, 6.0, 1201);
        emit_density_grid("kinked:eps=0.5", &grid, path.to_str().unwrap()).unwrap();
        let ds = read_dataset(path.to_str().unwrap()).unwrap();
        assert_eq!(ds.rows.len(), 1201);
        // Mass check by trapezoid over the f column.
        let f: Vec<f64> = ds.rows.iter().map(|r| r[1]).collect();
        let mass = crate::quad::trapezoid(&f, grid.spacing());
        assert!((mass - 1.0).abs() < 1e-3);
        // x = 0 is the kink: empty second-derivative cell, parsed as NaN.
        let kink_row = &ds.rows[600];
        assert_eq!(kink_row[0], 0.0);
        assert!(kink_row[2].is_nan());
        // Asymmetry of the perturbed density.
        let at = |x: f64| ds.rows[((x + 6.0) / grid.spacing()).round() as usize][1];
        assert!((at(1.0) - at(-1.0)).abs() > 1e-3);
    }
}
