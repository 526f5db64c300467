//! The `rif` command line: innerness checks, factorizations, winding numbers and
//! homotopy export for rational matrix functions stored as JSON.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (for `check-inner`: the input is inner) |
//! | 1 | input is not inner |
//! | 2 | usage, parse or shape error |
//! | 3 | pole inside the closed unit disk |
//! | 4 | square (or wide) input given to `connect` |
//! | 5 | factorization or path verification failure |
//! | 6 | winding ill-conditioned (determinant too small on the circle) |

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rif_core::double::{HomotopyPath, RationalMatrixFunction, TrigMatrixPolynomial};
use rif_core::factor::{inner_outer, potapov_factorize, verify_inner_outer};
use rif_core::homotopy::{connect_to_pinned, t_lattice, verify_path, PathReport};
use rif_core::io;
use rif_core::matrix::{det_winding, inner_defect, sup_norm};
use rif_core::scalar::circle_grid;
use rif_core::spectral::{fejer_riesz, verify_factor};
use rif_core::tolerance::{default_grid, Tolerances};
use rif_core::RifError;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const NOT_INNER: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const POLE_IN_DISK: u8 = 3;
    pub const SQUARE_INPUT: u8 = 4;
    pub const FAILURE: u8 = 5;
    pub const ILL_CONDITIONED: u8 = 6;
}

/// Exit code for a library error.
pub fn exit_code(err: &RifError) -> u8 {
    match err.root() {
        RifError::Parse(_) | RifError::InvalidArgument(_) => exit::USAGE,
        RifError::PoleInDisk { .. } => exit::POLE_IN_DISK,
        RifError::NoSpareRow { .. } => exit::SQUARE_INPUT,
        RifError::NotInner(_) => exit::NOT_INNER,
        RifError::IllConditionedWinding { .. } => exit::ILL_CONDITIONED,
        _ => exit::FAILURE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "rif", version, about = "Rational inner matrix functions on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOptions {
    /// Circle grid size (at least 8); defaults to max(512, 8·degree + 1).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(8..))]
    pub grid: Option<u64>,
    /// Number of t samples along a path (at least 2).
    #[arg(long = "t-samples", global = true, default_value_t = 33, value_parser = clap::value_parser!(u64).range(2..))]
    pub t_samples: u64,
    /// Tolerance override, e.g. `--tol inner=1e-9`; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
    /// Directory for written artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for `self-test`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Factorization {
    InnerOuter,
    Potapov,
    FejerRiesz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the inner defect and sup-norm of a rational matrix function.
    CheckInner { input: PathBuf },
    /// Build and verify a path from an inner W (m > n) to (I_n; 0).
    Connect { input: PathBuf },
    /// Inner-outer, Blaschke–Potapov or Fejér–Riesz factorization.
    Factor {
        #[arg(long, value_enum)]
        which: Factorization,
        input: PathBuf,
    },
    /// Winding number of det W on the unit circle.
    Winding { input: PathBuf },
    /// Seeded round trips through every factorization and the path builder.
    SelfTest {
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

fn parse_tolerance(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad value for {name}: {e}"))?;
    let mut probe = Tolerances::default();
    probe.set(name.trim(), value).map_err(|e| e.to_string())?;
    Ok((name.trim().to_string(), value))
}

/// Validated settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid_size: Option<usize>,
    pub t_samples: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_options(options: &GlobalOptions) -> Result<Self, RifError> {
        let mut tolerances = Tolerances::default();
        for (name, value) in &options.tolerances {
            tolerances.set(name, *value)?;
        }
        Ok(Self {
            grid_size: options.grid.map(|g| g as usize),
            t_samples: options.t_samples as usize,
            tolerances,
            out: options.out.clone(),
            seed: options.seed,
        })
    }

    fn grid_for(&self, max_degree: usize) -> usize {
        self.grid_size.unwrap_or_else(|| default_grid(max_degree))
    }
}

/// What a command produced: an exit code, a JSON (or plain) report for stdout,
/// and an optional message for stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: Option<String>,
}

impl Outcome {
    fn report(code: u8, value: &Value) -> Self {
        Self {
            code,
            stdout: serde_json::to_string_pretty(value).expect("json values serialize"),
            stderr: None,
        }
    }

    fn error(err: &RifError) -> Self {
        Self {
            code: exit_code(err),
            stdout: String::new(),
            stderr: Some(err.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let config = match RunConfig::from_options(&cli.options) {
        Ok(c) => c,
        Err(e) => return Outcome::error(&e),
    };
    let result = match &cli.command {
        Command::CheckInner { input } => check_inner(&config, input),
        Command::Connect { input } => connect(&config, input),
        Command::Factor { which, input } => factor(&config, *which, input),
        Command::Winding { input } => winding(&config, input),
        Command::SelfTest { cases } => self_test(&config, *cases),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn read(path: &Path) -> Result<String, RifError> {
    fs::read_to_string(path).map_err(|e| RifError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: &Path) -> Result<RationalMatrixFunction, RifError> {
    io::parse_rational_matrix(&read(path)?)
}

pub fn load_trig(path: &Path) -> Result<TrigMatrixPolynomial, RifError> {
    io::parse_trig(&read(path)?)
}

fn out_dir(config: &RunConfig) -> Result<Option<&Path>, RifError> {
    match &config.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| RifError::InvalidArgument(format!("{}: {e}", dir.display())))?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<(), RifError> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    fs::write(dir.join(name), text).map_err(|e| RifError::InvalidArgument(format!("{name}: {e}")))
}

fn check_inner(config: &RunConfig, input: &Path) -> Result<Outcome, RifError> {
    let w = load_matrix(input)?;
    let grid = config.grid_for(w.max_degree());
    let defect = inner_defect(&w, grid);
    let inner = defect <= config.tolerances.inner;
    let report = json!({
        "m": w.rows(),
        "n": w.cols(),
        "grid": grid,
        "defect": defect,
        "sup_norm": sup_norm(&w, grid),
        "tolerance": config.tolerances.inner,
        "verdict": if inner { "inner" } else { "not-inner" },
    });
    if let Some(dir) = out_dir(config)? {
        write_json(dir, "check_inner.json", &report)?;
    }
    Ok(Outcome::report(if inner { exit::SUCCESS } else { exit::NOT_INNER }, &report))
}

/// CSV rows `t,theta,row,col,re,im` for every lattice point and matrix entry.
pub fn write_samples(path: &Path, path_obj: &HomotopyPath, t_samples: usize, grid: usize) -> Result<(), RifError> {
    let io_err = |e: csv::Error| RifError::InvalidArgument(format!("{}: {e}", path.display()));
    let mut writer = csv::Writer::from_path(path).map_err(io_err)?;
    writer.write_record(["t", "theta", "row", "col", "re", "im"]).map_err(io_err)?;
    let ts = t_lattice::<f64>(t_samples);
    let thetas: Vec<f64> = (0..grid).map(|k| std::f64::consts::TAU * k as f64 / grid as f64).collect();
    for (t, row) in ts.iter().zip(path_obj.sample(t_samples, grid)) {
        let values = row?;
        for (theta, v) in thetas.iter().zip(&values) {
            for i in 0..v.nrows() {
                for j in 0..v.ncols() {
                    let c = v[(i, j)];
                    writer
                        .write_record([
                            t.to_string(),
                            theta.to_string(),
                            i.to_string(),
                            j.to_string(),
                            c.re.to_string(),
                            c.im.to_string(),
                        ])
                        .map_err(io_err)?;
                }
            }
        }
    }
    writer.flush().map_err(|e| RifError::InvalidArgument(e.to_string()))
}

pub fn manifest(path: &HomotopyPath, report: &PathReport) -> Value {
    json!({
        "m": path.rows(),
        "n": path.cols(),
        "parameterization": "uniform",
        "segments": path.manifest(),
        "report": report,
    })
}

fn connect(config: &RunConfig, input: &Path) -> Result<Outcome, RifError> {
    let w = load_matrix(input)?;
    if w.rows() <= w.cols() {
        return Err(RifError::NoSpareRow {
            m: w.rows(),
            n: w.cols(),
        });
    }
    let path = connect_to_pinned(&w, &config.tolerances)?;
    let grid = config.grid_for(w.max_degree());
    let report = verify_path(&path, config.t_samples, grid);
    let doc = manifest(&path, &report);
    if let Some(dir) = out_dir(config)? {
        write_json(dir, "manifest.json", &doc)?;
        write_samples(&dir.join("samples.csv"), &path, config.t_samples, grid)?;
    }
    let code = if report.passed { exit::SUCCESS } else { exit::FAILURE };
    Ok(Outcome::report(code, &doc))
}

fn require_square(w: &RationalMatrixFunction) -> Result<(), RifError> {
    if w.rows() != w.cols() {
        return Err(RifError::InvalidArgument(format!(
            "expected a square matrix function, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

fn factor(config: &RunConfig, which: Factorization, input: &Path) -> Result<Outcome, RifError> {
    let tol = &config.tolerances;
    let dir = out_dir(config)?;
    let (doc, ok) = match which {
        Factorization::InnerOuter => {
            let x = load_matrix(input)?;
            require_square(&x)?;
            let io_pair = inner_outer(&x, tol)?;
            let check = verify_inner_outer(&x, &io_pair)?;
            let ok = check.inner_defect <= tol.inner
                && check.product_residual <= tol.factor
                && check.outer_min_det_root >= 1.0 - tol.outer
                && check.outer_f0_min_eigenvalue > 0.0;
            let inner_doc = io::rational_matrix_to_json(&io_pair.inner);
            let outer_doc = io::rational_matrix_to_json(&io_pair.outer);
            if let Some(dir) = dir {
                write_json(dir, "inner.json", &inner_doc)?;
                write_json(dir, "outer.json", &outer_doc)?;
            }
            let doc = json!({
                "inner": inner_doc,
                "outer": outer_doc,
                "verification": {
                    "inner_defect": check.inner_defect,
                    "product_residual": check.product_residual,
                    "outer_min_det_root_modulus": check.outer_min_det_root,
                    "outer_f0_min_eigenvalue": check.outer_f0_min_eigenvalue,
                    "interior_zeros": io_pair.inner_factorization.factors.iter()
                        .map(|f| [f.zero().re, f.zero().im]).collect::<Vec<_>>(),
                },
            });
            (doc, ok)
        }
        Factorization::Potapov => {
            let phi = load_matrix(input)?;
            require_square(&phi)?;
            let fact = potapov_factorize(&phi, tol)?;
            let grid = config.grid_for(phi.max_degree());
            let residual = circle_grid::<f64>(grid)
                .into_iter()
                .map(|z| (fact.reconstruct(z) - phi.eval_disk(z)).norm())
                .fold(0.0, f64::max);
            let winding = det_winding(&phi, grid, tol).ok();
            let ok = residual <= tol.factor && winding.is_none_or(|w| w == fact.factors.len() as i64);
            let fact_doc = io::potapov_to_json(&fact);
            if let Some(dir) = dir {
                write_json(dir, "potapov.json", &fact_doc)?;
            }
            let doc = json!({
                "factorization": fact_doc,
                "verification": {
                    "reconstruction_residual": residual,
                    "factor_count": fact.factors.len(),
                    "det_winding": winding,
                    "grid": grid,
                },
            });
            (doc, ok)
        }
        Factorization::FejerRiesz => {
            let q = load_trig(input)?;
            let sf = fejer_riesz(&q, tol)?;
            let grid = config.grid_for(2 * q.bandwidth());
            let check = verify_factor(&q, &sf.factor, grid, tol)?;
            let factor_doc = io::polynomial_matrix_to_json(&sf.factor);
            if let Some(dir) = dir {
                write_json(dir, "factor.json", &factor_doc)?;
            }
            let doc = json!({
                "factor": factor_doc,
                "verification": {
                    "residual": check.residual,
                    "min_det_root_modulus": check.min_det_root_modulus,
                    "outer": check.outer,
                    "g0_min_eigenvalue": check.g0_min_eigenvalue,
                    "g0_positive_definite": check.g0_positive_definite,
                    "boundary_degenerate": sf.boundary_degenerate,
                    "toeplitz_rows": sf.toeplitz_rows,
                    "psd_min_eigenvalue": q.min_eigenvalue(grid),
                },
            });
            (doc, check.outer && check.g0_positive_definite)
        }
    };
    Ok(Outcome::report(if ok { exit::SUCCESS } else { exit::FAILURE }, &doc))
}

fn winding(config: &RunConfig, input: &Path) -> Result<Outcome, RifError> {
    let w = load_matrix(input)?;
    require_square(&w)?;
    let grid = config.grid_for(w.max_degree());
    let value = det_winding(&w, grid, &config.tolerances)?;
    Ok(Outcome {
        code: exit::SUCCESS,
        stdout: value.to_string(),
        stderr: None,
    })
}

fn self_test(config: &RunConfig, cases: usize) -> Result<Outcome, RifError> {
    use rif_core::random;
    let tol = &config.tolerances;
    let mut rng = random::seeded(config.seed);
    let mut results = Vec::new();
    let mut ok = true;
    let shapes = [(2, 1), (3, 1), (3, 2), (4, 2)];
    for case in 0..cases {
        let n = 1 + case % 3;
        let k = case % 4;
        let phi = random::inner_function::<f64>(n, k, &mut rng)?;
        let fact = potapov_factorize(&phi, tol)?;
        let potapov_residual = circle_grid::<f64>(256)
            .into_iter()
            .map(|z| (fact.reconstruct(z) - phi.eval_disk(z)).norm())
            .fold(0.0, f64::max);
        let q = random::positive_trig::<f64>(n, k + 1, 0.1, &mut rng);
        let spectral_residual = fejer_riesz(&q, tol)?.residual;
        let (m, cols) = shapes[case % shapes.len()];
        let w = random::rif::<f64>(m, cols, 1 + case % 2, &mut rng)?;
        let report = verify_path(&connect_to_pinned(&w, tol)?, config.t_samples.min(17), 128);
        let pass = potapov_residual <= 1e-7 && fact.factors.len() == k && spectral_residual <= 1e-7 && report.passed;
        ok &= pass;
        results.push(json!({
            "case": case,
            "potapov_residual": potapov_residual,
            "potapov_factors": fact.factors.len(),
            "spectral_residual": spectral_residual,
            "path_max_defect": report.max_defect,
            "path_passed": report.passed,
            "passed": pass,
        }));
    }
    let doc = json!({ "seed": config.seed, "cases": results, "passed": ok });
    if let Some(dir) = out_dir(config)? {
        write_json(dir, "self_test.json", &doc)?;
    }
    Ok(Outcome::report(if ok { exit::SUCCESS } else { exit::FAILURE }, &doc))
}
