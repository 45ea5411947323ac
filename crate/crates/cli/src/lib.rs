//! Command-line front end: reads a problem document, then reports constants,
//! checks hypotheses, solves, probes the mountain-pass sphere or verifies a
//! stored solution table.

pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use impulse_varsolve::fem::{norms, Mesh, Norms};
use impulse_varsolve::solvers::{sphere_probe, TracePoint};
use impulse_varsolve::verify::{solve, verify_solution, SolverKind, VerificationReport};
use impulse_varsolve::DiscreteProblem;
use serde::Serialize;

use crate::config::{load_config, ConfigError, RunConfig, SolverChoice};
use crate::table::TableError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "impulse-varsolve",
    version,
    about = "Variational solver for impulsive boundary-value problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the embedding and hypothesis constants.
    Constants(Common),
    /// Check the growth and smallness hypotheses; exit 2 if any fails.
    Check(Common),
    /// Solve and write the solution table plus a result document.
    Solve(SolveArgs),
    /// Sample the energy on the sphere of radius rho.
    Probe(ProbeArgs),
    /// Re-verify a stored solution table; exit 4 if the residual is too large.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    config: PathBuf,
    #[arg(long)]
    refinement: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    solver: Option<SolverChoice>,
    /// Solution table path; defaults to the config path with extension `csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the table.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 100)]
    dirs: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    threshold: f64,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] impulse_varsolve::Error),
    #[error("{}: {source}", path.display())]
    Table { path: PathBuf, source: TableError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

/// Everything `solve` knows about its run, in a stable key order.
#[derive(Debug, Serialize)]
pub struct ResultDocument {
    pub solver: SolverKind,
    pub refinement: usize,
    pub quad_order: usize,
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub energy: f64,
    pub grad_norm: f64,
    pub morse_index: Option<usize>,
    pub norms: Norms,
    pub warnings: Vec<String>,
    pub solution: String,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Serialize)]
struct VerifyDocument {
    refinement: usize,
    threshold: f64,
    passed: bool,
    #[serde(flatten)]
    report: VerificationReport,
}

/// Runs one command with the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Constants(c) => {
            let (_, dp) = setup(&c)?;
            emit(out, &dp.constants())?;
            Ok(EXIT_OK)
        }
        Command::Check(c) => {
            let (_, dp) = setup(&c)?;
            let report = dp.hypotheses();
            emit(out, &report)?;
            Ok(if report.all_hold() {
                EXIT_OK
            } else {
                EXIT_HYPOTHESES
            })
        }
        Command::Solve(a) => run_solve(a, out, err),
        Command::Probe(a) => {
            let (cfg, dp) = setup(&a.common)?;
            emit(out, &sphere_probe(&dp, a.dirs, cfg.options.seed, None)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => run_verify(a, out),
    }
}

fn setup(c: &Common) -> Result<(RunConfig, DiscreteProblem), CliError> {
    let mut cfg = load_config(&c.config)?;
    if let Some(r) = c.refinement {
        if r == 0 {
            return Err(CliError::Usage("--refinement must be positive".into()));
        }
        cfg.refinement = r;
    }
    if let Some(s) = c.seed {
        cfg.options.seed = s;
    }
    let dp = DiscreteProblem::new(cfg.problem.clone(), cfg.refinement, cfg.quad_order)?;
    Ok((cfg, dp))
}

fn run_solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (mut cfg, dp) = setup(&a.common)?;
    if let Some(s) = a.solver {
        cfg.solver = s;
    }
    let kind = SolverKind::from(cfg.solver);
    let res = solve(&dp, kind, &cfg.options)?;

    let table_path = a
        .out
        .unwrap_or_else(|| a.common.config.with_extension("csv"));
    let file = create(&table_path)?;
    table::write_table(&res.u, BufWriter::new(file)).map_err(|source| CliError::Table {
        path: table_path.clone(),
        source,
    })?;
    if a.gnuplot {
        let script = table_path.with_extension("gp");
        std::fs::write(&script, table::gnuplot_script(&table_path)).map_err(|source| {
            CliError::Io {
                path: script,
                source,
            }
        })?;
    }

    let doc = ResultDocument {
        solver: kind,
        refinement: cfg.refinement,
        quad_order: cfg.quad_order,
        seed: cfg.options.seed,
        converged: res.converged,
        iterations: res.iterations,
        energy: res.energy,
        grad_norm: res.grad_norm,
        morse_index: res.morse_index,
        norms: norms(&res.u),
        warnings: res.warnings,
        solution: table_path.display().to_string(),
        trace: res.ps_trace,
    };
    let doc_path = result_path(&table_path);
    let text = to_json(&doc);
    std::fs::write(&doc_path, &text).map_err(|source| CliError::Io {
        path: doc_path,
        source,
    })?;
    out.write_all(text.as_bytes()).map_err(stdout_error)?;
    for w in &doc.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(if doc.converged {
        EXIT_OK
    } else {
        EXIT_NO_CONVERGENCE
    })
}

/// `sol.csv` -> `sol.result.json`.
pub fn result_path(table: &Path) -> PathBuf {
    table.with_extension("result.json")
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(&a.common.config)?;
    let table_err = |source| CliError::Table {
        path: a.solution.clone(),
        source,
    };
    let rows = table::read_table(BufReader::new(open(&a.solution)?)).map_err(table_err)?;
    let pieces = 2 * cfg.problem.impulse_count() + 1;
    let refinement = match a.common.refinement {
        Some(r) => r,
        None if rows.len() > 1 && (rows.len() - 1) % pieces == 0 => (rows.len() - 1) / pieces,
        None => {
            return Err(CliError::Usage(format!(
                "{} rows do not fit a mesh of this partition",
                rows.len()
            )))
        }
    };
    let mesh = std::sync::Arc::new(Mesh::build(cfg.problem.partition(), refinement)?);
    let u = table::function_from_rows(&mesh, &rows).map_err(table_err)?;
    let dp = DiscreteProblem::new(cfg.problem, refinement, cfg.quad_order)?;
    let report = verify_solution(&u, dp.problem(), dp.rule())?;
    let passed = report.weak_residual <= a.threshold;
    let doc = VerifyDocument {
        refinement,
        threshold: a.threshold,
        passed,
        report,
    };
    emit(out, &doc)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    out.write_all(to_json(v).as_bytes()).map_err(stdout_error)
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
