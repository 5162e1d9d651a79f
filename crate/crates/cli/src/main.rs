//! `geoquant` command-line front end.
//!
//! Exit codes: 0 success, 1 failed check or internal error, 2 usage error,
//! 3 malformed input file. Errors are reported as one JSON object on stderr.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use geoquant::entangle::{
    c_norm_distance, concurrence, cross_block, is_maximally_entangled, is_separable_pure,
    GridPoint, GridSpec,
};
use geoquant::fisher::families::{bernoulli, bloch, gaussian, gaussian_phase, shifted_phase};
use geoquant::fisher::{density_report, pullback_metric, MetricReport};
use geoquant::grouppullback::{projective_pullback_tensor, pullback_tensor, PullbackTensor};
use geoquant::qstate::io::{format_f64, from_json, StateFile};
use geoquant::qstate::{gellmann_basis, hs_norm, local_basis, DensityState};
use geoquant::suites::{run_all, run_suite, Suite, SuiteConfig};

const THREADS_VAR: &str = "GEOQUANT_THREADS";

#[derive(Parser)]
#[command(name = "geoquant", version, about = "Geometric quantum state toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pull-back tensor of a state over its local unitary group.
    Pullback {
        #[arg(long)]
        state: PathBuf,
        /// Subtract first moments.
        #[arg(long)]
        projective: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separability and maximal-entanglement verdicts with the cross-block norm.
    Separability {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Monotone candidate and concurrence over the two-parameter family.
    Grid {
        #[arg(long, default_value_t = 51)]
        nx: usize,
        #[arg(long, default_value_t = 51)]
        nalpha: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric report for a built-in family.
    Fisher {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated parameters.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        theta: Vec<f64>,
        /// Central-difference step.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Check {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// p = N(θ₁, θ₂²), no phase.
    Gaussian,
    /// p = N(θ₁, θ₂²), W = θ₃ x.
    GaussianPhase,
    /// p = N(θ₁, 1), W = θ₂ x.
    ShiftedPhase,
    /// diag(θ₁, 1 − θ₁).
    Bernoulli,
    /// Pure qubit at polar angle θ₁, azimuth θ₂.
    Bloch,
}

impl Family {
    fn arity(self) -> usize {
        match self {
            Family::Gaussian | Family::ShiftedPhase | Family::Bloch => 2,
            Family::GaussianPhase => 3,
            Family::Bernoulli => 1,
        }
    }
}

enum Failure {
    Usage(String),
    Input(String),
    Runtime(String),
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check | Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn report(&self) {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m.as_str()),
            Failure::Input(m) => ("input", m.as_str()),
            Failure::Runtime(m) => ("runtime", m.as_str()),
            Failure::Check => return,
        };
        let line = serde_json::json!({ "error": kind, "message": message });
        eprintln!("{line}");
    }
}

type CliResult<T> = Result<T, Failure>;

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_state(path: &Path) -> CliResult<StateFile> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(runtime),
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_VAR) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                usage(format!(
                    "{THREADS_VAR} must be a positive integer, got {value:?}"
                ))
            })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(runtime)
}

fn tensor_for(rho: &DensityState, projective: bool) -> CliResult<PullbackTensor> {
    let basis = match rho.dims() {
        [a, b] if a == b => local_basis(*a),
        _ => gellmann_basis(rho.dim()),
    }
    .map_err(|e| Failure::Input(e.to_string()))?;
    let t = if projective {
        projective_pullback_tensor(rho, &basis)
    } else {
        pullback_tensor(rho, &basis)
    };
    t.map_err(runtime)
}

fn pullback(state: &Path, projective: bool, format: Format, out: Option<&Path>) -> CliResult<()> {
    let rho = read_state(state)?.density();
    let t = tensor_for(&rho, projective)?;
    let text = match format {
        Format::Json => t.to_json().map_err(runtime)? + "\n",
        Format::Csv => {
            let c = t.coefficients();
            let mut s = String::from("j,k,real,imag\n");
            for j in 0..c.nrows() {
                for k in 0..c.ncols() {
                    let z = c[(j, k)];
                    let _ = writeln!(s, "{j},{k},{},{}", format_f64(z.re), format_f64(z.im));
                }
            }
            s
        }
    };
    emit(out, &text)
}

fn separability(state: &Path, tol: f64) -> CliResult<()> {
    if tol.is_nan() || tol < 0.0 {
        return Err(usage(format!("tolerance must be non-negative, got {tol}")));
    }
    let file = read_state(state)?;
    let rho = file.density();
    let n = rho.bipartite_dim().map_err(|_| {
        Failure::Input(format!(
            "expected a bipartite n x n state, got dims {:?}",
            rho.dims()
        ))
    })?;
    let mut s = String::new();
    match &file {
        StateFile::Pure(psi) => {
            let separable = is_separable_pure(psi, tol).map_err(runtime)?;
            let maximal = is_maximally_entangled(psi, tol).map_err(runtime)?;
            let d = c_norm_distance(psi).map_err(runtime)?;
            let _ = writeln!(s, "separable: {separable}");
            let _ = writeln!(s, "maximally-entangled: {maximal}");
            let _ = writeln!(s, "c-norm/n^2: {}", d.lhs);
            let _ = writeln!(s, "product-distance: {}", d.rhs);
        }
        StateFile::Mixed(_) => {
            let norm = hs_norm(&cross_block(&rho).map_err(runtime)?);
            if n == 2 {
                let conc = concurrence(&rho).map_err(runtime)?;
                let _ = writeln!(s, "separable: {}", conc <= tol);
                let _ = writeln!(s, "concurrence: {conc}");
            } else {
                let _ = writeln!(s, "separable: undetermined");
            }
            let _ = writeln!(s, "c-norm: {norm}");
        }
    }
    emit(None, &s)
}

fn grid_csv(rows: &[Vec<GridPoint>]) -> String {
    let mut s = String::from("x,alpha0,f2,concurrence\n");
    for p in rows.iter().flatten() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            format_f64(p.x),
            format_f64(p.alpha0),
            format_f64(p.f2),
            format_f64(p.concurrence)
        );
    }
    s
}

fn grid(nx: usize, nalpha: usize, out: Option<&Path>) -> CliResult<()> {
    let spec = GridSpec::new(nx, nalpha).map_err(usage)?;
    let pool = thread_pool()?;
    let rows = pool
        .install(|| {
            (0..nx)
                .into_par_iter()
                .map(|i| spec.row(i))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(runtime)?;
    emit(out, &grid_csv(&rows))
}

fn fisher(family: Family, theta: &[f64], step: Option<f64>, out: Option<&Path>) -> CliResult<()> {
    if theta.len() != family.arity() {
        return Err(usage(format!(
            "family expects {} parameters, got {}",
            family.arity(),
            theta.len()
        )));
    }
    let with_step = |sw: geoquant::fisher::SampledWavefunction| match step {
        Some(h) => sw.with_step(h),
        None => Ok(sw),
    };
    let report: geoquant::Result<MetricReport> = match family {
        Family::Gaussian => gaussian(theta[0], theta[1])
            .and_then(with_step)
            .and_then(|sw| pullback_metric(&sw, theta)),
        Family::GaussianPhase => gaussian_phase(theta[0], theta[1])
            .and_then(with_step)
            .and_then(|sw| pullback_metric(&sw, theta)),
        Family::ShiftedPhase => shifted_phase(theta[0])
            .and_then(with_step)
            .and_then(|sw| pullback_metric(&sw, theta)),
        Family::Bernoulli | Family::Bloch => {
            let fam = if matches!(family, Family::Bernoulli) {
                bernoulli()
            } else {
                bloch()
            };
            let fam = match step {
                Some(h) => fam.with_step(h),
                None => Ok(fam),
            };
            fam.and_then(|f| density_report(&f, theta))
        }
    };
    let report = report.map_err(usage)?;
    emit(out, &(report.to_json().map_err(runtime)? + "\n"))
}

fn check(suite: &str, seed: u64, trials: usize) -> CliResult<()> {
    let cfg = SuiteConfig { seed, trials };
    let reports = if suite == "all" {
        run_all(cfg)
    } else {
        vec![run_suite(suite.parse::<Suite>().map_err(usage)?, cfg)]
    };
    let mut s = String::new();
    for r in &reports {
        let _ = writeln!(s, "{r}");
    }
    emit(None, &s)?;
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Pullback {
            state,
            projective,
            format,
            out,
        } => pullback(&state, projective, format, out.as_deref()),
        Command::Separability { state, tol } => separability(&state, tol),
        Command::Grid { nx, nalpha, out } => grid(nx, nalpha, out.as_deref()),
        Command::Fisher {
            family,
            theta,
            step,
            out,
        } => fisher(family, &theta, step, out.as_deref()),
        Command::Check {
            suite,
            seed,
            trials,
        } => check(&suite, seed, trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            let failure = Failure::Usage(first.trim_start_matches("error: ").to_string());
            failure.report();
            return ExitCode::from(failure.code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.code())
        }
    }
}
