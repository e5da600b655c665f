//! `lrgmres`: generate test cases, run preconditioned GMRES and evaluate the
//! residual bounds, writing plot-ready CSV.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 iteration limit reached,
//! 3 breakdown failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrgmres::dense::Vector;
use lrgmres::experiments::{
    bound_digest, bounds_run, compare_left_right, field_of_values, history_csv, mode_name,
    status_name, support_csv, ModeSummary, RunSummary,
};
use lrgmres::generators::{eigvec_cond_case, householder_lee_case, SpectrumSpec};
use lrgmres::io::{self, RHS_FILE};
use lrgmres::{gmres_solve, Error, GmresConfig, GmresStatus, LinearOperator, PreconditioningMode};

#[derive(Parser)]
#[command(
    name = "lrgmres",
    version,
    about = "Left, right and split preconditioned GMRES experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test case directory (A.mtx, H.mtx, b.mtx, case.json).
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Solve A x = b with GMRES and write the residual history as CSV.
    Solve(SolveArgs),
    /// Run left and right preconditioning on a case and compare the residuals.
    CompareLr(CompareArgs),
    /// Compare a run against the eigenvalue bound eps(k) * kappa(P).
    Bounds(BoundsArgs),
    /// Sample the support function of the field of values.
    Fov(FovArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Seed of the right-hand side [default: seed + 1]
    #[arg(long)]
    rhs_seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Family {
    /// `H = A^{-1} + u v^T` with symmetric `A`, eigenvalues in [mu, lambda].
    HouseholderLee {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        mu: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda: f64,
        #[command(flatten)]
        common: Common,
    },
    /// `A = X Lambda Y^T`, `H = Y X^{-1}` with `kappa(X)` of order K.
    EigvecCond {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long = "K", default_value_t = 1e8)]
        k: f64,
        #[arg(long, default_value_t = 1.5)]
        center: f64,
        #[arg(long, default_value_t = 0.5)]
        half_width: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    None,
    Left,
    Right,
}

impl From<Mode> for PreconditioningMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::None => PreconditioningMode::NoPrecond,
            Mode::Left => PreconditioningMode::Left,
            Mode::Right => PreconditioningMode::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Args)]
struct SolveArgs {
    /// System matrix (Matrix Market)
    matrix: PathBuf,
    /// Preconditioner matrix
    #[arg(long)]
    precond: Option<PathBuf>,
    /// Right-hand side [default: b.mtx next to the matrix]
    #[arg(long)]
    rhs: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::None)]
    mode: Mode,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    #[arg(long, default_value_t = 500)]
    maxit: usize,
    /// Recompute the true residual every this many iterations
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// CSV output path [default: stdout]
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the final iterate as a Matrix Market vector
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    case_dir: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    /// Iteration cap [default: n]
    #[arg(long)]
    maxit: Option<usize>,
    /// CSV output path [default: stdout]
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a JSON run summary
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    case_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Left)]
    mode: Mode,
    #[arg(long, default_value_t = 100)]
    k_max: usize,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    /// CSV output path [default: stdout]
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FovArgs {
    matrix: PathBuf,
    /// Preconditioner; the support of H A (left) or A H (right) is sampled
    #[arg(long)]
    precond: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Side::Right)]
    side: Side,
    #[arg(long, default_value_t = 64)]
    n_angles: usize,
    /// CSV output path [default: stdout]
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFiniteIterate { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn exit_code(status: GmresStatus) -> u8 {
    match status {
        GmresStatus::ConvergedPreconditioned
        | GmresStatus::ConvergedTrue
        | GmresStatus::HappyBreakdown => 0,
        GmresStatus::MaxIterations => 2,
        GmresStatus::BreakdownFailure => 3,
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Writes CSV to `path`, or to stdout when no path is given. Returns whether
/// stdout is still free for the summary.
fn emit_csv(path: Option<&Path>, csv: &str) -> Result<bool, Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, csv).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok(true)
        }
        None => {
            write_stdout(csv);
            Ok(false)
        }
    }
}

fn summary_line(stdout_free: bool, line: &str) {
    if stdout_free {
        write_stdout(&format!("{line}\n"));
    } else {
        eprintln!("{line}");
    }
}

fn run_gen(family: Family) -> CliResult {
    let (case, out) = match family {
        Family::HouseholderLee {
            n,
            mu,
            lambda,
            common,
        } => {
            let rhs = common.rhs_seed.unwrap_or(common.seed.wrapping_add(1));
            (
                householder_lee_case(n, mu, lambda, common.seed, rhs)?,
                common.out,
            )
        }
        Family::EigvecCond {
            n,
            k,
            center,
            half_width,
            common,
        } => {
            let rhs = common.rhs_seed.unwrap_or(common.seed.wrapping_add(1));
            let spectrum = SpectrumSpec { center, half_width };
            (
                eigvec_cond_case(n, k, spectrum, common.seed, rhs)?,
                common.out,
            )
        }
    };
    for p in io::write_case(&out, &case)? {
        write_stdout(&format!("{}\n", p.display()));
    }
    if let Some(kx) = case.metadata.kappa_x {
        eprintln!("kappa(X) = {kx:.6e}");
    }
    Ok(0)
}

fn run_solve(args: SolveArgs) -> CliResult {
    let a = io::read_matrix(&args.matrix)?;
    let n = a.rows();
    let rhs_path = args.rhs.clone().unwrap_or_else(|| {
        args.matrix
            .parent()
            .unwrap_or(Path::new("."))
            .join(RHS_FILE)
    });
    let b = io::read_vector(&rhs_path)?;
    let mode = PreconditioningMode::from(args.mode);
    let pair = match (&args.precond, args.mode) {
        (None, Mode::None) => lrgmres::PreconditionerPair::none(n),
        (None, _) => return Err(usage("--mode left/right needs --precond")),
        (Some(p), Mode::None) => {
            eprintln!(
                "warning: --precond {} ignored with --mode none",
                p.display()
            );
            lrgmres::PreconditionerPair::none(n)
        }
        (Some(p), _) => mode.pair_for(LinearOperator::dense(io::read_matrix(p)?)?),
    };
    let config = GmresConfig {
        mode,
        rtol_preconditioned: args.rtol,
        max_iter: args.maxit,
        true_residual_stride: args.stride,
        ..GmresConfig::default()
    };
    let a = LinearOperator::dense(a)?;
    let result = gmres_solve(&a, &b, &Vector::zeros(n), &pair, &config)?;
    let free = emit_csv(args.csv.as_deref(), &history_csv(&result.history))?;
    if let Some(p) = &args.solution {
        io::write_vector(p, &result.x)?;
    }
    let k = result.iterations;
    summary_line(
        free,
        &format!(
            "mode = {}, status = {}, iterations = {k}, precond_resid_rel = {:.3e}, true_resid_rel = {:.3e}",
            mode_name(mode),
            status_name(result.status),
            result.history.preconditioned_relative()[k],
            result.history.true_relative()[k].unwrap_or(f64::NAN),
        ),
    );
    Ok(exit_code(result.status))
}

fn run_compare(args: CompareArgs) -> CliResult {
    let start = Instant::now();
    let case = io::read_case(&args.case_dir)?;
    let n = case.a.rows();
    let a = LinearOperator::dense(case.a)?;
    let h = LinearOperator::dense(case.h)?;
    let cmp = compare_left_right(&a, &case.b, &h, args.rtol, args.maxit.unwrap_or(n))?;
    let free = emit_csv(args.csv.as_deref(), &cmp.to_csv())?;
    let left = ModeSummary::from_result(PreconditioningMode::Left, &cmp.left);
    let right = ModeSummary::from_result(PreconditioningMode::Right, &cmp.right);
    for m in [&left, &right] {
        summary_line(
            free,
            &format!(
                "{}: status = {}, iterations = {}, precond_resid_rel = {:.3e}, true_resid_rel = {:.3e}",
                m.mode, m.status, m.iterations, m.final_precond_resid_rel, m.final_true_resid_rel
            ),
        );
    }
    let verdict = cmp.sandwich.verdict();
    summary_line(free, &verdict);

    if let Some(path) = &args.summary {
        let mut outputs: Vec<String> = args.csv.iter().map(|p| p.display().to_string()).collect();
        outputs.push(path.display().to_string());
        let summary = RunSummary {
            case: Some(case.metadata),
            rtol: args.rtol,
            modes: vec![left, right],
            sandwich: Some(verdict),
            bound: None,
            outputs,
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
        std::fs::write(path, text).map_err(Error::from)?;
    }
    Ok(exit_code(cmp.left.status).max(exit_code(cmp.right.status)))
}

fn run_bounds(args: BoundsArgs) -> CliResult {
    let case = io::read_case(&args.case_dir)?;
    let mode = PreconditioningMode::from(args.mode);
    let a = LinearOperator::dense(case.a)?;
    let h = LinearOperator::dense(case.h)?;
    let run = bounds_run(&a, &case.b, &h, &case.metadata, mode, args.k_max, args.rtol)?;
    let free = emit_csv(args.csv.as_deref(), &run.to_csv())?;
    summary_line(free, &format!("mode = {}", mode_name(mode)));
    summary_line(free, &bound_digest(&run.report));
    match run.result.status {
        // Hitting k_max is the expected way for this command to stop.
        GmresStatus::MaxIterations => Ok(0),
        s => Ok(exit_code(s)),
    }
}

fn run_fov(args: FovArgs) -> CliResult {
    let a = io::read_matrix(&args.matrix)?;
    let m = match &args.precond {
        None => a,
        Some(p) => {
            let h = io::read_matrix(p)?;
            match args.side {
                Side::Left => h.matmul(&a)?,
                Side::Right => a.matmul(&h)?,
            }
        }
    };
    let support = field_of_values(&m, args.n_angles)?;
    let free = emit_csv(args.csv.as_deref(), &support_csv(&support))?;
    let (lo, hi) = support
        .support
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &s| {
            (l.min(s), h.max(s))
        });
    summary_line(
        free,
        &format!(
            "angles = {}, support range = [{lo:.6e}, {hi:.6e}]",
            args.n_angles
        ),
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen { family } => run_gen(family),
        Command::Solve(a) => run_solve(a),
        Command::CompareLr(a) => run_compare(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Fov(a) => run_fov(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
