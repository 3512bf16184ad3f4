//! Command-line front end for the qfunc kernel: apply operator
//! expansions, evaluate equation residuals, run the two solvers, and
//! drive the randomized verification matrix.
//!
//! Exit codes: 0 = success / identity holds; 1 = mathematical failure
//! (nonzero residual or solver disagreement); 2 = usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qfunc::{
    adjudicate_thm_2_4, from_json, residual, solve_operator, solve_recurrence, to_json, verify,
    EquationId, MultiSeries, OperatorId, QContext, Rational, VerificationReport,
};

mod inline;

#[derive(Parser)]
#[command(
    name = "qfunc",
    version,
    about = "Exact q-series toolkit: operator expansions, functional-equation residuals, and dual-solver verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator expansion to a series
    Expand(ExpandArgs),
    /// Evaluate an equation residual on a candidate solution
    Residual(ResidualArgs),
    /// Solve an equation from boundary data
    Solve(SolveArgs),
    /// Run seeded random boundaries through both solvers per (equation, q)
    Verify(VerifyArgs),
    /// Full verification matrix with the default settings
    Selftest(VerifyArgs),
}

#[derive(Args)]
struct InputOpts {
    /// Truncation order for the context series are built over
    #[arg(long, default_value_t = 16, env = "QFUNC_MAX_ORDER")]
    max_order: u32,
    /// q value used when the input is in inline polynomial form
    /// (JSON inputs carry their own q)
    #[arg(long, default_value = "1/2", env = "QFUNC_Q")]
    q: String,
    /// Exactness bound for inline inputs (defaults to the expression degree)
    #[arg(long, env = "QFUNC_EXACT_TO")]
    exact_to: Option<u32>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Operator: T_bDq | E_btheta | E_bDq | T_btheta_plus | T_btheta_minus | Cauchy_Dq | Cauchy_theta
    #[arg(long, env = "QFUNC_OP")]
    op: String,
    /// Input series file (canonical JSON or inline polynomial)
    #[arg(long = "in", env = "QFUNC_IN")]
    input: PathBuf,
    /// Where to write the canonical JSON result (stdout if omitted)
    #[arg(long, env = "QFUNC_OUT")]
    out: Option<PathBuf>,
    /// Variable the operator acts on (plain exponential operators)
    #[arg(long, env = "QFUNC_SRC")]
    src: Option<String>,
    /// Fresh expansion variable
    #[arg(long = "new", env = "QFUNC_NEW")]
    new_var: String,
    /// Prefactor variable for the Cauchy operators
    #[arg(long = "a-var", env = "QFUNC_A_VAR")]
    a_var: Option<String>,
    /// Variable the Cauchy operators differentiate (their acting variable)
    #[arg(long = "c-var", env = "QFUNC_C_VAR")]
    c_var: Option<String>,
    #[command(flatten)]
    input_opts: InputOpts,
}

#[derive(Args)]
struct ResidualArgs {
    /// Equation: thm1_1 | thm1_2 | eq1 | eq2 | thm2_3 | thm2_4
    #[arg(long, env = "QFUNC_EQ")]
    eq: String,
    /// Candidate solution (canonical JSON or inline polynomial)
    #[arg(long = "in", env = "QFUNC_IN")]
    input: PathBuf,
    /// Optional file for the residual series
    #[arg(long, env = "QFUNC_OUT")]
    out: Option<PathBuf>,
    #[command(flatten)]
    input_opts: InputOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Operator,
    Recurrence,
    Both,
}

#[derive(Args)]
struct SolveArgs {
    /// Equation: thm1_1 | thm1_2 | eq1 | eq2 | thm2_3 | thm2_4
    #[arg(long, env = "QFUNC_EQ")]
    eq: String,
    /// Boundary data: the solution's zero slice in the b role
    #[arg(long, env = "QFUNC_BOUNDARY")]
    boundary: PathBuf,
    /// operator | recurrence | both (cross-checked)
    #[arg(long, value_enum, default_value_t = SolveMethod::Both, env = "QFUNC_METHOD")]
    method: SolveMethod,
    /// Where to write the solution (stdout if omitted)
    #[arg(long, env = "QFUNC_OUT")]
    out: Option<PathBuf>,
    #[command(flatten)]
    input_opts: InputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// One equation name, or "all"
    #[arg(long, default_value = "all", env = "QFUNC_EQ")]
    eq: String,
    /// Random boundaries per (equation, q) cell
    #[arg(long, default_value_t = 50, env = "QFUNC_SEEDS")]
    seeds: u64,
    /// Total degree of the random boundary data
    #[arg(long, default_value_t = 6, env = "QFUNC_DEGREE")]
    degree: u32,
    /// Comma-separated list of rational q values
    #[arg(long, default_value = "1/2,2/3,3/5,9/10", env = "QFUNC_Q")]
    q: String,
    #[arg(long, default_value_t = 16, env = "QFUNC_MAX_ORDER")]
    max_order: u32,
}

fn main() -> ExitCode {
    // behave like other pipeline tools when stdout closes early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Expand(args) => cmd_expand(args),
        Command::Residual(args) => cmd_residual(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) | Command::Selftest(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Read a series from a file holding either the canonical JSON form or
/// an inline polynomial expression.
fn read_series(path: &PathBuf, opts: &InputOpts) -> Result<MultiSeries, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let series = if text.trim_start().starts_with('{') {
        from_json(&text, opts.max_order)
    } else {
        let q = Rational::parse(&opts.q).map_err(|e| format!("--q: {e}"))?;
        let ctx = Arc::new(QContext::new(q, opts.max_order).map_err(|e| format!("--q: {e}"))?);
        inline::parse_inline(&text, &ctx, opts.exact_to)
    }
    .map_err(|e| format!("{}: {e}", path.display()))?;
    if series.ctx().magnitude_warning() {
        eprintln!("warning: |q| >= 1; identities remain formal and exact");
    }
    Ok(series)
}

fn write_series(out: &Option<PathBuf>, series: &MultiSeries) -> Result<(), String> {
    let json = to_json(series);
    match out {
        Some(path) => {
            fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

/// Declare any operator variables the input does not mention yet
/// (appended after the existing ones), so inline inputs like `c` or
/// the constant `1` work without a full variable header.
fn declare_vars(f: &MultiSeries, needed: &[&str]) -> Result<MultiSeries, String> {
    let mut vars: Vec<String> = f.vars().to_vec();
    for v in needed {
        if !vars.iter().any(|w| w == v) {
            vars.push((*v).to_string());
        }
    }
    if vars.len() == f.vars().len() {
        Ok(f.clone())
    } else {
        f.extend_vars(vars).map_err(|e| e.to_string())
    }
}

fn cmd_expand(args: ExpandArgs) -> Result<ExitCode, String> {
    let op = OperatorId::from_str(&args.op).map_err(|e| format!("--op: {e}"))?;
    let f = read_series(&args.input, &args.input_opts)?;
    let result = if op.is_cauchy() {
        let a_var = args
            .a_var
            .as_deref()
            .ok_or_else(|| format!("--a-var is required for operator {op}"))?;
        let c_var = args
            .c_var
            .as_deref()
            .ok_or_else(|| format!("--c-var is required for operator {op}"))?;
        let f = declare_vars(&f, &[a_var, c_var])?;
        match op {
            OperatorId::CauchyDq => qfunc::apply_cauchy_dq(&f, a_var, &args.new_var, c_var),
            _ => qfunc::apply_cauchy_theta(&f, a_var, &args.new_var, c_var),
        }
    } else {
        let src = args
            .src
            .as_deref()
            .ok_or_else(|| format!("--src is required for operator {op}"))?;
        let f = declare_vars(&f, &[src])?;
        qfunc::apply_exp_operator(op, &f, src, &args.new_var)
    }
    .map_err(|e| e.to_string())?;
    println!("{result}");
    write_series(&args.out, &result)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_residual(args: ResidualArgs) -> Result<ExitCode, String> {
    let eq = EquationId::from_str(&args.eq).map_err(|e| format!("--eq: {e}"))?;
    let f = read_series(&args.input, &args.input_opts)?;
    let r = residual(eq, &f).map_err(|e| e.to_string())?;
    if args.out.is_some() {
        write_series(&args.out, &r)?;
    }
    if r.is_zero() {
        println!(
            "residual of {eq} is zero up to total degree {}",
            r.exact_to()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        let (exp, coef) = r.first_term_lex().expect("nonzero series has a term");
        println!(
            "residual of {eq} is nonzero: witness monomial exp {:?} coefficient {coef}",
            exp.entries()
        );
        Ok(ExitCode::from(1))
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let eq = EquationId::from_str(&args.eq).map_err(|e| format!("--eq: {e}"))?;
    let boundary = read_series(&args.boundary, &args.input_opts)?;
    let (solution, code) = match args.method {
        SolveMethod::Operator => (
            solve_operator(eq, &boundary).map_err(|e| e.to_string())?,
            ExitCode::SUCCESS,
        ),
        SolveMethod::Recurrence => (
            solve_recurrence(eq, &boundary).map_err(|e| e.to_string())?,
            ExitCode::SUCCESS,
        ),
        SolveMethod::Both => {
            let from_op = solve_operator(eq, &boundary).map_err(|e| e.to_string())?;
            let from_rec = solve_recurrence(eq, &boundary).map_err(|e| e.to_string())?;
            if eq == EquationId::Thm2_4 {
                report_thm_2_4(boundary.ctx())?;
            }
            if from_op == from_rec {
                println!("solvers agree up to total degree {}", from_rec.exact_to());
                (from_rec, ExitCode::SUCCESS)
            } else {
                let diff = from_op.sub(&from_rec).map_err(|e| e.to_string())?;
                let (exp, coef) = diff.first_term_lex().expect("difference is nonzero");
                println!(
                    "solvers disagree: first difference at exp {:?}, operator minus recurrence = {coef}",
                    exp.entries()
                );
                (from_rec, ExitCode::from(1))
            }
        }
    };
    println!("{solution}");
    write_series(&args.out, &solution)?;
    Ok(code)
}

fn report_thm_2_4(ctx: &Arc<QContext>) -> Result<(), String> {
    let selected = adjudicate_thm_2_4(ctx, 5).map_err(|e| e.to_string())?;
    let rejected = if selected == OperatorId::TBThetaPlus {
        OperatorId::TBThetaMinus
    } else {
        OperatorId::TBThetaPlus
    };
    println!(
        "note: thm2_4 recurrence matches {selected}; {rejected} does not solve it \
under theta{{f}}(x) = (f(x/q) - f(x))/(x/q)"
    );
    Ok(())
}

struct Cell {
    eq: EquationId,
    q: Rational,
    passes: u64,
    first_failure: Option<(u64, VerificationReport)>,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let equations: Vec<EquationId> = if args.eq == "all" {
        EquationId::ALL.to_vec()
    } else {
        vec![EquationId::from_str(&args.eq).map_err(|e| format!("--eq: {e}"))?]
    };
    let q_values: Vec<Rational> = args
        .q
        .split(',')
        .map(|s| Rational::parse(s.trim()).map_err(|e| format!("--q: {e}")))
        .collect::<Result<_, _>>()?;
    if args.degree >= args.max_order {
        return Err(format!(
            "--degree: residual evaluation needs degree < max_order (got {} vs {})",
            args.degree, args.max_order
        ));
    }
    let contexts: Vec<Arc<QContext>> = q_values
        .iter()
        .map(|q| {
            QContext::new(q.clone(), args.max_order)
                .map(Arc::new)
                .map_err(|e| format!("--q: {e}"))
        })
        .collect::<Result<_, _>>()?;
    for ctx in &contexts {
        if ctx.magnitude_warning() {
            eprintln!(
                "warning: |q| >= 1 for q = {}; identities remain formal and exact",
                ctx.q()
            );
        }
    }

    // every (equation, q) cell is an independent pure computation
    let mut jobs = Vec::new();
    for &eq in &equations {
        for ctx in &contexts {
            jobs.push((eq, Arc::clone(ctx)));
        }
    }
    let cells: Vec<Result<Cell, String>> = jobs
        .par_iter()
        .map(|(eq, ctx)| run_cell(*eq, ctx, args.seeds, args.degree))
        .collect();

    println!(
        "verification matrix: {} seeds per cell, boundary degree {}, max_order {}",
        args.seeds, args.degree, args.max_order
    );
    let mut all_pass = true;
    for cell in cells {
        let cell = cell?;
        match &cell.first_failure {
            None => println!(
                "  {:8} q={:6} pass ({}/{} boundaries)",
                cell.eq.name(),
                cell.q.to_string(),
                cell.passes,
                args.seeds
            ),
            Some((seed, report)) => {
                all_pass = false;
                let witness = report
                    .failure_witness
                    .as_ref()
                    .map(|(e, c)| format!("witness exp {:?} coefficient {c}", e.entries()))
                    .unwrap_or_default();
                println!(
                    "  {:8} q={:6} FAIL at seed {seed}: residual_is_zero={} solvers_agree={} {witness}",
                    cell.eq.name(),
                    cell.q.to_string(),
                    report.residual_is_zero,
                    report.solvers_agree,
                );
            }
        }
    }
    if equations.contains(&EquationId::Thm2_4) {
        report_thm_2_4(&contexts[0])?;
    }
    if all_pass {
        println!("all cells passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAILURES detected");
        Ok(ExitCode::from(1))
    }
}

fn run_cell(eq: EquationId, ctx: &Arc<QContext>, seeds: u64, degree: u32) -> Result<Cell, String> {
    let mut passes = 0;
    let mut first_failure = None;
    for seed in 0..seeds {
        let boundary =
            MultiSeries::random(ctx, seed, eq.boundary_roles().iter().copied(), degree, 9)
                .map_err(|e| e.to_string())?;
        let report = verify(eq, &boundary).map_err(|e| e.to_string())?;
        if report.passed() {
            passes += 1;
        } else if first_failure.is_none() {
            first_failure = Some((seed, report));
        }
    }
    Ok(Cell {
        eq,
        q: ctx.q().clone(),
        passes,
        first_failure,
    })
}
