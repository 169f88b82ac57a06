//! Command-line front end: evaluate the generalized fractional integral,
//! name the classical reduction a parameter tuple collapses to, compute
//! weighted-space norms and the boundedness constant, and run the seeded
//! identity-verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 parameter/domain validation
//! error, 3 numerical failure (non-convergent or divergent integral),
//! 4 verification-suite failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use genfrac::analysis::{bound_constant_k, xpc_norm, AnalysisError, SpaceParams};
use genfrac::evaluator::{eval_classical, eval_left, eval_right, EvalError, EvalResult};
use genfrac::functions::FunctionSpec;
use genfrac::operator::{classify, validate, ClassicalReduction, Domain, OperatorParams, Side};
use genfrac::verify::{run_suites, Suite};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_SUITE_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "genfrac",
    version,
    about = "Generalized fractional integral operators: evaluation, classification, \
             norms, and identity verification",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the operator at one point or over an x-range (CSV or JSON)
    Eval(EvalArgs),
    /// Name the classical operator a parameter tuple reduces to
    Classify(ClassifyArgs),
    /// Run seeded randomized identity suites
    Verify(VerifyArgs),
    /// Weighted-space norm of an integrand on [a, b]
    Norm(NormArgs),
    /// Boundedness constant K with ||I f|| <= K ||f|| on the weighted space
    Kconst(KconstArgs),
}

/// Operator parameter flags shared by `eval` and `classify`.
#[derive(Args)]
struct ParamFlags {
    /// Fractional order alpha (> 0)
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Prefactor exponent beta (rho^(1-beta))
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Power-substitution exponent rho (> 0)
    #[arg(long, allow_hyphen_values = true)]
    rho: f64,
    /// Inner weight exponent eta
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    /// Outer weight exponent kappa
    #[arg(long, allow_hyphen_values = true)]
    kappa: f64,
    /// Lower domain endpoint (-inf allowed when rho = 1)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    /// Upper domain endpoint (inf allowed)
    #[arg(long, default_value_t = f64::INFINITY, allow_hyphen_values = true)]
    b: f64,
    /// Operator side
    #[arg(long, value_enum, default_value = "left")]
    side: SideArg,
    /// Outer power exponent omega (right-general side only)
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
    RightGeneral,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Integrand: const:c | pow:mu | poly:c0,c1,... | exp:lambda | sin:omega | logpow:k,base
    #[arg(long)]
    f: String,
    /// Evaluation point, or a range lo:hi:n (geometric spacing when lo > 0, else linear)
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Accuracy demand: exit 3 if any error estimate exceeds tol * max(|value|, 1)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Shift,
    Semigroup,
    Product,
    Bounded,
    Reductions,
    HadamardLimit,
    All,
}

impl SuiteArg {
    fn to_suite(self) -> Suite {
        match self {
            SuiteArg::Shift => Suite::Shift,
            SuiteArg::Semigroup => Suite::Semigroup,
            SuiteArg::Product => Suite::Product,
            SuiteArg::Bounded => Suite::Bounded,
            SuiteArg::Reductions => Suite::Reductions,
            SuiteArg::HadamardLimit => Suite::HadamardLimit,
            SuiteArg::All => unreachable!("expanded to the full suite list by the caller"),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// RNG seed; the same seed reproduces byte-identical output
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random cases per randomized suite (fixed-grid suites ignore this)
    #[arg(long, default_value_t = 50)]
    cases: usize,
}

#[derive(Args)]
struct NormArgs {
    /// Integrand: const:c | pow:mu | poly:c0,c1,... | exp:lambda | sin:omega | logpow:k,base
    #[arg(long)]
    f: String,
    /// Space exponent p (real >= 1, or "inf" for the supremum norm)
    #[arg(long)]
    p: String,
    /// Space weight power c
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    /// Lower endpoint (>= 0; > 0 when p = inf)
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Upper endpoint (finite)
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
}

#[derive(Args)]
struct KconstArgs {
    /// Fractional order alpha (> 0)
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Prefactor exponent beta
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Power-substitution exponent rho (> 0, and >= c)
    #[arg(long, allow_hyphen_values = true)]
    rho: f64,
    /// Inner weight exponent eta (>= 0)
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    /// Outer weight exponent kappa
    #[arg(long, allow_hyphen_values = true)]
    kappa: f64,
    /// Space exponent p (real >= 1, or "inf")
    #[arg(long)]
    p: String,
    /// Space weight power c (requires rho >= c)
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    /// Lower endpoint (> 0: the constant diverges as a -> 0)
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Upper endpoint (finite)
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are "errors" to clap but successes to the shell.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match &cli.command {
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Norm(args) => cmd_norm(args),
        Cmd::Kconst(args) => cmd_kconst(args),
    };
    ExitCode::from(code)
}

fn usage(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn eval_exit(e: &EvalError) -> u8 {
    match e {
        EvalError::Param(_)
        | EvalError::XOutOfDomain { .. }
        | EvalError::MuOutOfRange { .. }
        | EvalError::UnsupportedReduction(_)
        | EvalError::Unsupported(_) => EXIT_VALIDATION,
        EvalError::Quad(_) | EvalError::DivergentTail => EXIT_NUMERICAL,
    }
}

fn analysis_exit(e: &AnalysisError) -> u8 {
    match e {
        AnalysisError::Param(_) | AnalysisError::PreconditionViolated(_) => EXIT_VALIDATION,
        AnalysisError::Eval(inner) => eval_exit(inner),
        AnalysisError::Quad(_) | AnalysisError::DivergentConstant => EXIT_NUMERICAL,
    }
}

fn build_params(flags: &ParamFlags) -> Result<OperatorParams, String> {
    let side = match flags.side {
        SideArg::Left | SideArg::Right if flags.omega.is_some() => {
            return Err("--omega applies only to --side right-general".to_string());
        }
        SideArg::Left => Side::LeftSided,
        SideArg::Right => Side::RightSided,
        SideArg::RightGeneral => Side::RightSidedGeneral {
            omega: flags.omega.ok_or("--side right-general requires --omega")?,
        },
    };
    Ok(OperatorParams {
        alpha: flags.alpha,
        beta: flags.beta,
        rho: flags.rho,
        eta: flags.eta,
        kappa: flags.kappa,
        side,
        domain: Domain { a: flags.a, b: flags.b },
    })
}

/// JSON value for an f64; non-finite values become strings ("inf", "-inf")
/// because JSON numbers cannot carry them.
fn fnum(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::String(format!("{v:?}"))
    }
}

fn params_json(params: &OperatorParams, f: Option<&FunctionSpec>) -> serde_json::Value {
    let (side, omega) = match params.side {
        Side::LeftSided => ("left", None),
        Side::RightSided => ("right", None),
        Side::RightSidedGeneral { omega } => ("right-general", Some(omega)),
    };
    let mut obj = serde_json::json!({
        "alpha": fnum(params.alpha),
        "beta": fnum(params.beta),
        "rho": fnum(params.rho),
        "eta": fnum(params.eta),
        "kappa": fnum(params.kappa),
        "a": fnum(params.domain.a),
        "b": fnum(params.domain.b),
        "side": side,
    });
    if let Some(w) = omega {
        obj["omega"] = fnum(w);
    }
    if let Some(spec) = f {
        obj["f"] = serde_json::Value::String(spec.to_string());
    }
    obj
}

/// Parses `--x`: a single point, or `lo:hi:n` for n points with geometric
/// spacing when lo > 0 (uniform relative resolution for power-like values)
/// and linear spacing otherwise.
fn parse_x_grid(text: &str) -> Result<Vec<f64>, String> {
    if !text.contains(':') {
        let x: f64 =
            text.trim().parse().map_err(|_| format!("bad evaluation point {text:?}"))?;
        return Ok(vec![x]);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("a range must be lo:hi:n, got {text:?}"));
    }
    let lo: f64 =
        parts[0].trim().parse().map_err(|_| format!("bad range start {:?}", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad range end {:?}", parts[1]))?;
    let n: usize =
        parts[2].trim().parse().map_err(|_| format!("bad point count {:?}", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("a range needs finite lo < hi, got {lo} and {hi}"));
    }
    if n == 0 {
        return Err("a range needs at least one point".to_string());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let mut xs = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let x = if lo > 0.0 { lo * (hi / lo).powf(t) } else { lo + (hi - lo) * t };
        xs.push(x);
    }
    xs[0] = lo;
    xs[n - 1] = hi;
    Ok(xs)
}

fn cmd_eval(args: &EvalArgs) -> u8 {
    let params = match build_params(&args.params) {
        Ok(p) => p,
        Err(m) => return usage(&m),
    };
    let f: FunctionSpec = match args.f.parse() {
        Ok(f) => f,
        Err(e) => return usage(&format!("{e}")),
    };
    let xs = match parse_x_grid(&args.x) {
        Ok(v) => v,
        Err(m) => return usage(&m),
    };
    if let Some(tol) = args.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return usage("--tol must be a positive real");
        }
    }
    if let Err(e) = validate(&params) {
        eprintln!("error: {e}");
        return EXIT_VALIDATION;
    }
    // A left operator from -inf has no finite-interval path; its values come
    // from the half-line reference evaluator.
    let weyl = params.side == Side::LeftSided && params.domain.a == f64::NEG_INFINITY;

    let mut rows: Vec<(f64, EvalResult)> = Vec::with_capacity(xs.len());
    for &x in &xs {
        let result = if weyl {
            eval_classical(ClassicalReduction::WeylType, &params, &f, x)
        } else if params.side == Side::LeftSided {
            eval_left(&params, &f, x)
        } else {
            eval_right(&params, &f, x)
        };
        match result {
            Ok(r) => rows.push((x, r)),
            Err(e) => {
                eprintln!("error at x = {x}: {e}");
                return eval_exit(&e);
            }
        }
    }
    if let Some(tol) = args.tol {
        for (x, r) in &rows {
            if r.abs_error_estimate > tol * r.value.abs().max(1.0) {
                eprintln!(
                    "error at x = {x}: error estimate {:?} exceeds the requested tolerance",
                    r.abs_error_estimate
                );
                return EXIT_NUMERICAL;
            }
        }
    }
    match args.format {
        FormatArg::Csv => {
            // {:?} floats round-trip exactly, so CSV and JSON carry the same bits.
            println!("x,value,abs_err,method");
            for (x, r) in &rows {
                println!("{:?},{:?},{:?},{}", x, r.value, r.abs_error_estimate, r.method);
            }
        }
        FormatArg::Json => {
            let results: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, r)| {
                    serde_json::json!({
                        "x": fnum(*x),
                        "value": fnum(r.value),
                        "abs_err": fnum(r.abs_error_estimate),
                        "method": r.method.to_string(),
                    })
                })
                .collect();
            let doc =
                serde_json::json!({ "params": params_json(&params, Some(&f)), "results": results });
            println!("{}", serde_json::to_string_pretty(&doc).expect("finite JSON serializes"));
        }
    }
    0
}

/// The defining constants of the classical operator a tuple reduces to;
/// None when the tuple is genuinely general.
fn classical_detail(
    reduction: ClassicalReduction,
    params: &OperatorParams,
) -> Option<serde_json::Value> {
    match reduction {
        ClassicalReduction::RiemannLiouville => Some(serde_json::json!({
            "order": fnum(params.alpha),
            "lower_limit": fnum(params.domain.a),
        })),
        ClassicalReduction::Katugampola => Some(serde_json::json!({
            "order": fnum(params.alpha),
            "rho": fnum(params.rho),
            "lower_limit": fnum(params.domain.a),
        })),
        ClassicalReduction::ErdelyiKober => Some(serde_json::json!({
            "order": fnum(params.alpha),
            "eta": fnum(params.eta),
            "rho": fnum(params.rho),
        })),
        ClassicalReduction::WeylType => Some(serde_json::json!({
            "order": fnum(params.alpha),
        })),
        ClassicalReduction::LiouvilleType => Some(serde_json::json!({
            "order": fnum(params.alpha),
            "rho": fnum(params.rho),
        })),
        ClassicalReduction::HadamardLimit | ClassicalReduction::General => None,
    }
}

fn cmd_classify(args: &ClassifyArgs) -> u8 {
    let params = match build_params(&args.params) {
        Ok(p) => p,
        Err(m) => return usage(&m),
    };
    let reduction = match classify(&params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    println!("{reduction}");
    let mut doc = serde_json::json!({
        "reduction": reduction.to_string(),
        "params": params_json(&params, None),
    });
    if let Some(classical) = classical_detail(reduction, &params) {
        doc["classical"] = classical;
    }
    println!("{doc}");
    0
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    if args.cases == 0 {
        return usage("--cases must be at least 1");
    }
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        single => vec![single.to_suite()],
    };
    let outcomes = run_suites(&suites, args.seed, args.cases);
    let mut all_ok = true;
    for outcome in &outcomes {
        println!("{}", outcome.summary_line());
        if !outcome.all_passed() {
            all_ok = false;
            if let Some(first) = &outcome.first_error {
                println!("  first failure: {first}");
            }
        }
    }
    if all_ok {
        0
    } else {
        EXIT_SUITE_FAILURE
    }
}

/// Parses --p, accepting any real or "inf"/"infinity" (case-insensitive).
fn parse_p(text: &str) -> Result<f64, String> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| format!("--p must be a real number or \"inf\", got {text:?}"))
}

/// Formats a nonnegative scalar to 12 significant digits, fixed-point in a
/// wide central range and scientific outside it.
fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    if !v.is_finite() {
        return format!("{v:?}");
    }
    // Take the decimal exponent from the 12-digit rounding itself, so a value
    // like 0.999999999999996 counts as 1.0e0, not 1e-1 with an extra digit.
    let sci = format!("{v:.11e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific format always has an exponent") + 1..]
        .parse()
        .expect("exponent of a finite float parses");
    if (-4..12).contains(&exponent) {
        let precision = (11 - exponent).max(0) as usize;
        format!("{v:.precision$}")
    } else {
        sci
    }
}

fn cmd_norm(args: &NormArgs) -> u8 {
    let f: FunctionSpec = match args.f.parse() {
        Ok(f) => f,
        Err(e) => return usage(&format!("{e}")),
    };
    let p = match parse_p(&args.p) {
        Ok(p) => p,
        Err(m) => return usage(&m),
    };
    let checks = [
        (p >= 1.0, "the norm requires p >= 1"),
        (args.c.is_finite(), "the norm requires finite c"),
        (
            args.a.is_finite() && args.b.is_finite() && args.a >= 0.0 && args.a < args.b,
            "the norm requires 0 <= a < b < inf",
        ),
        (p.is_finite() || args.a > 0.0, "the supremum norm requires a > 0"),
    ];
    for (ok, reason) in checks {
        if !ok {
            let e = AnalysisError::PreconditionViolated(reason);
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    }
    let space = SpaceParams::new(p, args.c);
    match xpc_norm(&f, &space, args.a, args.b) {
        Ok(v) => {
            println!("{}", format_sig12(v));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            analysis_exit(&e)
        }
    }
}

fn cmd_kconst(args: &KconstArgs) -> u8 {
    let p = match parse_p(&args.p) {
        Ok(p) => p,
        Err(m) => return usage(&m),
    };
    let params = OperatorParams::left(
        args.alpha, args.beta, args.rho, args.eta, args.kappa, args.a, args.b,
    );
    let space = SpaceParams::new(p, args.c);
    match bound_constant_k(&params, &space, args.a, args.b) {
        Ok(v) => {
            println!("{}", format_sig12(v));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            analysis_exit(&e)
        }
    }
}
