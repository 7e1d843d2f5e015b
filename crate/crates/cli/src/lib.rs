//! One binary, subcommand per module; every subcommand is a thin adapter
//! around the library operations so that output bytes match calling them
//! directly.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 numeric failure or
//! guard exhaustion (a Collatz walk that did not reach one within the step
//! budget, a domain exit in the evaluator, a value over the `--cap31` cap).

mod config;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use iteral_core::collatz::{format_trace, trace_opts, CollatzError, TraceOptions};
use iteral_core::dsl::{eval, format_unicode, parse, Env};
use iteral_core::dynamics::{
    logistic_orbit, lorenz_trajectory, orbit_csv, render_grid, trajectory_csv, EscapeParams,
    FractalKind, GridSpec, LorenzParams, LorenzState,
};
use iteral_core::sieve::descriptor;
use iteral_core::{abc, Complex64, ConvergencePolicy, IterOutcome, Natural, Scalar};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

pub use config::AbcConfig;

#[derive(Parser, Debug)]
#[command(
    name = "iteral",
    version,
    about = "Iteration-of-functions toolkit: expression evaluator, integer sieve, Collatz tracer, and iterated-map demos",
    arg_required_else_help = true
)]
struct Cli {
    /// Print every built-in default as key=value lines and exit.
    #[arg(long, exclusive = true)]
    show_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression, e.g. "I[x=2, n=2](x^2)".
    Eval(EvalArgs),
    /// Print a number's fixed subsequence, formula, and coordinates.
    Classify(ClassifyArgs),
    /// Trace the (3x+1)/2 walk from n down to one.
    Oneness(OnenessArgs),
    /// Render a Mandelbrot or Julia escape-time grid.
    Fractal(FractalArgs),
    /// Emit an orbit of the logistic map as CSV.
    Logistic(LogisticArgs),
    /// Integrate the Lorenz equations by the double-approximation scheme.
    Lorenz(LorenzArgs),
    /// Simulate the a-b-c tick process.
    Abc(AbcArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Expression in the iteral syntax.
    expr: String,
    /// Bind a free variable, e.g. --let a=3 (repeatable; value is an expression).
    #[arg(long = "let", value_name = "NAME=EXPR")]
    bindings: Vec<String>,
    /// Convergence tolerance for n=inf.
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Divergence radius for n=inf.
    #[arg(long, default_value_t = 1e150)]
    bailout: f64,
    /// Step budget for n=inf.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    /// Echo the parsed expression with the И glyph before the result.
    #[arg(long)]
    unicode: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Nonnegative integer, decimal.
    n: String,
    /// Radix for the echoed value, 2..=36.
    #[arg(long, default_value_t = 10)]
    radix: u32,
}

#[derive(Args, Debug)]
struct OnenessArgs {
    /// Positive integer to trace, decimal.
    n: String,
    /// Radix of the rendition column, 2..=36.
    radix: u32,
    /// Reproduce the original column alignment exactly.
    #[arg(long)]
    exact: bool,
    /// Reject values above 2^31 - 1, like the original program.
    #[arg(long)]
    cap31: bool,
    /// Step guard; exhaustion prints UNRESOLVED and exits 2.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Mandelbrot,
    Julia,
}

#[derive(Args, Debug)]
struct FractalArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Julia parameter as re,im (required for --kind julia).
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    c: Option<String>,
    /// Window as re_min,re_max,im_min,im_max.
    #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
    grid: String,
    /// Pixel grid as WIDTHxHEIGHT.
    #[arg(long, default_value = "256x256")]
    size: String,
    #[arg(long, default_value_t = 1000)]
    max_iter: u32,
    #[arg(long, default_value_t = 2.0)]
    bailout: f64,
    /// Write the PGM here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write escape counts as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LogisticArgs {
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_negative_numbers = true)]
    x0: f64,
    #[arg(long, default_value_t = 100)]
    steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LorenzArgs {
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 28.0, allow_negative_numbers = true)]
    r: f64,
    #[arg(long, default_value_t = 8.0 / 3.0, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    y0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AbcArgs {
    #[arg(long)]
    sessions: u64,
    #[arg(long)]
    seed: u64,
    /// Flat key=value file overriding sampler defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective configuration instead of simulating.
    #[arg(long)]
    show_config: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    /// Bad arguments or inputs; exit 1.
    Usage(String),
    /// Numeric failure or guard exhaustion; exit 2. Output produced so far
    /// still goes out.
    Numeric(String),
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// Run the CLI against explicit streams; returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    if cli.show_config {
        let _ = write!(out, "{}", defaults_listing());
        return 0;
    }
    let command = cli.command.expect("clap enforces a subcommand");
    let mut buffer: Vec<u8> = Vec::new();
    let result = dispatch(command, &mut buffer);
    let _ = out.write_all(&buffer);
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Result<(), Failure> {
    match command {
        Command::Eval(args) => cmd_eval(args, out),
        Command::Classify(args) => cmd_classify(args, out),
        Command::Oneness(args) => cmd_oneness(args, out),
        Command::Fractal(args) => cmd_fractal(args, out),
        Command::Logistic(args) => cmd_logistic(args, out),
        Command::Lorenz(args) => cmd_lorenz(args, out),
        Command::Abc(args) => cmd_abc(args, out),
    }
}

fn emit(out: &mut Vec<u8>, target: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match target {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            out.extend_from_slice(bytes);
            Ok(())
        }
    }
}

fn cmd_eval(args: EvalArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let expr = parse(&args.expr).map_err(usage)?;
    let mut env = Env::new();
    for binding in &args.bindings {
        let (name, value_src) = binding
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--let expects NAME=EXPR, got `{binding}`")))?;
        let value_expr = parse(value_src).map_err(usage)?;
        let outcome = eval(&value_expr, &env, &ConvergencePolicy::default()).map_err(usage)?;
        let value = outcome
            .into_value()
            .ok_or_else(|| Failure::Usage(format!("binding `{name}` has no value")))?;
        env.bind(name.trim(), value);
    }
    let policy = ConvergencePolicy {
        eps: args.eps,
        bailout: args.bailout,
        max_steps: args.max_steps,
    };
    let outcome = eval(&expr, &env, &policy).map_err(usage)?;
    if args.unicode {
        let _ = write!(out, "{} = ", format_unicode(&expr));
    }
    match outcome {
        IterOutcome::Value(v) => {
            let _ = writeln!(out, "{}", display_scalar(&v));
            Ok(())
        }
        IterOutcome::Converged { value, .. } => {
            let _ = writeln!(out, "{}", display_scalar(&value));
            Ok(())
        }
        IterOutcome::Diverged { steps } => {
            let _ = writeln!(out, "diverged after {steps} steps");
            Ok(())
        }
        IterOutcome::Cycle { entry, period } => {
            let _ = writeln!(out, "cycle: entry {entry}, period {period}");
            Ok(())
        }
        IterOutcome::DomainExit { steps } => {
            let _ = writeln!(out, "domain exit after {steps} steps");
            Err(Failure::Numeric("expression left its domain".into()))
        }
    }
}

fn display_scalar(v: &Scalar) -> String {
    v.to_string()
}

fn cmd_classify(args: ClassifyArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    if !(2..=36).contains(&args.radix) {
        return Err(Failure::Usage(format!(
            "radix {} is outside 2..=36",
            args.radix
        )));
    }
    let n = Natural::from_str(&args.n)
        .map_err(|_| Failure::Usage(format!("`{}` is not a nonnegative integer", args.n)))?;
    let _ = writeln!(out, "{}", descriptor(&n, args.radix));
    Ok(())
}

fn cmd_oneness(args: OnenessArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let n = Natural::from_str(&args.n)
        .map_err(|_| Failure::Usage(format!("`{}` is not a nonnegative integer", args.n)))?;
    let opts = TraceOptions {
        radix: args.radix,
        max_steps: args.max_steps,
        cap31: args.cap31,
    };
    // Bad arguments are usage errors; only runtime events (the cap, the
    // step guard) count as numeric failures.
    let trace = trace_opts(&n, &opts).map_err(|e| match e {
        CollatzError::ZeroInput | CollatzError::BadRadix(_) => usage(e),
        CollatzError::CapExceeded { .. } => Failure::Numeric(e.to_string()),
    })?;
    out.extend_from_slice(format_trace(&trace, args.exact).as_bytes());
    if trace.resolved {
        Ok(())
    } else {
        let _ = writeln!(out, "UNRESOLVED");
        Err(Failure::Numeric(format!(
            "walk did not reach 1 within {} steps",
            args.max_steps
        )))
    }
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != N {
        return Err(Failure::Usage(format!(
            "{what} expects {N} comma-separated numbers, got `{text}`"
        )));
    }
    let mut values = [0.0; N];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("`{part}` in {what} is not a number")))?;
    }
    Ok(values)
}

fn cmd_fractal(args: FractalArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let kind = match args.kind {
        KindArg::Mandelbrot => FractalKind::Mandelbrot,
        KindArg::Julia => {
            let c = args
                .c
                .as_deref()
                .ok_or_else(|| Failure::Usage("--kind julia requires --c re,im".into()))?;
            let [re, im] = parse_floats::<2>(c, "--c")?;
            FractalKind::Julia(Complex64::new(re, im))
        }
    };
    let [re_min, re_max, im_min, im_max] = parse_floats::<4>(&args.grid, "--grid")?;
    let (w, h) = args
        .size
        .split_once('x')
        .and_then(|(w, h)| Some((w.parse::<u32>().ok()?, h.parse::<u32>().ok()?)))
        .ok_or_else(|| {
            Failure::Usage(format!("--size expects WIDTHxHEIGHT, got `{}`", args.size))
        })?;
    let grid = GridSpec {
        re_min,
        re_max,
        im_min,
        im_max,
        width: w,
        height: h,
    };
    if !grid.is_valid() {
        return Err(Failure::Usage(
            "--grid bounds must be increasing and --size nonzero".into(),
        ));
    }
    if args.max_iter == 0 || args.bailout < 2.0 {
        return Err(Failure::Usage(
            "--max-iter must be >= 1 and --bailout >= 2".into(),
        ));
    }
    let params = EscapeParams {
        max_iter: args.max_iter,
        bailout: args.bailout,
    };
    let image = render_grid(kind, &grid, &params);
    if let Some(csv) = &args.csv {
        std::fs::write(csv, image.to_csv())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", csv.display())))?;
    }
    emit(out, &args.out, &image.to_pgm())
}

fn cmd_logistic(args: LogisticArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let orbit = logistic_orbit(args.b, args.x0, args.steps);
    emit(out, &args.out, orbit_csv(&orbit).as_bytes())
}

fn cmd_lorenz(args: LorenzArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    for (name, v) in [
        ("--sigma", args.sigma),
        ("--r", args.r),
        ("--b", args.b),
        ("--dt", args.dt),
    ] {
        if v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Failure::Usage(format!("{name} must be positive")));
        }
    }
    let prm = LorenzParams {
        sigma: args.sigma,
        r: args.r,
        b: args.b,
        dt: args.dt,
    };
    let s0 = LorenzState::new(args.x0, args.y0, args.z0);
    let trajectory = lorenz_trajectory(&s0, &prm, args.steps);
    emit(
        out,
        &args.out,
        trajectory_csv(&trajectory, prm.dt).as_bytes(),
    )?;
    match trajectory.truncated {
        Some(step) => Err(Failure::Numeric(format!(
            "state became non-finite at step {step}"
        ))),
        None => Ok(()),
    }
}

fn cmd_abc(args: AbcArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let mut config = AbcConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        config.apply(&text).map_err(Failure::Usage)?;
    }
    if args.show_config {
        let _ = write!(out, "{}", config.listing());
        return Ok(());
    }
    let model = config.model();
    let series = abc::simulate(config.seed_tick(), &model, args.sessions, args.seed)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    emit(out, &args.out, abc::series_csv(&series).as_bytes())
}

fn defaults_listing() -> String {
    let policy = ConvergencePolicy::default();
    let escape = EscapeParams::default();
    let lorenz = LorenzParams::default();
    let mut s = String::new();
    let _ = writeln!(s, "eval.eps={:e}", policy.eps);
    let _ = writeln!(s, "eval.bailout={:e}", policy.bailout);
    let _ = writeln!(s, "eval.max_steps={}", policy.max_steps);
    let _ = writeln!(s, "classify.radix=10");
    let _ = writeln!(s, "oneness.max_steps={}", TraceOptions::default().max_steps);
    let _ = writeln!(s, "fractal.grid=-2,2,-2,2");
    let _ = writeln!(s, "fractal.size=256x256");
    let _ = writeln!(s, "fractal.max_iter={}", escape.max_iter);
    let _ = writeln!(s, "fractal.bailout={}", escape.bailout);
    let _ = writeln!(s, "logistic.steps=100");
    let _ = writeln!(s, "lorenz.sigma={}", lorenz.sigma);
    let _ = writeln!(s, "lorenz.r={}", lorenz.r);
    let _ = writeln!(s, "lorenz.b={}", lorenz.b);
    let _ = writeln!(s, "lorenz.dt={}", lorenz.dt);
    let _ = writeln!(s, "lorenz.steps=1000");
    let _ = writeln!(s, "lorenz.x0=0");
    let _ = writeln!(s, "lorenz.y0=1");
    let _ = writeln!(s, "lorenz.z0=0");
    s.push_str(&AbcConfig::default().listing());
    s
}
