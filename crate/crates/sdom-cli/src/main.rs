//! `sdom`: exact stochastic-dominance decisions from the command line.
//!
//! Subcommands cover the whole library surface: `check` decides order-n
//! (optionally mean-preserving) dominance between two distribution files,
//! `boundary` prints the exact boundary-condition table at a reference
//! endpoint, `construct` writes the built-in counterexample families to
//! disk, `eval` computes exact expected utilities and gap curves, `scan`
//! runs a seeded consistency experiment, and `witness` re-verifies a
//! serialized verdict against its pair.
//!
//! Exit codes are the machine contract: 0 when a queried dominance holds
//! (or the action succeeded), 1 when dominance fails (or a witness does
//! not re-verify), 2 on any input or usage error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sdom::constructions::{
    example_counter_pair, gamma_counterexample, lemma_sequence_pair, rescale_pair, ConstructedPair,
    Family,
};
use sdom::dist::{distribution_from_json, distribution_to_json, DiscreteDistribution};
use sdom::dominance::{
    check_nmsd_interval, check_nmsd_real, iterated_cdf_at, verdict_from_json, verdict_to_json,
    Verdict, Witness,
};
use sdom::dual::{mixture_eu, mixture_from_json};
use sdom::exactalg::{decimal_approx, parse_rational, Rational};
use sdom::harness::{config_from_json, consistency_experiment, report_to_csv, report_to_json};

#[derive(Parser)]
#[command(
    name = "sdom",
    version,
    about = "Exact stochastic-dominance checks for finitely supported distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide order-n dominance of X over Y; exits 0/1/2 for holds/fails/error.
    Check(CheckArgs),
    /// Print the exact boundary-condition table at a reference endpoint.
    Boundary(BoundaryArgs),
    /// Write a constructed distribution pair (plus its parameters) to disk.
    Construct(ConstructArgs),
    /// Evaluate an exact expected utility or a dominance-gap curve.
    Eval(EvalArgs),
    /// Run a seeded consistency experiment described by a config file.
    Scan(ScanArgs),
    /// Re-verify a serialized verdict against its distribution pair.
    Witness(WitnessArgs),
}

/// Mutually exclusive comparison scopes shared by `check` and `witness`.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScopeArgs {
    /// Compare over the whole real line.
    #[arg(long)]
    real: bool,
    /// Compare over the reference interval [A, B]; accepts rationals like 2/9.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    interval: Option<Vec<String>>,
}

#[derive(Args)]
struct CheckArgs {
    /// Dominance order n (at least 1).
    #[arg(long)]
    order: u32,
    /// Also require the first M moments to match exactly.
    #[arg(long, value_name = "M")]
    mpres: Option<u32>,
    #[command(flatten)]
    scope: ScopeArgs,
    /// Print the verdict as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Annotate exact rationals with a K-digit decimal approximation.
    #[arg(long, value_name = "K")]
    decimal: Option<u32>,
    x: PathBuf,
    y: PathBuf,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Largest boundary order to tabulate (at least 1).
    #[arg(long)]
    order: u32,
    /// Right endpoint of the reference interval.
    #[arg(long, value_name = "B")]
    at: String,
    /// Annotate exact rationals with a K-digit decimal approximation.
    #[arg(long, value_name = "K")]
    decimal: Option<u32>,
    x: PathBuf,
    y: PathBuf,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    family: ConstructFamily,
}

#[derive(Subcommand)]
enum ConstructFamily {
    /// Pair holding at fourth order on the real line yet failing on [0,1].
    Example1 {
        /// Atom-shift parameter, a rational strictly between 0 and 1/9.
        #[arg(long)]
        eps: String,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Two-point family with vanishing mean gap and growing moment ratio.
    Lemma {
        /// Tail parameter, a rational strictly between 0 and 1.
        #[arg(long)]
        m: String,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Affinely remap a stored pair from [a,b] onto [c,d].
    Rescale {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        x: PathBuf,
        y: PathBuf,
    },
    /// Scale the two-point family so order-4 dominance separates [0,c] from [0,d].
    Gamma {
        /// Starting tail parameter; halved automatically until the split appears.
        #[arg(long)]
        m: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(false)))]
struct EvalArgs {
    /// Utility-mixture JSON file; prints the exact expected utility of X.
    #[arg(long, value_name = "U.json", group = "mode")]
    mixture: Option<PathBuf>,
    /// Emit a CSV of the exact order-n gap F_Y - F_X on a threshold grid.
    #[arg(long, group = "mode")]
    curve: bool,
    /// Dominance order for --curve (at least 1).
    #[arg(long)]
    order: Option<u32>,
    /// Left end of the curve grid (default: smallest support point).
    #[arg(long)]
    from: Option<String>,
    /// Right end of the curve grid (default: largest support point).
    #[arg(long)]
    to: Option<String>,
    /// Number of grid steps for --curve.
    #[arg(long, default_value_t = 64)]
    samples: u32,
    /// Annotate the expected utility with a K-digit decimal approximation.
    #[arg(long, value_name = "K")]
    decimal: Option<u32>,
    /// X.json for --mixture; X.json and Y.json for --curve.
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Experiment configuration JSON file.
    #[arg(long, value_name = "C.json")]
    config: PathBuf,
    /// Print the report as JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print the report as CSV.
    #[arg(long)]
    csv: bool,
    /// Also write each discrepancy-witness pair as distribution files.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Serialized verdict JSON file to re-verify.
    #[arg(long, value_name = "V.json")]
    verdict: PathBuf,
    /// Dominance order the verdict was produced with.
    #[arg(long)]
    order: u32,
    /// Mean-preserving degree the verdict was produced with.
    #[arg(long, value_name = "M")]
    mpres: Option<u32>,
    #[command(flatten)]
    scope: ScopeArgs,
    x: PathBuf,
    y: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check(args) => run_check(args),
        Command::Boundary(args) => run_boundary(args),
        Command::Construct(args) => run_construct(args),
        Command::Eval(args) => run_eval(args),
        Command::Scan(args) => run_scan(args),
        Command::Witness(args) => run_witness(args),
    }
}

// -------------------------------------------------------------------
// Shared plumbing
// -------------------------------------------------------------------

enum CheckScope {
    Real,
    Interval(Rational, Rational),
}

fn parse_scope(scope: &ScopeArgs) -> Result<CheckScope, String> {
    if scope.real {
        return Ok(CheckScope::Real);
    }
    let ends = scope.interval.as_ref().expect("clap enforces one scope");
    let a = parse_rat(&ends[0], "interval endpoint A")?;
    let b = parse_rat(&ends[1], "interval endpoint B")?;
    if a >= b {
        return Err(format!(
            "interval endpoints must satisfy A < B, got {a} and {b}"
        ));
    }
    Ok(CheckScope::Interval(a, b))
}

fn parse_rat(text: &str, what: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| format!("{what} {text:?}: {e}"))
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_distribution(path: &Path) -> Result<DiscreteDistribution, String> {
    distribution_from_json(&read_file(path)?)
        .map_err(|e| format!("bad distribution in {}: {e}", path.display()))
}

fn decide(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    order: u32,
    mpres: u32,
    scope: &CheckScope,
) -> Result<Verdict, String> {
    if order < 1 {
        return Err("order must be at least 1".to_owned());
    }
    let verdict = match scope {
        CheckScope::Real => check_nmsd_real(x, y, order, mpres),
        CheckScope::Interval(a, b) => check_nmsd_interval(x, y, order, mpres, a, b),
    };
    verdict.map_err(|e| e.to_string())
}

fn fmt_rat(r: &Rational, decimal: Option<u32>) -> String {
    match decimal {
        Some(k) => format!("{r} (~{})", decimal_approx(r, k)),
        None => r.to_string(),
    }
}

fn describe_witness(w: &Witness, decimal: Option<u32>) -> String {
    match w {
        Witness::PointwiseViolation { eta, gap } => format!(
            "pointwise eta={} gap={}",
            fmt_rat(eta, decimal),
            fmt_rat(gap, decimal)
        ),
        Witness::BoundaryViolation { k, lhs, rhs } => format!(
            "boundary k={k} lhs={} rhs={}",
            fmt_rat(lhs, decimal),
            fmt_rat(rhs, decimal)
        ),
        Witness::MomentMismatch { k, lhs, rhs } => format!(
            "moment k={k} lhs={} rhs={}",
            fmt_rat(lhs, decimal),
            fmt_rat(rhs, decimal)
        ),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

// -------------------------------------------------------------------
// Subcommands
// -------------------------------------------------------------------

fn run_check(args: CheckArgs) -> Result<ExitCode, String> {
    let scope = parse_scope(&args.scope)?;
    let x = load_distribution(&args.x)?;
    let y = load_distribution(&args.y)?;
    let verdict = decide(&x, &y, args.order, args.mpres.unwrap_or(0), &scope)?;

    if args.json {
        println!("{}", verdict_to_json(&verdict));
    } else {
        println!("holds: {}", verdict.holds());
        if let Some(w) = verdict.witness() {
            println!("witness: {}", describe_witness(w, args.decimal));
        }
    }
    Ok(ExitCode::from(u8::from(!verdict.holds())))
}

fn run_boundary(args: BoundaryArgs) -> Result<ExitCode, String> {
    if args.order < 1 {
        return Err("order must be at least 1".to_owned());
    }
    let b = parse_rat(&args.at, "endpoint")?;
    let x = load_distribution(&args.x)?;
    let y = load_distribution(&args.y)?;

    println!("boundary conditions at b = {}", fmt_rat(&b, args.decimal));
    for k in 1..=args.order {
        let lhs = x.shifted_moment(&b, k - 1);
        let rhs = y.shifted_moment(&b, k - 1);
        let state = if lhs <= rhs { "ok" } else { "violated" };
        println!(
            "k={k} lhs={} rhs={} gap={} {state}",
            fmt_rat(&lhs, args.decimal),
            fmt_rat(&rhs, args.decimal),
            fmt_rat(&(&lhs - &rhs), args.decimal),
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn write_pair(out_dir: &Path, pair: &ConstructedPair) -> Result<(), String> {
    fs::create_dir_all(out_dir).map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let params: BTreeMap<&str, String> = pair
        .params
        .iter()
        .map(|(k, v)| (k.as_str(), v.to_string()))
        .collect();
    let sidecar = serde_json::json!({
        "family": pair.family.to_string(),
        "params": params,
    });
    let files = [
        ("x.json", distribution_to_json(&pair.x)),
        ("y.json", distribution_to_json(&pair.y)),
        ("params.json", format!("{:#}", sidecar)),
    ];
    for (name, content) in files {
        let path = out_dir.join(name);
        write_file(&path, &content)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_construct(args: ConstructArgs) -> Result<ExitCode, String> {
    let (pair, out_dir) = match args.family {
        ConstructFamily::Example1 { eps, out_dir } => {
            let eps = parse_rat(&eps, "eps")?;
            (
                example_counter_pair(eps).map_err(|e| e.to_string())?,
                out_dir,
            )
        }
        ConstructFamily::Lemma { m, out_dir } => {
            let m = parse_rat(&m, "m")?;
            (lemma_sequence_pair(m).map_err(|e| e.to_string())?, out_dir)
        }
        ConstructFamily::Rescale {
            a,
            b,
            c,
            d,
            out_dir,
            x,
            y,
        } => {
            let (a, b) = (parse_rat(&a, "a")?, parse_rat(&b, "b")?);
            let (c, d) = (parse_rat(&c, "c")?, parse_rat(&d, "d")?);
            let pair = ConstructedPair {
                x: load_distribution(&x)?,
                y: load_distribution(&y)?,
                family: Family::Sampled,
                params: BTreeMap::new(),
            };
            (
                rescale_pair(pair, &a, &b, &c, &d).map_err(|e| e.to_string())?,
                out_dir,
            )
        }
        ConstructFamily::Gamma { m, c, d, out_dir } => {
            let m = parse_rat(&m, "m")?;
            let (c, d) = (parse_rat(&c, "c")?, parse_rat(&d, "d")?);
            if c <= Rational::from_integer(0.into()) || c >= d {
                return Err(format!("endpoints must satisfy 0 < c < d, got c={c} d={d}"));
            }
            if m <= Rational::from_integer(0.into()) || m >= Rational::from_integer(1.into()) {
                return Err(format!("m must lie strictly between 0 and 1, got {m}"));
            }
            (gamma_counterexample(&c, &d, m), out_dir)
        }
    };
    write_pair(&out_dir, &pair)?;
    Ok(ExitCode::SUCCESS)
}

fn run_eval(args: EvalArgs) -> Result<ExitCode, String> {
    if let Some(mixture_path) = &args.mixture {
        let [x_path] = args.files.as_slice() else {
            return Err("--mixture takes exactly one distribution file".to_owned());
        };
        let u = mixture_from_json(&read_file(mixture_path)?)
            .map_err(|e| format!("bad mixture in {}: {e}", mixture_path.display()))?;
        let x = load_distribution(x_path)?;
        println!("{}", fmt_rat(&mixture_eu(&x, &u), args.decimal));
        return Ok(ExitCode::SUCCESS);
    }

    // --curve
    let order = args.order.ok_or("--curve requires --order")?;
    if order < 1 {
        return Err("order must be at least 1".to_owned());
    }
    if args.samples < 1 {
        return Err("--samples must be at least 1".to_owned());
    }
    let [x_path, y_path] = args.files.as_slice() else {
        return Err("--curve takes exactly two distribution files".to_owned());
    };
    let x = load_distribution(x_path)?;
    let y = load_distribution(y_path)?;

    let from = match &args.from {
        Some(text) => parse_rat(text, "--from")?,
        None => std::cmp::min(&x.support().min, &y.support().min).clone(),
    };
    let to = match &args.to {
        Some(text) => parse_rat(text, "--to")?,
        None => std::cmp::max(&x.support().max, &y.support().max).clone(),
    };
    if from >= to {
        return Err(format!(
            "curve range must satisfy from < to, got {from} and {to}"
        ));
    }

    let step = (&to - &from) / Rational::from_integer(args.samples.into());
    println!("eta,diff");
    for i in 0..=args.samples {
        let eta = &from + &step * Rational::from_integer(i.into());
        let diff = iterated_cdf_at(&y, order, &eta) - iterated_cdf_at(&x, order, &eta);
        println!("{eta},{diff}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_scan(args: ScanArgs) -> Result<ExitCode, String> {
    let cfg = config_from_json(&read_file(&args.config)?)
        .map_err(|e| format!("bad config in {}: {e}", args.config.display()))?;
    let report = consistency_experiment(&cfg);

    if args.json {
        println!("{}", report_to_json(&report));
    } else if args.csv {
        print!("{}", report_to_csv(&report));
    } else {
        println!("seed={} trials={}", report.seed, report.trials);
        println!("n m pair both_hold both_fail tight_only loose_only");
        for r in &report.rows {
            println!(
                "{} {} {} {} {} {} {}",
                r.n, r.m, r.pair, r.both_hold, r.both_fail, r.tight_only, r.loose_only
            );
        }
        println!("discrepancy witnesses recorded: {}", report.witnesses.len());
    }

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let mut written = std::collections::BTreeSet::new();
        for w in &report.witnesses {
            if written.insert(w.trial) {
                write_file(
                    &dir.join(format!("witness-{}-x.json", w.trial)),
                    &distribution_to_json(&w.x),
                )?;
                write_file(
                    &dir.join(format!("witness-{}-y.json", w.trial)),
                    &distribution_to_json(&w.y),
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_witness(args: WitnessArgs) -> Result<ExitCode, String> {
    let scope = parse_scope(&args.scope)?;
    let stored = verdict_from_json(&read_file(&args.verdict)?)
        .map_err(|e| format!("bad verdict in {}: {e}", args.verdict.display()))?;
    let x = load_distribution(&args.x)?;
    let y = load_distribution(&args.y)?;
    let recomputed = decide(&x, &y, args.order, args.mpres.unwrap_or(0), &scope)?;

    if stored == recomputed {
        println!("verified");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("mismatch");
        println!("stored:     {}", summarize(&stored));
        println!("recomputed: {}", summarize(&recomputed));
        Ok(ExitCode::from(1))
    }
}

fn summarize(v: &Verdict) -> String {
    match v.witness() {
        None => "holds".to_owned(),
        Some(w) => format!("fails ({})", describe_witness(w, None)),
    }
}
