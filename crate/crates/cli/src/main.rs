//! `hilali`: invariants of Sullivan models and checks on fibrations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hilali_core::algebra::{Degree, SullivanModel};
use hilali_core::asymptotics::{self, ExperimentConfig};
use hilali_core::catalog::{self, RandomOptions, TwoStageParams};
use hilali_core::dsl;
use hilali_core::elliptic::{self, InvariantsError, Verdict};
use hilali_core::fibration::{self, FibrationModel};
use hilali_core::rational::{fraction_string, parse_fraction, q};
use hilali_core::report;

/// Stdout writes that tolerate a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "hilali",
    version,
    about = "Exact invariants of Sullivan models and fibration checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model, check d^2 = 0 and decide ellipticity.
    Validate(ModelArgs),
    /// Homotopy and cohomology invariants of an elliptic model.
    Invariants(ModelArgs),
    /// Evaluate every fibration inequality on a catalog or user fibration.
    FibrationCheck(FibrationArgs),
    /// Print a catalog model (or a derived one) in the model format.
    Construct(ConstructArgs),
    /// Evaluate the two-stage bound or search for its threshold.
    Bound(BoundArgs),
    /// Random two-stage experiment written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// A model file, or `catalog:KEY`.
    model: String,
    #[arg(long)]
    json: bool,
    /// Largest degree searched when deciding ellipticity.
    #[arg(long)]
    cap: Option<Degree>,
}

#[derive(Args)]
struct FibrationArgs {
    /// `catalog:KEY` of a catalog fibration.
    fibration: Option<String>,
    #[arg(long, requires_all = ["fiber"])]
    base: Option<String>,
    #[arg(long, requires_all = ["base"])]
    fiber: Option<String>,
    /// File of lines `d FIBER_GEN = POLYNOMIAL` over base and fiber generators.
    #[arg(long, requires_all = ["base", "fiber"])]
    perturbation: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    /// Catalog model or fibration key (the total space is printed), or `random`.
    key: String,
    /// Multiply degrees by 3^i.
    #[arg(long)]
    scale: Option<u32>,
    /// Seed for `random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `n,m,r` for `random`.
    #[arg(long, value_parser = parse_params)]
    params: Option<TwoStageParams>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_parser = parse_params, conflicts_with = "threshold", required_unless_present = "threshold")]
    params: Option<TwoStageParams>,
    /// Positive fraction such as `1/4`.
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    max_factors: usize,
}

fn parse_params(s: &str) -> Result<TwoStageParams, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{x}` is not a nonnegative integer"))
        })
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [n, m, r] => Ok(TwoStageParams { n, m, r }),
        _ => Err("expected n,m,r".to_string()),
    }
}

/// Exit codes: 0 success, 1 failed check or non-elliptic input, 2 usage or parse error.
enum Failure {
    Check(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn load_model(source: &str) -> Result<SullivanModel, Failure> {
    if let Some(key) = source.strip_prefix("catalog:") {
        return catalog::entry(key)
            .map(|e| e.model)
            .map_err(|e| Failure::Usage(e.to_string()));
    }
    let text =
        std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
    dsl::parse_model(&text).map_err(|e| Failure::Usage(format!("{source}: {e}")))
}

fn print_json<T: serde::Serialize>(value: &T) {
    outln!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn invariants_failure(e: InvariantsError) -> Failure {
    Failure::Check(e.to_string())
}

fn validate(args: &ModelArgs) -> Outcome {
    let m = load_model(&args.model)?;
    let ell = elliptic::ellipticity_check_with_cap(&m, args.cap);
    if args.json {
        print_json(&serde_json::json!({
            "name": m.name(),
            "generators": m.len(),
            "d_squared_zero": true,
            "minimal": m.is_minimal(),
            "ellipticity": ell,
        }));
    } else {
        outln!(
            "model {}: d^2 = 0, {} generators, minimal: {}",
            m.name(),
            m.len(),
            m.is_minimal()
        );
        outln!(
            "ellipticity: {:?} (searched to degree {}, decisive at {})",
            ell.verdict,
            ell.cap,
            ell.decisive_cap
        );
    }
    match ell.verdict {
        Verdict::Elliptic => Ok(()),
        Verdict::NotElliptic => Err(Failure::Check(format!(
            "model `{}` is not elliptic",
            m.name()
        ))),
        Verdict::Undecided => Err(Failure::Check(format!(
            "ellipticity undecided at cap {}; rerun with --cap {}",
            ell.cap, ell.decisive_cap
        ))),
    }
}

fn invariants(args: &ModelArgs) -> Outcome {
    let m = load_model(&args.model)?;
    let r = report::invariants_report(&m, args.cap).map_err(invariants_failure)?;
    if args.json {
        print_json(&r);
    } else {
        out!("{}", report::invariants_text(&r));
    }
    Ok(())
}

fn load_fibration(args: &FibrationArgs) -> Result<FibrationModel, Failure> {
    match (&args.fibration, &args.base, &args.fiber) {
        (Some(source), None, None) => {
            let key = source.strip_prefix("catalog:").unwrap_or(source);
            catalog::fibration(key)
                .map(|f| f.model)
                .map_err(|e| Failure::Usage(e.to_string()))
        }
        (None, Some(base), Some(fiber)) => {
            let base = load_model(base)?;
            let fiber = load_model(fiber)?;
            let lines = match &args.perturbation {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    fibration::parse_perturbation(&text)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
                }
                None => Vec::new(),
            };
            let refs: Vec<(&str, &str)> = lines
                .iter()
                .map(|(g, e)| (g.as_str(), e.as_str()))
                .collect();
            let name = format!("{} over {}", fiber.name(), base.name());
            fibration::build_fibration_from_text(name, &base, &fiber, &refs)
                .map_err(|e| Failure::Usage(e.to_string()))
        }
        _ => Err(Failure::Usage(
            "give either a catalog fibration or --base and --fiber".to_string(),
        )),
    }
}

fn fibration_check(args: &FibrationArgs) -> Outcome {
    let f = load_fibration(args)?;
    let r = fibration::analyze_fibration(&f).map_err(|e| Failure::Check(e.to_string()))?;
    if args.json {
        print_json(&r);
    } else {
        out!("{}", report::fibration_text(&r));
    }
    let failed: Vec<&str> = r
        .asserted_failures()
        .iter()
        .map(|c| c.id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "asserted checks failed: {}",
            failed.join(", ")
        )))
    }
}

fn construct(args: &ConstructArgs) -> Outcome {
    let key = args.key.strip_prefix("catalog:").unwrap_or(&args.key);
    let mut m = if key == "random" {
        let params = args
            .params
            .ok_or_else(|| Failure::Usage("`random` needs --params n,m,r".to_string()))?;
        catalog::random_two_stage(args.seed, params, &RandomOptions::default())
            .map_err(|e| Failure::Check(e.to_string()))?
            .model
    } else {
        match catalog::entry(key) {
            Ok(e) => e.model,
            Err(catalog::CatalogError::UnknownKey(_)) => {
                catalog::fibration(key)
                    .map_err(|e| Failure::Usage(e.to_string()))?
                    .model
                    .total
            }
            Err(e) => return Err(Failure::Usage(e.to_string())),
        }
    };
    if let Some(i) = args.scale {
        m = catalog::degree_scale(&m, i).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    out!("{}", dsl::print_model(&m));
    Ok(())
}

fn bound(args: &BoundArgs) -> Outcome {
    if let Some(p) = args.params {
        let r = report::bound_report(p);
        if args.json {
            print_json(&r);
        } else {
            outln!(
                "bound(n={}, m={}, r={}) = {}",
                p.n,
                p.m,
                p.r,
                fraction_string(&r.bound.0)
            );
        }
        return Ok(());
    }
    let text = args.threshold.as_deref().unwrap_or_default();
    let eps = parse_fraction(text)
        .filter(|e| e > &q(0))
        .ok_or_else(|| Failure::Usage(format!("`{text}` is not a positive fraction")))?;
    let r = report::threshold_report(&eps);
    if args.json {
        print_json(&r);
    } else {
        outln!("N = {}", r.threshold.n);
        match (&r.threshold.witness, &r.threshold.witness_bound) {
            (Some(w), Some(b)) => outln!(
                "witness at {}: (n={}, m={}, r={}) with bound {}",
                r.threshold.n - 1,
                w.n,
                w.m,
                w.r,
                fraction_string(&b.0)
            ),
            _ => outln!("no triple reaches the threshold"),
        }
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Outcome {
    let mut config = ExperimentConfig::new(args.samples, args.seed);
    config.max_factors = args.max_factors;
    let records = asymptotics::run_experiment(&config);
    let written = match args.csv.as_deref() {
        Some(p) => asymptotics::write_csv_file(&records, p),
        None => asymptotics::write_csv(&records, std::io::stdout().lock()),
    };
    written.map_err(|e| Failure::Usage(e.to_string()))?;
    let over: Vec<usize> = records
        .iter()
        .filter(|r| !r.within_bound() || !r.lower_bounds_hold())
        .map(|r| r.sample_index)
        .collect();
    if over.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "samples violating the bound: {over:?}"
        )))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Invariants(a) => invariants(a),
        Command::FibrationCheck(a) => fibration_check(a),
        Command::Construct(a) => construct(a),
        Command::Bound(a) => bound(a),
        Command::Experiment(a) => experiment(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
