use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use bia_core::bundle::{ConstructionBundle, SCHEMA_VERSION};
use bia_core::dof::{asymptotic_check, dof_table_csv, MAX_USERS};
use bia_core::simulate::{SlopeSummary, DEFAULT_SNR_DB};
use bia_core::verify::{verify_realization, ConverseRow, DimensionCensus, RankReport};
use bia_core::{
    draw_channel, simulate_rates, BiaError, Construction, ConstructionMode, Representation, SchemeParams,
    SimulationConfig,
};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "bia",
    version,
    about = "Blind interference alignment with staggered antenna switching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build S, B, the precoders and the switching plan as one JSON bundle.
    Construct {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every rank check, the census and the converse audit over channel seeds.
    Verify {
        #[command(flatten)]
        scheme: OptionalSchemeArgs,
        /// Read the construction from a bundle instead of building it.
        #[arg(long, conflicts_with_all = ["users", "order", "mode"])]
        bundle: Option<PathBuf>,
        #[command(flatten)]
        seeds: SeedArgs,
        #[command(flatten)]
        arithmetic: Arithmetic,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal order and sum DoF for a range of user counts, as CSV.
    Dof {
        /// A single K or an inclusive range `a..b`.
        #[arg(long = "k", short = 'k', value_parser = parse_range)]
        k: (u64, u64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rate curve under zero-forcing and the fitted high-SNR slope.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        seeds: SeedArgs,
        /// Comma-separated SNR ladder in dB.
        #[arg(long = "snr-db", value_delimiter = ',', default_values_t = DEFAULT_SNR_DB.to_vec())]
        snr_db: Vec<f64>,
        /// Channel draws per seed.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Rate-curve CSV path; the slope summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run even if the embedded verification fails.
        #[arg(long)]
        allow_unverified: bool,
    },
}

#[derive(Args, Clone, Serialize)]
struct SchemeArgs {
    #[arg(long, short = 'k')]
    users: usize,
    #[arg(long, short = 'r')]
    order: Option<usize>,
    #[arg(long, default_value = "paper-exact")]
    mode: ConstructionMode,
}

#[derive(Args, Clone, Serialize)]
struct OptionalSchemeArgs {
    #[arg(long, short = 'k', required_unless_present = "bundle")]
    users: Option<usize>,
    #[arg(long, short = 'r')]
    order: Option<usize>,
    #[arg(long)]
    mode: Option<ConstructionMode>,
}

#[derive(Args, Clone, Serialize)]
struct SeedArgs {
    /// Root seed; channel seed i is `seed + i`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of channel seeds.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
}

impl SeedArgs {
    fn list(&self) -> Result<Vec<u64>, BiaError> {
        if self.seeds == 0 {
            return Err(BiaError::InvalidParams("--seeds must be >= 1".into()));
        }
        Ok((0..self.seeds).map(|i| self.seed.wrapping_add(i)).collect())
    }
}

#[derive(Args, Clone, Serialize)]
#[group(multiple = false)]
struct Arithmetic {
    /// Exact rational arithmetic (default).
    #[arg(long)]
    exact: bool,
    /// Floating-point arithmetic with a relative rank threshold.
    #[arg(long)]
    float: bool,
}

impl Arithmetic {
    fn representation(&self) -> Representation {
        if self.float {
            Representation::Floating
        } else {
            Representation::ExactRational
        }
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must satisfy 1 <= a <= b"));
    }
    if hi > MAX_USERS {
        return Err(format!("K is capped at {MAX_USERS}"));
    }
    Ok((lo, hi))
}

/// What a failed command reports and how the process exits.
enum Failure {
    Usage(String),
    Violation(String),
}

impl From<BiaError> for Failure {
    fn from(e: BiaError) -> Self {
        match e {
            BiaError::InvalidParams(_)
            | BiaError::Infeasible { .. }
            | BiaError::Bundle(_)
            | BiaError::InsufficientSnrSpan(_) => Failure::Usage(e.to_string()),
            other => Failure::Violation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct OutputDigest {
    path: String,
    sha256: String,
}

/// Sidecar written next to every output file. The timestamp is the only
/// field that is not a function of the flags.
#[derive(Serialize)]
struct RunManifest {
    schema: u32,
    command: &'static str,
    params: Value,
    seeds: Vec<u64>,
    version: &'static str,
    timestamp_unix: u64,
    outputs: Vec<OutputDigest>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Write `payload` to `out` (or stdout) plus its manifest sidecar.
fn emit(
    out: Option<&Path>,
    payload: &str,
    command: &'static str,
    params: Value,
    seeds: Vec<u64>,
) -> Result<(), Failure> {
    let Some(out) = out else {
        print!("{payload}");
        return Ok(());
    };
    std::fs::write(out, payload)?;
    let manifest = RunManifest {
        schema: SCHEMA_VERSION,
        command,
        params,
        seeds,
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        outputs: vec![OutputDigest {
            path: out.display().to_string(),
            sha256: sha256_hex(payload.as_bytes()),
        }],
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    std::fs::write(manifest_path(out), text)?;
    Ok(())
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

#[derive(Serialize)]
struct SeedOutcome {
    seed: u64,
    passed: bool,
    checks_run: usize,
    failures: Vec<RankReport>,
    censuses: Vec<DimensionCensus>,
    census_errors: Vec<String>,
    converse: Vec<ConverseRow>,
    converse_error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    params: SchemeParams,
    representation: Representation,
    all_passed: bool,
    seeds_passed: usize,
    seeds_total: usize,
    outcomes: Vec<SeedOutcome>,
}

fn run_verification(
    construction: &Construction,
    seeds: &[u64],
    representation: Representation,
) -> Result<VerifyReport, BiaError> {
    let outcomes: Vec<SeedOutcome> = seeds
        .par_iter()
        .map(|&seed| {
            let ch = draw_channel(&construction.params, seed, representation);
            let rep = verify_realization(construction, &ch)?;
            Ok(SeedOutcome {
                seed,
                passed: rep.all_passed,
                checks_run: rep.checks.len(),
                failures: rep.failures().cloned().collect(),
                censuses: rep.censuses,
                census_errors: rep.census_errors,
                converse: rep.converse,
                converse_error: rep.converse_error,
            })
        })
        .collect::<Result<_, BiaError>>()?;
    let seeds_passed = outcomes.iter().filter(|o| o.passed).count();
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        params: construction.params,
        representation,
        all_passed: seeds_passed == outcomes.len(),
        seeds_passed,
        seeds_total: outcomes.len(),
        outcomes,
    })
}

fn derive_params(users: usize, order: Option<usize>, mode: ConstructionMode) -> Result<SchemeParams, Failure> {
    Ok(SchemeParams::derive(users, order, mode)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { scheme, out } => {
            let params = derive_params(scheme.users, scheme.order, scheme.mode)?;
            let construction = Construction::new(params)?;
            let payload = ConstructionBundle::from(&construction).to_json() + "\n";
            emit(out.as_deref(), &payload, "construct", json!(params), Vec::new())
        }
        Command::Verify {
            scheme,
            bundle,
            seeds,
            arithmetic,
            out,
        } => {
            let construction = match &bundle {
                Some(path) => {
                    // a bundle that fails validation is bad input, not a failed property
                    let text = std::fs::read_to_string(path)?;
                    ConstructionBundle::from_json(&text)
                        .and_then(|b| b.to_construction())
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
                }
                None => {
                    let users = scheme.users.expect("clap enforces --users without --bundle");
                    let params = derive_params(users, scheme.order, scheme.mode.unwrap_or_default())?;
                    Construction::new(params)?
                }
            };
            let seed_list = seeds.list()?;
            let report = run_verification(&construction, &seed_list, arithmetic.representation())?;
            let params = json!({
                "scheme": construction.params,
                "bundle": bundle.map(|p| p.display().to_string()),
                "representation": arithmetic.representation(),
            });
            emit(out.as_deref(), &to_json(&report), "verify", params, seed_list)?;
            if report.all_passed {
                Ok(())
            } else {
                Err(Failure::Violation(format!(
                    "verification failed on {} of {} seeds",
                    report.seeds_total - report.seeds_passed,
                    report.seeds_total
                )))
            }
        }
        Command::Dof { k: (lo, hi), out } => {
            let users: Vec<u64> = (lo..=hi).collect();
            let rows = asymptotic_check(&users)?;
            emit(
                out.as_deref(),
                &dof_table_csv(&rows),
                "dof",
                json!({ "k": [lo, hi] }),
                Vec::new(),
            )
        }
        Command::Simulate {
            scheme,
            seeds,
            snr_db,
            trials,
            out,
            allow_unverified,
        } => {
            let params = derive_params(scheme.users, scheme.order, scheme.mode)?;
            let seed_list = seeds.list()?;
            let config = SimulationConfig::new(params, seed_list.clone(), snr_db.clone(), trials);
            config.validate()?;
            let construction = Construction::new(params)?;
            let verification = run_verification(&construction, &seed_list, Representation::ExactRational)?;
            if !verification.all_passed && !allow_unverified {
                eprintln!("{}", to_json(&verification));
                return Err(Failure::Violation(
                    "embedded verification failed; rerun with --allow-unverified to simulate anyway".into(),
                ));
            }
            let curve = simulate_rates(&config)?;
            let summary = json!({
                "schema": SCHEMA_VERSION,
                "params": params,
                "verified": verification.all_passed,
                "draws": curve.draws,
                "summary": SlopeSummary::from(&curve),
            });
            let run_params =
                json!({ "scheme": params, "snr_db": snr_db, "trials": trials, "allow_unverified": allow_unverified });
            if out.is_some() {
                emit(out.as_deref(), &curve.to_csv(), "simulate", run_params, seed_list)?;
            }
            print!("{}", to_json(&summary));
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("BIA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("BIA_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
