//! Command-line front end: argument parsing, configuration, exit codes and JSON output.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 resource cap.

pub mod commands;
pub mod corpus;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::hurwitz::{HurwitzCache, HurwitzEngine, CACHE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orbifrob", version, about = "Orbifold GW potentials, tri-polynomial Frobenius manifolds and Seifert SFT Hamiltonians")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GlobalOpts {
    /// JSON config with `cache`, `no_cache` and `max_degree`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Hurwitz cache file. Takes precedence over ORBIFROB_CACHE and the config.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Largest covering degree the Hurwitz engine accepts.
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Whether the orbifold sphere has a polynomial potential, and its family.
    Classify(commands::ClassifyArgs),
    /// One Hurwitz number.
    Hurwitz(commands::HurwitzArgs),
    /// Cap potential of C/Z_α.
    Cap(commands::CapArgs),
    /// Genus-g potential of an orbicurve.
    GwPotential(commands::GwPotentialArgs),
    /// WDVV residuals of a potential.
    WdvvCheck(commands::WdvvArgs),
    /// Frobenius data at a tri-polynomial point.
    Tripoly(commands::TripolyArgs),
    /// Staged comparison of the orbifold and tri-polynomial sides.
    MirrorCheck(commands::MirrorArgs),
    /// Spectrum of the Euler multiplication on the orbifold side.
    USpectrum(commands::USpectrumArgs),
    /// SFT Hamiltonian of a Seifert fibration.
    Seifert(commands::SeifertArgs),
    /// Runs the regression corpus.
    Fixtures(corpus::FixturesArgs),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub cache: Option<PathBuf>,
    #[serde(default)]
    pub no_cache: bool,
    pub max_degree: Option<u32>,
}

impl Config {
    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("config {}: {e}", path.display())))
    }
}

/// Flags, then the environment, then the config file, then `~/.cache/orbifrob/hurwitz.jsonl`.
pub fn resolve_cache_path(global: &GlobalOpts, config: &Config) -> Option<PathBuf> {
    if global.no_cache || (config.no_cache && global.cache.is_none()) {
        return None;
    }
    if let Some(p) = &global.cache {
        return Some(p.clone());
    }
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = &config.cache {
        return Some(p.clone());
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache/orbifrob/hurwitz.jsonl"))
}

pub struct Context {
    pub engine: HurwitzEngine,
}

impl Context {
    pub fn new(global: &GlobalOpts) -> crate::Result<Self> {
        let config = match &global.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let cache = resolve_cache_path(global, &config).map(HurwitzCache::open);
        let mut engine = HurwitzEngine::new(cache);
        if let Some(d) = global.max_degree.or(config.max_degree) {
            engine = engine.with_max_degree(d);
        }
        Ok(Context { engine })
    }
}

/// A command's JSON and whether its checks passed.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }

    pub fn check(value: Value, ok: bool) -> Self {
        Outcome { value, ok }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) | Error::UnknownVariable(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_CHECK_FAILED,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Invalid(_) => "invalid",
        Error::UnknownVariable(_) => "unknown_variable",
        Error::PositiveDimensional(_) => "positive_dimensional",
        Error::Inconsistent { .. } => "inconsistent",
        Error::Resource(_) => "resource",
        Error::NoConvergence { .. } => "no_convergence",
        Error::Degenerate(_) => "degenerate",
        Error::Solve(_) => "solve",
        Error::Io(_) => "io",
    }
}

pub fn error_json(kind: &str, message: &str) -> Value {
    json!({"error": {"kind": kind, "message": message}})
}

pub fn dispatch(cli: &Cli) -> crate::Result<Outcome> {
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Hurwitz(a) => commands::hurwitz(&ctx, a),
        Command::Cap(a) => commands::cap(a),
        Command::GwPotential(a) => commands::gw_potential(&ctx, a),
        Command::WdvvCheck(a) => commands::wdvv_check(&ctx, a),
        Command::Tripoly(a) => commands::tripoly(a),
        Command::MirrorCheck(a) => commands::mirror_check(&ctx, a),
        Command::USpectrum(a) => commands::u_spectrum(&ctx, a),
        Command::Seifert(a) => commands::seifert(&ctx, a),
        Command::Fixtures(a) => corpus::run(&ctx, a),
    }
}

/// Runs one command line, writing JSON to stdout (or `--output`) and errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.value).expect("JSON values serialize");
            match &cli.global.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text + "\n") {
                        eprintln!("{}", error_json("io", &e.to_string()));
                        return EXIT_CHECK_FAILED;
                    }
                }
                None => {
                    use std::io::Write;
                    // a closed pipe downstream is not our failure
                    let _ = writeln!(std::io::stdout().lock(), "{text}");
                }
            }
            if out.ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &e.to_string()));
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_precedence() {
        let cfg = Config { cache: Some("from-config".into()), no_cache: false, max_degree: None };
        let flag = GlobalOpts { cache: Some("from-flag".into()), ..Default::default() };
        assert_eq!(resolve_cache_path(&flag, &cfg), Some(PathBuf::from("from-flag")));
        let off = GlobalOpts { no_cache: true, ..Default::default() };
        assert_eq!(resolve_cache_path(&off, &cfg), None);
        let cfg_off = Config { no_cache: true, ..Default::default() };
        assert_eq!(resolve_cache_path(&GlobalOpts::default(), &cfg_off), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Invalid("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Resource("x".into())), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Degenerate("x".into())), EXIT_CHECK_FAILED);
        assert_eq!(run(["orbifrob", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["orbifrob", "classify", "2", "x"]), EXIT_USAGE);
    }
}
