//! Command-line front end for `lforge`: argument handling, configuration,
//! output formats and the result cache.
//!
//! [`run`] is the whole program; the binary only forwards its arguments and
//! exit code.

pub mod cache;
pub mod chart;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::cache::Cache;
use crate::chart::LabelMode;

pub use commands::CohomologySummary;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Check(_) => EXIT_CHECK,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<lforge::Error> for CliError {
    fn from(e: lforge::Error) -> Self {
        use lforge::Error as E;
        match e {
            E::Parse { .. }
            | E::AdmissiblePair(..)
            | E::NotACocycle(_)
            | E::NotLiftable(_)
            | E::NotInBasis { .. }
            | E::WrongBidegree { .. }
            | E::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub(crate) fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lforge", version, about = "Computations in the Lambda algebra and its Bockstein spectral sequence")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, env = "LFORGE_FORMAT")]
    pub format: Option<Format>,
    /// JSON file of defaults (keys: format, cache_dir, no_cache, step_budget).
    #[arg(long, global = true, env = "LFORGE_CONFIG")]
    pub config: Option<PathBuf>,
    /// Directory for cached results.
    #[arg(long, global = true, env = "LFORGE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache (`--no-cache=false` re-enables it).
    #[arg(long, global = true, env = "LFORGE_NO_CACHE", num_args = 0..=1, require_equals = true, default_missing_value = "true", value_parser = clap::builder::BoolishValueParser::new())]
    pub no_cache: Option<bool>,
    /// Cap on Adem rewrites per monomial.
    #[arg(long, global = true, env = "LFORGE_STEP_BUDGET")]
    pub step_budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite an element in the admissible basis.
    Normalize { element: String },
    /// Multiply two elements.
    Mul { left: String, right: String },
    /// Apply the differential.
    Diff {
        element: String,
        #[arg(long, default_value = "lambda")]
        complex: String,
    },
    /// List the admissible basis of one bidegree.
    Basis(Bidegree),
    /// Cohomology dimensions and class labels.
    Cohomology(CohomologyArgs),
    /// The kernel of Sq⁰ along one filtration.
    Sq0 {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        max_internal: u32,
    },
    /// Run the Bockstein spectral sequence on one line of Λ′.
    Bss {
        #[arg(long)]
        line: u32,
        #[arg(long)]
        max_internal: u32,
        /// Check every differential against Sq⁰ and exit 2 on a mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Chart of H(Λ′) by stem and filtration.
    Figure1 {
        #[arg(long, default_value_t = 14)]
        max_stem: u32,
        #[arg(long, default_value_t = 12)]
        max_filt: u32,
        #[arg(long, value_enum, default_value_t = LabelMode::Figure)]
        labels: LabelMode,
        /// Compare with the published chart and exit 2 on a difference.
        #[arg(long)]
        check: bool,
    },
    /// The dyadic colimit θ⁻¹Λ.
    #[command(subcommand)]
    Cocomplete(CocompleteCommand),
    /// Maintain the result cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Args)]
pub struct Bidegree {
    #[arg(long, default_value = "lambda")]
    pub complex: String,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[arg(long, default_value = "lambda")]
    pub complex: String,
    #[arg(long, requires = "t", conflicts_with = "stem_range")]
    pub s: Option<u32>,
    #[arg(long, requires = "s")]
    pub t: Option<u32>,
    /// Inclusive stem range such as `0..14`.
    #[arg(long)]
    pub stem_range: Option<String>,
    /// Highest filtration for `--stem-range`.
    #[arg(long, default_value_t = 12)]
    pub max_filt: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffMethod {
    /// Scale to Λ, differentiate, scale back.
    Scaled,
    /// Dyadic generator formula and dyadic rewriting.
    Direct,
    /// The literal `C(n-j, j)` coefficients; generators only.
    Naive,
}

#[derive(Debug, Subcommand)]
pub enum CocompleteCommand {
    Normalize {
        element: String,
        /// Rewrite with dyadic relations instead of scaling.
        #[arg(long)]
        direct: bool,
    },
    Diff {
        element: String,
        #[arg(long, value_enum, default_value_t = DiffMethod::Scaled)]
        method: DiffMethod,
    },
    /// The even integer in the θ-orbit of a subscript.
    Orbit { n: String },
    /// The Sq⁰ system whose colimit is H^{s,u}(θ⁻¹Λ).
    Locext {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    Clear,
    /// Check every record's checksum; optionally recompute and compare.
    Verify {
        #[arg(long)]
        recompute: bool,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    format: Option<Format>,
    cache_dir: Option<PathBuf>,
    no_cache: Option<bool>,
    step_budget: Option<u64>,
}

/// Resolved configuration: flags, then `LFORGE_*` variables, then the config
/// file, then defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub cache: Cache,
    pub step_budget: u64,
}

pub const DEFAULT_CACHE_DIR: &str = ".lforge-cache";
const DEFAULT_CONFIG: &str = "lforge.json";

impl Settings {
    pub fn resolve(g: &GlobalArgs) -> Result<Settings, CliError> {
        let file = match &g.config {
            Some(p) => read_config(p)?,
            None if Path::new(DEFAULT_CONFIG).exists() => read_config(Path::new(DEFAULT_CONFIG))?,
            None => FileConfig::default(),
        };
        let cache_dir = g.cache_dir.clone().or(file.cache_dir).unwrap_or_else(|| DEFAULT_CACHE_DIR.into());
        let no_cache = g.no_cache.or(file.no_cache).unwrap_or(false);
        Ok(Settings {
            format: g.format.or(file.format).unwrap_or_default(),
            cache: Cache::new(cache_dir, !no_cache),
            step_budget: g.step_budget.or(file.step_budget).unwrap_or(lforge::DEFAULT_STEP_BUDGET),
        })
    }
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = Settings::resolve(&cli.global).and_then(|settings| commands::dispatch(&cli.command, &settings, out, err));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
