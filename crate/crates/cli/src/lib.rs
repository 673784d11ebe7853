//! Command-line front end: loads graph and game files, runs an engine, and
//! renders the result as a table or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use digraph_shapley::format::{parse_game, parse_graph, FormatError};
use digraph_shapley::shapley::ENUMERATION_LIMIT;
use digraph_shapley::{
    count_consistent, enumerate_consistent, is_consistent, shapley, CharacteristicFunction,
    Digraph, Engine, EngineChoice, EntryOrder, Guard, ShapleyError, ShapleyOutcome,
};
use num_rational::Ratio;
use serde_json::json;
use thiserror::Error;

/// Relative tolerance for `--self-check` agreement.
pub const SELF_CHECK_TOLERANCE: f64 = 1e-9;

/// Environment variable capping engine parallelism.
pub const THREADS_ENV: &str = "DIGRAPH_SHAPLEY_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{what}: {source}")]
    Format { what: String, source: FormatError },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}; pass --force to run anyway")]
    Guard(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 for validation errors, 2 for guard violations, 3 for internal
    /// assertion failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Format { .. } | CliError::Invalid(_) => 1,
            CliError::Guard(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<ShapleyError> for CliError {
    fn from(e: ShapleyError) -> Self {
        match e {
            ShapleyError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            ShapleyError::NoConsistentOrder { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Value,
    Permutations,
    Count,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub graph_path: PathBuf,
    /// Path, inline JSON, or `power:K`.
    pub game: Option<String>,
    pub perm: Option<String>,
    pub engine: EngineChoice,
    pub output: OutputFormat,
    pub self_check: bool,
    pub guard_override: bool,
}

impl RunConfig {
    fn guard(&self) -> Guard {
        if self.guard_override {
            Guard::Override
        } else {
            Guard::Enforce
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "digraph-shapley",
    version,
    about = "Shapley values of digraph-restricted TU games"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Shapley value of the game on the digraph.
    Value(Flags),
    /// List the consistent permutations in lexicographic order.
    Permutations(Flags),
    /// Count the consistent permutations.
    Count(Flags),
    /// Decide whether an entry sequence is consistent.
    Check(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Graph JSON file.
    #[arg(long)]
    graph: PathBuf,
    /// Game JSON file, inline JSON, or `power:K`.
    #[arg(long)]
    game: Option<String>,
    /// Entry sequence for `check`, e.g. `3,2,1`.
    #[arg(long)]
    perm: Option<String>,
    /// auto, enum, dp, closed-form, or oracle.
    #[arg(long, default_value = "auto")]
    engine: EngineChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output: OutputFormat,
    /// Run a second engine and fail with exit 3 on disagreement.
    #[arg(long)]
    self_check: bool,
    /// Lift the size guards on factorial-cost operations.
    #[arg(long)]
    force: bool,
}

/// Parses command-line arguments (including the program name).
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let (command, flags) = match cli.command {
        Sub::Value(f) => (Command::Value, f),
        Sub::Permutations(f) => (Command::Permutations, f),
        Sub::Count(f) => (Command::Count, f),
        Sub::Check(f) => (Command::Check, f),
    };
    Ok(RunConfig {
        command,
        graph_path: flags.graph,
        game: flags.game,
        perm: flags.perm,
        engine: flags.engine,
        output: flags.output,
        self_check: flags.self_check,
        guard_override: flags.force,
    })
}

/// Sizes the global thread pool from [`THREADS_ENV`]. Unset or 0 keeps the
/// default.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let threads = match value.map(str::trim) {
        None | Some("") => 0,
        Some(s) => s.parse::<usize>().map_err(|_| {
            CliError::Invalid(format!("{THREADS_ENV}: `{s}` is not a thread count"))
        })?,
    };
    if threads > 0 {
        // Fails only if a pool already exists, which leaves that pool in use.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

/// Runs one command and returns the report to print on stdout.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    if config.engine == EngineChoice::Fixed(Engine::ClosedForm) && config.command != Command::Value
    {
        return Err(CliError::Invalid(
            "--engine closed-form is only valid with the value command".into(),
        ));
    }
    let graph = load_graph(&config.graph_path)?;
    match config.command {
        Command::Value => value(config, &graph),
        Command::Permutations => permutations(config, &graph),
        Command::Count => Ok(count(config, &graph)),
        Command::Check => check(config, &graph),
    }
}

fn load_graph(path: &Path) -> Result<Digraph, CliError> {
    let text = read(path)?;
    parse_graph(&text).map_err(|source| CliError::Format {
        what: format!("graph {}", path.display()),
        source,
    })
}

fn load_game(spec: &str, graph: &Digraph) -> Result<CharacteristicFunction, CliError> {
    let trimmed = spec.trim();
    if let Some(k) = trimmed.strip_prefix("power:") {
        let k = k.trim().parse::<u32>().map_err(|_| {
            CliError::Invalid(format!("--game: `{k}` is not a nonnegative exponent"))
        })?;
        return CharacteristicFunction::power(graph.n(), k)
            .map_err(|e| CliError::Invalid(format!("--game: {e}")));
    }
    let (what, text) = if trimmed.starts_with('{') {
        ("inline game".to_owned(), trimmed.to_owned())
    } else {
        let path = Path::new(spec);
        (format!("game {}", path.display()), read(path)?)
    };
    parse_game(&text).map_err(|source| CliError::Format { what, source })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn value(config: &RunConfig, graph: &Digraph) -> Result<String, CliError> {
    let spec = config
        .game
        .as_deref()
        .ok_or_else(|| CliError::Invalid("value: --game is required".into()))?;
    let game = load_game(spec, graph)?;
    let outcome = shapley(&game, graph, config.engine, config.guard())?;

    let mut checked_against = None;
    if config.self_check {
        let second = second_engine(outcome.engine, graph, config)?;
        let other = shapley(&game, graph, EngineChoice::Fixed(second), config.guard())?;
        if !outcome.agrees_with(&other, SELF_CHECK_TOLERANCE) {
            return Err(CliError::Internal(format!(
                "self-check failed: {} gave {:?} over {} permutations, {} gave {:?} over {}",
                outcome.engine,
                outcome.allocation,
                outcome.permutation_count,
                other.engine,
                other.allocation,
                other.permutation_count
            )));
        }
        checked_against = Some(second);
    }

    Ok(match config.output {
        OutputFormat::Json => serde_json::to_string(&outcome).expect("plain data") + "\n",
        OutputFormat::Table => value_table(&outcome, checked_against),
    })
}

/// The engine a self-check compares against.
fn second_engine(first: Engine, graph: &Digraph, config: &RunConfig) -> Result<Engine, CliError> {
    if first != Engine::SubsetDp {
        return Ok(Engine::SubsetDp);
    }
    if graph.n() <= ENUMERATION_LIMIT || config.guard_override {
        return Ok(Engine::Enumeration);
    }
    Err(CliError::Guard(format!(
        "--self-check compares dp against enum, which is limited to n <= {ENUMERATION_LIMIT} (got n = {})",
        graph.n()
    )))
}

fn value_table(outcome: &ShapleyOutcome, checked_against: Option<Engine>) -> String {
    let mut out = String::new();
    writeln!(out, "engine: {}", outcome.engine).unwrap();
    writeln!(
        out,
        "consistent permutations: {}",
        outcome.permutation_count
    )
    .unwrap();
    if let Some(other) = checked_against {
        writeln!(out, "self-check: agrees with {other}").unwrap();
    }
    match &outcome.exact {
        Some(exact) => {
            writeln!(out, "{:<8}{:<14}exact", "player", "allocation").unwrap();
            for (k, (x, q)) in outcome.allocation.iter().zip(exact).enumerate() {
                writeln!(out, "{:<8}{:<14}{}", k + 1, significant(*x), fraction(q)).unwrap();
            }
        }
        None => {
            writeln!(out, "{:<8}allocation", "player").unwrap();
            for (k, x) in outcome.allocation.iter().enumerate() {
                writeln!(out, "{:<8}{}", k + 1, significant(*x)).unwrap();
            }
        }
    }
    out
}

fn fraction(q: &Ratio<i128>) -> String {
    q.to_string()
}

/// Decimal rendering with 6 significant digits and trailing zeros removed.
pub fn significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exponent) {
        let s = format!("{x:.5e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn permutations(config: &RunConfig, graph: &Digraph) -> Result<String, CliError> {
    if graph.n() > ENUMERATION_LIMIT && !config.guard_override {
        return Err(CliError::Guard(format!(
            "listing permutations is limited to n <= {ENUMERATION_LIMIT} (got n = {})",
            graph.n()
        )));
    }
    let orders: Vec<EntryOrder> = enumerate_consistent(graph).collect();
    Ok(match config.output {
        OutputFormat::Json => {
            let listed: Vec<Vec<usize>> = orders.iter().map(EntryOrder::indices).collect();
            json!({ "permutation_count": orders.len(), "permutations": listed }).to_string() + "\n"
        }
        OutputFormat::Table => orders.iter().map(|o| format!("{o}\n")).collect(),
    })
}

fn count(config: &RunConfig, graph: &Digraph) -> String {
    let total = count_consistent(graph);
    match config.output {
        OutputFormat::Json => json!({ "permutation_count": total }).to_string() + "\n",
        OutputFormat::Table => format!("{total}\n"),
    }
}

fn check(config: &RunConfig, graph: &Digraph) -> Result<String, CliError> {
    let raw = config
        .perm
        .as_deref()
        .ok_or_else(|| CliError::Invalid("check: --perm is required".into()))?;
    let sequence = raw
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Invalid(format!("--perm: `{s}` is not a player number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let order = EntryOrder::new(graph.n(), &sequence)
        .map_err(|e| CliError::Invalid(format!("--perm: {e}")))?;
    let consistent = is_consistent(graph, &order).expect("order built for this graph");
    Ok(match config.output {
        OutputFormat::Json => {
            json!({ "permutation": sequence, "consistent": consistent }).to_string() + "\n"
        }
        OutputFormat::Table => {
            format!(
                "{}\n",
                if consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            )
        }
    })
}
