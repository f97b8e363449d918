//! Command-line front end: corpus ingestion, invariant tables, conjecture
//! runs and verification of exported conjectures.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use conjecturing::engine::{self, render_conjecture, EngineConfig, FilterKind};
use conjecturing::export::{read_export, write_export};
use conjecturing::features::{build_table, corpus_digest, FeatureTable};
use conjecturing::fit::Direction;
use conjecturing::graph::Graph;
use conjecturing::graph6::parse_graph6;
use conjecturing::{InvariantRegistry, PredicateRegistry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: empty corpus")]
    EmptyCorpus { path: String },
    #[error("{path}:{line}: {message}")]
    Corpus { path: String, line: usize, message: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Engine(#[from] conjecturing::EngineError),
    #[error(transparent)]
    Table(#[from] conjecturing::features::FeatureError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "conjecturing",
    version,
    about = "Generate and check linear conjectures between graph invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the invariant table of a corpus.
    Invariants(InvariantsArgs),
    /// Generate, filter and rank conjectures.
    Conjecture(ConjectureArgs),
    /// Check exported conjectures against a corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    /// graph6 corpus, one graph per line with an optional trailing label.
    pub corpus: PathBuf,
    /// Invariant names or aliases (default: all).
    #[arg(short, long, value_delimiter = ',')]
    pub invariants: Vec<String>,
    /// Predicate columns to include.
    #[arg(short, long, value_delimiter = ',')]
    pub predicates: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterSelection {
    Generality,
    Dalmatian,
    Both,
    None,
}

impl FilterSelection {
    fn kinds(self) -> BTreeSet<FilterKind> {
        match self {
            FilterSelection::Generality => BTreeSet::from([FilterKind::Generality]),
            FilterSelection::Dalmatian => BTreeSet::from([FilterKind::Dalmatian]),
            FilterSelection::Both => BTreeSet::from([FilterKind::Generality, FilterKind::Dalmatian]),
            FilterSelection::None => BTreeSet::new(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    /// TOML run configuration; flags override its values.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// graph6 corpus file.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Invariants to bound (default: every computed invariant).
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// upper, lower or both (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub directions: Option<Vec<Direction>>,
    /// Numeric columns to compute (default: all invariants).
    #[arg(long, value_delimiter = ',')]
    pub invariants: Option<Vec<String>>,
    /// Predicate columns available to hypotheses (default: all).
    #[arg(long, value_delimiter = ',')]
    pub predicates: Option<Vec<String>>,
    /// Most predicates in one hypothesis.
    #[arg(long)]
    pub max_hypothesis_size: Option<usize>,
    /// Fewest graphs a hypothesis must select.
    #[arg(long)]
    pub min_support: Option<usize>,
    #[arg(long, value_enum)]
    pub filters: Option<FilterSelection>,
    /// Conjectures listed per target and direction.
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Also write the structured export to this file.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Table cache file, reused when the corpus digest matches.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON Lines export produced by `conjecture`.
    pub export: PathBuf,
    pub corpus: PathBuf,
}

/// Contents of a run configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub corpus: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub export: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub invariants: Option<Vec<String>>,
    pub predicates: Option<Vec<String>>,
    #[serde(default)]
    pub engine: EngineConfig,
}

/// A fully resolved conjecture run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    pub cache_path: Option<PathBuf>,
    pub export_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub invariants: InvariantRegistry,
    pub predicates: PredicateRegistry,
    pub engine: EngineConfig,
}

impl RunConfig {
    /// Merges a config file (if any) with flag overrides and validates every name.
    pub fn resolve(args: &ConjectureArgs) -> Result<Self, CliError> {
        let file: RunConfigFile = match &args.config {
            Some(path) => {
                let text = read_text(path)?;
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfigFile::default(),
        };
        let base = args.config.as_deref().and_then(Path::parent).unwrap_or(Path::new(""));
        let relative = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let corpus_path = match (&args.corpus, file.corpus) {
            (Some(p), _) => p.clone(),
            (None, Some(p)) => relative(p),
            (None, None) => return Err(CliError::Config("no corpus given".into())),
        };
        let cache_path = args.cache.clone().or(file.cache.map(relative));
        let export_path = args.export.clone().or(file.export.map(relative));
        let output_format = args.format.or(file.format).unwrap_or(OutputFormat::Text);

        let invariants = select_invariants(args.invariants.as_ref().or(file.invariants.as_ref()))?;
        let predicates = select_predicates(args.predicates.as_ref().or(file.predicates.as_ref()))?;

        let mut engine = file.engine;
        if let Some(t) = &args.targets {
            engine.targets = t.clone();
        }
        if let Some(d) = &args.directions {
            engine.directions = d.clone();
        }
        if let Some(k) = args.max_hypothesis_size {
            engine.max_hypothesis_size = k;
        }
        if let Some(s) = args.min_support {
            engine.min_support = s;
        }
        if let Some(f) = args.filters {
            engine.filters = f.kinds();
        }
        if let Some(k) = args.top_k {
            engine.top_k = k;
        }
        engine.targets = engine
            .targets
            .iter()
            .map(|t| {
                invariants
                    .resolve(t)
                    .map(String::from)
                    .ok_or_else(|| CliError::Config(format!("target {t:?} is not a selected invariant")))
            })
            .collect::<Result<_, _>>()?;
        engine.validate()?;
        Ok(RunConfig {
            corpus_path,
            cache_path,
            export_path,
            output_format,
            invariants,
            predicates,
            engine,
        })
    }
}

fn select_invariants(names: Option<&Vec<String>>) -> Result<InvariantRegistry, CliError> {
    let all = InvariantRegistry::builtin();
    match names {
        None => Ok(all),
        Some(names) => all
            .select(names)
            .map_err(|n| CliError::Config(format!("unknown invariant {n:?}"))),
    }
}

fn select_predicates(names: Option<&Vec<String>>) -> Result<PredicateRegistry, CliError> {
    let all = PredicateRegistry::builtin();
    match names {
        None => Ok(all),
        Some(names) => all
            .select(names)
            .map_err(|n| CliError::Config(format!("unknown predicate {n:?}"))),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a graph6 corpus. Each line holds one graph and optionally a label
/// after whitespace. Unlabelled graphs are named after the file: the stem
/// alone for a single-graph file, otherwise `stem:line`.
pub fn parse_corpus(text: &str, path: &Path) -> Result<Vec<Graph>, CliError> {
    let display = path.display().to_string();
    let stem = path
        .file_stem()
        .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && *l != conjecturing::graph6::HEADER)
        .collect();
    if lines.is_empty() {
        return Err(CliError::EmptyCorpus { path: display });
    }
    let single = lines.len() == 1;
    lines
        .into_iter()
        .map(|(line, content)| {
            let mut parts = content.split_whitespace();
            let code = parts.next().unwrap_or_default();
            let label = parts.next();
            if parts.next().is_some() {
                return Err(CliError::Corpus {
                    path: display.clone(),
                    line,
                    message: "expected a graph6 string and at most one label".into(),
                });
            }
            let g = parse_graph6(code).map_err(|e| CliError::Corpus {
                path: display.clone(),
                line,
                message: e.to_string(),
            })?;
            let label = match label {
                Some(l) => l.to_string(),
                None if single => stem.clone(),
                None => format!("{stem}:{line}"),
            };
            Ok(g.with_label(label))
        })
        .collect()
}

pub fn read_corpus(path: &Path) -> Result<Vec<Graph>, CliError> {
    parse_corpus(&read_text(path)?, path)
}

pub fn cmd_invariants(args: &InvariantsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let invariants = select_invariants((!args.invariants.is_empty()).then_some(&args.invariants))?;
    let predicates = select_predicates(Some(&args.predicates))?;
    let corpus = read_corpus(&args.corpus)?;
    let names: Vec<&str> = invariants.names().chain(predicates.names()).collect();
    writeln!(out, "label {}", names.join(" "))?;
    for (i, g) in corpus.iter().enumerate() {
        let mut cells = vec![conjecturing::features::object_label(g, i)];
        for inv in invariants.iter() {
            cells.push((inv.eval)(g).map_or_else(|_| "-".to_string(), |v| v.to_string()));
        }
        for p in predicates.iter() {
            cells.push((p.eval)(g).to_string());
        }
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(EXIT_OK)
}

/// Builds the feature table, reusing the cache when its digest matches.
pub fn load_table(config: &RunConfig, corpus: &[Graph]) -> Result<FeatureTable, CliError> {
    let digest = corpus_digest(corpus, &config.invariants, &config.predicates);
    if let Some(path) = &config.cache_path {
        if let Ok(file) = fs::File::open(path) {
            if let Ok(Some(table)) = FeatureTable::read_cache(file, &digest, &config.invariants, &config.predicates) {
                return Ok(table);
            }
        }
    }
    let table = build_table(corpus, &config.invariants, &config.predicates)?;
    if let Some(path) = &config.cache_path {
        let file = fs::File::create(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        table.write_cache(std::io::BufWriter::new(file), &digest)?;
    }
    Ok(table)
}

pub fn cmd_conjecture(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let corpus = read_corpus(&config.corpus_path)?;
    let table = load_table(config, &corpus)?;
    let result = engine::run(&table, &config.engine)?;

    if let Some(path) = &config.export_path {
        let file = fs::File::create(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut w = std::io::BufWriter::new(file);
        write_export(&mut w, &result.listing).map_err(|e| CliError::Config(e.to_string()))?;
        w.flush()?;
    }

    match config.output_format {
        OutputFormat::Structured => {
            write_export(&mut *out, &result.listing).map_err(|e| CliError::Config(e.to_string()))?;
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "# {} objects, {} conjectures generated, {} after filtering",
                table.len(),
                result.generated.len(),
                result.filtered.len()
            )?;
            let mut current = None;
            let mut rank = 0;
            for c in &result.listing {
                let group = (c.target.as_str(), c.direction());
                if current != Some(group) {
                    writeln!(out, "## {} ({})", c.target, c.direction())?;
                    current = Some(group);
                    rank = 0;
                }
                rank += 1;
                writeln!(
                    out,
                    "{rank}. {}  [touch {}, support {}]",
                    render_conjecture(c),
                    c.touch_number,
                    c.support_size
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = read_export(&read_text(&args.export)?);
    let corpus = read_corpus(&args.corpus)?;
    let invariants = InvariantRegistry::builtin();
    let predicates = PredicateRegistry::builtin();
    let mut status = EXIT_OK;
    for record in records {
        let c = match record {
            Ok(c) => c,
            Err(e) => {
                writeln!(out, "ERROR {e}")?;
                continue;
            }
        };
        let statement = render_conjecture(&c);
        match engine::verify_conjecture(&c, &corpus, &invariants, &predicates) {
            Err(e) => writeln!(out, "ERROR {statement}: {e}")?,
            Ok(report) => match report.counterexample {
                Some(ce) => {
                    status = EXIT_COUNTEREXAMPLE;
                    writeln!(
                        out,
                        "COUNTEREXAMPLE {statement}: {} has lhs {} and rhs {}",
                        ce.label, ce.lhs, ce.rhs
                    )?;
                }
                None => {
                    write!(
                        out,
                        "HOLDS {statement}  [touch {}, checked {}",
                        report.touch_number, report.checked
                    )?;
                    if !report.skipped.is_empty() {
                        write!(out, ", skipped {}", report.skipped.len())?;
                    }
                    writeln!(out, "]")?;
                }
            },
        }
    }
    Ok(status)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Invariants(a) => cmd_invariants(a, out),
        Command::Conjecture(a) => RunConfig::resolve(a).and_then(|c| cmd_conjecture(&c, out)),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}
