//! Command-line driver.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::compiler::{compile, GameSpec};
use crate::engine::{run_playouts, trace_json, EngineError, PlayoutTrace};
use crate::english::translate_game;
use crate::manual::{build_manual, render_assets, ManualError};
use crate::render::HighlightMode;
use crate::sexpr::{line_col, parse};
use crate::strategy::{explain_heuristics, parse_heuristics};
use crate::taxonomy::{collect_distinct, collect_endings, coverage, taxonomy_json};

#[derive(Debug, Parser)]
#[command(name = "ludeme-manual", version, about = "Generate game manuals from ludeme descriptions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write manual.html, manual.json and SVG images for each game.
    Generate(GenerateArgs),
    /// Print the English translation of each game.
    Translate(GameArgs),
    /// Print outcome frequencies and move coverage for a playout batch.
    PlayoutStats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Game description file; may be repeated.
    #[arg(long = "game", required = true)]
    pub games: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub playouts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run playouts on all cores. Results are identical either way.
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub batch: BatchArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Heuristics file for the strategy section.
    #[arg(long)]
    pub heuristics: Option<PathBuf>,
    /// Highlight only the selected move instead of every similar legal move.
    #[arg(long)]
    pub no_similar: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub batch: BatchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Generate,
    Translate,
    PlayoutStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub games: Vec<PathBuf>,
    pub playouts: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub mode: Mode,
    pub heuristics: Option<PathBuf>,
    pub similar: bool,
    pub parallel: bool,
    pub json: bool,
}

impl RunConfig {
    pub fn new(mode: Mode, games: Vec<PathBuf>) -> Self {
        RunConfig {
            games,
            playouts: 100,
            seed: 0,
            out: None,
            mode,
            heuristics: None,
            similar: true,
            parallel: false,
            json: false,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let batch = |mut c: RunConfig, b: BatchArgs| {
            c.playouts = b.playouts as usize;
            c.seed = b.seed;
            c.parallel = b.parallel;
            c.json = b.format == Format::Json;
            c
        };
        match cli.command {
            Command::Generate(a) => {
                let mut c = batch(RunConfig::new(Mode::Generate, a.game.games), a.batch);
                c.out = Some(a.out);
                c.heuristics = a.heuristics;
                c.similar = !a.no_similar;
                c
            }
            Command::Translate(a) => RunConfig::new(Mode::Translate, a.games),
            Command::PlayoutStats(a) => batch(RunConfig::new(Mode::PlayoutStats, a.game.games), a.batch),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: file not found", .0.display())]
    NotFound(PathBuf),
    /// Parse, compile or heuristics error, already formatted with its location.
    #[error("{0}")]
    Diagnostic(String),
    #[error("{0}")]
    Playout(EngineError),
    #[error("{0}")]
    Other(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotFound(_) => 2,
            CliError::Diagnostic(_) => 3,
            CliError::Playout(_) => 4,
            CliError::Other(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::PlayoutLimitExceeded { .. } => CliError::Playout(e),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<ManualError> for CliError {
    fn from(e: ManualError) -> Self {
        match e {
            ManualError::Engine(inner) => inner.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::NotFound(path.to_path_buf()),
        _ => CliError::Io { path: path.to_path_buf(), source: e },
    })
}

/// `path:line:col: message` followed by the offending source line and a caret.
fn diagnostic(path: &Path, text: &str, offset: Option<usize>, message: &str) -> CliError {
    let Some(offset) = offset else {
        return CliError::Diagnostic(format!("{}: {message}", path.display()));
    };
    let (line, col) = line_col(text, offset);
    let source = text.lines().nth(line - 1).unwrap_or("");
    CliError::Diagnostic(format!(
        "{}:{line}:{col}: {message}\n  {source}\n  {}^",
        path.display(),
        " ".repeat(col.saturating_sub(1))
    ))
}

pub fn load_game(path: &Path) -> Result<GameSpec, CliError> {
    let text = read(path)?;
    let tree = parse(&text).map_err(|e| diagnostic(path, &text, e.position(), &e.to_string()))?;
    compile(&tree).map_err(|e| diagnostic(path, &text, Some(e.span().start), &e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

/// File-system-safe directory name for a game.
pub fn game_dir_name(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

fn traces_json(spec: &GameSpec, traces: &[PlayoutTrace]) -> serde_json::Value {
    serde_json::Value::Array(traces.iter().map(|t| trace_json(spec, t)).collect())
}

fn generate(config: &RunConfig, spec: &GameSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let root = config.out.as_ref().ok_or_else(|| CliError::Other("--out is required".into()))?;
    let strategy = match &config.heuristics {
        Some(path) => {
            let text = read(path)?;
            let entries =
                parse_heuristics(&text).map_err(|e| CliError::Diagnostic(format!("{}: {e}", path.display())))?;
            Some(
                explain_heuristics(&entries, spec)
                    .map_err(|e| CliError::Diagnostic(format!("{}: {e}", path.display())))?,
            )
        }
        None => None,
    };
    let translation = translate_game(spec).map_err(|e| CliError::Other(e.to_string()))?;
    let traces = run_playouts(spec, config.seed, config.playouts, config.parallel)?;
    let endings = collect_endings(&traces, spec).map_err(|e| CliError::Other(e.to_string()))?;
    let moves = collect_distinct(&traces, spec).map_err(|e| CliError::Other(e.to_string()))?;
    let mode = if config.similar { HighlightMode::AllSimilar } else { HighlightMode::SelectedOnly };
    let rendered = render_assets(spec, &traces, &endings, &moves, mode)?;
    let doc = build_manual(spec, &translation, strategy.as_deref(), &endings, &moves, &rendered)?;

    let dir = root.join(game_dir_name(&spec.name));
    for asset in &rendered.assets {
        write_file(&dir.join("svg").join(&asset.name), &asset.svg)?;
    }
    write_file(&dir.join("manual.html"), &doc.html)?;
    write_file(&dir.join("manual.json"), &pretty(&doc.json))?;
    if config.json {
        let cov = coverage(spec, &moves);
        write_file(&dir.join("taxonomy.json"), &pretty(&taxonomy_json(spec, &moves, &endings, &cov)))?;
        write_file(&dir.join("traces.json"), &pretty(&traces_json(spec, &traces)))?;
    }
    let cov = coverage(spec, &moves);
    if !cov.unexercised.is_empty() {
        let ids: Vec<String> = cov.unexercised.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "warning: move ludemes never played: {}", ids.join(", "));
    }
    let _ = writeln!(out, "{}", dir.join("manual.html").display());
    Ok(())
}

fn stats(config: &RunConfig, spec: &GameSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let traces = run_playouts(spec, config.seed, config.playouts, config.parallel)?;
    let moves = collect_distinct(&traces, spec).map_err(|e| CliError::Other(e.to_string()))?;
    let endings = collect_endings(&traces, spec).map_err(|e| CliError::Other(e.to_string()))?;
    let cov = coverage(spec, &moves);
    let mut outcomes: BTreeMap<String, usize> = BTreeMap::new();
    for t in &traces {
        let players: Vec<String> = t.outcome.players.iter().map(ToString::to_string).collect();
        *outcomes.entry(format!("{:?} {}", t.outcome.outcome, players.join(","))).or_default() += 1;
    }
    let lengths: Vec<usize> = traces.iter().map(|t| t.moves.len()).collect();
    let mean = lengths.iter().sum::<usize>() as f64 / lengths.len().max(1) as f64;
    if config.json {
        let value = json!({
            "game": spec.name,
            "playouts": traces.len(),
            "seed": config.seed,
            "outcomes": outcomes,
            "mean_length": mean,
            "taxonomy": taxonomy_json(spec, &moves, &endings, &cov),
            "traces": traces_json(spec, &traces),
        });
        let _ = write!(out, "{}", pretty(&value));
        return Ok(());
    }
    let _ = writeln!(out, "{}: {} playouts from seed {}", spec.name, traces.len(), config.seed);
    for (outcome, n) in &outcomes {
        let _ = writeln!(out, "  {outcome}: {n}");
    }
    let _ = writeln!(out, "  mean length: {mean:.2}");
    let _ = writeln!(out, "  distinct moves: {}", moves.len());
    let _ = writeln!(out, "  endings: {}", endings.len());
    let _ = writeln!(
        out,
        "  move ludemes exercised: {}/{}",
        cov.move_ludemes.len() - cov.unexercised.len(),
        cov.move_ludemes.len()
    );
    Ok(())
}

fn run_one(config: &RunConfig, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = load_game(path)?;
    match config.mode {
        Mode::Translate => {
            let text = translate_game(&spec).map_err(|e| CliError::Other(e.to_string()))?;
            let _ = write!(out, "{text}");
            Ok(())
        }
        Mode::Generate => generate(config, &spec, out),
        Mode::PlayoutStats => stats(config, &spec, out),
    }
}

/// Run every game in `config`, stopping at the first failure. Returns the exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if config.playouts == 0 {
        let _ = writeln!(err, "error: --playouts must be at least 1");
        return 1;
    }
    for path in &config.games {
        if let Err(e) = run_one(config, path, out) {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    }
    0
}
