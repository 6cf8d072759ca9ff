//! The `gops` command line: solve, verify, query, export, play and serve.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use gops::dp::{
    load_table, solve_all_with_stats, solve_streaming, strategy_for, subgame_count, value_of, verify_table, GvtWriter,
    SolveConfig, ValueTable, VerifyOptions,
};
use gops::matgame::exploitability;
use gops::play::{BotPolicy, PointsTo, Session, Winner};
use gops::{Card, CardSet, Error, FloatTable, GameState, Rational, Scalar};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "gops", version, about = "Equilibrium solver and bot for the Game of Pure Strategy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every subgame of an n-card game and write a GVT table.
    Solve {
        #[arg(long)]
        n: usize,
        /// Exact rational arithmetic (not persistable; refused above n=5).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Keep every layer in memory instead of the last two.
        #[arg(long)]
        keep_all: bool,
        /// Solve both orientations of each state instead of mirroring.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a table for invariant violations.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
    /// Expected margin f(V, Y, P) for player one.
    Value {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Equilibrium bidding mixture for one upcard.
    Strategy {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        upcard: u32,
    },
    /// Opening strategies as CSV: rows are your card, columns the upcard.
    Export {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, required = true)]
        start: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Play against the equilibrium bot in the terminal.
    Play {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the HTTP API.
    Serve {
        /// One or more complete tables; sessions use the one matching their deck size.
        #[arg(long, required_unless_present = "endgame")]
        table: Vec<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Also solve the 13-card game up to this many cards in hand, for
        /// endgame value and strategy queries.
        #[arg(long)]
        endgame: Option<usize>,
    },
    /// Time a float solve.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Where values come from: a saved table, or an in-memory solve of only the
/// layers the query needs.
#[derive(Debug, Args)]
pub struct Source {
    #[arg(long, required_unless_present = "n", conflicts_with = "n")]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Exact arithmetic for an in-memory solve.
    #[arg(long, requires = "n")]
    pub exact: bool,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// The opening position.
    #[arg(long, conflicts_with_all = ["v", "y", "p"])]
    pub start: bool,
    /// Your hand, e.g. 2,4.
    #[arg(long, requires_all = ["y", "p"], required_unless_present = "start")]
    pub v: Option<String>,
    /// Opponent's hand.
    #[arg(long, requires_all = ["v", "p"])]
    pub y: Option<String>,
    /// Cards still in the prize deck.
    #[arg(long, requires_all = ["v", "y"])]
    pub p: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flag values: exit status 2.
    Usage(String),
    /// Everything else: exit status 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnequalSizes { .. } | Error::BadCardList(_) | Error::CardOutOfRange { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Solve { n, exact, workers, keep_all, no_symmetry, out: path } => {
            let config = with_workers(SolveConfig::new(n), workers).keep_all(keep_all).symmetry(!no_symmetry);
            solve(config, exact, path.as_deref(), out)
        }
        Command::Verify { table, samples, seed } => verify(&table, samples, seed, out),
        Command::Value { source, state } => query(&source, &state, None, out),
        Command::Strategy { source, state, upcard } => query(&source, &state, Some(upcard), out),
        Command::Export { table, out: path, .. } => {
            let table = load_table(&table)?;
            let mut file = BufWriter::new(File::create(&path)?);
            export_csv(&table, &mut file)?;
            file.flush()?;
            emit(out, json!({ "out": path, "n": table.n() }))
        }
        Command::Play { table, seed } => {
            let table = Arc::new(load_table(&table)?);
            play(table, seed.unwrap_or_else(clock_seed), input, out)
        }
        Command::Serve { table, port, bind, endgame } => serve(&table, SocketAddr::new(bind, port), endgame, out),
        Command::Bench { n, workers } => {
            let config = with_workers(SolveConfig::new(n), workers);
            let (_, stats) = solve_all_with_stats::<f64>(&config)?;
            let secs = stats.elapsed.as_secs_f64();
            emit(
                out,
                json!({
                    "n": n,
                    "workers": config.workers,
                    "seconds": secs,
                    "stage_solves": stats.stage_solves,
                    "stored_values": stats.stored_values,
                    "stage_solves_per_second": stats.stage_solves as f64 / secs.max(1e-9),
                    "layer_seconds": stats.layer_times.iter().map(|t| t.as_secs_f64()).collect::<Vec<_>>(),
                }),
            )
        }
    }
}

fn emit(out: &mut dyn Write, value: Value) -> CliResult {
    writeln!(out, "{value}")?;
    Ok(())
}

fn with_workers(config: SolveConfig, workers: Option<usize>) -> SolveConfig {
    match workers {
        Some(k) => config.workers(k),
        None => config,
    }
}

fn clock_seed() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64)
}

fn solve(config: SolveConfig, exact: bool, path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let n = config.n;
    if exact {
        if path.is_some() {
            return Err(Error::NotPersistable.into());
        }
        let (table, stats) = solve_streaming::<Rational, _>(&config.exact(), |_, _| Ok(()))?;
        let root = table.value(&GameState::start(n))?;
        return emit(out, solve_report(n, "rational", &stats, number(&root), None));
    }

    let Some(path) = path else {
        let (table, stats) = solve_all_with_stats::<f64>(&config)?;
        let root = table.value(&GameState::start(n))?;
        return emit(out, solve_report(n, "float64", &stats, number(&root), None));
    };
    config.validate()?;
    let file = File::create(path)?;
    let mut writer = GvtWriter::new(BufWriter::with_capacity(1 << 20, file), n)?;
    let solved = solve_streaming::<f64, _>(&config, |j, layer| writer.write_layer(j, layer));
    let finished = solved.and_then(|res| writer.finish().map(|_| res));
    let (table, stats) = finished.inspect_err(|_| {
        let _ = std::fs::remove_file(path);
    })?;
    let root = table.value(&GameState::start(n))?;
    emit(out, solve_report(n, "float64", &stats, number(&root), Some(path)))
}

fn solve_report(n: usize, arithmetic: &str, stats: &gops::dp::SolveStats, root: Value, out: Option<&Path>) -> Value {
    json!({
        "n": n,
        "arithmetic": arithmetic,
        "stage_solves": stats.stage_solves,
        "stage_solves_without_symmetry": subgame_count(n),
        "stored_values": stats.stored_values,
        "root_value": root,
        "seconds": stats.elapsed.as_secs_f64(),
        "out": out,
    })
}

fn verify(path: &Path, samples: usize, seed: u64, out: &mut dyn Write) -> CliResult {
    let table = load_table(path)?;
    let report = verify_table(&table, &VerifyOptions { samples, seed, ..Default::default() });
    let violations: Vec<String> = report.violations.iter().take(50).map(|v| v.to_string()).collect();
    emit(
        out,
        json!({
            "n": table.n(),
            "clean": report.is_clean(),
            "violation_count": report.violations.len(),
            "violations": violations,
            "entries_checked": report.entries_checked,
            "stage_games_sampled": report.stage_games_sampled,
            "max_exploitability": report.max_exploitability,
            "max_antisymmetry_error": report.max_antisymmetry_error,
        }),
    )?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("{} invariant violations", report.violations.len())))
    }
}

fn parse_state(args: &StateArgs, n: usize) -> CliResult<GameState> {
    if args.start {
        return Ok(GameState::start(n));
    }
    let list = |text: &Option<String>| CardSet::parse(text.as_deref().unwrap_or(""), n);
    Ok(GameState::new(list(&args.v)?, list(&args.y)?, list(&args.p)?)?)
}

fn query(source: &Source, args: &StateArgs, upcard: Option<u32>, out: &mut dyn Write) -> CliResult {
    match (&source.table, source.n) {
        (Some(path), _) => {
            let table = load_table(path)?;
            let state = parse_state(args, table.n())?;
            answer(&table, &state, upcard, out)
        }
        (None, Some(n)) => {
            if n == 0 || n > SolveConfig::MAX_N {
                return Err(CliError::Usage(format!("--n must be in 1..={}", SolveConfig::MAX_N)));
            }
            let state = parse_state(args, n)?;
            // values need layer |V| - 1 at most; strategies exactly that layer
            let depth = state.size().saturating_sub(1);
            let mut config = with_workers(SolveConfig::new(n), source.workers).up_to_layer(depth);
            if source.exact {
                config = config.exact();
                // shallow endgames stay small even in a large deck
                if depth <= 2 {
                    config.max_exact_n = config.max_exact_n.max(n);
                }
                let (table, _) = solve_all_with_stats::<Rational>(&config)?;
                answer(&table, &state, upcard, out)
            } else {
                let (table, _) = solve_all_with_stats::<f64>(&config)?;
                answer(&table, &state, upcard, out)
            }
        }
        (None, None) => Err(CliError::Usage("one of --table or --n is required".into())),
    }
}

fn number<S: Scalar>(x: &S) -> Value {
    if S::EXACT {
        json!({ "exact": x.to_string(), "approx": x.to_f64() })
    } else {
        json!(x.to_f64())
    }
}

fn answer<S: Scalar>(table: &ValueTable<S>, state: &GameState, upcard: Option<u32>, out: &mut dyn Write) -> CliResult {
    let Some(upcard) = upcard else {
        let v = value_of(table, state)?;
        return emit(out, json!({ "state": state.to_string(), "value": number(&v) }));
    };
    let upcard = Card::new(upcard, table.n())?;
    if !state.p().contains(upcard) {
        return Err(CliError::Usage(format!("upcard {upcard} is not in the deck {}", state.p())));
    }
    let m = gops::dp::stage_matrix(table, state, upcard)?;
    let sol = strategy_for(table, state, upcard)?;
    let gap = exploitability(&m, &sol)?;
    let probs: Vec<Value> =
        state.v().iter().zip(sol.row.probs()).map(|(c, p)| json!({ "card": c.value(), "p": number(p) })).collect();
    emit(
        out,
        json!({
            "state": state.to_string(),
            "upcard": upcard.value(),
            "probs": probs,
            "value": number(&sol.value),
            "exploitability": gap.to_f64(),
            "method": format!("{:?}", sol.method),
        }),
    )
}

fn cell(p: f64) -> String {
    let s = format!("{p:.4}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

/// Opening strategies: one row per own card, one column per upcard.
pub fn export_csv(table: &FloatTable, out: &mut dyn Write) -> CliResult {
    let n = table.n();
    let root = GameState::start(n);
    let mut columns = Vec::with_capacity(n);
    for up in 1..=n as u8 {
        columns.push(strategy_for(table, &root, Card::of(up))?.row.to_f64());
    }
    let header: Vec<String> = std::iter::once("card".to_string()).chain((1..=n).map(|k| k.to_string())).collect();
    writeln!(out, "{}", header.join(","))?;
    for card in 0..n {
        let row: Vec<String> =
            std::iter::once((card + 1).to_string()).chain(columns.iter().map(|col| cell(col[card]))).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn list(s: CardSet) -> String {
    s.to_string()
}

fn points(half: u32) -> String {
    if half.is_multiple_of(2) {
        format!("{}", half / 2)
    } else {
        format!("{}.5", half / 2)
    }
}

/// A plain prompt loop: one bid per line on `input`.
pub fn play(table: Arc<FloatTable>, seed: u64, input: &mut dyn BufRead, out: &mut dyn Write) -> CliResult {
    let n = table.n();
    let mut session = Session::new(n, seed, BotPolicy::Equilibrium(table))?;
    writeln!(out, "GOPS with {n} cards, seed {seed}. Type a card from your hand each round.")?;
    let mut line = String::new();
    while let Some(upcard) = session.upcard() {
        writeln!(
            out,
            "round {}: upcard {upcard} | your hand {} | bot hand {} | score {} - {}",
            session.round(),
            list(session.human_hand()),
            list(session.bot_hand()),
            points(session.human_half_points()),
            points(session.bot_half_points()),
        )?;
        write!(out, "your bid> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Err(CliError::Domain("input ended before the game finished".into()));
        }
        let card = match line.trim().parse::<u32>().map_err(|_| ()).and_then(|v| Card::new(v, n).map_err(|_| ())) {
            Ok(c) if session.human_hand().contains(c) => c,
            _ => {
                writeln!(out, "not a card in your hand: {:?}", line.trim())?;
                continue;
            }
        };
        let rec = session.submit_bid(card)?;
        let verdict = match rec.points_to {
            PointsTo::Human => format!("you win {}", rec.upcard),
            PointsTo::Bot => format!("bot wins {}", rec.upcard),
            PointsTo::Split => format!("tie, {} split", rec.upcard),
        };
        writeln!(out, "you {} vs bot {}: {verdict}", rec.human_bid, rec.bot_bid)?;
    }
    let result = session.final_result()?;
    let winner = match result.winner {
        Winner::Human => "you win",
        Winner::Bot => "the bot wins",
        Winner::Draw => "draw",
    };
    writeln!(
        out,
        "final score {} - {}: {winner} (margin {})",
        points(result.human_half_points),
        points(result.bot_half_points),
        result.margin
    )?;
    Ok(())
}

fn serve(paths: &[PathBuf], addr: SocketAddr, endgame: Option<usize>, out: &mut dyn Write) -> CliResult {
    let mut tables = Vec::with_capacity(paths.len() + 1);
    for p in paths {
        tables.push(load_table(p)?);
    }
    if let Some(depth) = endgame {
        let (t, _) = solve_all_with_stats::<f64>(&SolveConfig::new(13).up_to_layer(depth).keep_all(true))?;
        tables.push(t);
    }
    let state = gops_server::AppState::new(tables);
    let runtime = tokio::runtime::Runtime::new()?;
    writeln!(out, "listening on http://{addr}")?;
    out.flush()?;
    runtime.block_on(gops_server::serve(state, addr))?;
    Ok(())
}
