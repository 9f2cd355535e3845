//! `c4pn`: solve game series, verify strategy books, run the constructive
//! Builder against Painter policies, and play against it.

mod play;

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use c4pn::book::{header_line, parse_book, verify_book};
use c4pn::config::{default_series, load_series, parse_game_arg, SeriesGame};
use c4pn::engine::base::BaseBookError;
use c4pn::engine::{BaseBooks, Engine, BASE_ORDERS};
use c4pn::harness::{run_match, MatchSpec, Outcome, Policy, Transcript};
use c4pn::rules::StartTag;
use c4pn::solver::{run_game_series, GameResult, SolveOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "c4pn",
    version,
    about = "Red C4 against blue Pn: solver, books and constructive Builder"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Series config (TOML). Defaults to the bundled twelve-game series.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// One game instead of a series: `n=..,v=..,e=..[,start=..]`.
    #[arg(long, global = true, value_name = "SPEC")]
    game: Option<String>,
    /// Where books are written and looked up.
    #[arg(long, global = true, default_value = "books", value_name = "DIR")]
    books_dir: PathBuf,
    /// Solve each game without move-ordering hints from the previous one.
    #[arg(long, global = true)]
    no_hints: bool,
    /// Worker threads for engine sweeps, and for series solved without hints.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// First seed of the random Painters.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Path orders for engine runs, `a..b` inclusive.
    #[arg(long, global = true, value_parser = parse_range, value_name = "A..B")]
    sweep_n: Option<RangeInclusive<usize>>,
    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every game and write one book per game.
    Solve {
        /// Verify each book after writing it.
        #[arg(long)]
        verify: bool,
    },
    /// Check books; the game comes from --game or the file name.
    Verify {
        #[arg(required = true)]
        books: Vec<PathBuf>,
    },
    /// Run the engine from the empty start against Painter policies.
    EngineSim {
        /// Random Painters per path order.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// A single policy instead of the sweep; prints its transcripts.
        #[arg(long)]
        policy: Option<Policy>,
        /// Directory for transcripts of lost or failed matches.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Colour Builder's edges from the terminal.
    Play {
        #[arg(long, value_enum, default_value_t = BuilderKind::Engine)]
        builder: BuilderKind,
        /// Transcript file, written when the session ends.
        #[arg(long, default_value = "play.txt", value_name = "PATH")]
        transcript: PathBuf,
    },
    /// Time the solver with and without hints, and the engine sweep.
    Bench {
        #[arg(long, default_value_t = 10)]
        seeds: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuilderKind {
    /// Constructive strategy in the restricted game.
    Engine,
    /// Solved book in the bounded game given by --game.
    Book,
}

/// Ways a command can fail, by exit code.
#[derive(Debug)]
enum Failure {
    /// Exit 1: a book or transcript was rejected.
    Rejected(String),
    /// Exit 2: bad arguments, config or input files.
    Config(String),
    /// Exit 3: the program broke one of its own invariants.
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Config(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Rejected(m) | Failure::Config(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

type Result<T, E = Failure> = std::result::Result<T, E>;

fn config_err(e: impl fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn internal(e: impl fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Solve { verify } => solve(&cli.common, verify),
        Command::Verify { books } => verify(&cli.common, &books),
        Command::EngineSim { seeds, policy, out } => {
            engine_sim(&cli.common, seeds, policy, out.as_deref())
        }
        Command::Play {
            builder,
            transcript,
        } => play::run(&cli.common, builder, &transcript),
        Command::Bench { seeds } => bench(&cli.common, seeds),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b`, got `{s}`");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

fn games(common: &Common) -> Result<Vec<SeriesGame>> {
    match (&common.game, &common.config) {
        (Some(_), Some(_)) => Err(Failure::Config(
            "--game and --config exclude each other".into(),
        )),
        (Some(g), None) => Ok(vec![parse_game_arg(g).map_err(config_err)?]),
        (None, Some(p)) => load_series(p).map_err(config_err),
        (None, None) => Ok(default_series()),
    }
}

/// `C4P<n>V<v>E<e>.txt` back to its game.
fn game_from_file_name(path: &Path) -> Option<SeriesGame> {
    let stem = path.file_stem()?.to_str()?;
    let rest = stem.strip_prefix("C4P")?;
    let (n, rest) = rest.split_once('V')?;
    let (v, e) = rest.split_once('E')?;
    Some(SeriesGame::new(
        n.parse().ok()?,
        v.parse().ok()?,
        e.parse().ok()?,
    ))
}

fn solve_games(common: &Common, games: &[SeriesGame]) -> Result<Vec<GameResult>> {
    let opts = SolveOptions::default();
    let report = |g: &GameResult| {
        for s in &g.starts {
            let spec = c4pn::rules::GameSpec {
                start: s.start.clone(),
                ..g.spec.clone()
            };
            println!(
                "{}  unique/total positions {}/{}",
                header_line(&spec, s.rc),
                s.stats.unique_positions,
                s.stats.total_positions
            );
        }
        println!("  solved in {:.2?}", g.elapsed);
    };
    if common.threads <= 1 || !common.no_hints || games.len() == 1 {
        if common.threads > 1 && !common.no_hints {
            log::warn!("games share hints and run in order; pass --no-hints to use threads");
        }
        return run_game_series(games, !common.no_hints, opts, report).map_err(internal);
    }
    let chunks = split(games.len(), common.threads);
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|range| s.spawn(move || run_game_series(&games[range], false, opts, |_| {})))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread"))
            .collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r.map_err(internal)?);
    }
    out.iter().for_each(report);
    Ok(out)
}

/// `len` items in at most `parts` contiguous, nearly equal ranges.
fn split(len: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let parts = parts.clamp(1, len.max(1));
    (0..parts)
        .map(|i| i * len / parts..(i + 1) * len / parts)
        .filter(|r| !r.is_empty())
        .collect()
}

fn solve(common: &Common, verify_after: bool) -> Result<()> {
    let games = games(common)?;
    std::fs::create_dir_all(&common.books_dir)
        .map_err(|e| config_err(format!("{}: {e}", common.books_dir.display())))?;
    let results = solve_games(common, &games)?;
    let mut rejected = Vec::new();
    for (game, r) in games.iter().zip(&results) {
        let path = common.books_dir.join(game.book_file_name());
        std::fs::write(&path, &r.book).map_err(|e| internal(format!("{}: {e}", path.display())))?;
        println!(
            "wrote {} ({} lines)",
            path.display(),
            r.book.lines().count()
        );
        if verify_after {
            let book = parse_book(&r.book).map_err(internal)?;
            let report = verify_book(&book, game);
            println!("{}: {report}", path.display());
            if !report.accepted {
                rejected.push(path.display().to_string());
            }
        }
    }
    if rejected.is_empty() {
        Ok(())
    } else {
        Err(Failure::Rejected(format!(
            "rejected: {}",
            rejected.join(", ")
        )))
    }
}

fn verify(common: &Common, books: &[PathBuf]) -> Result<()> {
    let given = common
        .game
        .as_deref()
        .map(parse_game_arg)
        .transpose()
        .map_err(config_err)?;
    let mut rejected = 0;
    for path in books {
        let game = given
            .clone()
            .or_else(|| game_from_file_name(path))
            .ok_or_else(|| {
                Failure::Config(format!(
                    "cannot tell the game of {}; pass --game",
                    path.display()
                ))
            })?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let report = match parse_book(&text) {
            Ok(book) => verify_book(&book, &game),
            Err(e) => {
                println!("{}: rejected: {e}", path.display());
                rejected += 1;
                continue;
            }
        };
        println!("{}: {report}", path.display());
        if !report.accepted {
            rejected += 1;
        }
    }
    if rejected == 0 {
        Ok(())
    } else {
        Err(Failure::Rejected(format!(
            "{rejected} of {} book(s) rejected",
            books.len()
        )))
    }
}

fn base_books(common: &Common) -> Result<Arc<BaseBooks>> {
    let started = Instant::now();
    let books =
        BaseBooks::load_or_solve(&common.books_dir, BASE_ORDERS, false).map_err(|e| match e {
            BaseBookError::Io { .. } => config_err(e),
            BaseBookError::Invalid { .. } => Failure::Rejected(e.to_string()),
            _ => internal(e),
        })?;
    log::info!("base books ready in {:.1?}", started.elapsed());
    Ok(Arc::new(books))
}

/// Path orders and start for engine runs: `--game` picks one order and its
/// start, otherwise `--sweep-n` from the empty start.
fn engine_targets(common: &Common) -> Result<(RangeInclusive<usize>, StartTag)> {
    if let Some(g) = &common.game {
        let game = parse_game_arg(g).map_err(config_err)?;
        let start = match game.starts.as_slice() {
            [s] => s.tag,
            _ => StartTag::Empty,
        };
        return Ok((game.n..=game.n, start));
    }
    Ok((common.sweep_n.clone().unwrap_or(14..=40), StartTag::Empty))
}

struct OrderSummary {
    n: usize,
    played: usize,
    won: usize,
    longest: usize,
    contractions: usize,
    failures: Vec<Transcript>,
}

fn sweep_order(
    n: usize,
    start: StartTag,
    policies: &[Policy],
    books: &Arc<BaseBooks>,
) -> OrderSummary {
    let mut s = OrderSummary {
        n,
        played: 0,
        won: 0,
        longest: 0,
        contractions: 0,
        failures: Vec::new(),
    };
    for &policy in policies {
        let spec = MatchSpec::rr(n, start);
        let mut painter = policy.painter(&spec);
        let t = match Engine::new(n, start, books.clone()) {
            Ok(mut engine) => {
                let t = run_match(&mut engine, painter.as_mut(), &spec);
                s.contractions += engine.records().len();
                t
            }
            Err(e) => Transcript {
                spec,
                rounds: Vec::new(),
                outcome: Outcome::BuilderFailed(e.to_string()),
            },
        };
        s.played += 1;
        s.longest = s.longest.max(t.round_count());
        if t.outcome.builder_won() {
            s.won += 1;
        } else {
            s.failures.push(t);
        }
    }
    s
}

fn run_sweep(
    common: &Common,
    orders: RangeInclusive<usize>,
    start: StartTag,
    seeds: u64,
    books: &Arc<BaseBooks>,
) -> Vec<OrderSummary> {
    let orders: Vec<usize> = orders.collect();
    let seeds = common.seed..common.seed + seeds;
    let work = |n: usize| {
        let rounds = MatchSpec::rr(n, start).rounds();
        sweep_order(n, start, &Policy::sweep(rounds, seeds.clone()), books)
    };
    let parts = split(orders.len(), common.threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = parts
            .into_iter()
            .map(|r| {
                let orders = &orders[r];
                s.spawn(move || orders.iter().map(|&n| work(n)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep thread"))
            .collect()
    })
}

fn engine_sim(
    common: &Common,
    seeds: u64,
    policy: Option<Policy>,
    out: Option<&Path>,
) -> Result<()> {
    let (orders, start) = engine_targets(common)?;
    let books = base_books(common)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| config_err(format!("{}: {e}", dir.display())))?;
    }
    let summaries = match policy {
        Some(p) => orders
            .map(|n| sweep_order(n, start, &[p], &books))
            .collect(),
        None => run_sweep(common, orders.clone(), start, seeds, &books),
    };
    let mut lost = 0;
    for s in &summaries {
        println!(
            "n={:<3} won {}/{}  longest {} of {} rounds  contractions {}",
            s.n,
            s.won,
            s.played,
            s.longest,
            MatchSpec::rr(s.n, start).rounds(),
            s.contractions
        );
        if let Some(p) = policy {
            let spec = MatchSpec::rr(s.n, start);
            let mut painter = p.painter(&spec);
            if let Ok(mut engine) = Engine::new(s.n, start, books.clone()) {
                print!(
                    "{}",
                    run_match(&mut engine, painter.as_mut(), &spec).to_text()
                );
            }
        }
        for (i, t) in s.failures.iter().enumerate() {
            lost += 1;
            match out {
                Some(dir) => {
                    let path = dir.join(format!("lost-n{}-{i}.txt", s.n));
                    std::fs::write(&path, t.to_text())
                        .map_err(|e| internal(format!("{}: {e}", path.display())))?;
                }
                None if lost == 1 => eprint!("{}", t.to_text()),
                None => {}
            }
        }
    }
    if lost == 0 {
        Ok(())
    } else {
        Err(Failure::Internal(format!(
            "the engine failed to win {lost} match(es)"
        )))
    }
}

fn bench(common: &Common, seeds: u64) -> Result<()> {
    let games = if common.game.is_some() || common.config.is_some() {
        games(common)?
    } else {
        default_series().into_iter().filter(|g| g.n <= 10).collect()
    };
    let opts = SolveOptions::default();
    for hints in [true, false] {
        let started = Instant::now();
        let results = run_game_series(&games, hints, opts, |_| {}).map_err(internal)?;
        let positions: u64 = results
            .iter()
            .flat_map(|r| &r.starts)
            .map(|s| s.stats.unique_positions)
            .sum();
        println!(
            "solve {} game(s) {} hints: {:.2?}, {positions} unique positions",
            games.len(),
            if hints { "with" } else { "without" },
            started.elapsed()
        );
    }
    let books = base_books(common)?;
    let (orders, start) = engine_targets(common)
        .ok()
        .filter(|_| common.game.is_none())
        .unwrap_or((14..=40, StartTag::Empty));
    let started = Instant::now();
    let summaries = run_sweep(common, orders.clone(), start, seeds, &books);
    let played: usize = summaries.iter().map(|s| s.played).sum();
    let elapsed = started.elapsed().max(Duration::from_nanos(1));
    println!(
        "engine n={}..{}: {played} matches in {elapsed:.2?} ({:.0} matches/s)",
        orders.start(),
        orders.end(),
        played as f64 / elapsed.as_secs_f64()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("14..40"), Ok(14..=40));
        assert_eq!(parse_range("3..=5"), Ok(3..=5));
        assert!(parse_range("9..3").is_err());
        assert!(parse_range("9").is_err());
    }

    #[test]
    fn book_file_names() {
        let g = game_from_file_name(Path::new("books/C4P7V8E12.txt")).unwrap();
        assert_eq!((g.n, g.v, g.e), (7, 8, 12));
        assert!(game_from_file_name(Path::new("C4P7V8.txt")).is_none());
        assert!(game_from_file_name(Path::new("notes.txt")).is_none());
    }

    #[test]
    fn splits_cover_everything() {
        for len in 0..12 {
            for parts in 1..6 {
                let s = split(len, parts);
                assert!(s.len() <= parts);
                assert_eq!(s.iter().map(|r| r.len()).sum::<usize>(), len);
            }
        }
    }
}
