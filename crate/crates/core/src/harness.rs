//! Painter policies and the match runner.
//!
//! The runner owns the board and checks both players against the rule set
//! on every round, whatever the policy or strategy claims.
//!
//! Transcripts are line oriented:
//!
//! ```text
//! # RR n=14 start=empty e=26
//! 1 0-1 r stage1
//! 2 0-2 b stage1
//! # outcome blue-path rounds=2
//! ```
//!
//! RRC headers also carry `v=`. A phase tag is optional.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{ordered, Board, BoardEdge, Vertex};
use crate::book::{BookCursor, BookIndex};
use crate::engine::{start_edges, BaseBooks, Engine};
use crate::graph::Colour;
use crate::rules::{is_legal_builder_move, GameSpec, Ruleset, StartPosition, StartTag};
use crate::solver::{SolveOptions, Solver};

/// Parameters of one match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchSpec {
    pub n: usize,
    pub start: StartTag,
    pub ruleset: Ruleset,
    /// Total coloured edges allowed, start included.
    pub e: usize,
    /// Vertex cap, RRC only.
    pub v: Option<usize>,
}

impl MatchSpec {
    pub fn rr(n: usize, start: StartTag) -> Self {
        MatchSpec {
            n,
            start,
            ruleset: Ruleset::Rr,
            e: 2 * n - 2,
            v: None,
        }
    }

    pub fn rrc(n: usize, v: usize, e: usize, start: StartTag) -> Self {
        MatchSpec {
            n,
            start,
            ruleset: Ruleset::Rrc,
            e,
            v: Some(v),
        }
    }

    /// Rounds left after the start edges.
    pub fn rounds(&self) -> usize {
        let (r, b) = self.start.edges();
        self.e.saturating_sub(r.len() + b.len())
    }

    /// The bounded game, for the solver and the RRC legality checks.
    pub fn game_spec(&self) -> GameSpec {
        let start = StartPosition::named(self.start);
        match self.ruleset {
            Ruleset::Rr => GameSpec {
                e: self.e,
                ..GameSpec::rr(self.n, start)
            },
            Ruleset::Rrc => GameSpec::rrc(self.n, self.v.unwrap_or(usize::MAX), self.e, start),
        }
    }
}

impl fmt::Display for MatchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ruleset {
            Ruleset::Rr => write!(f, "RR n={} start={} e={}", self.n, self.start, self.e),
            Ruleset::Rrc => write!(
                f,
                "RRC n={} start={} v={} e={}",
                self.n,
                self.start,
                self.v.unwrap_or(0),
                self.e
            ),
        }
    }
}

/// Either side of a match as the runner sees it.
pub trait Builder {
    fn propose(&mut self, board: &Board) -> Result<BoardEdge, String>;
    fn observe(&mut self, edge: BoardEdge, colour: Colour) -> Result<(), String>;
    /// Tag recorded next to the last proposed move.
    fn phase(&self) -> &str {
        ""
    }
}

pub trait Painter {
    /// Colour for `edge`, proposed in `round` (1-based, start edges excluded).
    fn colour(&mut self, board: &Board, edge: BoardEdge, round: usize, ruleset: Ruleset) -> Colour;
    /// Checked after every `colour` call; a resigned Painter's last answer
    /// is discarded and the match ends unfinished.
    fn resigned(&self) -> bool {
        false
    }
}

impl Builder for Engine {
    fn propose(&mut self, _board: &Board) -> Result<BoardEdge, String> {
        self.next_move().map_err(|e| e.to_string())
    }

    fn observe(&mut self, edge: BoardEdge, colour: Colour) -> Result<(), String> {
        Engine::observe(self, edge, colour).map_err(|e| e.to_string())
    }

    fn phase(&self) -> &str {
        Engine::phase(self)
    }
}

/// Replays a solved book from one of its starts; the board must fit the
/// bit-matrix board.
pub struct BookBuilder {
    index: Arc<BookIndex>,
    cursor: BookCursor,
}

impl BookBuilder {
    pub fn new(index: Arc<BookIndex>) -> Self {
        BookBuilder {
            index,
            cursor: BookCursor::new(),
        }
    }
}

impl Builder for BookBuilder {
    fn propose(&mut self, board: &Board) -> Result<BoardEdge, String> {
        let g = board
            .to_graph()
            .ok_or("position does not fit the book board")?;
        let (a, b) = self
            .cursor
            .next_move(&self.index, &g)
            .ok_or("position not found in book")?;
        Ok((a as Vertex, b as Vertex))
    }

    fn observe(&mut self, _edge: BoardEdge, _colour: Colour) -> Result<(), String> {
        Ok(())
    }

    fn phase(&self) -> &str {
        "book"
    }
}

fn red_allowed(board: &Board, (a, b): BoardEdge, ruleset: Ruleset) -> bool {
    ruleset == Ruleset::Rrc || !board.closes_red_c4(a, b)
}

/// Red whenever allowed.
#[derive(Clone, Copy, Debug, Default)]
pub struct AllRed;

impl Painter for AllRed {
    fn colour(
        &mut self,
        board: &Board,
        edge: BoardEdge,
        _round: usize,
        ruleset: Ruleset,
    ) -> Colour {
        if red_allowed(board, edge, ruleset) {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// Blue in round `t` and red otherwise, whenever allowed.
#[derive(Clone, Copy, Debug)]
pub struct FirstBlueAt(pub usize);

impl Painter for FirstBlueAt {
    fn colour(&mut self, board: &Board, edge: BoardEdge, round: usize, ruleset: Ruleset) -> Colour {
        if round != self.0 && red_allowed(board, edge, ruleset) {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// Fair coin; a forbidden red becomes blue.
#[derive(Clone, Debug)]
pub struct UniformRandom {
    rng: ChaCha8Rng,
}

impl UniformRandom {
    pub fn new(seed: u64) -> Self {
        UniformRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Painter for UniformRandom {
    fn colour(
        &mut self,
        board: &Board,
        edge: BoardEdge,
        _round: usize,
        ruleset: Ruleset,
    ) -> Colour {
        if self.rng.gen_bool(0.5) && red_allowed(board, edge, ruleset) {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// Exact Painter for small bounded games: picks a colour after which Builder
/// has no winning strategy, preferring red.
pub struct SolverOptimal {
    solver: Solver<'static>,
}

impl SolverOptimal {
    pub fn new(spec: &MatchSpec) -> Self {
        SolverOptimal {
            solver: Solver::new(spec.game_spec(), None, SolveOptions::default()),
        }
    }
}

impl Painter for SolverOptimal {
    fn colour(
        &mut self,
        board: &Board,
        edge: BoardEdge,
        _round: usize,
        ruleset: Ruleset,
    ) -> Colour {
        let red_ok = red_allowed(board, edge, ruleset);
        let Some(g) = board.to_graph() else {
            return if red_ok { Colour::Red } else { Colour::Blue };
        };
        let v = g.used_vertices().max(edge.0.max(edge.1) as usize + 1);
        let (a, b) = (edge.0 as u8, edge.1 as u8);
        let n = self.solver.spec().n;
        if red_ok && !board.closes_red_c4(edge.0, edge.1) {
            let mut red = g;
            red.add_unchecked(a, b, Colour::Red);
            if !self.solver.solve_builder(&red, v) {
                return Colour::Red;
            }
        }
        let mut blue = g;
        blue.add_unchecked(a, b, Colour::Blue);
        let blue_wins =
            blue.blue_count() == n - 1 && crate::graph::blue_is_target_path(blue.blue(), n);
        if !blue_wins && !self.solver.solve_builder(&blue, v) {
            return Colour::Blue;
        }
        if red_ok {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// Painter policies by name, for sweeps and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    AllRed,
    FirstBlueAt(usize),
    UniformRandom(u64),
    SolverOptimal,
}

impl Policy {
    pub fn painter(self, spec: &MatchSpec) -> Box<dyn Painter> {
        match self {
            Policy::AllRed => Box::new(AllRed),
            Policy::FirstBlueAt(t) => Box::new(FirstBlueAt(t)),
            Policy::UniformRandom(s) => Box::new(UniformRandom::new(s)),
            Policy::SolverOptimal => Box::new(SolverOptimal::new(spec)),
        }
    }

    /// allRed, firstBlueAt(t) for every round but the last, and `seeds`
    /// random Painters.
    pub fn sweep(rounds: usize, seeds: std::ops::Range<u64>) -> Vec<Policy> {
        std::iter::once(Policy::AllRed)
            .chain((1..rounds).map(Policy::FirstBlueAt))
            .chain(seeds.map(Policy::UniformRandom))
            .collect()
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::AllRed => write!(f, "all-red"),
            Policy::FirstBlueAt(t) => write!(f, "first-blue-at:{t}"),
            Policy::UniformRandom(s) => write!(f, "random:{s}"),
            Policy::SolverOptimal => write!(f, "optimal"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |what: &str| {
            arg.parse::<u64>()
                .map_err(|_| format!("policy `{name}` needs {what}, e.g. `{name}:3`"))
        };
        Ok(match name {
            "all-red" => Policy::AllRed,
            "first-blue-at" => Policy::FirstBlueAt(num("a round")? as usize),
            "random" => Policy::UniformRandom(num("a seed")?),
            "optimal" => Policy::SolverOptimal,
            _ => return Err(format!("unknown policy `{s}`")),
        })
    }
}

/// How a match ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    BluePath,
    RedC4,
    BudgetExhausted,
    IllegalMove(String),
    IllegalColour(String),
    BuilderFailed(String),
    /// Painter left before the game was decided.
    Abandoned,
}

impl Outcome {
    pub fn builder_won(&self) -> bool {
        matches!(self, Outcome::BluePath | Outcome::RedC4)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::BluePath => write!(f, "blue-path"),
            Outcome::RedC4 => write!(f, "red-c4"),
            Outcome::BudgetExhausted => write!(f, "budget"),
            Outcome::IllegalMove(d) => write!(f, "illegal-move {d}"),
            Outcome::IllegalColour(d) => write!(f, "illegal-colour {d}"),
            Outcome::BuilderFailed(d) => write!(f, "builder-failed {d}"),
            Outcome::Abandoned => write!(f, "abandoned"),
        }
    }
}

impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, rest) = s.split_once(' ').unwrap_or((s, ""));
        let rest = rest.to_string();
        Ok(match head {
            "blue-path" => Outcome::BluePath,
            "red-c4" => Outcome::RedC4,
            "budget" => Outcome::BudgetExhausted,
            "illegal-move" => Outcome::IllegalMove(rest),
            "illegal-colour" => Outcome::IllegalColour(rest),
            "builder-failed" => Outcome::BuilderFailed(rest),
            "abandoned" => Outcome::Abandoned,
            _ => return Err(format!("unknown outcome `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub edge: BoardEdge,
    pub colour: Colour,
    pub phase: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub spec: MatchSpec,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    /// The final board.
    pub fn board(&self) -> Board {
        let mut b = start_board(self.spec.start);
        for r in &self.rounds {
            let _ = b.add(r.edge, r.colour);
        }
        b
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.spec);
        for (i, r) in self.rounds.iter().enumerate() {
            s += &format!("{} {}-{} {}", i + 1, r.edge.0, r.edge.1, r.colour.letter());
            if !r.phase.is_empty() {
                s += &format!(" {}", r.phase);
            }
            s.push('\n');
        }
        s += &format!("# outcome {} rounds={}\n", self.outcome, self.rounds.len());
        s
    }

    pub fn parse(text: &str) -> Result<Transcript, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or("missing header line")?;
        let spec = parse_header(header)?;
        let mut rounds = Vec::new();
        let mut outcome = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("# outcome ") {
                let (o, _) = rest
                    .rsplit_once(" rounds=")
                    .ok_or("outcome line lacks rounds=")?;
                outcome = Some(o.parse()?);
                break;
            }
            let mut it = line.split_whitespace();
            let idx: usize = it
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| format!("bad round line `{line}`"))?;
            if idx != rounds.len() + 1 {
                return Err(format!("round {idx} out of sequence"));
            }
            let edge = it
                .next()
                .and_then(|e| e.split_once('-'))
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| format!("bad edge in `{line}`"))?;
            let colour = match it.next() {
                Some("r") => Colour::Red,
                Some("b") => Colour::Blue,
                _ => return Err(format!("bad colour in `{line}`")),
            };
            let phase = it.next().unwrap_or("").to_string();
            rounds.push(Round {
                edge,
                colour,
                phase,
            });
        }
        Ok(Transcript {
            spec,
            rounds,
            outcome: outcome.ok_or("missing outcome line")?,
        })
    }

    /// Replays the recorded moves through the runner's checks and returns the
    /// outcome they produce.
    pub fn replay(&self) -> Outcome {
        let moves: Vec<_> = self.rounds.iter().map(|r| (r.edge, r.colour)).collect();
        let mut script = Scripted { moves, at: 0 };
        let mut painter = script.clone();
        let t = run_match(&mut script, &mut painter, &self.spec);
        let same_moves = t.rounds.len() == self.rounds.len()
            && t.rounds
                .iter()
                .zip(&self.rounds)
                .all(|(a, b)| (a.edge, a.colour) == (b.edge, b.colour));
        match (&t.outcome, &self.outcome) {
            (Outcome::BuilderFailed(_), Outcome::Abandoned) if same_moves => Outcome::Abandoned,
            _ => t.outcome,
        }
    }
}

fn parse_header(h: &str) -> Result<MatchSpec, String> {
    let mut it = h.split_whitespace();
    let ruleset = match it.next() {
        Some("RR") => Ruleset::Rr,
        Some("RRC") => Ruleset::Rrc,
        _ => return Err(format!("bad header `{h}`")),
    };
    let (mut n, mut start, mut e, mut v) = (None, StartTag::Empty, None, None);
    for kv in it {
        let (k, val) = kv
            .split_once('=')
            .ok_or_else(|| format!("bad field `{kv}`"))?;
        let num = || {
            val.parse::<usize>()
                .map_err(|_| format!("bad number in `{kv}`"))
        };
        match k {
            "n" => n = Some(num()?),
            "e" => e = Some(num()?),
            "v" => v = Some(num()?),
            "start" => start = val.parse().map_err(|e| format!("{e}"))?,
            _ => return Err(format!("unknown field `{k}`")),
        }
    }
    let n = n.ok_or("header lacks n=")?;
    if n < 2 {
        return Err("n must be at least 2".into());
    }
    Ok(MatchSpec {
        n,
        start,
        ruleset,
        e: e.unwrap_or(2 * n - 2),
        v: if ruleset == Ruleset::Rrc {
            Some(v.ok_or("RRC header lacks v=")?)
        } else {
            None
        },
    })
}

/// Plays back fixed moves on both sides.
#[derive(Clone)]
struct Scripted {
    moves: Vec<(BoardEdge, Colour)>,
    at: usize,
}

impl Builder for Scripted {
    fn propose(&mut self, _board: &Board) -> Result<BoardEdge, String> {
        self.moves
            .get(self.at)
            .map(|m| m.0)
            .ok_or_else(|| "transcript ended".to_string())
    }

    fn observe(&mut self, _edge: BoardEdge, _colour: Colour) -> Result<(), String> {
        self.at += 1;
        Ok(())
    }
}

impl Painter for Scripted {
    fn colour(
        &mut self,
        _board: &Board,
        _edge: BoardEdge,
        _round: usize,
        _ruleset: Ruleset,
    ) -> Colour {
        self.at += 1;
        self.moves[self.at - 1].1
    }
}

/// The start position on vertices `0..`.
pub fn start_board(start: StartTag) -> Board {
    let (red, blue) = start_edges(start);
    Board::from_edges(&red, &blue).expect("named starts are simple graphs")
}

/// Plays `builder` against `painter` until the game is decided, checking
/// both sides on every round.
pub fn run_match(
    builder: &mut dyn Builder,
    painter: &mut dyn Painter,
    spec: &MatchSpec,
) -> Transcript {
    let mut board = start_board(spec.start);
    let game = spec.game_spec();
    let mut rounds = Vec::new();
    let finish = |rounds, outcome| Transcript {
        spec: spec.clone(),
        rounds,
        outcome,
    };
    while board.edge_count() < spec.e {
        let edge = match builder.propose(&board) {
            Ok(e) => e,
            Err(d) => return finish(rounds, Outcome::BuilderFailed(d)),
        };
        if let Err(err) = board.check_move(edge) {
            return finish(
                rounds,
                Outcome::IllegalMove(format!("{}-{}: {err}", edge.0, edge.1)),
            );
        }
        if spec.ruleset == Ruleset::Rrc {
            let legal = board.to_graph().is_some_and(|g| {
                edge.0 < 16
                    && edge.1 < 16
                    && is_legal_builder_move(&g, &game, (edge.0 as u8, edge.1 as u8))
            });
            if !legal {
                return finish(
                    rounds,
                    Outcome::IllegalMove(format!(
                        "{}-{}: breaks the bounded rules",
                        edge.0, edge.1
                    )),
                );
            }
        }
        let phase = builder.phase().to_string();
        let colour = painter.colour(&board, edge, rounds.len() + 1, spec.ruleset);
        if painter.resigned() {
            return finish(rounds, Outcome::Abandoned);
        }
        let closes = board.closes_red_c4(edge.0, edge.1);
        if colour == Colour::Red && closes && spec.ruleset == Ruleset::Rr {
            return finish(
                rounds,
                Outcome::IllegalColour(format!("red {}-{} closes a C4", edge.0, edge.1)),
            );
        }
        board.add(edge, colour).expect("move was checked");
        rounds.push(Round {
            edge: ordered(edge),
            colour,
            phase,
        });
        if colour == Colour::Red && closes {
            return finish(rounds, Outcome::RedC4);
        }
        if colour == Colour::Blue && board.blue_is_path(spec.n) {
            return finish(rounds, Outcome::BluePath);
        }
        if let Err(d) = builder.observe(edge, colour) {
            return finish(rounds, Outcome::BuilderFailed(d));
        }
    }
    finish(rounds, Outcome::BudgetExhausted)
}

/// Engine against `policy` in `RR(C4, P_n, start)`.
pub fn engine_match(
    n: usize,
    start: StartTag,
    policy: Policy,
    books: &Arc<BaseBooks>,
) -> Transcript {
    let spec = MatchSpec::rr(n, start);
    let mut painter = policy.painter(&spec);
    match Engine::new(n, start, books.clone()) {
        Ok(mut engine) => run_match(&mut engine, painter.as_mut(), &spec),
        Err(e) => Transcript {
            spec,
            rounds: Vec::new(),
            outcome: Outcome::BuilderFailed(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_respect_forced_edges() {
        let b = Board::from_edges(&[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        for p in [
            Policy::AllRed,
            Policy::FirstBlueAt(9),
            Policy::UniformRandom(3),
        ] {
            let spec = MatchSpec::rr(5, StartTag::Empty);
            let mut painter = p.painter(&spec);
            for round in 1..20 {
                assert_eq!(painter.colour(&b, (0, 3), round, Ruleset::Rr), Colour::Blue);
            }
        }
        assert_eq!(AllRed.colour(&b, (0, 3), 1, Ruleset::Rrc), Colour::Red);
        assert_eq!(
            FirstBlueAt(2).colour(&b, (0, 4), 2, Ruleset::Rr),
            Colour::Blue
        );
        assert_eq!(
            FirstBlueAt(2).colour(&b, (0, 4), 3, Ruleset::Rr),
            Colour::Red
        );
    }

    #[test]
    fn policy_names_round_trip() {
        for p in [
            Policy::AllRed,
            Policy::FirstBlueAt(7),
            Policy::UniformRandom(12),
            Policy::SolverOptimal,
        ] {
            assert_eq!(p.to_string().parse::<Policy>(), Ok(p));
        }
        assert!("random".parse::<Policy>().is_err());
        assert!("blue".parse::<Policy>().is_err());
    }

    #[test]
    fn illegal_red_is_caught() {
        struct Stubborn;
        impl Painter for Stubborn {
            fn colour(&mut self, _: &Board, _: BoardEdge, _: usize, _: Ruleset) -> Colour {
                Colour::Red
            }
        }
        let moves = vec![
            ((0, 1), Colour::Red),
            ((1, 2), Colour::Red),
            ((2, 3), Colour::Red),
            ((3, 0), Colour::Red),
        ];
        let spec = MatchSpec::rr(6, StartTag::Empty);
        let mut b = Scripted { moves, at: 0 };
        let t = run_match(&mut b, &mut Stubborn, &spec);
        assert!(
            matches!(t.outcome, Outcome::IllegalColour(_)),
            "{:?}",
            t.outcome
        );
        assert_eq!(t.round_count(), 3);
        let rrc = MatchSpec::rrc(6, 8, 10, StartTag::Empty);
        b.at = 0;
        let t = run_match(&mut b, &mut Stubborn, &rrc);
        assert_eq!(t.outcome, Outcome::RedC4);
    }

    #[test]
    fn illegal_builder_move_is_caught() {
        let moves = vec![((0, 1), Colour::Blue), ((5, 9), Colour::Blue)];
        let mut b = Scripted { moves, at: 0 };
        let t = run_match(&mut b, &mut AllRed, &MatchSpec::rr(6, StartTag::Empty));
        assert!(
            matches!(t.outcome, Outcome::IllegalMove(_)),
            "{:?}",
            t.outcome
        );
        let moves = vec![
            ((0, 1), Colour::Blue),
            ((1, 2), Colour::Blue),
            ((0, 2), Colour::Blue),
        ];
        let mut b = Scripted { moves, at: 0 };
        let mut p = b.clone();
        let t = run_match(&mut b, &mut p, &MatchSpec::rrc(6, 8, 10, StartTag::Empty));
        assert!(
            matches!(t.outcome, Outcome::IllegalMove(_)),
            "{:?}",
            t.outcome
        );
    }

    #[test]
    fn transcript_round_trips_and_replays() {
        let moves = vec![
            ((0, 1), Colour::Red),
            ((1, 2), Colour::Blue),
            ((2, 3), Colour::Blue),
            ((3, 4), Colour::Blue),
        ];
        let spec = MatchSpec::rr(4, StartTag::Empty);
        let mut b = Scripted { moves, at: 0 };
        let mut p = b.clone();
        let t = run_match(&mut b, &mut p, &spec);
        assert_eq!(t.outcome, Outcome::BluePath);
        assert_eq!(t.round_count(), 4);
        let text = t.to_text();
        assert!(text.starts_with("# RR n=4 start=empty e=6\n1 0-1 r\n"));
        let back = Transcript::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.replay(), t.outcome);
        assert!(back.board().blue_is_path(4));
    }

    #[test]
    fn resigning_painter_abandons() {
        struct Quitter(usize);
        impl Painter for Quitter {
            fn colour(&mut self, _: &Board, _: BoardEdge, _: usize, _: Ruleset) -> Colour {
                self.0 += 1;
                Colour::Red
            }
            fn resigned(&self) -> bool {
                self.0 > 2
            }
        }
        let moves = vec![
            ((0, 1), Colour::Red),
            ((1, 2), Colour::Red),
            ((2, 3), Colour::Red),
        ];
        let spec = MatchSpec::rr(5, StartTag::Empty);
        let t = run_match(&mut Scripted { moves, at: 0 }, &mut Quitter(0), &spec);
        assert_eq!(t.outcome, Outcome::Abandoned);
        assert_eq!(t.round_count(), 2);
        let back = Transcript::parse(&t.to_text()).unwrap();
        assert_eq!(back.replay(), Outcome::Abandoned);
    }

    #[test]
    fn transcript_parse_errors() {
        assert!(Transcript::parse("").is_err());
        assert!(Transcript::parse("# RR n=4\n1 0-1 r\n").is_err());
        assert!(Transcript::parse("# RR n=4\n2 0-1 r\n# outcome budget rounds=1\n").is_err());
        assert!(Transcript::parse("# RRC n=4 e=6\n# outcome budget rounds=0\n").is_err());
        assert!(Transcript::parse("# RR n=4\n1 0-1 x\n# outcome budget rounds=1\n").is_err());
        let t = Transcript::parse(
            "# RRC n=3 start=b v=4 e=6\n1 1-2 b book\n# outcome blue-path rounds=1\n",
        )
        .unwrap();
        assert_eq!(t.spec, MatchSpec::rrc(3, 4, 6, StartTag::B));
        assert_eq!(t.replay(), Outcome::BluePath);
    }

    #[test]
    fn optimal_painter_survives_small_losing_game() {
        // Builder cannot force a blue P4 in three rounds from nothing.
        let spec = MatchSpec::rrc(4, 5, 3, StartTag::Empty);
        let mut solver = Solver::new(spec.game_spec(), None, SolveOptions::default());
        assert!(!solver.solve().unwrap());
        let moves = vec![
            ((0, 1), Colour::Blue),
            ((1, 2), Colour::Blue),
            ((2, 3), Colour::Blue),
        ];
        let mut b = Scripted { moves, at: 0 };
        let t = run_match(&mut b, &mut SolverOptimal::new(&spec), &spec);
        assert_eq!(t.outcome, Outcome::BudgetExhausted);
    }
}
