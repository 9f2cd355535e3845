//! Browser bindings: paint against the Builder, solve small bounded games,
//! and draw the forced Hamiltonian paths.
//!
//! Every binding is a thin wrapper over a plain function so the logic can be
//! tested off the browser.

use std::sync::Arc;

use c4pn::board::{ordered, Board, BoardEdge};
use c4pn::book::{parse_book, verify_book, BookWriter};
use c4pn::config::SeriesGame;
use c4pn::engine::hamilton::adjacent;
use c4pn::engine::{hamilton_path, BaseBooks, Engine, Slot, BASE_ORDERS};
use c4pn::graph::Colour;
use c4pn::harness::{start_board, Builder, MatchSpec, Outcome, Round, Transcript};
use c4pn::rules::StartTag;
use c4pn::solver::{SolveOptions, Solver};
use wasm_bindgen::prelude::*;

/// Largest vertex cap the page solves on its own.
pub const MAX_PAGE_CAP: usize = 11;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// Solves every start of `game` and returns the book text.
pub fn solve_text(game: &SeriesGame) -> Result<String, String> {
    let mut solver = Solver::new(
        game.spec_for(&game.starts[0]),
        None,
        SolveOptions::default(),
    );
    let mut book = BookWriter::new();
    for start in &game.starts {
        let spec = game.spec_for(start);
        if start.max_vertex().is_some_and(|m| m as usize >= spec.v) {
            continue;
        }
        spec.validate().map_err(|e| e.to_string())?;
        solver.set_start(start.clone());
        let rc = solver.solve().map_err(|e| e.to_string())?;
        book.write_game(&mut solver, rc)
            .map_err(|e| e.to_string())?;
    }
    Ok(book.finish())
}

fn page_game(n: usize, v: usize, e: usize) -> Result<SeriesGame, String> {
    if n < 2 || v > MAX_PAGE_CAP {
        return Err(format!(
            "the page solves 2 <= n and v <= {MAX_PAGE_CAP}; use the command line for more"
        ));
    }
    Ok(SeriesGame::new(n, v, e))
}

/// Book of the bounded game `(n, v, e)` over all six named starts.
#[wasm_bindgen]
pub fn solve_book(n: usize, v: usize, e: usize) -> Result<String, JsError> {
    page_game(n, v, e).and_then(|g| solve_text(&g)).map_err(js)
}

/// Verifier report for `text` as a book of `(n, v, e)`.
#[wasm_bindgen]
pub fn verify_book_text(n: usize, v: usize, e: usize, text: &str) -> String {
    match parse_book(text) {
        Ok(book) => verify_book(&book, &SeriesGame::new(n, v, e)).to_string(),
        Err(err) => format!("rejected: {err}"),
    }
}

/// Base books the Builder plays from: orders 7 to 10 can be solved in the
/// page, larger ones are loaded from files.
#[wasm_bindgen]
#[derive(Default)]
pub struct BookStore {
    books: Arc<BaseBooks>,
}

impl BookStore {
    pub fn add_text(&mut self, n: usize, text: &str) -> Result<(), String> {
        if !BASE_ORDERS.contains(&n) {
            return Err(format!(
                "base books cover n = {}..={}",
                BASE_ORDERS.start(),
                BASE_ORDERS.end()
            ));
        }
        let book = parse_book(text).map_err(|e| e.to_string())?;
        Arc::make_mut(&mut self.books).add_book(n, &book);
        Ok(())
    }

    pub fn books(&self) -> Arc<BaseBooks> {
        self.books.clone()
    }
}

#[wasm_bindgen]
impl BookStore {
    #[wasm_bindgen(constructor)]
    pub fn new() -> BookStore {
        BookStore::default()
    }

    /// Solves the smallest missing order below `MAX_PAGE_CAP` and
    /// returns it, or 0 when there is none left.
    pub fn solve_next(&mut self) -> Result<usize, JsError> {
        let Some(n) = BASE_ORDERS.clone().find(|&n| self.books.get(n).is_none()) else {
            return Ok(0);
        };
        let text = page_game(n, n + 1, 2 * n - 2)
            .and_then(|g| solve_text(&g))
            .map_err(js)?;
        self.add_text(n, &text).map_err(js)?;
        Ok(n)
    }

    /// Adds a book file, e.g. `C4P13V14E24.txt` for `n = 13`.
    pub fn add_book(&mut self, n: usize, text: &str) -> Result<(), JsError> {
        self.add_text(n, text).map_err(js)
    }

    pub fn orders(&self) -> Vec<u32> {
        self.books.orders().map(|n| n as u32).collect()
    }

    /// Whether the Builder can play `P_n`: its own book below 14, every base
    /// book from 14 on.
    pub fn playable(&self, n: usize) -> bool {
        if n < *BASE_ORDERS.start() {
            false
        } else if BASE_ORDERS.contains(&n) {
            self.books.get(n).is_some()
        } else {
            BASE_ORDERS.clone().all(|k| self.books.get(k).is_some())
        }
    }
}

/// One game against the Builder, with the page as Painter.
#[wasm_bindgen]
pub struct Session {
    spec: MatchSpec,
    engine: Engine,
    board: Board,
    pending: Option<BoardEdge>,
    rounds: Vec<Round>,
    outcome: Option<Outcome>,
}

impl Session {
    pub fn start(n: usize, start: StartTag, books: Arc<BaseBooks>) -> Result<Session, String> {
        let engine = Engine::new(n, start, books).map_err(|e| e.to_string())?;
        let mut s = Session {
            spec: MatchSpec::rr(n, start),
            engine,
            board: start_board(start),
            pending: None,
            rounds: Vec::new(),
            outcome: None,
        };
        s.ask();
        Ok(s)
    }

    fn ask(&mut self) {
        if self.board.edge_count() >= self.spec.e {
            self.outcome = Some(Outcome::BudgetExhausted);
            return;
        }
        match self.engine.propose(&self.board) {
            Ok(edge) => match self.board.check_move(edge) {
                Ok(()) => self.pending = Some(edge),
                Err(e) => {
                    self.outcome = Some(Outcome::IllegalMove(format!("{}-{}: {e}", edge.0, edge.1)))
                }
            },
            Err(d) => self.outcome = Some(Outcome::BuilderFailed(d)),
        }
    }

    pub fn colour(&mut self, colour: Colour) -> Result<(), String> {
        let edge = self.pending.ok_or("the game is over")?;
        if colour == Colour::Red && self.board.closes_red_c4(edge.0, edge.1) {
            return Err(format!("red {}-{} would close a red C4", edge.0, edge.1));
        }
        let phase = self.engine.phase().to_string();
        self.board.add(edge, colour).map_err(|e| e.to_string())?;
        self.rounds.push(Round {
            edge: ordered(edge),
            colour,
            phase,
        });
        self.pending = None;
        if colour == Colour::Blue && self.board.blue_is_path(self.spec.n) {
            self.outcome = Some(Outcome::BluePath);
            return Ok(());
        }
        if let Err(d) = Builder::observe(&mut self.engine, edge, colour) {
            self.outcome = Some(Outcome::BuilderFailed(d));
            return Ok(());
        }
        self.ask();
        Ok(())
    }

    pub fn to_transcript(&self) -> Transcript {
        Transcript {
            spec: self.spec.clone(),
            rounds: self.rounds.clone(),
            outcome: self.outcome.clone().unwrap_or(Outcome::Abandoned),
        }
    }
}

#[wasm_bindgen]
impl Session {
    /// `start` is one of `empty`, `b`, `br`, `brr`, `brb`, `brrb`.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, start: &str, store: &BookStore) -> Result<Session, JsError> {
        let start: StartTag = start
            .parse()
            .map_err(|e: c4pn::rules::RulesError| js(e.to_string()))?;
        Session::start(n, start, store.books()).map_err(js)
    }

    /// The edge waiting for a colour as `[a, b]`, empty once the game is over.
    pub fn pending(&self) -> Vec<u32> {
        self.pending
            .map_or(Vec::new(), |(a, b)| vec![a as u32, b as u32])
    }

    /// Whether red is ruled out for the pending edge.
    pub fn forced(&self) -> bool {
        self.pending
            .is_some_and(|(a, b)| self.board.closes_red_c4(a, b))
    }

    pub fn paint(&mut self, blue: bool) -> Result<(), JsError> {
        self.colour(if blue { Colour::Blue } else { Colour::Red })
            .map_err(js)
    }

    /// Coloured edges as triples `a, b, c` with `c = 1` for blue.
    pub fn edges(&self) -> Vec<u32> {
        self.board
            .edges()
            .flat_map(|((a, b), c)| [a as u32, b as u32, (c == Colour::Blue) as u32])
            .collect()
    }

    pub fn vertices(&self) -> usize {
        self.board.vertex_count()
    }

    pub fn rounds_played(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds_total(&self) -> usize {
        self.spec.rounds()
    }

    pub fn phase(&self) -> String {
        self.engine.phase().to_string()
    }

    /// `blue-path`, `budget`, ... once decided.
    pub fn outcome(&self) -> Option<String> {
        self.outcome.as_ref().map(|o| o.to_string())
    }

    pub fn transcript(&self) -> String {
        self.to_transcript().to_text()
    }
}

/// `x1`, `y3`, `u2` and so on; pendants are numbered from 1.
pub fn parse_slot(s: &str) -> Result<Slot, String> {
    let bad = || format!("unknown vertex `{s}`");
    let s = s.trim();
    let index = |rest: &str| {
        rest.parse::<usize>()
            .ok()
            .filter(|&i| i >= 1)
            .map(|i| i - 1)
            .ok_or_else(bad)
    };
    match s.split_at(s.len().min(1)) {
        ("x", rest) => Ok(Slot::X(index(rest)?)),
        ("y", rest) => Ok(Slot::Y(index(rest)?)),
        ("u", "2") => Ok(Slot::U2),
        ("u", "3") => Ok(Slot::U3),
        ("u", "4") => Ok(Slot::U4),
        ("u", "5") => Ok(Slot::U5),
        _ => Err(bad()),
    }
}

pub fn slots_of(s: usize) -> Vec<Slot> {
    let mut v: Vec<Slot> = (0..s).map(Slot::X).chain((0..s).map(Slot::Y)).collect();
    v.extend([Slot::U2, Slot::U3, Slot::U4, Slot::U5]);
    v
}

/// Vertices of the forcing graph with `s` pendants per wing, each followed
/// by its part (`x1:0 ... u5:0`).
#[wasm_bindgen]
pub fn forcing_vertices(s: usize) -> String {
    slots_of(s)
        .iter()
        .map(|v| format!("{v}:{}", v.part()))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Edges of the forcing graph as `a-b` pairs.
#[wasm_bindgen]
pub fn forcing_edges(s: usize) -> String {
    let vs = slots_of(s);
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if adjacent(a, b) {
                out.push(format!("{a}-{b}"));
            }
        }
    }
    out.join(" ")
}

pub fn hamilton_text(s: usize, w1: &str, w2: &str) -> Result<String, String> {
    let path = hamilton_path(s, parse_slot(w1)?, parse_slot(w2)?).map_err(|e| e.to_string())?;
    Ok(path
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" "))
}

/// Hamiltonian path of the forcing graph from `w1` to `w2`.
#[wasm_bindgen]
pub fn hamilton(s: usize, w1: &str, w2: &str) -> Result<String, JsError> {
    hamilton_text(s, w1, w2).map_err(js)
}
