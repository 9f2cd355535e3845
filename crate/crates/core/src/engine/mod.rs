//! Constructive Builder for `RR(C4, P_n, H)` with `H` empty or one of the
//! short named starts.
//!
//! The engine keeps a *view*: the board of the game it is currently playing.
//! Contracting a blue path hides its interior vertices and every edge at
//! them, and replaces the path by one blue edge between its ends; the view
//! is then a smaller game of the same kind with a named start. Small games
//! are played from solved books ([`BaseBooks`]), larger ones by the scripted
//! cases and stage logic.
//!
//! ```no_run
//! use std::sync::Arc;
//! use c4pn::engine::{BaseBooks, Engine};
//! use c4pn::graph::Colour;
//! use c4pn::rules::StartTag;
//!
//! let books = Arc::new(BaseBooks::load_or_solve("books".as_ref(), 7..=13, false).unwrap());
//! let mut engine = Engine::new(20, StartTag::Empty, books).unwrap();
//! let (a, b) = engine.next_move().unwrap();
//! engine.observe((a, b), Colour::Red).unwrap();
//! ```

pub mod base;
pub mod butterfly;
pub mod hamilton;
pub mod script;
pub mod stages;

use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashSet;

pub use base::{BaseBooks, BookPlayer, BASE_ORDERS};
pub use hamilton::{check_hamilton_path, hamilton_path, HamiltonError, Slot};
pub use stages::EndgameCase;

use crate::board::{ordered, Board, BoardError, Vertex};
use crate::graph::Colour;
use crate::rules::StartTag;

/// Smallest path order the scripted strategy plays; below it books take over.
pub const MIN_SCRIPTED_ORDER: usize = 14;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("edge {0}-{1} would not close a red C4")]
    NotForced(Vertex, Vertex),
    #[error("edge {0}-{1} is already coloured")]
    Coloured(Vertex, Vertex),
    #[error("contraction of {path:?} rejected: {reason}")]
    Contraction { path: Vec<Vertex>, reason: String },
    #[error("position is not the {tag} start: {detail}")]
    Residual { tag: StartTag, detail: String },
    #[error("no base book for path order {0}")]
    NoBook(usize),
    #[error("position not found in the base book for path order {0}")]
    BookMiss(usize),
    #[error(transparent)]
    Hamilton(#[from] HamiltonError),
    #[error("{0}")]
    Hypothesis(String),
    #[error("script: {0}")]
    Script(String),
    #[error("strategy has no further move")]
    NoMove,
    #[error("round budget exhausted")]
    BudgetExhausted,
    #[error("a proposed move still awaits its colour")]
    Awaiting,
    #[error("no move awaits a colour")]
    NotAwaiting,
    #[error("observed {got:?}, proposed {want:?}")]
    UnexpectedMove {
        got: (Vertex, Vertex),
        want: Option<(Vertex, Vertex)>,
    },
    #[error(transparent)]
    Board(#[from] BoardError),
}

/// One contraction, for auditing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionRecord {
    /// Script program or stage handler that asked for it.
    pub branch: String,
    pub path: Vec<Vertex>,
    /// Number of interior vertices.
    pub k: usize,
    /// Edges at the interior, plus one if the ends are adjacent.
    pub m: usize,
    pub expected_m: usize,
    /// Start of the game left after the contraction (filled in once known).
    pub residual: Option<StartTag>,
    pub n_before: usize,
    pub n_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Force(Vertex, Vertex),
    Contract {
        path: Vec<Vertex>,
        m: usize,
        branch: String,
    },
    Residual {
        tag: StartTag,
        order: Vec<Vertex>,
    },
}

pub(crate) enum Decision {
    Select((Vertex, Vertex), &'static str),
    Ops(Vec<Op>),
    Switch(Mode),
}

#[derive(Clone)]
pub(crate) enum Mode {
    Program(script::Cursor),
    Stages(Box<stages::Stages>),
    Book(BookPlayer),
    Finished,
}

#[derive(Clone, Copy, Debug)]
struct Pending {
    edge: (Vertex, Vertex),
    forced: bool,
}

/// Builder state for one game.
#[derive(Clone)]
pub struct Engine {
    books: Arc<BaseBooks>,
    n: usize,
    view: Board,
    next_fresh: Vertex,
    queue: VecDeque<Op>,
    mode: Mode,
    pending: Option<Pending>,
    budget_left: usize,
    outer_left: usize,
    records: Vec<ContractionRecord>,
    phase: &'static str,
    forced_red: bool,
    endgames: Vec<EndgameCase>,
}

impl Engine {
    /// Builder for `RR(C4, P_n, start)`, with the start drawn on vertices
    /// `0..` as in [`StartTag::edges`].
    pub fn new(n: usize, start: StartTag, books: Arc<BaseBooks>) -> Result<Engine, EngineError> {
        if start == StartTag::Explicit || n < 2 {
            return Err(EngineError::Hypothesis(format!(
                "unsupported game: n={n}, start {start}"
            )));
        }
        let (red, blue) = start_edges(start);
        let view = Board::from_edges(&red, &blue)?;
        let budget = (2 * n - 2)
            .checked_sub(view.edge_count())
            .ok_or(EngineError::BudgetExhausted)?;
        let mut e = Engine {
            books,
            n,
            next_fresh: view.vertex_count() as Vertex,
            view,
            queue: VecDeque::new(),
            mode: Mode::Finished,
            pending: None,
            budget_left: budget,
            outer_left: budget,
            records: Vec::new(),
            phase: "start",
            forced_red: false,
            endgames: Vec::new(),
        };
        let order: Vec<Vertex> = (0..e.view.vertex_count() as Vertex).collect();
        e.enter_game(start, &order)?;
        Ok(e)
    }

    /// Path order of the game currently being played in the view.
    pub fn current_order(&self) -> usize {
        self.n
    }

    /// Tag of the phase that produced the last proposed move.
    pub fn phase(&self) -> &'static str {
        self.phase
    }

    pub fn records(&self) -> &[ContractionRecord] {
        &self.records
    }

    /// Endgame cases entered so far.
    pub fn endgames(&self) -> &[EndgameCase] {
        &self.endgames
    }

    /// True once Painter reddened a forced edge (possible only when red C4s
    /// are allowed); Builder has then already won.
    pub fn won_by_red_c4(&self) -> bool {
        self.forced_red
    }

    /// True once play has been handed to a base book.
    pub fn in_book(&self) -> bool {
        matches!(self.mode, Mode::Book(_))
    }

    /// The current view, i.e. the board of the game being played.
    pub fn view(&self) -> &Board {
        &self.view
    }

    fn enter_game(&mut self, tag: StartTag, order: &[Vertex]) -> Result<(), EngineError> {
        let n = self.n;
        self.mode = if n < MIN_SCRIPTED_ORDER {
            if self.books.get(n).is_none() {
                return Err(EngineError::NoBook(n));
            }
            Mode::Book(BookPlayer::new(n, order))
        } else {
            // Start vertices in order, then the label each has in its program.
            let (program, labels): (&str, &[usize]) = match tag {
                StartTag::Empty => ("stage1", &[]),
                StartTag::B => ("case1", &[0, 1]),
                StartTag::Br => ("case2", &[2, 0, 1]),
                StartTag::Brr => ("case2r", &[2, 0, 1, 3]),
                StartTag::Brb => ("case2b", &[2, 0, 1, 3]),
                StartTag::Brrb => ("case2rb", &[2, 0, 1, 3, 4]),
                StartTag::Explicit => unreachable!("rejected on entry"),
            };
            let mut bound = vec![0; labels.len()];
            for (i, &l) in labels.iter().enumerate() {
                bound[l] = order[i];
            }
            Mode::Program(script::Cursor::new(program, &bound))
        };
        Ok(())
    }

    /// The next edge Builder selects.
    pub fn next_move(&mut self) -> Result<(Vertex, Vertex), EngineError> {
        if self.pending.is_some() {
            return Err(EngineError::Awaiting);
        }
        if self.budget_left == 0 || self.outer_left == 0 {
            return Err(EngineError::BudgetExhausted);
        }
        loop {
            if let Some(op) = self.queue.pop_front() {
                match op {
                    Op::Force(a, b) => {
                        if self.view.colour_of(a, b).is_some() {
                            return Err(EngineError::Coloured(a, b));
                        }
                        if !self.view.closes_red_c4(a, b) {
                            return Err(EngineError::NotForced(a, b));
                        }
                        self.pending = Some(Pending {
                            edge: (a, b),
                            forced: true,
                        });
                        self.phase = "force";
                        return Ok((a, b));
                    }
                    Op::Contract { path, m, branch } => self.contract(path, m, branch)?,
                    Op::Residual { tag, order } => self.residual(tag, &order)?,
                }
                continue;
            }
            let d = match &mut self.mode {
                Mode::Program(c) => c.decide(&self.view, self.next_fresh, self.n)?,
                Mode::Stages(s) => s.decide(&self.view, self.next_fresh)?,
                Mode::Book(p) => p.decide(&self.view, &self.books, self.next_fresh)?,
                Mode::Finished => return Err(EngineError::NoMove),
            };
            match d {
                Decision::Select((a, b), phase) => {
                    if self.view.colour_of(a, b).is_some() {
                        return Err(EngineError::Coloured(a, b));
                    }
                    self.pending = Some(Pending {
                        edge: (a, b),
                        forced: false,
                    });
                    self.phase = phase;
                    return Ok((a, b));
                }
                Decision::Ops(ops) => self.queue.extend(ops),
                Decision::Switch(m) => self.mode = m,
            }
        }
    }

    /// Painter coloured the last proposed edge.
    pub fn observe(&mut self, edge: (Vertex, Vertex), colour: Colour) -> Result<(), EngineError> {
        let p = self.pending.take().ok_or(EngineError::NotAwaiting)?;
        if ordered(edge) != ordered(p.edge) {
            self.pending = Some(p);
            return Err(EngineError::UnexpectedMove {
                got: edge,
                want: Some(p.edge),
            });
        }
        self.view.add(edge, colour)?;
        self.next_fresh = self.next_fresh.max(edge.0.max(edge.1) + 1);
        self.budget_left -= 1;
        self.outer_left -= 1;
        if p.forced {
            if colour == Colour::Red {
                self.forced_red = true;
                self.queue.clear();
                self.mode = Mode::Finished;
            }
            return Ok(());
        }
        match &mut self.mode {
            Mode::Program(c) => c.observe(colour),
            Mode::Stages(s) => {
                s.observe(edge, colour, &self.view)?;
                if let Some(c) = s.endgame_case() {
                    if self.endgames.last() != Some(&c) || self.endgames.is_empty() {
                        self.endgames.push(c);
                    }
                }
                Ok(())
            }
            Mode::Book(_) => Ok(()),
            Mode::Finished => Err(EngineError::NotAwaiting),
        }
    }

    fn contract(
        &mut self,
        path: Vec<Vertex>,
        expected_m: usize,
        branch: String,
    ) -> Result<(), EngineError> {
        let bad = |reason: String| EngineError::Contraction {
            path: path.clone(),
            reason,
        };
        if path.len() < 3 {
            return Err(bad("path has no interior".into()));
        }
        let k = path.len() - 2;
        let interior: FxHashSet<Vertex> = path[1..=k].iter().copied().collect();
        if interior.len() != k
            || interior.contains(&path[0])
            || interior.contains(&path[k + 1])
            || path[0] == path[k + 1]
        {
            return Err(bad("path repeats a vertex".into()));
        }
        for w in path.windows(2) {
            if self.view.colour_of(w[0], w[1]) != Some(Colour::Blue) {
                return Err(bad(format!("{}-{} is not blue", w[0], w[1])));
            }
        }
        let (s, t) = (path[0], path[k + 1]);
        let mut at_interior = 0;
        let mut blue_at_interior = 0;
        let mut keep_red = Vec::new();
        let mut keep_blue = Vec::new();
        for ((a, b), c) in self.view.edges() {
            if interior.contains(&a) || interior.contains(&b) {
                at_interior += 1;
                blue_at_interior += (c == Colour::Blue) as usize;
            } else if ordered((a, b)) != ordered((s, t)) {
                match c {
                    Colour::Red => keep_red.push((a, b)),
                    Colour::Blue => keep_blue.push((a, b)),
                }
            }
        }
        let ends = self.view.colour_of(s, t);
        if ends == Some(Colour::Blue) {
            return Err(bad("ends already joined by a blue edge".into()));
        }
        if blue_at_interior != k + 1 {
            return Err(bad(format!(
                "{blue_at_interior} blue edges at the interior, expected {}",
                k + 1
            )));
        }
        let m = at_interior + ends.is_some() as usize;
        self.records.push(ContractionRecord {
            branch,
            path: path.clone(),
            k,
            m,
            expected_m,
            residual: None,
            n_before: self.n,
            n_after: self.n - k,
        });
        if m > 2 * k + 1 {
            return Err(bad(format!("m={m} exceeds 2k+1={}", 2 * k + 1)));
        }
        if m != expected_m {
            return Err(bad(format!("m={m}, expected {expected_m}")));
        }
        keep_blue.push((s, t));
        self.view = Board::from_edges(&keep_red, &keep_blue)?;
        self.n -= k;
        Ok(())
    }

    fn residual(&mut self, tag: StartTag, order: &[Vertex]) -> Result<(), EngineError> {
        let (red, blue) = tag.edges();
        let want: FxHashSet<((Vertex, Vertex), Colour)> = red
            .iter()
            .map(|&e| (e, Colour::Red))
            .chain(blue.iter().map(|&e| (e, Colour::Blue)))
            .map(|((a, b), c)| (ordered((order[a as usize], order[b as usize])), c))
            .collect();
        let have: FxHashSet<((Vertex, Vertex), Colour)> =
            self.view.edges().map(|(e, c)| (ordered(e), c)).collect();
        if want != have {
            let mut extra: Vec<_> = have.difference(&want).collect();
            let mut missing: Vec<_> = want.difference(&have).collect();
            extra.sort();
            missing.sort();
            return Err(EngineError::Residual {
                tag,
                detail: format!("extra {extra:?}, missing {missing:?}"),
            });
        }
        let budget = (2 * self.n - 2)
            .checked_sub(want.len())
            .ok_or(EngineError::BudgetExhausted)?;
        if budget > self.outer_left {
            return Err(EngineError::Residual {
                tag,
                detail: format!("needs {budget} rounds, {} left", self.outer_left),
            });
        }
        self.budget_left = budget;
        for r in self.records.iter_mut().rev() {
            if r.residual.is_some() {
                break;
            }
            r.residual = Some(tag);
        }
        self.enter_game(tag, order)
    }
}

/// Red and blue edges of a named start on vertices `0..`.
pub fn start_edges(tag: StartTag) -> (Vec<(Vertex, Vertex)>, Vec<(Vertex, Vertex)>) {
    let (r, b) = tag.edges();
    let wide = |e: &[(u8, u8)]| e.iter().map(|&(a, b)| (a as Vertex, b as Vertex)).collect();
    (wide(r), wide(b))
}
