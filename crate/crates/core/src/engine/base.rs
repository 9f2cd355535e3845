//! Solved small games used where the inductive strategy bottoms out, and a
//! player that walks them on the live board.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rustc_hash::FxHashMap;

use super::{Decision, EngineError};
use crate::board::{Board, Vertex};
use crate::book::{parse_book, verify_book, BookCursor, BookIndex, StrategyBook};
use crate::config::SeriesGame;
use crate::graph::{ColouredGraph, MAX_VERTICES};
use crate::rules::{StartPosition, StartTag};
use crate::solver::{run_game_series, SeriesError, SolveOptions};

/// Path orders the engine hands over to books.
pub const BASE_ORDERS: RangeInclusive<usize> = 7..=13;

#[derive(Debug, thiserror::Error)]
pub enum BaseBookError {
    #[error(transparent)]
    Solve(#[from] SeriesError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Invalid { path: PathBuf, detail: String },
}

/// The base game for path order `n`: vertex cap `n+1`, budget `2n-2`, the
/// five nonempty named starts.
pub fn base_game(n: usize) -> SeriesGame {
    let mut g = SeriesGame::new(n, n + 1, 2 * n - 2);
    g.starts = StartTag::SERIES[1..]
        .iter()
        .map(|&t| StartPosition::named(t))
        .collect();
    g
}

/// Replay indexes of solved books, one per path order.
#[derive(Clone, Debug, Default)]
pub struct BaseBooks {
    books: BTreeMap<usize, BookIndex>,
}

impl BaseBooks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_book(&mut self, n: usize, book: &StrategyBook) {
        self.books.entry(n).or_default().add_book(book);
    }

    pub fn get(&self, n: usize) -> Option<&BookIndex> {
        self.books.get(&n)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.books.keys().copied()
    }

    /// Solves the base games for `orders` in sequence and returns the
    /// indexes along with the book texts.
    pub fn solve(
        orders: RangeInclusive<usize>,
    ) -> Result<(BaseBooks, Vec<(SeriesGame, String)>), BaseBookError> {
        let games: Vec<SeriesGame> = orders.map(base_game).collect();
        let results = run_game_series(&games, true, SolveOptions::default(), |g| {
            log::info!("base book n={} solved in {:.1?}", g.spec.n, g.elapsed);
        })?;
        let mut books = BaseBooks::new();
        let mut texts = Vec::new();
        for (game, r) in games.into_iter().zip(results) {
            if let Some(s) = r.starts.iter().find(|s| !s.rc) {
                return Err(BaseBookError::Invalid {
                    path: PathBuf::from(game.book_file_name()),
                    detail: format!("start {} is not a Builder win", s.start.tag),
                });
            }
            let parsed = parse_book(&r.book).map_err(|e| BaseBookError::Invalid {
                path: PathBuf::from(game.book_file_name()),
                detail: e.to_string(),
            })?;
            books.add_book(game.n, &parsed);
            texts.push((game, r.book));
        }
        Ok((books, texts))
    }

    /// Loads `C4P<n>V<n+1>E<2n-2>.txt` for every order from `dir`; if any is
    /// missing, solves all of them and writes the files. Loaded books are
    /// verified when `verify` is set.
    pub fn load_or_solve(
        dir: &Path,
        orders: RangeInclusive<usize>,
        verify: bool,
    ) -> Result<BaseBooks, BaseBookError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| BaseBookError::Io { path, source }
        };
        let paths: Vec<(usize, PathBuf)> = orders
            .clone()
            .map(|n| (n, dir.join(base_game(n).book_file_name())))
            .collect();
        if paths.iter().all(|(_, p)| p.exists()) {
            let mut books = BaseBooks::new();
            for (n, path) in &paths {
                let text = std::fs::read_to_string(path).map_err(io(path))?;
                let book = parse_book(&text).map_err(|e| BaseBookError::Invalid {
                    path: path.clone(),
                    detail: e.to_string(),
                })?;
                if verify {
                    let report = verify_book(&book, &base_game(*n));
                    if !report.accepted {
                        return Err(BaseBookError::Invalid {
                            path: path.clone(),
                            detail: report.detail,
                        });
                    }
                }
                books.add_book(*n, &book);
            }
            return Ok(books);
        }
        let (books, texts) = Self::solve(orders)?;
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        for ((_, path), (_, text)) in paths.iter().zip(&texts) {
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, text).map_err(io(&tmp))?;
            std::fs::rename(&tmp, path).map_err(io(path))?;
        }
        Ok(books)
    }
}

/// Plays a book on the board: board vertices are labelled in order of
/// appearance, starting with the start path.
#[derive(Clone, Debug)]
pub struct BookPlayer {
    n: usize,
    labels: Vec<Vertex>,
    lookup: FxHashMap<Vertex, u8>,
    cursor: BookCursor,
}

impl BookPlayer {
    pub fn new(n: usize, order: &[Vertex]) -> BookPlayer {
        let mut p = BookPlayer {
            n,
            labels: Vec::new(),
            lookup: FxHashMap::default(),
            cursor: BookCursor::new(),
        };
        for &v in order {
            p.push(v);
        }
        p
    }

    fn push(&mut self, v: Vertex) {
        self.lookup.insert(v, self.labels.len() as u8);
        self.labels.push(v);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(super) fn decide(
        &mut self,
        view: &Board,
        books: &BaseBooks,
        next_fresh: Vertex,
    ) -> Result<Decision, EngineError> {
        let book = books.get(self.n).ok_or(EngineError::NoBook(self.n))?;
        let mut g = ColouredGraph::new();
        for ((a, b), c) in view.edges() {
            let (Some(&x), Some(&y)) = (self.lookup.get(&a), self.lookup.get(&b)) else {
                return Err(EngineError::Hypothesis(format!(
                    "edge {a}-{b} lies outside the book labelling"
                )));
            };
            g.add(x, y, c)
                .map_err(|e| EngineError::Hypothesis(e.to_string()))?;
        }
        let (a, b) = self
            .cursor
            .next_move(book, &g)
            .ok_or(EngineError::BookMiss(self.n))?;
        let mut fresh = next_fresh;
        let mut map = |l: u8| -> Result<Vertex, EngineError> {
            let l = l as usize;
            if l < self.labels.len() {
                return Ok(self.labels[l]);
            }
            if l != self.labels.len() || l >= MAX_VERTICES {
                return Err(EngineError::Hypothesis(format!(
                    "book names label {l} out of order"
                )));
            }
            self.push(fresh);
            fresh += 1;
            Ok(fresh - 1)
        };
        let (lo, hi) = (a.min(b), a.max(b));
        let x = map(lo)?;
        let y = map(hi)?;
        Ok(Decision::Select((x, y), "book"))
    }
}
