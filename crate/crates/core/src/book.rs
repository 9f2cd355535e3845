//! Strategy books: emission from a solved table, parsing, independent
//! verification, and a position index used to replay a book as a Builder.
//!
//! A book file holds one section per start of a game:
//!
//! ```text
//! rc(C4,P3,empty,4,6)=1
//! r: b: m: 01
//!  r: b: 01 m: 02
//!   r: 02 b: 01 m: 21
//! ...
//! ```
//!
//! Node lines are indented by the number of coloured edges, list red then
//! blue edges as pairs of hex digits, and give Builder's move. Children
//! follow in pre-order, blue reply first. A node whose position was already
//! printed ends in ` l: <line>` and has no children.

use std::fmt::{self, Write as _};

use rustc_hash::FxHashMap;

use crate::config::SeriesGame;
use crate::graph::{
    blue_is_target_path, canonical_key, has_c4_with, normalise, Colour, ColouredGraph, Edge,
    PositionKey, MAX_VERTICES,
};
use crate::rules::{is_legal_builder_move, GameSpec};
use crate::solver::{encode_move, MoveCode, Solver};

fn hex(v: u8) -> char {
    char::from_digit(v as u32, 16)
        .expect("vertex label below 16")
        .to_ascii_uppercase()
}

fn write_pair(out: &mut String, a: u8, b: u8) {
    out.push(hex(a));
    out.push(hex(b));
}

/// Header line of one section.
pub fn header_line(spec: &GameSpec, rc: bool) -> String {
    format!(
        "rc(C4,P{},{},{},{})={}",
        spec.n,
        spec.start.tag.book_name(),
        spec.v,
        spec.e,
        rc as u8
    )
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("no winning move stored for a position on the winning line (line {0})")]
    NoWinningMove(usize),
}

/// Accumulates the sections of one game. Back-references and line numbers
/// are shared across the sections of a game.
#[derive(Default)]
pub struct BookWriter {
    out: String,
    seen: FxHashMap<PositionKey, usize>,
    line: usize,
}

impl BookWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Writes the section for the solver's current start.
    pub fn write_game(&mut self, solver: &mut Solver<'_>, rc: bool) -> Result<(), EmitError> {
        let spec = solver.spec().clone();
        self.out.push_str(&header_line(&spec, rc));
        self.out.push('\n');
        self.line += 1;
        if rc {
            let g = spec.start.graph().expect("validated start");
            self.node(solver, g, spec.start_vertices())?;
        }
        Ok(())
    }

    fn node(
        &mut self,
        solver: &mut Solver<'_>,
        pos: ColouredGraph,
        v: usize,
    ) -> Result<(), EmitError> {
        let (key, _) = canonical_key(&pos, v);
        if solver.table().get(&key).is_none() {
            solver.solve_builder(&pos, v);
        }
        let (i, j) = solver
            .table()
            .winning_move(&pos, v)
            .ok_or(EmitError::NoWinningMove(self.line + 1))?;
        for _ in 0..pos.edge_count() {
            self.out.push(' ');
        }
        self.out.push_str("r: ");
        for (a, b) in pos.red_edges() {
            write_pair(&mut self.out, a, b);
            self.out.push(' ');
        }
        self.out.push_str("b: ");
        for (a, b) in pos.blue_edges() {
            write_pair(&mut self.out, a, b);
            self.out.push(' ');
        }
        self.out.push_str("m: ");
        write_pair(&mut self.out, i, j);
        self.line += 1;
        if let Some(&first) = self.seen.get(&key) {
            let _ = writeln!(self.out, " l: {first}");
            return Ok(());
        }
        self.out.push('\n');
        self.seen.insert(key, self.line);

        let n = solver.spec().n;
        let next_v = v.max(i as usize + 1).max(j as usize + 1);
        let mut blue = pos;
        blue.add_unchecked(i, j, Colour::Blue);
        if !blue_is_target_path(blue.blue(), n) {
            self.node(solver, blue, next_v)?;
        }
        if !has_c4_with(pos.red(), i, j) {
            let mut red = pos;
            red.add_unchecked(i, j, Colour::Red);
            self.node(solver, red, next_v)?;
        }
        Ok(())
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Header of one book section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BookHeader {
    pub n: usize,
    pub start_name: String,
    pub v: usize,
    pub e: usize,
    pub rc: bool,
}

/// A Builder node line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BookNode {
    pub indent: usize,
    pub red: Vec<Edge>,
    pub blue: Vec<Edge>,
    pub mv: Edge,
    pub back_ref: Option<usize>,
}

impl BookNode {
    pub fn position(&self) -> Option<ColouredGraph> {
        ColouredGraph::from_edges(&self.red, &self.blue).ok()
    }

    pub fn used_vertices(&self) -> usize {
        self.red
            .iter()
            .chain(&self.blue)
            .map(|&(a, b)| a.max(b) as usize + 1)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BookLine {
    Header(BookHeader),
    Node(BookNode),
}

/// A parsed book. `lines[k]` is file line `k + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrategyBook {
    pub lines: Vec<BookLine>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {0}: malformed header")]
    Header(usize),
    #[error("line {0}: malformed node")]
    Node(usize),
    #[error("line {0}: bad hex pair `{1}`")]
    Hex(usize, String),
    #[error("line {0}: indentation {1} does not match {2} listed edges")]
    Indent(usize, usize, usize),
    #[error("line {0}: back-reference to line {1} which is not earlier")]
    ForwardRef(usize, usize),
}

fn parse_pair(line_no: usize, tok: &str) -> Result<Edge, ParseError> {
    let bad = || ParseError::Hex(line_no, tok.to_string());
    let mut it = tok.chars();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(bad());
    };
    let a = a.to_digit(16).ok_or_else(bad)? as u8;
    let b = b.to_digit(16).ok_or_else(bad)? as u8;
    Ok((a, b))
}

fn parse_header(line_no: usize, s: &str) -> Result<BookHeader, ParseError> {
    let bad = || ParseError::Header(line_no);
    let body = s.strip_prefix("rc(C4,P").ok_or_else(bad)?;
    let (args, rc) = body.rsplit_once(")=").ok_or_else(bad)?;
    let parts: Vec<&str> = args.split(',').collect();
    let [n, name, v, e] = parts[..] else {
        return Err(bad());
    };
    Ok(BookHeader {
        n: n.parse().map_err(|_| bad())?,
        start_name: name.to_string(),
        v: v.parse().map_err(|_| bad())?,
        e: e.parse().map_err(|_| bad())?,
        rc: match rc {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        },
    })
}

fn parse_node(line_no: usize, s: &str) -> Result<BookNode, ParseError> {
    let bad = || ParseError::Node(line_no);
    let indent = s.len() - s.trim_start_matches(' ').len();
    let mut toks = s[indent..].split(' ');
    if toks.next() != Some("r:") {
        return Err(bad());
    }
    let mut red = Vec::new();
    let mut tok = toks.next().ok_or_else(bad)?;
    while tok != "b:" {
        red.push(parse_pair(line_no, tok)?);
        tok = toks.next().ok_or_else(bad)?;
    }
    let mut blue = Vec::new();
    tok = toks.next().ok_or_else(bad)?;
    while tok != "m:" {
        blue.push(parse_pair(line_no, tok)?);
        tok = toks.next().ok_or_else(bad)?;
    }
    let mv = parse_pair(line_no, toks.next().ok_or_else(bad)?)?;
    let back_ref = match toks.next() {
        None => None,
        Some("l:") => {
            let k: usize = toks.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if k >= line_no {
                return Err(ParseError::ForwardRef(line_no, k));
            }
            Some(k)
        }
        Some(_) => return Err(bad()),
    };
    if toks.next().is_some() {
        return Err(bad());
    }
    if indent != red.len() + blue.len() {
        return Err(ParseError::Indent(line_no, indent, red.len() + blue.len()));
    }
    Ok(BookNode {
        indent,
        red,
        blue,
        mv,
        back_ref,
    })
}

/// Parses book text. Empty input gives an empty book.
pub fn parse_book(text: &str) -> Result<StrategyBook, ParseError> {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        if raw.starts_with("rc(") {
            lines.push(BookLine::Header(parse_header(line_no, raw)?));
        } else {
            lines.push(BookLine::Node(parse_node(line_no, raw)?));
        }
    }
    Ok(StrategyBook { lines })
}

/// Why a book was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    IllegalMove,
    MissingChild,
    BudgetExceeded,
    TerminalMismatch,
    DanglingBackReference,
    IsomorphismMismatch,
    /// The printed position is not the one reached by replay.
    PositionMismatch,
    /// Headers do not match the game being checked.
    HeaderMismatch,
    /// A line that no Painter reply leads to.
    UnexpectedLine,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::IllegalMove => "illegal move",
            RejectReason::MissingChild => "missing child",
            RejectReason::BudgetExceeded => "budget exceeded",
            RejectReason::TerminalMismatch => "terminal mismatch",
            RejectReason::DanglingBackReference => "dangling back-reference",
            RejectReason::IsomorphismMismatch => "isomorphism mismatch",
            RejectReason::PositionMismatch => "position mismatch",
            RejectReason::HeaderMismatch => "header mismatch",
            RejectReason::UnexpectedLine => "unexpected line",
        };
        f.write_str(s)
    }
}

/// Outcome of [`verify_book`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub accepted: bool,
    /// 1-based line of the first failure; `None` when accepted, or when the
    /// failure is past the end of the book.
    pub line: Option<usize>,
    pub reason: Option<RejectReason>,
    pub detail: String,
    /// Number of sections whose header claims a Builder win.
    pub winning_sections: usize,
    /// Node lines checked.
    pub nodes: usize,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted {
            write!(
                f,
                "accepted: {} winning section(s), {} node line(s)",
                self.winning_sections, self.nodes
            )
        } else {
            let reason = self
                .reason
                .map_or("rejected".to_string(), |r| r.to_string());
            match self.line {
                Some(l) => write!(f, "rejected at line {l}: {reason}: {}", self.detail),
                None => write!(f, "rejected at end of book: {reason}: {}", self.detail),
            }
        }
    }
}

struct Reject {
    line: Option<usize>,
    reason: RejectReason,
    detail: String,
}

fn reject<T>(
    line: Option<usize>,
    reason: RejectReason,
    detail: impl Into<String>,
) -> Result<T, Reject> {
    Err(Reject {
        line,
        reason,
        detail: detail.into(),
    })
}

struct Verifier<'b> {
    book: &'b StrategyBook,
    cursor: usize,
    spec: GameSpec,
    /// Canonical key of each fully printed node, with its sorted-label move.
    printed: FxHashMap<usize, (PositionKey, MoveCode)>,
    nodes: usize,
}

impl Verifier<'_> {
    fn peek_node(&self) -> Option<&BookNode> {
        match self.book.lines.get(self.cursor) {
            Some(BookLine::Node(n)) => Some(n),
            _ => None,
        }
    }

    /// Verifies the node expected at the cursor for Builder to move in `pos`.
    fn node(&mut self, pos: &ColouredGraph) -> Result<(), Reject> {
        let line_no = self.cursor + 1;
        let Some(node) = self.peek_node().cloned() else {
            let at = (self.cursor < self.book.lines.len()).then_some(line_no);
            return reject(at, RejectReason::MissingChild, "expected a Builder node");
        };
        if node.indent != pos.edge_count() {
            return reject(
                Some(line_no),
                RejectReason::MissingChild,
                format!("expected a node with {} edges", pos.edge_count()),
            );
        }
        self.cursor += 1;
        self.nodes += 1;
        if node.position().as_ref() != Some(pos) {
            return reject(
                Some(line_no),
                RejectReason::PositionMismatch,
                "listed edges differ from the replayed position",
            );
        }
        if pos.edge_count() >= self.spec.e {
            return reject(Some(line_no), RejectReason::BudgetExceeded, "no edges left");
        }
        let (a, b) = node.mv;
        if a as usize >= MAX_VERTICES
            || b as usize >= MAX_VERTICES
            || !is_legal_builder_move(pos, &self.spec, (a, b))
        {
            return reject(
                Some(line_no),
                RejectReason::IllegalMove,
                format!("{a:X}{b:X}"),
            );
        }
        let v = pos.used_vertices();
        let (key, relabel) = canonical_key(pos, v);
        let sorted = |x: u8| {
            if (x as usize) < v {
                relabel.to_sorted(x)
            } else {
                x
            }
        };
        let code = encode_move(sorted(a), sorted(b));

        if let Some(target) = node.back_ref {
            return match self.printed.get(&target) {
                None => reject(
                    Some(line_no),
                    RejectReason::DanglingBackReference,
                    format!("line {target} is not a verified node"),
                ),
                Some(&(k, _)) if k != key => reject(
                    Some(line_no),
                    RejectReason::IsomorphismMismatch,
                    format!("line {target} holds a different position"),
                ),
                Some(&(_, m)) if m != code => reject(
                    Some(line_no),
                    RejectReason::IsomorphismMismatch,
                    format!("move differs from the one proven at line {target}"),
                ),
                Some(_) => Ok(()),
            };
        }

        let mut blue = *pos;
        blue.add_unchecked(a, b, Colour::Blue);
        let blue_wins =
            blue.blue_count() == self.spec.n - 1 && blue_is_target_path(blue.blue(), self.spec.n);
        self.reply(&blue, blue_wins, line_no)?;

        let red_wins = has_c4_with(pos.red(), a, b);
        let mut red = *pos;
        red.add_unchecked(a, b, Colour::Red);
        self.reply(&red, red_wins, line_no)?;

        self.printed.insert(line_no, (key, code));
        Ok(())
    }

    fn reply(
        &mut self,
        child: &ColouredGraph,
        wins: bool,
        parent_line: usize,
    ) -> Result<(), Reject> {
        if wins {
            if let Some(next) = self.peek_node() {
                if next.indent == child.edge_count() && next.position().as_ref() == Some(child) {
                    return reject(
                        Some(self.cursor + 1),
                        RejectReason::TerminalMismatch,
                        "node listed for a reply that already wins",
                    );
                }
            }
            return Ok(());
        }
        if child.edge_count() >= self.spec.e {
            return reject(
                Some(parent_line),
                RejectReason::BudgetExceeded,
                "a Painter reply survives the last edge",
            );
        }
        self.node(child)
    }
}

/// Checks `book` as a certificate for every start of `game`, replaying each
/// section from scratch. Shares only the graph predicates and move legality
/// with the solver.
pub fn verify_book(book: &StrategyBook, game: &SeriesGame) -> VerificationReport {
    let mut report = VerificationReport {
        accepted: false,
        line: None,
        reason: None,
        detail: String::new(),
        winning_sections: 0,
        nodes: 0,
    };
    let fail = |mut r: VerificationReport, e: Reject| {
        r.line = e.line;
        r.reason = Some(e.reason);
        r.detail = e.detail;
        r
    };
    let starts: Vec<_> = game
        .starts
        .iter()
        .filter(|s| s.max_vertex().map_or(true, |m| (m as usize) < game.v))
        .collect();
    let mut v = Verifier {
        book,
        cursor: 0,
        spec: game.spec_for(&game.starts[0]),
        printed: FxHashMap::default(),
        nodes: 0,
    };
    if book.lines.is_empty() {
        return fail(
            report,
            Reject {
                line: None,
                reason: RejectReason::HeaderMismatch,
                detail: "book is empty".into(),
            },
        );
    }
    for start in starts {
        let line_no = v.cursor + 1;
        let spec = game.spec_for(start);
        let header = match book.lines.get(v.cursor) {
            Some(BookLine::Header(h)) => h.clone(),
            Some(BookLine::Node(_)) => {
                report.nodes = v.nodes;
                return fail(
                    report,
                    Reject {
                        line: Some(line_no),
                        reason: RejectReason::UnexpectedLine,
                        detail: "node line outside any strategy".into(),
                    },
                );
            }
            None => {
                report.nodes = v.nodes;
                return fail(
                    report,
                    Reject {
                        line: None,
                        reason: RejectReason::HeaderMismatch,
                        detail: format!("no section for {}", spec.start.tag.book_name()),
                    },
                );
            }
        };
        if (header.n, header.v, header.e) != (spec.n, spec.v, spec.e)
            || header.start_name != spec.start.tag.book_name()
        {
            report.nodes = v.nodes;
            return fail(
                report,
                Reject {
                    line: Some(line_no),
                    reason: RejectReason::HeaderMismatch,
                    detail: format!("expected a section for {spec}"),
                },
            );
        }
        v.cursor += 1;
        v.spec = spec;
        if header.rc {
            report.winning_sections += 1;
            let g = match v.spec.validate() {
                Ok(g) => g,
                Err(e) => {
                    return fail(
                        report,
                        Reject {
                            line: Some(line_no),
                            reason: RejectReason::HeaderMismatch,
                            detail: e.to_string(),
                        },
                    )
                }
            };
            if let Err(e) = v.node(&g) {
                report.nodes = v.nodes;
                return fail(report, e);
            }
        }
    }
    report.nodes = v.nodes;
    if v.cursor < book.lines.len() {
        return fail(
            report,
            Reject {
                line: Some(v.cursor + 1),
                reason: RejectReason::UnexpectedLine,
                detail: "line not reached by any Painter reply".into(),
            },
        );
    }
    report.accepted = true;
    report
}

/// A book as a replayable strategy: every listed position, in the labels of
/// its own line, with its move and the line it refers back to.
#[derive(Clone, Debug, Default)]
pub struct BookIndex {
    entries: FxHashMap<ColouredGraph, IndexEntry>,
}

#[derive(Clone, Copy, Debug)]
struct IndexEntry {
    mv: Edge,
    refers_to: Option<ColouredGraph>,
}

impl BookIndex {
    pub fn from_book(book: &StrategyBook) -> Self {
        let mut index = BookIndex::default();
        index.add_book(book);
        index
    }

    /// Adds every node of `book`; earlier entries win on equal positions.
    pub fn add_book(&mut self, book: &StrategyBook) {
        let positions: Vec<Option<ColouredGraph>> = book
            .lines
            .iter()
            .map(|l| match l {
                BookLine::Node(n) => n.position(),
                BookLine::Header(_) => None,
            })
            .collect();
        for (line, pos) in book.lines.iter().zip(&positions) {
            let (BookLine::Node(node), Some(pos)) = (line, pos) else {
                continue;
            };
            let refers_to = node
                .back_ref
                .and_then(|l| positions.get(l.wrapping_sub(1)).copied().flatten())
                .filter(|t| t != pos);
            self.entries.entry(*pos).or_insert(IndexEntry {
                mv: node.mv,
                refers_to,
            });
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Book move for a position listed verbatim in the book.
    pub fn listed_move(&self, pos: &ColouredGraph) -> Option<Edge> {
        self.entries.get(pos).map(|e| e.mv)
    }
}

/// Follows a book from one of its start positions. Positions are given in
/// the caller's labels; the cursor keeps the relabelling onto the book's
/// lines and updates it at back-references.
#[derive(Clone, Debug)]
pub struct BookCursor {
    /// Book label of each caller label.
    to_book: [u8; MAX_VERTICES],
}

impl Default for BookCursor {
    fn default() -> Self {
        let mut to_book = [0u8; MAX_VERTICES];
        for (i, x) in to_book.iter_mut().enumerate() {
            *x = i as u8;
        }
        BookCursor { to_book }
    }
}

impl BookCursor {
    pub fn new() -> Self {
        Self::default()
    }

    fn in_book(&self, pos: &ColouredGraph) -> ColouredGraph {
        let m = |x: u8| self.to_book[x as usize];
        let mut g = ColouredGraph::new();
        for (a, b) in pos.red_edges() {
            g.add_unchecked(m(a), m(b), Colour::Red);
        }
        for (a, b) in pos.blue_edges() {
            g.add_unchecked(m(a), m(b), Colour::Blue);
        }
        g
    }

    /// Book move for `pos` in caller labels; labels at or past the used
    /// count are fresh vertices.
    pub fn next_move(&mut self, index: &BookIndex, pos: &ColouredGraph) -> Option<Edge> {
        let mut here = self.in_book(pos);
        let mut entry = *index.entries.get(&here)?;
        if let Some(target) = entry.refers_to {
            let v = pos.used_vertices();
            let (_, from) = canonical_key(&here, v);
            let (_, to) = canonical_key(&target, v);
            let mut phi = [0u8; MAX_VERTICES];
            for (x, p) in phi.iter_mut().enumerate() {
                *p = if x < v {
                    to.to_board(from.to_sorted(x as u8))
                } else {
                    x as u8
                };
            }
            for x in self.to_book.iter_mut() {
                *x = phi[*x as usize];
            }
            here = self.in_book(pos);
            if here != target {
                return None;
            }
            entry = *index.entries.get(&here)?;
        }
        let mut from_book = [0u8; MAX_VERTICES];
        for (c, &b) in self.to_book.iter().enumerate() {
            from_book[b as usize] = c as u8;
        }
        let (a, b) = entry.mv;
        Some(normalise((from_book[a as usize], from_book[b as usize])))
    }
}
