//! Game parameters, legality, terminal detection and the Builder-side
//! prunings of the bounded game. Shared by the solver, the book verifier and
//! the match harness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{
    blue_extends_to_paths, blue_is_target_path, has_c4_with, Colour, ColouredGraph, Edge,
    GraphError, MAX_VERTICES,
};

/// Which rule set a game is played under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Ruleset {
    /// Painter may never close a red C4; Builder needs exactly `n-1` blue
    /// edges forming a blue `P_n` within the budget.
    Rr,
    /// Vertex cap, connectivity and blue-path-extendability restrictions on
    /// Builder; a red C4 or a blue `P_n` wins for Builder.
    #[default]
    Rrc,
}

/// Named start positions, in series order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartTag {
    Empty,
    B,
    Br,
    Brr,
    Brb,
    Brrb,
    Explicit,
}

impl StartTag {
    /// The six named starts in the order a series solves them.
    pub const SERIES: [StartTag; 6] = [
        StartTag::Empty,
        StartTag::B,
        StartTag::Br,
        StartTag::Brr,
        StartTag::Brb,
        StartTag::Brrb,
    ];

    /// Name used in book headers.
    pub fn book_name(self) -> &'static str {
        match self {
            StartTag::Empty => "empty",
            StartTag::B => "b-path",
            StartTag::Br => "br-path",
            StartTag::Brr => "brr-path",
            StartTag::Brb => "brb-path",
            StartTag::Brrb => "brrb-path",
            StartTag::Explicit => "explicit",
        }
    }

    /// Red and blue edges of a named start.
    pub fn edges(self) -> (&'static [Edge], &'static [Edge]) {
        match self {
            StartTag::Empty | StartTag::Explicit => (&[], &[]),
            StartTag::B => (&[], &[(0, 1)]),
            StartTag::Br => (&[(1, 2)], &[(0, 1)]),
            StartTag::Brr => (&[(1, 2), (2, 3)], &[(0, 1)]),
            StartTag::Brb => (&[(1, 2)], &[(0, 1), (2, 3)]),
            StartTag::Brrb => (&[(1, 2), (2, 3)], &[(0, 1), (3, 4)]),
        }
    }
}

impl fmt::Display for StartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StartTag::Empty => "empty",
            StartTag::B => "b",
            StartTag::Br => "br",
            StartTag::Brr => "brr",
            StartTag::Brb => "brb",
            StartTag::Brrb => "brrb",
            StartTag::Explicit => "explicit",
        };
        f.write_str(s)
    }
}

impl FromStr for StartTag {
    type Err = RulesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim_end_matches("-path") {
            "empty" | "" => StartTag::Empty,
            "b" => StartTag::B,
            "br" => StartTag::Br,
            "brr" => StartTag::Brr,
            "brb" => StartTag::Brb,
            "brrb" => StartTag::Brrb,
            "explicit" => StartTag::Explicit,
            _ => return Err(RulesError::UnknownStart(s.to_string())),
        })
    }
}

/// Coloured graph Builder starts from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StartPosition {
    pub tag: StartTag,
    pub red: Vec<Edge>,
    pub blue: Vec<Edge>,
}

impl StartPosition {
    pub fn named(tag: StartTag) -> Self {
        let (red, blue) = tag.edges();
        StartPosition {
            tag,
            red: red.to_vec(),
            blue: blue.to_vec(),
        }
    }

    pub fn explicit(red: Vec<Edge>, blue: Vec<Edge>) -> Self {
        StartPosition {
            tag: StartTag::Explicit,
            red,
            blue,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.red.len() + self.blue.len()
    }

    /// Highest vertex index used, `None` for the empty start.
    pub fn max_vertex(&self) -> Option<u8> {
        self.red
            .iter()
            .chain(&self.blue)
            .flat_map(|&(a, b)| [a, b])
            .max()
    }

    pub fn graph(&self) -> Result<ColouredGraph, GraphError> {
        ColouredGraph::from_edges(&self.red, &self.blue)
    }
}

/// One game instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameSpec {
    /// Order of the blue path Builder is after.
    pub n: usize,
    /// Vertex cap (RRC only).
    pub v: usize,
    /// Total coloured edges allowed, start position included.
    pub e: usize,
    pub start: StartPosition,
    pub ruleset: Ruleset,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RulesError {
    #[error("unknown start position `{0}`")]
    UnknownStart(String),
    #[error("path order n={0} must be at least 2")]
    PathTooShort(usize),
    #[error("vertex cap {0} exceeds the {MAX_VERTICES}-vertex board")]
    CapTooLarge(usize),
    #[error("edge budget {budget} is smaller than the {start} start edges")]
    BudgetBelowStart { budget: usize, start: usize },
    #[error("start position needs {needed} vertices but the cap is {cap}")]
    StartExceedsCap { needed: usize, cap: usize },
    #[error("invalid start position: {0}")]
    BadStart(#[from] GraphError),
}

impl GameSpec {
    pub fn rrc(n: usize, v: usize, e: usize, start: StartPosition) -> Self {
        GameSpec {
            n,
            v,
            e,
            start,
            ruleset: Ruleset::Rrc,
        }
    }

    /// The restricted game on `P_n` with the usual `2n-2` budget.
    pub fn rr(n: usize, start: StartPosition) -> Self {
        GameSpec {
            n,
            v: usize::MAX,
            e: 2 * n - 2,
            start,
            ruleset: Ruleset::Rr,
        }
    }

    /// Checks the parameters and builds the start graph.
    pub fn validate(&self) -> Result<ColouredGraph, RulesError> {
        if self.n < 2 {
            return Err(RulesError::PathTooShort(self.n));
        }
        if self.ruleset == Ruleset::Rrc && self.v > MAX_VERTICES {
            return Err(RulesError::CapTooLarge(self.v));
        }
        if self.e < self.start.edge_count() {
            return Err(RulesError::BudgetBelowStart {
                budget: self.e,
                start: self.start.edge_count(),
            });
        }
        if let Some(m) = self.start.max_vertex() {
            if self.ruleset == Ruleset::Rrc && m as usize >= self.v {
                return Err(RulesError::StartExceedsCap {
                    needed: m as usize + 1,
                    cap: self.v,
                });
            }
        }
        Ok(self.start.graph()?)
    }

    /// Vertex count handed to the canonical sort for the start position.
    pub fn start_vertices(&self) -> usize {
        self.start.max_vertex().map_or(0, |m| m as usize + 1)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ruleset {
            Ruleset::Rrc => write!(
                f,
                "rc(C4,P{},{},{},{})",
                self.n,
                self.start.tag.book_name(),
                self.v,
                self.e
            ),
            Ruleset::Rr => write!(f, "RR(C4,P{},{})", self.n, self.start.tag.book_name()),
        }
    }
}

/// Outcome of a position right after an edge was coloured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TerminalStatus {
    Ongoing,
    BuilderWinRedC4,
    BuilderWinBluePath,
    PainterWinBudget,
    PainterWinPruned,
}

impl TerminalStatus {
    pub fn is_builder_win(self) -> bool {
        matches!(
            self,
            TerminalStatus::BuilderWinRedC4 | TerminalStatus::BuilderWinBluePath
        )
    }

    pub fn is_over(self) -> bool {
        self != TerminalStatus::Ongoing
    }
}

/// Candidate Builder moves of the bounded game, in search order, before the
/// blue-path filter is applied. `v` is the used-vertex count.
///
/// Order: the hint (if any), then pairs of used vertices with outer index
/// descending and inner index descending, then used-to-fresh edges with the
/// used endpoint ascending, then the opening edge `0-1` on an empty board.
pub struct MoveOrder<'a> {
    pos: &'a ColouredGraph,
    v: u8,
    cap: u8,
    hint: Option<Edge>,
    stage: u8,
    i: i16,
    j: i16,
}

impl<'a> MoveOrder<'a> {
    pub fn new(pos: &'a ColouredGraph, v: usize, cap: usize, hint: Option<Edge>) -> Self {
        MoveOrder {
            pos,
            v: v as u8,
            cap: cap.min(MAX_VERTICES) as u8,
            hint,
            stage: 0,
            i: v as i16 - 1,
            j: v as i16 - 1,
        }
    }

    #[inline]
    fn is_hint(&self, a: u8, b: u8) -> bool {
        matches!(self.hint, Some((x, y)) if (x, y) == (a, b) || (y, x) == (a, b))
    }
}

impl Iterator for MoveOrder<'_> {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        let blue = self.pos.blue();
        loop {
            match self.stage {
                0 => {
                    self.stage = 1;
                    if let Some(h) = self.hint {
                        return Some(h);
                    }
                }
                1 => {
                    if self.i < 0 {
                        self.stage = 2;
                        self.i = 0;
                        continue;
                    }
                    let i = self.i as u8;
                    if blue.degree(i) > 1 || self.j <= self.i {
                        self.i -= 1;
                        self.j = self.v as i16 - 1;
                        continue;
                    }
                    let j = self.j as u8;
                    self.j -= 1;
                    if !self.pos.is_coloured(i, j) && blue.degree(j) <= 1 && !self.is_hint(i, j) {
                        return Some((i, j));
                    }
                }
                2 => {
                    if self.v >= self.cap || self.i as u8 >= self.v {
                        self.stage = 3;
                        continue;
                    }
                    let i = self.i as u8;
                    self.i += 1;
                    if blue.degree(i) <= 1 && !self.is_hint(i, self.v) {
                        return Some((i, self.v));
                    }
                }
                3 => {
                    self.stage = 4;
                    if self.v == 0 && self.cap >= 2 && !self.is_hint(0, 1) {
                        return Some((0, 1));
                    }
                }
                _ => return None,
            }
        }
    }
}

/// Legal Builder moves of an RRC position in search order.
///
/// Every returned edge keeps the coloured graph connected, stays within the
/// vertex cap, and keeps the blue graph a union of paths if coloured blue.
/// An empty list means Builder has no move and loses.
pub fn legal_builder_moves(pos: &ColouredGraph, spec: &GameSpec, hint: Option<Edge>) -> Vec<Edge> {
    let v = pos.used_vertices();
    let hint = hint.filter(|&h| is_legal_builder_move(pos, spec, h));
    MoveOrder::new(pos, v, spec.v, hint)
        .filter(|&(a, b)| blue_extends_to_paths(pos.blue(), a, b))
        .collect()
}

/// Rules (2)-(4) of the bounded game for a single proposed edge.
pub fn is_legal_builder_move(pos: &ColouredGraph, spec: &GameSpec, (a, b): Edge) -> bool {
    let v = pos.used_vertices();
    let cap = spec.v.min(MAX_VERTICES);
    if a == b || a as usize >= cap || b as usize >= cap || pos.is_coloured(a, b) {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let connected = if v == 0 {
        (lo, hi) == (0, 1)
    } else {
        (lo as usize) < v && (hi as usize) <= v
    };
    connected && blue_extends_to_paths(pos.blue(), a, b)
}

/// Adds `edge` in `colour`, rejecting already-coloured edges.
pub fn apply_colour(
    pos: &ColouredGraph,
    (a, b): Edge,
    colour: Colour,
) -> Result<ColouredGraph, GraphError> {
    let mut next = *pos;
    next.add(a, b, colour)?;
    Ok(next)
}

/// Classifies `pos`, in which `last` was just coloured `colour`.
pub fn terminal_status(
    pos: &ColouredGraph,
    spec: &GameSpec,
    (a, b): Edge,
    colour: Colour,
) -> TerminalStatus {
    match colour {
        Colour::Red => {
            let mut red = *pos.red();
            red.clear(a, b);
            if spec.ruleset == Ruleset::Rrc && has_c4_with(&red, a, b) {
                return TerminalStatus::BuilderWinRedC4;
            }
        }
        Colour::Blue => {
            if pos.blue_count() == spec.n - 1 && blue_is_target_path(pos.blue(), spec.n) {
                return TerminalStatus::BuilderWinBluePath;
            }
        }
    }
    if pos.edge_count() >= spec.e {
        TerminalStatus::PainterWinBudget
    } else {
        TerminalStatus::Ongoing
    }
}

/// True iff the position can no longer be won by Builder for counting
/// reasons: too many blue edges, or too many red edges to leave room for
/// `n-1` blue ones.
#[inline]
pub fn budget_prune(pos: &ColouredGraph, spec: &GameSpec) -> bool {
    pos.blue_count() >= spec.n || pos.red_count() + spec.n > spec.e + 1
}

/// True iff some vertex below the cap still has no blue edge. Called with
/// the proposed edge tentatively blue. A sound cut only when the cap
/// exceeds `n`: with `v = n` the winning path itself covers every vertex.
#[inline]
pub fn spare_blue_vertex_exists(pos: &ColouredGraph, spec: &GameSpec) -> bool {
    let cap = spec.v.min(MAX_VERTICES) as u8;
    (0..cap).any(|x| pos.blue().degree(x) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, v: usize, e: usize, tag: StartTag) -> GameSpec {
        GameSpec::rrc(n, v, e, StartPosition::named(tag))
    }

    #[test]
    fn opening_move_only() {
        let s = spec(3, 4, 6, StartTag::Empty);
        let g = ColouredGraph::new();
        assert_eq!(legal_builder_moves(&g, &s, None), vec![(0, 1)]);
    }

    #[test]
    fn single_blue_edge_moves() {
        let s = spec(3, 4, 6, StartTag::B);
        let g = s.validate().unwrap();
        assert_eq!(legal_builder_moves(&g, &s, None), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn hint_comes_first_and_is_not_repeated() {
        let s = spec(4, 5, 8, StartTag::Brr);
        let g = s.validate().unwrap();
        let plain = legal_builder_moves(&g, &s, None);
        let hinted = legal_builder_moves(&g, &s, Some((1, 4)));
        assert_eq!(hinted[0], (1, 4));
        assert_eq!(hinted.len(), plain.len());
        assert!(!hinted[1..].contains(&(1, 4)));
    }

    #[test]
    fn used_pairs_descend() {
        let s = spec(5, 6, 8, StartTag::Brr);
        let g = s.validate().unwrap();
        assert_eq!(
            legal_builder_moves(&g, &s, None),
            vec![(1, 3), (0, 3), (0, 2), (0, 4), (1, 4), (2, 4), (3, 4)]
        );
    }

    #[test]
    fn budget_prune_boundaries() {
        let s = spec(7, 8, 13, StartTag::Empty);
        let mut g = ColouredGraph::new();
        for (a, b) in [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (0, 6),
            (0, 7),
            (1, 2),
        ] {
            g.add(a, b, Colour::Red).unwrap();
        }
        assert_eq!(g.red_count(), 8);
        assert!(budget_prune(&g, &s));

        let mut b = ColouredGraph::new();
        for k in 0..6u8 {
            b.add(k, k + 1, Colour::Blue).unwrap();
        }
        assert!(!budget_prune(&b, &s));
        b.add(6, 7, Colour::Blue).unwrap();
        assert!(budget_prune(&b, &s));
    }

    #[test]
    fn spare_vertex() {
        let s = spec(7, 8, 13, StartTag::Empty);
        let mut g = ColouredGraph::new();
        for k in 0..6u8 {
            g.add(k, k + 1, Colour::Blue).unwrap();
        }
        assert!(spare_blue_vertex_exists(&g, &s));
        g.add(7, 0, Colour::Blue).unwrap();
        assert!(!spare_blue_vertex_exists(&g, &s));
    }

    #[test]
    fn terminal_classification() {
        let s = spec(3, 4, 6, StartTag::Empty);
        let g = ColouredGraph::from_edges(&[(0, 1), (1, 2), (2, 3), (0, 3)], &[]).unwrap();
        assert_eq!(
            terminal_status(&g, &s, (0, 3), Colour::Red),
            TerminalStatus::BuilderWinRedC4
        );
        let p = ColouredGraph::from_edges(&[], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            terminal_status(&p, &s, (1, 2), Colour::Blue),
            TerminalStatus::BuilderWinBluePath
        );
        let full = ColouredGraph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], &[(2, 3)])
            .unwrap();
        assert_eq!(
            terminal_status(&full, &s, (2, 3), Colour::Blue),
            TerminalStatus::PainterWinBudget
        );
    }

    #[test]
    fn rr_red_c4_is_not_a_win() {
        let s = GameSpec::rr(8, StartPosition::named(StartTag::Empty));
        let g = ColouredGraph::from_edges(&[(0, 1), (1, 2), (2, 3), (0, 3)], &[]).unwrap();
        assert_eq!(
            terminal_status(&g, &s, (0, 3), Colour::Red),
            TerminalStatus::Ongoing
        );
    }

    #[test]
    fn start_tags_parse() {
        for tag in StartTag::SERIES {
            assert_eq!(tag.to_string().parse::<StartTag>().unwrap(), tag);
            assert_eq!(tag.book_name().parse::<StartTag>().unwrap(), tag);
        }
        let brrb = StartPosition::named(StartTag::Brrb);
        assert_eq!(brrb.max_vertex(), Some(4));
        assert_eq!(brrb.edge_count(), 4);
    }

    #[test]
    fn validation() {
        assert!(spec(3, 4, 6, StartTag::Brrb).validate().is_err());
        assert!(spec(3, 4, 1, StartTag::Br).validate().is_err());
        assert!(spec(3, 4, 6, StartTag::Brr).validate().is_ok());
    }
}
