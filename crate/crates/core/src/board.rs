//! Unbounded coloured graph for the restricted game on `K_N`.
//!
//! The constructive Builder and the match harness play here. Vertices are
//! dense indices handed out in order; a move may name the next unused index.

use rustc_hash::FxHashMap;

use crate::graph::{Colour, ColouredGraph, MAX_VERTICES};

pub type Vertex = u32;

/// An undirected edge between board vertices.
pub type BoardEdge = (Vertex, Vertex);

#[inline]
pub fn ordered((a, b): BoardEdge) -> BoardEdge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("edge {0}-{1} is a loop")]
    Loop(Vertex, Vertex),
    #[error("edge {0}-{1} is already coloured")]
    AlreadyColoured(Vertex, Vertex),
    #[error("edge {0}-{1} skips unused vertex indices")]
    NotFresh(Vertex, Vertex),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Board {
    red: Vec<Vec<Vertex>>,
    blue: Vec<Vec<Vertex>>,
    colours: FxHashMap<BoardEdge, Colour>,
    red_count: usize,
    blue_count: usize,
}

impl Board {
    pub fn new() -> Self {
        Self::default()
    }

    /// A board holding the given edges.
    pub fn from_edges(red: &[BoardEdge], blue: &[BoardEdge]) -> Result<Self, BoardError> {
        let mut b = Board::new();
        let top = red.iter().chain(blue).map(|&(x, y)| x.max(y) + 1).max();
        b.grow(top.unwrap_or(0) as usize);
        for &(x, y) in red {
            b.add((x, y), Colour::Red)?;
        }
        for &(x, y) in blue {
            b.add((x, y), Colour::Blue)?;
        }
        Ok(b)
    }

    pub fn from_graph(g: &ColouredGraph) -> Self {
        let wide = |e: &(u8, u8)| (e.0 as Vertex, e.1 as Vertex);
        let red: Vec<_> = g.red_edges().map(|e| wide(&e)).collect();
        let blue: Vec<_> = g.blue_edges().map(|e| wide(&e)).collect();
        Self::from_edges(&red, &blue).expect("bit-matrix positions are simple graphs")
    }

    /// The position on the bit-matrix board, if it fits.
    pub fn to_graph(&self) -> Option<ColouredGraph> {
        if self.vertex_count() > MAX_VERTICES {
            return None;
        }
        let mut g = ColouredGraph::new();
        for (&(a, b), &c) in &self.colours {
            g.add(a as u8, b as u8, c).ok()?;
        }
        Some(g)
    }

    fn grow(&mut self, n: usize) {
        if self.red.len() < n {
            self.red.resize_with(n, Vec::new);
            self.blue.resize_with(n, Vec::new);
        }
    }

    /// Number of vertex indices in use; the next fresh vertex has this index.
    pub fn vertex_count(&self) -> usize {
        self.red.len()
    }

    pub fn red_count(&self) -> usize {
        self.red_count
    }

    pub fn blue_count(&self) -> usize {
        self.blue_count
    }

    pub fn edge_count(&self) -> usize {
        self.red_count + self.blue_count
    }

    pub fn colour_of(&self, a: Vertex, b: Vertex) -> Option<Colour> {
        self.colours.get(&ordered((a, b))).copied()
    }

    pub fn red_neighbours(&self, v: Vertex) -> &[Vertex] {
        self.red.get(v as usize).map_or(&[], |x| x.as_slice())
    }

    pub fn blue_neighbours(&self, v: Vertex) -> &[Vertex] {
        self.blue.get(v as usize).map_or(&[], |x| x.as_slice())
    }

    pub fn edges(&self) -> impl Iterator<Item = (BoardEdge, Colour)> + '_ {
        self.colours.iter().map(|(&e, &c)| (e, c))
    }

    /// Checks that `a-b` is uncoloured and introduces no more than the next
    /// fresh indices.
    pub fn check_move(&self, (a, b): BoardEdge) -> Result<(), BoardError> {
        if a == b {
            return Err(BoardError::Loop(a, b));
        }
        if self.colour_of(a, b).is_some() {
            return Err(BoardError::AlreadyColoured(a, b));
        }
        let n = self.vertex_count() as Vertex;
        let (lo, hi) = ordered((a, b));
        let fits = hi < n || (hi == n && lo <= n) || (lo == n && hi == n + 1);
        if !fits {
            return Err(BoardError::NotFresh(a, b));
        }
        Ok(())
    }

    pub fn add(&mut self, (a, b): BoardEdge, colour: Colour) -> Result<(), BoardError> {
        if a == b {
            return Err(BoardError::Loop(a, b));
        }
        if self.colour_of(a, b).is_some() {
            return Err(BoardError::AlreadyColoured(a, b));
        }
        self.grow(a.max(b) as usize + 1);
        let lists = match colour {
            Colour::Red => {
                self.red_count += 1;
                &mut self.red
            }
            Colour::Blue => {
                self.blue_count += 1;
                &mut self.blue
            }
        };
        lists[a as usize].push(b);
        lists[b as usize].push(a);
        self.colours.insert(ordered((a, b)), colour);
        Ok(())
    }

    /// True iff colouring `a-b` red would close a red 4-cycle, i.e. a red
    /// path of length three joins `a` and `b`.
    pub fn closes_red_c4(&self, a: Vertex, b: Vertex) -> bool {
        let na = self.red_neighbours(a);
        self.red_neighbours(b).iter().any(|&x| {
            x != a
                && self
                    .red_neighbours(x)
                    .iter()
                    .any(|&y| y != b && na.contains(&y))
        })
    }

    /// True iff the blue edges form one path on exactly `n` vertices.
    pub fn blue_is_path(&self, n: usize) -> bool {
        blue_is_path_in(
            n,
            self.blue_count,
            |v| self.blue_neighbours(v),
            self.vertex_count(),
        )
    }
}

/// Shared test of "the blue graph is exactly one path on `n` vertices" for
/// any neighbour oracle over `0..vertices`.
pub(crate) fn blue_is_path_in<'a>(
    n: usize,
    blue_edges: usize,
    nbrs: impl Fn(Vertex) -> &'a [Vertex],
    vertices: usize,
) -> bool {
    if n < 2 || blue_edges != n - 1 {
        return false;
    }
    let mut start = None;
    for v in 0..vertices as Vertex {
        match nbrs(v).len() {
            0 | 2 => {}
            1 => {
                start.get_or_insert(v);
            }
            _ => return false,
        }
    }
    let Some(mut cur) = start else { return false };
    let mut prev = Vertex::MAX;
    let mut seen = 1;
    loop {
        let next = nbrs(cur).iter().copied().find(|&x| x != prev);
        match next {
            Some(x) => {
                prev = cur;
                cur = x;
                seen += 1;
                if seen > n {
                    return false;
                }
            }
            None => return seen == n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn red_c4_detection() {
        let b = Board::from_edges(&[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        assert!(b.closes_red_c4(3, 0));
        assert!(b.closes_red_c4(0, 3));
        assert!(!b.closes_red_c4(0, 2));
        let t = Board::from_edges(&[(0, 1), (1, 2), (2, 0)], &[]).unwrap();
        assert!(!t.closes_red_c4(0, 3));
    }

    #[test]
    fn blue_path() {
        let b = Board::from_edges(&[(0, 5)], &[(0, 1), (1, 2), (3, 2)]).unwrap();
        assert!(b.blue_is_path(4));
        assert!(!b.blue_is_path(3));
        let split = Board::from_edges(&[], &[(0, 1), (2, 3)]).unwrap();
        assert!(!split.blue_is_path(3));
        let cycle = Board::from_edges(&[], &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        assert!(!cycle.blue_is_path(4));
    }

    #[test]
    fn fresh_indices() {
        let b = Board::from_edges(&[(0, 1)], &[]).unwrap();
        assert!(b.check_move((1, 2)).is_ok());
        assert!(b.check_move((0, 3)).is_err());
        assert!(b.check_move((0, 1)).is_err());
        assert!(Board::new().check_move((0, 1)).is_ok());
    }

    #[test]
    fn graph_round_trip() {
        let g = ColouredGraph::from_edges(&[(0, 2), (2, 3)], &[(0, 1)]).unwrap();
        let b = Board::from_graph(&g);
        assert_eq!(b.to_graph(), Some(g));
    }
}
