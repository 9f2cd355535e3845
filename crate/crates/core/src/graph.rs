//! Coloured positions on a fixed 16-vertex board and the predicates shared by
//! the solver, the book verifier and the rules module.
//!
//! A position is a pair of symmetric bit matrices, one per colour. Rows are
//! `u16` neighbour masks, so every predicate here is a handful of popcounts.

use std::fmt;

/// Vertex capacity of the bit-matrix board. Hex labels in strategy books
/// stop at `F`, so 16 is also the representable limit of the book format.
pub const MAX_VERTICES: usize = 16;

/// An undirected edge on the bounded board, stored as given (not normalised).
pub type Edge = (u8, u8);

#[inline]
pub fn normalise(e: Edge) -> Edge {
    if e.0 <= e.1 {
        e
    } else {
        (e.1, e.0)
    }
}

#[inline]
const fn bit(v: u8) -> u16 {
    1u16 << v
}

/// The two players' colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'r',
            Colour::Blue => 'b',
        }
    }
}

/// Symmetric adjacency matrix with zero diagonal, one `u16` row per vertex.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: [u16; MAX_VERTICES],
}

impl BitMatrix {
    pub const fn empty() -> Self {
        BitMatrix {
            rows: [0; MAX_VERTICES],
        }
    }

    #[inline]
    pub fn has(&self, a: u8, b: u8) -> bool {
        self.rows[a as usize] & bit(b) != 0
    }

    #[inline]
    pub fn set(&mut self, a: u8, b: u8) {
        self.rows[a as usize] |= bit(b);
        self.rows[b as usize] |= bit(a);
    }

    #[inline]
    pub fn clear(&mut self, a: u8, b: u8) {
        self.rows[a as usize] &= !bit(b);
        self.rows[b as usize] &= !bit(a);
    }

    #[inline]
    pub fn row(&self, v: u8) -> u16 {
        self.rows[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: u8) -> u32 {
        self.rows[v as usize].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(i, j)` with `i < j`, row-major.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..MAX_VERTICES as u8).flat_map(move |i| {
            let upper = self.rows[i as usize] & !((bit(i) << 1).wrapping_sub(1));
            BitIter(upper).map(move |j| (i, j))
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.edges()).finish()
    }
}

/// Iterates the set bits of a row, lowest first.
#[derive(Clone, Copy)]
pub struct BitIter(pub u16);

impl Iterator for BitIter {
    type Item = u8;

    #[inline]
    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as u8;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// True iff adding `a–b` to the C4-free red graph closes a red 4-cycle
/// through `a–b`, i.e. a red path of length three joins `a` and `b`.
#[inline]
pub fn has_c4_with(red: &BitMatrix, a: u8, b: u8) -> bool {
    debug_assert!(!red.has(a, b));
    let na = red.row(a);
    if na == 0 {
        return false;
    }
    BitIter(red.row(b)).any(|x| red.row(x) & na != 0)
}

/// True iff the blue linear forest stays a linear forest after adding `a–b`.
pub fn blue_extends_to_paths(blue: &BitMatrix, a: u8, b: u8) -> bool {
    if a == b || blue.has(a, b) {
        return false;
    }
    let (da, db) = (blue.degree(a), blue.degree(b));
    if da > 1 || db > 1 {
        return false;
    }
    if da == 0 || db == 0 {
        return true;
    }
    path_far_end(blue, a) != b
}

/// Walks from a path end to the other end of its component.
fn path_far_end(blue: &BitMatrix, start: u8) -> u8 {
    let mut prev_mask = 0u16;
    let mut cur = start;
    loop {
        let next = blue.row(cur) & !prev_mask;
        if next == 0 {
            return cur;
        }
        prev_mask = bit(cur);
        cur = next.trailing_zeros() as u8;
    }
}

/// True iff the blue graph is exactly one path on `n` vertices and has no
/// other blue edge.
pub fn blue_is_target_path(blue: &BitMatrix, n: usize) -> bool {
    if n < 2 || blue.edge_count() != n - 1 {
        return false;
    }
    let mut touched = 0u16;
    let mut start = None;
    for v in 0..MAX_VERTICES as u8 {
        match blue.degree(v) {
            0 => {}
            1 | 2 => {
                touched |= bit(v);
                if blue.degree(v) == 1 && start.is_none() {
                    start = Some(v);
                }
            }
            _ => return false,
        }
    }
    if touched.count_ones() as usize != n {
        return false;
    }
    let Some(start) = start else { return false };
    let mut seen = bit(start);
    let mut frontier = bit(start);
    while frontier != 0 {
        let mut next = 0u16;
        for v in BitIter(frontier) {
            next |= blue.row(v);
        }
        next &= !seen;
        seen |= next;
        frontier = next;
    }
    seen == touched
}

/// A game position on the bounded board.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ColouredGraph {
    blue: BitMatrix,
    red: BitMatrix,
    blue_edges: u8,
    red_edges: u8,
    used: u8,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0:X}{1:X} is already coloured")]
    AlreadyColoured(u8, u8),
    #[error("edge {0:X}{1:X} is a loop or exceeds the {MAX_VERTICES}-vertex board")]
    BadEdge(u8, u8),
    #[error("edge {0:X}{1:X} is not coloured {2:?}")]
    NotColoured(u8, u8, Colour),
}

impl ColouredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(red: &[Edge], blue: &[Edge]) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for &(a, b) in blue {
            g.add(a, b, Colour::Blue)?;
        }
        for &(a, b) in red {
            g.add(a, b, Colour::Red)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn blue(&self) -> &BitMatrix {
        &self.blue
    }

    #[inline]
    pub fn red(&self) -> &BitMatrix {
        &self.red
    }

    #[inline]
    pub fn blue_count(&self) -> usize {
        self.blue_edges as usize
    }

    #[inline]
    pub fn red_count(&self) -> usize {
        self.red_edges as usize
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        (self.blue_edges + self.red_edges) as usize
    }

    /// One past the highest vertex index touched by an edge.
    #[inline]
    pub fn used_vertices(&self) -> usize {
        self.used as usize
    }

    #[inline]
    pub fn is_coloured(&self, a: u8, b: u8) -> bool {
        self.blue.has(a, b) || self.red.has(a, b)
    }

    pub fn colour_of(&self, a: u8, b: u8) -> Option<Colour> {
        if self.blue.has(a, b) {
            Some(Colour::Blue)
        } else if self.red.has(a, b) {
            Some(Colour::Red)
        } else {
            None
        }
    }

    /// Adds an uncoloured edge in the given colour.
    pub fn add(&mut self, a: u8, b: u8, colour: Colour) -> Result<(), GraphError> {
        if a == b || a as usize >= MAX_VERTICES || b as usize >= MAX_VERTICES {
            return Err(GraphError::BadEdge(a, b));
        }
        if self.is_coloured(a, b) {
            return Err(GraphError::AlreadyColoured(a, b));
        }
        self.add_unchecked(a, b, colour);
        Ok(())
    }

    #[inline]
    pub(crate) fn add_unchecked(&mut self, a: u8, b: u8, colour: Colour) {
        match colour {
            Colour::Blue => {
                self.blue.set(a, b);
                self.blue_edges += 1;
            }
            Colour::Red => {
                self.red.set(a, b);
                self.red_edges += 1;
            }
        }
        self.used = self.used.max(a + 1).max(b + 1);
    }

    /// Removes a coloured edge. `used_vertices` is recomputed.
    pub fn remove(&mut self, a: u8, b: u8, colour: Colour) -> Result<(), GraphError> {
        match colour {
            Colour::Blue if self.blue.has(a, b) => {
                self.blue.clear(a, b);
                self.blue_edges -= 1;
            }
            Colour::Red if self.red.has(a, b) => {
                self.red.clear(a, b);
                self.red_edges -= 1;
            }
            _ => return Err(GraphError::NotColoured(a, b, colour)),
        }
        self.used = (0..MAX_VERTICES as u8)
            .rev()
            .find(|&v| self.blue.row(v) | self.red.row(v) != 0)
            .map_or(0, |v| v + 1);
        Ok(())
    }

    /// Red edges `(i, j)`, `i < j`, row-major.
    pub fn red_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.red.edges()
    }

    /// Blue edges `(i, j)`, `i < j`, row-major.
    pub fn blue_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.blue.edges()
    }

    /// True iff the coloured edges form one connected graph (vacuous when empty).
    pub fn is_connected(&self) -> bool {
        let mut touched = 0u16;
        for v in 0..MAX_VERTICES as u8 {
            if self.blue.row(v) | self.red.row(v) != 0 {
                touched |= bit(v);
            }
        }
        if touched == 0 {
            return true;
        }
        let start = touched.trailing_zeros() as u8;
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= self.blue.row(v) | self.red.row(v);
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        seen == touched
    }
}

impl fmt::Debug for ColouredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColouredGraph")
            .field("red", &self.red)
            .field("blue", &self.blue)
            .finish()
    }
}

/// Packed degree-sorted position: blue edges in the strict lower triangle,
/// red edges in the strict upper triangle.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionKey([u16; MAX_VERTICES]);

impl PositionKey {
    pub fn rows(&self) -> &[u16; MAX_VERTICES] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    /// Rebuilds the sorted position the key encodes.
    pub fn to_graph(&self) -> ColouredGraph {
        let mut g = ColouredGraph::new();
        for i in 0..MAX_VERTICES as u8 {
            for j in BitIter(self.0[i as usize]) {
                if j < i {
                    g.add_unchecked(i, j, Colour::Blue);
                } else {
                    g.add_unchecked(i, j, Colour::Red);
                }
            }
        }
        g
    }
}

impl fmt::Debug for PositionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PositionKey(")?;
        for r in &self.0 {
            write!(f, "{r:04x}")?;
        }
        write!(f, ")")
    }
}

/// Vertex relabelling produced by [`canonical_key`].
///
/// `order[s]` is the board vertex placed at sorted position `s`, `inverse`
/// maps the other way. Labels at or beyond the sorted range are fixed.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Relabel {
    order: [u8; MAX_VERTICES],
    inverse: [u8; MAX_VERTICES],
}

impl Relabel {
    pub fn identity() -> Self {
        let mut order = [0u8; MAX_VERTICES];
        for (i, o) in order.iter_mut().enumerate() {
            *o = i as u8;
        }
        Relabel {
            order,
            inverse: order,
        }
    }

    /// Board label of sorted label `s`.
    #[inline]
    pub fn to_board(&self, s: u8) -> u8 {
        self.order[s as usize]
    }

    /// Sorted label of board label `b`.
    #[inline]
    pub fn to_sorted(&self, b: u8) -> u8 {
        self.inverse[b as usize]
    }

    pub fn order(&self) -> &[u8; MAX_VERTICES] {
        &self.order
    }
}

impl fmt::Debug for Relabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relabel{:?}", &self.order)
    }
}

/// Sorts the first `v` vertices by descending blue degree, then descending
/// red degree, ties by ascending index, and packs the relabelled position.
pub fn canonical_key(g: &ColouredGraph, v: usize) -> (PositionKey, Relabel) {
    debug_assert!(v <= MAX_VERTICES && v >= g.used_vertices());
    let mut relabel = Relabel::identity();
    let mut sort_keys = [0u32; MAX_VERTICES];
    for i in 0..v {
        let (bd, rd) = (g.blue.degree(i as u8), g.red.degree(i as u8));
        // Larger degrees first; the index breaks ties ascending.
        sort_keys[i] = ((16 - bd) << 10) | ((16 - rd) << 5) | i as u32;
    }
    sort_keys[..v].sort_unstable();
    for (s, k) in sort_keys[..v].iter().enumerate() {
        let orig = (k & 31) as u8;
        relabel.order[s] = orig;
        relabel.inverse[orig as usize] = s as u8;
    }
    let mut rows = [0u16; MAX_VERTICES];
    for s in 0..v {
        let orig = relabel.order[s];
        for t in BitIter(g.blue.row(orig)) {
            let st = relabel.inverse[t as usize];
            if st < s as u8 {
                rows[s] |= bit(st);
            }
        }
        for t in BitIter(g.red.row(orig)) {
            let st = relabel.inverse[t as usize];
            if st > s as u8 {
                rows[s] |= bit(st);
            }
        }
    }
    (PositionKey(rows), relabel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn red_of(edges: &[Edge]) -> BitMatrix {
        let mut m = BitMatrix::empty();
        for &(a, b) in edges {
            m.set(a, b);
        }
        m
    }

    #[test]
    fn c4_closing_edge() {
        let red = red_of(&[(0, 1), (1, 2), (2, 3)]);
        assert!(has_c4_with(&red, 3, 0));
        let tri = red_of(&[(0, 1), (1, 2), (2, 0)]);
        assert!(!has_c4_with(&tri, 0, 3));
    }

    #[test]
    fn c4_needs_a_three_path() {
        // 0 and 2 share neighbours 1 and 3 but no red path of length 3 joins them.
        let red = red_of(&[(0, 1), (1, 2), (0, 3), (2, 3)]);
        assert!(!has_c4_with(&red, 0, 2));
        let mut open = red;
        open.clear(2, 3);
        assert!(has_c4_with(&open, 2, 3));
        assert!(!has_c4_with(&red_of(&[(0, 1), (1, 2)]), 0, 2));
    }

    #[test]
    fn path_extension_rules() {
        let empty = BitMatrix::empty();
        assert!(blue_extends_to_paths(&empty, 0, 1));
        let p = red_of(&[(0, 1), (1, 2)]);
        assert!(!blue_extends_to_paths(&p, 2, 0));
        assert!(!blue_extends_to_paths(&p, 1, 3));
        assert!(blue_extends_to_paths(&p, 2, 3));
        assert!(blue_extends_to_paths(&p, 3, 0));
        let two = red_of(&[(0, 1), (2, 3)]);
        assert!(blue_extends_to_paths(&two, 1, 2));
    }

    #[test]
    fn target_path_is_exact() {
        let p = red_of(&[(0, 1), (1, 2)]);
        assert!(blue_is_target_path(&p, 3));
        assert!(!blue_is_target_path(&p, 4));
        let extra = red_of(&[(0, 1), (1, 2), (3, 4)]);
        assert!(!blue_is_target_path(&extra, 3));
        assert!(!blue_is_target_path(&extra, 4));
        let two_paths = red_of(&[(0, 1), (2, 3), (3, 4)]);
        assert!(!blue_is_target_path(&two_paths, 4));
    }

    #[test]
    fn key_of_empty_and_single_edge() {
        let (k, r) = canonical_key(&ColouredGraph::new(), 0);
        assert!(k.is_zero());
        assert_eq!(r, Relabel::identity());

        let g = ColouredGraph::from_edges(&[], &[(2, 3)]).unwrap();
        let (k, r) = canonical_key(&g, 4);
        assert_eq!(k.rows()[1], 1);
        assert_eq!(k.rows().iter().map(|r| r.count_ones()).sum::<u32>(), 1);
        assert_eq!(r.to_sorted(2), 0);
        assert_eq!(r.to_sorted(3), 1);
        assert_eq!(k.to_graph().blue_edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn apply_and_remove_roundtrip() {
        let mut g = ColouredGraph::new();
        g.add(0, 1, Colour::Blue).unwrap();
        assert_eq!(g.blue_count(), 1);
        assert_eq!(
            g.add(0, 1, Colour::Red),
            Err(GraphError::AlreadyColoured(0, 1))
        );
        let before = g;
        g.add(1, 4, Colour::Red).unwrap();
        assert_eq!(g.used_vertices(), 5);
        g.remove(1, 4, Colour::Red).unwrap();
        assert_eq!(g, before);
    }
}
