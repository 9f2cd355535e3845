//! Brute-force reference implementations, written from the definitions.

use std::collections::HashSet;

use c4pn::engine::Slot;
use c4pn::graph::{BitMatrix, Colour, ColouredGraph, MAX_VERTICES};

pub fn matrix(v: usize, edges: &[(u8, u8)]) -> BitMatrix {
    let mut m = BitMatrix::empty();
    for &(a, b) in edges {
        let (a, b) = (a % v as u8, b % v as u8);
        if a != b {
            m.set(a, b);
        }
    }
    m
}

/// Some red path of length three from `b` to `a` with four distinct vertices.
pub fn c4_oracle(red: &BitMatrix, a: u8, b: u8) -> bool {
    let n = MAX_VERTICES as u8;
    (0..n).any(|x| {
        (0..n).any(|y| {
            x != a
                && x != b
                && y != a
                && y != b
                && x != y
                && red.has(b, x)
                && red.has(x, y)
                && red.has(y, a)
        })
    })
}

/// Degrees at most two and no cycle, by union-find.
pub fn linear_forest(m: &BitMatrix) -> bool {
    let mut parent: Vec<usize> = (0..MAX_VERTICES).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for v in 0..MAX_VERTICES as u8 {
        if m.degree(v) > 2 {
            return false;
        }
    }
    for (a, b) in m.edges() {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Whether adding `a-b` to `blue` keeps it a linear forest.
pub fn extends_oracle(blue: &BitMatrix, a: u8, b: u8) -> bool {
    a != b && !blue.has(a, b) && {
        let mut t = *blue;
        t.set(a, b);
        linear_forest(&t)
    }
}

/// Searches a walk that uses every blue edge once and visits `n` distinct
/// vertices.
pub fn path_oracle(m: &BitMatrix, n: usize) -> bool {
    let total = m.edge_count();
    if total + 1 != n {
        return false;
    }
    fn extend(m: &BitMatrix, at: u8, seen: u16, len: usize, total: usize) -> bool {
        if len == total {
            return true;
        }
        (0..MAX_VERTICES as u8).any(|w| {
            m.has(at, w) && seen & (1 << w) == 0 && extend(m, w, seen | (1 << w), len + 1, total)
        })
    }
    (0..MAX_VERTICES as u8).any(|s| m.degree(s) > 0 && extend(m, s, 1 << s, 0, total))
}

pub fn permutations(v: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..v as u8).collect();
    fn heap(k: usize, p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k % 2 == 0 { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(v, &mut p, &mut out);
    out
}

/// A colour-preserving bijection of `0..v` taking `g` onto `h`, if any.
pub fn isomorphism(g: &ColouredGraph, h: &ColouredGraph, v: usize) -> Option<Vec<u8>> {
    if g.red_count() != h.red_count() || g.blue_count() != h.blue_count() {
        return None;
    }
    permutations(v).into_iter().find(|p| {
        g.red_edges()
            .all(|(a, b)| h.red().has(p[a as usize], p[b as usize]))
            && g.blue_edges()
                .all(|(a, b)| h.blue().has(p[a as usize], p[b as usize]))
    })
}

pub fn isomorphic(g: &ColouredGraph, h: &ColouredGraph, v: usize) -> bool {
    isomorphism(g, h, v).is_some()
}

pub fn small_position(v: usize, edges: &[(u8, u8, bool)]) -> ColouredGraph {
    let mut g = ColouredGraph::new();
    for &(a, b, blue) in edges {
        let (a, b) = (a % v as u8, b % v as u8);
        if a != b && !g.is_coloured(a, b) {
            let c = if blue { Colour::Blue } else { Colour::Red };
            g.add(a, b, c).unwrap();
        }
    }
    g
}

/// `g` with vertex `x` renamed `p[x]`.
pub fn relabel(g: &ColouredGraph, p: &[u8]) -> ColouredGraph {
    let mut h = ColouredGraph::new();
    for (a, b) in g.red_edges() {
        h.add(p[a as usize], p[b as usize], Colour::Red).unwrap();
    }
    for (a, b) in g.blue_edges() {
        h.add(p[a as usize], p[b as usize], Colour::Blue).unwrap();
    }
    h
}

/// Vertices of the forcing graph with `s` pendants per wing.
pub fn slots(s: usize) -> Vec<Slot> {
    let mut v: Vec<Slot> = (0..s).map(Slot::X).chain((0..s).map(Slot::Y)).collect();
    v.extend([Slot::U2, Slot::U3, Slot::U4, Slot::U5]);
    v
}

pub fn side(v: Slot) -> u8 {
    match v {
        Slot::X(_) | Slot::U2 | Slot::U5 => 0,
        _ => 1,
    }
}

/// Complete bipartite between the two sides, less `u2u4`, `u4u5`, `u3u5`.
pub fn forcing_edge(a: Slot, b: Slot) -> bool {
    let removed = [
        (Slot::U2, Slot::U4),
        (Slot::U4, Slot::U5),
        (Slot::U5, Slot::U3),
    ];
    side(a) != side(b)
        && !removed
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
}

/// Checks that `path` is a Hamiltonian path of the forcing graph from `w1`
/// to `w2`.
pub fn check_forcing_path(s: usize, path: &[Slot], w1: Slot, w2: Slot) -> Result<(), String> {
    let all: HashSet<Slot> = slots(s).into_iter().collect();
    if path.len() != 2 * s + 4 {
        return Err(format!("length {}", path.len()));
    }
    if path.iter().copied().collect::<HashSet<_>>() != all {
        return Err("does not cover every vertex once".into());
    }
    if (path[0], path[path.len() - 1]) != (w1, w2) {
        return Err(format!("ends {} {}", path[0], path[path.len() - 1]));
    }
    for w in path.windows(2) {
        if !forcing_edge(w[0], w[1]) {
            return Err(format!("{} {} is not an edge", w[0], w[1]));
        }
    }
    Ok(())
}
