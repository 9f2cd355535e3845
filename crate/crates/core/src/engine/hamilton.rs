//! Hamiltonian paths in the forcing graph of a red `(s,s)`-butterfly.
//!
//! The graph is `K_{s+2,s+2}` with parts `{x_1..x_s, u2, u5}` and
//! `{y_1..y_s, u3, u4}`, minus the three edges of the path `u2 u4 u5 u3`.
//! Vertex names follow the butterfly labelling in [`super::butterfly`].

use std::fmt;

/// A vertex of the forcing graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// `i`-th pendant of the first centre, 0-based.
    X(usize),
    /// `i`-th pendant of the second centre, 0-based.
    Y(usize),
    U2,
    U3,
    U4,
    U5,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::X(i) => write!(f, "x{}", i + 1),
            Slot::Y(i) => write!(f, "y{}", i + 1),
            Slot::U2 => f.write_str("u2"),
            Slot::U3 => f.write_str("u3"),
            Slot::U4 => f.write_str("u4"),
            Slot::U5 => f.write_str("u5"),
        }
    }
}

impl Slot {
    /// 0 for the part holding the `x`'s, 1 for the part holding the `y`'s.
    pub fn part(self) -> usize {
        match self {
            Slot::X(_) | Slot::U2 | Slot::U5 => 0,
            Slot::Y(_) | Slot::U3 | Slot::U4 => 1,
        }
    }

    pub fn exists(self, s: usize) -> bool {
        match self {
            Slot::X(i) | Slot::Y(i) => i < s,
            _ => true,
        }
    }
}

/// True iff `a-b` is an edge of the forcing graph (both slots assumed valid).
pub fn adjacent(a: Slot, b: Slot) -> bool {
    if a.part() == b.part() {
        return false;
    }
    let missing = [
        (Slot::U2, Slot::U4),
        (Slot::U4, Slot::U5),
        (Slot::U5, Slot::U3),
    ];
    !missing
        .iter()
        .any(|&(p, q)| (p, q) == (a, b) || (q, p) == (a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HamiltonError {
    #[error("wing size must be at least 1")]
    EmptyWings,
    #[error("endpoint {0} does not exist for s={1}")]
    NoSuchSlot(Slot, usize),
    #[error("endpoints {0} and {1} must lie in different parts")]
    SamePart(Slot, Slot),
    #[error("for s=1 only the endpoints u4,u5 are supported")]
    SmallButterfly,
    #[error("required edge {0}-{1} is not an edge of the forcing graph")]
    BadRequiredEdge(Slot, Slot),
    #[error("no hamiltonian path from {0} to {1}")]
    NotFound(Slot, Slot),
}

const STEP_LIMIT: usize = 5_000_000;

struct Search {
    slots: Vec<Slot>,
    adj: Vec<Vec<usize>>,
    visited: Vec<bool>,
    path: Vec<usize>,
    end: usize,
    required: Option<(usize, usize)>,
    steps: usize,
}

impl Search {
    fn unvisited_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&w| !self.visited[w]).count()
    }

    fn partner(&self, v: usize) -> Option<usize> {
        match self.required {
            Some((a, b)) if a == v => Some(b),
            Some((a, b)) if b == v => Some(a),
            _ => None,
        }
    }

    fn run(&mut self) -> bool {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return false;
        }
        let cur = *self.path.last().expect("path starts non-empty");
        if self.path.len() == self.slots.len() {
            return cur == self.end;
        }
        if cur == self.end {
            return false;
        }
        let forced = self.partner(cur).filter(|&p| !self.visited[p]);
        let mut next: Vec<usize> = match forced {
            Some(p) => vec![p],
            None => self.adj[cur]
                .iter()
                .copied()
                .filter(|&w| !self.visited[w])
                .filter(|&w| {
                    self.partner(w)
                        .map_or(true, |p| !self.visited[p] || p == cur)
                })
                .collect(),
        };
        // Fewest onward options first; the far end last.
        next.sort_by_key(|&w| (w == self.end, self.unvisited_degree(w)));
        for w in next {
            self.visited[w] = true;
            self.path.push(w);
            if self.run() {
                return true;
            }
            self.path.pop();
            self.visited[w] = false;
        }
        false
    }
}

fn all_slots(s: usize) -> Vec<Slot> {
    let mut v: Vec<Slot> = (0..s).map(Slot::X).collect();
    v.extend([Slot::U2, Slot::U5]);
    v.extend((0..s).map(Slot::Y));
    v.extend([Slot::U3, Slot::U4]);
    v
}

/// A hamiltonian path of the forcing graph of an `(s,s)`-butterfly from `w1`
/// to `w2`. Supported: `s >= 2` with endpoints in different parts, and
/// `s = 1` with endpoints `{u4, u5}`.
pub fn hamilton_path(s: usize, w1: Slot, w2: Slot) -> Result<Vec<Slot>, HamiltonError> {
    search(s, w1, w2, None)
}

/// As [`hamilton_path`], but the path must use the edge `required`.
pub fn hamilton_path_through(
    s: usize,
    w1: Slot,
    w2: Slot,
    required: (Slot, Slot),
) -> Result<Vec<Slot>, HamiltonError> {
    search(s, w1, w2, Some(required))
}

fn search(
    s: usize,
    w1: Slot,
    w2: Slot,
    required: Option<(Slot, Slot)>,
) -> Result<Vec<Slot>, HamiltonError> {
    if s == 0 {
        return Err(HamiltonError::EmptyWings);
    }
    for w in [w1, w2] {
        if !w.exists(s) {
            return Err(HamiltonError::NoSuchSlot(w, s));
        }
    }
    if w1.part() == w2.part() {
        return Err(HamiltonError::SamePart(w1, w2));
    }
    if s == 1 && !matches!((w1, w2), (Slot::U4, Slot::U5) | (Slot::U5, Slot::U4)) {
        return Err(HamiltonError::SmallButterfly);
    }
    if let Some((a, b)) = required {
        if !a.exists(s) || !b.exists(s) || !adjacent(a, b) {
            return Err(HamiltonError::BadRequiredEdge(a, b));
        }
    }
    let slots = all_slots(s);
    let idx = |x: Slot| slots.iter().position(|&y| y == x).expect("slot exists");
    let adj = slots
        .iter()
        .map(|&a| {
            (0..slots.len())
                .filter(|&j| adjacent(a, slots[j]))
                .collect()
        })
        .collect();
    let start = idx(w1);
    let mut st = Search {
        adj,
        visited: vec![false; slots.len()],
        path: vec![start],
        end: idx(w2),
        required: required.map(|(a, b)| (idx(a), idx(b))),
        steps: 0,
        slots,
    };
    st.visited[start] = true;
    if st.run() {
        Ok(st.path.iter().map(|&i| st.slots[i]).collect())
    } else {
        Err(HamiltonError::NotFound(w1, w2))
    }
}

/// Independent validity check of a claimed hamiltonian path.
pub fn check_hamilton_path(s: usize, path: &[Slot], w1: Slot, w2: Slot) -> Result<(), String> {
    let want = 2 * s + 4;
    if path.len() != want {
        return Err(format!("path has {} vertices, expected {want}", path.len()));
    }
    if path.first() != Some(&w1) || path.last() != Some(&w2) {
        return Err(format!("path does not run from {w1} to {w2}"));
    }
    let mut seen = std::collections::HashSet::new();
    for &v in path {
        if !v.exists(s) {
            return Err(format!("{v} is not a vertex for s={s}"));
        }
        if !seen.insert(v) {
            return Err(format!("{v} visited twice"));
        }
    }
    let deleted = [
        (Slot::U2, Slot::U4),
        (Slot::U4, Slot::U5),
        (Slot::U5, Slot::U3),
    ];
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.part() == b.part() {
            return Err(format!("{a}-{b} does not alternate parts"));
        }
        if deleted.contains(&(a, b)) || deleted.contains(&(b, a)) {
            return Err(format!("{a}-{b} is a deleted edge"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_butterfly() {
        let p = hamilton_path(1, Slot::U4, Slot::U5).unwrap();
        check_hamilton_path(1, &p, Slot::U4, Slot::U5).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(
            hamilton_path(1, Slot::X(0), Slot::Y(0)),
            Err(HamiltonError::SmallButterfly)
        );
    }

    #[test]
    fn same_part_rejected() {
        assert!(matches!(
            hamilton_path(3, Slot::X(0), Slot::U2),
            Err(HamiltonError::SamePart(..))
        ));
    }

    #[test]
    fn required_edge_is_used() {
        let p = hamilton_path_through(3, Slot::U5, Slot::U4, (Slot::X(2), Slot::Y(2))).unwrap();
        check_hamilton_path(3, &p, Slot::U5, Slot::U4).unwrap();
        assert!(p
            .windows(2)
            .any(|w| (w[0], w[1]) == (Slot::X(2), Slot::Y(2))
                || (w[1], w[0]) == (Slot::X(2), Slot::Y(2))));
    }

    #[test]
    fn all_pairs_small_s() {
        for s in 2..=4 {
            let slots = all_slots(s);
            for &a in slots.iter().filter(|x| x.part() == 0) {
                for &b in slots.iter().filter(|x| x.part() == 1) {
                    let p = hamilton_path(s, a, b).unwrap();
                    check_hamilton_path(s, &p, a, b).unwrap();
                }
            }
        }
    }
}
