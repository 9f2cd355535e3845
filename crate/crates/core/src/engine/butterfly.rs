//! Red butterflies and the blue paths Builder can force on them.
//!
//! A butterfly with centres `(c0, c1)` consists of the edge `c0c1`, an arm
//! `c0 - mid0 - tip0` and `c1 - mid1 - tip1`, and a wing of pendant edges at
//! each centre. In forcing-graph names: `u2 = mid0`, `u4 = tip0`,
//! `u3 = mid1`, `u5 = tip1`, the `x`'s are the `c0`-wing and the `y`'s the
//! `c1`-wing.

use super::hamilton::{hamilton_path, hamilton_path_through, HamiltonError, Slot};
use super::EngineError;
use crate::board::{Board, Vertex};
use crate::graph::Colour;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Butterfly {
    pub centres: [Vertex; 2],
    /// `(mid, tip)` of the arm at each centre.
    pub arms: [(Vertex, Vertex); 2],
    pub wings: [Vec<Vertex>; 2],
}

impl Butterfly {
    /// The same butterfly seen from the other centre.
    pub fn swapped(&self) -> Butterfly {
        Butterfly {
            centres: [self.centres[1], self.centres[0]],
            arms: [self.arms[1], self.arms[0]],
            wings: [self.wings[1].clone(), self.wings[0].clone()],
        }
    }

    /// Drops the pendant `v` from the wing of centre `side`.
    pub fn without_pendant(&self, side: usize, v: Vertex) -> Result<Butterfly, EngineError> {
        let mut b = self.clone();
        let before = b.wings[side].len();
        b.wings[side].retain(|&w| w != v);
        if b.wings[side].len() + 1 != before {
            return Err(EngineError::Hypothesis(format!(
                "{v} is not a pendant of centre {}",
                self.centres[side]
            )));
        }
        Ok(b)
    }

    pub fn vertex_count(&self) -> usize {
        6 + self.wings[0].len() + self.wings[1].len()
    }

    /// Red edges of the butterfly.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e = vec![(self.centres[0], self.centres[1])];
        for i in 0..2 {
            let c = self.centres[i];
            let (mid, tip) = self.arms[i];
            e.push((c, mid));
            e.push((mid, tip));
            e.extend(self.wings[i].iter().map(|&w| (c, w)));
        }
        e
    }

    /// Checks that every butterfly edge is red on `board`.
    pub fn check_red(&self, board: &Board) -> Result<(), EngineError> {
        for (a, b) in self.edges() {
            if board.colour_of(a, b) != Some(Colour::Red) {
                return Err(EngineError::Hypothesis(format!(
                    "butterfly edge {a}-{b} is not red"
                )));
            }
        }
        Ok(())
    }

    fn balanced_size(&self) -> Result<usize, EngineError> {
        let (s0, s1) = (self.wings[0].len(), self.wings[1].len());
        if s0 != s1 || s0 == 0 {
            return Err(EngineError::Hypothesis(format!(
                "butterfly wings {s0},{s1} are not balanced"
            )));
        }
        Ok(s0)
    }

    fn vertex(&self, slot: Slot) -> Vertex {
        match slot {
            Slot::X(i) => self.wings[0][i],
            Slot::Y(i) => self.wings[1][i],
            Slot::U2 => self.arms[0].0,
            Slot::U4 => self.arms[0].1,
            Slot::U3 => self.arms[1].0,
            Slot::U5 => self.arms[1].1,
        }
    }

    fn slot(&self, v: Vertex) -> Option<Slot> {
        if let Some(i) = self.wings[0].iter().position(|&w| w == v) {
            return Some(Slot::X(i));
        }
        if let Some(i) = self.wings[1].iter().position(|&w| w == v) {
            return Some(Slot::Y(i));
        }
        [Slot::U2, Slot::U3, Slot::U4, Slot::U5]
            .into_iter()
            .find(|&s| self.vertex(s) == v)
    }

    fn slot_of(&self, v: Vertex) -> Result<Slot, EngineError> {
        self.slot(v).ok_or_else(|| {
            EngineError::Hypothesis(format!("{v} is not a non-centre butterfly vertex"))
        })
    }

    fn to_vertices(&self, p: Result<Vec<Slot>, HamiltonError>) -> Result<Vec<Vertex>, EngineError> {
        Ok(p?.into_iter().map(|s| self.vertex(s)).collect())
    }

    /// A forceable blue path through every butterfly vertex, from `c0` to `c1`.
    pub fn path_between_centres(&self) -> Result<Vec<Vertex>, EngineError> {
        let s = self.balanced_size()?;
        let mid = self.to_vertices(hamilton_path(s, Slot::U5, Slot::U4))?;
        Ok(self.wrap_centres(mid))
    }

    /// As [`Self::path_between_centres`], but the path contains the edge
    /// `a-b` between a `c0`-pendant and a `c1`-pendant.
    pub fn path_between_centres_through(
        &self,
        (a, b): (Vertex, Vertex),
    ) -> Result<Vec<Vertex>, EngineError> {
        let s = self.balanced_size()?;
        let req = (self.slot_of(a)?, self.slot_of(b)?);
        let mid = self.to_vertices(hamilton_path_through(s, Slot::U5, Slot::U4, req))?;
        Ok(self.wrap_centres(mid))
    }

    fn wrap_centres(&self, mid: Vec<Vertex>) -> Vec<Vertex> {
        let mut p = Vec::with_capacity(mid.len() + 2);
        p.push(self.centres[0]);
        p.extend(mid);
        p.push(self.centres[1]);
        p
    }

    /// A forceable blue path through every vertex but `c1`, from `c0` to the
    /// `c1`-pendant `end`.
    pub fn path_from_first_centre(&self, end: Vertex) -> Result<Vec<Vertex>, EngineError> {
        let s = self.balanced_size()?;
        let to = self.slot_of(end)?;
        if !matches!(to, Slot::Y(_)) {
            return Err(EngineError::Hypothesis(format!(
                "{end} is not in the wing of {}",
                self.centres[1]
            )));
        }
        let mid = self.to_vertices(hamilton_path(s, Slot::U5, to))?;
        let mut p = vec![self.centres[0]];
        p.extend(mid);
        Ok(p)
    }

    /// A forceable blue path through every vertex but the centres, from the
    /// `c0`-pendant `from` to the `c1`-pendant `to`.
    pub fn path_avoiding_centres(
        &self,
        from: Vertex,
        to: Vertex,
    ) -> Result<Vec<Vertex>, EngineError> {
        let s = self.balanced_size()?;
        let (a, b) = (self.slot_of(from)?, self.slot_of(to)?);
        if !matches!((a, b), (Slot::X(_), Slot::Y(_))) {
            return Err(EngineError::Hypothesis(format!(
                "{from},{to} are not pendants of different centres"
            )));
        }
        self.to_vertices(hamilton_path(s, a, b))
    }
}

/// Consecutive pairs of a vertex sequence.
pub fn path_edges(path: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    path.windows(2).map(|w| (w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stage_one() -> (Butterfly, Board) {
        // centres 0,1; arms 0-2-6 and 1-4-7; pendants 3 and 5
        let b = Butterfly {
            centres: [0, 1],
            arms: [(2, 6), (4, 7)],
            wings: [vec![3], vec![5]],
        };
        let board = Board::from_edges(&b.edges(), &[]).unwrap();
        (b, board)
    }

    fn play_forced(board: &mut Board, path: &[Vertex]) {
        for (a, b) in path_edges(path) {
            if board.colour_of(a, b).is_some() {
                continue;
            }
            assert!(board.closes_red_c4(a, b), "{a}-{b} is not forced");
            board.add((a, b), Colour::Blue).unwrap();
        }
    }

    #[test]
    fn full_path_on_smallest_butterfly() {
        let (b, mut board) = stage_one();
        b.check_red(&board).unwrap();
        let p = b.path_between_centres().unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!((p[0], p[7]), (0, 1));
        play_forced(&mut board, &p);
        assert!(board.blue_is_path(8));
    }

    #[test]
    fn one_centre_and_no_centre_paths() {
        let b = Butterfly {
            centres: [0, 1],
            arms: [(2, 6), (4, 7)],
            wings: [vec![3, 8], vec![5, 9]],
        };
        let mut board = Board::from_edges(&b.edges(), &[]).unwrap();
        let p = b.path_from_first_centre(9).unwrap();
        assert_eq!(p.len(), 9);
        play_forced(&mut board, &p);
        assert!(board.blue_is_path(9));

        let mut board = Board::from_edges(&b.edges(), &[]).unwrap();
        let q = b.path_avoiding_centres(8, 5).unwrap();
        assert_eq!(q.len(), 8);
        play_forced(&mut board, &q);
        assert!(board.blue_is_path(8));

        let sw = b.swapped();
        let mut board = Board::from_edges(&b.edges(), &[]).unwrap();
        let r = sw.path_from_first_centre(3).unwrap();
        assert_eq!(r[0], 1);
        play_forced(&mut board, &r);
    }
}
