//! Stages 2 and 3 of the empty-board strategy, the handlers for a first blue
//! edge after the opening, and the endgame on an almost balanced coloured
//! butterfly.

use super::butterfly::{path_edges, Butterfly};
use super::{Decision, EngineError, Op};
use crate::board::{Board, Vertex};
use crate::graph::Colour;
use crate::rules::StartTag;

/// Which endgame plan applies to a coloured butterfly, keyed by the wing
/// size difference and the blue degrees of the two centres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndgameCase {
    /// Force a path between the centres and extend it by the blue pendants.
    ThroughCentres,
    /// Join one blue pendant into each wing, then force a path avoiding both
    /// centres.
    JoinBothWings,
    /// Join the first centre's blue pendant into the other wing, force a path
    /// from the second centre, and close with one more forced edge.
    JoinOtherWing,
    /// Mirror image of [`EndgameCase::JoinOtherWing`].
    JoinOtherWingMirrored,
    /// Join both ends of the first centre's blue path into the other wing,
    /// then as [`EndgameCase::JoinOtherWing`].
    JoinTwice,
}

/// Case lookup for `(s' - s, blue degree of c1, blue degree of c2)`.
pub fn endgame_case(diff: usize, db1: usize, db2: usize) -> Option<EndgameCase> {
    use EndgameCase::*;
    Some(match (diff, db1, db2) {
        (0, 1, 0) => JoinOtherWing,
        (0, 1, 1) => ThroughCentres,
        (0, 2, 0) => JoinTwice,
        (0, 2, 1) => JoinOtherWing,
        (0, 2, 2) => JoinBothWings,
        (1, 1, 0) => ThroughCentres,
        (1, 1, 1) => JoinOtherWingMirrored,
        (1, 2, 0) => JoinOtherWing,
        (1, 2, 1) => JoinBothWings,
        _ => return None,
    })
}

/// A coloured butterfly: red arms and centre edge, wings of red and blue
/// pendants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredButterfly {
    /// Red part; its wings hold the red pendants only.
    pub red: Butterfly,
    pub blue: [Vec<Vertex>; 2],
}

impl ColouredButterfly {
    fn oriented(&self, first: usize) -> ColouredButterfly {
        if first == 0 {
            self.clone()
        } else {
            ColouredButterfly {
                red: self.red.swapped(),
                blue: [self.blue[1].clone(), self.blue[0].clone()],
            }
        }
    }

    /// Orients the butterfly so that its first centre is `c1` of the endgame
    /// and returns the applicable case.
    pub fn classify(&self) -> Result<(ColouredButterfly, EndgameCase), EngineError> {
        for first in 0..2 {
            let h = self.oriented(first);
            let size = |i: usize| h.red.wings[i].len() + h.blue[i].len();
            let (sp, s) = (size(0), size(1));
            let (db1, db2) = (h.blue[0].len(), h.blue[1].len());
            let ok = sp >= s
                && sp - s <= 1
                && s >= 2
                && h.red.wings.iter().all(|w| w.len() >= 2)
                && (1..=2).contains(&db1)
                && db2 <= db1
                && (db1 < 2 || db2 < 2 || sp == s);
            if ok {
                if let Some(c) = endgame_case(sp - s, db1, db2) {
                    return Ok((h, c));
                }
            }
        }
        Err(EngineError::Hypothesis(format!(
            "coloured butterfly fits no endgame case: red wings {:?}, blue {:?}",
            self.red.wings, self.blue
        )))
    }
}

fn forces(path: &[Vertex]) -> Vec<Op> {
    path_edges(path)
        .into_iter()
        .map(|(a, b)| Op::Force(a, b))
        .collect()
}

/// Endgame on a classified coloured butterfly.
#[derive(Clone, Debug)]
pub struct Endgame {
    pub case: EndgameCase,
    h: ColouredButterfly,
    /// `(from, side)`: join `from` to a red pendant of wing `side`.
    probes: Vec<(Vertex, usize)>,
    joined: Vec<Vertex>,
    tried: Vec<Vertex>,
    awaiting: Option<(Vertex, Vertex, Vertex)>,
    queued: Vec<Op>,
    finished: bool,
}

impl Endgame {
    pub fn new(h: ColouredButterfly, case: EndgameCase) -> Endgame {
        use EndgameCase::*;
        let b = |i: usize| h.blue[i][0];
        let probes = match case {
            ThroughCentres => vec![],
            JoinBothWings => vec![(b(0), 0), (b(1), 1)],
            JoinOtherWing => vec![(b(0), 1)],
            JoinOtherWingMirrored => vec![(b(1), 0)],
            JoinTwice => vec![(b(0), 1), (h.blue[0][1], 1)],
        };
        Endgame {
            case,
            h,
            probes,
            joined: Vec::new(),
            tried: Vec::new(),
            awaiting: None,
            queued: Vec::new(),
            finished: false,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub(super) fn decide(&mut self) -> Result<Decision, EngineError> {
        if !self.queued.is_empty() {
            return Ok(Decision::Ops(std::mem::take(&mut self.queued)));
        }
        if self.finished {
            return Err(EngineError::NoMove);
        }
        if let Some(&(from, side)) = self.probes.get(self.joined.len()) {
            let mut cand = self.h.red.wings[side]
                .iter()
                .copied()
                .filter(|v| !self.joined.contains(v) && !self.tried.contains(v));
            let (Some(x), Some(y)) = (cand.next(), cand.next()) else {
                return Err(EngineError::Hypothesis(format!(
                    "wing {side} has too few red pendants to join {from}"
                )));
            };
            self.awaiting = Some((from, x, y));
            return Ok(Decision::Select((from, x), "malo"));
        }
        self.finished = true;
        Ok(Decision::Ops(self.final_ops()?))
    }

    pub(super) fn observe(&mut self, colour: Colour) -> Result<(), EngineError> {
        let (from, x, y) = self
            .awaiting
            .take()
            .ok_or_else(|| EngineError::Hypothesis("endgame observed an unexpected move".into()))?;
        match colour {
            Colour::Blue => self.joined.push(x),
            Colour::Red => {
                self.tried.push(x);
                self.joined.push(y);
                self.queued.push(Op::Force(from, y));
            }
        }
        Ok(())
    }

    fn final_ops(&self) -> Result<Vec<Op>, EngineError> {
        use EndgameCase::*;
        let b = &self.h.red;
        Ok(match self.case {
            ThroughCentres => forces(&b.path_between_centres()?),
            JoinBothWings => forces(&b.path_avoiding_centres(self.joined[0], self.joined[1])?),
            JoinOtherWing | JoinTwice => {
                let y = self.joined[0];
                let mut rest = b.without_pendant(1, y)?;
                if self.case == JoinTwice {
                    rest = rest.without_pendant(1, self.joined[1])?;
                }
                Self::path_then_close(&rest.swapped(), y)?
            }
            JoinOtherWingMirrored => {
                let y = self.joined[0];
                Self::path_then_close(&b.without_pendant(0, y)?, y)?
            }
        })
    }

    /// Forces a path from the first centre of `b` to a pendant `z` of the
    /// second, then the edge `y-z`.
    fn path_then_close(b: &Butterfly, y: Vertex) -> Result<Vec<Op>, EngineError> {
        let z = *b.wings[1]
            .last()
            .ok_or_else(|| EngineError::Hypothesis("empty wing".into()))?;
        let mut ops = forces(&b.path_from_first_centre(z)?);
        ops.push(Op::Force(y, z));
        Ok(ops)
    }
}

#[derive(Clone, Debug)]
enum State {
    Stage2 {
        selected: Option<(usize, Vertex)>,
    },
    Stage3 {
        selected: Option<Vertex>,
    },
    Stage3Blue {
        fresh: Vertex,
        selected: bool,
    },
    /// Extra pendant rounds before the endgame.
    Extra {
        left: usize,
        centre: usize,
        blue: [Vec<Vertex>; 2],
        selected: Option<Vertex>,
    },
    Endgame(Box<Endgame>),
    Queued(Vec<Op>),
    Done,
}

/// Builder after an all-red opening: grows the butterfly one pendant per
/// round and reacts to the first blue edge.
#[derive(Clone, Debug)]
pub struct Stages {
    n: usize,
    /// Opening labels: centres 0,1; arms 0-2-6 and 1-4-7; pendants 3 and 5.
    u: [Vertex; 8],
    wings: [Vec<Vertex>; 2],
    state: State,
}

impl Stages {
    pub fn new(n: usize, u: [Vertex; 8]) -> Stages {
        Stages {
            n,
            u,
            wings: [vec![u[3]], vec![u[5]]],
            state: State::Stage2 { selected: None },
        }
    }

    pub fn endgame_case(&self) -> Option<EndgameCase> {
        match &self.state {
            State::Endgame(e) => Some(e.case),
            _ => None,
        }
    }

    fn butterfly(&self) -> Butterfly {
        Butterfly {
            centres: [self.u[0], self.u[1]],
            arms: [(self.u[2], self.u[6]), (self.u[4], self.u[7])],
            wings: self.wings.clone(),
        }
    }

    fn last(&self, side: usize) -> Result<Vertex, EngineError> {
        self.wings[side]
            .last()
            .copied()
            .ok_or_else(|| EngineError::Hypothesis("empty wing".into()))
    }

    pub(super) fn decide(
        &mut self,
        view: &Board,
        next_fresh: Vertex,
    ) -> Result<Decision, EngineError> {
        let n = self.n;
        loop {
            match &mut self.state {
                State::Stage2 { selected } => {
                    let e = view.edge_count();
                    let end = if n % 2 == 0 { n - 1 } else { n - 2 };
                    if e < end {
                        let centre = if (e + 1) % 2 == 0 { 0 } else { 1 };
                        *selected = Some((centre, next_fresh));
                        return Ok(Decision::Select((self.u[centre], next_fresh), "stage2"));
                    }
                    if n % 2 == 0 {
                        let ops = forces(&self.butterfly().path_between_centres()?);
                        self.state = State::Queued(ops);
                    } else {
                        self.state = State::Stage3 { selected: None };
                    }
                }
                State::Stage3 { selected } => {
                    *selected = Some(next_fresh);
                    let tip = self.last(1)?;
                    return Ok(Decision::Select((tip, next_fresh), "stage3"));
                }
                State::Stage3Blue { fresh, selected } => {
                    *selected = true;
                    let fresh = *fresh;
                    return Ok(Decision::Select((fresh, self.last(0)?), "stage3"));
                }
                State::Extra {
                    left,
                    centre,
                    blue,
                    selected,
                } => {
                    if *left > 0 {
                        *selected = Some(next_fresh);
                        return Ok(Decision::Select((self.u[*centre], next_fresh), "stage2"));
                    }
                    let blue = std::mem::take(blue);
                    let h = ColouredButterfly {
                        red: self.butterfly(),
                        blue,
                    };
                    let (h, case) = h.classify()?;
                    self.state = State::Endgame(Box::new(Endgame::new(h, case)));
                }
                State::Endgame(g) => {
                    if g.is_finished() && g.queued.is_empty() {
                        self.state = State::Done;
                        continue;
                    }
                    return g.decide();
                }
                State::Queued(ops) => {
                    let ops = std::mem::take(ops);
                    self.state = State::Done;
                    return Ok(Decision::Ops(ops));
                }
                State::Done => return Err(EngineError::NoMove),
            }
        }
    }

    pub(super) fn observe(
        &mut self,
        (a, b): (Vertex, Vertex),
        colour: Colour,
        view: &Board,
    ) -> Result<(), EngineError> {
        let red = colour == Colour::Red;
        match &mut self.state {
            State::Stage2 { selected } => {
                let (centre, x) = selected.take().ok_or(EngineError::NotAwaiting)?;
                if red {
                    self.wings[centre].push(x);
                } else {
                    self.first_blue(view.edge_count(), centre, x)?;
                }
            }
            State::Stage3 { selected } => {
                let fresh = selected.take().ok_or(EngineError::NotAwaiting)?;
                let b = self.butterfly();
                if red {
                    let mut ops = forces(&b.path_between_centres()?);
                    ops.push(Op::Force(self.u[0], fresh));
                    self.state = State::Queued(ops);
                } else {
                    b.check_red(view)?;
                    self.state = State::Stage3Blue {
                        fresh,
                        selected: false,
                    };
                }
            }
            State::Stage3Blue { fresh, selected } => {
                if !*selected {
                    return Err(EngineError::NotAwaiting);
                }
                let fresh = *fresh;
                let (w, tip) = (self.last(0)?, self.last(1)?);
                let b = self.butterfly();
                let ops = if red {
                    let inner = b.without_pendant(0, w)?.without_pendant(1, tip)?;
                    let mut ops = forces(&inner.path_between_centres()?);
                    ops.push(Op::Force(self.u[1], fresh));
                    ops.push(Op::Force(tip, w));
                    ops
                } else {
                    let p = b.path_between_centres_through((w, tip))?;
                    forces(&p)
                        .into_iter()
                        .filter(|op| !matches!(op, &Op::Force(x, y) if (x, y) == (w, tip) || (y, x) == (w, tip)))
                        .collect()
                };
                self.state = State::Queued(ops);
            }
            State::Extra {
                left,
                centre,
                blue,
                selected,
            } => {
                let x = selected.take().ok_or(EngineError::NotAwaiting)?;
                if red {
                    self.wings[*centre].push(x);
                } else {
                    blue[*centre].push(x);
                }
                *left -= 1;
                *centre ^= 1;
            }
            State::Endgame(g) => g.observe(colour)?,
            _ => {
                return Err(EngineError::UnexpectedMove {
                    got: (a, b),
                    want: None,
                })
            }
        }
        Ok(())
    }

    /// Dispatch on the round `t` of the first blue edge `u_centre - x`.
    fn first_blue(&mut self, t: usize, centre: usize, x: Vertex) -> Result<(), EngineError> {
        let n = self.n;
        let late = t + 3 == n || t + 2 == n || (n % 2 == 0 && (t + 1 == n || t + 4 == n));
        if late {
            let mut blue = [Vec::new(), Vec::new()];
            blue[centre].push(x);
            self.state = State::Extra {
                left: n - t - 1,
                centre: 1,
                blue,
                selected: None,
            };
            return Ok(());
        }
        let (u0, u1) = (self.u[0], self.u[1]);
        let b = self.butterfly();
        let branch = format!(
            "first-blue-{}",
            if t <= 9 {
                t.to_string()
            } else if t % 2 == 0 {
                "even".into()
            } else {
                "odd".into()
            }
        );
        let (forced, path, m, tag, order) = match t {
            8 => {
                let p = b.path_between_centres()?;
                let mut path = vec![x];
                path.extend(&p);
                (p, path, 2 * t - 1, StartTag::B, vec![x, u1])
            }
            9 => {
                let y = self.last(0)?;
                let p = b.without_pendant(0, y)?.path_between_centres()?;
                let mut path = p.clone();
                path.push(x);
                (p, path, 2 * t - 3, StartTag::Br, vec![x, u0, y])
            }
            _ if t % 2 == 0 => {
                let y = self.last(1)?;
                let p = b.path_from_first_centre(y)?;
                let mut path = vec![x];
                path.extend(&p);
                (p, path, 2 * t - 3, StartTag::Br, vec![x, y, u1])
            }
            _ => {
                let z = self.last(0)?;
                let sw = b.without_pendant(0, z)?.swapped();
                let y = *sw.wings[1].last().ok_or(EngineError::NoMove)?;
                let p = sw.path_from_first_centre(y)?;
                let mut path = vec![x];
                path.extend(&p);
                (p, path, 2 * t - 5, StartTag::Brr, vec![x, y, u0, z])
            }
        };
        let mut ops = forces(&forced);
        ops.push(Op::Contract { path, m, branch });
        ops.push(Op::Residual { tag, order });
        self.state = State::Queued(ops);
        Ok(())
    }
}
