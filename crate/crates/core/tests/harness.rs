mod common;

use std::sync::Arc;

use c4pn::board::{Board, BoardEdge};
use c4pn::book::{BookCursor, BookIndex};
use c4pn::graph::Colour;
use c4pn::harness::{
    run_match, BookBuilder, Builder, MatchSpec, Outcome, Policy, SolverOptimal, Transcript,
};
use c4pn::rules::{
    is_legal_builder_move, legal_builder_moves, terminal_status, GameSpec, StartTag, TerminalStatus,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NONEMPTY: [StartTag; 5] = [
    StartTag::B,
    StartTag::Br,
    StartTag::Brr,
    StartTag::Brb,
    StartTag::Brrb,
];

/// Any legal move of the bounded game, uniformly.
struct RandomLegal {
    spec: GameSpec,
    rng: ChaCha8Rng,
}

impl Builder for RandomLegal {
    fn propose(&mut self, board: &Board) -> Result<BoardEdge, String> {
        let g = board.to_graph().ok_or("too many vertices")?;
        let moves = legal_builder_moves(&g, &self.spec, None);
        let &(a, b) = moves.choose(&mut self.rng).ok_or("no legal move")?;
        Ok((a as _, b as _))
    }

    fn observe(&mut self, _: BoardEdge, _: Colour) -> Result<(), String> {
        Ok(())
    }
}

fn base_index(n: usize) -> Arc<BookIndex> {
    Arc::new(common::base_books().get(n).expect("base book").clone())
}

#[test]
fn optimal_painter_holds_a_lost_game() {
    // P7 from nothing in eight vertices and twelve edges is a Painter win.
    let spec = MatchSpec::rrc(7, 8, 12, StartTag::Empty);
    let mut painter = SolverOptimal::new(&spec);
    for seed in 0..20 {
        let mut b = RandomLegal {
            spec: spec.game_spec(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        let t = run_match(&mut b, &mut painter, &spec);
        assert!(!t.outcome.builder_won(), "seed {seed}:\n{}", t.to_text());
        assert!(!matches!(
            t.outcome,
            Outcome::IllegalColour(_) | Outcome::IllegalMove(_)
        ));
    }
}

#[test]
fn book_beats_the_optimal_painter() {
    for n in 7..=9 {
        for start in NONEMPTY {
            let spec = MatchSpec::rrc(n, n + 1, 2 * n - 2, start);
            let mut b = BookBuilder::new(base_index(n));
            let t = run_match(&mut b, &mut SolverOptimal::new(&spec), &spec);
            assert!(t.outcome.builder_won(), "{spec}:\n{}", t.to_text());
        }
    }
}

#[test]
fn book_beats_random_painters() {
    for n in 10..=13 {
        let index = base_index(n);
        for start in NONEMPTY {
            let spec = MatchSpec::rrc(n, n + 1, 2 * n - 2, start);
            for policy in Policy::sweep(spec.rounds(), 0..200) {
                let mut b = BookBuilder::new(index.clone());
                let t = run_match(&mut b, policy.painter(&spec).as_mut(), &spec);
                assert!(t.outcome.builder_won(), "{spec} {policy}:\n{}", t.to_text());
                assert_eq!(Transcript::parse(&t.to_text()).unwrap().replay(), t.outcome);
            }
        }
    }
}

/// Follows the book against every Painter reply; returns the number of
/// finished games.
fn walk(index: &BookIndex, spec: &GameSpec, board: Board, cursor: BookCursor) -> usize {
    let g = board.to_graph().unwrap();
    let mut cursor = cursor;
    let (a, b) = cursor
        .next_move(index, &g)
        .unwrap_or_else(|| panic!("book has no move for {g:?}"));
    assert!(
        is_legal_builder_move(&g, spec, (a, b)),
        "illegal {a}-{b} at {g:?}"
    );
    let mut games = 0;
    for colour in [Colour::Red, Colour::Blue] {
        let mut next = board.clone();
        next.add((a as _, b as _), colour).unwrap();
        let pos = next.to_graph().unwrap();
        match terminal_status(&pos, spec, (a, b), colour) {
            TerminalStatus::Ongoing => games += walk(index, spec, next, cursor.clone()),
            s => {
                assert!(s.is_builder_win(), "{s:?} at {pos:?}");
                games += 1;
            }
        }
    }
    games
}

#[test]
fn book_wins_against_every_painter() {
    for n in 7..=10 {
        let index = base_index(n);
        for start in NONEMPTY {
            let spec = MatchSpec::rrc(n, n + 1, 2 * n - 2, start).game_spec();
            let board = Board::from_graph(&spec.validate().unwrap());
            assert!(walk(&index, &spec, board, BookCursor::new()) > 1);
        }
    }
}
