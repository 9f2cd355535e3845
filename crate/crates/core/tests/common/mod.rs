#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use c4pn::book::{BookLine, StrategyBook};
use c4pn::engine::{BaseBooks, BASE_ORDERS};
use c4pn::graph::{blue_is_target_path, has_c4_with, normalise, Colour, ColouredGraph, Edge};

/// Base books shared by every test of a binary, cached under the target dir.
pub fn base_books() -> Arc<BaseBooks> {
    static BOOKS: OnceLock<Arc<BaseBooks>> = OnceLock::new();
    BOOKS
        .get_or_init(|| {
            let dir = books_dir();
            Arc::new(BaseBooks::load_or_solve(&dir, BASE_ORDERS, false).expect("base books"))
        })
        .clone()
}

pub fn books_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("books")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    MoveChanged,
    NodeDeleted,
    BackRefRetargeted,
}

fn node_position(book: &StrategyBook, i: usize) -> Option<ColouredGraph> {
    match &book.lines[i] {
        BookLine::Node(n) => n.position(),
        BookLine::Header(_) => None,
    }
}

/// A replacement move that is not an immediate win for both colours, so the
/// mutated line no longer proves anything.
fn other_move(pos: &ColouredGraph, mv: Edge, n: usize, cap: usize) -> Option<Edge> {
    let top = (pos.used_vertices() + 1).min(cap) as u8;
    for a in 0..top {
        for b in a + 1..top {
            if normalise(mv) == (a, b) || pos.is_coloured(a, b) {
                continue;
            }
            let mut blue = *pos;
            blue.add(a, b, Colour::Blue).ok()?;
            let blue_wins = blue.blue_count() == n - 1 && blue_is_target_path(blue.blue(), n);
            if !(blue_wins && has_c4_with(pos.red(), a, b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Calls `f` with every single-node mutation of `book` whose line index is
/// kept by `pick`. The book is restored after each call.
pub fn for_each_mutation(
    book: &mut StrategyBook,
    n: usize,
    cap: usize,
    mut pick: impl FnMut(usize) -> bool,
    mut f: impl FnMut(Mutation, usize, &StrategyBook),
) {
    let node_lines: Vec<usize> = (0..book.lines.len())
        .filter(|&i| matches!(book.lines[i], BookLine::Node(_)))
        .collect();
    for &i in &node_lines {
        if !pick(i) {
            continue;
        }
        let BookLine::Node(orig) = book.lines[i].clone() else {
            unreachable!()
        };
        if let Some(pos) = node_position(book, i) {
            if let Some(mv) = other_move(&pos, orig.mv, n, cap) {
                if let BookLine::Node(node) = &mut book.lines[i] {
                    node.mv = mv;
                }
                f(Mutation::MoveChanged, i, book);
                book.lines[i] = BookLine::Node(orig.clone());
            }
        }
        let removed = book.lines.remove(i);
        f(Mutation::NodeDeleted, i, book);
        book.lines.insert(i, removed);
        if let Some(target) = orig.back_ref {
            let retarget = node_lines
                .iter()
                .map(|&j| j + 1)
                .find(|&l| l != target && l < i + 1);
            if let Some(l) = retarget {
                if let BookLine::Node(node) = &mut book.lines[i] {
                    node.back_ref = Some(l);
                }
                f(Mutation::BackRefRetargeted, i, book);
                book.lines[i] = BookLine::Node(orig);
            }
        }
    }
}
