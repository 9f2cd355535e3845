//! The P3 book is emitted byte for byte as the reference listing.

use c4pn::book::{parse_book, verify_book};
use c4pn::config::SeriesGame;
use c4pn::solver::{run_game_series, SolveOptions};

const GOLDEN: &str = include_str!("data/C4P3V4E6.txt");

#[test]
fn p3_book_is_byte_equal() {
    let game = SeriesGame::new(3, 4, 6);
    let r = run_game_series(
        std::slice::from_ref(&game),
        true,
        SolveOptions::default(),
        |_| {},
    )
    .unwrap();
    assert_eq!(r[0].book, GOLDEN);
    for (i, line) in GOLDEN.lines().enumerate() {
        assert_eq!(r[0].book.lines().nth(i), Some(line), "line {}", i + 1);
    }
}

#[test]
fn golden_back_references() {
    let refs: Vec<&str> = GOLDEN
        .lines()
        .filter_map(|l| l.split_once(" l: ").map(|(_, r)| r))
        .collect();
    assert!(refs.starts_with(&["4", "5", "13"]));
    let book = parse_book(GOLDEN).unwrap();
    assert!(verify_book(&book, &SeriesGame::new(3, 4, 6)).accepted);
}

#[test]
fn book_does_not_depend_on_hints_for_p3() {
    let game = SeriesGame::new(3, 4, 6);
    let r = run_game_series(
        std::slice::from_ref(&game),
        false,
        SolveOptions::default(),
        |_| {},
    )
    .unwrap();
    assert_eq!(r[0].book, GOLDEN);
}
