//! The verifier accepts solved books and rejects every single-node mutation.

mod common;

use c4pn::book::{parse_book, verify_book};
use c4pn::config::default_series;
use c4pn::solver::{run_game_series, SolveOptions};
use common::{for_each_mutation, Mutation};

#[test]
fn every_mutation_of_small_books_is_rejected() {
    let games: Vec<_> = default_series().into_iter().filter(|g| g.n <= 7).collect();
    let results = run_game_series(&games, true, SolveOptions::default(), |_| {}).unwrap();
    let mut counts = [0usize; 3];
    for (game, r) in games.iter().zip(&results) {
        let mut book = parse_book(&r.book).unwrap();
        let report = verify_book(&book, game);
        assert!(report.accepted, "{}: {report}", game.book_file_name());
        for_each_mutation(
            &mut book,
            game.n,
            game.v,
            |_| true,
            |kind, line, mutated| {
                let report = verify_book(mutated, game);
                assert!(
                    !report.accepted,
                    "{} {kind:?} at line {} accepted",
                    game.book_file_name(),
                    line + 1
                );
                counts[kind as usize] += 1;
            },
        );
        assert_eq!(
            book,
            parse_book(&r.book).unwrap(),
            "mutations restore the book"
        );
    }
    assert!(counts.iter().all(|&c| c > 0), "{counts:?}");
    let _ = Mutation::MoveChanged;
}

#[test]
fn tampered_digit_parses_but_fails() {
    let golden = include_str!("data/C4P3V4E6.txt");
    let game = c4pn::config::SeriesGame::new(3, 4, 6);
    let tampered = golden.replacen("m: 21", "m: 23", 1);
    assert_ne!(tampered, golden);
    let book = parse_book(&tampered).unwrap();
    assert!(!verify_book(&book, &game).accepted);
}
