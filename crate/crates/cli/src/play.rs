//! Terminal play: the user paints, a Builder proposes.

use std::io::{self, BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use c4pn::board::{Board, BoardEdge};
use c4pn::book::{parse_book, BookIndex, BookLine};
use c4pn::config::parse_game_arg;
use c4pn::engine::Engine;
use c4pn::graph::Colour;
use c4pn::harness::{run_match, BookBuilder, Builder, MatchSpec, Painter, Transcript};
use c4pn::rules::{Ruleset, StartTag};
use c4pn::solver::{run_game_series, SolveOptions};

use crate::{base_books, config_err, internal, BuilderKind, Common, Failure, Result};

pub fn run(common: &Common, kind: BuilderKind, transcript: &Path) -> Result<()> {
    let (spec, mut builder) = builder(common, kind)?;
    println!("{spec}: answer r (red), b (blue) or q (quit) for each edge");
    let stdin = io::stdin();
    let mut human = Human::new(stdin.lock(), io::stdout());
    let t: Transcript = run_match(builder.as_mut(), &mut human, &spec);
    std::fs::write(transcript, t.to_text())
        .map_err(|e| internal(format!("{}: {e}", transcript.display())))?;
    println!(
        "{} after {} round(s); transcript in {}",
        t.outcome,
        t.round_count(),
        transcript.display()
    );
    Ok(())
}

fn builder(common: &Common, kind: BuilderKind) -> Result<(MatchSpec, Box<dyn Builder>)> {
    let game = common
        .game
        .as_deref()
        .map(parse_game_arg)
        .transpose()
        .map_err(config_err)?;
    let start = match game.as_ref().map(|g| g.starts.as_slice()) {
        Some([s]) => s.tag,
        _ => StartTag::Empty,
    };
    match kind {
        BuilderKind::Engine => {
            let n = game.as_ref().map_or(14, |g| g.n);
            let engine = Engine::new(n, start, base_books(common)?).map_err(config_err)?;
            Ok((MatchSpec::rr(n, start), Box::new(engine)))
        }
        BuilderKind::Book => {
            let game = game.ok_or_else(|| Failure::Config("--builder book needs --game".into()))?;
            let path = common.books_dir.join(game.book_file_name());
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(_) => {
                    let r = run_game_series(
                        std::slice::from_ref(&game),
                        false,
                        SolveOptions::default(),
                        |_| {},
                    )
                    .map_err(internal)?;
                    r.into_iter().next().map(|r| r.book).unwrap_or_default()
                }
            };
            let book = parse_book(&text)
                .map_err(|e| Failure::Rejected(format!("{}: {e}", path.display())))?;
            let lost = book.lines.iter().any(
                |l| matches!(l, BookLine::Header(h) if h.start_name == start.book_name() && !h.rc),
            );
            if lost {
                return Err(Failure::Config(format!(
                    "Builder has no winning strategy in {} from {start}",
                    game.book_file_name()
                )));
            }
            let builder = BookBuilder::new(Arc::new(BookIndex::from_book(&book)));
            Ok((
                MatchSpec::rrc(game.n, game.v, game.e, start),
                Box::new(builder),
            ))
        }
    }
}

/// Reads one colour per proposed edge; `q` or end of input resigns.
pub struct Human<R, W> {
    input: R,
    out: W,
    quit: bool,
}

impl<R: BufRead, W: Write> Human<R, W> {
    pub fn new(input: R, out: W) -> Self {
        Human {
            input,
            out,
            quit: false,
        }
    }

    fn show(&mut self, board: &Board) {
        let list = |c: Colour| {
            board
                .edges()
                .filter(|&(_, col)| col == c)
                .map(|((a, b), _)| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(self.out, "  red:  {}", list(Colour::Red));
        let _ = writeln!(self.out, "  blue: {}", list(Colour::Blue));
    }
}

impl<R: BufRead, W: Write> Painter for Human<R, W> {
    fn colour(
        &mut self,
        board: &Board,
        (a, b): BoardEdge,
        round: usize,
        ruleset: Ruleset,
    ) -> Colour {
        let forced = ruleset == Ruleset::Rr && board.closes_red_c4(a, b);
        self.show(board);
        loop {
            let _ = write!(self.out, "round {round}: {a}-{b} [r/b/q]? ");
            let _ = self.out.flush();
            let mut line = String::new();
            if self.input.read_line(&mut line).unwrap_or(0) == 0 {
                self.quit = true;
                return Colour::Red;
            }
            match line.trim().to_ascii_lowercase().as_str() {
                "r" | "red" if forced => {
                    let _ = writeln!(
                        self.out,
                        "red {a}-{b} would close a red C4; it must be blue"
                    );
                }
                "r" | "red" => return Colour::Red,
                "b" | "blue" => return Colour::Blue,
                "q" | "quit" => {
                    self.quit = true;
                    return Colour::Red;
                }
                other => {
                    let _ = writeln!(self.out, "`{other}`: answer r, b or q");
                }
            }
        }
    }

    fn resigned(&self) -> bool {
        self.quit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_red_is_refused() {
        let board = Board::from_edges(&[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let mut out = Vec::new();
        let mut h = Human::new(&b"r\nx\nb\n"[..], &mut out);
        assert_eq!(h.colour(&board, (0, 3), 4, Ruleset::Rr), Colour::Blue);
        assert!(!h.resigned());
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("must be blue"), "{text}");
        assert!(text.contains("answer r, b or q"), "{text}");
    }

    #[test]
    fn red_allowed_in_the_bounded_game() {
        let board = Board::from_edges(&[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let mut h = Human::new(&b"red\n"[..], Vec::new());
        assert_eq!(h.colour(&board, (0, 3), 4, Ruleset::Rrc), Colour::Red);
    }

    #[test]
    fn end_of_input_resigns() {
        let mut h = Human::new(&b""[..], Vec::new());
        h.colour(&Board::new(), (0, 1), 1, Ruleset::Rr);
        assert!(h.resigned());
        let mut h = Human::new(&b"Q\n"[..], Vec::new());
        h.colour(&Board::new(), (0, 1), 1, Ruleset::Rr);
        assert!(h.resigned());
    }
}
