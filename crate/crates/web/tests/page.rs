use c4pn::config::SeriesGame;
use c4pn::engine::{check_hamilton_path, Slot};
use c4pn::graph::Colour;
use c4pn::harness::{engine_match, Outcome, Policy, Transcript};
use c4pn::rules::StartTag;
use c4pn_web::{
    forcing_edges, forcing_vertices, hamilton_text, parse_slot, solve_text, BookStore, Session,
};

const GOLDEN: &str = include_str!("../../core/tests/data/C4P3V4E6.txt");

fn store_up_to(n: usize) -> BookStore {
    let mut store = BookStore::new();
    while store.orders().last().map_or(0, |&k| k as usize) < n {
        assert!(store.solve_next().is_ok());
    }
    store
}

#[test]
fn solves_the_p3_book() {
    assert_eq!(solve_text(&SeriesGame::new(3, 4, 6)).unwrap(), GOLDEN);
    assert!(c4pn_web::verify_book_text(3, 4, 6, GOLDEN).contains("accepted"));
    assert!(c4pn_web::verify_book_text(3, 4, 6, "junk").starts_with("rejected"));
}

#[test]
fn book_store_checks_orders() {
    let mut store = BookStore::new();
    assert!(store.add_text(5, GOLDEN).is_err());
    assert!(store.add_text(7, "junk").is_err());
    assert!(!store.playable(7));
    assert!(!store.playable(20));
}

#[test]
fn sessions_match_the_runner() {
    let store = store_up_to(9);
    assert_eq!(store.orders(), vec![7, 8, 9]);
    assert!(store.playable(9) && !store.playable(10) && !store.playable(14));
    for n in 7..=9 {
        for start in [StartTag::Empty, StartTag::B, StartTag::Brb] {
            if n == 7 && start == StartTag::Empty {
                continue;
            }
            for policy in [
                Policy::AllRed,
                Policy::FirstBlueAt(2),
                Policy::UniformRandom(n as u64),
            ] {
                let expected = engine_match(n, start, policy, &store.books());
                assert_eq!(expected.outcome, Outcome::BluePath);
                let mut s = Session::start(n, start, store.books()).unwrap();
                for r in &expected.rounds {
                    assert_eq!(s.pending(), vec![r.edge.0 as u32, r.edge.1 as u32]);
                    if r.colour == Colour::Blue && s.forced() {
                        assert!(s.colour(Colour::Red).is_err());
                    }
                    s.colour(r.colour).unwrap();
                }
                assert_eq!(s.outcome().as_deref(), Some("blue-path"));
                assert!(s.pending().is_empty());
                assert!(s.colour(Colour::Red).is_err());
                assert_eq!(s.transcript(), expected.to_text());
                let blue = s.edges().chunks(3).filter(|t| t[2] == 1).count();
                assert_eq!(blue, n - 1);
            }
        }
    }
}

#[test]
fn unfinished_session_is_abandoned() {
    let store = store_up_to(8);
    let mut s = Session::start(8, StartTag::Empty, store.books()).unwrap();
    s.colour(Colour::Red).unwrap();
    assert_eq!(s.outcome(), None);
    assert_eq!(s.rounds_played(), 1);
    assert_eq!(s.rounds_total(), 14);
    let t = Transcript::parse(&s.transcript()).unwrap();
    assert_eq!(t.outcome, Outcome::Abandoned);
    assert_eq!(t.replay(), Outcome::Abandoned);
}

#[test]
fn lost_start_has_no_book_move() {
    let store = store_up_to(7);
    let s = Session::start(7, StartTag::Empty, store.books()).unwrap();
    assert!(s.pending().is_empty());
    assert!(
        s.outcome().unwrap().starts_with("builder-failed"),
        "{:?}",
        s.outcome()
    );
}

#[test]
fn slot_names() {
    assert_eq!(parse_slot("x1"), Ok(Slot::X(0)));
    assert_eq!(parse_slot(" y10 "), Ok(Slot::Y(9)));
    assert_eq!(parse_slot("u4"), Ok(Slot::U4));
    for bad in ["x0", "u1", "u6", "z2", "", "x"] {
        assert!(parse_slot(bad).is_err(), "{bad}");
    }
}

#[test]
fn forcing_graph_and_paths() {
    for s in 1..=6 {
        let verts = forcing_vertices(s);
        assert_eq!(verts.split(' ').count(), 2 * s + 4);
        // complete bipartite on s+2 by s+2 minus three edges
        assert_eq!(forcing_edges(s).split(' ').count(), (s + 2) * (s + 2) - 3);
    }
    let path = hamilton_text(1, "u4", "u5").unwrap();
    let slots: Vec<Slot> = path.split(' ').map(|t| parse_slot(t).unwrap()).collect();
    check_hamilton_path(1, &slots, Slot::U4, Slot::U5).unwrap();
    let path = hamilton_text(4, "x2", "y3").unwrap();
    let slots: Vec<Slot> = path.split(' ').map(|t| parse_slot(t).unwrap()).collect();
    check_hamilton_path(4, &slots, Slot::X(1), Slot::Y(2)).unwrap();
    assert!(hamilton_text(3, "x1", "x2").is_err());
    assert!(hamilton_text(3, "x1", "q").is_err());
}
