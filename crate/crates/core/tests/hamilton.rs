//! Hamiltonian paths of the forcing graph, checked by a checker written
//! from the graph definition alone.

mod common;

use c4pn::engine::{check_hamilton_path, hamilton_path, HamiltonError, Slot};
use common::oracles::{check_forcing_path, side, slots};

fn check(s: usize, path: &[Slot], w1: Slot, w2: Slot) {
    check_forcing_path(s, path, w1, w2).unwrap_or_else(|e| panic!("s={s} {w1}-{w2}: {e}"));
    check_hamilton_path(s, path, w1, w2).unwrap();
}

#[test]
fn s1_between_u4_and_u5() {
    for (a, b) in [(Slot::U4, Slot::U5), (Slot::U5, Slot::U4)] {
        let p = hamilton_path(1, a, b).unwrap();
        check(1, &p, a, b);
        assert_eq!(p.len(), 6);
    }
    assert_eq!(
        hamilton_path(1, Slot::X(0), Slot::Y(0)),
        Err(HamiltonError::SmallButterfly)
    );
}

#[test]
fn every_crossing_pair_up_to_ten() {
    for s in 2..=10 {
        let vs = slots(s);
        let mut pairs = 0;
        for &w1 in &vs {
            for &w2 in &vs {
                if side(w1) == side(w2) {
                    continue;
                }
                let p = hamilton_path(s, w1, w2).unwrap_or_else(|e| panic!("s={s} {w1}-{w2}: {e}"));
                check(s, &p, w1, w2);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 2 * (s + 2) * (s + 2));
    }
}

#[test]
fn bad_endpoints_are_errors() {
    assert!(matches!(
        hamilton_path(3, Slot::X(0), Slot::U2),
        Err(HamiltonError::SamePart(..))
    ));
    assert!(matches!(
        hamilton_path(3, Slot::X(3), Slot::Y(0)),
        Err(HamiltonError::NoSuchSlot(..))
    ));
    assert_eq!(
        hamilton_path(0, Slot::U4, Slot::U5),
        Err(HamiltonError::EmptyWings)
    );
}

#[test]
fn checker_catches_broken_paths() {
    let p = hamilton_path(2, Slot::X(0), Slot::Y(0)).unwrap();
    let mut short = p.clone();
    short.pop();
    assert!(check_hamilton_path(2, &short, Slot::X(0), Slot::Y(0)).is_err());
    let mut swapped = p.clone();
    swapped.swap(1, 2);
    assert!(check_hamilton_path(2, &swapped, Slot::X(0), Slot::Y(0)).is_err());
    assert!(check_hamilton_path(2, &p, Slot::X(1), Slot::Y(0)).is_err());
}
