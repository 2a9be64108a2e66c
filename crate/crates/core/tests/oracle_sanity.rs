//! Hand-checkable anchors for the reference search itself, so the oracle is
//! trusted before anything is measured against it.

mod common;

use common::{ideal, oracle_sdepth};
use sdepth_core::poset::char_poset;
use sdepth_core::PosetKind;

#[test]
fn reference_search_matches_hand_values() {
    // (x1, x2): members {10, 01, 11}; [01,11] ∪ [10,10] has tops of ranks
    // 2 and 1, and no partition does better than 1.
    let m2 = ideal(2, &[&[1, 0], &[0, 1]]);
    let poset = char_poset(&m2, PosetKind::Ideal, 1 << 20).unwrap();
    assert_eq!(oracle_sdepth(&poset), 1);

    // (x1, x2, x3): seven members; best partitions pair each degree-1 point
    // with a degree-2 point, leaving 111, so the minimum top rank is 2.
    let m3 = ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let poset = char_poset(&m3, PosetKind::Ideal, 1 << 20).unwrap();
    assert_eq!(oracle_sdepth(&poset), 2);

    // Principal ideal (x1^2) in two variables: the poset is the full box
    // above (2,0), a single interval [20, 22] of rank 2.
    let p = ideal(2, &[&[2, 0]]);
    let poset = char_poset(&p, PosetKind::Ideal, 1 << 20).unwrap();
    assert_eq!(oracle_sdepth(&poset), 2);

    // Quotient by (x1*x2) in two variables: members {00, 10, 01}, and the
    // two axes [00,10] ∪ [01,01] (or symmetrically) top out at rank 1.
    let e = ideal(2, &[&[1, 1]]);
    let poset = char_poset(&e, PosetKind::Quotient, 1 << 20).unwrap();
    assert_eq!(oracle_sdepth(&poset), 1);

    // Quotient by the maximal ideal (x1, x2): the single member 00 has rank
    // 0, so no partition can do better.
    let poset = char_poset(&m2, PosetKind::Quotient, 1 << 20).unwrap();
    assert_eq!(oracle_sdepth(&poset), 0);
}
