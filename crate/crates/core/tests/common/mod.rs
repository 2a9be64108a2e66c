//! Shared helpers for the integration tests, most importantly a from-scratch
//! reference implementation of interval-partition Stanley depth.
//!
//! The reference search shares no code or theory with the production solver:
//! valid intervals are found by scanning all member pairs and checking their
//! whole box, and the optimal partition by memoized exhaustive search over
//! exact covers. It is exponential and only meant for posets with a handful
//! of points, which is exactly its job.
#![allow(dead_code)]

use std::collections::HashMap;

use sdepth_core::poset::CharPoset;
use sdepth_core::solver::{exact_sdepth, SdepthResult, SolverConfig};
use sdepth_core::{Monomial, MonomialIdeal, PosetKind};

/// Largest member count the reference search accepts. Masks are `u32`, and
/// beyond a couple dozen points the enumeration is pointless anyway.
pub const ORACLE_MAX_POINTS: usize = 24;

/// Maximum over all interval partitions of the minimum top rank, by
/// exhaustive search. Panics on empty posets and on posets larger than
/// [`ORACLE_MAX_POINTS`].
pub fn oracle_sdepth(poset: &CharPoset) -> u32 {
    let bx = poset.exponent_box();
    let n = bx.num_vars();
    let g = bx.ceiling();
    let members: Vec<Vec<u32>> = poset.member_codes().map(|c| bx.decode(c)).collect();
    let count = members.len();
    assert!(count > 0, "reference search needs a nonempty poset");
    assert!(count <= ORACLE_MAX_POINTS, "reference search got {count} points");
    let index: HashMap<&[u32], usize> = members
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let rank = |p: &[u32]| (0..n).filter(|&j| p[j] == g[j]).count() as u32;

    // Every valid interval: a member pair b <= t whose whole box lies in the
    // member set, recorded per covered member as (member bitmask, top rank).
    let mut covering: Vec<Vec<(u32, u32)>> = vec![Vec::new(); count];
    for b in &members {
        'tops: for t in &members {
            if (0..n).any(|j| b[j] > t[j]) {
                continue;
            }
            let mut mask = 0u32;
            let mut point = b.clone();
            loop {
                match index.get(point.as_slice()) {
                    Some(&i) => mask |= 1 << i,
                    None => continue 'tops,
                }
                // Advance the odometer within [b, t].
                let mut done = true;
                for j in (0..n).rev() {
                    if point[j] < t[j] {
                        point[j] += 1;
                        done = false;
                        break;
                    }
                    point[j] = b[j];
                }
                if done {
                    break;
                }
            }
            let r = rank(t);
            for i in 0..count {
                if mask & (1 << i) != 0 {
                    covering[i].push((mask, r));
                }
            }
        }
    }

    let full: u32 = if count == 32 { u32::MAX } else { (1 << count) - 1 };
    let mut memo = HashMap::new();
    best_completion(0, full, &covering, &mut memo)
}

/// Best achievable minimum top rank over all partitions of the uncovered
/// remainder; `u32::MAX` when nothing is left (an empty remainder imposes no
/// constraint). Branches on the lowest uncovered member, which every
/// partition covers exactly once.
fn best_completion(
    covered: u32,
    full: u32,
    covering: &[Vec<(u32, u32)>],
    memo: &mut HashMap<u32, u32>,
) -> u32 {
    if covered == full {
        return u32::MAX;
    }
    if let Some(&v) = memo.get(&covered) {
        return v;
    }
    let lowest = (!covered & full).trailing_zeros() as usize;
    // Singleton intervals always exist, so at least one branch is taken.
    let mut best = 0;
    for &(mask, r) in &covering[lowest] {
        if mask & covered == 0 {
            let tail = best_completion(covered | mask, full, covering, memo);
            best = best.max(r.min(tail));
        }
    }
    memo.insert(covered, best);
    best
}

pub fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(n, gens.iter().map(|e| Monomial::new(e.to_vec())).collect())
        .expect("test generators are valid")
}

pub fn solve(ideal: &MonomialIdeal, kind: PosetKind) -> SdepthResult {
    exact_sdepth(ideal, kind, &SolverConfig::default()).expect("solvable test instance")
}

pub fn exact_value(ideal: &MonomialIdeal, kind: PosetKind) -> u32 {
    solve(ideal, kind).value
}

/// Workspace-relative path to a checked-in fixture file.
pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_fixture(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}
