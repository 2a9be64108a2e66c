//! Property tests for the algebraic layer and the solver contract:
//! minimalization, ideal arithmetic, poset structure, certificate soundness,
//! decision monotonicity, and thread-count independence.

mod common;

use proptest::prelude::*;
use sdepth_core::ideal::minimalize;
use sdepth_core::partition::{partition_sdepth, to_stanley_decomposition, Interval, IntervalPartition};
use sdepth_core::poset::char_poset;
use sdepth_core::solver::{decide_sdepth, exact_sdepth, SolverConfig};
use sdepth_core::{Monomial, MonomialIdeal, PosetKind};

const BOX_CAP: u64 = 1 << 20;

fn arb_monomial(n: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_exp, n)
        .prop_filter("the unit monomial generates the unit ideal", |e| {
            e.iter().any(|&x| x > 0)
        })
        .prop_map(Monomial::new)
}

fn arb_ideal(n: usize, max_exp: u32, max_gens: usize) -> impl Strategy<Value = MonomialIdeal> {
    proptest::collection::vec(arb_monomial(n, max_exp), 1..=max_gens)
        .prop_map(move |gens| MonomialIdeal::new(n, gens).expect("non-unit generators"))
}

fn arb_ideal_pair(
    max_n: usize,
    max_exp: u32,
    max_gens: usize,
) -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal)> {
    (1..=max_n).prop_flat_map(move |n| {
        (arb_ideal(n, max_exp, max_gens), arb_ideal(n, max_exp, max_gens))
    })
}

/// Two ideals living on disjoint coordinate ranges of a shared ring, so
/// their generator supports can never meet.
fn arb_disjoint_support_pair(
    max_left: usize,
    max_right: usize,
) -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal)> {
    (1..=max_left, 1..=max_right).prop_flat_map(|(a, b)| {
        let n = a + b;
        (arb_ideal(a, 2, 3), arb_ideal(b, 2, 3)).prop_map(move |(i, j)| {
            let embed = |src: &MonomialIdeal, offset: usize| {
                let gens = src
                    .gens()
                    .iter()
                    .map(|g| {
                        let mut e = vec![0u32; n];
                        e[offset..offset + src.num_vars()].copy_from_slice(g.exponents());
                        Monomial::new(e)
                    })
                    .collect();
                MonomialIdeal::new(n, gens).expect("embedding preserves validity")
            };
            (embed(&i, 0), embed(&j, a))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn minimalize_is_idempotent_and_order_independent(
        mut monos in proptest::collection::vec(arb_monomial(4, 3), 1..=8),
        seed in any::<u64>(),
    ) {
        let once = minimalize(&monos);
        let twice = minimalize(&once);
        prop_assert_eq!(&once, &twice);

        // A cheap deterministic shuffle: rotate and reverse by the seed.
        let rot = (seed as usize) % monos.len();
        monos.rotate_left(rot);
        if seed % 2 == 0 {
            monos.reverse();
        }
        let shuffled = minimalize(&monos);
        let canon = |mut v: Vec<Monomial>| {
            v.sort_by(|a, b| a.exponents().cmp(b.exponents()));
            v
        };
        prop_assert_eq!(canon(once), canon(shuffled));
    }

    #[test]
    fn intersect_and_product_are_commutative((i, j) in arb_ideal_pair(5, 2, 4)) {
        prop_assert_eq!(i.intersect(&j).unwrap(), j.intersect(&i).unwrap());
        prop_assert_eq!(i.product(&j).unwrap(), j.product(&i).unwrap());
    }

    #[test]
    fn intersect_and_product_are_associative(
        (i, j) in arb_ideal_pair(4, 2, 3),
        extra in proptest::collection::vec(0..=2u32, 1..=4),
    ) {
        let n = i.num_vars();
        let mut exps = extra;
        exps.resize(n, 1);
        if exps.iter().all(|&e| e == 0) {
            exps[0] = 1;
        }
        let k = MonomialIdeal::new(n, vec![Monomial::new(exps)]).unwrap();
        prop_assert_eq!(
            i.intersect(&j).unwrap().intersect(&k).unwrap(),
            i.intersect(&j.intersect(&k).unwrap()).unwrap()
        );
        prop_assert_eq!(
            i.product(&j).unwrap().product(&k).unwrap(),
            i.product(&j.product(&k).unwrap()).unwrap()
        );
    }

    #[test]
    fn product_lies_inside_the_intersection((i, j) in arb_ideal_pair(5, 2, 4)) {
        let product = i.product(&j).unwrap();
        let intersection = i.intersect(&j).unwrap();
        for g in product.gens() {
            prop_assert!(intersection.contains(g));
        }
    }

    #[test]
    fn product_equals_intersection_on_disjoint_supports(
        (i, j) in arb_disjoint_support_pair(3, 3),
    ) {
        prop_assert_eq!(i.product(&j).unwrap(), i.intersect(&j).unwrap());
    }

    #[test]
    fn radical_is_idempotent_and_splits_intersections((i, j) in arb_ideal_pair(4, 3, 4)) {
        prop_assert_eq!(i.radical().radical(), i.radical());
        prop_assert_eq!(
            i.intersect(&j).unwrap().radical(),
            i.radical().intersect(&j.radical()).unwrap()
        );
    }

    #[test]
    fn poset_members_mirror_divisibility_and_split_the_box(i in arb_ideal(4, 2, 4)) {
        let ideal_poset = char_poset(&i, PosetKind::Ideal, BOX_CAP).unwrap();
        let quotient_poset = char_poset(&i, PosetKind::Quotient, BOX_CAP).unwrap();
        let bx = ideal_poset.exponent_box();
        let g = bx.ceiling();
        let n = bx.num_vars();

        let mut ideal_count = 0u64;
        for code in 0..bx.size() {
            let point = bx.decode(code);
            // Round-trip through the mixed-radix encoding.
            prop_assert_eq!(bx.encode(&point), code);
            // Membership must agree with brute-force divisibility.
            let divisible = i
                .gens()
                .iter()
                .any(|gen| (0..n).all(|j| gen.exponent(j) <= point[j]));
            prop_assert_eq!(ideal_poset.contains_code(code), divisible);
            prop_assert_eq!(quotient_poset.contains_code(code), !divisible);
            if divisible {
                ideal_count += 1;
            }

            // Up-closure within the box for the ideal side, down-closure for
            // the quotient side.
            for j in 0..n {
                if divisible && point[j] < g[j] {
                    let mut up = point.clone();
                    up[j] += 1;
                    prop_assert!(ideal_poset.contains_point(&up));
                }
                if !divisible && point[j] > 0 {
                    let mut down = point.clone();
                    down[j] -= 1;
                    prop_assert!(quotient_poset.contains_point(&down));
                }
            }
        }
        prop_assert_eq!(ideal_poset.len(), ideal_count);
        prop_assert_eq!(ideal_poset.len() + quotient_poset.len(), bx.size());
    }
}

proptest! {
    // Solver-backed properties run far fewer cases; each case performs
    // several full searches.
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certificates_reverify_at_the_reported_value(
        i in arb_ideal(5, 2, 4),
        quotient in any::<bool>(),
    ) {
        let kind = if quotient { PosetKind::Quotient } else { PosetKind::Ideal };
        let poset = char_poset(&i, kind, BOX_CAP).unwrap();
        let result = exact_sdepth(&i, kind, &SolverConfig::default()).unwrap();
        prop_assert_eq!(
            partition_sdepth(&poset, &result.certificate).unwrap(),
            result.value
        );

        // The Stanley decomposition mirrors the certificate interval by
        // interval: one space per interval, each of dimension rho(top).
        let spaces = to_stanley_decomposition(&poset, &result.certificate).unwrap();
        prop_assert_eq!(spaces.len(), result.certificate.intervals.len());
        let bx = poset.exponent_box();
        for (space, interval) in spaces.iter().zip(&result.certificate.intervals) {
            prop_assert_eq!(space.free_vars.len() as u32, bx.rho(&interval.to));
        }
        let min_dim = spaces.iter().map(|s| s.free_vars.len() as u32).min().unwrap();
        prop_assert_eq!(min_dim, result.value);

        // Any valid partition is a lower bound on the exact value; the
        // all-singletons partition is always valid.
        let singletons = IntervalPartition::new(
            poset
                .member_codes()
                .map(|c| {
                    let p = bx.decode(c);
                    Interval::new(p.clone(), p)
                })
                .collect(),
        );
        prop_assert!(partition_sdepth(&poset, &singletons).unwrap() <= result.value);
    }

    #[test]
    fn deciding_at_k_implies_every_smaller_target(i in arb_ideal(4, 2, 4)) {
        let config = SolverConfig::default();
        let poset = char_poset(&i, PosetKind::Ideal, BOX_CAP).unwrap();
        let n = i.num_vars() as u32;
        let outcomes: Vec<bool> = (0..=n)
            .map(|k| decide_sdepth(&poset, k, &config).unwrap().is_some())
            .collect();
        prop_assert!(outcomes[0], "rank 0 is witnessed by singletons");
        for k in 1..outcomes.len() {
            prop_assert!(!outcomes[k] || outcomes[k - 1], "monotone in k");
        }
        let best = (0..outcomes.len()).rev().find(|&k| outcomes[k]).unwrap() as u32;
        let exact = exact_sdepth(&i, PosetKind::Ideal, &config).unwrap().value;
        prop_assert_eq!(best, exact);
    }

    #[test]
    fn value_and_certificate_ignore_thread_count(
        i in arb_ideal(4, 2, 4),
        quotient in any::<bool>(),
    ) {
        let kind = if quotient { PosetKind::Quotient } else { PosetKind::Ideal };
        let single = exact_sdepth(&i, kind, &SolverConfig { threads: 1, ..SolverConfig::default() }).unwrap();
        let multi = exact_sdepth(&i, kind, &SolverConfig { threads: 3, ..SolverConfig::default() }).unwrap();
        prop_assert_eq!(single.value, multi.value);
        prop_assert_eq!(single.certificate, multi.certificate);
    }
}
