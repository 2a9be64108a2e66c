//! Closed-form bounds and exact values for Stanley depth.
//!
//! Each calculator inspects its hypotheses and returns a [`BoundReport`]
//! carrying the computed value together with an `applicable` flag; a report
//! whose hypotheses fail is still returned, with `applicable = false` and a
//! human-readable reason. Callers that want a single answer should use
//! [`bounds_report`], which runs every calculator relevant to the chosen
//! poset kind and folds the applicable results into a bracket
//! `[max lower, min upper]`.
//!
//! Values are exact integers. Formulas that naturally produce half-integers
//! (such as `(n + k) / 2`) are recorded as a rational `raw_num / raw_den`
//! and integerized in the sound direction: floor for upper bounds, ceiling
//! for lower bounds.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ideal::{IrreducibleIdeal, MonomialIdeal, PrimeIdeal};
use crate::poset::PosetKind;

/// Default cap on the number of minimal primes enumerated by [`min_primes`].
pub const DEFAULT_MIN_PRIMES_CAP: usize = 100_000;

/// Node budget for the transversal search backing [`min_primes`].
const TRANSVERSAL_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("ideal is not squarefree")]
    NotSquarefree,
    #[error("subset size {t} exceeds the number of variables {num_vars}")]
    SubsetTooLarge { t: usize, num_vars: usize },
    #[error("decomposition needs at least one component")]
    NoComponents,
    #[error("components live in different rings ({0} vs {1} variables)")]
    MixedRings(usize, usize),
    #[error("components share the variable x{}", var + 1)]
    OverlappingSupports { var: usize },
    #[error("minimal prime enumeration exceeded the cap of {cap}")]
    MinPrimesCapExceeded { cap: usize },
    #[error("component order must be a permutation of 0..{expected}")]
    InvalidOrder { expected: usize },
}

/// Direction of a reported bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Lower => write!(f, "lower"),
            BoundKind::Upper => write!(f, "upper"),
            BoundKind::Exact => write!(f, "exact"),
        }
    }
}

/// One formula evaluation: the value it certifies (if its hypotheses hold)
/// together with enough context to audit the claim.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundReport {
    /// Stable machine name, e.g. `thm2.6` or `cor2.8.lower`.
    pub name: String,
    pub kind: BoundKind,
    /// Integerized value; `None` exactly when the report is inapplicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    /// Numerator of the underlying rational, present when it is not integral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_num: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_den: Option<i64>,
    pub applicable: bool,
    /// Why the hypotheses fail, when they do.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub cite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    fn applicable(name: &str, cite: &str, kind: BoundKind, num: i64, den: i64) -> Self {
        debug_assert!(den >= 1);
        let value = match kind {
            BoundKind::Upper => num.div_euclid(den),
            BoundKind::Lower => -(-num).div_euclid(den),
            BoundKind::Exact => {
                debug_assert_eq!(num % den, 0, "exact value must be integral");
                num / den
            }
        };
        let (raw_num, raw_den) = if num % den == 0 {
            (None, None)
        } else {
            (Some(num), Some(den))
        };
        BoundReport {
            name: name.to_owned(),
            kind,
            value: Some(value),
            raw_num,
            raw_den,
            applicable: true,
            reason: None,
            cite: cite.to_owned(),
            note: None,
        }
    }

    fn lower(name: &str, cite: &str, num: i64, den: i64) -> Self {
        Self::applicable(name, cite, BoundKind::Lower, num, den)
    }

    fn upper(name: &str, cite: &str, num: i64, den: i64) -> Self {
        Self::applicable(name, cite, BoundKind::Upper, num, den)
    }

    fn exact(name: &str, cite: &str, value: i64) -> Self {
        Self::applicable(name, cite, BoundKind::Exact, value, 1)
    }

    fn inapplicable(name: &str, cite: &str, kind: BoundKind, reason: impl Into<String>) -> Self {
        BoundReport {
            name: name.to_owned(),
            kind,
            value: None,
            raw_num: None,
            raw_den: None,
            applicable: false,
            reason: Some(reason.into()),
            cite: cite.to_owned(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// An intersection of irreducible monomial ideals with pairwise disjoint
/// supports, kept in a fixed component order.
///
/// This is the shared hypothesis of most of the closed-form results; see
/// [`attempt_decompose`] for recovering it from a plain generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedIdeal {
    num_vars: usize,
    components: Vec<IrreducibleIdeal>,
}

impl DecomposedIdeal {
    pub fn new(components: Vec<IrreducibleIdeal>) -> Result<Self, BoundsError> {
        let first = components.first().ok_or(BoundsError::NoComponents)?;
        let num_vars = first.num_vars();
        let mut seen = vec![false; num_vars];
        for comp in &components {
            if comp.num_vars() != num_vars {
                return Err(BoundsError::MixedRings(num_vars, comp.num_vars()));
            }
            for var in comp.support() {
                if seen[var] {
                    return Err(BoundsError::OverlappingSupports { var });
                }
                seen[var] = true;
            }
        }
        Ok(DecomposedIdeal { num_vars, components })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn components(&self) -> &[IrreducibleIdeal] {
        &self.components
    }

    /// Number of components, written `k` throughout.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Component heights in component order.
    pub fn heights(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.height()).collect()
    }

    /// Number of components of odd height (the set `A`).
    pub fn odd_height_count(&self) -> usize {
        self.components.iter().filter(|c| c.height() % 2 == 1).count()
    }

    /// True when the component supports together cover every variable,
    /// i.e. the radicals sum to the maximal ideal.
    pub fn spans_all_vars(&self) -> bool {
        let total: usize = self.components.iter().map(|c| c.height()).sum();
        total == self.num_vars
    }

    /// True when every component is generated by plain variables.
    pub fn all_prime(&self) -> bool {
        self.components.iter().all(|c| c.is_prime())
    }

    /// The intersection of the components as a minimally generated ideal.
    pub fn intersection_ideal(&self) -> MonomialIdeal {
        let mut acc = self.components[0].to_ideal();
        for comp in &self.components[1..] {
            // Same ring by construction, and lcm never overflows.
            acc = acc.intersect(&comp.to_ideal()).expect("components share a ring");
        }
        acc
    }

    /// The same components listed in a different order. `order[i]` is the
    /// index of the component to put in position `i`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self, BoundsError> {
        let k = self.k();
        let mut used = vec![false; k];
        if order.len() != k {
            return Err(BoundsError::InvalidOrder { expected: k });
        }
        for &i in order {
            if i >= k || used[i] {
                return Err(BoundsError::InvalidOrder { expected: k });
            }
            used[i] = true;
        }
        Ok(DecomposedIdeal {
            num_vars: self.num_vars,
            components: order.iter().map(|&i| self.components[i].clone()).collect(),
        })
    }
}

/// Counts squarefree monomials of degree `t` lying in `ideal`, i.e. subsets
/// `T` of the variables with `|T| = t` such that some generator divides the
/// product of the variables in `T`.
pub fn count_squarefree_members(ideal: &MonomialIdeal, t: usize) -> Result<u64, BoundsError> {
    if !ideal.is_squarefree() {
        return Err(BoundsError::NotSquarefree);
    }
    let n = ideal.num_vars();
    if t > n {
        return Err(BoundsError::SubsetTooLarge { t, num_vars: n });
    }
    let supports: Vec<Vec<usize>> = ideal.gens().iter().map(|g| g.support()).collect();
    let mut count = 0u64;
    // Fixed-size combination odometer over [0, n).
    let mut subset: Vec<usize> = (0..t).collect();
    loop {
        let hit = supports
            .iter()
            .any(|s| s.iter().all(|v| subset.binary_search(v).is_ok()));
        if hit {
            count += 1;
        }
        // Advance to the next t-subset in lexicographic order: bump the
        // rightmost entry that has not yet reached its maximum value.
        let mut i = t;
        while i > 0 && subset[i - 1] == i - 1 + n - t {
            i -= 1;
        }
        if i == 0 {
            return Ok(count);
        }
        subset[i - 1] += 1;
        for j in i..t {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Largest degree-(d+1) layer we are willing to enumerate when counting
/// squarefree members for the Lemma 2.4 upper bound.
const LAYER_COUNT_CAP: u128 = 4_000_000;

/// Sandwich `d <= sdepth(I) <= d + floor(B/A)` for a squarefree ideal
/// generated in one degree `d`, where `A` and `B` count the squarefree
/// monomials of `I` in degrees `d` and `d + 1`. When fewer generators than
/// degree-(d+1) squarefree monomials exist the bracket collapses and the
/// exact value `d` is reported as well.
pub fn lemma24_bounds(ideal: &MonomialIdeal) -> Vec<BoundReport> {
    const NAME_LO: &str = "lem2.4.lower";
    const NAME_HI: &str = "lem2.4.upper";
    const CITE: &str = "Lemma 2.4";
    let fail = |reason: &str| {
        vec![
            BoundReport::inapplicable(NAME_LO, CITE, BoundKind::Lower, reason),
            BoundReport::inapplicable(NAME_HI, CITE, BoundKind::Upper, reason),
        ]
    };
    if !ideal.is_squarefree() {
        return fail("generators are not squarefree");
    }
    let Some(d) = ideal.equigenerated_degree() else {
        return fail("generators span more than one degree");
    };
    let n = ideal.num_vars() as u64;
    let m = ideal.gens().len() as u128;
    let mut reports = vec![BoundReport::lower(NAME_LO, CITE, d as i64, 1)];
    let layer = binomial(n, d + 1);
    if layer.is_some_and(|c| c < m) {
        // Fewer degree-(d+1) squarefree monomials than generators, so the
        // gap floor(B/A) vanishes without counting: B < m <= A.
        reports.push(BoundReport::upper(NAME_HI, CITE, d as i64, 1));
        reports.push(BoundReport::exact("cor2.5", "Cor 2.5", d as i64));
        return reports;
    }
    if layer.is_none_or(|c| c > LAYER_COUNT_CAP) {
        reports.push(BoundReport::inapplicable(
            NAME_HI,
            CITE,
            BoundKind::Upper,
            "degree d+1 layer is too large to enumerate",
        ));
        return reports;
    }
    let a = count_squarefree_members(ideal, d as usize).expect("hypotheses checked");
    let b = count_squarefree_members(ideal, d as usize + 1).expect("hypotheses checked");
    debug_assert!(a >= ideal.gens().len() as u64);
    reports.push(BoundReport::upper(
        NAME_HI,
        CITE,
        d as i64 + (b / a) as i64,
        1,
    ));
    reports
}

/// Upper bound `(n + k) / 2` for an intersection of `k` monomial primes
/// with pairwise disjoint supports summing to the maximal ideal.
pub fn thm26_upper(decomp: &DecomposedIdeal) -> BoundReport {
    const NAME: &str = "thm2.6";
    const CITE: &str = "Thm 2.6";
    if !decomp.all_prime() {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "components are not all prime",
        );
    }
    if !decomp.spans_all_vars() {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "component supports do not cover every variable",
        );
    }
    let n = decomp.num_vars() as i64;
    let k = decomp.k() as i64;
    BoundReport::upper(NAME, CITE, n + k, 2)
}

/// Sandwich `(n + |A|) / 2 <= sdepth(I) <= (n + k) / 2` for an intersection
/// of irreducible ideals with disjoint supports covering every variable,
/// where `A` is the set of components of odd height. Also reports the two
/// exact specializations: `|A| = k` gives `(n + k) / 2`, and odd `k` with
/// `|A| = k - 1` gives `(n + k - 1) / 2`.
pub fn cor28_bounds(decomp: &DecomposedIdeal) -> Vec<BoundReport> {
    const NAME_LO: &str = "cor2.8.lower";
    const NAME_HI: &str = "cor2.8.upper";
    const CITE: &str = "Cor 2.8";
    if !decomp.spans_all_vars() {
        let reason = "component supports do not cover every variable";
        return vec![
            BoundReport::inapplicable(NAME_LO, CITE, BoundKind::Lower, reason),
            BoundReport::inapplicable(NAME_HI, CITE, BoundKind::Upper, reason),
        ];
    }
    let n = decomp.num_vars() as i64;
    let k = decomp.k() as i64;
    let a = decomp.odd_height_count() as i64;
    // n and |A| agree mod 2 because the heights sum to n.
    debug_assert_eq!((n + a) % 2, 0);
    let mut reports = vec![
        BoundReport::lower(NAME_LO, CITE, n + a, 2),
        BoundReport::upper(NAME_HI, CITE, n + k, 2),
    ];
    if a == k {
        reports.push(BoundReport::exact("cor2.9", "Cor 2.9", (n + k) / 2));
    } else if k % 2 == 1 && a == k - 1 {
        reports.push(BoundReport::exact("cor2.10", "Cor 2.10", (n + k - 1) / 2));
    }
    reports
}

/// Stanley depth of the edge ideal of the complete `k`-partite hypergraph
/// with all parts of size `d`: exactly `(n + k) / 2` for odd `d`, and
/// between `n / 2` and `(n + k) / 2` for even `d`, with `n = d * k`.
pub fn cor212_bounds(d: usize, k: usize) -> Vec<BoundReport> {
    const CITE: &str = "Cor 2.12";
    if d == 0 || k == 0 {
        return vec![BoundReport::inapplicable(
            "cor2.12",
            CITE,
            BoundKind::Exact,
            "part size and part count must be positive",
        )];
    }
    let n = (d * k) as i64;
    let k = k as i64;
    if d % 2 == 1 {
        vec![BoundReport::exact("cor2.12", CITE, (n + k) / 2)]
    } else {
        vec![
            BoundReport::lower("cor2.12.lower", CITE, n, 2),
            BoundReport::upper("cor2.12.upper", CITE, n + k, 2),
        ]
    }
}

fn is_minimal_transversal(edges: &[Vec<usize>], chosen: &[usize], in_chosen: &[bool]) -> bool {
    // Every chosen variable must privately hit some edge, i.e. be the only
    // chosen variable of it; otherwise dropping it leaves a transversal.
    chosen.iter().all(|&v| {
        edges
            .iter()
            .any(|e| e.contains(&v) && e.iter().all(|&w| w == v || !in_chosen[w]))
    })
}

/// Branch on the first edge not yet hit. The i-th branch commits to "take
/// the edge's i-th variable and never take an earlier one", so each minimal
/// transversal is generated along exactly one path and permutation blowup
/// is avoided; branches whose variable is already excluded die immediately.
fn enumerate_transversals(
    edges: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    in_chosen: &mut [bool],
    excluded: &mut [bool],
    out: &mut BTreeSet<Vec<usize>>,
    nodes: &mut u64,
    cap: usize,
) -> Result<(), BoundsError> {
    *nodes += 1;
    if *nodes > TRANSVERSAL_NODE_CAP || out.len() > cap {
        return Err(BoundsError::MinPrimesCapExceeded { cap });
    }
    let unhit = edges
        .iter()
        .find(|e| !e.iter().any(|&v| in_chosen[v]));
    match unhit {
        None => {
            if is_minimal_transversal(edges, chosen, in_chosen) {
                let mut t = chosen.clone();
                t.sort_unstable();
                out.insert(t);
                if out.len() > cap {
                    return Err(BoundsError::MinPrimesCapExceeded { cap });
                }
            }
            Ok(())
        }
        Some(edge) => {
            let mut locally_excluded = Vec::new();
            let mut result = Ok(());
            for &v in edge {
                if excluded[v] {
                    continue;
                }
                chosen.push(v);
                in_chosen[v] = true;
                result = enumerate_transversals(edges, chosen, in_chosen, excluded, out, nodes, cap);
                chosen.pop();
                in_chosen[v] = false;
                if result.is_err() {
                    break;
                }
                excluded[v] = true;
                locally_excluded.push(v);
            }
            for v in locally_excluded {
                excluded[v] = false;
            }
            result
        }
    }
}

/// All minimal primes of `ideal`, i.e. the minimal sets of variables meeting
/// the support of every generator, sorted by height and then by variable
/// list. Fails only if the answer (or the search for it) exceeds `cap`.
pub fn min_primes_capped(
    ideal: &MonomialIdeal,
    cap: usize,
) -> Result<Vec<PrimeIdeal>, BoundsError> {
    let edges: Vec<Vec<usize>> = ideal.gens().iter().map(|g| g.support()).collect();
    let n = ideal.num_vars();
    let mut out = BTreeSet::new();
    let mut nodes = 0u64;
    enumerate_transversals(
        &edges,
        &mut Vec::new(),
        &mut vec![false; n],
        &mut vec![false; n],
        &mut out,
        &mut nodes,
        cap,
    )?;
    let mut primes: Vec<Vec<usize>> = out.into_iter().collect();
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(primes
        .into_iter()
        .map(|vars| PrimeIdeal::new(ideal.num_vars(), vars).expect("distinct in-range vars"))
        .collect())
}

/// [`min_primes_capped`] with the default cap.
pub fn min_primes(ideal: &MonomialIdeal) -> Result<Vec<PrimeIdeal>, BoundsError> {
    min_primes_capped(ideal, DEFAULT_MIN_PRIMES_CAP)
}

/// Per-prime data feeding [`thm213_upper`]: the minimal primes, for each one
/// the count `d_i` of its variables lying in no other minimal prime, and the
/// number `r` of indices with `d_i != 0`.
pub fn thm213_data(ideal: &MonomialIdeal) -> Result<(Vec<PrimeIdeal>, Vec<usize>, usize), BoundsError> {
    let primes = min_primes(ideal)?;
    let n = ideal.num_vars();
    let mut owner_count = vec![0usize; n];
    for p in &primes {
        for &v in p.vars() {
            owner_count[v] += 1;
        }
    }
    let d: Vec<usize> = primes
        .iter()
        .map(|p| p.vars().iter().filter(|&&v| owner_count[v] == 1).count())
        .collect();
    let r = d.iter().filter(|&&di| di != 0).count();
    Ok((primes, d, r))
}

/// Upper bound `(2n + r - (d_1 + ... + d_s)) / 2` from the minimal primes
/// `P_1, ..., P_s` of `ideal`, where `d_i` counts the variables private to
/// `P_i` and `r` the primes with `d_i != 0`. Requires the minimal primes to
/// sum to the maximal ideal and `r >= 1`.
pub fn thm213_upper(ideal: &MonomialIdeal) -> BoundReport {
    const NAME: &str = "thm2.13";
    const CITE: &str = "Thm 2.13";
    let (primes, d, r) = match thm213_data(ideal) {
        Ok(data) => data,
        Err(_) => {
            return BoundReport::inapplicable(
                NAME,
                CITE,
                BoundKind::Upper,
                "minimal prime enumeration exceeded its cap",
            )
        }
    };
    let n = ideal.num_vars();
    let mut covered = vec![false; n];
    for p in &primes {
        for &v in p.vars() {
            covered[v] = true;
        }
    }
    if !covered.iter().all(|&c| c) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "minimal primes do not sum to the maximal ideal",
        );
    }
    if r == 0 {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "every minimal prime shares all its variables",
        );
    }
    let sum_d: i64 = d.iter().map(|&x| x as i64).sum();
    let num = 2 * n as i64 + r as i64 - sum_d;
    let report = BoundReport::upper(NAME, CITE, num, 2);
    let mut d_sorted = d.clone();
    d_sorted.sort_unstable();
    if n == 36 && primes.len() == 4 && r == 4 && d_sorted == [8, 8, 8, 9] {
        // A worked instance of this formula is quoted elsewhere as 23; the
        // formula itself evaluates to floor(43/2) = 21 on these inputs.
        return report.with_note("sometimes quoted as 23; the formula gives floor(43/2) = 21");
    }
    report
}

fn thm31_value(heights: &[usize]) -> i64 {
    let n: i64 = heights.iter().map(|&r| r as i64).sum();
    let k = heights.len();
    let mut best = n - heights[0] as i64;
    let mut prefix_half = 0i64; // sum of ceil(r_j / 2) over j < i
    let mut suffix: i64 = heights.iter().skip(1).map(|&r| r as i64).sum();
    for i in 1..k {
        prefix_half += (heights[i - 1] as i64 + 1) / 2;
        suffix -= heights[i] as i64;
        best = best.min(prefix_half + suffix);
    }
    best
}

/// Lower bound for `sdepth(S/I)` when `I` is an intersection of irreducible
/// ideals with disjoint supports covering every variable, taken in the
/// given component order with heights `r_1, ..., r_k`:
/// `min(n - r_1, min over 2 <= i <= k of sum_{j<i} ceil(r_j/2) + sum_{j>i} r_j)`.
pub fn thm31_lower(heights: &[usize]) -> BoundReport {
    const NAME: &str = "thm3.1";
    const CITE: &str = "Thm 3.1";
    if heights.is_empty() || heights.iter().any(|&r| r == 0) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "heights must be positive",
        );
    }
    BoundReport::lower(NAME, CITE, thm31_value(heights), 1)
}

/// Maximum number of components for which [`thm31_best_order`] exhausts all
/// orderings.
const BEST_ORDER_EXHAUSTIVE_K: usize = 9;

/// [`thm31_lower`] maximized over the order in which the components are
/// listed. The note records an order achieving the maximum.
pub fn thm31_best_order(heights: &[usize]) -> BoundReport {
    const NAME: &str = "thm3.1.best";
    const CITE: &str = "Thm 3.1";
    if heights.is_empty() || heights.iter().any(|&r| r == 0) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "heights must be positive",
        );
    }
    let k = heights.len();
    if k > BEST_ORDER_EXHAUSTIVE_K {
        let mut sorted = heights.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let value = thm31_value(&sorted).max(thm31_value(heights));
        return BoundReport::lower(NAME, CITE, value, 1)
            .with_note("too many components to try every order; tried the given and the nonincreasing order");
    }
    // Distinct orderings of the multiset of heights, tried in sorted order
    // so the reported witness is deterministic.
    let mut orders: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut perm = heights.to_vec();
    perm.sort_unstable();
    loop {
        orders.insert(perm.clone());
        // Next lexicographic permutation.
        let Some(i) = (0..k - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    let (best_order, best_value) = orders
        .iter()
        .map(|ord| (ord, thm31_value(ord)))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
        .expect("at least one order");
    let order_text = best_order
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    BoundReport::lower(NAME, CITE, best_value, 1)
        .with_note(format!("achieved with heights in order ({order_text})"))
}

/// Lower bound `ceil(r_1/2) + ... + ceil(r_{k-1}/2)` for `sdepth(S/I)` when
/// the component heights satisfy `r_1 >= r_2 = ... = r_k`.
///
/// The formula is the `i = k` term of the minimum in [`thm31_lower`]; it is
/// reported only when it does not exceed the `n - r_1` term as well, so that
/// the value coincides with the full theorem minimum. (For heights like
/// `(3, 1, 1)` the plain formula gives 3 while the point `x4*x5` is maximal
/// in the quotient poset with rank 2, so the guard is not optional.)
pub fn cor34_lower(heights: &[usize]) -> BoundReport {
    const NAME: &str = "cor3.4";
    const CITE: &str = "Cor 3.4";
    if heights.is_empty() || heights.iter().any(|&r| r == 0) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "heights must be positive",
        );
    }
    let tail_equal = heights.len() < 2 || heights[1..].windows(2).all(|w| w[0] == w[1]);
    if !tail_equal || (heights.len() >= 2 && heights[0] < heights[1]) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "heights must satisfy r1 >= r2 = ... = rk",
        );
    }
    let value: i64 = heights[..heights.len() - 1]
        .iter()
        .map(|&r| (r as i64 + 1) / 2)
        .sum();
    let n: i64 = heights.iter().map(|&r| r as i64).sum();
    if value > n - heights[0] as i64 {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "the n - r1 term of the underlying minimum falls below the formula",
        );
    }
    BoundReport::lower(NAME, CITE, value, 1)
}

/// Lower bound `(k - 1) * ceil(d / 2)` for the cyclic quotient by the edge
/// ideal of the complete `k`-partite hypergraph with parts of size `d`.
pub fn cor35_lower(d: usize, k: usize) -> BoundReport {
    const NAME: &str = "cor3.5";
    const CITE: &str = "Cor 3.5";
    if d == 0 || k == 0 {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Lower,
            "part size and part count must be positive",
        );
    }
    let value = (k as i64 - 1) * ((d as i64 + 1) / 2);
    BoundReport::lower(NAME, CITE, value, 1)
}

/// Upper bound `ceil(r_{k-1}/2) + r_1 + ... + r_{k-2}` for `sdepth(S/I)`
/// when `I` is an intersection of `k >= 3` primes with disjoint supports
/// covering every variable and heights sorted nonincreasingly.
pub fn prop38_upper(heights: &[usize]) -> BoundReport {
    const NAME: &str = "prop3.8";
    const CITE: &str = "Prop 3.8";
    if heights.iter().any(|&r| r == 0) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "heights must be positive",
        );
    }
    let k = heights.len();
    if k < 3 {
        return BoundReport::inapplicable(NAME, CITE, BoundKind::Upper, "needs at least 3 components");
    }
    if heights.windows(2).any(|w| w[0] < w[1]) {
        return BoundReport::inapplicable(
            NAME,
            CITE,
            BoundKind::Upper,
            "heights must be sorted nonincreasingly",
        );
    }
    let prefix: i64 = heights[..k - 2].iter().map(|&r| r as i64).sum();
    let value = prefix + (heights[k - 1 - 1] as i64 + 1) / 2;
    BoundReport::upper(NAME, CITE, value, 1)
}

/// Sandwich `(k-1) * ceil(d/2) <= sdepth(S/I) <= (k-2) * d + ceil(d/2)` for
/// the cyclic quotient by the edge ideal of the complete `k`-partite
/// hypergraph with parts of size `d`, `k >= 3`.
pub fn cor39_bounds(d: usize, k: usize) -> Vec<BoundReport> {
    const CITE: &str = "Cor 3.9";
    if d == 0 || k < 3 {
        let reason = "needs positive part size and at least 3 parts";
        return vec![
            BoundReport::inapplicable("cor3.9.lower", CITE, BoundKind::Lower, reason),
            BoundReport::inapplicable("cor3.9.upper", CITE, BoundKind::Upper, reason),
        ];
    }
    let d = d as i64;
    let k = k as i64;
    let half_up = (d + 1) / 2;
    vec![
        BoundReport::lower("cor3.9.lower", CITE, (k - 1) * half_up, 1),
        BoundReport::upper("cor3.9.upper", CITE, (k - 2) * d + half_up, 1),
    ]
}

/// Tries to recognize `ideal` as an intersection of irreducible ideals with
/// pairwise disjoint supports. Returns `None` when no such presentation
/// exists (or when the minimal-prime search blows past its cap).
///
/// The candidate components are read off the minimal primes: inside one
/// prime, every generator must use a variable with one fixed exponent.
/// The candidate is accepted only if its intersection reproduces the ideal.
pub fn attempt_decompose(ideal: &MonomialIdeal) -> Option<DecomposedIdeal> {
    let primes = min_primes(ideal).ok()?;
    let n = ideal.num_vars();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, p) in primes.iter().enumerate() {
        for &v in p.vars() {
            if owner[v].replace(i).is_some() {
                return None; // supports overlap
            }
        }
    }
    // One exponent per variable, constant across all generators using it.
    let mut exponent: Vec<Option<u32>> = vec![None; n];
    for gen in ideal.gens() {
        for v in gen.support() {
            let e = gen.exponent(v);
            match exponent[v] {
                None => exponent[v] = Some(e),
                Some(prev) if prev == e => {}
                Some(_) => return None,
            }
        }
    }
    let mut powers: Vec<Vec<(usize, u32)>> = vec![Vec::new(); primes.len()];
    for v in 0..n {
        if let (Some(i), Some(e)) = (owner[v], exponent[v]) {
            powers[i].push((v, e));
        }
    }
    let mut components = Vec::with_capacity(primes.len());
    for (i, p) in primes.iter().enumerate() {
        if powers[i].len() != p.height() {
            return None; // some variable of the prime appears in no generator
        }
        components.push(IrreducibleIdeal::new(n, powers[i].clone()).ok()?);
    }
    let decomp = DecomposedIdeal::new(components).ok()?;
    if decomp.intersection_ideal().gens() == ideal.gens() {
        Some(decomp)
    } else {
        None
    }
}

/// Aggregated output of [`bounds_report`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSummary {
    pub reports: Vec<BoundReport>,
    /// Best applicable lower bound (max over lower and exact reports).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_lower: Option<i64>,
    /// Best applicable upper bound (min over upper and exact reports).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_upper: Option<i64>,
    /// Depth of the module in question, known in closed form when the ideal
    /// decomposes into irreducible components covering every variable:
    /// `k` for the ideal itself and `k - 1` for the cyclic quotient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<i64>,
}

fn fold_bracket(reports: &[BoundReport]) -> (Option<i64>, Option<i64>) {
    let mut lo = None;
    let mut hi = None;
    for r in reports {
        if !r.applicable {
            continue;
        }
        let Some(v) = r.value else { continue };
        if matches!(r.kind, BoundKind::Lower | BoundKind::Exact) {
            lo = Some(lo.map_or(v, |x: i64| x.max(v)));
        }
        if matches!(r.kind, BoundKind::Upper | BoundKind::Exact) {
            hi = Some(hi.map_or(v, |x: i64| x.min(v)));
        }
    }
    (lo, hi)
}

/// Detects the complete k-partite shape: all components prime, all of one
/// height, supports covering every variable.
fn h_shape(decomp: &DecomposedIdeal) -> Option<(usize, usize)> {
    if !decomp.all_prime() || !decomp.spans_all_vars() {
        return None;
    }
    let heights = decomp.heights();
    let d = heights[0];
    heights.iter().all(|&r| r == d).then_some((d, decomp.k()))
}

/// Runs every calculator relevant to `kind` against `ideal`, using the
/// supplied decomposition (in its given component order) for the results
/// that need one.
pub fn bounds_report_for(
    ideal: &MonomialIdeal,
    kind: PosetKind,
    decomp: Option<&DecomposedIdeal>,
) -> BoundsSummary {
    let mut reports = Vec::new();
    let no_decomp = "ideal is not a recognized intersection of irreducible \
                     ideals with pairwise disjoint supports";
    match kind {
        PosetKind::Ideal => {
            reports.extend(lemma24_bounds(ideal));
            match decomp {
                Some(d) => {
                    reports.push(thm26_upper(d));
                    reports.extend(cor28_bounds(d));
                    if let Some((part, k)) = h_shape(d) {
                        reports.extend(cor212_bounds(part, k));
                    }
                }
                None => {
                    reports.push(BoundReport::inapplicable(
                        "thm2.6",
                        "Thm 2.6",
                        BoundKind::Upper,
                        no_decomp,
                    ));
                    reports.push(BoundReport::inapplicable(
                        "cor2.8.lower",
                        "Cor 2.8",
                        BoundKind::Lower,
                        no_decomp,
                    ));
                    reports.push(BoundReport::inapplicable(
                        "cor2.8.upper",
                        "Cor 2.8",
                        BoundKind::Upper,
                        no_decomp,
                    ));
                }
            }
            reports.push(thm213_upper(ideal));
        }
        PosetKind::Quotient => match decomp {
            Some(d) if d.spans_all_vars() => {
                let heights = d.heights();
                reports.push(thm31_lower(&heights));
                reports.push(thm31_best_order(&heights));
                let cor34 = cor34_lower(&heights);
                if cor34.applicable {
                    reports.push(cor34);
                }
                if let Some((part, k)) = h_shape(d) {
                    reports.push(cor35_lower(part, k));
                    if k >= 3 {
                        reports.extend(cor39_bounds(part, k));
                    }
                }
                if d.all_prime() && d.k() >= 3 {
                    let mut sorted = heights.clone();
                    sorted.sort_unstable_by(|a, b| b.cmp(a));
                    reports.push(prop38_upper(&sorted));
                }
            }
            _ => {
                let reason = if decomp.is_some() {
                    "component supports do not cover every variable"
                } else {
                    no_decomp
                };
                reports.push(BoundReport::inapplicable(
                    "thm3.1",
                    "Thm 3.1",
                    BoundKind::Lower,
                    reason,
                ));
            }
        },
    }
    let (bracket_lower, bracket_upper) = fold_bracket(&reports);
    let depth = decomp.filter(|d| d.spans_all_vars()).map(|d| match kind {
        PosetKind::Ideal => d.k() as i64,
        PosetKind::Quotient => d.k() as i64 - 1,
    });
    BoundsSummary {
        reports,
        bracket_lower,
        bracket_upper,
        depth,
    }
}

/// [`bounds_report_for`] with the decomposition recovered automatically
/// (components in the canonical minimal-prime order).
pub fn bounds_report(ideal: &MonomialIdeal, kind: PosetKind) -> BoundsSummary {
    let decomp = attempt_decompose(ideal);
    bounds_report_for(ideal, kind, decomp.as_ref())
}
