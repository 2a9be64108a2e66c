//! Exact Stanley depth by complete search over interval partitions.
//!
//! The search decides, for a fixed target `k`, whether the characteristic
//! poset admits a partition into intervals whose tops all have rank at least
//! `k`. Three structural facts keep it manageable:
//!
//! - Any partition refines to one in which every top `d` satisfies
//!   `d_j ∈ {c_j, g_j}` coordinatewise over its bottom `c` (split an interval
//!   along a coordinate strictly between the two; tops keep their rank). So
//!   it suffices to branch over subsets of a bottom's free coordinates,
//!   raised all the way to the ceiling.
//! - Member codes form a linear extension of the poset order, and an
//!   interval is connected under the covering relation. Hence the search can
//!   work on connected components of the *uncovered* subposet independently
//!   — no interval crosses components, so a failed component refutes the
//!   whole branch and a solved component never needs revisiting — and within
//!   a component the minimum uncovered member must be an interval bottom.
//! - Every member of an interval sees the interval's top above it through
//!   uncovered members. Two prunes follow: a rank-reachability sweep (some
//!   uncovered member must reach rank `k` through uncovered points above),
//!   and a direction count (a member needs enough fully-uncovered segments
//!   to the ceiling to make up rank `k`).
//!
//! Exact values come from a descending scan: starting at the best proven
//! upper bound and stopping at the best proven lower bound, the first target
//! `k` with a successful decision is the Stanley depth, and the found
//! partition is returned as a checkable certificate.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::iter::{IntoParallelRefIterator, ParallelIterator};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::bounds::bounds_report;
use crate::partition::{Interval, IntervalPartition};
use crate::poset::{char_poset, CharPoset, PosetError, PosetKind, DEFAULT_MAX_POINTS};
use crate::MonomialIdeal;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("search exhausted its node budget after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("search exceeded its time limit of {limit_ms} ms")]
    TimeLimitExceeded { limit_ms: u64 },
    #[error("no target in the proven range [{lower}, {upper}] admits a partition; a bound must be wrong")]
    InconsistentBounds { lower: u32, upper: u32 },
}

/// Resource limits for one call into the solver. Both limits are shared
/// across all decision targets and worker threads of that call.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub budget: Budget,
    /// Worker threads for the root-level split. The result is independent of
    /// this value; only the wall time changes.
    pub threads: usize,
    /// Largest bounding box the poset builder will accept.
    pub max_points: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: Budget::default(),
            threads: 1,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveStats {
    /// Search-tree nodes expanded, summed over all decision targets.
    pub nodes: u64,
    pub elapsed: Duration,
}

/// An exact Stanley depth together with a witnessing partition.
#[derive(Clone, Debug)]
pub struct SdepthResult {
    pub value: u32,
    /// Interval partition of the characteristic poset all of whose tops have
    /// rank at least `value`; re-checkable with `partition_sdepth`.
    pub certificate: IntervalPartition,
    pub stats: SolveStats,
}

const NO_MEMBER: u32 = u32::MAX;

/// Candidate interval top at a given bottom: the subset of free coordinates
/// to raise, with the resulting top code for ordering and placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    size: u32,
    top_code: u64,
    raise_mask: u32,
}

/// Member-indexed view of a characteristic poset, precomputed once per
/// solver call.
struct Prepared<'a> {
    poset: &'a CharPoset,
    /// Member codes, ascending (a linear extension of the poset order).
    codes: Vec<u64>,
    points: Vec<Vec<u32>>,
    rho: Vec<u32>,
    num_vars: usize,
    g: Vec<u32>,
    /// `succ[i * n + j]`: member index one step up coordinate `j`, or
    /// `NO_MEMBER` when that point leaves the box or the poset.
    succ: Vec<u32>,
    pred: Vec<u32>,
    /// Static upward max-rank per member; `min` over members bounds the
    /// Stanley depth from above.
    reach: Vec<u32>,
    /// Per-member canonical candidates, sorted by (size, top code), built
    /// lazily — only members that actually become bottoms pay for it.
    cands: Vec<OnceLock<Box<[Candidate]>>>,
}

impl<'a> Prepared<'a> {
    fn new(poset: &'a CharPoset) -> Self {
        let bx = poset.exponent_box();
        let codes: Vec<u64> = poset.member_codes().collect();
        let m = codes.len();
        let points: Vec<Vec<u32>> = codes.iter().map(|&c| bx.decode(c)).collect();
        let rho: Vec<u32> = points.iter().map(|p| bx.rho(p)).collect();
        let g = bx.ceiling().to_vec();
        let n = g.len();
        let idx_of = |code: u64| -> u32 {
            codes
                .binary_search(&code)
                .map(|i| i as u32)
                .unwrap_or(NO_MEMBER)
        };
        let mut succ = vec![NO_MEMBER; m * n];
        let mut pred = vec![NO_MEMBER; m * n];
        for i in 0..m {
            for j in 0..n {
                if points[i][j] < g[j] {
                    succ[i * n + j] = idx_of(codes[i] + bx.stride(j));
                }
                if points[i][j] > 0 {
                    pred[i * n + j] = idx_of(codes[i] - bx.stride(j));
                }
            }
        }
        // Upward max-rank in descending code order; in both poset kinds a
        // member sees every member above it through one-step member chains.
        let mut reach = rho.clone();
        for i in (0..m).rev() {
            for j in 0..n {
                let s = succ[i * n + j];
                if s != NO_MEMBER {
                    reach[i] = reach[i].max(reach[s as usize]);
                }
            }
        }
        let cands = (0..m).map(|_| OnceLock::new()).collect();
        Prepared {
            poset,
            codes,
            points,
            rho,
            num_vars: n,
            g,
            succ,
            pred,
            reach,
            cands,
        }
    }

    fn len(&self) -> usize {
        self.codes.len()
    }

    #[inline]
    fn succ_of(&self, i: usize, j: usize) -> u32 {
        self.succ[i * self.num_vars + j]
    }

    #[inline]
    fn pred_of(&self, i: usize, j: usize) -> u32 {
        self.pred[i * self.num_vars + j]
    }

    fn reach_bound(&self) -> u32 {
        self.reach.iter().copied().min().unwrap_or(0)
    }

    /// All canonical candidates at bottom `i` (any size), sorted by
    /// (size, top code). Quotient kind keeps only tops inside the poset.
    fn candidates(&self, i: usize) -> &[Candidate] {
        self.cands[i].get_or_init(|| {
            let bx = self.poset.exponent_box();
            let p = &self.points[i];
            let free: Vec<usize> = (0..self.num_vars).filter(|&j| p[j] < self.g[j]).collect();
            debug_assert!(free.len() < 32);
            let deltas: Vec<u64> = free
                .iter()
                .map(|&j| (self.g[j] - p[j]) as u64 * bx.stride(j))
                .collect();
            let quotient = self.poset.kind() == PosetKind::Quotient;
            let mut out = Vec::with_capacity(1 << free.len());
            for mask in 0u32..1 << free.len() {
                let mut top = self.codes[i];
                for (b, delta) in deltas.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        top += delta;
                    }
                }
                if quotient && !self.poset.contains_code(top) {
                    continue;
                }
                out.push(Candidate {
                    size: mask.count_ones(),
                    top_code: top,
                    raise_mask: mask,
                });
            }
            out.sort_unstable_by(|a, b| a.size.cmp(&b.size).then(a.top_code.cmp(&b.top_code)));
            out.into_boxed_slice()
        })
    }

    /// Coordinates raised by `raise_mask` at bottom `i` (the mask indexes
    /// `i`'s free coordinates in increasing order).
    fn raised_coords(&self, i: usize, raise_mask: u32) -> Vec<usize> {
        let p = &self.points[i];
        (0..self.num_vars)
            .filter(|&j| p[j] < self.g[j])
            .enumerate()
            .filter(|(b, _)| raise_mask >> *b & 1 == 1)
            .map(|(_, j)| j)
            .collect()
    }

    /// Member indices of the interval at bottom `i` raising the coordinate
    /// subset encoded by `raise_mask` (over `i`'s free coordinates).
    fn interval_members(&self, i: usize, raise_mask: u32) -> Vec<usize> {
        let mut idxs = vec![i];
        for j in self.raised_coords(i, raise_mask) {
            // Extend every collected point by the full segment along j.
            let mut extended = Vec::with_capacity(idxs.len() * 2);
            for &x in &idxs {
                extended.push(x);
                let mut cur = x;
                loop {
                    let s = self.succ_of(cur, j);
                    if s == NO_MEMBER {
                        break;
                    }
                    cur = s as usize;
                    extended.push(cur);
                }
            }
            idxs = extended;
        }
        idxs
    }

    /// Whether every member of the interval at bottom `i` raising `raised`
    /// is still uncovered, without materializing the member list.
    fn interval_uncovered(&self, covered: &BitSet, i: usize, raised: &[usize]) -> bool {
        if covered.contains(i) {
            return false;
        }
        let Some((&j, rest)) = raised.split_first() else {
            return true;
        };
        let mut cur = i;
        loop {
            if !self.interval_uncovered(covered, cur, rest) {
                return false;
            }
            let s = self.succ_of(cur, j);
            if s == NO_MEMBER {
                return true;
            }
            cur = s as usize;
        }
    }
}

/// Outcome of one bounded search attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Sat,
    Unsat,
    /// The attempt's local node cap ran out before a definitive answer; the
    /// caller retries with a larger cap and a reshuffled candidate order.
    Capped,
}

struct SearchCtx<'a> {
    prep: &'a Prepared<'a>,
    k: u32,
    /// Restart number; variant 0 keeps the natural candidate order, later
    /// variants shuffle within each size class (deterministically).
    variant: u64,
    nodes: &'a AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
    limit_ms: u64,
    local: std::cell::Cell<u64>,
    local_cap: u64,
}

impl SearchCtx<'_> {
    /// Accounts one search node. `Ok(true)` to continue, `Ok(false)` when
    /// the local restart cap is spent, `Err` when a global limit is hit.
    fn tick(&self) -> Result<bool, SolveError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max_nodes {
            return Err(SolveError::BudgetExhausted { nodes: n });
        }
        if let Some(deadline) = self.deadline {
            if n % 64 == 0 && Instant::now() > deadline {
                return Err(SolveError::TimeLimitExceeded {
                    limit_ms: self.limit_ms,
                });
            }
        }
        let l = self.local.get() + 1;
        self.local.set(l);
        Ok(l <= self.local_cap)
    }
}

/// Splits the uncovered members of `comp` minus freshly covered points into
/// connected components under the covering relation, each sorted ascending,
/// ordered smallest-first so cheap refutations come early.
fn split_components(prep: &Prepared, covered: &BitSet, comp: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = BitSet::new(prep.len());
    let mut out: Vec<Vec<usize>> = Vec::new();
    let in_comp = |x: usize| comp.binary_search(&x).is_ok();
    for &seed in comp {
        if covered.contains(seed) || seen.contains(seed) {
            continue;
        }
        let mut stack = vec![seed];
        let mut cur = vec![seed];
        seen.insert(seed);
        while let Some(x) = stack.pop() {
            for j in 0..prep.num_vars {
                for nb in [prep.succ_of(x, j), prep.pred_of(x, j)] {
                    if nb == NO_MEMBER {
                        continue;
                    }
                    let nb = nb as usize;
                    if covered.contains(nb) || seen.contains(nb) || !in_comp(nb) {
                        continue;
                    }
                    seen.insert(nb);
                    cur.push(nb);
                    stack.push(nb);
                }
            }
        }
        cur.sort_unstable();
        out.push(cur);
    }
    out.sort_by_key(|c| c.len());
    out
}

/// No available top above: the component is dead.
const TOP_NONE: u32 = u32::MAX - 1;
/// Several available tops: no forcing information.
const TOP_MANY: u32 = u32::MAX;

/// Largest sub-box the unique-top group prune will walk point by point.
const GROUP_BOX_CAP: u64 = 4096;

/// Necessary conditions for `comp` (all uncovered) to admit a partition with
/// tops of rank at least `k`:
///
/// - top availability: each member must see some member of rank at least `k`
///   above it through uncovered members, since its interval's top is one and
///   the interval itself is an uncovered upward path to it;
/// - unique-top grouping: when that available top `t` is *unique* for a set
///   of members, they all land in the single interval topped `t`, forcing
///   exact agreement with `t` outside the raised coordinates and a fully
///   uncovered sub-box from their meet up to `t`; the forced sub-boxes of
///   distinct tops lie in distinct intervals and must be pairwise disjoint;
/// - direction count: each member needs `k - rho` fully uncovered segments
///   to the ceiling, since a raised coordinate of its interval keeps the
///   whole segment inside that interval.
fn component_feasible(prep: &Prepared, covered: &BitSet, comp: &[usize], k: u32, scratch: &mut Vec<u32>) -> bool {
    // Available tops above each member of comp, walking down the linear
    // extension: none, exactly one (stored as a position in comp), or many.
    scratch.clear();
    scratch.resize(comp.len(), TOP_NONE);
    for (pos, &x) in comp.iter().enumerate().rev() {
        let mut avail = if prep.rho[x] >= k {
            pos as u32
        } else {
            TOP_NONE
        };
        for j in 0..prep.num_vars {
            if avail == TOP_MANY {
                break;
            }
            let s = prep.succ_of(x, j);
            if s == NO_MEMBER || covered.contains(s as usize) {
                continue;
            }
            // Members one step up inside comp sit after pos.
            if let Ok(off) = comp[pos + 1..].binary_search(&(s as usize)) {
                avail = match (avail, scratch[pos + 1 + off]) {
                    (a, TOP_NONE) => a,
                    (TOP_NONE, b) => b,
                    (a, b) if a == b => a,
                    _ => TOP_MANY,
                };
            }
        }
        if avail == TOP_NONE {
            return false;
        }
        scratch[pos] = avail;
    }
    // Group members by forced top and check each group fits one interval.
    let mut groups: Vec<(u32, u32)> = scratch
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t != TOP_MANY)
        .map(|(pos, &t)| (t, pos as u32))
        .collect();
    groups.sort_unstable();
    let mut regions: Vec<(Vec<u32>, usize)> = Vec::new();
    let mut i = 0;
    while i < groups.len() {
        let t_pos = groups[i].0;
        let mut end = i;
        while end < groups.len() && groups[end].0 == t_pos {
            end += 1;
        }
        match group_fits(prep, covered, comp, t_pos as usize, &groups[i..end]) {
            None => return false,
            Some(low) => regions.push((low, comp[t_pos as usize])),
        }
        i = end;
    }
    // Forced regions belong to distinct intervals (tops differ), so any two
    // of them must be disjoint. Two boxes intersect exactly when the join of
    // their bottoms stays below the meet of their tops.
    for (a, (low_a, t_a)) in regions.iter().enumerate() {
        for (low_b, t_b) in &regions[a + 1..] {
            let overlap = (0..prep.num_vars).all(|j| {
                low_a[j].max(low_b[j]) <= prep.points[*t_a][j].min(prep.points[*t_b][j])
            });
            if overlap {
                return false;
            }
        }
    }
    for &x in comp {
        let mut usable = prep.rho[x];
        if usable >= k {
            continue;
        }
        for j in 0..prep.num_vars {
            if prep.points[x][j] >= prep.g[j] {
                continue;
            }
            let mut cur = x;
            let mut ok = true;
            loop {
                let s = prep.succ_of(cur, j);
                if s == NO_MEMBER {
                    break;
                }
                if covered.contains(s as usize) {
                    ok = false;
                    break;
                }
                cur = s as usize;
            }
            // The segment must reach the ceiling inside the poset.
            if ok && prep.points[cur][j] == prep.g[j] {
                usable += 1;
                if usable >= k {
                    break;
                }
            }
        }
        if usable < k {
            return false;
        }
    }
    tops_match(prep, comp, k)
}

/// Two members can share an interval only if the interval also contains
/// their componentwise meet (ideal kind) or join (quotient kind), which must
/// then be a member. Points violating that pairwise sit in distinct
/// intervals, whose tops are distinct members of rank at least `k` above
/// them — so a bipartite matching from any pairwise-incompatible antichain
/// into the available tops must saturate it (Hall's condition).
fn tops_match(prep: &Prepared, comp: &[usize], k: u32) -> bool {
    let n = prep.num_vars;
    let quotient = prep.poset.kind() == PosetKind::Quotient;
    // Greedy antichain of pairwise-incompatible minimal members. Minimality
    // within comp is enough: preds outside comp are covered by definition.
    let mut left: Vec<usize> = Vec::new();
    'outer: for &x in comp {
        let minimal = (0..n).all(|j| {
            let p = prep.pred_of(x, j);
            p == NO_MEMBER || comp.binary_search(&(p as usize)).is_err()
        });
        if !minimal {
            continue;
        }
        let bx = prep.poset.exponent_box();
        for &y in &left {
            let mut code = 0u64;
            for j in 0..n {
                let e = if quotient {
                    prep.points[x][j].max(prep.points[y][j])
                } else {
                    prep.points[x][j].min(prep.points[y][j])
                };
                code += e as u64 * bx.stride(j);
            }
            if prep.poset.contains_code(code) {
                continue 'outer; // compatible with a kept point: skip
            }
        }
        left.push(x);
    }
    if left.len() < 2 {
        return true;
    }
    let tops: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|&t| prep.rho[t] >= k)
        .collect();
    if tops.len() < left.len() {
        return false;
    }
    // Kuhn's augmenting-path matching, smallest side on the left.
    let below = |x: usize, t: usize| (0..n).all(|j| prep.points[x][j] <= prep.points[t][j]);
    let mut matched_to: Vec<Option<usize>> = vec![None; tops.len()];
    for (xi, &x) in left.iter().enumerate() {
        let mut seen = vec![false; tops.len()];
        if !augment(&mut matched_to, &mut seen, &left, &tops, xi, x, &below) {
            return false;
        }
    }
    true
}

fn augment(
    matched_to: &mut Vec<Option<usize>>,
    seen: &mut Vec<bool>,
    left: &[usize],
    tops: &[usize],
    xi: usize,
    x: usize,
    below: &impl Fn(usize, usize) -> bool,
) -> bool {
    let _ = xi;
    for ti in 0..tops.len() {
        if seen[ti] || !below(x, tops[ti]) {
            continue;
        }
        seen[ti] = true;
        match matched_to[ti] {
            None => {
                matched_to[ti] = Some(x);
                return true;
            }
            Some(owner) => {
                let owner_idx = left.iter().position(|&l| l == owner).expect("owner in left");
                if augment(matched_to, seen, left, tops, owner_idx, owner, below) {
                    matched_to[ti] = Some(x);
                    return true;
                }
            }
        }
    }
    false
}

/// Whether the members of `group` (positions in `comp`, all of whose only
/// available top is `comp[t_pos]`) can share one canonical interval topped
/// there: each must match the top exactly on non-ceiling coordinates, and
/// the sub-box from their coordinatewise meet up to the top must be entirely
/// uncovered (it lies inside any interval containing the group). On success
/// returns the meet, i.e. the bottom of the forced region.
fn group_fits(
    prep: &Prepared,
    covered: &BitSet,
    comp: &[usize],
    t_pos: usize,
    group: &[(u32, u32)],
) -> Option<Vec<u32>> {
    let t = comp[t_pos];
    let tp = &prep.points[t];
    let mut low = tp.clone();
    for &(_, pos) in group {
        let x = comp[pos as usize];
        let xp = &prep.points[x];
        for j in 0..prep.num_vars {
            if tp[j] == prep.g[j] {
                low[j] = low[j].min(xp[j]);
            } else if xp[j] != tp[j] {
                return None;
            }
        }
    }
    let mut size = 1u64;
    for j in 0..prep.num_vars {
        size = size.saturating_mul((tp[j] - low[j] + 1) as u64);
        if size > GROUP_BOX_CAP {
            return Some(low); // too large to walk; pass without pruning
        }
    }
    if size == 1 {
        return Some(low); // the top alone, already known uncovered
    }
    let bx = prep.poset.exponent_box();
    let mut cur = low.clone();
    loop {
        let mut code = 0u64;
        for j in 0..prep.num_vars {
            code += cur[j] as u64 * bx.stride(j);
        }
        match prep.codes.binary_search(&code) {
            Ok(i) => {
                if covered.contains(i) {
                    return None;
                }
            }
            // A gap in the box means no interval can span it at all.
            Err(_) => return None,
        }
        // Odometer step over the coordinates where low < top.
        let mut j = prep.num_vars;
        loop {
            if j == 0 {
                return Some(low);
            }
            j -= 1;
            if cur[j] < tp[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = low[j];
        }
    }
}

/// The raise set an interval bottomed at `b` must include to contain `p`,
/// as a mask over `b`'s free coordinates, or `None` when `b` is not below
/// `p`. Unraised coordinates pin the interval to the bottom's value, so `p`
/// forces a raise exactly where it exceeds `b`.
fn required_mask(prep: &Prepared, b: usize, p: usize) -> Option<u32> {
    let bp = &prep.points[b];
    let pp = &prep.points[p];
    let mut required = 0u32;
    let mut bit = 0u32;
    for j in 0..prep.num_vars {
        if bp[j] > pp[j] {
            return None;
        }
        if bp[j] < prep.g[j] {
            if pp[j] > bp[j] {
                required |= 1 << bit;
            }
            bit += 1;
        }
    }
    Some(required)
}

/// Elementary-step allowance for one branch-point scan; once spent the
/// remaining points report the cap, which only weakens the branching
/// heuristic, never soundness.
const CHOOSE_SCAN_CAP: usize = 65_536;
/// Cover counts are capped here even for the first point scanned.
const CHOOSE_CAP_INIT: usize = 8;

/// Capped upper bound on how many intervals could still cover `p`: bottoms
/// are uncovered members of `comp` below `p`, tops canonical candidates of
/// rank at least `k` raising everything `required_mask` demands. Box
/// interiors are not checked, so the count over-approximates — a zero is a
/// proof that `p` cannot be covered at all.
fn cover_bound(
    prep: &Prepared,
    covered: &BitSet,
    comp: &[usize],
    p: usize,
    k: u32,
    cap: usize,
    allowance: &mut usize,
) -> usize {
    let mut count = 0usize;
    for &b in comp {
        if b > p {
            // Ascending member index is a linear extension: no bottoms here.
            break;
        }
        if covered.contains(b) {
            continue;
        }
        let Some(required) = required_mask(prep, b, p) else {
            continue;
        };
        let need = k.saturating_sub(prep.rho[b]) as usize;
        let cands = prep.candidates(b);
        let start = cands.partition_point(|c| (c.size as usize) < need);
        for cand in &cands[start..] {
            if *allowance == 0 {
                return cap;
            }
            *allowance -= 1;
            if cand.raise_mask & required == required {
                count += 1;
                if count >= cap {
                    return count;
                }
            }
        }
    }
    count
}

/// Chooses the branch point of `comp`: the uncovered member with the fewest
/// remaining covers. Any uncovered point is a sound branch spot — exactly
/// one interval of any extension covers it — and the scarcest one fails
/// fastest; a count of one doubles as unit propagation. Returns the point
/// with its capped cover bound.
fn choose_point(prep: &Prepared, covered: &BitSet, comp: &[usize], k: u32) -> (usize, usize) {
    let mut allowance = CHOOSE_SCAN_CAP;
    let mut best = usize::MAX;
    let mut best_count = usize::MAX;
    for &p in comp {
        if covered.contains(p) {
            continue;
        }
        let cap = best_count.min(CHOOSE_CAP_INIT);
        let c = cover_bound(prep, covered, comp, p, k, cap, &mut allowance);
        if c < best_count {
            best = p;
            best_count = c;
            if best_count == 0 {
                break;
            }
        }
    }
    debug_assert_ne!(best, usize::MAX, "component has an uncovered member");
    (best, best_count)
}

/// Every interval that can still cover `p`: an uncovered bottom below it, a
/// canonical top of rank at least `k` raising everything `p` needs, and a
/// fully uncovered box. Ordered smallest interval first (then bottom, then
/// top code); variants beyond 0 shuffle within each size class, keyed only
/// by (variant, point code) so the order does not depend on the path that
/// led here.
fn covers_of(
    ctx: &SearchCtx,
    covered: &BitSet,
    comp: &[usize],
    p: usize,
) -> Vec<(usize, Candidate)> {
    let prep = ctx.prep;
    let mut out: Vec<(usize, Candidate)> = Vec::new();
    for &b in comp {
        if b > p {
            break;
        }
        if covered.contains(b) {
            continue;
        }
        let Some(required) = required_mask(prep, b, p) else {
            continue;
        };
        let need = ctx.k.saturating_sub(prep.rho[b]) as usize;
        let cands = prep.candidates(b);
        let start = cands.partition_point(|c| (c.size as usize) < need);
        for cand in &cands[start..] {
            if cand.raise_mask & required != required {
                continue;
            }
            let raised = prep.raised_coords(b, cand.raise_mask);
            if prep.interval_uncovered(covered, b, &raised) {
                out.push((b, *cand));
            }
        }
    }
    out.sort_by(|(b1, c1), (b2, c2)| {
        (c1.size, prep.codes[*b1], c1.top_code).cmp(&(c2.size, prep.codes[*b2], c2.top_code))
    });
    if ctx.variant > 0 && out.len() > 1 {
        let seed = ctx
            .variant
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(prep.codes[p].wrapping_mul(0xD1B5_4A32_D192_ED03));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..out.len()).rev() {
            let j = rng.gen_range(0..=i);
            out.swap(i, j);
        }
        out.sort_by_key(|(_, c)| c.size);
    }
    out
}

/// Complete bounded search for a partition of the connected component
/// `comp` (all of whose members are uncovered). On `Sat` the chosen
/// intervals are appended to `out` and their points stay covered; otherwise
/// all traces are rolled back.
fn solve_component(
    ctx: &SearchCtx,
    covered: &mut BitSet,
    comp: &[usize],
    out: &mut Vec<(u64, u64)>,
) -> Result<Verdict, SolveError> {
    if !ctx.tick()? {
        return Ok(Verdict::Capped);
    }
    let prep = ctx.prep;
    let (point, bound) = choose_point(prep, covered, comp, ctx.k);
    if bound == 0 {
        return Ok(Verdict::Unsat);
    }
    let out_mark = out.len();
    for (bottom, cand) in covers_of(ctx, covered, comp, point) {
        let idxs = prep.interval_members(bottom, cand.raise_mask);
        // Rollbacks restore `covered` exactly, so the boxes vetted during
        // enumeration stay uncovered across the whole loop.
        debug_assert!(idxs.iter().all(|&x| !covered.contains(x)));
        for &x in &idxs {
            covered.insert(x);
        }
        out.push((prep.codes[bottom], cand.top_code));
        let mut verdict = Verdict::Sat;
        if idxs.len() < comp.len() {
            let parts = split_components(prep, covered, comp);
            let mut scratch = Vec::new();
            for part in &parts {
                if !component_feasible(prep, covered, part, ctx.k, &mut scratch) {
                    verdict = Verdict::Unsat;
                    break;
                }
            }
            if verdict == Verdict::Sat {
                for part in &parts {
                    match solve_component(ctx, covered, part, out)? {
                        Verdict::Sat => {}
                        other => {
                            verdict = other;
                            break;
                        }
                    }
                }
            }
        }
        if verdict == Verdict::Sat {
            return Ok(Verdict::Sat);
        }
        // Roll back this candidate and everything solved under it.
        while out.len() > out_mark {
            let (from, to) = out.pop().expect("non-empty");
            let i = prep
                .codes
                .binary_search(&from)
                .expect("interval bottom is a member");
            let mask = raise_mask_for(prep, i, to);
            for x in prep.interval_members(i, mask) {
                covered.remove(x);
            }
        }
        if verdict == Verdict::Capped {
            // Abandon the whole attempt; the next restart re-explores.
            return Ok(Verdict::Capped);
        }
    }
    Ok(Verdict::Unsat)
}

/// Recovers the free-coordinate subset mask that turns `codes[i]` into `to`.
fn raise_mask_for(prep: &Prepared, i: usize, to: u64) -> u32 {
    let bx = prep.poset.exponent_box();
    let p = &prep.points[i];
    let top = bx.decode(to);
    let mut mask = 0u32;
    let mut b = 0;
    for j in 0..prep.num_vars {
        if p[j] < prep.g[j] {
            if top[j] == prep.g[j] {
                mask |= 1 << b;
            }
            b += 1;
        }
    }
    mask
}

fn intervals_from_codes(poset: &CharPoset, codes: &[(u64, u64)]) -> IntervalPartition {
    let bx = poset.exponent_box();
    let mut codes = codes.to_vec();
    codes.sort_unstable();
    IntervalPartition {
        intervals: codes
            .iter()
            .map(|&(from, to)| Interval {
                from: bx.decode(from),
                to: bx.decode(to),
            })
            .collect(),
    }
}

/// Decides whether the poset admits an interval partition with all tops of
/// rank at least `k`, returning a witness when it does. Complete: a `None`
/// is a proof of impossibility (within the given budget).
pub fn decide_sdepth(
    poset: &CharPoset,
    k: u32,
    config: &SolverConfig,
) -> Result<Option<IntervalPartition>, SolveError> {
    let prep = Prepared::new(poset);
    let nodes = AtomicU64::new(0);
    decide_prepared(&prep, k, config, &nodes)
}

/// Base local node cap for the first restart pass of a component.
const RESTART_UNIT: u64 = 16384;
/// Restart passes stop doubling the cap beyond this shift (the cap is then
/// effectively unbounded for any feasible search).
const RESTART_MAX_SHIFT: u64 = 40;

struct Limits {
    max_nodes: u64,
    deadline: Option<Instant>,
    limit_ms: u64,
}

/// One bounded attempt at a root candidate: place it, then solve what is
/// left of `comp`. Self-contained so root candidates can run in parallel.
fn attempt_root_candidate(
    prep: &Prepared,
    comp: &[usize],
    bottom: usize,
    cand: Candidate,
    k: u32,
    variant: u64,
    local_cap: u64,
    nodes: &AtomicU64,
    limits: &Limits,
) -> Result<(Verdict, Vec<(u64, u64)>), SolveError> {
    let ctx = SearchCtx {
        prep,
        k,
        variant,
        nodes,
        max_nodes: limits.max_nodes,
        deadline: limits.deadline,
        limit_ms: limits.limit_ms,
        local: std::cell::Cell::new(0),
        local_cap,
    };
    let mut covered = BitSet::new(prep.len());
    let mut out = Vec::new();
    let idxs = prep.interval_members(bottom, cand.raise_mask);
    for &x in &idxs {
        covered.insert(x);
    }
    out.push((prep.codes[bottom], cand.top_code));
    if idxs.len() == comp.len() {
        return Ok((Verdict::Sat, out));
    }
    let parts = split_components(prep, &covered, comp);
    let mut scratch = Vec::new();
    for part in &parts {
        if !component_feasible(prep, &covered, part, k, &mut scratch) {
            return Ok((Verdict::Unsat, out));
        }
    }
    for part in &parts {
        match solve_component(&ctx, &mut covered, part, &mut out)? {
            Verdict::Sat => {}
            other => return Ok((other, out)),
        }
    }
    Ok((Verdict::Sat, out))
}

/// Shuffled variants tried per cap level, besides the natural order.
const VARIANTS_PER_LEVEL: u64 = 5;

/// One restart pass over the root candidates of `comp`: each candidate gets
/// an independent node cap, tried in the variant's fixed order. `Unsat` is
/// definitive (every subtree was exhausted below the cap). Outcomes do not
/// depend on the thread count: `find_map_first` surfaces the earliest
/// non-`Unsat` candidate exactly as the sequential loop would.
fn run_pass(
    prep: &Prepared,
    comp: &[usize],
    k: u32,
    variant: u64,
    cap: u64,
    pool: Option<&rayon::ThreadPool>,
    nodes: &AtomicU64,
    limits: &Limits,
) -> Result<(Verdict, Vec<(u64, u64)>), SolveError> {
    // Reuse the per-point shuffle so the root order matches the order deeper
    // recursion would use at this branch point.
    let order_ctx = SearchCtx {
        prep,
        k,
        variant,
        nodes,
        max_nodes: u64::MAX,
        deadline: None,
        limit_ms: 0,
        local: std::cell::Cell::new(0),
        local_cap: u64::MAX,
    };
    let empty = BitSet::new(prep.len());
    let (point, bound) = choose_point(prep, &empty, comp, k);
    if bound == 0 {
        return Ok((Verdict::Unsat, Vec::new()));
    }
    let covers = covers_of(&order_ctx, &empty, comp, point);
    let run = |(bottom, cand): (usize, Candidate)| {
        attempt_root_candidate(prep, comp, bottom, cand, k, variant, cap, nodes, limits)
    };
    // A capped attempt leaves that root cover undecided but must not stop
    // the scan: a later cover may still succeed within its own cap. The
    // pass is `Unsat` only when every cover was exhausted cap-free.
    let capped = AtomicBool::new(false);
    match pool {
        Some(pool) if covers.len() > 1 => {
            let first = pool.install(|| {
                covers.par_iter().find_map_first(|&cover| match run(cover) {
                    Ok((Verdict::Sat, out)) => Some(Ok((Verdict::Sat, out))),
                    Ok((Verdict::Unsat, _)) => None,
                    Ok((Verdict::Capped, _)) => {
                        capped.store(true, Ordering::Relaxed);
                        None
                    }
                    Err(e) => Some(Err(e)),
                })
            });
            if let Some(res) = first {
                return res;
            }
        }
        _ => {
            for &cover in &covers {
                match run(cover)? {
                    (Verdict::Sat, out) => return Ok((Verdict::Sat, out)),
                    (Verdict::Unsat, _) => {}
                    (Verdict::Capped, _) => capped.store(true, Ordering::Relaxed),
                }
            }
        }
    }
    let verdict = if capped.load(Ordering::Relaxed) {
        Verdict::Capped
    } else {
        Verdict::Unsat
    };
    Ok((verdict, Vec::new()))
}

/// Solves one root component with restarts. Cap level `l` gives every root
/// candidate an independent node cap `RESTART_UNIT << l`, first under the
/// natural candidate order and then under a few fresh shuffles; undecided
/// passes move to the next level. The first `Sat` or cap-free `Unsat` pass
/// is definitive.
fn solve_root(
    prep: &Prepared,
    comp: &[usize],
    k: u32,
    pool: Option<&rayon::ThreadPool>,
    nodes: &AtomicU64,
    limits: &Limits,
) -> Result<Option<Vec<(u64, u64)>>, SolveError> {
    for level in 0u64.. {
        let cap = RESTART_UNIT << level.min(RESTART_MAX_SHIFT);
        for i in 0..=VARIANTS_PER_LEVEL {
            let variant = if i == 0 {
                0
            } else {
                VARIANTS_PER_LEVEL * level + i
            };
            match run_pass(prep, comp, k, variant, cap, pool, nodes, limits)? {
                (Verdict::Sat, out) => return Ok(Some(out)),
                (Verdict::Unsat, _) => return Ok(None),
                (Verdict::Capped, _) => {}
            }
        }
    }
    unreachable!("restart passes either cap out or finish")
}

fn decide_prepared(
    prep: &Prepared,
    k: u32,
    config: &SolverConfig,
    nodes: &AtomicU64,
) -> Result<Option<IntervalPartition>, SolveError> {
    if prep.len() == 0 {
        return Ok(Some(IntervalPartition {
            intervals: Vec::new(),
        }));
    }
    if prep.reach_bound() < k {
        return Ok(None);
    }
    let limits = Limits {
        max_nodes: config.budget.max_nodes.unwrap_or(u64::MAX),
        deadline: config.budget.max_time.map(|d| Instant::now() + d),
        limit_ms: config
            .budget
            .max_time
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
    };
    let all: Vec<usize> = (0..prep.len()).collect();
    let covered = BitSet::new(prep.len());
    let mut scratch = Vec::new();
    let roots = split_components(prep, &covered, &all);
    for root in &roots {
        if !component_feasible(prep, &covered, root, k, &mut scratch) {
            return Ok(None);
        }
    }
    let pool = if config.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };
    // Root components are independent subproblems; all must succeed.
    let mut out = Vec::new();
    for root in &roots {
        match solve_root(prep, root, k, pool.as_ref(), nodes, &limits)? {
            Some(part) => out.extend(part),
            None => return Ok(None),
        }
    }
    Ok(Some(intervals_from_codes(prep.poset, &out)))
}

/// Exact Stanley depth of the given characteristic poset.
///
/// Scans targets downward from the best proven upper bound (closed-form
/// bounds and the structural reach bound) to the best proven lower bound;
/// the first decidable target is the value. If every target in the proven
/// range fails, a bound is wrong and [`SolveError::InconsistentBounds`] is
/// returned rather than a weakened answer.
pub fn exact_sdepth_poset(
    poset: &CharPoset,
    config: &SolverConfig,
) -> Result<SdepthResult, SolveError> {
    let start = Instant::now();
    let prep = Prepared::new(poset);
    let n = poset.num_vars() as u32;
    let summary = bounds_report(poset.source(), poset.kind());
    let mut upper = n.min(prep.reach_bound());
    if let Some(hi) = summary.bracket_upper {
        upper = upper.min(hi.max(0) as u32);
    }
    let lower = summary.bracket_lower.map_or(0, |lo| lo.max(0) as u32);
    let nodes = AtomicU64::new(0);
    let mut k = upper;
    loop {
        if let Some(certificate) = decide_prepared(&prep, k, config, &nodes)? {
            debug_assert!(
                crate::partition::partition_sdepth(poset, &certificate)
                    .map(|v| v >= k)
                    .unwrap_or(poset.is_empty()),
                "certificate must verify at the claimed rank"
            );
            return Ok(SdepthResult {
                value: k,
                certificate,
                stats: SolveStats {
                    nodes: nodes.load(Ordering::Relaxed),
                    elapsed: start.elapsed(),
                },
            });
        }
        if k == 0 || k <= lower {
            return Err(SolveError::InconsistentBounds { lower, upper });
        }
        k -= 1;
    }
}

/// Exact Stanley depth of `I` (kind [`PosetKind::Ideal`]) or `S/I`
/// (kind [`PosetKind::Quotient`]).
pub fn exact_sdepth(
    ideal: &MonomialIdeal,
    kind: PosetKind,
    config: &SolverConfig,
) -> Result<SdepthResult, SolveError> {
    let poset = char_poset(ideal, kind, config.max_points)?;
    exact_sdepth_poset(&poset, config)
}
