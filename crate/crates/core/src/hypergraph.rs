//! Builders for complete k-partite edge ideals and disjoint-support
//! intersections, plus the deterministic instance generators the tests and
//! the survey harness feed on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::{BoundsError, DecomposedIdeal};
use crate::ideal::{IdealError, IrreducibleIdeal, MonomialIdeal, PrimeIdeal};
use crate::monomial::Monomial;

#[derive(Debug, Error)]
pub enum HypergraphError {
    #[error("a k-partite spec needs at least one part")]
    NoParts,
    #[error("part {index} has size zero")]
    EmptyPart { index: usize },
    #[error("component {index} has no generators")]
    EmptyComponent { index: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Part sizes d_1..d_k of a complete k-partite vertex set; the edge ideal
/// lives in n = Σ d_i variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPartiteSpec {
    part_sizes: Vec<usize>,
}

impl KPartiteSpec {
    pub fn new(part_sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        if part_sizes.is_empty() {
            return Err(HypergraphError::NoParts);
        }
        if let Some(index) = part_sizes.iter().position(|&d| d == 0) {
            return Err(HypergraphError::EmptyPart { index });
        }
        Ok(KPartiteSpec { part_sizes })
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn k(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn num_vars(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    /// Flat index of the first variable of part `i`: parts are laid out one
    /// after another, so vertex j of part i is variable `offset(i) + j`.
    pub fn part_offset(&self, i: usize) -> usize {
        self.part_sizes[..i].iter().sum()
    }

    /// The part primes (x_offset(i), …, x_offset(i)+d_i−1) in part order.
    pub fn part_primes(&self) -> Vec<PrimeIdeal> {
        let n = self.num_vars();
        (0..self.k())
            .map(|i| {
                let off = self.part_offset(i);
                let vars = (off..off + self.part_sizes[i]).collect();
                PrimeIdeal::new(n, vars).expect("part sizes are positive")
            })
            .collect()
    }
}

/// The edge ideal of the complete k-partite hypergraph on `spec`: one
/// squarefree degree-k generator per choice of a vertex from each part.
/// Returns the part primes together with their intersection, which is
/// checked to coincide with their product.
pub fn build_kpartite(spec: &KPartiteSpec) -> (Vec<PrimeIdeal>, MonomialIdeal) {
    let primes = spec.part_primes();
    let mut intersection = primes[0].to_ideal();
    let mut product = primes[0].to_ideal();
    for p in &primes[1..] {
        let ideal = p.to_ideal();
        intersection = intersection.intersect(&ideal).expect("same ring");
        product = product.product(&ideal).expect("same ring, tiny exponents");
    }
    // Disjoint supports make the product and the intersection coincide;
    // anything else is a builder bug.
    assert_eq!(product, intersection, "k-partite product must equal intersection");
    (primes, intersection)
}

/// An intersection of component ideals on pairwise disjoint supports, with
/// the metadata the closed-form bounds care about. Components need not be
/// irreducible; `decomposition` is present exactly when they all are.
#[derive(Clone, Debug)]
pub struct IntersectionInstance {
    components: Vec<MonomialIdeal>,
    irreducible: Vec<bool>,
    ideal: MonomialIdeal,
    decomposition: Option<DecomposedIdeal>,
}

impl IntersectionInstance {
    pub fn components(&self) -> &[MonomialIdeal] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Support size of each component, in component order.
    pub fn heights(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.support().len()).collect()
    }

    pub fn odd_height_count(&self) -> usize {
        self.heights().iter().filter(|&&h| h % 2 == 1).count()
    }

    /// Whether the component supports cover every variable, i.e. the
    /// radicals sum to the maximal ideal.
    pub fn spans_all_vars(&self) -> bool {
        self.heights().iter().sum::<usize>() == self.ideal.num_vars()
    }

    /// Per-component flag: generated by pure powers of distinct variables.
    pub fn irreducible_flags(&self) -> &[bool] {
        &self.irreducible
    }

    pub fn all_irreducible(&self) -> bool {
        self.irreducible.iter().all(|&f| f)
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    /// The instance as input to the closed-form bounds, when every
    /// component is irreducible.
    pub fn decomposition(&self) -> Option<&DecomposedIdeal> {
        self.decomposition.as_ref()
    }
}

/// Recovers the pure-power form of a component when it has one.
fn as_irreducible(component: &MonomialIdeal) -> Option<IrreducibleIdeal> {
    let mut powers = Vec::with_capacity(component.gens().len());
    for g in component.gens() {
        let support = g.support();
        if support.len() != 1 {
            return None;
        }
        powers.push((support[0], g.exponent(support[0])));
    }
    IrreducibleIdeal::new(component.num_vars(), powers).ok()
}

/// Intersects per-component generator lists with pairwise disjoint supports.
/// Components are arbitrary ideals; overlapping supports are rejected.
pub fn build_component_intersection(
    num_vars: usize,
    components: &[Vec<Monomial>],
) -> Result<IntersectionInstance, HypergraphError> {
    if components.is_empty() {
        return Err(HypergraphError::Bounds(BoundsError::NoComponents));
    }
    let mut ideals = Vec::with_capacity(components.len());
    let mut seen = vec![false; num_vars];
    for (index, gens) in components.iter().enumerate() {
        if gens.is_empty() {
            return Err(HypergraphError::EmptyComponent { index });
        }
        let ideal = MonomialIdeal::new(num_vars, gens.clone())?;
        for var in ideal.support() {
            if seen[var] {
                return Err(HypergraphError::Bounds(BoundsError::OverlappingSupports {
                    var,
                }));
            }
            seen[var] = true;
        }
        ideals.push(ideal);
    }
    let mut intersection = ideals[0].clone();
    for c in &ideals[1..] {
        intersection = intersection.intersect(c)?;
    }
    let irreducible_parts: Option<Vec<IrreducibleIdeal>> =
        ideals.iter().map(as_irreducible).collect();
    let decomposition = irreducible_parts.map(|parts| {
        DecomposedIdeal::new(parts).expect("supports were checked disjoint")
    });
    let irreducible = ideals
        .iter()
        .map(|c| as_irreducible(c).is_some())
        .collect();
    Ok(IntersectionInstance {
        components: ideals,
        irreducible,
        ideal: intersection,
        decomposition,
    })
}

/// Intersects irreducible components given as (variable, exponent) lists
/// with pairwise disjoint supports.
pub fn build_irreducible_intersection(
    num_vars: usize,
    powers: &[Vec<(usize, u32)>],
) -> Result<(DecomposedIdeal, MonomialIdeal), HypergraphError> {
    let components: Vec<Vec<Monomial>> = powers
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|&(v, e)| Monomial::var_power(num_vars, v, e))
                .collect()
        })
        .collect();
    let instance = build_component_intersection(num_vars, &components)?;
    let decomp = instance
        .decomposition()
        .expect("pure-power components are irreducible")
        .clone();
    Ok((decomp, instance.ideal))
}

/// All k-partite specs with the given number of parts and at most `max_n`
/// vertices, part sizes nondecreasing (the canonical representative up to
/// variable permutation), in lexicographic order.
pub fn enumerate_kpartite_specs(max_n: usize, k: usize) -> Vec<KPartiteSpec> {
    let mut out = Vec::new();
    let mut sizes = Vec::with_capacity(k);
    fn extend(sizes: &mut Vec<usize>, k: usize, left: usize, min: usize, out: &mut Vec<KPartiteSpec>) {
        if sizes.len() == k {
            out.push(KPartiteSpec::new(sizes.clone()).expect("sizes are positive"));
            return;
        }
        let remaining = k - sizes.len();
        // Each later part is at least `d`, so d can spend at most left/remaining.
        for d in min..=left / remaining {
            sizes.push(d);
            extend(sizes, k, left - d, d, out);
            sizes.pop();
        }
    }
    extend(&mut sizes, k, max_n, 1, &mut out);
    out.sort_by(|a, b| a.part_sizes.cmp(&b.part_sizes));
    out
}

/// Parameters for [`random_ideal`].
#[derive(Clone, Copy, Debug)]
pub struct RandomIdealParams {
    pub num_vars: usize,
    pub max_exp: u32,
    pub max_gens: usize,
}

/// A reproducible random monomial ideal: the seed fully determines the
/// result. Generators draw each exponent uniformly from 0..=max_exp,
/// resampling constants.
pub fn random_ideal(seed: u64, params: &RandomIdealParams) -> MonomialIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=params.max_gens.max(1));
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        loop {
            let exps: Vec<u32> = (0..params.num_vars)
                .map(|_| rng.gen_range(0..=params.max_exp))
                .collect();
            if exps.iter().any(|&e| e > 0) {
                gens.push(Monomial::new(exps));
                break;
            }
        }
    }
    MonomialIdeal::new(params.num_vars, gens).expect("generators are non-unit")
}

/// A reproducible random disjoint-support irreducible intersection on all
/// `num_vars` variables: every variable lands in one of `k` components
/// (each kept nonempty), with exponents in 1..=max_exp.
pub fn random_irreducible_intersection(
    seed: u64,
    num_vars: usize,
    k: usize,
    max_exp: u32,
) -> DecomposedIdeal {
    assert!(k >= 1 && k <= num_vars, "need 1 <= k <= num_vars");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment: Vec<usize> = (0..num_vars).map(|_| rng.gen_range(0..k)).collect();
    // The first k variables repair any empty component deterministically.
    let mut counts = vec![0usize; k];
    for &c in &assignment {
        counts[c] += 1;
    }
    for c in 0..k {
        if counts[c] == 0 {
            let donor = (0..num_vars)
                .find(|&v| counts[assignment[v]] > 1)
                .expect("num_vars >= k leaves a donor");
            counts[assignment[donor]] -= 1;
            assignment[donor] = c;
            counts[c] += 1;
        }
    }
    let components: Vec<IrreducibleIdeal> = (0..k)
        .map(|c| {
            let powers: Vec<(usize, u32)> = (0..num_vars)
                .filter(|&v| assignment[v] == c)
                .map(|v| (v, rng.gen_range(1..=max_exp.max(1))))
                .collect();
            IrreducibleIdeal::new(num_vars, powers).expect("component is nonempty")
        })
        .collect();
    DecomposedIdeal::new(components).expect("components partition the variables")
}
