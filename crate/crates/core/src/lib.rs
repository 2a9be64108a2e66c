//! Stanley depth of monomial ideals, computed exactly.
//!
//! A Stanley decomposition of a monomial ideal `I` (or of a cyclic quotient
//! `S/I`) writes the module as a finite direct sum of Stanley spaces
//! `u·K[Z]`, where `u` is a monomial and `Z` a set of variables; the Stanley
//! depth is the best achievable `min |Z|`. For monomial ideals this reduces
//! to a finite combinatorial problem: partition the *characteristic poset*
//! of `I` — exponent vectors `c ≤ g` that dominate some generator, with `g`
//! the componentwise generator maximum — into intervals `[c, d]` and maximize
//! the minimum of `rho(d) = #{j : d_j = g_j}` over the interval tops. The
//! quotient case uses the complementary (downward-closed) poset.
//!
//! The crate provides:
//!
//! - [`monomial`] / [`ideal`]: exponent-vector monomials and minimally
//!   generated monomial ideals with the algebra the rest of the crate needs
//!   (intersection, product, radical, exponent raising).
//! - [`poset`] / [`partition`]: characteristic posets over a bounding box
//!   with mixed-radix point codes, interval partitions, and the
//!   rank function `rho`.
//! - [`solver`]: a complete backtracking search deciding whether a partition
//!   with all tops of rank ≥ k exists, plus exact Stanley depth by a
//!   bound-bracketed descending search over k.
//! - [`bounds`]: closed-form lower/upper bound calculators for intersections
//!   of irreducible ideals with pairwise disjoint supports, reported with
//!   exact rational values and applicability flags.
//! - [`hypergraph`]: builders and enumerators for k-partite ideals
//!   (intersections of monomial primes on disjoint variable blocks) and
//!   random instance generation for harnesses.
//! - [`format`]: the text ideal format and the JSON partition format.
//!
//! Exponents are machine integers (`u32`); arithmetic that could overflow is
//! checked and surfaces as an error. All derived quantities are exact —
//! half-integral bounds are carried as rationals and integerized explicitly.

pub mod bitset;
pub mod bounds;
pub mod format;
pub mod hypergraph;
pub mod ideal;
pub mod monomial;
pub mod partition;
pub mod poset;
pub mod solver;

pub use ideal::{IrreducibleIdeal, MonomialIdeal, PrimeIdeal};
pub use monomial::Monomial;
pub use partition::{Interval, IntervalPartition, StanleySpace};
pub use poset::{CharPoset, ExponentBox, PosetKind};
pub use solver::{exact_sdepth, SdepthResult, SolverConfig};
