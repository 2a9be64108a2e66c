//! Interval partitions of characteristic posets and their verification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::monomial::Monomial;
use crate::poset::CharPoset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("interval {index}: {reason}")]
    MalformedInterval { index: usize, reason: String },
    #[error("point {} lies outside the poset", FmtPoint(.0))]
    PointOutsidePoset(Vec<u32>),
    #[error("point {} is covered twice", FmtPoint(.0))]
    OverlappingPoint(Vec<u32>),
    #[error("poset point {} is not covered", FmtPoint(.0))]
    UncoveredPoint(Vec<u32>),
    #[error("partition has no intervals")]
    Empty,
}

struct FmtPoint<'a>(&'a Vec<u32>);

impl fmt::Display for FmtPoint<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A closed interval `[from, to]` of exponent vectors, `from ≤ to`
/// componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
}

impl Interval {
    pub fn new(from: Vec<u32>, to: Vec<u32>) -> Self {
        Interval { from, to }
    }

    /// Number of box points inside the interval.
    pub fn point_count(&self) -> u128 {
        self.from
            .iter()
            .zip(&self.to)
            .map(|(&a, &b)| (b - a) as u128 + 1)
            .product()
    }
}

/// An ordered list of intervals meant to partition a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalPartition {
    pub intervals: Vec<Interval>,
}

impl IntervalPartition {
    pub fn new(intervals: Vec<Interval>) -> Self {
        IntervalPartition { intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Check that `partition` exactly tiles the members of `poset` with disjoint
/// intervals and return its value: the minimum of `rho` over interval tops.
///
/// The first offending point (in interval order, then code order within an
/// interval; uncovered points in code order) is reported on failure.
pub fn partition_sdepth(
    poset: &CharPoset,
    partition: &IntervalPartition,
) -> Result<u32, PartitionError> {
    let bx = poset.exponent_box();
    let n = bx.num_vars();
    if partition.intervals.is_empty() {
        return Err(PartitionError::Empty);
    }
    for (index, iv) in partition.intervals.iter().enumerate() {
        if iv.from.len() != n || iv.to.len() != n {
            return Err(PartitionError::MalformedInterval {
                index,
                reason: format!("expected {n} coordinates"),
            });
        }
        for j in 0..n {
            if iv.from[j] > iv.to[j] {
                return Err(PartitionError::MalformedInterval {
                    index,
                    reason: format!("lower end exceeds upper end at coordinate {}", j + 1),
                });
            }
            if iv.to[j] > bx.ceiling()[j] {
                return Err(PartitionError::MalformedInterval {
                    index,
                    reason: format!("upper end leaves the box at coordinate {}", j + 1),
                });
            }
        }
    }

    let mut covered = BitSet::new(bx.size() as usize);
    let mut min_rho = u32::MAX;
    for iv in &partition.intervals {
        min_rho = min_rho.min(bx.rho(&iv.to));
        // Walk the interval as its own little odometer.
        let mut point = iv.from.clone();
        loop {
            let code = bx.encode(&point) as usize;
            if !poset.contains_code(code as u64) {
                return Err(PartitionError::PointOutsidePoset(point));
            }
            if covered.contains(code) {
                return Err(PartitionError::OverlappingPoint(point));
            }
            covered.insert(code);
            // Advance within [from, to].
            let mut done = true;
            for j in (0..n).rev() {
                if point[j] < iv.to[j] {
                    point[j] += 1;
                    done = false;
                    break;
                }
                point[j] = iv.from[j];
            }
            if done {
                break;
            }
        }
    }
    for code in poset.member_codes() {
        if !covered.contains(code as usize) {
            return Err(PartitionError::UncoveredPoint(bx.decode(code)));
        }
    }
    Ok(min_rho)
}

/// A Stanley space `u · K[Z]`: a monomial generator and a set of free
/// variables (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StanleySpace {
    pub generator: Monomial,
    pub free_vars: Vec<usize>,
}

impl fmt::Display for StanleySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * K[", self.generator)?;
        for (i, v) in self.free_vars.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "x{}", v + 1)?;
        }
        write!(f, "]")
    }
}

/// Read a verified partition as a Stanley decomposition: the interval
/// `[c, d]` becomes `x^c · K[{x_j : d_j = g_j}]`, so every space has at
/// least `min rho` free variables.
pub fn to_stanley_decomposition(
    poset: &CharPoset,
    partition: &IntervalPartition,
) -> Result<Vec<StanleySpace>, PartitionError> {
    partition_sdepth(poset, partition)?;
    let g = poset.exponent_box().ceiling();
    Ok(partition
        .intervals
        .iter()
        .map(|iv| StanleySpace {
            generator: Monomial::new(iv.from.clone()),
            free_vars: (0..g.len()).filter(|&j| iv.to[j] == g[j]).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{MonomialIdeal, PrimeIdeal};
    use crate::poset::{char_poset, PosetKind};

    fn iv(from: &[u32], to: &[u32]) -> Interval {
        Interval::new(from.to_vec(), to.to_vec())
    }

    fn principal_xy() -> CharPoset {
        // (x1*x2) with ceiling (1,1): members (1,1) only... plus upward
        // closure inside the box: just the single point (1,1).
        let i = MonomialIdeal::new(2, vec![Monomial::new(vec![1, 1])]).unwrap();
        char_poset(&i, PosetKind::Ideal, 1 << 20).unwrap()
    }

    #[test]
    fn single_interval_partition_verifies() {
        let p = principal_xy();
        let part = IntervalPartition::new(vec![iv(&[1, 1], &[1, 1])]);
        assert_eq!(partition_sdepth(&p, &part), Ok(2));
    }

    #[test]
    fn detects_uncovered_overlap_and_escape() {
        let i = PrimeIdeal::new(2, vec![0, 1]).unwrap().to_ideal();
        let p = char_poset(&i, PosetKind::Ideal, 1 << 20).unwrap();
        // Members: (0,1), (1,0), (1,1).
        let missing = IntervalPartition::new(vec![iv(&[0, 1], &[1, 1])]);
        assert_eq!(
            partition_sdepth(&p, &missing),
            Err(PartitionError::UncoveredPoint(vec![1, 0]))
        );
        let overlapping = IntervalPartition::new(vec![
            iv(&[0, 1], &[1, 1]),
            iv(&[1, 0], &[1, 1]),
        ]);
        assert_eq!(
            partition_sdepth(&p, &overlapping),
            Err(PartitionError::OverlappingPoint(vec![1, 1]))
        );
        let escaping = IntervalPartition::new(vec![iv(&[0, 0], &[1, 1])]);
        assert_eq!(
            partition_sdepth(&p, &escaping),
            Err(PartitionError::PointOutsidePoset(vec![0, 0]))
        );
        let good = IntervalPartition::new(vec![iv(&[0, 1], &[1, 1]), iv(&[1, 0], &[1, 0])]);
        assert_eq!(partition_sdepth(&p, &good), Ok(1));
    }

    #[test]
    fn malformed_intervals_are_reported_with_index() {
        let p = principal_xy();
        let bad = IntervalPartition::new(vec![iv(&[1, 1], &[0, 1])]);
        assert!(matches!(
            partition_sdepth(&p, &bad),
            Err(PartitionError::MalformedInterval { index: 0, .. })
        ));
        let out = IntervalPartition::new(vec![iv(&[1, 1], &[1, 2])]);
        assert!(matches!(
            partition_sdepth(&p, &out),
            Err(PartitionError::MalformedInterval { index: 0, .. })
        ));
    }

    #[test]
    fn stanley_spaces_read_off_ceiling_coordinates() {
        let i = PrimeIdeal::new(2, vec![0, 1]).unwrap().to_ideal();
        let p = char_poset(&i, PosetKind::Ideal, 1 << 20).unwrap();
        let part = IntervalPartition::new(vec![iv(&[0, 1], &[1, 1]), iv(&[1, 0], &[1, 0])]);
        let dec = to_stanley_decomposition(&p, &part).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0].generator, Monomial::new(vec![0, 1]));
        assert_eq!(dec[0].free_vars, vec![0, 1]);
        assert_eq!(dec[1].generator, Monomial::new(vec![1, 0]));
        assert_eq!(dec[1].free_vars, vec![0]);
        assert_eq!(dec[1].to_string(), "x1 * K[x1]");
    }

    #[test]
    fn partition_json_round_trip() {
        let part = IntervalPartition::new(vec![iv(&[1, 0, 1], &[1, 2, 1])]);
        let json = serde_json::to_string(&part).unwrap();
        assert_eq!(json, r#"{"intervals":[{"from":[1,0,1],"to":[1,2,1]}]}"#);
        let back: IntervalPartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, part);
        // Unknown fields are rejected.
        let bad = r#"{"intervals":[{"from":[1],"to":[1],"rank":3}]}"#;
        assert!(serde_json::from_str::<IntervalPartition>(bad).is_err());
    }
}
