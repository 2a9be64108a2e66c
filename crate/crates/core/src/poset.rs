//! Characteristic posets of monomial ideals over a bounding box.
//!
//! Fix `g` = componentwise maximum of the minimal generators of `I`. The
//! points of the box `[0, g] ⊂ N^n` that dominate some generator form an
//! upward-closed set; its complement in the box is downward-closed. Stanley
//! depth questions for `I` (respectively `S/I`) reduce to interval-partition
//! questions on these two finite posets, with the rank of a partition read
//! off the tops through [`ExponentBox::rho`].

use thiserror::Error;

use crate::bitset::BitSet;
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;

/// Default ceiling on the number of box points a poset may occupy.
pub const DEFAULT_MAX_POINTS: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("box holds {size} points, over the {cap} point cap")]
    BoxTooLarge { size: u128, cap: u64 },
}

/// Which of the two complementary posets of an ideal to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetKind {
    /// Points dominating some generator (upward closed): the ideal itself.
    Ideal,
    /// The complement within the box (downward closed): the quotient `S/I`.
    Quotient,
}

/// The box `[0, g]` with a mixed-radix encoding of its points.
///
/// Codes are integers in `0..size` with the **first** coordinate most
/// significant (radix `g_j + 1` at coordinate `j`), so code order is
/// exponent-vector lex order. Sorting by total degree with code tiebreaks —
/// the linear extension the solver walks — is then exactly the canonical
/// graded-lex order on monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentBox {
    g: Vec<u32>,
    strides: Vec<u64>,
    size: u64,
}

impl ExponentBox {
    pub fn new(g: Vec<u32>, cap: u64) -> Result<Self, PosetError> {
        let mut size: u128 = 1;
        for &gj in &g {
            size *= gj as u128 + 1;
            if size > cap as u128 {
                return Err(PosetError::BoxTooLarge { size, cap });
            }
        }
        let n = g.len();
        let mut strides = vec![1u64; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (g[j + 1] as u64 + 1);
        }
        Ok(ExponentBox {
            g,
            strides,
            size: size as u64,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.g.len()
    }

    /// The top corner `g`.
    pub fn ceiling(&self) -> &[u32] {
        &self.g
    }

    /// Number of points in the box.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn stride(&self, j: usize) -> u64 {
        self.strides[j]
    }

    pub fn encode(&self, point: &[u32]) -> u64 {
        debug_assert_eq!(point.len(), self.g.len());
        debug_assert!(point.iter().zip(&self.g).all(|(c, g)| c <= g));
        point
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as u64 * s)
            .sum()
    }

    pub fn decode(&self, code: u64) -> Vec<u32> {
        debug_assert!(code < self.size);
        let mut point = vec![0u32; self.g.len()];
        let mut rest = code;
        for (j, &s) in self.strides.iter().enumerate() {
            point[j] = (rest / s) as u32;
            rest %= s;
        }
        point
    }

    /// Number of coordinates sitting at the ceiling: `#{j : d_j = g_j}`.
    ///
    /// The rank a point contributes as the top of an interval. Coordinates
    /// with `g_j = 0` always count.
    pub fn rho(&self, point: &[u32]) -> u32 {
        debug_assert_eq!(point.len(), self.g.len());
        point
            .iter()
            .zip(&self.g)
            .filter(|&(c, g)| c == g)
            .count() as u32
    }

    /// Advance `point` to the next code; returns `false` after the last one.
    pub(crate) fn step(&self, point: &mut [u32]) -> bool {
        for j in (0..point.len()).rev() {
            if point[j] < self.g[j] {
                point[j] += 1;
                return true;
            }
            point[j] = 0;
        }
        false
    }
}

/// One of the two characteristic posets of an ideal, as a membership bitset
/// over box codes.
#[derive(Clone, Debug)]
pub struct CharPoset {
    kind: PosetKind,
    bx: ExponentBox,
    source: MonomialIdeal,
    members: BitSet,
    member_count: u64,
}

/// Build the characteristic poset of `ideal` bounded by its exponent
/// ceiling, refusing boxes over `max_points`.
pub fn char_poset(
    ideal: &MonomialIdeal,
    kind: PosetKind,
    max_points: u64,
) -> Result<CharPoset, PosetError> {
    let bx = ExponentBox::new(ideal.exponent_ceiling(), max_points)?;
    let size = bx.size();
    let mut members = BitSet::new(size as usize);
    let mut member_count = 0u64;
    let mut point = vec![0u32; bx.num_vars()];
    let mut code = 0u64;
    loop {
        let in_ideal = ideal
            .gens()
            .iter()
            .any(|m| m.exponents().iter().zip(&point).all(|(a, c)| a <= c));
        let member = match kind {
            PosetKind::Ideal => in_ideal,
            PosetKind::Quotient => !in_ideal,
        };
        if member {
            members.insert(code as usize);
            member_count += 1;
        }
        if !bx.step(&mut point) {
            break;
        }
        code += 1;
    }
    Ok(CharPoset {
        kind,
        bx,
        source: ideal.clone(),
        members,
        member_count,
    })
}

impl CharPoset {
    pub fn kind(&self) -> PosetKind {
        self.kind
    }

    pub fn num_vars(&self) -> usize {
        self.bx.num_vars()
    }

    pub fn exponent_box(&self) -> &ExponentBox {
        &self.bx
    }

    /// The ideal this poset was built from.
    pub fn source(&self) -> &MonomialIdeal {
        &self.source
    }

    /// Number of poset members (not the box size).
    pub fn len(&self) -> u64 {
        self.member_count
    }

    pub fn is_empty(&self) -> bool {
        self.member_count == 0
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.members.contains(code as usize)
    }

    pub fn contains_point(&self, point: &[u32]) -> bool {
        self.contains_code(self.bx.encode(point))
    }

    /// Member codes in ascending code order.
    pub fn member_codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|i| i as u64)
    }

    /// The monomial `x^c` a member code stands for.
    pub fn member_monomial(&self, code: u64) -> Monomial {
        Monomial::new(self.bx.decode(code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::PrimeIdeal;

    fn two_four_partite() -> MonomialIdeal {
        let p = PrimeIdeal::new(6, vec![0, 1]).unwrap().to_ideal();
        let q = PrimeIdeal::new(6, vec![2, 3, 4, 5]).unwrap().to_ideal();
        p.intersect(&q).unwrap()
    }

    #[test]
    fn codes_round_trip_and_order_is_lex() {
        let bx = ExponentBox::new(vec![2, 1, 3], u64::MAX >> 1).unwrap();
        assert_eq!(bx.size(), 3 * 2 * 4);
        let mut seen = Vec::new();
        let mut point = vec![0u32; 3];
        loop {
            seen.push(point.clone());
            if !bx.step(&mut point) {
                break;
            }
        }
        assert_eq!(seen.len(), 24);
        for (code, p) in seen.iter().enumerate() {
            assert_eq!(bx.encode(p), code as u64);
            assert_eq!(bx.decode(code as u64), *p);
        }
        // Code order is lexicographic with the first coordinate dominant.
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn rho_counts_ceiling_coordinates() {
        let bx = ExponentBox::new(vec![1; 6], 1 << 20).unwrap();
        assert_eq!(bx.rho(&[1, 0, 1, 1, 1, 0]), 4);
        assert_eq!(bx.rho(&[0; 6]), 0);
        assert_eq!(bx.rho(&[1; 6]), 6);
        // Zero-ceiling coordinates always sit at the ceiling.
        let thin = ExponentBox::new(vec![1, 0, 2], 1 << 20).unwrap();
        assert_eq!(thin.rho(&[0, 0, 0]), 1);
        assert_eq!(thin.rho(&[1, 0, 2]), 3);
    }

    #[test]
    fn box_cap_is_enforced() {
        assert!(matches!(
            ExponentBox::new(vec![255; 4], 1 << 24),
            Err(PosetError::BoxTooLarge { .. })
        ));
        assert!(ExponentBox::new(vec![255; 3], 1 << 24).is_ok());
    }

    #[test]
    fn member_counts_for_a_two_four_partite_ideal() {
        let i = two_four_partite();
        let up = char_poset(&i, PosetKind::Ideal, 1 << 20).unwrap();
        let down = char_poset(&i, PosetKind::Quotient, 1 << 20).unwrap();
        assert_eq!(up.len(), 45);
        assert_eq!(down.len(), 19);
        assert_eq!(up.len() + down.len(), up.exponent_box().size());
    }

    #[test]
    fn membership_matches_divisibility() {
        let i = MonomialIdeal::new(
            3,
            vec![
                Monomial::new(vec![2, 0, 0]),
                Monomial::new(vec![1, 1, 0]),
                Monomial::new(vec![0, 0, 3]),
            ],
        )
        .unwrap();
        let p = char_poset(&i, PosetKind::Ideal, 1 << 20).unwrap();
        let bx = p.exponent_box();
        let mut count = 0;
        for code in 0..bx.size() {
            let pt = bx.decode(code);
            let m = Monomial::new(pt);
            assert_eq!(p.contains_code(code), i.contains(&m));
            if i.contains(&m) {
                count += 1;
            }
        }
        assert_eq!(p.len(), count);
    }

    #[test]
    fn closure_properties_hold() {
        let i = two_four_partite();
        for (kind, upward) in [(PosetKind::Ideal, true), (PosetKind::Quotient, false)] {
            let p = char_poset(&i, kind, 1 << 20).unwrap();
            let bx = p.exponent_box().clone();
            for code in p.member_codes() {
                let pt = bx.decode(code);
                for j in 0..bx.num_vars() {
                    // Step up (ideal) or down (quotient) one coordinate.
                    let mut q = pt.clone();
                    if upward {
                        if q[j] == bx.ceiling()[j] {
                            continue;
                        }
                        q[j] += 1;
                    } else {
                        if q[j] == 0 {
                            continue;
                        }
                        q[j] -= 1;
                    }
                    assert!(p.contains_point(&q), "closure violated at {pt:?} -> {q:?}");
                }
            }
        }
    }

    #[test]
    fn quotient_of_prime_collapses_to_origin() {
        let p = PrimeIdeal::new(5, vec![0, 1, 2]).unwrap().to_ideal();
        let q = char_poset(&p, PosetKind::Quotient, 1 << 20).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q.contains_point(&[0, 0, 0, 0, 0]));
        // Unused variables have ceiling zero and count toward rho.
        assert_eq!(q.exponent_box().rho(&[0; 5]), 2);
    }
}
