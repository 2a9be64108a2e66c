//! Monomials as fixed-length exponent vectors.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("exponent overflow multiplying monomials")]
    ExponentOverflow,
    #[error("monomials live in different rings ({0} vs {1} variables)")]
    DimensionMismatch(usize, usize),
}

/// A monomial in `K[x1..xn]`, stored as its exponent vector.
///
/// Variables are indexed `0..n` internally; the textual form is 1-based
/// (`x1`, `x2`, …). Equality and hashing are structural. The derived total
/// order ([`Ord`]) is graded lexicographic — total degree first, then
/// exponent-vector lex with the first variable most significant — and is
/// used as the canonical generator ordering everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The multiplicative unit (all exponents zero) in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// `x_{j+1}^e` in `n` variables (0-based `j`).
    pub fn var_power(n: usize, j: usize, e: u32) -> Self {
        let mut exps = vec![0; n];
        exps[j] = e;
        Monomial { exps }
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.exps[j]
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Indices (0-based) of variables with positive exponent, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.exps.len()).filter(|&j| self.exps[j] > 0).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// Componentwise divisibility: `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    /// Componentwise sum, erroring on `u32` overflow.
    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, MonomialError> {
        if self.exps.len() != other.exps.len() {
            return Err(MonomialError::DimensionMismatch(
                self.exps.len(),
                other.exps.len(),
            ));
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(b).ok_or(MonomialError::ExponentOverflow)?);
        }
        Ok(Monomial { exps })
    }

    /// Exponents clamped to 0/1: the squarefree part.
    pub fn radical(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&e| e.min(1)).collect(),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree, then exponent vectors lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl fmt::Display for Monomial {
    /// The ideal-file syntax: `x1*x3^2`; the unit renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "x{}^{}", j + 1, e)?;
            }
        }
        Ok(())
    }
}
