//! Monomial ideals with canonical minimal generating sets.

use std::fmt;

use thiserror::Error;

use crate::monomial::{Monomial, MonomialError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("an ideal needs at least one variable")]
    NoVariables,
    #[error("the zero ideal (no generators) is not supported")]
    EmptyGenerators,
    #[error("the unit ideal (a constant generator) is not supported")]
    UnitGenerator,
    #[error("generator has {found} exponents, ring has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {var} out of range for {num_vars} variables")]
    InvalidVariable { var: usize, num_vars: usize },
    #[error("cannot raise at x{var}: generator exponent {found} is neither 0 nor {level}")]
    RaiseMixedExponent { var: usize, level: u32, found: u32 },
    #[error("cannot raise at x{var}: no generator has exponent {level} there")]
    RaiseLevelAbsent { var: usize, level: u32 },
    #[error("cannot raise at x{var}: every generator has exponent {level} there")]
    RaiseLevelEverywhere { var: usize, level: u32 },
    #[error(transparent)]
    Monomial(#[from] MonomialError),
}

/// Drop every monomial strictly divisible by another in the list; sort the
/// survivors in the canonical (graded-lex) order and deduplicate.
pub fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let redundant = gens
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && (h.divides(g) && (!g.divides(h) || j < i)));
        if !redundant {
            out.push(g.clone());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A nonzero, proper monomial ideal with its unique minimal generating set.
///
/// Construction minimalizes the given generators and rejects the zero ideal
/// (no generators) and the unit ideal (a constant generator). Generators are
/// kept sorted graded-lexicographically, so structural equality is ideal
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    num_vars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(num_vars: usize, gens: Vec<Monomial>) -> Result<Self, IdealError> {
        if num_vars == 0 {
            return Err(IdealError::NoVariables);
        }
        if gens.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        for g in &gens {
            if g.num_vars() != num_vars {
                return Err(IdealError::DimensionMismatch {
                    expected: num_vars,
                    found: g.num_vars(),
                });
            }
            if g.is_unit() {
                return Err(IdealError::UnitGenerator);
            }
        }
        Ok(MonomialIdeal {
            num_vars,
            gens: minimalize(&gens),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Minimal generators in canonical order.
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    /// Membership test: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Componentwise maximum `g` of the generator exponents — the top corner
    /// of the bounding box the characteristic poset lives in.
    pub fn exponent_ceiling(&self) -> Vec<u32> {
        let mut g = vec![0u32; self.num_vars];
        for m in &self.gens {
            for (gj, &e) in g.iter_mut().zip(m.exponents()) {
                *gj = (*gj).max(e);
            }
        }
        g
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(|g| g.is_squarefree())
    }

    /// `Some(d)` if every minimal generator has total degree `d`.
    pub fn equigenerated_degree(&self) -> Option<u64> {
        let d = self.gens[0].total_degree();
        self.gens.iter().all(|g| g.total_degree() == d).then_some(d)
    }

    /// Union of the generator supports (0-based, ascending).
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_vars];
        for g in &self.gens {
            for j in g.support() {
                seen[j] = true;
            }
        }
        (0..self.num_vars).filter(|&j| seen[j]).collect()
    }

    /// `I ∩ J`: generated by the pairwise lcms.
    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_same_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        MonomialIdeal::new(self.num_vars, gens)
    }

    /// `I · J`: generated by the pairwise products (overflow-checked).
    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_same_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.checked_mul(b)?);
            }
        }
        MonomialIdeal::new(self.num_vars, gens)
    }

    /// `√I`: generated by the squarefree parts of the generators.
    pub fn radical(&self) -> MonomialIdeal {
        let gens = self.gens.iter().map(Monomial::radical).collect();
        // Radicals of non-unit monomials are non-unit, so this cannot fail.
        MonomialIdeal::new(self.num_vars, gens).expect("radical of a valid ideal is valid")
    }

    /// Bump the exponent at variable `var` (0-based) from `level` to
    /// `level + 1` in every generator that carries it.
    ///
    /// Requires a two-level profile at `var`: every generator has exponent
    /// exactly `level` or exactly `0` there, with both classes nonempty.
    /// Stanley depth is invariant under this move, which the exact solver
    /// exercises as a cross-check.
    pub fn raise_exponent(&self, var: usize, level: u32) -> Result<MonomialIdeal, IdealError> {
        if var >= self.num_vars {
            return Err(IdealError::InvalidVariable {
                var,
                num_vars: self.num_vars,
            });
        }
        if level == 0 {
            return Err(IdealError::RaiseLevelAbsent { var: var + 1, level });
        }
        let mut holders = 0usize;
        for g in &self.gens {
            let e = g.exponent(var);
            if e == level {
                holders += 1;
            } else if e != 0 {
                return Err(IdealError::RaiseMixedExponent {
                    var: var + 1,
                    level,
                    found: e,
                });
            }
        }
        if holders == 0 {
            return Err(IdealError::RaiseLevelAbsent { var: var + 1, level });
        }
        if holders == self.gens.len() {
            return Err(IdealError::RaiseLevelEverywhere { var: var + 1, level });
        }
        let bump = Monomial::var_power(self.num_vars, var, 1);
        let gens = self
            .gens
            .iter()
            .map(|g| {
                if g.exponent(var) == level {
                    g.checked_mul(&bump)
                } else {
                    Ok(g.clone())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        MonomialIdeal::new(self.num_vars, gens)
    }

    /// Eliminate the last variable: the subideal of members free of `x_n`,
    /// viewed in one fewer variable. `None` when no generator avoids `x_n`
    /// (the contraction is then the zero ideal).
    pub fn contract_last_variable(&self) -> Option<MonomialIdeal> {
        let n = self.num_vars;
        if n == 1 {
            return None;
        }
        let gens: Vec<Monomial> = self
            .gens
            .iter()
            .filter(|g| g.exponent(n - 1) == 0)
            .map(|g| Monomial::new(g.exponents()[..n - 1].to_vec()))
            .collect();
        if gens.is_empty() {
            None
        } else {
            Some(MonomialIdeal::new(n - 1, gens).expect("contraction of a valid ideal is valid"))
        }
    }

    fn check_same_ring(&self, other: &MonomialIdeal) -> Result<(), IdealError> {
        if self.num_vars != other.num_vars {
            return Err(IdealError::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        Ok(())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// A monomial prime `(x_i : i ∈ vars)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeIdeal {
    num_vars: usize,
    vars: Vec<usize>,
}

impl PrimeIdeal {
    /// `vars` are 0-based; they are sorted and deduplicated.
    pub fn new(num_vars: usize, mut vars: Vec<usize>) -> Result<Self, IdealError> {
        if num_vars == 0 {
            return Err(IdealError::NoVariables);
        }
        vars.sort_unstable();
        vars.dedup();
        if vars.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        if let Some(&v) = vars.iter().find(|&&v| v >= num_vars) {
            return Err(IdealError::InvalidVariable { var: v, num_vars });
        }
        Ok(PrimeIdeal { num_vars, vars })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn height(&self) -> usize {
        self.vars.len()
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        let gens = self
            .vars
            .iter()
            .map(|&v| Monomial::var_power(self.num_vars, v, 1))
            .collect();
        MonomialIdeal::new(self.num_vars, gens).expect("a prime is a valid ideal")
    }

    pub fn to_irreducible(&self) -> IrreducibleIdeal {
        IrreducibleIdeal::new(self.num_vars, self.vars.iter().map(|&v| (v, 1)).collect())
            .expect("a prime is a valid irreducible ideal")
    }
}

/// An irreducible monomial ideal `(x_{i1}^{e1}, …, x_{id}^{ed})` — pure
/// variable powers with distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleIdeal {
    num_vars: usize,
    /// `(var, exponent)` pairs, sorted by variable, exponents ≥ 1.
    powers: Vec<(usize, u32)>,
}

impl IrreducibleIdeal {
    pub fn new(num_vars: usize, mut powers: Vec<(usize, u32)>) -> Result<Self, IdealError> {
        if num_vars == 0 {
            return Err(IdealError::NoVariables);
        }
        if powers.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        powers.sort_unstable();
        for w in powers.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(IdealError::InvalidVariable {
                    var: w[0].0,
                    num_vars,
                });
            }
        }
        for &(v, e) in &powers {
            if v >= num_vars {
                return Err(IdealError::InvalidVariable { var: v, num_vars });
            }
            if e == 0 {
                return Err(IdealError::UnitGenerator);
            }
        }
        Ok(IrreducibleIdeal { num_vars, powers })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.powers
    }

    pub fn height(&self) -> usize {
        self.powers.len()
    }

    pub fn support(&self) -> Vec<usize> {
        self.powers.iter().map(|&(v, _)| v).collect()
    }

    pub fn is_prime(&self) -> bool {
        self.powers.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> PrimeIdeal {
        PrimeIdeal::new(self.num_vars, self.support()).expect("support is a valid prime")
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        let gens = self
            .powers
            .iter()
            .map(|&(v, e)| Monomial::var_power(self.num_vars, v, e))
            .collect();
        MonomialIdeal::new(self.num_vars, gens).expect("an irreducible ideal is a valid ideal")
    }
}
