use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;
use crate::lattice::{IntMatrix, IntegerSolver, LatticeError};

pub type Exponent = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigRational,
    pub exponents: Exponent,
}

/// Graded-lexicographic order: total degree first, then lexicographic.
pub fn grlex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let da: i128 = a.iter().map(|&x| i128::from(x)).sum();
    let db: i128 = b.iter().map(|&x| i128::from(x)).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Sparse Laurent polynomial with rational coefficients.
///
/// Terms are kept sorted ascending in graded-lex order with distinct exponent
/// vectors and nonzero coefficients; the empty term list is the zero
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl LaurentPolynomial {
    pub fn new(nvars: usize, terms: Vec<(BigRational, Exponent)>) -> Result<Self, RingError> {
        for (_, e) in &terms {
            if e.len() != nvars {
                return Err(RingError::LengthMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
        }
        let terms = terms
            .into_iter()
            .map(|(coeff, exponents)| Term { coeff, exponents })
            .collect();
        Ok(Self::canonical(nvars, terms))
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[i64])]) -> Result<Self, RingError> {
        Self::new(
            nvars,
            terms
                .iter()
                .map(|&(c, e)| (BigRational::from_integer(c.into()), e.to_vec()))
                .collect(),
        )
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    fn canonical(nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| grlex_cmp(&a.exponents, &b.exponents));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Self {
            nvars,
            terms: merged,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.iter().map(|t| &t.exponents)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.exponents().flatten().any(|&x| x < 0)
    }

    /// Multiplies by the monomial `T^{-mu}`.
    pub fn shift(&self, mu: &[i64]) -> Result<Self, RingError> {
        if mu.len() != self.nvars {
            return Err(RingError::LengthMismatch {
                expected: self.nvars,
                found: mu.len(),
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exponents = Vec::with_capacity(self.nvars);
            for (a, b) in t.exponents.iter().zip(mu) {
                exponents.push(a.checked_sub(*b).ok_or(RingError::ExponentOverflow)?);
            }
            terms.push(Term {
                coeff: t.coeff.clone(),
                exponents,
            });
        }
        Ok(Self::canonical(self.nvars, terms))
    }

    /// Appends `extra` variables that occur with exponent zero everywhere.
    pub fn extend_variables(&self, extra: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exponents = t.exponents.clone();
                exponents.resize(self.nvars + extra, 0);
                Term {
                    coeff: t.coeff.clone(),
                    exponents,
                }
            })
            .collect();
        Self::canonical(self.nvars + extra, terms)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }

    /// Renders with variables named `<prefix>1, <prefix>2, ...`.
    pub fn display_prefixed(&self, prefix: &str) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("{prefix}{i}")).collect();
        let rendered = self.display_with(&names).to_string();
        rendered
    }
}

struct PolyDisplay<'a> {
    poly: &'a LaurentPolynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.poly.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let magnitude = t.coeff.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    let name = self.names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            match (magnitude.is_one(), factors.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", factors.join("*"))?,
                (false, true) => write!(f, "{magnitude}")?,
                (false, false) => write!(f, "{magnitude}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Polynomial with non-negative exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial(LaurentPolynomial);

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<(BigRational, Exponent)>) -> Result<Self, RingError> {
        Self::try_from(LaurentPolynomial::new(nvars, terms)?)
    }

    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[i64])]) -> Result<Self, RingError> {
        Self::try_from(LaurentPolynomial::from_int_terms(nvars, terms)?)
    }

    pub fn as_laurent(&self) -> &LaurentPolynomial {
        &self.0
    }

    pub fn into_laurent(self) -> LaurentPolynomial {
        self.0
    }

    pub fn extend_variables(&self, extra: usize) -> Self {
        Self(self.0.extend_variables(extra))
    }
}

impl TryFrom<LaurentPolynomial> for Polynomial {
    type Error = RingError;

    fn try_from(p: LaurentPolynomial) -> Result<Self, RingError> {
        if p.has_negative_exponent() {
            Err(RingError::NegativeExponent)
        } else {
            Ok(Self(p))
        }
    }
}

impl Deref for Polynomial {
    type Target = LaurentPolynomial;

    fn deref(&self) -> &LaurentPolynomial {
        &self.0
    }
}

/// Replaces every exponent vector by `nu - mu`.
pub fn shift_by_monomial(p: &LaurentPolynomial, mu: &[i64]) -> Result<LaurentPolynomial, RingError> {
    p.shift(mu)
}

/// Rewrites `p` in the coordinates of the lattice spanned by the columns of
/// `basis`: each exponent `nu` becomes the unique `x` with `basis * x = nu`.
pub fn veronese_preimage(
    p: &LaurentPolynomial,
    basis: &IntMatrix,
) -> Result<LaurentPolynomial, RingError> {
    if basis.rows() != p.nvars() {
        return Err(RingError::LengthMismatch {
            expected: p.nvars(),
            found: basis.rows(),
        });
    }
    let solver = IntegerSolver::new(basis);
    if solver.rank() != basis.cols() {
        return Err(RingError::DependentBasis);
    }
    let mut terms = Vec::with_capacity(p.terms().len());
    for t in p.terms() {
        let nu: Vec<BigInt> = t.exponents.iter().map(|&x| BigInt::from(x)).collect();
        let x = match solver.solve(&nu) {
            Ok(x) => x,
            Err(LatticeError::NoSolution { .. }) => {
                return Err(RingError::NotInLattice {
                    exponent: t.exponents.clone(),
                })
            }
            Err(e) => unreachable!("length checked above: {e}"),
        };
        let x = x
            .iter()
            .map(|v| v.to_i64().ok_or(RingError::ExponentOverflow))
            .collect::<Result<Exponent, _>>()?;
        terms.push((t.coeff.clone(), x));
    }
    LaurentPolynomial::new(basis.cols(), terms)
}
