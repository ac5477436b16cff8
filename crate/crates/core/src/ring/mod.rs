//! Graded polynomial presentations and the exponent-level manipulations the
//! factoriality criteria need: homogeneity, monomial shifts and rewriting in
//! fiber-lattice coordinates.
//!
//! Coefficients are exact rationals. None of the criteria look at coefficient
//! values beyond nonvanishing, so this stands in for any field of
//! characteristic zero.

mod polynomial;
mod presentation;

pub use polynomial::{
    grlex_cmp, shift_by_monomial, veronese_preimage, Exponent, LaurentPolynomial, Polynomial,
    Term,
};
pub use presentation::{
    check_homogeneous, degree_of_monomial, Assumptions, GradedPresentation, HomogeneityWitness,
    Origin, Transformation,
};

use thiserror::Error;

use crate::abelian::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("ordinary polynomials cannot have negative exponents")]
    NegativeExponent,
    #[error("exponent arithmetic overflowed i64")]
    ExponentOverflow,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: {:?} has degree {}, {:?} has degree {}",
        witness.first.0, witness.first.1, witness.second.0, witness.second.1)]
    NotHomogeneous { witness: Box<HomogeneityWitness> },
    #[error("relation {index} is the zero polynomial")]
    ZeroRelation { index: usize },
    #[error("relation {index} is not homogeneous: {:?} has degree {}, {:?} has degree {}",
        witness.first.0, witness.first.1, witness.second.0, witness.second.1)]
    InhomogeneousRelation {
        index: usize,
        witness: Box<HomogeneityWitness>,
    },
    #[error("exponent {exponent:?} has no integral preimage in the lattice")]
    NotInLattice { exponent: Exponent },
    #[error("lattice basis columns are linearly dependent")]
    DependentBasis,
    #[error("variable name {0:?} is empty or already in use")]
    DuplicateName(String),
    #[error("a degree does not belong to the grading group")]
    DegreeOutsideGroup,
    #[error(transparent)]
    Group(#[from] GroupError),
}
