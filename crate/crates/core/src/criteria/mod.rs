//! Decision procedures on graded presentations: the affine-linear
//! factoriality search, almost freeness, pointedness, grading
//! transformations and the combined Cox-ring verdict.

mod cox;
mod factorial;
mod fiber;
mod grading;
mod transform;

pub use cox::{cox_verdict, Blocker, CoxVerdict, Overall, UnitsStatus};
pub use factorial::{
    affine_linear_criterion, laurent_reduction, pooled_shift_vectors, Attempt, AttemptFailure,
    Certificate, FactorialityStatus, FactorialityVerdict, Inheritance, ReducedRelation, Reduction,
    ShiftCandidate, MAX_SHIFT_TUPLES,
};
pub use fiber::{check_kprime_free, fiber_lattice};
pub use grading::{
    almost_free, positive_grading_exists, private_variable_precheck, AlmostFreeness, Pointedness,
    PrivateVariable, PrivateVariableCheck,
};
pub use transform::{
    adjoin_variable, coarsen, search_extension_degrees, ExtensionSearch, MAX_EXTENSION_CANDIDATES,
};

use crate::abelian::{CoarseningError, GroupError};
use crate::lattice::LatticeError;
use crate::ring::RingError;

#[derive(Debug, thiserror::Error)]
pub enum CriteriaError {
    #[error("K' generator does not belong to the grading group")]
    KPrimeOutsideGroup,
    #[error("K' is not free: it contains the torsion element {torsion_element}")]
    KPrimeNotFree { torsion_element: String },
    #[error("shift refers to relation {relation}, but there are only {count}")]
    ShiftRelationOutOfRange { relation: usize, count: usize },
    #[error("shift has {found} entries, expected {expected}")]
    ShiftLength { expected: usize, found: usize },
    #[error("{found} shifts given for {expected} relations")]
    ShiftCount { expected: usize, found: usize },
    #[error("shift for relation {relation} does not land the relation in the fiber lattice")]
    InvalidShift { relation: usize },
    #[error("supplied basis does not span the fiber lattice")]
    BasisMismatch,
    #[error("invalid coarsening: {0}")]
    InvalidCoarsening(#[from] CoarseningError),
    #[error("relation {relation} is not homogeneous for the coarsened grading")]
    HomogeneityLost { relation: usize },
    #[error("map source differs from the grading group")]
    SourceMismatch,
    #[error("degree does not belong to the grading group")]
    DegreeOutsideGroup,
    #[error("search box has {size} candidates, above the limit")]
    SearchTooLarge { size: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
