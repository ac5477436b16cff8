//! Exact integer linear algebra: normal forms, kernels, integral solving and
//! sublattice primitivity. Nothing in here touches floating point.

mod matrix;
mod normal_form;

pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, rank, smith_normal_form, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub type IntVector = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no integral solution (the system is {})", if *.rational { "solvable over the rationals only" } else { "inconsistent over the rationals" })]
    NoSolution { rational: bool },
    #[error("ambient columns are linearly dependent (rank {rank} < {cols})")]
    AmbientNotBasis { rank: usize, cols: usize },
}

/// Converts a slice of machine integers into an [`IntVector`].
pub fn int_vector<T: Copy + Into<BigInt>>(xs: &[T]) -> IntVector {
    xs.iter().map(|&x| x.into()).collect()
}

/// A lattice basis for `{ v : m * v = 0 }`, returned as the columns of an
/// `m.cols() x k` matrix. The basis is saturated and HNF-canonical.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let (h, u) = hermite_normal_form(&m.transpose());
    let r = (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    let kernel_rows = u.select_rows(r..n);
    let (canon, _) = hermite_normal_form(&kernel_rows);
    canon.transpose()
}

/// A basis (as columns) of the lattice spanned by the columns of `m`,
/// taken from the nonzero rows of the row-style HNF of `m^T`.
pub fn column_span_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(&m.transpose());
    let r = (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    h.select_rows(0..r).transpose()
}

/// Reusable integral solver for `m * x = b`, built on one Smith form of `m`.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    snf: SnfResult,
    rank: usize,
}

impl IntegerSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        Self { snf, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> usize {
        self.snf.left.rows()
    }

    pub fn cols(&self) -> usize {
        self.snf.right.rows()
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<IntVector, LatticeError> {
        if b.len() != self.rows() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows(),
                found: b.len(),
            });
        }
        // D y = U b with x = V y.
        let c = self.snf.left.mul_vec(b);
        if c[self.rank..].iter().any(|x| !x.is_zero()) {
            return Err(LatticeError::NoSolution { rational: false });
        }
        let mut y = vec![BigInt::zero(); self.cols()];
        for i in 0..self.rank {
            let (q, r) = c[i].div_rem(&self.snf.invariant_factors[i]);
            if !r.is_zero() {
                return Err(LatticeError::NoSolution { rational: true });
            }
            y[i] = q;
        }
        Ok(self.snf.right.mul_vec(&y))
    }
}

/// Finds an integral `x` with `m * x = b`. Unique when the columns of `m` are
/// linearly independent.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<IntVector, LatticeError> {
    IntegerSolver::new(m).solve(b)
}

/// Why a vector family failed to be a basis of a primitive sublattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitivityFailure {
    /// The vector at this index has no integral coordinates in the ambient basis.
    OutsideLattice { index: usize },
    /// The vectors are linearly dependent.
    RankDeficient { rank: usize, expected: usize },
    /// The span is not saturated: some invariant factor exceeds one.
    NotSaturated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub primitive: bool,
    /// Coordinates of the vectors in the ambient basis, one column per
    /// vector. Absent when some vector lies outside the lattice.
    pub coordinates: Option<IntMatrix>,
    pub invariant_factors: Vec<BigInt>,
    pub failure: Option<PrimitivityFailure>,
}

/// Decides whether `vectors` form a basis of a primitive (saturated)
/// sublattice of the lattice spanned by the columns of `ambient_basis`.
///
/// The vectors are expressed in ambient coordinates; they are a basis of a
/// primitive sublattice iff the coordinate matrix has full column rank and all
/// of its invariant factors are 1.
pub fn is_basis_of_primitive_sublattice(
    vectors: &[IntVector],
    ambient_basis: &IntMatrix,
) -> Result<PrimitivityReport, LatticeError> {
    let solver = IntegerSolver::new(ambient_basis);
    if solver.rank() != ambient_basis.cols() {
        return Err(LatticeError::AmbientNotBasis {
            rank: solver.rank(),
            cols: ambient_basis.cols(),
        });
    }
    primitivity_with_solver(vectors, &solver)
}

pub(crate) fn primitivity_with_solver(
    vectors: &[IntVector],
    solver: &IntegerSolver,
) -> Result<PrimitivityReport, LatticeError> {
    let mut coords = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        match solver.solve(v) {
            Ok(x) => coords.push(x),
            Err(LatticeError::NoSolution { .. }) => {
                return Ok(PrimitivityReport {
                    primitive: false,
                    coordinates: None,
                    invariant_factors: Vec::new(),
                    failure: Some(PrimitivityFailure::OutsideLattice { index }),
                })
            }
            Err(e) => return Err(e),
        }
    }
    let c = IntMatrix::from_columns(solver.cols(), &coords);
    let snf = smith_normal_form(&c);
    let rank = snf.rank();
    let failure = if rank != vectors.len() {
        Some(PrimitivityFailure::RankDeficient {
            rank,
            expected: vectors.len(),
        })
    } else if snf.invariant_factors.iter().any(|d| !d.is_one()) {
        Some(PrimitivityFailure::NotSaturated)
    } else {
        None
    };
    Ok(PrimitivityReport {
        primitive: failure.is_none(),
        coordinates: Some(c),
        invariant_factors: snf.invariant_factors,
        failure,
    })
}
