//! The affine-linear factoriality criterion and the Laurent reduction behind it.
//!
//! For each relation `g_j` pick a shift `mu_j` with `Q(mu_j) - deg g_j in K'`.
//! If the nonzero exponent vectors of all `T^{-mu_j} g_j`, pooled together,
//! form a basis of a primitive sublattice of the fiber lattice `Q^{-1}(K')`,
//! then after a unimodular change of coordinates each reduced relation is
//! affine linear, the reduced Laurent quotient is again a Laurent algebra, and
//! the ring is factorially graded. A failed search proves nothing.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use super::fiber::{check_kprime_free, fiber_lattice};
use super::CriteriaError;
use crate::abelian::GroupElement;
use crate::lattice::{
    primitivity_with_solver, smith_normal_form, IntMatrix, IntVector, IntegerSolver,
    PrimitivityFailure,
};
use crate::ring::{veronese_preimage, Exponent, GradedPresentation, LaurentPolynomial};

/// Upper bound on the number of shift tuples examined by one search.
pub const MAX_SHIFT_TUPLES: usize = 1 << 16;

/// A user-proposed shift for one relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftCandidate {
    pub relation: usize,
    pub mu: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorialityStatus {
    Established,
    Undetermined,
}

/// Re-checkable evidence for an established verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// One shift per relation.
    pub shifts: Vec<Exponent>,
    /// Basis (columns) of the fiber lattice.
    pub fiber_basis: IntMatrix,
    /// Pooled nonzero shifted exponent vectors.
    pub vectors: Vec<IntVector>,
    /// Coordinates of `vectors` in `fiber_basis`, one column each.
    pub coordinates: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl Certificate {
    /// Replays the check from the stored data alone: the coordinates must
    /// reproduce the vectors through the basis, the basis must be independent,
    /// and the coordinate matrix must have `vectors.len()` unit invariant
    /// factors.
    pub fn replay(&self) -> bool {
        let solver = IntegerSolver::new(&self.fiber_basis);
        if solver.rank() != self.fiber_basis.cols() {
            return false;
        }
        if self.coordinates.cols() != self.vectors.len() {
            return false;
        }
        if self.coordinates.rows() != self.fiber_basis.cols() {
            return false;
        }
        let rebuilt = &self.fiber_basis * &self.coordinates;
        if rebuilt.to_columns() != self.vectors {
            return false;
        }
        let snf = smith_normal_form(&self.coordinates);
        snf.rank() == self.vectors.len()
            && snf.invariant_factors.iter().take(self.vectors.len()).all(One::is_one)
    }

    /// A basis of the fiber lattice whose first columns are `vectors`. In it,
    /// every reduced relation is affine linear.
    pub fn adapted_basis(&self) -> IntMatrix {
        let n = self.coordinates.rows();
        let k = self.vectors.len();
        let snf = smith_normal_form(&self.coordinates);
        // U C V = [I; 0], so C = U^-1 [I; 0] V^-1 and U^-1 diag(V^-1, I) is
        // unimodular with C as its leading columns.
        let u_inv = unimodular_inverse(&snf.left);
        let v_inv = unimodular_inverse(&snf.right);
        let mut block = IntMatrix::identity(n);
        for i in 0..k {
            for j in 0..k {
                block[(i, j)] = v_inv[(i, j)].clone();
            }
        }
        &self.fiber_basis * &(&u_inv * &block)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AttemptFailure {
    /// Two pooled vectors coincide.
    DuplicateVectors,
    /// More pooled vectors than the fiber lattice has rank.
    TooManyVectors { count: usize, rank: usize },
    /// A pooled vector is not in the fiber lattice. Never expected for valid
    /// shifts; kept as evidence should it happen.
    OutsideLattice { index: usize },
    RankDeficient { rank: usize, expected: usize },
    NotSaturated,
}

/// One failed shift tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub shifts: Vec<Exponent>,
    pub failure: AttemptFailure,
    pub invariant_factors: Vec<BigInt>,
}

/// Where an established verdict came from when it was not checked on the
/// presentation itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inheritance {
    /// Transformations from the certified ancestor down to this presentation,
    /// ancestor side first.
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialityVerdict {
    pub status: FactorialityStatus,
    pub certificate: Option<Certificate>,
    /// Failed tuples in enumeration order.
    pub attempts: Vec<Attempt>,
    /// User shifts that violate the membership condition.
    pub rejected_shifts: Vec<ShiftCandidate>,
    pub fiber_basis: IntMatrix,
    /// True when the tuple space exceeded [`MAX_SHIFT_TUPLES`].
    pub truncated: bool,
    pub inherited: Option<Inheritance>,
}

impl FactorialityVerdict {
    pub fn is_established(&self) -> bool {
        self.status == FactorialityStatus::Established
    }
}

fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let solver = IntegerSolver::new(m);
    let cols: Vec<IntVector> = IntMatrix::identity(m.rows())
        .to_columns()
        .iter()
        .map(|e| solver.solve(e).expect("unimodular matrices are invertible over Z"))
        .collect();
    IntMatrix::from_columns(m.rows(), &cols)
}

fn to_int_vector(e: &[i64]) -> IntVector {
    e.iter().map(|&x| BigInt::from(x)).collect()
}

/// Nonzero exponent vectors of `T^{-mu_j} g_j`, pooled over all relations.
pub fn pooled_shift_vectors(
    pres: &GradedPresentation,
    shifts: &[Exponent],
) -> Result<Vec<Exponent>, CriteriaError> {
    let mut pooled = Vec::new();
    for (g, mu) in pres.relations().iter().zip(shifts) {
        let shifted = g.shift(mu)?;
        pooled.extend(shifted.exponents().filter(|e| e.iter().any(|&x| x != 0)).cloned());
    }
    Ok(pooled)
}

struct ShiftSpace {
    candidates: Vec<Vec<Exponent>>,
    rejected: Vec<ShiftCandidate>,
}

fn shift_space(
    pres: &GradedPresentation,
    fiber: &IntegerSolver,
    extra_shifts: &[ShiftCandidate],
) -> Result<ShiftSpace, CriteriaError> {
    let d = pres.relations().len();
    let mut candidates: Vec<Vec<Exponent>> = vec![Vec::new(); d];
    let mut rejected = Vec::new();
    for s in extra_shifts {
        if s.relation >= d {
            return Err(CriteriaError::ShiftRelationOutOfRange {
                relation: s.relation,
                count: d,
            });
        }
        if s.mu.len() != pres.nvars() {
            return Err(CriteriaError::ShiftLength {
                expected: pres.nvars(),
                found: s.mu.len(),
            });
        }
        // Q(mu) - deg g in K'  iff  nu - mu in Q^{-1}(K') for a monomial nu of g.
        let nu = &pres.relations()[s.relation].terms()[0].exponents;
        let diff: Vec<i64> = nu.iter().zip(&s.mu).map(|(a, b)| a - b).collect();
        if fiber.solve(&to_int_vector(&diff)).is_ok() {
            if !candidates[s.relation].contains(&s.mu) {
                candidates[s.relation].push(s.mu.clone());
            }
        } else {
            rejected.push(s.clone());
        }
    }
    for (j, g) in pres.relations().iter().enumerate() {
        for e in g.exponents() {
            if !candidates[j].contains(e) {
                candidates[j].push(e.clone());
            }
        }
    }
    Ok(ShiftSpace {
        candidates,
        rejected,
    })
}

/// Searches shift tuples for an affine-linear certificate of graded
/// factoriality.
///
/// Each relation's shifts are the user-supplied `extra_shifts` that satisfy
/// the membership condition, in the given order, followed by the relation's
/// own monomial exponents in term order. Tuples are visited
/// lexicographically and the first success wins.
pub fn affine_linear_criterion(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
    extra_shifts: &[ShiftCandidate],
) -> Result<FactorialityVerdict, CriteriaError> {
    check_kprime_free(pres, kprime_generators)?;
    let basis = fiber_lattice(pres, kprime_generators)?;
    let solver = IntegerSolver::new(&basis);
    let space = shift_space(pres, &solver, extra_shifts)?;

    let total = space
        .candidates
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    let truncated = total > MAX_SHIFT_TUPLES;

    let mut attempts = Vec::new();
    let mut index = vec![0usize; space.candidates.len()];
    for _ in 0..total.min(MAX_SHIFT_TUPLES) {
        let shifts: Vec<Exponent> = index
            .iter()
            .zip(&space.candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        match evaluate_tuple(pres, &solver, &shifts)? {
            Ok((vectors, coordinates, invariant_factors)) => {
                return Ok(FactorialityVerdict {
                    status: FactorialityStatus::Established,
                    certificate: Some(Certificate {
                        shifts,
                        fiber_basis: basis.clone(),
                        vectors,
                        coordinates,
                        invariant_factors,
                    }),
                    attempts,
                    rejected_shifts: space.rejected,
                    fiber_basis: basis,
                    truncated: false,
                    inherited: None,
                });
            }
            Err((failure, invariant_factors)) => attempts.push(Attempt {
                shifts,
                failure,
                invariant_factors,
            }),
        }
        // Odometer, last relation fastest.
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < space.candidates[k].len() {
                break;
            }
            index[k] = 0;
        }
    }

    Ok(FactorialityVerdict {
        status: FactorialityStatus::Undetermined,
        certificate: None,
        attempts,
        rejected_shifts: space.rejected,
        fiber_basis: basis,
        truncated,
        inherited: None,
    })
}

type TupleOutcome = Result<(Vec<IntVector>, IntMatrix, Vec<BigInt>), (AttemptFailure, Vec<BigInt>)>;

fn evaluate_tuple(
    pres: &GradedPresentation,
    fiber: &IntegerSolver,
    shifts: &[Exponent],
) -> Result<TupleOutcome, CriteriaError> {
    let pooled = pooled_shift_vectors(pres, shifts)?;
    let mut seen = HashSet::new();
    if !pooled.iter().all(|v| seen.insert(v)) {
        return Ok(Err((AttemptFailure::DuplicateVectors, Vec::new())));
    }
    if pooled.len() > fiber.cols() {
        return Ok(Err((
            AttemptFailure::TooManyVectors {
                count: pooled.len(),
                rank: fiber.cols(),
            },
            Vec::new(),
        )));
    }
    let vectors: Vec<IntVector> = pooled.iter().map(|v| to_int_vector(v)).collect();
    let report = primitivity_with_solver(&vectors, fiber)?;
    Ok(match report.failure {
        None => Ok((
            vectors,
            report.coordinates.expect("coordinates exist on success"),
            report.invariant_factors,
        )),
        Some(f) => {
            let failure = match f {
                PrimitivityFailure::OutsideLattice { index } => AttemptFailure::OutsideLattice { index },
                PrimitivityFailure::RankDeficient { rank, expected } => {
                    AttemptFailure::RankDeficient { rank, expected }
                }
                PrimitivityFailure::NotSaturated => AttemptFailure::NotSaturated,
            };
            Err((failure, report.invariant_factors))
        }
    })
}

/// One relation after shifting and rewriting in fiber-lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedRelation {
    pub shift: Exponent,
    pub shifted: LaurentPolynomial,
    pub reduced: LaurentPolynomial,
    /// The nonzero exponents of `reduced` form a basis of a primitive
    /// sublattice, so a unimodular substitution makes it affine linear.
    pub affine_linear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub fiber_basis: IntMatrix,
    pub relations: Vec<ReducedRelation>,
    /// The pooled nonzero exponents of all reduced relations together form a
    /// basis of a primitive sublattice.
    pub jointly_affine_linear: bool,
}

/// Computes the reduced Laurent relations `h_j` for the given shifts.
///
/// `basis` may fix the coordinates of the fiber lattice; it must span exactly
/// `Q^{-1}(K')`. This reports the shape of the `h_j` and does not decide
/// factoriality of the quotient.
pub fn laurent_reduction(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
    shifts: &[Exponent],
    basis: Option<&IntMatrix>,
) -> Result<Reduction, CriteriaError> {
    check_kprime_free(pres, kprime_generators)?;
    if shifts.len() != pres.relations().len() {
        return Err(CriteriaError::ShiftCount {
            expected: pres.relations().len(),
            found: shifts.len(),
        });
    }
    let fiber = fiber_lattice(pres, kprime_generators)?;
    let basis = match basis {
        None => fiber,
        Some(b) => {
            if !spans_same_lattice(b, &fiber) {
                return Err(CriteriaError::BasisMismatch);
            }
            b.clone()
        }
    };
    let solver = IntegerSolver::new(&basis);
    let n = basis.cols();

    let mut relations = Vec::with_capacity(shifts.len());
    let mut pooled = Vec::new();
    for (j, (g, mu)) in pres.relations().iter().zip(shifts).enumerate() {
        if mu.len() != pres.nvars() {
            return Err(CriteriaError::ShiftLength {
                expected: pres.nvars(),
                found: mu.len(),
            });
        }
        let shifted = g.shift(mu)?;
        let nu = &shifted.terms()[0].exponents;
        if solver.solve(&to_int_vector(nu)).is_err() {
            return Err(CriteriaError::InvalidShift { relation: j });
        }
        let reduced = veronese_preimage(&shifted, &basis)?;
        let nonzero: Vec<IntVector> = reduced
            .exponents()
            .filter(|e| e.iter().any(|&x| x != 0))
            .map(|e| to_int_vector(e))
            .collect();
        let affine_linear = spans_primitive_basis(&nonzero, n);
        pooled.extend(nonzero);
        relations.push(ReducedRelation {
            shift: mu.clone(),
            shifted,
            reduced,
            affine_linear,
        });
    }
    let mut seen = HashSet::new();
    let jointly_affine_linear =
        pooled.iter().all(|v| seen.insert(v.clone())) && spans_primitive_basis(&pooled, n);
    Ok(Reduction {
        fiber_basis: basis,
        relations,
        jointly_affine_linear,
    })
}

fn spans_primitive_basis(vectors: &[IntVector], n: usize) -> bool {
    let m = IntMatrix::from_columns(n, vectors);
    let snf = smith_normal_form(&m);
    snf.rank() == vectors.len() && snf.invariant_factors.iter().take(vectors.len()).all(One::is_one)
}

fn spans_same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let sa = IntegerSolver::new(a);
    let sb = IntegerSolver::new(b);
    sa.rank() == a.cols()
        && b.to_columns().iter().all(|c| sa.solve(c).is_ok())
        && a.to_columns().iter().all(|c| sb.solve(c).is_ok())
}
