//! Finitely generated abelian groups `Z^r + Z/d_1 + ... + Z/d_k` in canonical
//! (invariant factor) form, their elements and homomorphisms.
//!
//! Elements and homomorphisms work on *lifted* coordinates: the free part
//! followed by one integer per torsion factor. A lift is reduced into the
//! canonical range `[0, d_i)` whenever an element is built from it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{
    column_span_basis, integer_kernel, smith_normal_form, IntMatrix, IntVector, IntegerSolver,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("torsion moduli must be >= 2 and form a divisibility chain, got {0:?}")]
    InvalidTorsion(Vec<BigInt>),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("expected {expected} {part} coordinates, got {found}")]
    ShapeMismatch {
        part: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("torsion residue {value} is outside [0, {modulus})")]
    ResidueOutOfRange { value: BigInt, modulus: BigInt },
    #[error("homomorphism is not well defined on torsion generator {index}")]
    NotWellDefined { index: usize },
}

/// Reasons a homomorphism cannot serve as a grading coarsening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CoarseningError {
    #[error("the map is not surjective")]
    NotSurjective,
    #[error("the kernel meets the torsion part of the source")]
    KernelMeetsTorsion,
    #[error("the kernel is not a saturated sublattice of the free part of the source")]
    KernelNotSaturated,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, GroupError> {
        let two = BigInt::from(2);
        let chain_ok = torsion.iter().all(|d| *d >= two)
            && torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !chain_ok {
            return Err(GroupError::InvalidTorsion(torsion));
        }
        Ok(Self { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Length of a lifted coordinate vector.
    pub fn lift_dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.lift_dim() == 0
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Columns `d_i * e_{r+i}` generating the kernel of the lift map.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.lift_dim(), self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m[(self.free_rank + i, i)] = d.clone();
        }
        m
    }

    pub fn zero(self: &Arc<Self>) -> GroupElement {
        GroupElement {
            group: Arc::clone(self),
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Builds an element, rejecting torsion residues outside `[0, d_i)`.
    pub fn element(
        self: &Arc<Self>,
        free: Vec<BigInt>,
        torsion: Vec<BigInt>,
    ) -> Result<GroupElement, GroupError> {
        self.check_shape("free", self.free_rank, free.len())?;
        self.check_shape("torsion", self.torsion.len(), torsion.len())?;
        for (value, modulus) in torsion.iter().zip(&self.torsion) {
            if value < &BigInt::zero() || value >= modulus {
                return Err(GroupError::ResidueOutOfRange {
                    value: value.clone(),
                    modulus: modulus.clone(),
                });
            }
        }
        Ok(GroupElement {
            group: Arc::clone(self),
            free,
            torsion,
        })
    }

    /// Builds an element from a lifted vector, reducing the torsion part.
    pub fn element_from_lift(self: &Arc<Self>, lift: &[BigInt]) -> Result<GroupElement, GroupError> {
        self.check_shape("lifted", self.lift_dim(), lift.len())?;
        let free = lift[..self.free_rank].to_vec();
        let torsion = lift[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Ok(GroupElement {
            group: Arc::clone(self),
            free,
            torsion,
        })
    }

    fn check_shape(&self, part: &'static str, expected: usize, found: usize) -> Result<(), GroupError> {
        if expected == found {
            Ok(())
        } else {
            Err(GroupError::ShapeMismatch {
                part,
                expected,
                found,
            })
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: Arc<AbelianGroup>,
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn lift(&self) -> IntVector {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    fn same_group(&self, other: &Self) -> Result<(), GroupError> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch)
        }
    }

    fn sibling(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Self {
        let torsion = torsion
            .into_iter()
            .zip(&self.group.torsion)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Self {
            group: Arc::clone(&self.group),
            free,
            torsion,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        let free = self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect();
        let torsion = self.torsion.iter().zip(&other.torsion).map(|(a, b)| a + b).collect();
        Ok(self.sibling(free, torsion))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let free = self.free.iter().map(|a| -a).collect();
        let torsion = self.torsion.iter().map(|a| -a).collect();
        self.sibling(free, torsion)
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        let free = self.free.iter().map(|a| a * n).collect();
        let torsion = self.torsion.iter().map(|a| a * n).collect();
        self.sibling(free, torsion)
    }
}

/// Renders `(f_1, ..., f_r, t_1 mod d_1, ...)`; the trivial group's element is `0`.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.group.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .free
            .iter()
            .map(ToString::to_string)
            .chain(
                self.torsion
                    .iter()
                    .zip(&self.group.torsion)
                    .map(|(t, d)| format!("{t} mod {d}")),
            )
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A homomorphism given by an integer matrix on lifted coordinates
/// (`target.lift_dim() x source.lift_dim()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<AbelianGroup>,
    target: Arc<AbelianGroup>,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(
        source: Arc<AbelianGroup>,
        target: Arc<AbelianGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, GroupError> {
        if matrix.rows() != target.lift_dim() {
            return Err(GroupError::ShapeMismatch {
                part: "matrix row",
                expected: target.lift_dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.lift_dim() {
            return Err(GroupError::ShapeMismatch {
                part: "matrix column",
                expected: source.lift_dim(),
                found: matrix.cols(),
            });
        }
        for (i, d) in source.torsion.iter().enumerate() {
            let image: Vec<BigInt> = matrix
                .column(source.free_rank + i)
                .into_iter()
                .map(|x| x * d)
                .collect();
            if !target.element_from_lift(&image)?.is_zero() {
                return Err(GroupError::NotWellDefined { index: i });
            }
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    /// The map `Z^m -> group` sending `e_i` to `images[i]`.
    pub fn from_images(group: Arc<AbelianGroup>, images: &[GroupElement]) -> Result<Self, GroupError> {
        let mut cols = Vec::with_capacity(images.len());
        for g in images {
            if g.group != group {
                return Err(GroupError::GroupMismatch);
            }
            cols.push(g.lift());
        }
        let matrix = IntMatrix::from_columns(group.lift_dim(), &cols);
        Self::new(Arc::new(AbelianGroup::free(images.len())), group, matrix)
    }

    pub fn source(&self) -> &Arc<AbelianGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AbelianGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        if *x.group != *self.source {
            return Err(GroupError::GroupMismatch);
        }
        self.apply_lift(&x.lift())
    }

    pub fn apply_lift(&self, lift: &[BigInt]) -> Result<GroupElement, GroupError> {
        if lift.len() != self.source.lift_dim() {
            return Err(GroupError::ShapeMismatch {
                part: "lifted",
                expected: self.source.lift_dim(),
                found: lift.len(),
            });
        }
        self.target.element_from_lift(&self.matrix.mul_vec(lift))
    }

    /// Images of the canonical generators of the source.
    pub fn generator_images(&self) -> Vec<GroupElement> {
        self.matrix
            .to_columns()
            .iter()
            .map(|c| self.target.element_from_lift(c).expect("column length matches target"))
            .collect()
    }

    /// Basis (columns) of the preimage lattice `{ x : phi(x) = 0 }` in lifted
    /// source coordinates. It contains the source relation lattice.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let augmented = self.matrix.hstack(&self.target.relation_matrix());
        let kernel = integer_kernel(&augmented);
        let projected = kernel.select_rows(0..self.source.lift_dim());
        column_span_basis(&projected)
    }
}

/// Canonical form of `Z^ambient_rank / <relation columns>` together with the
/// projection from `Z^ambient_rank` onto it.
pub fn group_from_presentation(
    ambient_rank: usize,
    relation_columns: &IntMatrix,
) -> Result<(Arc<AbelianGroup>, GroupHom), GroupError> {
    if relation_columns.rows() != ambient_rank {
        return Err(GroupError::ShapeMismatch {
            part: "relation row",
            expected: ambient_rank,
            found: relation_columns.rows(),
        });
    }
    let snf = smith_normal_form(relation_columns);
    // U R V = D, so U maps Z^n / im(R) isomorphically onto Z^n / im(D).
    let factors = &snf.invariant_factors;
    let torsion_rows: Vec<usize> = (0..factors.len())
        .filter(|&i| factors[i] > BigInt::one())
        .collect();
    let rank = snf.rank();
    let free_rows = rank..ambient_rank;
    let torsion: Vec<BigInt> = torsion_rows.iter().map(|&i| factors[i].clone()).collect();
    let group = Arc::new(AbelianGroup::new(free_rows.len(), torsion)?);

    let mut proj = snf.left.select_rows(free_rows.chain(torsion_rows.iter().copied()));
    for (k, d) in group.torsion.iter().enumerate() {
        let row = group.free_rank + k;
        for j in 0..proj.cols() {
            let v = proj[(row, j)].mod_floor(d);
            proj[(row, j)] = v;
        }
    }
    let source = Arc::new(AbelianGroup::free(ambient_rank));
    let hom = GroupHom::new(source, Arc::clone(&group), proj)?;
    Ok((group, hom))
}

/// True iff `elements` generate all of `group`.
pub fn subgroup_generates_group(
    group: &Arc<AbelianGroup>,
    elements: &[GroupElement],
) -> Result<bool, GroupError> {
    let mut cols = Vec::with_capacity(elements.len());
    for e in elements {
        if *e.group != **group {
            return Err(GroupError::GroupMismatch);
        }
        cols.push(e.lift());
    }
    let stacked = IntMatrix::from_columns(group.lift_dim(), &cols).hstack(&group.relation_matrix());
    Ok(generates_lift_space(&stacked))
}

/// The columns generate `Z^rows` iff the Smith form has `rows` unit factors.
fn generates_lift_space(columns: &IntMatrix) -> bool {
    let n = columns.rows();
    if n == 0 {
        return true;
    }
    let snf = smith_normal_form(columns);
    snf.invariant_factors.len() == n && snf.invariant_factors.iter().all(One::is_one)
}

/// Checks that `phi` is surjective with kernel a free direct summand of the
/// source, i.e. that it coarsens `K + Z^k` onto `K`.
pub fn validate_coarsening(phi: &GroupHom) -> Result<(), CoarseningError> {
    let stacked = phi.matrix.hstack(&phi.target.relation_matrix());
    if !generates_lift_space(&stacked) {
        return Err(CoarseningError::NotSurjective);
    }

    let kernel = phi.kernel_lattice();
    let solver = IntegerSolver::new(&kernel);
    let relation_coords: Vec<IntVector> = phi
        .source
        .relation_matrix()
        .to_columns()
        .iter()
        .map(|c| solver.solve(c).expect("source relations lie in the kernel"))
        .collect();
    let coords = IntMatrix::from_columns(kernel.cols(), &relation_coords);
    let kernel_torsion = smith_normal_form(&coords)
        .invariant_factors
        .iter()
        .any(|d| *d > BigInt::one());
    if kernel_torsion {
        return Err(CoarseningError::KernelMeetsTorsion);
    }

    let free_part = kernel.select_rows(0..phi.source.free_rank);
    let saturated = smith_normal_form(&free_part)
        .invariant_factors
        .iter()
        .all(|d| d.is_zero() || d.is_one());
    if !saturated {
        return Err(CoarseningError::KernelNotSaturated);
    }
    Ok(())
}
