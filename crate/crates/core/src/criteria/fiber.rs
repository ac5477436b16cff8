use num_bigint::BigInt;

use super::CriteriaError;
use crate::abelian::GroupElement;
use crate::lattice::{column_span_basis, integer_kernel, IntMatrix};
use crate::ring::GradedPresentation;

/// Basis (columns) of the fiber lattice `{ v in Z^m : Q(v) in K' }` where `K'`
/// is generated by `kprime_generators` (empty means `K' = 0`).
///
/// Solves `Q v - W c + D t = 0` over the integers, with `W` the lifted `K'`
/// generators and `D` the torsion moduli, and keeps the `v` block.
pub fn fiber_lattice(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
) -> Result<IntMatrix, CriteriaError> {
    let group = pres.group();
    let dim = group.lift_dim();
    let q_cols: Vec<Vec<BigInt>> = pres.degrees().iter().map(GroupElement::lift).collect();
    let mut w_cols = Vec::with_capacity(kprime_generators.len());
    for w in kprime_generators {
        if **w.group() != **group {
            return Err(CriteriaError::KPrimeOutsideGroup);
        }
        w_cols.push(w.lift().into_iter().map(|x| -x).collect::<Vec<_>>());
    }
    let augmented = IntMatrix::from_columns(dim, &q_cols)
        .hstack(&IntMatrix::from_columns(dim, &w_cols))
        .hstack(&group.relation_matrix());
    let kernel = integer_kernel(&augmented);
    let projected = kernel.select_rows(0..pres.nvars());
    Ok(column_span_basis(&projected))
}

/// Rejects `K'` generators that are outside the group or generate a subgroup
/// with torsion.
pub fn check_kprime_free(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
) -> Result<(), CriteriaError> {
    let group = pres.group();
    if kprime_generators.iter().any(|w| **w.group() != **group) {
        return Err(CriteriaError::KPrimeOutsideGroup);
    }
    // A torsion element of K' is sum c_i w_i with vanishing free part.
    let free_cols: Vec<Vec<BigInt>> = kprime_generators.iter().map(|w| w.free().to_vec()).collect();
    let free_matrix = IntMatrix::from_columns(group.free_rank(), &free_cols);
    for c in integer_kernel(&free_matrix).to_columns() {
        let mut acc = group.zero();
        for (ci, w) in c.iter().zip(kprime_generators) {
            acc = acc.add(&w.scale(ci))?;
        }
        if !acc.is_zero() {
            return Err(CriteriaError::KPrimeNotFree { torsion_element: acc.to_string() });
        }
    }
    Ok(())
}
