//! Grading transformations that preserve graded factoriality: coarsening
//! along a surjection whose kernel is a free direct summand, and adjoining a
//! homogeneous variable.

use num_bigint::BigInt;

use super::grading::almost_free_degrees;
use super::CriteriaError;
use crate::abelian::{validate_coarsening, GroupElement, GroupHom};
use crate::ring::{GradedPresentation, RingError, Transformation};

/// Largest candidate box `search_extension_degrees` will enumerate.
pub const MAX_EXTENSION_CANDIDATES: usize = 1_000_000;

/// Pushes the grading forward along `phi`.
pub fn coarsen(pres: &GradedPresentation, phi: &GroupHom) -> Result<GradedPresentation, CriteriaError> {
    if **phi.source() != **pres.group() {
        return Err(CriteriaError::SourceMismatch);
    }
    validate_coarsening(phi)?;
    let degrees = pres
        .degrees()
        .iter()
        .map(|d| phi.apply(d))
        .collect::<Result<Vec<_>, _>>()?;
    let coarse = GradedPresentation::new(
        pres.variables().to_vec(),
        phi.target().clone(),
        degrees,
        pres.relations().to_vec(),
        *pres.assumptions(),
    )
    .map_err(|e| match e {
        RingError::InhomogeneousRelation { index, .. } => CriteriaError::HomogeneityLost { relation: index },
        other => other.into(),
    })?;
    for (j, (new, old)) in coarse
        .relation_degrees()
        .iter()
        .zip(pres.relation_degrees())
        .enumerate()
    {
        if *new != phi.apply(old)? {
            return Err(CriteriaError::HomogeneityLost { relation: j });
        }
    }
    Ok(coarse.with_origin(
        Transformation::Coarsened {
            from: pres.group().clone(),
        },
        pres,
    ))
}

/// Appends a variable of the given degree; relations gain a zero exponent.
pub fn adjoin_variable(
    pres: &GradedPresentation,
    degree: GroupElement,
    name: &str,
) -> Result<GradedPresentation, CriteriaError> {
    if **degree.group() != **pres.group() {
        return Err(CriteriaError::DegreeOutsideGroup);
    }
    let mut variables = pres.variables().to_vec();
    variables.push(name.to_string());
    let mut degrees = pres.degrees().to_vec();
    degrees.push(degree.clone());
    let relations = pres.relations().iter().map(|g| g.extend_variables(1)).collect();
    let extended = GradedPresentation::new(
        variables,
        pres.group().clone(),
        degrees,
        relations,
        *pres.assumptions(),
    )?;
    Ok(extended.with_origin(
        Transformation::Adjoined {
            name: name.to_string(),
            degree,
        },
        pres,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSearch {
    pub bound: u64,
    /// Degrees whose adjunction makes the grading almost free, in
    /// enumeration order.
    pub candidates: Vec<GroupElement>,
    pub examined: usize,
}

/// Enumerates degrees with free coordinates in `[-bound, bound]` and every
/// torsion residue, lexicographically, and keeps those whose adjunction
/// yields an almost free grading. Says nothing about degrees outside the box.
pub fn search_extension_degrees(
    pres: &GradedPresentation,
    bound: u64,
) -> Result<ExtensionSearch, CriteriaError> {
    let group = pres.group();
    let side: BigInt = BigInt::from(bound) * 2 + 1;
    let mut ranges: Vec<(BigInt, BigInt)> = (0..group.free_rank())
        .map(|_| (-BigInt::from(bound), BigInt::from(bound)))
        .collect();
    ranges.extend(group.torsion().iter().map(|d| (BigInt::from(0), d - 1)));

    let size: BigInt = (0..group.free_rank()).map(|_| side.clone()).product::<BigInt>()
        * group.torsion().iter().product::<BigInt>();
    if size > BigInt::from(MAX_EXTENSION_CANDIDATES) {
        return Err(CriteriaError::SearchTooLarge { size: size.to_string() });
    }

    let mut candidates = Vec::new();
    let mut examined = 0;
    let mut current: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    let mut degrees = pres.degrees().to_vec();
    loop {
        examined += 1;
        let candidate = group.element_from_lift(&current)?;
        degrees.push(candidate.clone());
        if almost_free_degrees(group, &degrees).holds {
            candidates.push(candidate);
        }
        degrees.pop();

        let mut k = current.len();
        loop {
            if k == 0 {
                return Ok(ExtensionSearch {
                    bound,
                    candidates,
                    examined,
                });
            }
            k -= 1;
            if current[k] < ranges[k].1 {
                current[k] += 1;
                break;
            }
            current[k] = ranges[k].0.clone();
        }
    }
}
