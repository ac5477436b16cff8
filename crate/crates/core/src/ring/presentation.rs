use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{LaurentPolynomial, Polynomial, RingError};
use crate::abelian::{AbelianGroup, GroupElement};

/// Ring-theoretic hypotheses that are asserted by the user, never checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Assumptions {
    pub integral: bool,
    pub normal: bool,
    pub generators_k_prime: bool,
    pub generators_pairwise_nonassociated: bool,
    pub trivial_homogeneous_units: bool,
}

impl Assumptions {
    pub fn all_asserted() -> Self {
        Self {
            integral: true,
            normal: true,
            generators_k_prime: true,
            generators_pairwise_nonassociated: true,
            trivial_homogeneous_units: true,
        }
    }
}

/// How a presentation was derived from another one. Both transformations
/// preserve graded factoriality in either direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transformation {
    /// Grading pushed forward along a coarsening onto a quotient group.
    Coarsened { from: Arc<AbelianGroup> },
    /// A free variable appended with the given degree.
    Adjoined { name: String, degree: GroupElement },
}

#[derive(Clone, Debug)]
pub struct Origin {
    pub step: Transformation,
    pub parent: GradedPresentation,
}

/// `K[T_1, ..., T_m] / <g_1, ..., g_d>` graded by a finitely generated abelian
/// group, with every relation homogeneous.
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    variables: Vec<String>,
    group: Arc<AbelianGroup>,
    degrees: Vec<GroupElement>,
    relations: Vec<Polynomial>,
    relation_degrees: Vec<GroupElement>,
    assumptions: Assumptions,
    origin: Option<Arc<Origin>>,
}

/// Equality ignores the derivation history.
impl PartialEq for GradedPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.group == other.group
            && self.degrees == other.degrees
            && self.relations == other.relations
            && self.assumptions == other.assumptions
    }
}

impl GradedPresentation {
    pub fn new(
        variables: Vec<String>,
        group: Arc<AbelianGroup>,
        degrees: Vec<GroupElement>,
        relations: Vec<Polynomial>,
        assumptions: Assumptions,
    ) -> Result<Self, RingError> {
        if degrees.len() != variables.len() {
            return Err(RingError::LengthMismatch {
                expected: variables.len(),
                found: degrees.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &variables {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(RingError::DuplicateName(name.clone()));
            }
        }
        if degrees.iter().any(|d| **d.group() != *group) {
            return Err(RingError::DegreeOutsideGroup);
        }
        let mut pres = Self {
            variables,
            group,
            degrees,
            relations: Vec::new(),
            relation_degrees: Vec::new(),
            assumptions,
            origin: None,
        };
        for (index, g) in relations.iter().enumerate() {
            if g.nvars() != pres.variables.len() {
                return Err(RingError::LengthMismatch {
                    expected: pres.variables.len(),
                    found: g.nvars(),
                });
            }
            let degree = check_homogeneous(&pres, g).map_err(|e| match e {
                RingError::ZeroPolynomial => RingError::ZeroRelation { index },
                RingError::NotHomogeneous { witness } => {
                    RingError::InhomogeneousRelation { index, witness }
                }
                other => other,
            })?;
            pres.relation_degrees.push(degree);
        }
        pres.relations = relations;
        Ok(pres)
    }

    pub(crate) fn with_origin(mut self, step: Transformation, parent: &GradedPresentation) -> Self {
        self.origin = Some(Arc::new(Origin {
            step,
            parent: parent.clone(),
        }));
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> &[GroupElement] {
        &self.relation_degrees
    }

    pub fn assumptions(&self) -> &Assumptions {
        &self.assumptions
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_deref()
    }

    /// The chain of ancestors, nearest first.
    pub fn ancestors(&self) -> impl Iterator<Item = &Origin> {
        std::iter::successors(self.origin(), |o| o.parent.origin())
    }
}

/// `sum_i nu_i * deg(T_i)`.
pub fn degree_of_monomial(
    pres: &GradedPresentation,
    exponents: &[i64],
) -> Result<GroupElement, RingError> {
    if exponents.len() != pres.nvars() {
        return Err(RingError::LengthMismatch {
            expected: pres.nvars(),
            found: exponents.len(),
        });
    }
    let mut acc = pres.group.zero();
    for (e, d) in exponents.iter().zip(&pres.degrees) {
        if *e != 0 {
            acc = acc.add(&d.scale(&BigInt::from(*e)))?;
        }
    }
    Ok(acc)
}

/// Common degree of all monomials of `p`, or a witness pair of monomials
/// with distinct degrees.
pub fn check_homogeneous(
    pres: &GradedPresentation,
    p: &LaurentPolynomial,
) -> Result<GroupElement, RingError> {
    let mut terms = p.terms().iter();
    let first = terms.next().ok_or(RingError::ZeroPolynomial)?;
    let degree = degree_of_monomial(pres, &first.exponents)?;
    for t in terms {
        let d = degree_of_monomial(pres, &t.exponents)?;
        if d != degree {
            return Err(RingError::NotHomogeneous {
                witness: Box::new(HomogeneityWitness {
                    first: (first.exponents.clone(), degree),
                    second: (t.exponents.clone(), d),
                }),
            });
        }
    }
    Ok(degree)
}

/// Two monomials of one polynomial whose degrees differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub first: (Vec<i64>, GroupElement),
    pub second: (Vec<i64>, GroupElement),
}
