use super::factorial::{affine_linear_criterion, FactorialityVerdict, Inheritance, ShiftCandidate};
use super::grading::{almost_free, positive_grading_exists, AlmostFreeness, Pointedness};
use super::CriteriaError;
use crate::abelian::GroupElement;
use crate::ring::{Assumptions, GradedPresentation, Transformation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitsStatus {
    /// A positive grading exists, so homogeneous units are constants.
    EstablishedByPointedness,
    Asserted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocker {
    FactorialityUndetermined,
    NotAlmostFree { witness: usize },
    TrivialUnitsUnknown,
    AssumptionNotAsserted(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overall {
    CoxEstablished,
    Blocked(Vec<Blocker>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxVerdict {
    pub factoriality: FactorialityVerdict,
    pub almost_free: AlmostFreeness,
    pub pointedness: Pointedness,
    pub trivial_units: UnitsStatus,
    pub assumptions: Assumptions,
    pub overall: Overall,
}

impl CoxVerdict {
    pub fn is_established(&self) -> bool {
        self.overall == Overall::CoxEstablished
    }
}

fn describe(step: &Transformation) -> String {
    match step {
        Transformation::Coarsened { from } => format!("coarsened from {from}"),
        Transformation::Adjoined { name, degree } => format!("adjoined {name} of degree {degree}"),
    }
}

/// Checks factoriality on the presentation itself; if that is undetermined,
/// looks for a certified ancestor, since coarsening and adjunction preserve
/// graded factoriality in both directions. Ancestors are checked with
/// `K' = 0`.
fn factoriality_with_lineage(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
    extra_shifts: &[ShiftCandidate],
) -> Result<FactorialityVerdict, CriteriaError> {
    let direct = affine_linear_criterion(pres, kprime_generators, extra_shifts)?;
    if direct.is_established() {
        return Ok(direct);
    }
    let mut steps = Vec::new();
    for origin in pres.ancestors() {
        steps.push(describe(&origin.step));
        let verdict = affine_linear_criterion(&origin.parent, &[], &[])?;
        if verdict.is_established() {
            steps.reverse();
            return Ok(FactorialityVerdict {
                inherited: Some(Inheritance { steps }),
                ..verdict
            });
        }
    }
    Ok(direct)
}

/// Combines factoriality, almost freeness, unit triviality and the asserted
/// ring-theoretic hypotheses into one verdict. An undetermined factoriality
/// search always blocks.
pub fn cox_verdict(
    pres: &GradedPresentation,
    kprime_generators: &[GroupElement],
    extra_shifts: &[ShiftCandidate],
) -> Result<CoxVerdict, CriteriaError> {
    let factoriality = factoriality_with_lineage(pres, kprime_generators, extra_shifts)?;
    let almost_free = almost_free(pres);
    let pointedness = positive_grading_exists(pres);
    let assumptions = *pres.assumptions();
    let trivial_units = if pointedness.pointed {
        UnitsStatus::EstablishedByPointedness
    } else if assumptions.trivial_homogeneous_units {
        UnitsStatus::Asserted
    } else {
        UnitsStatus::Unknown
    };

    let mut blockers = Vec::new();
    if !factoriality.is_established() {
        blockers.push(Blocker::FactorialityUndetermined);
    }
    if let Some(witness) = almost_free.witness {
        blockers.push(Blocker::NotAlmostFree { witness });
    }
    if trivial_units == UnitsStatus::Unknown {
        blockers.push(Blocker::TrivialUnitsUnknown);
    }
    for (asserted, name) in [
        (assumptions.integral, "integral"),
        (assumptions.normal, "normal"),
        (assumptions.generators_k_prime, "generators_k_prime"),
        (assumptions.generators_pairwise_nonassociated, "generators_pairwise_nonassociated"),
    ] {
        if !asserted {
            blockers.push(Blocker::AssumptionNotAsserted(name));
        }
    }
    let overall = if blockers.is_empty() {
        Overall::CoxEstablished
    } else {
        Overall::Blocked(blockers)
    };
    Ok(CoxVerdict {
        factoriality,
        almost_free,
        pointedness,
        trivial_units,
        assumptions,
        overall,
    })
}
