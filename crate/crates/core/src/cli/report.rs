//! Machine-readable (JSON) and human-readable renderings of verdicts.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::abelian::{AbelianGroup, GroupElement};
use crate::criteria::{
    Attempt, AttemptFailure, Blocker, Certificate, CoxVerdict, ExtensionSearch, FactorialityStatus,
    FactorialityVerdict, Overall, Pointedness, Reduction, ShiftCandidate, UnitsStatus,
};
use crate::lattice::{IntMatrix, SnfResult};
use crate::ring::GradedPresentation;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn columns(m: &IntMatrix) -> Value {
    Value::Array(m.to_columns().iter().map(|c| ints(c)).collect())
}

pub fn rows(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn group(g: &AbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion": ints(g.torsion()),
        "display": g.to_string(),
    })
}

pub fn element(e: &GroupElement) -> Value {
    json!({
        "free": ints(e.free()),
        "torsion": ints(e.torsion()),
        "display": e.to_string(),
    })
}

fn certificate(c: &Certificate) -> Value {
    json!({
        "shifts": c.shifts,
        "fiber_basis_columns": columns(&c.fiber_basis),
        "vectors": c.vectors.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "coordinate_columns": columns(&c.coordinates),
        "invariant_factors": ints(&c.invariant_factors),
    })
}

fn failure(f: &AttemptFailure) -> Value {
    match f {
        AttemptFailure::DuplicateVectors => json!({"kind": "duplicate_vectors"}),
        AttemptFailure::TooManyVectors { count, rank } => {
            json!({"kind": "too_many_vectors", "count": count, "rank": rank})
        }
        AttemptFailure::OutsideLattice { index } => json!({"kind": "outside_lattice", "index": index}),
        AttemptFailure::RankDeficient { rank, expected } => {
            json!({"kind": "rank_deficient", "rank": rank, "expected": expected})
        }
        AttemptFailure::NotSaturated => json!({"kind": "not_saturated"}),
    }
}

fn attempt(a: &Attempt) -> Value {
    json!({
        "shifts": a.shifts,
        "failure": failure(&a.failure),
        "invariant_factors": ints(&a.invariant_factors),
    })
}

fn shift(s: &ShiftCandidate) -> Value {
    json!({"relation": s.relation, "mu": s.mu})
}

fn status(s: FactorialityStatus) -> &'static str {
    match s {
        FactorialityStatus::Established => "Established",
        FactorialityStatus::Undetermined => "Undetermined",
    }
}

pub fn factoriality(v: &FactorialityVerdict) -> Value {
    json!({
        "status": status(v.status),
        "certificate": v.certificate.as_ref().map(certificate),
        "fiber_basis_columns": columns(&v.fiber_basis),
        "attempts": v.attempts.iter().map(attempt).collect::<Vec<_>>(),
        "rejected_shifts": v.rejected_shifts.iter().map(shift).collect::<Vec<_>>(),
        "truncated": v.truncated,
        "inherited": v.inherited.as_ref().map(|i| json!({"steps": i.steps})),
    })
}

pub fn reduction(r: &Reduction, pres: &GradedPresentation) -> Value {
    json!({
        "fiber_basis_columns": columns(&r.fiber_basis),
        "jointly_affine_linear": r.jointly_affine_linear,
        "relations": r.relations.iter().map(|h| json!({
            "shift": h.shift,
            "shifted": h.shifted.display_with(pres.variables()).to_string(),
            "reduced": h.reduced.display_prefixed("S"),
            "affine_linear": h.affine_linear,
        })).collect::<Vec<_>>(),
    })
}

pub fn pointedness(p: &Pointedness) -> Value {
    json!({"pointed": p.pointed, "functional": p.witness.as_ref().map(|w| ints(w))})
}

fn units(u: UnitsStatus) -> &'static str {
    match u {
        UnitsStatus::EstablishedByPointedness => "EstablishedByPointedness",
        UnitsStatus::Asserted => "Asserted",
        UnitsStatus::Unknown => "Unknown",
    }
}

pub fn blocker_text(b: &Blocker) -> String {
    match b {
        Blocker::FactorialityUndetermined => "factoriality undetermined".into(),
        Blocker::NotAlmostFree { witness } => {
            format!("almost_free: degrees without variable {} do not generate", witness + 1)
        }
        Blocker::TrivialUnitsUnknown => "trivial homogeneous units unknown".into(),
        Blocker::AssumptionNotAsserted(name) => format!("assumption `{name}` not asserted"),
    }
}

pub fn cox(v: &CoxVerdict) -> Value {
    let overall = match &v.overall {
        Overall::CoxEstablished => json!("CoxEstablished"),
        Overall::Blocked(bs) => json!({"Blocked": bs.iter().map(blocker_text).collect::<Vec<_>>()}),
    };
    json!({
        "factoriality": factoriality(&v.factoriality),
        "almost_free": {"holds": v.almost_free.holds, "witness": v.almost_free.witness},
        "pointedness": pointedness(&v.pointedness),
        "trivial_units": units(v.trivial_units),
        "assumptions": v.assumptions,
        "overall": overall,
    })
}

pub fn extension(s: &ExtensionSearch) -> Value {
    json!({
        "bound": s.bound,
        "examined": s.examined,
        "candidates": s.candidates.iter().map(element).collect::<Vec<_>>(),
        "complete_outside_box": false,
    })
}

pub fn snf(r: &SnfResult) -> Value {
    json!({
        "invariant_factors": ints(&r.invariant_factors),
        "rank": r.rank(),
        "left": rows(&r.left),
        "diagonal": rows(&r.diagonal),
        "right": rows(&r.right),
    })
}

// Text renderings.

pub fn factoriality_text(v: &FactorialityVerdict, out: &mut String) {
    out.push_str(&format!("factoriality: {}\n", status(v.status)));
    if let Some(inh) = &v.inherited {
        out.push_str(&format!("  inherited through: {}\n", inh.steps.join(", ")));
    }
    if let Some(c) = &v.certificate {
        for (j, mu) in c.shifts.iter().enumerate() {
            out.push_str(&format!("  shift for relation {j}: {mu:?}\n"));
        }
        out.push_str(&format!("  fiber basis (columns): {}\n", columns(&c.fiber_basis)));
        out.push_str(&format!(
            "  vectors: {}\n",
            Value::Array(c.vectors.iter().map(|v| ints(v)).collect())
        ));
        out.push_str(&format!("  invariant factors: {}\n", ints(&c.invariant_factors)));
    } else {
        out.push_str(&format!("  shift tuples tried: {}\n", v.attempts.len()));
        for a in v.attempts.iter().take(10) {
            out.push_str(&format!(
                "    {:?}: {} {}\n",
                a.shifts,
                failure(&a.failure)["kind"].as_str().unwrap_or_default(),
                ints(&a.invariant_factors)
            ));
        }
        if v.attempts.len() > 10 {
            out.push_str("    ...\n");
        }
        if v.truncated {
            out.push_str("  search truncated at the tuple limit\n");
        }
        out.push_str("  (a failed search is not a proof of non-factoriality)\n");
    }
    for s in &v.rejected_shifts {
        out.push_str(&format!("  rejected shift for relation {}: {:?}\n", s.relation, s.mu));
    }
}

pub fn cox_text(v: &CoxVerdict, out: &mut String) {
    factoriality_text(&v.factoriality, out);
    out.push_str(&format!("almost free: {}\n", v.almost_free.holds));
    out.push_str(&format!("trivial units: {}\n", units(v.trivial_units)));
    match &v.overall {
        Overall::CoxEstablished => out.push_str("overall: CoxEstablished\n"),
        Overall::Blocked(bs) => {
            out.push_str("overall: Blocked\n");
            for b in bs {
                out.push_str(&format!("  - {}\n", blocker_text(b)));
            }
        }
    }
}
