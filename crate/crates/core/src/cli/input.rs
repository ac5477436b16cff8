//! JSON presentation files: parsing with field-level diagnostics and
//! canonical re-emission.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::{group_from_presentation, AbelianGroup, GroupElement, GroupError};
use crate::criteria::ShiftCandidate;
use crate::lattice::IntMatrix;
use crate::ring::{Assumptions, GradedPresentation, Polynomial, RingError};

/// Arbitrary-precision integer that reads a JSON number or a decimal string
/// and writes a number whenever it fits in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                BigInt::from_str(v.trim())
                    .map(JsonInt)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

/// Exact rational written as `"num/den"` or `"num"`; plain JSON integers
/// are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;
        impl Visitor<'_> for RatVisitor {
            type Value = JsonRational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"num/den\" or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRational, E> {
                BigRational::from_str(v.trim())
                    .map(JsonRational)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(RatVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    #[serde(default)]
    pub free: Vec<JsonInt>,
    #[serde(default)]
    pub torsion: Vec<JsonInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalGrading {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<JsonInt>,
    pub degrees: Vec<ElementSpec>,
}

/// `Z^ambient_rank` modulo the span of `relations` (each one a column).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentedGrading {
    pub ambient_rank: usize,
    #[serde(default)]
    pub relations: Vec<Vec<JsonInt>>,
    pub degrees: Vec<Vec<JsonInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingSpec {
    Canonical(CanonicalGrading),
    Presentation(PresentedGrading),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: JsonRational,
    pub exp: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub relation: usize,
    pub mu: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub variables: Vec<String>,
    pub grading: GradingSpec,
    #[serde(default)]
    pub relations: Vec<Vec<TermSpec>>,
    #[serde(default)]
    pub assumptions: Assumptions,
    /// Generators of K', in the coordinates of the (canonical) grading group.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kprime: Vec<ElementSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shifts: Vec<ShiftSpec>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedSyntax { line: usize, column: usize, message: String },
    #[error("schema violation at `{field}`{}: {message}", location(*.line, *.column))]
    SchemaViolation {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("relation {index} is not homogeneous: {witness}")]
    InhomogeneousRelation { index: usize, witness: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn location(line: usize, column: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" (line {line}, column {column})")
    }
}

fn violation(field: impl Into<String>, message: impl fmt::Display) -> InputError {
    InputError::SchemaViolation {
        field: field.into(),
        line: 0,
        column: 0,
        message: message.to_string(),
    }
}

/// A validated document with its semantic content.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub document: InputDocument,
    pub presentation: GradedPresentation,
    pub kprime: Vec<GroupElement>,
    pub shifts: Vec<ShiftCandidate>,
}

/// Deserializes any JSON value, reporting the path of the first bad field.
pub fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, InputError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            InputError::MalformedSyntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        } else {
            InputError::SchemaViolation {
                field: path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        }
    })?;
    de.end().map_err(|e| InputError::MalformedSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn parse_input(bytes: &[u8]) -> Result<Loaded, InputError> {
    let document: InputDocument = parse_json(bytes)?;
    load(document)
}

fn big(xs: &[JsonInt]) -> Vec<BigInt> {
    xs.iter().map(|x| x.0.clone()).collect()
}

fn element(group: &Arc<AbelianGroup>, spec: &ElementSpec, field: &str) -> Result<GroupElement, InputError> {
    group
        .element(big(&spec.free), big(&spec.torsion))
        .map_err(|e| violation(field, e))
}

/// Validates a parsed document and builds the presentation.
pub fn load(document: InputDocument) -> Result<Loaded, InputError> {
    let n = document.variables.len();
    let (group, degrees) = match &document.grading {
        GradingSpec::Canonical(c) => {
            let group = Arc::new(
                AbelianGroup::new(c.free_rank, big(&c.torsion))
                    .map_err(|e| violation("grading.canonical.torsion", e))?,
            );
            if c.degrees.len() != n {
                return Err(violation(
                    "grading.canonical.degrees",
                    format!("expected {n} degrees, one per variable, got {}", c.degrees.len()),
                ));
            }
            let degrees = c
                .degrees
                .iter()
                .enumerate()
                .map(|(i, d)| element(&group, d, &format!("grading.canonical.degrees[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            (group, degrees)
        }
        GradingSpec::Presentation(p) => {
            for (j, col) in p.relations.iter().enumerate() {
                if col.len() != p.ambient_rank {
                    return Err(violation(
                        format!("grading.presentation.relations[{j}]"),
                        format!("expected {} entries, got {}", p.ambient_rank, col.len()),
                    ));
                }
            }
            let cols: Vec<Vec<BigInt>> = p.relations.iter().map(|c| big(c)).collect();
            let (group, proj) = group_from_presentation(p.ambient_rank, &IntMatrix::from_columns(p.ambient_rank, &cols))
                .map_err(|e| violation("grading.presentation", e))?;
            if p.degrees.len() != n {
                return Err(violation(
                    "grading.presentation.degrees",
                    format!("expected {n} degrees, one per variable, got {}", p.degrees.len()),
                ));
            }
            let degrees = p
                .degrees
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    proj.apply_lift(&big(d))
                        .map_err(|e| violation(format!("grading.presentation.degrees[{i}]"), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (group, degrees)
        }
    };

    let mut relations = Vec::with_capacity(document.relations.len());
    for (j, terms) in document.relations.iter().enumerate() {
        for (t, term) in terms.iter().enumerate() {
            if term.exp.len() != n {
                return Err(violation(
                    format!("relations[{j}][{t}].exp"),
                    format!("expected {n} exponents, got {}", term.exp.len()),
                ));
            }
        }
        let g = Polynomial::new(n, terms.iter().map(|t| (t.coeff.0.clone(), t.exp.clone())).collect())
            .map_err(|e| violation(format!("relations[{j}]"), e))?;
        relations.push(g);
    }

    let presentation = GradedPresentation::new(
        document.variables.clone(),
        group.clone(),
        degrees,
        relations,
        document.assumptions,
    )
    .map_err(|e| match e {
        RingError::InhomogeneousRelation { index, witness } => InputError::InhomogeneousRelation {
            index,
            witness: format!(
                "monomial {:?} has degree {} but {:?} has degree {}",
                witness.first.0, witness.first.1, witness.second.0, witness.second.1
            ),
        },
        RingError::ZeroRelation { index } => violation(format!("relations[{index}]"), e),
        RingError::DuplicateName(_) => violation("variables", e),
        other => violation("document", other),
    })?;

    let kprime = document
        .kprime
        .iter()
        .enumerate()
        .map(|(i, k)| element(&group, k, &format!("kprime[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let shifts = document
        .shifts
        .iter()
        .map(|s| ShiftCandidate {
            relation: s.relation,
            mu: s.mu.clone(),
        })
        .collect();
    Ok(Loaded {
        document,
        presentation,
        kprime,
        shifts,
    })
}

fn json_ints(xs: &[BigInt]) -> Vec<JsonInt> {
    xs.iter().cloned().map(JsonInt).collect()
}

pub fn element_spec(e: &GroupElement) -> ElementSpec {
    ElementSpec {
        free: json_ints(e.free()),
        torsion: json_ints(e.torsion()),
    }
}

/// Canonical-mode document for a presentation. Derivation history, K' and
/// shifts are not carried over.
pub fn document_from_presentation(pres: &GradedPresentation) -> InputDocument {
    let group = pres.group();
    InputDocument {
        variables: pres.variables().to_vec(),
        grading: GradingSpec::Canonical(CanonicalGrading {
            free_rank: group.free_rank(),
            torsion: json_ints(group.torsion()),
            degrees: pres.degrees().iter().map(element_spec).collect(),
        }),
        relations: pres
            .relations()
            .iter()
            .map(|g| {
                g.terms()
                    .iter()
                    .map(|t| TermSpec {
                        coeff: JsonRational(t.coeff.clone()),
                        exp: t.exponents.clone(),
                    })
                    .collect()
            })
            .collect(),
        assumptions: *pres.assumptions(),
        kprime: Vec::new(),
        shifts: Vec::new(),
    }
}

pub fn emit_document(doc: &InputDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Parses a group element written as `"free;torsion"` with comma-separated
/// coordinates, e.g. `"2;1"` or `"0,6;1"`. The torsion part may be omitted.
pub fn parse_element(group: &Arc<AbelianGroup>, text: &str) -> Result<GroupElement, InputError> {
    let (free, torsion) = text.split_once(';').unwrap_or((text, ""));
    let numbers = |s: &str| -> Result<Vec<BigInt>, InputError> {
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| BigInt::from_str(x).map_err(|_| violation(text, format!("`{x}` is not an integer"))))
            .collect()
    };
    group
        .element(numbers(free)?, numbers(torsion)?)
        .map_err(|e: GroupError| violation(text, e))
}

/// Parses a shift written as `"relation:mu"`, e.g. `"0:0,3,1,0"`.
pub fn parse_shift(text: &str) -> Result<ShiftCandidate, InputError> {
    let (rel, mu) = text
        .split_once(':')
        .ok_or_else(|| violation(text, "expected `relation:e1,e2,...`"))?;
    let relation = rel
        .trim()
        .parse()
        .map_err(|_| violation(text, format!("`{rel}` is not a relation index")))?;
    let mu = mu
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| violation(text, format!("`{x}` is not an exponent"))))
        .collect::<Result<_, _>>()?;
    Ok(ShiftCandidate { relation, mu })
}
