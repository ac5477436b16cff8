//! Command-line front end. Every command reads a presentation file (or `-`
//! for stdin), prints a text report and optionally writes a JSON report.
//!
//! Exit codes: 0 established or ok, 1 undetermined or blocked, 2 input error.

pub mod input;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::abelian::{AbelianGroup, GroupHom};
use crate::criteria::{
    adjoin_variable, affine_linear_criterion, almost_free, coarsen, cox_verdict, laurent_reduction,
    positive_grading_exists, private_variable_precheck, search_extension_degrees, CriteriaError,
};
use crate::lattice::{smith_normal_form, IntMatrix};
use input::{
    document_from_presentation, emit_document, parse_element, parse_input, parse_json, parse_shift,
    InputError, JsonInt, Loaded,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDETERMINED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cox-verify", version, about = "Exact lattice checks for factorially graded rings and Cox rings")]
pub struct Cli {
    /// Write the machine-readable JSON report to this path (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of every relation.
    Homogeneity { input: PathBuf },
    /// Search for an affine-linear factoriality certificate.
    Factorial {
        input: PathBuf,
        /// Generator of K' as "free;torsion" (repeatable). Replaces any K'
        /// given in the file.
        #[arg(long, value_name = "ELEMENT")]
        veronese: Vec<String>,
        /// Extra shift as "relation:e1,e2,..." (repeatable), tried first.
        #[arg(long, value_name = "SHIFT")]
        shifts: Vec<String>,
        /// Also report the reduced Laurent relations.
        #[arg(long)]
        reduce: bool,
    },
    /// Whether every set of all-but-one degrees generates the group.
    AlmostFree { input: PathBuf },
    /// Whether some linear form is positive on all degrees.
    Pointed { input: PathBuf },
    /// Full Cox-ring verdict.
    Cox {
        input: PathBuf,
        #[arg(long, value_name = "ELEMENT")]
        veronese: Vec<String>,
        #[arg(long, value_name = "SHIFT")]
        shifts: Vec<String>,
    },
    /// Push the grading forward along a group map and emit the new file.
    Coarsen {
        input: PathBuf,
        /// JSON file {"target": {"free_rank", "torsion"}, "matrix": rows}.
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        /// Where to write the new presentation (default stdout).
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Adjoin a variable of the given degree and emit the new file.
    Extend {
        input: PathBuf,
        /// Degree as "free;torsion", e.g. "2;1".
        #[arg(long, value_name = "ELEMENT")]
        degree: String,
        /// Name of the new variable (default: first unused T<k>).
        #[arg(long)]
        name: Option<String>,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Degrees in a box whose adjunction makes the grading almost free.
    SearchExtension {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u64,
    },
    /// Smith normal form of an integer matrix given as JSON rows.
    Snf { matrix: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetSpec {
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<JsonInt>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDocument {
    target: TargetSpec,
    matrix: Vec<Vec<JsonInt>>,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("{0}")]
    Usage(String),
}

struct Outcome {
    code: i32,
    text: String,
    json: Value,
    /// Presentation file produced by `coarsen` / `extend`.
    emitted: Option<(Option<PathBuf>, String)>,
}

fn read_source(path: &Path, stdin: &mut dyn Read) -> Result<Vec<u8>, InputError> {
    let io = |e: std::io::Error| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path == Path::new("-") {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(io)
    }
}

/// Parses arguments and runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(outcome) => {
            let mut code = outcome.code;
            if let Some((path, text)) = &outcome.emitted {
                match path {
                    Some(p) => {
                        if let Err(e) = fs::write(p, text) {
                            let _ = writeln!(stderr, "error: cannot write {}: {e}", p.display());
                            return EXIT_INPUT;
                        }
                        let _ = write!(stdout, "{}", outcome.text);
                    }
                    None => {
                        let _ = write!(stderr, "{}", outcome.text);
                        let _ = write!(stdout, "{text}");
                    }
                }
            } else {
                let _ = write!(stdout, "{}", outcome.text);
            }
            if let Some(path) = &cli.json_out {
                let mut report = outcome.json;
                report["exit_code"] = json!(code);
                let body = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
                if path == Path::new("-") {
                    let _ = write!(stdout, "{body}");
                } else if let Err(e) = fs::write(path, body) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    code = EXIT_INPUT;
                }
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Some(path) = &cli.json_out {
                let body = json!({"error": e.to_string(), "exit_code": EXIT_INPUT});
                let body = serde_json::to_string_pretty(&body).expect("reports serialize") + "\n";
                if path == Path::new("-") {
                    let _ = write!(stdout, "{body}");
                } else {
                    let _ = fs::write(path, body);
                }
            }
            EXIT_INPUT
        }
    }
}

fn load(path: &Path, stdin: &mut dyn Read) -> Result<Loaded, InputError> {
    parse_input(&read_source(path, stdin)?)
}

fn k_and_shifts(
    loaded: &Loaded,
    veronese: &[String],
    shifts: &[String],
) -> Result<(Vec<crate::abelian::GroupElement>, Vec<crate::criteria::ShiftCandidate>), Failure> {
    let group = loaded.presentation.group();
    let kprime = if veronese.is_empty() {
        loaded.kprime.clone()
    } else {
        veronese
            .iter()
            .map(|v| parse_element(group, v))
            .collect::<Result<_, _>>()?
    };
    let mut extra = loaded.shifts.clone();
    for s in shifts {
        extra.push(parse_shift(s)?);
    }
    Ok((kprime, extra))
}

fn ok(code: i32, text: String, json: Value) -> Result<Outcome, Failure> {
    Ok(Outcome {
        code,
        text,
        json,
        emitted: None,
    })
}

fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match command {
        Command::Homogeneity { input } => {
            let l = load(input, stdin)?;
            let p = &l.presentation;
            let mut text = format!("grading group: {}\n", p.group());
            let mut rels = Vec::new();
            for (j, (g, d)) in p.relations().iter().zip(p.relation_degrees()).enumerate() {
                text.push_str(&format!("relation {j}: degree {d}  ({})\n", g.display_with(p.variables())));
                rels.push(json!({"index": j, "degree": report::element(d)}));
            }
            let json = json!({
                "command": "homogeneity",
                "group": report::group(p.group()),
                "degrees": p.degrees().iter().map(report::element).collect::<Vec<_>>(),
                "relations": rels,
            });
            ok(EXIT_OK, text, json)
        }
        Command::Factorial {
            input,
            veronese,
            shifts,
            reduce,
        } => {
            let l = load(input, stdin)?;
            let (kprime, extra) = k_and_shifts(&l, veronese, shifts)?;
            let p = &l.presentation;
            let v = affine_linear_criterion(p, &kprime, &extra)?;
            let mut text = String::new();
            report::factoriality_text(&v, &mut text);
            let precheck = private_variable_precheck(p);
            text.push_str(&format!("private-variable shape: {}\n", precheck.holds));
            let mut json = json!({
                "command": "factorial",
                "kprime": kprime.iter().map(report::element).collect::<Vec<_>>(),
                "factoriality": report::factoriality(&v),
                "private_variable_shape": precheck.holds,
            });
            if *reduce {
                // Certified shifts in a basis adapted to them; otherwise the
                // first tuple tried, in the fiber lattice's own basis.
                let choice = match &v.certificate {
                    Some(c) => Some((c.shifts.clone(), c.adapted_basis())),
                    None => v.attempts.first().map(|a| (a.shifts.clone(), v.fiber_basis.clone())),
                };
                if let Some((tuple, basis)) = choice {
                    let r = laurent_reduction(p, &kprime, &tuple, Some(&basis))?;
                    for (j, h) in r.relations.iter().enumerate() {
                        text.push_str(&format!(
                            "reduced relation {j}: {}  (affine linear: {})\n",
                            h.reduced.display_prefixed("S"),
                            h.affine_linear
                        ));
                    }
                    json["reduction"] = report::reduction(&r, p);
                }
            }
            let code = if v.is_established() { EXIT_OK } else { EXIT_UNDETERMINED };
            ok(code, text, json)
        }
        Command::AlmostFree { input } => {
            let l = load(input, stdin)?;
            let af = almost_free(&l.presentation);
            let mut text = format!("almost free: {}\n", af.holds);
            if let Some(w) = af.witness {
                text.push_str(&format!(
                    "  the degrees other than that of {} do not generate the group\n",
                    l.presentation.variables()[w]
                ));
            }
            let json = json!({"command": "almost-free", "holds": af.holds, "witness": af.witness});
            ok(if af.holds { EXIT_OK } else { EXIT_UNDETERMINED }, text, json)
        }
        Command::Pointed { input } => {
            let l = load(input, stdin)?;
            let pt = positive_grading_exists(&l.presentation);
            let mut text = format!("pointed: {}\n", pt.pointed);
            if let Some(w) = &pt.witness {
                text.push_str(&format!("  positive functional: {}\n", report::ints(w)));
            }
            let mut json = report::pointedness(&pt);
            json["command"] = json!("pointed");
            ok(if pt.pointed { EXIT_OK } else { EXIT_UNDETERMINED }, text, json)
        }
        Command::Cox {
            input,
            veronese,
            shifts,
        } => {
            let l = load(input, stdin)?;
            let (kprime, extra) = k_and_shifts(&l, veronese, shifts)?;
            let v = cox_verdict(&l.presentation, &kprime, &extra)?;
            let mut text = String::new();
            report::cox_text(&v, &mut text);
            let mut json = report::cox(&v);
            json["command"] = json!("cox");
            ok(if v.is_established() { EXIT_OK } else { EXIT_UNDETERMINED }, text, json)
        }
        Command::Coarsen { input, map, output } => {
            let l = load(input, stdin)?;
            let m: MapDocument = parse_json(&read_source(map, stdin)?)?;
            let target = Arc::new(
                AbelianGroup::new(m.target.free_rank, m.target.torsion.iter().map(|x| x.0.clone()).collect())
                    .map_err(|e| Failure::Usage(format!("map target: {e}")))?,
            );
            let width = l.presentation.group().lift_dim();
            if m.matrix.len() != target.lift_dim() || m.matrix.iter().any(|r| r.len() != width) {
                return Err(Failure::Usage(format!(
                    "map matrix must be {} x {}",
                    target.lift_dim(),
                    width
                )));
            }
            let rows: Vec<Vec<_>> = m.matrix.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
            let matrix = IntMatrix::from_rows(&rows);
            let phi = GroupHom::new(l.presentation.group().clone(), target, matrix)
                .map_err(|e| Failure::Usage(format!("map: {e}")))?;
            let coarse = coarsen(&l.presentation, &phi)?;
            emit(coarse, output, "coarsen")
        }
        Command::Extend {
            input,
            degree,
            name,
            output,
        } => {
            let l = load(input, stdin)?;
            let p = &l.presentation;
            let degree = parse_element(p.group(), degree)?;
            let name = match name {
                Some(n) => n.clone(),
                None => (p.nvars() + 1..)
                    .map(|k| format!("T{k}"))
                    .find(|n| !p.variables().contains(n))
                    .expect("some name is free"),
            };
            let extended = adjoin_variable(p, degree, &name)?;
            emit(extended, output, "extend")
        }
        Command::SearchExtension { input, bound } => {
            let l = load(input, stdin)?;
            let s = search_extension_degrees(&l.presentation, *bound)?;
            let mut text = format!(
                "examined {} degrees with free coordinates in [-{bound}, {bound}]\n",
                s.examined
            );
            for c in &s.candidates {
                text.push_str(&format!("  {c}\n"));
            }
            if s.candidates.is_empty() {
                text.push_str("  none found in this box; degrees outside it were not examined\n");
            }
            let mut json = report::extension(&s);
            json["command"] = json!("search-extension");
            let code = if s.candidates.is_empty() { EXIT_UNDETERMINED } else { EXIT_OK };
            ok(code, text, json)
        }
        Command::Snf { matrix } => {
            let rows: Vec<Vec<JsonInt>> = parse_json(&read_source(matrix, stdin)?)?;
            let width = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != width) {
                return Err(Failure::Usage("matrix rows have different lengths".into()));
            }
            let rows: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
            let m = if rows.is_empty() {
                IntMatrix::zeros(0, 0)
            } else {
                IntMatrix::from_rows(&rows)
            };
            let r = smith_normal_form(&m);
            let text = format!(
                "invariant factors: {}\nU = {}\nD = {}\nV = {}\n",
                report::ints(&r.invariant_factors),
                r.left,
                r.diagonal,
                r.right
            );
            let mut json = report::snf(&r);
            json["command"] = json!("snf");
            ok(EXIT_OK, text, json)
        }
    }
}

fn emit(pres: crate::ring::GradedPresentation, output: &Option<PathBuf>, command: &str) -> Result<Outcome, Failure> {
    let doc = document_from_presentation(&pres);
    let body = emit_document(&doc);
    let text = format!(
        "{command}: {} variables graded by {}\n",
        pres.nvars(),
        pres.group()
    );
    let json = json!({
        "command": command,
        "group": report::group(pres.group()),
        "degrees": pres.degrees().iter().map(report::element).collect::<Vec<_>>(),
        "presentation": serde_json::to_value(&doc).expect("documents serialize"),
    });
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json,
        emitted: Some((output.clone(), body)),
    })
}
