//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so the lines are printed on every `cargo test`.

mod common;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use common::{
    big, data, invariant_factors_by_minors, minor_gcd, rational_rank, rational_solve, replay_factoriality_json,
    run, scratch, suites, transpose,
};
use cox_verify::abelian::{subgroup_generates_group, validate_coarsening, AbelianGroup, GroupHom};
use cox_verify::cli::input::parse_input;
use cox_verify::criteria::{adjoin_variable, affine_linear_criterion, almost_free, coarsen, cox_verdict};
use cox_verify::lattice::IntMatrix;
use num_bigint::BigInt;
use serde_json::{json, Value};

type Reports = Vec<(String, Value)>;

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Runs the binary with `--json-out` and returns (exit code, report).
fn report(args: &[&str], name: &str) -> Result<(i32, Value), String> {
    let out = scratch(name);
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--json-out", s(&out)]);
    let o = run(&full);
    let code = o.status.code().ok_or("binary killed by a signal")?;
    let body = std::fs::read(&out).map_err(|e| format!("{name}: {e}"))?;
    let v: Value = serde_json::from_slice(&body).map_err(|e| e.to_string())?;
    if code == 2 {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&o.stderr)));
    }
    Ok((code, v))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(path: &Path) -> Result<cox_verify::cli::input::Loaded, String> {
    parse_input(&std::fs::read(path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn pure_power_cases() -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in 2..=4 {
        for b in 2..=4 {
            for c in 2..=4 {
                for d in 2..=4 {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn pure_power_file(m: [i64; 4]) -> Result<PathBuf, String> {
    let path = scratch(&format!("pure_powers_{}{}{}{}.json", m[0], m[1], m[2], m[3]));
    std::fs::write(&path, common::pure_power_document(m, true)).map_err(|e| e.to_string())?;
    Ok(path)
}

fn criterion_1(reports: &mut Reports) -> Result<String, String> {
    let cases = pure_power_cases();
    for m in &cases {
        let file = pure_power_file(*m)?;
        let (code, v) = report(&["factorial", s(&file)], &format!("factorial_{m:?}.json"))?;
        ensure(code == 0, format!("m = {m:?}: exit code {code}"))?;
        ensure(v["factoriality"]["status"] == "Established", format!("m = {m:?}: not established"))?;
        reports.push((format!("pure powers {m:?}"), v["factoriality"].clone()));
    }
    Ok(format!("{} of {} exponent tuples established", cases.len(), cases.len()))
}

fn criterion_2(reports: &mut Reports) -> Result<String, String> {
    let presented = load(&data("pure_powers_2233_presented.json"))?;
    let g = presented.presentation.group();
    ensure(
        g.free_rank() == 1 && g.torsion() == [BigInt::from(6)],
        format!("canonical group is {g}"),
    )?;
    ensure(!almost_free(&presented.presentation).holds, "presented grading is almost free")?;

    let chart = load(&data("pure_powers_2233.json"))?;
    let p = &chart.presentation;
    ensure(**p.group() == **g, "printed chart uses a different group")?;
    for skip in 0..4 {
        let three: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| p.degrees()[i].clone()).collect();
        ensure(
            !subgroup_generates_group(p.group(), &three).map_err(|e| e.to_string())?,
            format!("degrees without T{} generate", skip + 1),
        )?;
    }
    let (code, v) = report(&["cox", s(&data("pure_powers_2233.json"))], "cox_2233.json")?;
    ensure(code == 1, format!("cox before adjunction exited {code}"))?;
    ensure(
        v["almost_free"]["holds"] == false && v["overall"]["Blocked"].is_array(),
        "cox before adjunction not blocked by almost freeness",
    )?;

    let extended = scratch("pure_powers_2233_extended.json");
    let o = run(&["extend", s(&data("pure_powers_2233.json")), "--degree", "2;1", "-o", s(&extended)]);
    ensure(o.status.code() == Some(0), "extend failed")?;
    let (code, v) = report(&["cox", s(&extended)], "cox_2233_extended.json")?;
    ensure(code == 0, format!("cox after adjunction exited {code}: {}", v["overall"]))?;
    ensure(v["almost_free"]["holds"] == true, "not almost free after adjunction")?;
    ensure(v["overall"] == "CoxEstablished", "overall is not CoxEstablished")?;
    reports.push(("pure powers (2,2,3,3) with T5".into(), v["factoriality"].clone()));
    Ok("group Z + Z/6; no three degrees generate; Cox ring after adjoining (2, 1 mod 6)".into())
}

fn criterion_3(reports: &mut Reports) -> Result<String, String> {
    let fine_file = data("mixed_torsion_fine.json");
    let fine = load(&fine_file)?;
    ensure(
        fine.presentation.relation_degrees()[0].lift() == big(&[0, 12, 0]),
        "relation degree under the fine grading",
    )?;
    let (code, v) = report(&["factorial", s(&fine_file)], "factorial_fine.json")?;
    ensure(code == 0, "fine grading not established")?;
    let cert = &v["factoriality"]["certificate"];
    ensure(cert["shifts"] == json!([[2, 0, 0, 0, 0]]), format!("shift is {}", cert["shifts"]))?;
    let mut vectors: Vec<Value> = cert["vectors"].as_array().cloned().unwrap_or_default();
    vectors.sort_by_key(|x| x.to_string());
    let mut expected = vec![json!([-2, 2, 3, 0, 0]), json!([-2, 0, 0, 3, 0]), json!([-2, 0, 0, 0, 4])];
    expected.sort_by_key(|x| x.to_string());
    ensure(vectors == expected, "certified vectors are not the exponents of T1^-2 g")?;
    reports.push(("five-variable relation, fine grading".into(), v["factoriality"].clone()));
    ensure(!almost_free(&fine.presentation).holds, "fine grading is almost free")?;

    let target = std::sync::Arc::new(AbelianGroup::new(1, big(&[2])).map_err(|e| e.to_string())?);
    let phi = GroupHom::new(
        fine.presentation.group().clone(),
        target,
        IntMatrix::from_rows(&[[1, 1, 0], [0, 0, 1]]),
    )
    .map_err(|e| e.to_string())?;
    validate_coarsening(&phi).map_err(|e| e.to_string())?;

    let coarse_file = scratch("mixed_torsion_coarse.json");
    let o = run(&[
        "coarsen",
        s(&fine_file),
        "--map",
        s(&data("sum_free_parts.json")),
        "-o",
        s(&coarse_file),
    ]);
    ensure(o.status.code() == Some(0), "coarsen failed")?;
    let coarse = load(&coarse_file)?;
    let lifts: Vec<Vec<BigInt>> = coarse.presentation.degrees().iter().map(|d| d.lift()).collect();
    let printed: Vec<Vec<BigInt>> = [[6, 1], [3, 1], [2, 0], [4, 0], [3, 0]].iter().map(|c| big(c)).collect();
    ensure(lifts == printed, format!("coarsened degrees {lifts:?}"))?;
    ensure(almost_free(&coarse.presentation).holds, "coarse grading is not almost free")?;
    let (code, v) = report(&["cox", s(&coarse_file)], "cox_coarse.json")?;
    ensure(code == 0 && v["overall"] == "CoxEstablished", format!("coarse cox verdict {}", v["overall"]))?;
    reports.push(("five-variable relation, coarse grading".into(), v["factoriality"].clone()));
    Ok("fine: established at mu = T1^2, not almost free; coarse: printed degrees, almost free, Cox ring".into())
}

fn criterion_4(reports: &mut Reports) -> Result<String, String> {
    let file = data("weighted_quartic.json");
    let (code, v) = report(&["factorial", s(&file), "--shifts", "0:0,3,1,0"], "factorial_quartic.json")?;
    ensure(code == 0, "not established")?;
    ensure(
        v["factoriality"]["certificate"]["shifts"] == json!([[0, 3, 1, 0]]),
        "certificate does not use mu = (0,3,1,0)",
    )?;
    reports.push(("weighted quartic".into(), v["factoriality"].clone()));
    let (code, v) = report(&["pointed", s(&file)], "pointed_quartic.json")?;
    ensure(code == 0 && v["pointed"] == true, "not pointed")?;
    let (code, _) = report(&["almost-free", s(&file)], "almost_free_quartic.json")?;
    ensure(code == 0, "not almost free")?;
    let (code, v) = report(&["cox", s(&file), "--shifts", "0:0,3,1,0"], "cox_quartic.json")?;
    ensure(code == 0 && v["overall"] == "CoxEstablished", "cox verdict not established")?;
    ensure(v["trivial_units"] == "EstablishedByPointedness", "units not settled by pointedness")?;
    reports.push(("weighted quartic, cox".into(), v["factoriality"].clone()));
    Ok("established at mu = (0,3,1,0); pointed; almost free; Cox ring".into())
}

fn criterion_5() -> Result<String, String> {
    let (code, v) = report(&["factorial", s(&data("quadric.json"))], "factorial_quadric.json")?;
    ensure(code == 1, format!("exit code {code}"))?;
    let f = &v["factoriality"];
    ensure(f["status"] == "Undetermined", "quadric was certified")?;
    let attempts = f["attempts"].as_array().cloned().unwrap_or_default();
    ensure(attempts.len() == 3, format!("{} attempts", attempts.len()))?;

    // Oracle: a hand basis of ker(1 1 1), checked to be a saturated basis,
    // and minor-gcd invariant factors of the shifted vectors in it.
    let kernel = vec![big(&[1, -1, 0]), big(&[0, 1, -1])];
    let k = transpose(&kernel);
    ensure(
        kernel.iter().all(|c| c.iter().sum::<BigInt>() == BigInt::from(0)),
        "oracle basis not in the kernel",
    )?;
    ensure(rational_rank(&k) == 2 && minor_gcd(&k, 2) == BigInt::from(1), "oracle basis not saturated")?;
    for i in 0..3 {
        let mut mu = [0i64; 3];
        mu[i] = 2;
        let vectors: Vec<Vec<BigInt>> = (0..3)
            .filter(|&j| j != i)
            .map(|j| {
                let mut e = [0i64; 3];
                e[j] = 2;
                big(&[e[0] - mu[0], e[1] - mu[1], e[2] - mu[2]])
            })
            .collect();
        let coords: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| {
                rational_solve(&k, v)
                    .expect("in the kernel")
                    .iter()
                    .map(|q| q.to_integer())
                    .collect()
            })
            .collect();
        let factors = invariant_factors_by_minors(&transpose(&coords));
        ensure(factors == big(&[2, 2]), format!("oracle factors {factors:?} for mu = {mu:?}"))?;
        let reported = attempts
            .iter()
            .find(|a| a["shifts"] == json!([mu]))
            .ok_or(format!("mu = {mu:?} was not tried"))?;
        ensure(
            reported["invariant_factors"] == json!([2, 2]),
            format!("reported factors {} for mu = {mu:?}", reported["invariant_factors"]),
        )?;
    }
    Ok("undetermined; all three shifts give invariant factors (2, 2), matching the oracle".into())
}

fn criterion_6() -> Result<String, String> {
    let snf = suites::snf_vs_minors(2026, 250)?;
    let (prim, prim_pos) = suites::primitivity_vs_enumeration(2026, 100)?;
    let (gen, gen_pos) = suites::generation_vs_closure(2026, 100)?;
    ensure(prim_pos > 0 && prim_pos < prim, "primitivity suite is one-sided")?;
    ensure(gen_pos > 0 && gen_pos < gen, "generation suite is one-sided")?;
    Ok(format!(
        "{snf} SNF cases, {prim} primitivity cases ({prim_pos} primitive), {gen} generation cases ({gen_pos} generating)"
    ))
}

fn criterion_7(reports: &Reports) -> Result<String, String> {
    ensure(reports.len() >= 81 + 5, format!("only {} reports collected", reports.len()))?;
    for (label, f) in reports {
        replay_factoriality_json(f).map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(format!("{} established reports replayed from JSON", reports.len()))
}

fn criterion_8() -> Result<String, String> {
    for m in pure_power_cases() {
        let p = load(&pure_power_file(m)?)?.presentation;
        let q = adjoin_variable(&p, p.degrees()[0].clone(), "T5").map_err(|e| e.to_string())?;
        let before = affine_linear_criterion(&p, &[], &[]).map_err(|e| e.to_string())?;
        let after = affine_linear_criterion(&q, &[], &[]).map_err(|e| e.to_string())?;
        ensure(before.is_established() && after.is_established(), format!("m = {m:?}"))?;
    }
    let p = load(&data("pure_powers_2233.json"))?.presentation;
    let deg = p.group().element(big(&[2]), big(&[1])).map_err(|e| e.to_string())?;
    let q = adjoin_variable(&p, deg, "T5").map_err(|e| e.to_string())?;
    let v = affine_linear_criterion(&q, &[], &[]).map_err(|e| e.to_string())?;
    ensure(v.is_established() && v.inherited.is_none(), "adjoined (2,2,3,3) not established directly")?;

    let fine = load(&data("mixed_torsion_fine.json"))?.presentation;
    let target = std::sync::Arc::new(AbelianGroup::new(1, big(&[2])).map_err(|e| e.to_string())?);
    let phi = GroupHom::new(fine.group().clone(), target, IntMatrix::from_rows(&[[1, 1, 0], [0, 0, 1]]))
        .map_err(|e| e.to_string())?;
    let coarse = coarsen(&fine, &phi).map_err(|e| e.to_string())?;
    let mapped = phi.apply(&fine.relation_degrees()[0]).map_err(|e| e.to_string())?;
    ensure(coarse.relation_degrees()[0] == mapped, "coarsened relation degree differs from the image")?;
    ensure(
        affine_linear_criterion(&fine, &[], &[]).map_err(|e| e.to_string())?.is_established(),
        "fine grading not established",
    )?;
    let v = cox_verdict(&coarse, &[], &[]).map_err(|e| e.to_string())?;
    ensure(
        v.factoriality.is_established() && v.factoriality.inherited.is_none(),
        "coarse grading not established directly",
    )?;
    Ok("adjunction keeps 82 certificates; coarsening keeps homogeneity and the certificate".into())
}

fn main() -> ExitCode {
    let mut reports = Reports::new();
    let results: Vec<(&str, Result<String, String>)> = vec![
        ("1 pure-power family, 81 exponent tuples", criterion_1(&mut reports)),
        ("2 pure powers (2,2,3,3) and adjunction", criterion_2(&mut reports)),
        ("3 five-variable relation and coarsening", criterion_3(&mut reports)),
        ("4 weighted quartic", criterion_4(&mut reports)),
        ("5 quadric negative control", criterion_5()),
        ("6 oracle suites", criterion_6()),
        ("7 certificate replay", criterion_7(&reports)),
        ("8 transformation consistency", criterion_8()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
