//! Independent reference computations. Outside `suites`, nothing here
//! calls the library.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// gcd of all k x k minors (0 if all vanish).
pub fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

/// Invariant factors as ratios of successive determinantal divisors.
pub fn invariant_factors_by_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let d = minor_gcd(m, k);
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

pub fn transpose(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Rational solution of `A x = b` when unique, by Gauss-Jordan elimination.
/// Returns `None` if inconsistent or underdetermined.
pub fn rational_solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            r.iter()
                .chain(std::iter::once(x))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        let p = (pivot_row..rows).find(|&r| !m[r][c].is_zero())?;
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[pivot_row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| m[c][cols].clone()).collect())
}

pub fn rational_rank(m: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `vectors` (in Z^n) are independent and span a saturated lattice,
/// decided by looking for a nonzero integer point in the half-open
/// parallelepiped they span.
pub fn primitive_by_enumeration(vectors: &[Vec<i64>], n: usize) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| big(v)).collect();
    let a = transpose(&cols);
    if rational_rank(&a) < vectors.len() {
        return false;
    }
    let lo: Vec<i64> = (0..n).map(|i| vectors.iter().map(|v| v[i].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..n).map(|i| vectors.iter().map(|v| v[i].max(0)).sum()).collect();
    let mut x = lo.clone();
    loop {
        if x.iter().any(|&c| c != 0) {
            if let Some(t) = rational_solve(&a, &big(&x)) {
                let zero = BigRational::zero();
                let one = BigRational::one();
                if t.iter().all(|s| *s >= zero && *s < one) {
                    return false;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return true;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

/// Size of the subgroup of `Z/d_1 + ... + Z/d_k` generated by `gens`, by
/// breadth-first closure.
pub fn closure_size(moduli: &[i64], gens: &[Vec<i64>]) -> usize {
    let zero = vec![0i64; moduli.len()];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<i64> = x.iter().zip(g).zip(moduli).map(|((a, b), d)| (a + b).rem_euclid(*d)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

pub fn is_unit_list(xs: &[BigInt]) -> bool {
    xs.iter().all(|x| x.abs().is_one())
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cox-verify"))
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).expect("scratch directory");
    dir.join(name)
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// JSON document for `T_1^{m_1} + ... + T_4^{m_4}` graded by `Z^4 / M`
/// with `M` spanned by `(-m_1, m_2, 0, 0)`, `(-m_1, 0, m_3, 0)`,
/// `(-m_1, 0, 0, m_4)` and `deg T_i = e_i + M`.
pub fn pure_power_document(m: [i64; 4], asserted: bool) -> String {
    let exps: Vec<String> = (0..4)
        .map(|i| {
            let mut e = [0i64; 4];
            e[i] = m[i];
            format!(r#"{{"coeff": "1", "exp": [{}, {}, {}, {}]}}"#, e[0], e[1], e[2], e[3])
        })
        .collect();
    let flag = if asserted { "true" } else { "false" };
    format!(
        r#"{{
  "variables": ["T1", "T2", "T3", "T4"],
  "grading": {{"presentation": {{
    "ambient_rank": 4,
    "relations": [[{a}, {b}, 0, 0], [{a}, 0, {c}, 0], [{a}, 0, 0, {d}]],
    "degrees": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
  }}}},
  "relations": [[{terms}]],
  "assumptions": {{"integral": {flag}, "normal": {flag}, "generators_k_prime": {flag},
                   "generators_pairwise_nonassociated": {flag}}}
}}"#,
        a = -m[0],
        b = m[1],
        c = m[2],
        d = m[3],
        terms = exps.join(", ")
    )
}

pub fn json_matrix_columns(v: &serde_json::Value) -> Vec<Vec<BigInt>> {
    v.as_array()
        .expect("array of columns")
        .iter()
        .map(|c| {
            c.as_array()
                .expect("column")
                .iter()
                .map(|x| match x {
                    serde_json::Value::Number(n) => BigInt::from(n.as_i64().expect("integer entry")),
                    serde_json::Value::String(s) => s.parse().expect("integer string"),
                    other => panic!("bad entry {other}"),
                })
                .collect()
        })
        .collect()
}

/// Re-verifies an established factoriality report using only its JSON: the
/// coordinates are recomputed by a rational solve against the basis, must be
/// integral and match the stored ones, and the coordinate matrix must have
/// only unit invariant factors by the minor-gcd oracle.
pub fn replay_factoriality_json(f: &serde_json::Value) -> Result<(), String> {
    if f["status"] != "Established" {
        return Err(format!("status is {}", f["status"]));
    }
    let cert = &f["certificate"];
    let basis = json_matrix_columns(&cert["fiber_basis_columns"]);
    let vectors = json_matrix_columns(&cert["vectors"]);
    let stored = json_matrix_columns(&cert["coordinate_columns"]);
    if vectors.is_empty() {
        return Ok(());
    }
    let b = transpose(&basis);
    if rational_rank(&b) != basis.len() {
        return Err("basis columns are dependent".into());
    }
    let mut coords = Vec::new();
    for v in &vectors {
        let x = rational_solve(&b, v).ok_or("vector not in the rational span of the basis")?;
        if !x.iter().all(|q| q.is_integer()) {
            return Err(format!("vector {v:?} has non-integral coordinates"));
        }
        coords.push(x.iter().map(|q| q.to_integer()).collect::<Vec<_>>());
    }
    if coords != stored {
        return Err("stored coordinates differ from the recomputed ones".into());
    }
    let c = transpose(&coords);
    let factors = invariant_factors_by_minors(&c);
    if factors.len() != vectors.len() || !is_unit_list(&factors) {
        return Err(format!("coordinate matrix has invariant factors {factors:?}"));
    }
    Ok(())
}

pub mod suites {
    //! Randomized comparisons of library results against the oracles above.

    use std::sync::Arc;

    use cox_verify::abelian::{subgroup_generates_group, AbelianGroup};
    use cox_verify::lattice::{is_basis_of_primitive_sublattice, smith_normal_form, IntMatrix};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::{big, closure_size, invariant_factors_by_minors, primitive_by_enumeration};

    /// SNF invariant factors against determinantal-divisor ratios on random
    /// matrices up to 4 x 4 with entries in [-5, 5].
    pub fn snf_vs_minors(seed: u64, cases: usize) -> Result<usize, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for case in 0..cases {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let snf = smith_normal_form(&IntMatrix::from_rows(&m));
            let expected = invariant_factors_by_minors(&m.iter().map(|r| big(r)).collect::<Vec<_>>());
            let got: Vec<BigInt> = snf.invariant_factors.iter().filter(|d| **d != BigInt::from(0)).cloned().collect();
            if got != expected {
                return Err(format!("case {case}: {m:?} gave {got:?}, minors give {expected:?}"));
            }
        }
        Ok(cases)
    }

    /// Primitivity against parallelepiped enumeration for random sets of at
    /// most two vectors in Z^3 with entries in [-3, 3].
    pub fn primitivity_vs_enumeration(seed: u64, cases: usize) -> Result<(usize, usize), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ambient = IntMatrix::identity(3);
        let mut positives = 0;
        for case in 0..cases {
            let k = rng.gen_range(1..=2);
            let vs: Vec<Vec<i64>> = (0..k).map(|_| (0..3).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let report = is_basis_of_primitive_sublattice(&vs.iter().map(|v| big(v)).collect::<Vec<_>>(), &ambient)
                .map_err(|e| e.to_string())?;
            let expected = primitive_by_enumeration(&vs, 3);
            if report.primitive != expected {
                return Err(format!("case {case}: {vs:?} gave {}, enumeration gives {expected}", report.primitive));
            }
            positives += usize::from(expected);
        }
        Ok((cases, positives))
    }

    const CHAINS: &[&[i64]] = &[
        &[2], &[3], &[4], &[6], &[8], &[9], &[12], &[24], &[36], &[72],
        &[2, 2], &[2, 4], &[2, 6], &[3, 3], &[2, 12], &[3, 6], &[4, 4], &[6, 6], &[3, 12], &[2, 2, 2], &[2, 2, 6],
    ];

    /// Generation test against breadth-first closure in finite groups of
    /// order at most 72.
    pub fn generation_vs_closure(seed: u64, cases: usize) -> Result<(usize, usize), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut positives = 0;
        for case in 0..cases {
            let moduli = CHAINS[rng.gen_range(0..CHAINS.len())];
            let order: i64 = moduli.iter().product();
            assert!(order <= 72);
            let group = Arc::new(AbelianGroup::new(0, big(moduli)).map_err(|e| e.to_string())?);
            let count = rng.gen_range(0..=3);
            let gens: Vec<Vec<i64>> = (0..count).map(|_| moduli.iter().map(|&d| rng.gen_range(0..d)).collect()).collect();
            let elements: Vec<_> = gens.iter().map(|g| group.element(vec![], big(g)).expect("in range")).collect();
            let got = subgroup_generates_group(&group, &elements).map_err(|e| e.to_string())?;
            let expected = closure_size(moduli, &gens) as i64 == order;
            if got != expected {
                return Err(format!("case {case}: Z/{moduli:?} with {gens:?} gave {got}, closure gives {expected}"));
            }
            positives += usize::from(expected);
        }
        Ok((cases, positives))
    }
}
