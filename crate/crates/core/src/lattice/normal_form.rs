//! Smith and Hermite normal forms with transform accumulation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of a Smith normal form computation: `left * input * right == diagonal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    /// Positive diagonal entries in divisibility order, then zeros up to
    /// `min(rows, cols)`.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Position of the smallest nonzero |entry| in the block `[t.., t..]`.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = smallest_pivot(&d, t) {
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = &d[(i, t)] / &d[(t, t)];
                if !q.is_zero() {
                    let q = -q;
                    d.add_row_multiple(i, t, &q);
                    left.add_row_multiple(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &d[(t, j)] / &d[(t, t)];
                if !q.is_zero() {
                    let q = -q;
                    d.add_col_multiple(j, t, &q);
                    right.add_col_multiple(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Row and column t are clear; enforce divisibility of the rest.
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let invariant_factors = (0..rows.min(cols)).map(|t| d[(t, t)].clone()).collect();
    SnfResult {
        left,
        diagonal: d,
        right,
        invariant_factors,
    }
}

/// Row-style Hermite normal form `H = U * M`.
///
/// Convention: rows are in echelon form, each pivot is positive and the
/// entries above a pivot lie in `[0, pivot)`. Zero rows collect at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;

    for j in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let pivot_row = (r..rows)
                .filter(|&i| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(a, j)].abs().cmp(&h[(b, j)].abs()));
            let Some(p) = pivot_row else {
                break;
            };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                let q = &h[(i, j)] / &h[(r, j)];
                if !q.is_zero() {
                    let q = -q;
                    h.add_row_multiple(i, r, &q);
                    u.add_row_multiple(i, r, &q);
                }
                clean &= h[(i, j)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, j)].div_floor(&h[(r, j)]);
            if !q.is_zero() {
                let q = -q;
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hermite_normal_form(m);
    (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}
