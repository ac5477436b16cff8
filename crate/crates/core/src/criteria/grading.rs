use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{subgroup_generates_group, AbelianGroup, GroupElement};
use crate::ring::GradedPresentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostFreeness {
    pub holds: bool,
    /// First variable index whose omission leaves degrees that do not
    /// generate the group.
    pub witness: Option<usize>,
}

/// Every choice of all-but-one degrees generates the grading group.
pub fn almost_free(pres: &GradedPresentation) -> AlmostFreeness {
    almost_free_degrees(pres.group(), pres.degrees())
}

pub(crate) fn almost_free_degrees(group: &Arc<AbelianGroup>, degrees: &[GroupElement]) -> AlmostFreeness {
    let witness = (0..degrees.len()).find(|&i| {
        let rest: Vec<GroupElement> = degrees
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, d)| d.clone())
            .collect();
        !subgroup_generates_group(group, &rest).expect("degrees share the grading group")
    });
    AlmostFreeness {
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointedness {
    pub pointed: bool,
    /// A primitive integral functional on the free part that is positive on
    /// every degree.
    pub witness: Option<Vec<BigInt>>,
}

/// Looks for a linear form on the free part of the grading group that is
/// strictly positive on every variable degree.
pub fn positive_grading_exists(pres: &GradedPresentation) -> Pointedness {
    let rows: Vec<Vec<BigInt>> = pres.degrees().iter().map(|d| d.free().to_vec()).collect();
    match strictly_positive_functional(&rows, pres.group().free_rank()) {
        Some(w) => Pointedness {
            pointed: true,
            witness: Some(w),
        },
        None => Pointedness {
            pointed: false,
            witness: None,
        },
    }
}

/// `coeffs . x >= rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Inequality {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Inequality {
    /// Scales by a positive factor so the first nonzero coefficient is +-1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(BigRational::abs) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// Finds an integral `w` with `a . w > 0` for every row `a`, by
/// Fourier-Motzkin elimination on the scaled system `a . w >= 1`.
pub(crate) fn strictly_positive_functional(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<BigInt>> {
    let system: Vec<Inequality> = rows
        .iter()
        .map(|a| Inequality {
            coeffs: a.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
            rhs: BigRational::one(),
        })
        .collect();

    // stages[k] constrains variables 0..k only.
    let mut stages = vec![Vec::new(); dim + 1];
    stages[dim] = system;
    for k in (0..dim).rev() {
        stages[k] = eliminate(&stages[k + 1], k);
    }
    if stages[0].iter().any(|ineq| ineq.rhs.is_positive()) {
        return None;
    }

    let mut point: Vec<BigRational> = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for ineq in &stages[k + 1] {
            let c = &ineq.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let rest: BigRational = ineq.coeffs[..k].iter().zip(&point).map(|(a, x)| a * x).sum();
            let bound = (&ineq.rhs - rest) / c;
            if c.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        point.push(pick_value(lo, hi));
    }

    let denominators = point.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut w: Vec<BigInt> = point.iter().map(|x| (x * &denominators).to_integer()).collect();
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in &mut w {
            *x /= &g;
        }
    }
    debug_assert!(rows
        .iter()
        .all(|a| a.iter().zip(&w).map(|(x, y)| x * y).sum::<BigInt>().is_positive()));
    Some(w)
}

fn eliminate(system: &[Inequality], k: usize) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    let mut push = |ineq: Inequality| {
        let ineq = ineq.normalized();
        let trivial = ineq.coeffs.iter().all(Zero::is_zero) && !ineq.rhs.is_positive();
        if !trivial && !out.contains(&ineq) {
            out.push(ineq);
        }
    };
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for ineq in system {
        let c = &ineq.coeffs[k];
        if c.is_zero() {
            push(ineq.clone());
        } else if c.is_positive() {
            pos.push(ineq);
        } else {
            neg.push(ineq);
        }
    }
    for p in &pos {
        for n in &neg {
            let (cp, cn) = (&p.coeffs[k], -&n.coeffs[k]);
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a * &cn + b * cp)
                .collect();
            push(Inequality {
                coeffs,
                rhs: &p.rhs * &cn + &n.rhs * cp,
            });
        }
    }
    out
}

/// A value in `[lo, hi]`: the integer of least magnitude when one fits,
/// otherwise the midpoint.
fn pick_value(lo: Option<BigRational>, hi: Option<BigRational>) -> BigRational {
    let zero = BigRational::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l <= zero {
                zero
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h >= zero {
                zero
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            if l <= zero && zero <= h {
                zero
            } else if l > zero && l.ceil() <= h {
                l.ceil()
            } else if h < zero && h.floor() >= l {
                h.floor()
            } else {
                (l + h) / BigRational::from_integer(2.into())
            }
        }
    }
}

/// Assignment of one monomial to a variable that occurs in no other monomial
/// of any relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateVariable {
    pub relation: usize,
    pub term: usize,
    pub variable: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateVariableCheck {
    pub holds: bool,
    pub assignment: Vec<PrivateVariable>,
}

/// Advisory shape test: every monomial of every relation contains a variable
/// that appears in no other monomial. Private variables belong to exactly one
/// monomial, so the resulting assignment is automatically injective.
pub fn private_variable_precheck(pres: &GradedPresentation) -> PrivateVariableCheck {
    let mut occurrences = vec![0usize; pres.nvars()];
    for g in pres.relations() {
        for e in g.exponents() {
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    occurrences[i] += 1;
                }
            }
        }
    }
    let mut assignment = Vec::new();
    for (relation, g) in pres.relations().iter().enumerate() {
        for (term, e) in g.exponents().enumerate() {
            let variable = (0..e.len()).find(|&i| e[i] != 0 && occurrences[i] == 1);
            assignment.push(PrivateVariable {
                relation,
                term,
                variable,
            });
        }
    }
    PrivateVariableCheck {
        holds: assignment.iter().all(|a| a.variable.is_some()),
        assignment,
    }
}
