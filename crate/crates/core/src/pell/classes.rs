//! Equivalence classes of solutions of `X^2 - rY^2 = m`.
//!
//! Two independent routes produce the class list. [`classes_by_bound`] scans
//! every `Y` up to the fundamental-solution bound; [`classes_by_lmm`] uses the
//! Lagrange–Matthews–Mollin reduction through the PQa recurrence and then
//! walks each hit down to its class representative.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::pqa::Pqa;
use super::{
    fundamental_unit, negative_pell, require_non_square, PellEquation, PellSolution, SolutionClass,
};
use crate::arith::{divisors, exact_sqrt};
use crate::Result;

/// Above this `Y` bound the scan is replaced by the reduction.
const SCAN_LIMIT: u64 = 2000;

pub(crate) fn fundamental_solutions(eq: &PellEquation) -> Result<Vec<SolutionClass>> {
    require_non_square(eq.r())?;
    let unit = fundamental_unit(eq.r())?;
    let bound = y_bound(eq, &unit);
    if bound <= BigInt::from(SCAN_LIMIT) {
        Ok(scan(eq, &bound))
    } else {
        lmm(eq, &unit)
    }
}

/// Largest `Y` a class representative can have.
///
/// `Y <= w·√(m / (2(z+1)))` for `m > 0` and `Y <= w·√(|m| / (2(z-1)))` for `m < 0`.
fn y_bound(eq: &PellEquation, unit: &PellSolution) -> BigInt {
    let m = eq.m();
    let denom: BigInt = if m.is_positive() {
        (&unit.x + 1u32) * 2u32
    } else {
        (&unit.x - 1u32) * 2u32
    };
    (&unit.y * &unit.y * m.abs() / denom).sqrt()
}

/// Class list from a direct scan of `0 <= Y <= bound`.
pub fn classes_by_bound(eq: &PellEquation) -> Result<Vec<SolutionClass>> {
    require_non_square(eq.r())?;
    let unit = fundamental_unit(eq.r())?;
    let bound = y_bound(eq, &unit);
    Ok(scan(eq, &bound))
}

fn scan(eq: &PellEquation, bound: &BigInt) -> Vec<SolutionClass> {
    let (r, m) = (eq.r(), eq.m());
    let mut candidates = Vec::new();
    let mut push = |x: BigInt, y: BigInt| {
        if !x.is_zero() {
            candidates.push(PellSolution::new(x.clone(), y.clone()));
        }
        candidates.push(PellSolution::new(-x, y));
    };
    let fits = (r * bound * bound + m.abs()).bits() < 120;
    match (fits, r.to_i128(), m.to_i128(), bound.to_i128()) {
        (true, Some(r), Some(m), Some(bound)) => {
            for y in 0..=bound {
                let v = m + r * y * y;
                if v >= 0 {
                    let x = (v as u128).sqrt();
                    if x * x == v as u128 {
                        push(BigInt::from(x), BigInt::from(y));
                    }
                }
            }
        }
        _ => {
            let mut y = BigInt::zero();
            while &y <= bound {
                if let Some(x) = exact_sqrt(&(m + r * &y * &y)) {
                    push(x, y.clone());
                }
                y += 1u32;
            }
        }
    }
    // Candidates arrive by increasing Y with X > 0 first, so the first member
    // met from each class is its representative.
    let mut reps: Vec<PellSolution> = Vec::new();
    for c in candidates {
        if !reps.iter().any(|rep| eq.equivalent(rep, &c)) {
            reps.push(c);
        }
    }
    finish(eq, reps)
}

/// Class list from the LMM reduction, normalized to representatives.
pub fn classes_by_lmm(eq: &PellEquation) -> Result<Vec<SolutionClass>> {
    require_non_square(eq.r())?;
    let unit = fundamental_unit(eq.r())?;
    lmm(eq, &unit)
}

fn lmm(eq: &PellEquation, unit: &PellSolution) -> Result<Vec<SolutionClass>> {
    let (d, m) = (eq.r(), eq.m());
    let neg_unit = negative_pell(d)?;
    let m_abs = m
        .abs()
        .to_u64()
        .expect("|m| beyond u64 is outside the supported range");

    let mut hits = Vec::new();
    for f in divisors(m_abs) {
        if m_abs % (f * f) != 0 {
            continue;
        }
        let m1 = m / BigInt::from(f * f);
        let m1_abs = m1.abs();
        let f = BigInt::from(f);
        let scaled = |s: PellSolution| PellSolution::new(&f * s.x, &f * s.y);

        if m1_abs.is_one() {
            if m1.is_one() {
                hits.push(scaled(PellSolution::new(1, 0)));
            } else if let Some(nu) = &neg_unit {
                hits.push(scaled(nu.clone()));
            }
            continue;
        }

        let half = &m1_abs / 2;
        let mut z: BigInt = -&half + if m1_abs.is_even() { 1u32 } else { 0u32 };
        while z <= half {
            if (&z * &z - d).mod_floor(&m1_abs).is_zero() {
                for s in primitive_hits(d, &z, &m1_abs, &m1, neg_unit.as_ref()) {
                    hits.push(scaled(s));
                }
            }
            z += 1u32;
        }
    }

    let mut reps: Vec<PellSolution> = Vec::new();
    for h in hits {
        debug_assert!(eq.is_solution(&h));
        let rep = representative(eq, &h, unit);
        if !reps.iter().any(|r| eq.equivalent(r, &rep)) {
            reps.push(rep);
        }
    }
    Ok(finish(eq, reps))
}

/// Runs PQa on `(z + √d)/|m1|` over one full cycle and keeps every convergent
/// whose norm is `m1`, or `-m1` turned around by the unit of norm `-1`.
fn primitive_hits(
    d: &BigInt,
    z: &BigInt,
    m1_abs: &BigInt,
    m1: &BigInt,
    neg_unit: Option<&PellSolution>,
) -> Vec<PellSolution> {
    let mut out = Vec::new();
    let mut pqa = Pqa::new(z.clone(), m1_abs.clone(), d.clone());
    let mut seen = HashSet::new();
    loop {
        if !seen.insert((pqa.p.clone(), pqa.q.clone())) {
            break;
        }
        let (g, b) = pqa.step();
        if pqa.q.abs().is_one() {
            let s = PellSolution::new(g, b);
            let norm = s.norm(d);
            if &norm == m1 {
                out.push(s);
            } else if norm == -m1 {
                if let Some(nu) = neg_unit {
                    out.push(s.compose(nu, d));
                }
            }
        }
    }
    out
}

/// Walks `s` along its class to the member with smallest `|Y|`, then picks
/// `Y >= 0` and `X > 0` among the ties.
pub(crate) fn representative(eq: &PellEquation, s: &PellSolution, unit: &PellSolution) -> PellSolution {
    let r = eq.r();
    let inv = unit.conjugate();
    let mut cur = s.clone();
    loop {
        let up = cur.compose(unit, r);
        let down = cur.compose(&inv, r);
        let (cy, uy, dy) = (cur.y.abs(), up.y.abs(), down.y.abs());
        if uy < cy && uy <= dy {
            cur = up;
        } else if dy < cy {
            cur = down;
        } else {
            break;
        }
    }
    let mut ties = vec![cur.clone()];
    for nb in [cur.compose(unit, r), cur.compose(&inv, r)] {
        if nb.y.abs() == cur.y.abs() {
            ties.push(nb);
        }
    }
    ties.into_iter()
        .flat_map(|t| [t.clone(), -t])
        .filter(|t| !t.y.is_negative())
        .max_by(|a, b| a.x.cmp(&b.x))
        .expect("a class always has a member with Y >= 0")
}

/// Positive member `(X > 0, Y > 0)` of the class of `s` with smallest `X`.
pub(crate) fn smallest_positive_member(
    eq: &PellEquation,
    s: &PellSolution,
    unit: &PellSolution,
) -> Option<PellSolution> {
    let r = eq.r();
    let inv = unit.conjugate();
    let rep = representative(eq, s, unit);
    let mut around = vec![rep.clone()];
    let (mut up, mut down) = (rep.clone(), rep);
    for _ in 0..3 {
        up = up.compose(unit, r);
        down = down.compose(&inv, r);
        around.push(up.clone());
        around.push(down.clone());
    }
    around
        .into_iter()
        .flat_map(|t| [t.clone(), -t])
        .filter(PellSolution::is_positive)
        .min_by(|a, b| a.x.cmp(&b.x))
}

fn finish(eq: &PellEquation, reps: Vec<PellSolution>) -> Vec<SolutionClass> {
    let mut classes: Vec<SolutionClass> = reps
        .into_iter()
        .map(|rep| {
            debug_assert!(eq.is_solution(&rep));
            let conj = PellSolution::new(-&rep.x, rep.y.clone());
            let conjugate = !rep.x.is_zero() && eq.equivalent(&rep, &conj);
            SolutionClass {
                fundamental: rep,
                conjugate,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        let (p, q) = (&a.fundamental, &b.fundamental);
        (p.x.abs(), &p.y, p.x.sign()).cmp(&(q.x.abs(), &q.y, q.x.sign()))
    });
    classes
}
