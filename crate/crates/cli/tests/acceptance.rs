//! One pass/fail line per acceptance criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hilbert_bir::ambiguity::fm_partner_count;
use hilbert_bir::classify::{classify, conjecture_check, Group};
use hilbert_bir::cones::{decompose, is_n_irregular, movable_cone, n3_class_counts, n3_possibilities};
use hilbert_bir::nslattice::{bbf_square, involution_matrix, reflection_fix_axis};
use hilbert_bir::pell::solve_skew;
use hilbert_bir::{DivisorClass, HilbParams, PellEquation};
use hilbert_bir_cli::tables::{table1, table2};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;

fn hp(n: u64, t: u64) -> HilbParams {
    HilbParams::new(n, t).unwrap()
}

fn ints(s: &str) -> Vec<u64> {
    if s == "/" {
        return Vec::new();
    }
    s.split(',').map(|v| v.trim().parse().unwrap()).collect()
}

fn table1_check() -> Outcome {
    let expected = [
        (2, "5", "5"),
        (3, "3,9", "/"),
        (4, "4,13", "/"),
        (5, "5,17", "/"),
        (6, "6,9,21", "/"),
        (7, "7,25,49", "/"),
        (8, "2,4,8,11,16,29,37", "/"),
        (9, "1,9,33,57", "/"),
        (10, "10,13,37,61,85", "/"),
        (11, "11,19,41,49,121", "/"),
        (12, "3,4,5,12,15,25,27,45,125", "/"),
        (13, "1,13,49", "/"),
        (14, "14,17,22,38,49,53,77,121,133", "5"),
    ];
    let rows = table1(14);
    if rows.len() != expected.len() {
        return Err(format!("{} rows", rows.len()));
    }
    for (row, (n, a, b)) in rows.iter().zip(expected) {
        if row.n != n || row.nu_square_2 != ints(a) || row.nu_square_2n_minus_2 != ints(b) {
            return Err(format!(
                "n = {n}: got {:?} / {:?}, expected {a} / {b}",
                row.nu_square_2, row.nu_square_2n_minus_2
            ));
        }
    }
    Ok("13 rows match".into())
}

fn table2_check() -> Outcome {
    let expected = [
        (1, 1, "Z2", "Z2"),
        (3, 2, "trivial", "Z2"),
        (5, 3, "trivial", "Z2"),
        (9, 2, "trivial", "Z2"),
        (11, 5, "trivial", "Z2"),
        (13, 1, "Z2", "Z2"),
        (19, 1, "Z2", "Z2"),
        (25, 1, "Z2", "Z2"),
        (27, 3, "trivial", "Z2"),
        (29, 3, "trivial", "Z2"),
    ];
    let got: Vec<(u64, u64, String, String)> = table2(30)
        .into_iter()
        .map(|r| (r.t, r.d, r.aut, r.bir))
        .collect();
    let want: Vec<(u64, u64, String, String)> = expected
        .iter()
        .map(|&(t, d, a, b)| (t, d, a.to_string(), b.to_string()))
        .collect();
    if got != want {
        return Err(format!("got {got:?}"));
    }
    Ok("10 rows match".into())
}

fn fixture_check() -> Outcome {
    let nontrivial: BTreeSet<(u64, u64)> =
        [(2, 5), (3, 5), (4, 7), (6, 2), (8, 2), (8, 4), (9, 3), (9, 5)].into();
    let symplectic: BTreeSet<(u64, u64)> = [(9, 3), (9, 5)].into();
    let mut seen = BTreeSet::new();
    let mut symp = BTreeSet::new();
    for n in 2..=10 {
        for t in 2..=7 {
            if t == n {
                continue;
            }
            let c = classify(&hp(n, t));
            if c.group != Group::Trivial {
                seen.insert((n, t));
            }
            if c.symplectic() == Some(true) {
                symp.insert((n, t));
            }
        }
    }
    if seen != nontrivial {
        return Err(format!("non-trivial Bir at {seen:?}"));
    }
    if symp != symplectic {
        return Err(format!("symplectic at {symp:?}"));
    }
    let nu = |n, t| classify(&hp(n, t)).nu;
    if nu(6, 2) != Some(DivisorClass::new(5, -3)) || nu(8, 2) != Some(DivisorClass::new(2, -1)) {
        return Err("ν differs at (6,2) or (8,2)".into());
    }
    Ok("8 pairs, 2 symplectic, ν = 5h-3δ and 2h-δ".into())
}

fn prop54_check() -> Outcome {
    let mut applicable = 0;
    let mut nontrivial = 0;
    for t in 1..=2000u64 {
        let p = hp(3, t);
        let c = classify(&p);
        if let Ok(counts) = n3_class_counts(t) {
            applicable += 1;
            let (a9, a12, ad) = n3_possibilities(t % 18);
            if !a9.contains(&counts.count9)
                || !a12.contains(&counts.count12)
                || !ad.contains(&counts.chambers)
            {
                return Err(format!("t = {t}: {counts:?} outside the row for {}", t % 18));
            }
            let d = decompose(&p).map_err(|e| format!("t = {t}: {e}"))?;
            if d.chamber_count as usize != counts.chambers {
                return Err(format!("t = {t}: {} walls vs {counts:?}", d.walls.len()));
            }
        }
        // the three conditions for a non-trivial Bir(S^[3])
        let expected = t == 1 || {
            let two_t = BigInt::from(2 * t);
            let square = two_t.sqrt().pow(2) == two_t;
            !square
                && solve_skew(2, t, 1).unwrap().is_none()
                && (solve_skew(2, t, -1).unwrap().is_some()
                    || hilbert_bir::pell::negative_pell(&two_t).unwrap().is_some())
        };
        if expected != (c.group != Group::Trivial) {
            return Err(format!("t = {t}: Bir non-trivial is {}", !expected));
        }
        if c.group == Group::Trivial {
            continue;
        }
        nontrivial += 1;
        let d = c.chambers.ok_or(format!("t = {t}: no chamber count"))?;
        let ok = match d {
            1 => c.aut_group == Group::Z2 && c.group == Group::Z2,
            2 => (t == 3 || t == 9) && c.aut_group == Group::Trivial,
            3 | 5 => c.aut_group == Group::Trivial,
            _ => false,
        };
        if !ok {
            return Err(format!("t = {t}: d = {d}, aut {}", c.aut_group));
        }
        if [1, 4, 6, 7, 10, 12, 13, 15, 16].contains(&(t % 18)) && d != 1 {
            return Err(format!("t = {t}: Bir != Aut"));
        }
        // natural involutions are already regular
        if t != 3 && t != 9 && c.has_nonnatural() && !c.regularizable {
            return Err(format!("t = {t}: not regularizable"));
        }
    }
    Ok(format!("{applicable} applicable t, {nontrivial} with non-trivial Bir"))
}

fn conjecture() -> Outcome {
    let r = conjecture_check(14, 10);
    if r.counterexamples.is_empty() {
        Ok(format!("{} cases, no counterexamples", r.checked))
    } else {
        Err(format!("counterexamples {:?}", r.counterexamples))
    }
}

fn t_n_and_4n_minus_3() -> Outcome {
    let mut checked = 0;
    let cases = (3..=50).map(|n| (n, n)).chain((2..=50).map(|n| (n, 4 * n - 3)));
    for (n, t) in cases {
        let irr = is_n_irregular(&hp(n, t));
        checked += 1;
        if !irr.irregular || !irr.certificate.consistent {
            return Err(format!("(n, t) = ({n}, {t}): {irr:?}"));
        }
    }
    Ok(format!("{checked} cases irregular"))
}

/// Smallest `(z, w)` with `z^2 - rw^2 = 1`, by the continued fraction of `√r`.
fn unit_oracle(r: u64) -> (BigInt, BigInt) {
    let a0 = r.isqrt();
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (mut p0, mut p1) = (BigInt::from(1), BigInt::from(a0));
    let (mut q0, mut q1) = (BigInt::from(0), BigInt::from(1));
    while &p1 * &p1 - BigInt::from(r) * &q1 * &q1 != BigInt::from(1) {
        m = d * a - m;
        d = (r - m * m) / d;
        a = (a0 + m) / d;
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
    }
    (p1, q1)
}

const PELL_WINDOW: u64 = 10_000_000;

/// Every solution with `|m| <= 50` and `Y` up to the fundamental-solution
/// bound (capped at the window), grouped into classes by the divisibility
/// test; returns the classes whose first member lies in the window, and
/// whether the cap was reached.
fn pell_brute(r: u64) -> BTreeMap<i64, (Vec<(i64, i64)>, bool)> {
    let (z, w) = unit_oracle(r);
    let mut ymax = BTreeMap::new();
    for m in (-50i64..=50).filter(|&m| m != 0) {
        let denom = if m > 0 { 2u32 * (&z + 1u32) } else { 2u32 * (&z - 1u32) };
        let bound = (&w * &w * BigInt::from(m.unsigned_abs()) / denom).sqrt();
        let capped = bound > BigInt::from(PELL_WINDOW);
        let y = if capped { PELL_WINDOW } else { bound.to_u64().unwrap() };
        ymax.insert(m, (y, capped));
    }
    let top = ymax.values().map(|v| v.0).max().unwrap();
    let mut sols: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for y in 0..=top {
        let v = (r as i128) * (y as i128) * (y as i128);
        let lo = (v - 50).max(0).isqrt();
        let hi = (v + 50).isqrt();
        for x in lo..=hi {
            let m = (x * x - v) as i64;
            if m == 0 || m.abs() > 50 || y > ymax[&m].0 {
                continue;
            }
            let e = sols.entry(m).or_default();
            e.push((x as i64, y as i64));
            if x > 0 {
                e.push((-(x as i64), y as i64));
            }
        }
    }
    let mut out = BTreeMap::new();
    for m in (-50i64..=50).filter(|&m| m != 0) {
        let mut reps: Vec<(i64, i64)> = Vec::new();
        for &(x, y) in sols.get(&m).into_iter().flatten() {
            let ri = r as i128;
            let same = reps.iter().any(|&(u, v)| {
                let (x, y, u, v, m) = (x as i128, y as i128, u as i128, v as i128, m as i128);
                (x * u - ri * y * v) % m == 0 && (x * v - u * y) % m == 0
            });
            if !same {
                reps.push((x, y));
            }
        }
        reps.sort_unstable();
        out.insert(m, (reps, ymax[&m].1));
    }
    out
}

fn pell_oracle() -> Outcome {
    let mut equations = 0;
    let mut windowed = 0;
    for r in 2..=500u64 {
        if r.isqrt().pow(2) == r {
            continue;
        }
        for (m, (brute, capped)) in pell_brute(r) {
            equations += 1;
            let eq = PellEquation::new(r, m).unwrap();
            let classes = eq.fundamental_solutions().unwrap();
            for (i, a) in classes.iter().enumerate() {
                let f = &a.fundamental;
                if !eq.is_solution(f) || classes[..i].iter().any(|b| eq.equivalent(f, &b.fundamental)) {
                    return Err(format!("r = {r}, m = {m}: ({}, {}) invalid or repeated", f.x, f.y));
                }
            }
            let mut lib: Vec<(i64, i64)> = Vec::new();
            for c in classes {
                let f = c.fundamental;
                match (f.x.to_i64(), f.y.to_u64()) {
                    (Some(x), Some(y)) if y <= PELL_WINDOW || !capped => lib.push((x, y as i64)),
                    _ if capped => {}
                    _ => return Err(format!("r = {r}, m = {m}: fundamental ({}, {}) beyond the bound", f.x, f.y)),
                }
            }
            lib.sort_unstable();
            windowed += capped as usize;
            if lib != brute {
                return Err(format!("r = {r}, m = {m}: library {lib:?}, brute force {brute:?}"));
            }
        }
    }
    Ok(format!(
        "{equations} equations, {windowed} compared on Y <= {PELL_WINDOW} (bound beyond the window)"
    ))
}

fn fm_oracle() -> Outcome {
    for t in 1..=500u64 {
        let modulus = 2 * t;
        let orbits: BTreeSet<u64> = (0..modulus)
            .filter(|&a| gcd(a, modulus) == 1 && (a * a) % (4 * t) == 1 % (4 * t))
            .map(|a| a.min((modulus - a) % modulus))
            .collect();
        let count = orbits.len() as u64;
        if fm_partner_count(t) != count {
            return Err(format!("t = {t}: formula {}, oracle {count}", fm_partner_count(t)));
        }
    }
    Ok("t <= 500 match".into())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn structural() -> Outcome {
    let mut matrices = 0;
    let mut generators = 0;
    for n in 2..=14 {
        for t in 1..=300 {
            let p = hp(n, t);
            let c = classify(&p);
            let irr = is_n_irregular(&p);
            if !irr.certificate.consistent {
                return Err(format!("(n, t) = ({n}, {t}): irregularity paths disagree"));
            }
            let Ok((low, high)) = movable_cone(&p) else {
                if c.has_nonnatural() {
                    return Err(format!("(n, t) = ({n}, {t}): generator without the standard cone"));
                }
                continue;
            };
            let m = involution_matrix(&p).unwrap();
            matrices += 1;
            if !m.mul(&m).is_identity() {
                return Err(format!("(n, t) = ({n}, {t}): matrix is not an involution"));
            }
            if m.apply(&low).primitive() != high || m.apply(&high).primitive() != low {
                return Err(format!("(n, t) = ({n}, {t}): extremal rays not swapped"));
            }
            let axis = reflection_fix_axis(&p).unwrap();
            if m.apply(&axis) != axis {
                return Err(format!("(n, t) = ({n}, {t}): axis moved"));
            }
            for probe in [DivisorClass::h(), DivisorClass::delta(), DivisorClass::new(3, -7)] {
                if bbf_square(&p, &m.apply(&probe)) != bbf_square(&p, &probe) {
                    return Err(format!("(n, t) = ({n}, {t}): square not preserved"));
                }
            }
            if let Some(nu) = &c.nu {
                generators += 1;
                if m.apply(nu) != *nu {
                    return Err(format!("(n, t) = ({n}, {t}): ν moved"));
                }
            }
        }
    }
    Ok(format!("{matrices} matrices, {generators} generators"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("table1 reproduction", Duration::from_secs(10), table1_check),
        ("table2 reproduction", Duration::from_secs(5), table2_check),
        ("involution fixture, 2 <= n <= 10, 2 <= t <= 7", Duration::from_secs(5), fixture_check),
        ("n = 3 chamber counts, t <= 2000", Duration::from_secs(120), prop54_check),
        ("t = (n-1)k^2 + 1 biregular, n <= 14, k <= 10", Duration::from_secs(120), conjecture),
        ("t = n and t = 4n-3 irregular, n <= 50", Duration::from_secs(60), t_n_and_4n_minus_3),
        ("Pell classes vs brute force, r <= 500, |m| <= 50", Duration::from_secs(300), pell_oracle),
        ("FM partner count vs brute force, t <= 500", Duration::from_secs(10), fm_oracle),
        ("structural invariants, n <= 14, t <= 300", Duration::from_secs(600), structural),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status} {name} ({:.2}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
