use hilbert_bir::pell::{fundamental_unit, min_unit_with_congruence, negative_pell, solve_skew};
use hilbert_bir::{PellEquation, PellSolution};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn is_square(v: u64) -> bool {
    v.isqrt().pow(2) == v
}

fn congruent(z: &BigInt, target: i64, modulus: u64) -> bool {
    (z - target).mod_floor(&BigInt::from(modulus)).is_zero()
}

#[test]
fn interval_representative() {
    const Y_CAP: u64 = 200_000;
    let mut checked = 0;
    for r in 2..=200u64 {
        if is_square(r) {
            continue;
        }
        let PellSolution { x: z, y: w } = fundamental_unit(&BigInt::from(r)).unwrap();
        // 0 <= Y/X < w/z forces Y^2 < w^2 m
        let Some(y_max) = (&w * &w * 30u32).sqrt().to_u64().filter(|&y| y <= Y_CAP) else {
            continue;
        };
        let mut found: Vec<Vec<PellSolution>> = vec![Vec::new(); 31];
        for y in 0..=y_max {
            let v = r as u128 * (y as u128) * (y as u128);
            for x in v.isqrt()..=(v + 30).isqrt() {
                let Some(m) = (x * x).checked_sub(v).map(|m| m as usize) else {
                    continue;
                };
                if (1..=30).contains(&m) {
                    let s = PellSolution::new(x, y);
                    if &s.y * &z < &w * &s.x {
                        found[m].push(s);
                    }
                }
            }
        }
        for (m, found) in found.iter().enumerate().skip(1) {
            let eq = PellEquation::new(r, m as i64).unwrap();
            let classes = eq.fundamental_solutions().unwrap();
            for c in &classes {
                let members = found
                    .iter()
                    .filter(|s| eq.equivalent(s, &c.fundamental))
                    .count();
                assert_eq!(members, 1, "r = {r}, m = {m}, class {:?}", c.fundamental);
            }
            assert_eq!(found.len(), classes.len(), "r = {r}, m = {m}");
            checked += 1;
        }
    }
    assert!(checked > 4000, "only {checked} equations in range");
}

#[test]
fn congruence_lemma() {
    for n in 2..=14u64 {
        for t in 2..=200u64 {
            if is_square(t * (n - 1)) {
                continue;
            }
            let u = min_unit_with_congruence(n, t).unwrap();
            if u.y.is_odd() {
                continue;
            }
            let z = &u.x;
            let (a, b) = (2 * (n - 1), 2 * t);
            let r = BigInt::from(t * (n - 1));
            let minimal = fundamental_unit(&r).unwrap() == u;
            let ctx = format!("(n, t) = ({n}, {t}), z = {z}");
            assert_eq!(congruent(z, 1, a) && congruent(z, 1, b), !minimal, "(i) {ctx}");
            assert_eq!(
                congruent(z, -1, a) && congruent(z, -1, b),
                negative_pell(&r).unwrap().is_some(),
                "(ii) {ctx}"
            );
            let skew_minus = solve_skew(n - 1, t, -1).unwrap().is_some();
            assert_eq!(congruent(z, 1, a) && congruent(z, -1, b), skew_minus, "(iii) {ctx}");
            let skew_plus = solve_skew(n - 1, t, 1).unwrap().is_some();
            let iv = congruent(z, -1, a) && congruent(z, 1, b);
            if n >= 3 {
                assert_eq!(iv, skew_plus, "(iv) {ctx}");
            } else if iv {
                assert!(skew_plus, "(iv) {ctx}");
            }
        }
    }
}

#[test]
fn skew_examples() {
    let s = |a, b, c| solve_skew(a, b, c).unwrap().map(|s| (s.x, s.y));
    let p = |x: i64, y: i64| Some((BigInt::from(x), BigInt::from(y)));
    assert_eq!(s(5, 6, -1), p(1, 1));
    assert_eq!(s(7, 2, -1), p(1, 2));
    assert_eq!(s(2, 11, -1), p(7, 3));
    assert_eq!(s(4, 1, -1), None);
}

fn non_square() -> impl Strategy<Value = u64> {
    (2u64..2000).prop_filter("non-square", |r| !is_square(*r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unit_steps_stay_in_class(r in non_square(), m in -60i64..60, k in 0usize..4) {
        prop_assume!(m != 0);
        let eq = PellEquation::new(r, m).unwrap();
        let unit = fundamental_unit(&BigInt::from(r)).unwrap();
        for c in eq.fundamental_solutions().unwrap() {
            prop_assert!(eq.is_solution(&c.fundamental));
            let mut s = c.fundamental.clone();
            for _ in 0..k {
                s = eq.next_in_class(&s, &unit);
            }
            prop_assert!(eq.is_solution(&s));
            prop_assert!(eq.equivalent(&s, &c.fundamental));
        }
    }

    #[test]
    fn fundamental_solutions_respect_bound(r in non_square(), m in -60i64..60) {
        prop_assume!(m != 0);
        let PellSolution { x: z, y: w } = fundamental_unit(&BigInt::from(r)).unwrap();
        let eq = PellEquation::new(r, m).unwrap();
        let classes = eq.fundamental_solutions().unwrap();
        for (i, c) in classes.iter().enumerate() {
            let f = &c.fundamental;
            prop_assert!(!f.y.is_negative());
            let denom = if m > 0 { 2u32 * (&z + 1u32) } else { 2u32 * (&z - 1u32) };
            prop_assert!(&denom * &f.y * &f.y <= &w * &w * m.abs());
            for d in &classes[..i] {
                prop_assert!(!eq.equivalent(f, &d.fundamental));
            }
            let flipped = PellSolution::new(-f.x.clone(), f.y.clone());
            prop_assert_eq!(c.conjugate, f.x.is_positive() && eq.equivalent(f, &flipped));
        }
    }

    #[test]
    fn negative_pell_squares_to_the_unit(r in non_square()) {
        let rb = BigInt::from(r);
        if let Some(s) = negative_pell(&rb).unwrap() {
            prop_assert_eq!(s.norm(&rb), BigInt::from(-1));
            prop_assert_eq!(s.compose(&s, &rb), fundamental_unit(&rb).unwrap());
        }
    }
}
