//! Fourier–Mukai partners and birational maps `S^[n] ⇢ Σ^[n]` that do not
//! come from an isomorphism `S → Σ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

pub use crate::arith::distinct_prime_count;
use crate::arith::{exact_sqrt, pm_one};
use crate::cones::{decompose, wall_family, WallParams};
use crate::nslattice::HilbParams;
use crate::pell::{classes_by_lmm, fundamental_unit, solve_skew, PellEquation, PellSolution};

/// `2^(ω(t) - 1)` with `ω(1) = 1`, the number of non-isomorphic FM partners.
pub fn fm_partner_count(t: u64) -> u64 {
    assert!(t >= 1, "t must be >= 1");
    1 << (distinct_prime_count(t) - 1)
}

/// `(p, q, r, s)` with `t = rs`, naming the partner as `M_S(s, H, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartnerLabel {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
    /// `z = 2(n-1)k + ε`.
    pub epsilon: i8,
}

impl fmt::Display for PartnerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_S({}, H, {})", self.s, self.r)
    }
}

/// Result of the per-`(α, ρ)` minimal-solution test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeCheck {
    pub source: WallParams,
    /// Smallest congruent positive solution below the cone bound, if any.
    pub below_bound: Option<PellSolution>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<SlopeCheck>,
    /// The minimal-solution test and the chamber count give the same answer.
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub params: HilbParams,
    pub exists_noninduced_map: bool,
    pub partner_isomorphic_to_s: Option<bool>,
    pub fm_partner_count: u64,
    pub partner_label: Option<PartnerLabel>,
    pub map_biregular: Option<bool>,
    pub verification: Option<Verification>,
}

pub fn ambiguity(p: &HilbParams) -> AmbiguityReport {
    let mut report = AmbiguityReport {
        params: *p,
        exists_noninduced_map: false,
        partner_isomorphic_to_s: None,
        fm_partner_count: fm_partner_count(p.t),
        partner_label: None,
        map_biregular: None,
        verification: None,
    };
    if exact_sqrt(&p.radicand()).is_some() {
        return report;
    }
    if p.n != 2 && matches!(solve_skew(p.n - 1, p.t, 1), Ok(Some(_))) {
        return report;
    }
    let PellSolution { x: z, y: w } = p.unit().expect("non-square radicand");
    let Some(eps) = pm_one(&z, &BigInt::from(2 * (p.n - 1))) else {
        return report;
    };
    if w.is_odd() {
        return report;
    }
    report.exists_noninduced_map = true;
    report.partner_isomorphic_to_s = Some(pm_one(&z, &BigInt::from(2 * p.t)).is_some());
    report.partner_label = Some(partner_label(p, &z, &w, eps));
    report.map_biregular = Some(
        decompose(p)
            .expect("existence implies the standard movable cone")
            .chamber_count
            == 1,
    );
    report
}

/// [`ambiguity`] plus the per-`(α, ρ)` minimal-solution test, run
/// independently of the wall enumeration.
pub fn ambiguity_verified(p: &HilbParams) -> AmbiguityReport {
    let mut report = ambiguity(p);
    if let Some(biregular) = report.map_biregular {
        let checks = slope_checks(p);
        let by_slopes = checks.iter().all(|c| c.below_bound.is_none());
        report.verification = Some(Verification {
            agrees: by_slopes == biregular,
            checks,
        });
    }
    report
}

fn partner_label(p: &HilbParams, z: &BigInt, w: &BigInt, eps: i8) -> PartnerLabel {
    let n1 = BigInt::from(p.n - 1);
    let t = BigInt::from(p.t);
    let k = (z - eps) / (2u32 * &n1);
    let h = w / 2u32;
    let other = &k * &n1 + eps;
    // k and k(n-1) + ε are coprime, so the part of t dividing k is gcd(k, t)
    let s = k.gcd(&t);
    let r = &t / &s;
    let p2 = &k / &s;
    let q2 = &other / &r;
    let pp = exact_sqrt(&p2).expect("k / gcd(k, t) is a square");
    let qq = exact_sqrt(&q2).expect("(k(n-1) + ε) / r is a square");
    assert_eq!(&pp * &qq, h, "h' = pq");
    assert_eq!(&r * &s, t);
    assert_eq!(&n1 * &s * &p2 - &r * &q2, BigInt::from(-eps));
    PartnerLabel {
        p: pp,
        q: qq,
        r,
        s,
        epsilon: eps,
    }
}

/// Pairs `(α, ρ)` entering the minimal-solution test.
fn slope_test_pairs(n: u64) -> Vec<WallParams> {
    wall_family(n)
        .into_iter()
        .filter(|wp| {
            if wp.rho < 1 {
                return true;
            }
            // ⌈2√(ρ(n-1))⌉ <= α  ⟺  4ρ(n-1) <= α^2
            let lower = (4 * wp.rho as u64 * (n - 1)).sqrt();
            let ceil = if lower * lower == 4 * wp.rho as u64 * (n - 1) {
                lower
            } else {
                lower + 1
            };
            ceil <= wp.alpha
        })
        .collect()
}

/// Congruent positive solutions below the cone bound satisfy `Y < w√rhs/2`,
/// so small `w` allows a plain scan; larger ones go through the reduction.
const SCAN_LIMIT: u64 = 200_000;

fn slope_checks(p: &HilbParams) -> Vec<SlopeCheck> {
    let PellSolution { x: z, y: w } = p.unit().expect("non-square radicand");
    let d = 4u32 * p.radicand();
    let modulus = BigInt::from(2 * (p.n - 1));
    let inside = |s: &PellSolution| &s.y * 2u32 * &z < &w * &s.x;
    let congruent = |x: &BigInt, alpha: u64| {
        let a = BigInt::from(alpha);
        (x - &a).mod_floor(&modulus).is_zero() || (x + &a).mod_floor(&modulus).is_zero()
    };
    let mut out = Vec::new();
    for wp in slope_test_pairs(p.n) {
        let rhs = BigInt::from(wp.rhs);
        if !rhs.is_positive() {
            out.push(SlopeCheck {
                source: wp,
                below_bound: None,
            });
            continue;
        }
        let y_max = (&w * &w * &rhs / 4u32).sqrt() + 1u32;
        let below = match (y_max.to_u64(), d.to_u128()) {
            (Some(y_max), Some(d)) if y_max <= SCAN_LIMIT && d < 1 << 60 => {
                let rhs = wp.rhs as u128;
                (1..=y_max as u128).find_map(|y| {
                    let v = rhs + d * y * y;
                    let x = v.sqrt();
                    let s = PellSolution::new(x, y);
                    (x * x == v && congruent(&s.x, wp.alpha) && inside(&s)).then_some(s)
                })
            }
            _ => {
                let eq = PellEquation::new(d.clone(), wp.rhs).expect("valid equation");
                let unit = fundamental_unit(&d).expect("non-square");
                let mut best: Option<PellSolution> = None;
                for class in classes_by_lmm(&eq).expect("non-square") {
                    let f = class.fundamental;
                    let mut g = if f.x.is_negative() { -f } else { f };
                    while !g.y.is_positive() {
                        g = g.compose(&unit, &d);
                    }
                    while inside(&g) {
                        if congruent(&g.x, wp.alpha) {
                            if best.as_ref().is_none_or(|b| g.x < b.x) {
                                best = Some(g.clone());
                            }
                            break;
                        }
                        g = g.compose(&unit, &d);
                    }
                }
                best
            }
        };
        out.push(SlopeCheck {
            source: wp,
            below_bound: below,
        });
    }
    out
}
