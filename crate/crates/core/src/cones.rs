//! Movable cone, interior walls and chamber counts.
//!
//! Walls are rays through `X·h - 2tY·δ` for positive solutions of
//! `X^2 - 4t(n-1)Y^2 = α^2 - 4ρ(n-1)` with `X ≡ ±α (mod 2(n-1))` that fall
//! strictly inside the movable cone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{divisors, exact_sqrt};
use crate::classify::{classify, BirClassification, CaseJk};
use crate::nslattice::{DivisorClass, HilbParams};
use crate::pell::{fundamental_unit, solve_skew, PellEquation, PellSolution};
use crate::{Error, Obstruction, Result};

/// One admissible pair `(α, ρ)` with `rhs = α^2 - 4ρ(n-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallParams {
    pub rho: i64,
    pub alpha: u64,
    pub rhs: i64,
}

impl WallParams {
    fn new(n: u64, rho: i64, alpha: u64) -> Self {
        let rhs = (alpha * alpha) as i64 - 4 * rho * (n as i64 - 1);
        WallParams { rho, alpha, rhs }
    }

    /// Pairs with `rhs <= 0` never give a wall inside the movable cone.
    pub fn is_inert(&self) -> bool {
        self.rhs <= 0
    }
}

/// All admissible `(α, ρ)` for `n`, rows `ρ = -1`, `ρ = 0`, then `ρ >= 1`.
pub fn wall_family(n: u64) -> Vec<WallParams> {
    assert!(n >= 2, "wall_family needs n >= 2");
    let mut out = Vec::new();
    for alpha in 1..n {
        out.push(WallParams::new(n, -1, alpha));
    }
    for alpha in 3..n {
        out.push(WallParams::new(n, 0, alpha));
    }
    let mut rho = 1i64;
    while 4 * rho < n as i64 - 1 {
        for alpha in (4 * rho as u64 + 1)..n {
            out.push(WallParams::new(n, rho, alpha));
        }
        rho += 1;
    }
    out
}

/// How the far extremal ray of the movable cone is determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeBoundary {
    /// `z·h - tw·δ` from the unit `(z, w)` with `z ≡ ±1 (mod n-1)`.
    Unit(PellSolution),
    /// `(n-1)x·h - ty·δ` from the smallest solution of `(n-1)X^2 - tY^2 = 1`.
    Skew(PellSolution),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovableCone {
    pub low: DivisorClass,
    pub high: DivisorClass,
    pub boundary: ConeBoundary,
}

impl MovableCone {
    /// Upper bound on `Y/X` for walls `X·h - 2tY·δ`, as `(num, den)`.
    fn slope_bound(&self, p: &HilbParams) -> (BigInt, BigInt) {
        match &self.boundary {
            ConeBoundary::Unit(u) => (u.y.clone(), 2u32 * &u.x),
            ConeBoundary::Skew(s) => (s.y.clone(), 2u32 * BigInt::from(p.n - 1) * &s.x),
        }
    }
}

fn square_check(p: &HilbParams) -> Result<()> {
    if exact_sqrt(&p.radicand()).is_some() {
        Err(Error::NotApplicable(Obstruction::SquareRadicand))
    } else {
        Ok(())
    }
}

fn unit_cone(p: &HilbParams) -> Result<MovableCone> {
    let u = p.unit()?;
    let high = DivisorClass::new(u.x.clone(), -(BigInt::from(p.t) * &u.y)).primitive();
    Ok(MovableCone {
        low: DivisorClass::h(),
        high,
        boundary: ConeBoundary::Unit(u),
    })
}

/// `(h, primitive z·h - tw·δ)`.
///
/// Fails when `t(n-1)` is a square or, for `n != 2`, when
/// `(n-1)X^2 - tY^2 = 1` is solvable.
pub fn movable_cone(p: &HilbParams) -> Result<(DivisorClass, DivisorClass)> {
    square_check(p)?;
    if p.n != 2 && solve_skew(p.n - 1, p.t, 1)?.is_some() {
        return Err(Error::NotApplicable(Obstruction::SkewEquationSolvable));
    }
    let cone = unit_cone(p)?;
    Ok((cone.low, cone.high))
}

/// The movable cone in either non-square shape: bounded by the unit ray, or
/// by the ray orthogonal to the `(-2)`-class when the skew equation with
/// right side `1` is solvable.
pub fn movable_cone_general(p: &HilbParams) -> Result<MovableCone> {
    square_check(p)?;
    if p.n != 2 {
        if let Some(s) = solve_skew(p.n - 1, p.t, 1)? {
            let high = DivisorClass::new(
                BigInt::from(p.n - 1) * &s.x,
                -(BigInt::from(p.t) * &s.y),
            )
            .primitive();
            return Ok(MovableCone {
                low: DivisorClass::h(),
                high,
                boundary: ConeBoundary::Skew(s),
            });
        }
    }
    unit_cone(p)
}

/// An interior wall with the first `(α, ρ, X, Y)` that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub ray: DivisorClass,
    pub source: WallParams,
    pub witness: PellSolution,
    /// Further `(α, ρ)` producing the same ray.
    pub coincident: Vec<(WallParams, PellSolution)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub params: HilbParams,
    pub cone: MovableCone,
    /// Ordered by increasing `Y/X`, i.e. moving away from `h`.
    pub walls: Vec<Wall>,
    pub chamber_count: u64,
}

impl ChamberDecomposition {
    pub fn extremal_low(&self) -> &DivisorClass {
        &self.cone.low
    }

    pub fn extremal_high(&self) -> &DivisorClass {
        &self.cone.high
    }
}

/// Walls of the standard movable cone `⟨h, zh - twδ⟩`.
pub fn decompose(p: &HilbParams) -> Result<ChamberDecomposition> {
    movable_cone(p)?;
    decompose_in(p, unit_cone(p)?)
}

/// Like [`decompose`], also covering the cone bounded by the skew solution.
pub fn decompose_general(p: &HilbParams) -> Result<ChamberDecomposition> {
    decompose_in(p, movable_cone_general(p)?)
}

fn decompose_in(p: &HilbParams, cone: MovableCone) -> Result<ChamberDecomposition> {
    let d = 4u32 * p.radicand();
    let unit = fundamental_unit(&d)?;
    let (bn, bd) = cone.slope_bound(p);
    let modulus = BigInt::from(2 * (p.n - 1));
    let two_t = BigInt::from(2 * p.t);

    // ray -> (slope witness, wall)
    let mut found: BTreeMap<DivisorClass, Wall> = BTreeMap::new();
    for wp in wall_family(p.n) {
        if wp.is_inert() {
            continue;
        }
        let eq = PellEquation::new(d.clone(), wp.rhs)?;
        let alpha = BigInt::from(wp.alpha);
        for class in eq.fundamental_solutions()? {
            let f = class.fundamental;
            let mut g = if f.x.is_negative() { -f } else { f };
            while g.y.is_negative() {
                g = g.compose(&unit, &d);
            }
            // inside the cone iff Y/X < bn/bd
            while &g.y * &bd < &bn * &g.x {
                let congruent = (&g.x - &alpha).mod_floor(&modulus).is_zero()
                    || (&g.x + &alpha).mod_floor(&modulus).is_zero();
                if g.y.is_positive() && congruent {
                    let ray = DivisorClass::new(g.x.clone(), -(&two_t * &g.y)).primitive();
                    found
                        .entry(ray.clone())
                        .and_modify(|w| w.coincident.push((wp, g.clone())))
                        .or_insert_with(|| Wall {
                            ray,
                            source: wp,
                            witness: g.clone(),
                            coincident: Vec::new(),
                        });
                }
                g = g.compose(&unit, &d);
            }
        }
    }

    let mut walls: Vec<Wall> = found.into_values().collect();
    // slope of x·h + y·δ is -y/x; compare by cross-multiplication
    walls.sort_by(|a, b| ((-&a.ray.y) * &b.ray.x).cmp(&((-&b.ray.y) * &a.ray.x)));
    let chamber_count = walls.len() as u64 + 1;
    Ok(ChamberDecomposition {
        params: *p,
        cone,
        walls,
        chamber_count,
    })
}

/// The shortcut argument for `t = 1` or a symplectic generator: with `(b, a)`
/// the minimal unit of `t(n-1)`, `(X, Y) = (bα, aα/2)` solves the `ρ = 0`
/// equation for an even `α` and lies on the axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutWitness {
    pub alpha: u64,
    pub x: BigInt,
    pub y: BigInt,
}

/// A solution on the axis of a non-symplectic generator:
/// `4tℓY^2 = (α^2 - 4ρ(n-1))·a^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisWitness {
    pub ell: u64,
    pub a: BigInt,
    pub source: WallParams,
    pub x: BigInt,
    pub y: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularityCertificate {
    pub chambers: Option<u64>,
    /// Present when `t = 1` with two non-natural generators, or symplectic.
    pub shortcut: Option<ShortcutWitness>,
    /// Whether the axis-witness search applies (`t >= 2`, non-symplectic).
    pub axis_search: bool,
    pub axis_witness: Option<AxisWitness>,
    /// All applicable paths gave the same answer.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irregularity {
    pub irregular: bool,
    pub certificate: IrregularityCertificate,
}

/// Whether `t` is `n`-irregular: a non-natural birational automorphism exists
/// and the movable cone has an even number of chambers.
pub fn is_n_irregular(p: &HilbParams) -> Irregularity {
    irregularity_of(&classify(p))
}

pub(crate) fn irregularity_of(c: &BirClassification) -> Irregularity {
    let p = &c.params;
    let Some(generator) = c.generators.first() else {
        return Irregularity {
            irregular: false,
            certificate: IrregularityCertificate {
                chambers: c.chambers,
                shortcut: None,
                axis_search: false,
                axis_witness: None,
                consistent: true,
            },
        };
    };
    let chambers = c.chambers.expect("a non-natural generator comes with a cone");
    let by_parity = chambers % 2 == 0;
    let mut consistent = true;

    let shortcut_applies = p.t == 1 || c.case_jk == Some(CaseJk::PlusPlus);
    let shortcut = if shortcut_applies {
        let w = shortcut_witness(p);
        consistent &= w.is_some() && by_parity;
        w
    } else {
        None
    };

    let axis_search = p.t >= 2 && !generator.symplectic;
    let axis_witness = if axis_search {
        let ell = generator.ell.expect("non-symplectic generators carry ℓ");
        let w = axis_witness(p, ell, &generator.a);
        consistent &= w.is_some() == by_parity;
        w
    } else {
        None
    };

    Irregularity {
        irregular: by_parity,
        certificate: IrregularityCertificate {
            chambers: Some(chambers),
            shortcut,
            axis_search,
            axis_witness,
            consistent,
        },
    }
}

fn shortcut_witness(p: &HilbParams) -> Option<ShortcutWitness> {
    let r = p.radicand();
    let PellSolution { x: b, y: a } = fundamental_unit(&r).ok()?;
    let n1 = BigInt::from(p.n - 1);
    let c = (&b - 1u32).gcd(&n1).max((&b + 1u32).gcd(&n1));
    if c < BigInt::from(2) {
        return None;
    }
    let alpha_big = (2u32 * &n1 / &c).max(BigInt::from(4));
    let alpha: u64 = (&alpha_big).try_into().ok()?;
    if alpha % 2 != 0 || alpha < 3 || alpha > p.n - 1 {
        return None;
    }
    let x = &b * &alpha_big;
    let y = &a * (&alpha_big / 2u32);
    let lhs = &x * &x - 4u32 * &r * &y * &y;
    let modulus = 2u32 * &n1;
    let congruent = (&x - &alpha_big).mod_floor(&modulus).is_zero()
        || (&x + &alpha_big).mod_floor(&modulus).is_zero();
    (lhs == &alpha_big * &alpha_big && congruent).then_some(ShortcutWitness { alpha, x, y })
}

fn axis_witness(p: &HilbParams, ell: u64, a: &BigInt) -> Option<AxisWitness> {
    let d = 4u32 * p.radicand();
    let modulus = BigInt::from(2 * (p.n - 1));
    let denom = BigInt::from(4 * p.t * ell);
    for wp in wall_family(p.n) {
        if wp.is_inert() {
            continue;
        }
        let rhs = BigInt::from(wp.rhs);
        let num = &rhs * a * a;
        if !num.mod_floor(&denom).is_zero() {
            continue;
        }
        let Some(y) = exact_sqrt(&(num / &denom)) else {
            continue;
        };
        let Some(x) = exact_sqrt(&(&rhs + &d * &y * &y)) else {
            continue;
        };
        let alpha = BigInt::from(wp.alpha);
        let congruent = (&x - &alpha).mod_floor(&modulus).is_zero()
            || (&x + &alpha).mod_floor(&modulus).is_zero();
        if congruent && y.is_positive() {
            return Some(AxisWitness {
                ell,
                a: a.clone(),
                source: wp,
                x,
                y,
            });
        }
    }
    None
}

/// Which scan produced an irregular value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScanMode {
    /// Candidates from divisors of `α^2 - 4ρ(n-1)`, non-symplectic generators only.
    NonsymplecticFinite,
    /// Additionally every `t <= t_max`, catching the infinite families.
    FullRange { t_max: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularValue {
    pub t: u64,
    /// `1` or `n-1` for non-symplectic generators, absent for symplectic ones.
    pub ell: Option<u64>,
    pub symplectic: bool,
}

/// Finite list of candidates `t <= (n-1)(n+3)` with `α^2 - 4ρ(n-1) = tℓr^2`.
pub fn irregular_candidates(n: u64) -> Vec<u64> {
    let limit = (n - 1) * (n + 3);
    let mut ells = vec![1];
    if n > 2 {
        ells.push(n - 1);
    }
    let mut out = Vec::new();
    for wp in wall_family(n) {
        if wp.is_inert() {
            continue;
        }
        let rhs = wp.rhs as u64;
        for &ell in &ells {
            if rhs % ell != 0 {
                continue;
            }
            for t in divisors(rhs / ell) {
                let q = rhs / ell / t;
                if t <= limit && exact_sqrt(&BigInt::from(q)).is_some() {
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn confirm(n: u64, t: u64, want_symplectic: bool) -> Option<IrregularValue> {
    let p = HilbParams::new(n, t).ok()?;
    let c = classify(&p);
    let generator = c.generators.iter().find(|g| g.symplectic == want_symplectic)?;
    irregularity_of(&c).irregular.then_some(IrregularValue {
        t,
        ell: generator.ell,
        symplectic: want_symplectic,
    })
}

/// `n`-irregular values of `t`.
///
/// The finite mode lists every `t` whose non-symplectic generator is never
/// biregular; the full mode adds symplectic values up to `t_max`.
pub fn scan_irregular(n: u64, mode: ScanMode) -> Vec<IrregularValue> {
    let mut out: Vec<IrregularValue> = irregular_candidates(n)
        .into_iter()
        .filter_map(|t| confirm(n, t, false))
        .collect();
    if let ScanMode::FullRange { t_max } = mode {
        for t in 1..=t_max {
            if let Some(v) = confirm(n, t, true) {
                out.push(v);
            }
        }
    }
    out.sort_by_key(|v| (v.t, v.symplectic));
    out
}

/// Default upper end of the full-range scan, `10(n-1)(n+3)`.
pub fn default_t_max(n: u64) -> u64 {
    10 * (n - 1) * (n + 3)
}

/// Class counts of `X^2 - 8tY^2 = 9` and `= 12` and the resulting chamber
/// count of `S^[3]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct N3Counts {
    pub count9: usize,
    pub count12: usize,
    pub chambers: usize,
}

pub fn n3_class_counts(t: u64) -> Result<N3Counts> {
    let fail = |why| Err(Error::NotApplicable(Obstruction::N3Hypotheses(why)));
    if t < 2 {
        return fail("t < 2");
    }
    let two_t = BigInt::from(2 * t);
    if exact_sqrt(&two_t).is_some() {
        return fail("2t is a square");
    }
    if solve_skew(2, t, 1)?.is_some() {
        return fail("2X^2 - tY^2 = 1 is solvable");
    }
    if fundamental_unit(&two_t)?.y.is_odd() {
        return fail("the unit of 2t has odd Y");
    }
    let r = BigInt::from(8 * t);
    let count9 = PellEquation::new(r.clone(), 9)?.fundamental_solutions()?.len();
    let count12 = PellEquation::new(r, 12)?.fundamental_solutions()?.len();
    Ok(N3Counts {
        count9,
        count12,
        chambers: count9 + count12,
    })
}

/// The possible `(count9, count12, chambers)` values for `t mod 18`.
pub fn n3_possibilities(residue: u64) -> (&'static [usize], &'static [usize], &'static [usize]) {
    match residue % 18 {
        0 | 9 => (&[1, 2, 3], &[0], &[1, 2, 3]),
        3 => (&[1], &[0, 1], &[1, 2]),
        5 | 11 | 17 => (&[1, 3], &[0, 2], &[1, 3, 5]),
        2 | 8 | 14 => (&[1, 3], &[0], &[1, 3]),
        _ => (&[1], &[0], &[1]),
    }
}
