//! The decision procedure for `Bir(S^[n])`: group structure, action on the
//! transcendental lattice, the fixed axis `ν`, and biregularity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{distinct_prime_count, exact_sqrt, minus_one_is_square_mod, pm_one};
use crate::cones::{decompose, decompose_general};
use crate::nslattice::{bbf_square, reflection_fix_axis, DivisorClass, HilbParams};
use crate::pell::{fundamental_unit, negative_pell, solve_skew, PellSolution};
use crate::{Error, Obstruction, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Trivial,
    Z2,
    Z2xZ2,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Trivial => "trivial",
            Group::Z2 => "Z2",
            Group::Z2xZ2 => "Z2xZ2",
        })
    }
}

/// The label `(j, k)` with `z ≡ j (mod 2(n-1))` and `z ≡ k (mod 2t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseJk {
    /// `(1, -1)`: non-symplectic, invariant lattice `⟨2⟩`.
    PlusMinus,
    /// `(-1, -1)`: non-symplectic, invariant lattice `⟨2(n-1)⟩`.
    MinusMinus,
    /// `(1, 1)`: symplectic, coinvariant lattice `⟨-2(n-1)⟩`.
    PlusPlus,
}

impl CaseJk {
    pub fn pair(self) -> (i8, i8) {
        match self {
            CaseJk::PlusMinus => (1, -1),
            CaseJk::MinusMinus => (-1, -1),
            CaseJk::PlusPlus => (1, 1),
        }
    }

    pub fn from_pair(pair: (i8, i8)) -> Option<CaseJk> {
        match pair {
            (1, -1) => Some(CaseJk::PlusMinus),
            (-1, -1) => Some(CaseJk::MinusMinus),
            (1, 1) => Some(CaseJk::PlusPlus),
            _ => None,
        }
    }
}

impl fmt::Display for CaseJk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (j, k) = self.pair();
        write!(f, "({j},{k})")
    }
}

/// Invariant lattice `⟨d⟩` or coinvariant lattice `⟨d⟩` of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeDescriptor {
    Invariant(BigInt),
    Coinvariant(BigInt),
}

impl fmt::Display for LatticeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeDescriptor::Invariant(d) => write!(f, "⟨{d}⟩"),
            LatticeDescriptor::Coinvariant(d) => write!(f, "coinvariant ⟨{d}⟩"),
        }
    }
}

/// A non-natural birational involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub symplectic: bool,
    /// `+1` or `-1`, the action on the transcendental lattice.
    pub transcendental_action: i8,
    pub nu: DivisorClass,
    pub lattice: LatticeDescriptor,
    /// `1` when `ν^2 = 2`, `n-1` when `ν^2 = 2(n-1)`; absent if symplectic.
    pub ell: Option<u64>,
    /// `(a, b)` used to build `ν`.
    pub a: BigInt,
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirClassification {
    pub params: HilbParams,
    pub group: Group,
    pub aut_group: Group,
    pub case_jk: Option<CaseJk>,
    /// Non-natural generators; two for `Z2xZ2`, non-symplectic first.
    pub generators: Vec<Generator>,
    pub nu: Option<DivisorClass>,
    /// Chamber count of the movable cone, when its shape is known.
    pub chambers: Option<u64>,
    pub biregular: bool,
    pub regularizable: bool,
    pub not_hilbert_model: bool,
}

impl BirClassification {
    pub fn has_nonnatural(&self) -> bool {
        !self.generators.is_empty()
    }

    /// Symplectic flag of the single generator; absent for `Z2xZ2` or none.
    pub fn symplectic(&self) -> Option<bool> {
        match self.generators.as_slice() {
            [g] => Some(g.symplectic),
            _ => None,
        }
    }

    pub fn transcendental_action(&self) -> Option<i8> {
        match self.generators.as_slice() {
            [g] => Some(g.transcendental_action),
            _ => None,
        }
    }

    pub fn lattice(&self) -> Option<&LatticeDescriptor> {
        self.generators.first().map(|g| &g.lattice)
    }
}

/// `(j, k)` for `t >= 2`, absent when there is no non-trivial involution.
pub fn congruence_case(p: &HilbParams) -> Option<CaseJk> {
    if p.t < 2 || exact_sqrt(&p.radicand()).is_some() {
        return None;
    }
    let PellSolution { x: z, y: w } = p.unit().ok()?;
    if w.is_odd() {
        return None;
    }
    let j = pm_one(&z, &BigInt::from(2 * (p.n - 1)))?;
    let k = pm_one(&z, &BigInt::from(2 * p.t))?;
    if (j, k) == (-1, 1) {
        // forces (n-1)X^2 - tY^2 = 1, which rules out the standard movable cone
        assert!(
            matches!(solve_skew(p.n - 1, p.t, 1), Ok(Some(_))),
            "(n, t) = ({}, {}): label (-1,1) without a skew solution",
            p.n,
            p.t
        );
        return None;
    }
    CaseJk::from_pair((j, k))
}

fn generator_for(p: &HilbParams, case: CaseJk) -> Generator {
    let n1 = BigInt::from(p.n - 1);
    let t = BigInt::from(p.t);
    let (nu, lattice, ell, a, b) = match case {
        CaseJk::PlusMinus => {
            let PellSolution { x: a, y: b } = solve_skew(p.n - 1, p.t, -1)
                .expect("valid skew parameters")
                .expect("label (1,-1) implies a skew solution");
            let nu = DivisorClass::new(b.clone(), -a.clone());
            (nu, LatticeDescriptor::Invariant(BigInt::from(2)), Some(1), a, b)
        }
        CaseJk::MinusMinus => {
            let PellSolution { x: a, y: b } = negative_pell(&p.radicand())
                .expect("non-square radicand")
                .expect("label (-1,-1) implies a negative solution");
            let nu = DivisorClass::new(&n1 * &b, -a.clone());
            let lattice = LatticeDescriptor::Invariant(2u32 * &n1);
            (nu, lattice, Some(p.n - 1), a, b)
        }
        CaseJk::PlusPlus => {
            let PellSolution { x: b, y: a } =
                fundamental_unit(&p.radicand()).expect("non-square radicand");
            let nu = DivisorClass::new(b.clone(), -(&t * &a));
            let lattice = LatticeDescriptor::Coinvariant(-2i32 * &n1);
            (nu, lattice, None, a, b)
        }
    };
    let symplectic = case == CaseJk::PlusPlus;
    Generator {
        symplectic,
        transcendental_action: if symplectic { 1 } else { -1 },
        nu,
        lattice,
        ell,
        a,
        b,
    }
}

/// Classifies `Bir(S^[n])` for a very general K3 surface of degree `2t`.
pub fn classify(p: &HilbParams) -> BirClassification {
    let (group, case_jk, generators, chambers) = if p.t >= 2 {
        match congruence_case(p) {
            None => {
                let chambers = decompose_general(p).ok().map(|d| d.chamber_count);
                (Group::Trivial, None, Vec::new(), chambers)
            }
            Some(case) => {
                let g = generator_for(p, case);
                let chambers = decompose(p)
                    .expect("a non-trivial label implies the standard movable cone")
                    .chamber_count;
                (Group::Z2, Some(case), vec![g], Some(chambers))
            }
        }
    } else {
        classify_t1(p)
    };

    let nu = generators.first().map(|g| g.nu.clone());
    if let Some(nu) = &nu {
        let axis = reflection_fix_axis(p).expect("cone exists");
        assert_eq!(&axis, nu, "(n, t) = ({}, {}): ν off the fixed axis", p.n, p.t);
        for g in &generators {
            let sq = bbf_square(p, nu);
            let expected = match &g.lattice {
                LatticeDescriptor::Invariant(d) => d.clone(),
                LatticeDescriptor::Coinvariant(_) => BigInt::from(2 * p.t),
            };
            assert_eq!(sq, expected, "(n, t) = ({}, {}): ν^2 mismatch", p.n, p.t);
        }
    }

    let nonnatural = !generators.is_empty();
    let biregular = nonnatural && chambers == Some(1);
    let regularizable = nonnatural && chambers.is_some_and(|c| c % 2 == 1);
    let aut_group = if p.t == 1 || biregular {
        Group::Z2
    } else {
        Group::Trivial
    };
    BirClassification {
        params: *p,
        group,
        aut_group,
        case_jk,
        generators,
        nu,
        chambers,
        biregular,
        regularizable,
        not_hilbert_model: nonnatural && !biregular && regularizable,
    }
}

fn classify_t1(p: &HilbParams) -> (Group, Option<CaseJk>, Vec<Generator>, Option<u64>) {
    let n1 = BigInt::from(p.n - 1);
    let natural_chambers = || decompose_general(p).ok().map(|d| d.chamber_count);
    if exact_sqrt(&n1).is_some() {
        return (Group::Z2, None, Vec::new(), natural_chambers());
    }
    let PellSolution { x: a, y: b } = solve_skew(p.n - 1, 1, -1)
        .expect("valid skew parameters")
        .expect("(n-1)X^2 - Y^2 = -1 is solvable for non-square n-1");
    if pm_one(&b, &n1).is_some() {
        return (Group::Z2, None, Vec::new(), natural_chambers());
    }
    let nu = DivisorClass::new(b.clone(), -a.clone());
    let anti = Generator {
        symplectic: false,
        transcendental_action: -1,
        nu: nu.clone(),
        lattice: LatticeDescriptor::Invariant(BigInt::from(2)),
        ell: Some(1),
        a: a.clone(),
        b: b.clone(),
    };
    let symp = Generator {
        symplectic: true,
        transcendental_action: 1,
        nu,
        lattice: LatticeDescriptor::Coinvariant(-2i32 * &n1),
        ell: None,
        a,
        b,
    };
    let chambers = decompose(p)
        .expect("two non-natural generators imply the standard movable cone")
        .chamber_count;
    (Group::Z2xZ2, None, vec![anti, symp], Some(chambers))
}

/// The three families of degrees with a prescribed kind of involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `t = (n-1)k^2 + 1`.
    Inv2,
    /// `t = (n-1)k^2 + 2qk + (q^2+1)/(n-1)` with `q^2 ≡ -1 (mod n-1)`.
    Inv2N2 { q: u64 },
    /// `t = (n-1)k^2 + 2qk + h` with `q >= 3`, `h(n-1) = q^2 - 1`,
    /// `h ≢ 0 (mod q±1)`.
    Sympl { q: u64, h: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub t: u64,
    pub case: CaseJk,
}

pub fn family_t(kind: FamilyKind, n: u64, k: u64) -> Result<FamilyMember> {
    let bad = |why: String| Err(Error::ParameterViolation(why));
    if n < 2 {
        return bad(format!("n = {n} must be >= 2"));
    }
    if k < 1 {
        return bad(format!("k = {k} must be >= 1"));
    }
    let n1 = n - 1;
    match kind {
        FamilyKind::Inv2 => Ok(FamilyMember {
            t: n1 * k * k + 1,
            case: CaseJk::PlusMinus,
        }),
        FamilyKind::Inv2N2 { q } => {
            if q < 1 {
                return bad("q must be >= 1".into());
            }
            if (q * q + 1) % n1 != 0 {
                return bad(format!("q^2 = {} is not -1 mod {n1}", q * q));
            }
            // for n = 2 both labels coincide and (1,-1) is reported
            let case = if n == 2 {
                CaseJk::PlusMinus
            } else {
                CaseJk::MinusMinus
            };
            Ok(FamilyMember {
                t: n1 * k * k + 2 * q * k + (q * q + 1) / n1,
                case,
            })
        }
        FamilyKind::Sympl { q, h } => {
            if q < 3 {
                return bad(format!("q = {q} must be >= 3"));
            }
            if h * n1 != q * q - 1 {
                return bad(format!("h(n-1) = {} differs from q^2 - 1 = {}", h * n1, q * q - 1));
            }
            if h % (q - 1) == 0 || h % (q + 1) == 0 {
                return bad(format!("h = {h} is divisible by q-1 or q+1"));
            }
            Ok(FamilyMember {
                t: n1 * k * k + 2 * q * k + h,
                case: CaseJk::PlusPlus,
            })
        }
    }
}

/// Outcome of checking that `t = (n-1)k^2 + 1` gives a biregular involution
/// for all `k >= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub checked: usize,
    /// `(n, k, t)` where the involution is not biregular.
    pub counterexamples: Vec<(u64, u64, u64)>,
}

pub fn conjecture_check(n_max: u64, k_max: u64) -> ConjectureReport {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for n in 2..=n_max {
        for k in 3..=k_max {
            let t = (n - 1) * k * k + 1;
            checked += 1;
            let p = HilbParams { n, t };
            if !classify(&p).biregular {
                counterexamples.push((n, k, t));
            }
        }
    }
    ConjectureReport {
        checked,
        counterexamples,
    }
}

/// Polarization types `(d, γ)`: square `d`, divisibility `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarization {
    TwoOne,
    TwoTwo,
    /// `(2(n-1), n-1)`.
    Special,
}

/// Number of connected components of the moduli space of polarized
/// manifolds of `K3^[n]`-type with the given polarization type, or `None`
/// when the space is empty.
///
/// "−1 is a square mod n−1" is read as solvability of `x^2 ≡ -1`; with that
/// reading the branch `n ≡ 1 (mod 4)` never applies, since `4 | n-1`.
pub fn moduli_components(n: u64, pol: Polarization) -> Option<u64> {
    assert!(n >= 2, "moduli_components needs n >= 2");
    let pow2 = |e: u32| 1u64 << e;
    match pol {
        Polarization::TwoOne => Some(1),
        Polarization::TwoTwo => (n % 4 == 0).then_some(1),
        Polarization::Special => {
            if !minus_one_is_square_mod(n - 1) {
                return None;
            }
            Some(match n % 4 {
                0 | 2 => pow2(distinct_prime_count(n - 1) - 1),
                1 => pow2(distinct_prime_count((n - 1) / 4)),
                _ => pow2(distinct_prime_count((n - 1) / 2) - 1),
            })
        }
    }
}

/// Whether the components attached to `t1` and `t2` coincide: both carry a
/// biregular non-natural involution and `X^2 - t(n-1)Y^2 = -1` is solvable;
/// the answer is `a1 ≡ ±a2 (mod n-1)` for the minimal solutions.
pub fn same_component(n: u64, t1: u64, t2: u64) -> Result<bool> {
    let modulus = BigInt::from(n - 1);
    let residue = |t: u64| -> Result<BigInt> {
        let p = HilbParams::new(n, t)?;
        if t < 2 || !classify(&p).biregular {
            return Err(Error::NotApplicable(Obstruction::NotBiregular { t }));
        }
        let a = match negative_pell(&p.radicand())? {
            Some(s) => s.x,
            None => return Err(Error::NotApplicable(Obstruction::NoNegativeSolution { t })),
        };
        let r = a.mod_floor(&modulus);
        if n > 2 && r == BigInt::from(0) {
            return Err(Error::NotApplicable(Obstruction::DegenerateResidue { t }));
        }
        Ok(r)
    };
    let (a1, a2) = (residue(t1)?, residue(t2)?);
    Ok(a1 == a2 || (&a1 + &a2).mod_floor(&modulus) == BigInt::from(0))
}
