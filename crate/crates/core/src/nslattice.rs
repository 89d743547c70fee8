//! The rank-two Néron–Severi lattice of `S^[n]`.
//!
//! Classes are stored as `x·h + y·δ`. The involution matrix is quoted in the
//! basis `{h, -δ}`, where the same class has coordinates `(x, -y)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::pell::{min_unit_with_congruence, PellSolution};
use crate::{Error, Result};

/// `(n, t)`: `n` points on a K3 surface with `H^2 = 2t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbParams {
    pub n: u64,
    pub t: u64,
}

impl HilbParams {
    pub fn new(n: u64, t: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterViolation(format!("n = {n} must be >= 2")));
        }
        if t < 1 {
            return Err(Error::ParameterViolation(format!("t = {t} must be >= 1")));
        }
        Ok(HilbParams { n, t })
    }

    /// `t(n-1)`.
    pub fn radicand(&self) -> BigInt {
        BigInt::from(self.t) * BigInt::from(self.n - 1)
    }

    /// `(z, w)`, the smallest unit with `z ≡ ±1 (mod n-1)`.
    pub fn unit(&self) -> Result<PellSolution> {
        min_unit_with_congruence(self.n, self.t)
    }
}

/// The class `x·h + y·δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub x: BigInt,
    pub y: BigInt,
}

impl DivisorClass {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        DivisorClass {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn h() -> Self {
        DivisorClass::new(1, 0)
    }

    pub fn delta() -> Self {
        DivisorClass::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Divides out the coordinate gcd and makes the `h`-coefficient positive
    /// (or the `δ`-coefficient, for multiples of `δ`).
    pub fn primitive(&self) -> DivisorClass {
        let g = self.x.gcd(&self.y);
        if g.is_zero() {
            return self.clone();
        }
        let (mut x, mut y) = (&self.x / &g, &self.y / &g);
        if x.is_negative() || (x.is_zero() && y.is_negative()) {
            x = -x;
            y = -y;
        }
        DivisorClass { x, y }
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y) == BigInt::from(1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = |c: &BigInt| {
            if c.abs() == BigInt::from(1) {
                String::new()
            } else {
                c.abs().to_string()
            }
        };
        match (self.x.is_zero(), self.y.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}{}h", if self.x.is_negative() { "-" } else { "" }, coef(&self.x)),
            (true, false) => write!(f, "{}{}δ", if self.y.is_negative() { "-" } else { "" }, coef(&self.y)),
            (false, false) => write!(
                f,
                "{}{}h {} {}δ",
                if self.x.is_negative() { "-" } else { "" },
                coef(&self.x),
                if self.y.is_negative() { "-" } else { "+" },
                coef(&self.y)
            ),
        }
    }
}

/// `2t·x^2 - 2(n-1)·y^2`.
pub fn bbf_square(p: &HilbParams, c: &DivisorClass) -> BigInt {
    2 * BigInt::from(p.t) * &c.x * &c.x - 2 * BigInt::from(p.n - 1) * &c.y * &c.y
}

/// `gcd(x, 2(n-1)|y|)`, the positive generator of the pairings of `c`.
pub fn divisibility(p: &HilbParams, c: &DivisorClass) -> Result<BigInt> {
    if c.is_zero() {
        return Err(Error::ZeroClass);
    }
    Ok(c.x.gcd(&(2 * BigInt::from(p.n - 1) * c.y.abs())))
}

/// A 2×2 integer matrix acting on coordinates in the basis `{h, -δ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix(pub [[BigInt; 2]; 2]);

impl ActionMatrix {
    pub fn det(&self) -> BigInt {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn mul(&self, other: &ActionMatrix) -> ActionMatrix {
        let (a, b) = (&self.0, &other.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        ActionMatrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn is_identity(&self) -> bool {
        let m = &self.0;
        m[0][0] == BigInt::from(1)
            && m[1][1] == BigInt::from(1)
            && m[0][1].is_zero()
            && m[1][0].is_zero()
    }

    /// Image of a class `x·h + y·δ`.
    pub fn apply(&self, c: &DivisorClass) -> DivisorClass {
        let m = &self.0;
        let (u, v) = (c.x.clone(), -&c.y);
        let u2 = &m[0][0] * &u + &m[0][1] * &v;
        let v2 = &m[1][0] * &u + &m[1][1] * &v;
        DivisorClass { x: u2, y: -v2 }
    }
}

/// `[[z, -(n-1)w], [tw, -z]]` for the unit `(z, w)` of [`HilbParams::unit`].
pub fn involution_matrix(p: &HilbParams) -> Result<ActionMatrix> {
    let PellSolution { x: z, y: w } = p.unit()?;
    let m = ActionMatrix([
        [z.clone(), -BigInt::from(p.n - 1) * &w],
        [BigInt::from(p.t) * &w, -z],
    ]);
    debug_assert!(m.mul(&m).is_identity());
    Ok(m)
}

/// Primitive generator with positive `h`-coefficient of the line fixed by the
/// involution matrix, the primitive part of `(n-1)w·h - (z-1)·δ`.
pub fn reflection_fix_axis(p: &HilbParams) -> Result<DivisorClass> {
    let PellSolution { x: z, y: w } = p.unit()?;
    let axis = DivisorClass::new(BigInt::from(p.n - 1) * w, -(z - 1u32)).primitive();
    Ok(axis)
}
