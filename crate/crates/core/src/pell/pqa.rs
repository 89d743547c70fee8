//! The PQa recurrence for continued fractions of quadratic irrationals
//! `(P0 + √D) / Q0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Expansion of `(P0 + √D) / Q0`, with `Q0 | D - P0^2` and `D` non-square.
///
/// After each [`Pqa::step`] the convergent numerators and denominators
/// `(G_i, B_i)` are returned and `(p, q)` hold `(P_{i+1}, Q_{i+1})`. They
/// satisfy `G_i^2 - D·B_i^2 = (-1)^(i+1) · Q_{i+1} · Q0`.
pub(crate) struct Pqa {
    d: BigInt,
    sqrt_d: BigInt,
    pub(crate) p: BigInt,
    pub(crate) q: BigInt,
    g: (BigInt, BigInt),
    b: (BigInt, BigInt),
    pub(crate) index: usize,
}

impl Pqa {
    pub(crate) fn new(p0: BigInt, q0: BigInt, d: BigInt) -> Self {
        debug_assert!(!q0.is_zero());
        debug_assert!((&d - &p0 * &p0).mod_floor(&q0).is_zero());
        let sqrt_d = d.sqrt();
        Pqa {
            g: (-&p0, q0.clone()),
            b: (BigInt::one(), BigInt::zero()),
            d,
            sqrt_d,
            p: p0,
            q: q0,
            index: 0,
        }
    }

    fn partial_quotient(&self) -> BigInt {
        let num = &self.p + &self.sqrt_d;
        if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -(num.div_floor(&-&self.q) + 1u32)
        }
    }

    /// Computes term `i = self.index` and advances.
    pub(crate) fn step(&mut self) -> (BigInt, BigInt) {
        let a = self.partial_quotient();
        let g = &a * &self.g.1 + &self.g.0;
        let b = &a * &self.b.1 + &self.b.0;
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.g = (std::mem::take(&mut self.g.1), g.clone());
        self.b = (std::mem::take(&mut self.b.1), b.clone());
        self.p = p_next;
        self.q = q_next;
        self.index += 1;
        (g, b)
    }
}

/// Period data for the regular continued fraction of `√d`.
pub(crate) struct SqrtPeriod {
    pub(crate) length: usize,
    /// `(p_{L-1}, q_{L-1})`, of norm `(-1)^L`.
    pub(crate) last_convergent: (BigInt, BigInt),
}

pub(crate) fn sqrt_period(d: &BigInt) -> SqrtPeriod {
    let mut pqa = Pqa::new(BigInt::zero(), BigInt::one(), d.clone());
    loop {
        let conv = pqa.step();
        if pqa.q.is_one() {
            return SqrtPeriod {
                length: pqa.index,
                last_convergent: conv,
            };
        }
    }
}
