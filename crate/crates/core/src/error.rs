use std::fmt;

use num_bigint::BigInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("radicand {0} is a perfect square")]
    SquareRadicand(BigInt),
    #[error("not applicable: {0}")]
    NotApplicable(Obstruction),
    #[error("divisibility of the zero class is undefined")]
    ZeroClass,
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
}

/// The precondition that made an operation inapplicable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `t(n-1)` is a perfect square.
    SquareRadicand,
    /// `(n-1)X^2 - tY^2 = 1` has an integer solution (only relevant for `n != 2`).
    SkewEquationSolvable,
    /// The hypotheses on `X^2 - 8tY^2 = 9, 12` for `n = 3` fail.
    N3Hypotheses(&'static str),
    /// `t` does not carry a biregular non-natural automorphism.
    NotBiregular { t: u64 },
    /// `X^2 - t(n-1)Y^2 = -1` has no solution.
    NoNegativeSolution { t: u64 },
    /// The minimal solution has `a ≡ 0 (mod n-1)`.
    DegenerateResidue { t: u64 },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::SquareRadicand => write!(f, "t(n-1) is a perfect square"),
            Obstruction::SkewEquationSolvable => {
                write!(f, "(n-1)X^2 - tY^2 = 1 has integer solutions")
            }
            Obstruction::N3Hypotheses(why) => write!(f, "n = 3 hypotheses fail: {why}"),
            Obstruction::NotBiregular { t } => {
                write!(f, "t = {t} has no biregular non-natural automorphism")
            }
            Obstruction::NoNegativeSolution { t } => {
                write!(f, "X^2 - t(n-1)Y^2 = -1 is not solvable for t = {t}")
            }
            Obstruction::DegenerateResidue { t } => {
                write!(f, "minimal solution for t = {t} has a ≡ 0 (mod n-1)")
            }
        }
    }
}
