//! Exact arithmetic for birational involutions of Hilbert schemes of points
//! on K3 surfaces of Picard rank one.
//!
//! A K3 surface `S` with `Pic(S) = ZH`, `H^2 = 2t` gives the Hilbert scheme
//! `S^[n]` whose Néron–Severi lattice is spanned by `h` and `δ`, with
//! `h^2 = 2t`, `δ^2 = -2(n-1)` and `h·δ = 0`. Everything in this crate reduces
//! questions about `Bir(S^[n])` to generalized Pell equations and congruences:
//!
//! * [`pell`] solves `X^2 - rY^2 = m` exactly, including equivalence classes.
//! * [`nslattice`] handles classes `x·h + y·δ` and the involution matrix.
//! * [`cones`] enumerates the walls inside the movable cone.
//! * [`classify`] decides the group structure and related flags.
//! * [`ambiguity`] counts Fourier–Mukai partners and decides ambiguity.

pub mod ambiguity;
mod arith;
pub mod classify;
pub mod cones;
mod error;
pub mod nslattice;
pub mod pell;

pub use error::{Error, Obstruction, Result};
pub use nslattice::{DivisorClass, HilbParams};
pub use pell::{PellEquation, PellSolution, SolutionClass};
