//! Parameter ranges and ordered parallel evaluation.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

/// Inclusive range parsed from `A:B` or a single `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub fn single(v: u64) -> Self {
        Span { lo: v, hi: v }
    }

    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("{v:?}: {e}"));
        let span = match s.split_once(':') {
            Some((a, b)) => Span {
                lo: parse(a)?,
                hi: parse(b)?,
            },
            None => Span::single(parse(s)?),
        };
        if span.lo > span.hi {
            return Err(format!("empty range {s}"));
        }
        Ok(span)
    }
}

/// A cell whose evaluation failed an internal check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFailure {
    pub n: u64,
    pub t: u64,
    pub message: String,
}

/// Evaluates `f` on every `(n, t)` in row-major order. Output order does not
/// depend on the thread count; panics inside `f` become failures.
pub fn run_grid<R, F>(ns: Span, ts: Span, f: F) -> Result<Vec<R>, CellFailure>
where
    R: Send,
    F: Fn(u64, u64) -> Result<R, String> + Sync,
{
    let cells: Vec<(u64, u64)> = ns.iter().flat_map(|n| ts.iter().map(move |t| (n, t))).collect();
    cells
        .into_par_iter()
        .map(|(n, t)| {
            let outcome = catch_unwind(AssertUnwindSafe(|| f(n, t))).unwrap_or_else(|e| {
                let message = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(message)
            });
            outcome.map_err(|message| CellFailure { n, t, message })
        })
        .collect()
}
