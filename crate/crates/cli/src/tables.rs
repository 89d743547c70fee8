//! The three tables regenerated from scratch.

use std::collections::BTreeSet;

use hilbert_bir::classify::{classify, Group};
use hilbert_bir::cones::{n3_class_counts, n3_possibilities, scan_irregular, ScanMode};
use hilbert_bir::HilbParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::Row;

fn list(v: &[u64]) -> String {
    if v.is_empty() {
        "/".into()
    } else {
        v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `n`-irregular values split by `ν^2 = 2` and `ν^2 = 2(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: u64,
    pub nu_square_2: Vec<u64>,
    pub nu_square_2n_minus_2: Vec<u64>,
}

impl Row for Table1Row {
    fn columns() -> &'static [&'static str] {
        &["n", "n-irregular t with ν²=2", "n-irregular t with ν²=2(n-1)"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            list(&self.nu_square_2),
            list(&self.nu_square_2n_minus_2),
        ]
    }
}

pub fn table1_row(n: u64) -> Table1Row {
    let values = scan_irregular(n, ScanMode::NonsymplecticFinite);
    let pick = |ell: u64| {
        values
            .iter()
            .filter(|v| v.ell == Some(ell))
            .map(|v| v.t)
            .collect::<Vec<_>>()
    };
    Table1Row {
        n,
        nu_square_2: pick(1),
        nu_square_2n_minus_2: pick(n - 1),
    }
}

pub fn table1(n_max: u64) -> Vec<Table1Row> {
    (2..=n_max).into_par_iter().map(table1_row).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub t: u64,
    pub d: u64,
    pub aut: String,
    pub bir: String,
}

fn group_md(g: &str) -> &str {
    match g {
        "trivial" => "{id}",
        "Z2" => "Z/2Z",
        _ => "Z/2Z x Z/2Z",
    }
}

impl Row for Table2Row {
    fn columns() -> &'static [&'static str] {
        &["t", "d", "Aut(S^[3])", "Bir(S^[3])"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.t.to_string(),
            self.d.to_string(),
            group_md(&self.aut).into(),
            group_md(&self.bir).into(),
        ]
    }
}

/// Rows `t <= t_max` of `n = 3` with non-trivial `Bir`.
pub fn table2(t_max: u64) -> Vec<Table2Row> {
    let rows: Vec<Option<Table2Row>> = (1..=t_max)
        .into_par_iter()
        .map(|t| {
            let c = classify(&HilbParams::new(3, t).expect("t >= 1"));
            (c.group != Group::Trivial).then(|| Table2Row {
                t,
                d: c.chambers.expect("non-trivial Bir comes with a cone"),
                aut: c.aut_group.to_string(),
                bir: c.group.to_string(),
            })
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Observed `(count9, count12, chambers)` for one residue of `t mod 18`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop54Row {
    pub residue: u64,
    pub cases: usize,
    pub observed: Vec<(usize, usize, usize)>,
    pub allowed_count9: Vec<usize>,
    pub allowed_count12: Vec<usize>,
    pub allowed_chambers: Vec<usize>,
    pub within: bool,
}

impl Row for Prop54Row {
    fn columns() -> &'static [&'static str] {
        &["t mod 18", "cases", "observed (9, 12, d)", "allowed 9", "allowed 12", "allowed d", "within"]
    }

    fn cells(&self) -> Vec<String> {
        let sizes = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let observed: Vec<String> = self
            .observed
            .iter()
            .map(|(a, b, c)| format!("({a},{b},{c})"))
            .collect();
        vec![
            self.residue.to_string(),
            self.cases.to_string(),
            observed.join(" "),
            sizes(&self.allowed_count9),
            sizes(&self.allowed_count12),
            sizes(&self.allowed_chambers),
            self.within.to_string(),
        ]
    }
}

/// Buckets the applicable `t` in `lo..=hi` by `t mod 18`.
pub fn prop54(lo: u64, hi: u64) -> Vec<Prop54Row> {
    let counts: Vec<(u64, (usize, usize, usize))> = (lo.max(2)..=hi)
        .into_par_iter()
        .filter_map(|t| {
            n3_class_counts(t)
                .ok()
                .map(|c| (t, (c.count9, c.count12, c.chambers)))
        })
        .collect();
    (0..18)
        .map(|residue| {
            let observed: BTreeSet<_> = counts
                .iter()
                .filter(|(t, _)| t % 18 == residue)
                .map(|&(_, c)| c)
                .collect();
            let cases = counts.iter().filter(|(t, _)| t % 18 == residue).count();
            let (a9, a12, ad) = n3_possibilities(residue);
            let within = observed
                .iter()
                .all(|(c9, c12, d)| a9.contains(c9) && a12.contains(c12) && ad.contains(d));
            Prop54Row {
                residue,
                cases,
                observed: observed.into_iter().collect(),
                allowed_count9: a9.to_vec(),
                allowed_count12: a12.to_vec(),
                allowed_chambers: ad.to_vec(),
                within,
            }
        })
        .collect()
}
