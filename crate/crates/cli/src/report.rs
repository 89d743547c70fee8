//! Serializable views of the library results.

use std::io::{self, Write};

use hilbert_bir::ambiguity::{ambiguity, ambiguity_verified, AmbiguityReport};
use hilbert_bir::classify::{classify, BirClassification};
use hilbert_bir::cones::{decompose_general, is_n_irregular, ConeBoundary, Irregularity};
use hilbert_bir::nslattice::involution_matrix;
use hilbert_bir::pell::fundamental_unit;
use hilbert_bir::{DivisorClass, HilbParams, PellEquation, PellSolution, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::json::JsonInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// A record that can be laid out as one row of a CSV or markdown table.
pub trait Row: Serialize {
    fn columns() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// Writes `rows` as a JSON array, CSV with a header, or a markdown table.
/// A single JSON record is written as an object.
pub fn emit<R: Row>(out: &mut dyn Write, format: Format, rows: &[R]) -> io::Result<()> {
    match format {
        Format::Json => {
            if let [single] = rows {
                serde_json::to_writer_pretty(&mut *out, single)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, rows)?;
            }
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::columns())?;
            for r in rows {
                w.write_record(r.cells())?;
            }
            w.flush()
        }
        Format::Md => {
            let cols = R::columns();
            writeln!(out, "| {} |", cols.join(" | "))?;
            writeln!(out, "|{}", "---|".repeat(cols.len()))?;
            for r in rows {
                writeln!(out, "| {} |", r.cells().join(" | "))?;
            }
            Ok(())
        }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

fn pair(c: &DivisorClass) -> [JsonInt; 2] {
    [(&c.x).into(), (&c.y).into()]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub alpha: u64,
    pub rho: i64,
    #[serde(rename = "X")]
    pub x: JsonInt,
    #[serde(rename = "Y")]
    pub y: JsonInt,
    pub ray: [JsonInt; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub symplectic: bool,
    pub transcendental_action: i8,
    pub nu: [JsonInt; 2],
    pub invariant: String,
    pub ell: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub shortcut: Option<[JsonInt; 3]>,
    pub axis_search: bool,
    /// `(α, ρ, X, Y)` of the axis solution.
    pub axis_witness: Option<(u64, i64, JsonInt, JsonInt)>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub n: u64,
    pub t: u64,
    pub group: String,
    pub aut: String,
    pub case_jk: Option<String>,
    pub symplectic: Option<bool>,
    pub nu: Option<[JsonInt; 2]>,
    pub invariant: Option<String>,
    pub chambers: Option<u64>,
    pub walls: Vec<WallJson>,
    pub irregular: Option<bool>,
    pub biregular: bool,
    pub regularizable: bool,
    pub not_hilbert_model: bool,
    pub generators: Vec<GeneratorJson>,
    pub certificate: Option<CertificateJson>,
}

impl ClassifyJson {
    pub fn new(c: &BirClassification, irr: &Irregularity) -> Result<Self> {
        let p = c.params;
        let walls = match decompose_general(&p) {
            Ok(d) => d.walls.iter().map(wall_json).collect(),
            Err(_) => Vec::new(),
        };
        let generators = c
            .generators
            .iter()
            .map(|g| GeneratorJson {
                symplectic: g.symplectic,
                transcendental_action: g.transcendental_action,
                nu: pair(&g.nu),
                invariant: g.lattice.to_string(),
                ell: g.ell,
            })
            .collect();
        let nonnatural = c.has_nonnatural();
        let cert = &irr.certificate;
        Ok(ClassifyJson {
            n: p.n,
            t: p.t,
            group: c.group.to_string(),
            aut: c.aut_group.to_string(),
            case_jk: c.case_jk.map(|k| k.to_string()),
            symplectic: c.symplectic(),
            nu: c.nu.as_ref().map(pair),
            invariant: c.lattice().map(ToString::to_string),
            chambers: c.chambers,
            walls,
            irregular: nonnatural.then_some(irr.irregular),
            biregular: c.biregular,
            regularizable: c.regularizable,
            not_hilbert_model: c.not_hilbert_model,
            generators,
            certificate: nonnatural.then(|| CertificateJson {
                shortcut: cert
                    .shortcut
                    .as_ref()
                    .map(|s| [BigInt::from(s.alpha).into(), (&s.x).into(), (&s.y).into()]),
                axis_search: cert.axis_search,
                axis_witness: cert
                    .axis_witness
                    .as_ref()
                    .map(|w| (w.source.alpha, w.source.rho, (&w.x).into(), (&w.y).into())),
                consistent: cert.consistent,
            }),
        })
    }
}

fn wall_json(w: &hilbert_bir::cones::Wall) -> WallJson {
    WallJson {
        alpha: w.source.alpha,
        rho: w.source.rho,
        x: (&w.witness.x).into(),
        y: (&w.witness.y).into(),
        ray: pair(&w.ray),
    }
}

impl Row for ClassifyJson {
    fn columns() -> &'static [&'static str] {
        &[
            "n",
            "t",
            "group",
            "aut",
            "case_jk",
            "symplectic",
            "nu_h",
            "nu_delta",
            "invariant",
            "chambers",
            "walls",
            "irregular",
            "biregular",
            "regularizable",
            "not_hilbert_model",
        ]
    }

    fn cells(&self) -> Vec<String> {
        let (nx, ny) = match &self.nu {
            Some([x, y]) => (x.to_string(), y.to_string()),
            None => (String::new(), String::new()),
        };
        vec![
            self.n.to_string(),
            self.t.to_string(),
            self.group.clone(),
            self.aut.clone(),
            opt(&self.case_jk),
            opt(&self.symplectic),
            nx,
            ny,
            opt(&self.invariant),
            opt(&self.chambers),
            self.walls.len().to_string(),
            opt(&self.irregular),
            self.biregular.to_string(),
            self.regularizable.to_string(),
            self.not_hilbert_model.to_string(),
        ]
    }
}

/// Classification of one cell; with `verify` the dual paths are checked and
/// a violation is reported as `Err`.
pub fn classify_cell(p: &HilbParams, verify: bool) -> std::result::Result<ClassifyJson, String> {
    let c = classify(p);
    let irr = is_n_irregular(p);
    if verify {
        verify_classification(&c, &irr)?;
    }
    ClassifyJson::new(&c, &irr).map_err(|e| e.to_string())
}

fn verify_classification(c: &BirClassification, irr: &Irregularity) -> std::result::Result<(), String> {
    let p = c.params;
    if !irr.certificate.consistent {
        return Err("irregularity paths disagree".into());
    }
    if let Some(nu) = &c.nu {
        let m = involution_matrix(&p).map_err(|e| e.to_string())?;
        if !m.mul(&m).is_identity() {
            return Err("action matrix is not an involution".into());
        }
        if m.apply(nu) != *nu {
            return Err("action matrix moves ν".into());
        }
        let d = decompose_general(&p).map_err(|e| e.to_string())?;
        if m.apply(d.extremal_low()).primitive() != *d.extremal_high() {
            return Err("action matrix does not swap the extremal rays".into());
        }
    }
    let a = ambiguity(&p);
    if (a.exists_noninduced_map && a.partner_isomorphic_to_s == Some(true)) != c.has_nonnatural() {
        return Err("ambiguity criterion disagrees with the classification".into());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChambersJson {
    pub n: u64,
    pub t: u64,
    pub low: [JsonInt; 2],
    pub high: [JsonInt; 2],
    /// `unit` or `skew`, with the solution defining the far ray.
    pub boundary: String,
    pub boundary_solution: [JsonInt; 2],
    pub chambers: u64,
    pub walls: Vec<WallJson>,
    /// `(α, ρ)` of further equations giving an already listed wall.
    pub coincident: Vec<Vec<(u64, i64)>>,
}

impl Row for ChambersJson {
    fn columns() -> &'static [&'static str] {
        &["n", "t", "low", "high", "boundary", "chambers", "walls"]
    }

    fn cells(&self) -> Vec<String> {
        let ray = |r: &[JsonInt; 2]| format!("{}h{:+}δ", r[0], r[1].0);
        let walls: Vec<String> = self
            .walls
            .iter()
            .map(|w| format!("{} (α={}, ρ={})", ray(&w.ray), w.alpha, w.rho))
            .collect();
        vec![
            self.n.to_string(),
            self.t.to_string(),
            ray(&self.low),
            ray(&self.high),
            self.boundary.clone(),
            self.chambers.to_string(),
            walls.join("; "),
        ]
    }
}

pub fn chambers_cell(p: &HilbParams) -> Result<ChambersJson> {
    let d = decompose_general(p)?;
    let (boundary, sol) = match &d.cone.boundary {
        ConeBoundary::Unit(s) => ("unit", s),
        ConeBoundary::Skew(s) => ("skew", s),
    };
    Ok(ChambersJson {
        n: p.n,
        t: p.t,
        low: pair(&d.cone.low),
        high: pair(&d.cone.high),
        boundary: boundary.into(),
        boundary_solution: [(&sol.x).into(), (&sol.y).into()],
        chambers: d.chamber_count,
        walls: d.walls.iter().map(wall_json).collect(),
        coincident: d
            .walls
            .iter()
            .map(|w| w.coincident.iter().map(|(s, _)| (s.alpha, s.rho)).collect())
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityJson {
    pub n: u64,
    pub t: u64,
    pub exists_noninduced_map: bool,
    #[serde(rename = "partner_isomorphic_to_S")]
    pub partner_isomorphic_to_s: Option<bool>,
    pub fm_partner_count: u64,
    /// `(p, q, r, s)`.
    pub partner_label: Option<[JsonInt; 4]>,
    pub partner: Option<String>,
    pub map_biregular: Option<bool>,
    /// Minimal-solution test agrees with the chamber count (`--verify` only).
    pub slope_test_agrees: Option<bool>,
}

impl From<&AmbiguityReport> for AmbiguityJson {
    fn from(a: &AmbiguityReport) -> Self {
        AmbiguityJson {
            n: a.params.n,
            t: a.params.t,
            exists_noninduced_map: a.exists_noninduced_map,
            partner_isomorphic_to_s: a.partner_isomorphic_to_s,
            fm_partner_count: a.fm_partner_count,
            partner_label: a.partner_label.as_ref().map(|l| {
                [(&l.p).into(), (&l.q).into(), (&l.r).into(), (&l.s).into()]
            }),
            partner: a.partner_label.as_ref().map(ToString::to_string),
            map_biregular: a.map_biregular,
            slope_test_agrees: a.verification.as_ref().map(|v| v.agrees),
        }
    }
}

impl Row for AmbiguityJson {
    fn columns() -> &'static [&'static str] {
        &[
            "n",
            "t",
            "exists_noninduced_map",
            "partner_isomorphic_to_S",
            "fm_partner_count",
            "p",
            "q",
            "r",
            "s",
            "partner",
            "map_biregular",
        ]
    }

    fn cells(&self) -> Vec<String> {
        let mut label = vec![String::new(); 4];
        if let Some(l) = &self.partner_label {
            label = l.iter().map(ToString::to_string).collect();
        }
        let mut out = vec![
            self.n.to_string(),
            self.t.to_string(),
            self.exists_noninduced_map.to_string(),
            opt(&self.partner_isomorphic_to_s),
            self.fm_partner_count.to_string(),
        ];
        out.extend(label);
        out.push(opt(&self.partner));
        out.push(opt(&self.map_biregular));
        out
    }
}

pub fn ambiguity_cell(p: &HilbParams, verify: bool) -> std::result::Result<AmbiguityJson, String> {
    if verify {
        let a = ambiguity_verified(p);
        if a.verification.as_ref().is_some_and(|v| !v.agrees) {
            return Err("minimal-solution test disagrees with the chamber count".into());
        }
        Ok((&a).into())
    } else {
        Ok((&ambiguity(p)).into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellClassJson {
    #[serde(rename = "X")]
    pub x: JsonInt,
    #[serde(rename = "Y")]
    pub y: JsonInt,
    /// `(-X, Y)` lies in the same class.
    pub self_conjugate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellJson {
    pub r: JsonInt,
    pub m: JsonInt,
    pub unit: [JsonInt; 2],
    pub classes: Vec<PellClassJson>,
}

impl Row for PellJson {
    fn columns() -> &'static [&'static str] {
        &["r", "m", "unit", "classes"]
    }

    fn cells(&self) -> Vec<String> {
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("({}, {})", c.x, c.y))
            .collect();
        vec![
            self.r.to_string(),
            self.m.to_string(),
            format!("({}, {})", self.unit[0], self.unit[1]),
            classes.join("; "),
        ]
    }
}

/// Classes of `X^2 - rY^2 = m`; with `verify` both class routes must agree.
pub fn pell_cell(r: &BigInt, m: &BigInt, verify: bool) -> std::result::Result<PellJson, String> {
    let eq = PellEquation::new(r.clone(), m.clone()).map_err(|e| e.to_string())?;
    let PellSolution { x: z, y: w } = fundamental_unit(r).map_err(|e| e.to_string())?;
    let classes = eq.fundamental_solutions().map_err(|e| e.to_string())?;
    if verify {
        let by_bound = hilbert_bir::pell::classes_by_bound(&eq).map_err(|e| e.to_string())?;
        let by_lmm = hilbert_bir::pell::classes_by_lmm(&eq).map_err(|e| e.to_string())?;
        if by_bound != classes || by_lmm != classes {
            return Err("class routes disagree".into());
        }
    }
    Ok(PellJson {
        r: r.into(),
        m: m.into(),
        unit: [z.into(), w.into()],
        classes: classes
            .iter()
            .map(|c| PellClassJson {
                x: (&c.fundamental.x).into(),
                y: (&c.fundamental.y).into(),
                self_conjugate: c.conjugate,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularJson {
    pub n: u64,
    pub t: u64,
    pub ell: Option<u64>,
    pub symplectic: bool,
}

impl Row for IrregularJson {
    fn columns() -> &'static [&'static str] {
        &["n", "t", "ell", "symplectic"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.t.to_string(),
            opt(&self.ell),
            self.symplectic.to_string(),
        ]
    }
}
