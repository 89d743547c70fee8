use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_bir::classify::{classify, conjecture_check};
use hilbert_bir::cones::{default_t_max, scan_irregular, ScanMode};
use hilbert_bir::HilbParams;
use hilbert_bir_cli::grid::{run_grid, CellFailure, Span};
use hilbert_bir_cli::report::{
    ambiguity_cell, chambers_cell, classify_cell, emit, pell_cell, Format, IrregularJson, Row,
};
use hilbert_bir_cli::tables::{prop54, table1, table2};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hilbir", version, about = "Birational involutions of Hilbert schemes of points on K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    /// Run cross-checks and brute-force oracles alongside the main computation.
    #[arg(long, global = true)]
    verify: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Table1,
    Table2,
    Prop54,
}

#[derive(Args)]
struct Cells {
    #[arg(long, conflicts_with = "n_range")]
    n: Option<u64>,
    #[arg(long, conflicts_with = "t_range")]
    t: Option<u64>,
    /// Inclusive range `A:B`.
    #[arg(long)]
    n_range: Option<Span>,
    /// Inclusive range `A:B`.
    #[arg(long)]
    t_range: Option<Span>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fundamental solutions of X^2 - rY^2 = m.
    Pell {
        #[arg(long)]
        r: BigInt,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        m: BigInt,
    },
    /// Bir and Aut of S^[n] for a degree-2t K3 surface.
    Classify(Cells),
    /// Walls and chambers of the movable cone.
    Chambers(Cells),
    /// n-irregular values of t.
    ScanIrregular {
        #[arg(long, conflicts_with = "n_range")]
        n: Option<u64>,
        #[arg(long)]
        n_range: Option<Span>,
        /// Also scan symplectic involutions for every t up to this bound.
        #[arg(long)]
        t_max: Option<u64>,
        /// Use the default full-range bound 10(n-1)(n+3).
        #[arg(long, conflicts_with = "t_max")]
        full: bool,
    },
    /// Birational maps to the Hilbert scheme of a Fourier-Mukai partner.
    Ambiguity(Cells),
    /// Regenerate a table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        #[arg(long, default_value_t = 14)]
        n_max: u64,
        /// Range of t for table2 (default 1:30) and prop54 (default 1:500).
        #[arg(long)]
        t_range: Option<Span>,
    },
    /// Check that t = (n-1)k^2 + 1 gives a biregular involution.
    Conjecture {
        #[arg(long, default_value_t = 14)]
        n_max: u64,
        #[arg(long, default_value_t = 10)]
        k_max: u64,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<CellFailure> for Failure {
    fn from(f: CellFailure) -> Self {
        Failure::Invariant(format!("(n, t) = ({}, {}): {}", f.n, f.t, f.message))
    }
}

fn spans(c: &Cells) -> Result<(Span, Span), Failure> {
    let n = c.n.map(Span::single).or(c.n_range);
    let t = c.t.map(Span::single).or(c.t_range);
    let (Some(n), Some(t)) = (n, t) else {
        return Err(Failure::Usage("both --n (or --n-range) and --t (or --t-range) are required".into()));
    };
    check_params(n.lo, t.lo)?;
    Ok((n, t))
}

fn check_params(n: u64, t: u64) -> Result<(), Failure> {
    HilbParams::new(n, t).map(|_| ()).map_err(|e| Failure::Usage(e.to_string()))
}

fn params(n: u64, t: u64) -> HilbParams {
    HilbParams::new(n, t).expect("validated range")
}

#[derive(Serialize)]
struct ConjectureJson {
    n_max: u64,
    k_max: u64,
    checked: usize,
    counterexamples: Vec<(u64, u64, u64)>,
    summary: String,
}

impl Row for ConjectureJson {
    fn columns() -> &'static [&'static str] {
        &["n_max", "k_max", "checked", "counterexamples"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n_max.to_string(),
            self.k_max.to_string(),
            self.checked.to_string(),
            self.summary.clone(),
        ]
    }
}

fn exhaustive_nonsymplectic(n: u64) -> Vec<(u64, Option<u64>)> {
    (1..=(n - 1) * (n + 3))
        .filter_map(|t| {
            let p = params(n, t);
            let c = classify(&p);
            let g = c.generators.iter().find(|g| !g.symplectic)?;
            hilbert_bir::cones::is_n_irregular(&p).irregular.then_some((t, g.ell))
        })
        .collect()
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Md => Format::Md,
    };
    let verify = cli.verify;
    match cli.cmd {
        Cmd::Pell { r, m } => {
            let report = pell_cell(&r, &m, verify).map_err(|e| {
                if verify && e.contains("disagree") {
                    Failure::Invariant(e)
                } else {
                    Failure::Usage(e)
                }
            })?;
            emit(out, format, &[report])?;
        }
        Cmd::Classify(c) => {
            let (ns, ts) = spans(&c)?;
            let rows = run_grid(ns, ts, |n, t| classify_cell(&params(n, t), verify))?;
            emit(out, format, &rows)?;
        }
        Cmd::Chambers(c) => {
            let (ns, ts) = spans(&c)?;
            let single = ns.lo == ns.hi && ts.lo == ts.hi;
            let rows = run_grid(ns, ts, |n, t| Ok(chambers_cell(&params(n, t)).ok()))?;
            if single && rows[0].is_none() {
                let e = chambers_cell(&params(ns.lo, ts.lo)).unwrap_err();
                return Err(Failure::Usage(e.to_string()));
            }
            let rows: Vec<_> = rows.into_iter().flatten().collect();
            emit(out, format, &rows)?;
        }
        Cmd::Ambiguity(c) => {
            let (ns, ts) = spans(&c)?;
            let rows = run_grid(ns, ts, |n, t| ambiguity_cell(&params(n, t), verify))?;
            emit(out, format, &rows)?;
        }
        Cmd::ScanIrregular { n, n_range, t_max, full } => {
            let Some(ns) = n.map(Span::single).or(n_range) else {
                return Err(Failure::Usage("--n or --n-range is required".into()));
            };
            check_params(ns.lo, 1)?;
            let rows = run_grid(ns, Span::single(1), |n, _| {
                let mode = match (t_max, full) {
                    (Some(t_max), _) => ScanMode::FullRange { t_max },
                    (None, true) => ScanMode::FullRange { t_max: default_t_max(n) },
                    (None, false) => ScanMode::NonsymplecticFinite,
                };
                let values = scan_irregular(n, mode);
                if verify {
                    let finite: Vec<_> = values
                        .iter()
                        .filter(|v| !v.symplectic)
                        .map(|v| (v.t, v.ell))
                        .collect();
                    if finite != exhaustive_nonsymplectic(n) {
                        return Err("candidate scan differs from the exhaustive scan".into());
                    }
                }
                Ok(values
                    .into_iter()
                    .map(|v| IrregularJson {
                        n,
                        t: v.t,
                        ell: v.ell,
                        symplectic: v.symplectic,
                    })
                    .collect::<Vec<_>>())
            })?;
            let rows: Vec<_> = rows.into_iter().flatten().collect();
            emit(out, format, &rows)?;
        }
        Cmd::Table { which, n_max, t_range } => match which {
            TableKind::Table1 => {
                check_params(n_max, 1)?;
                let rows = table1(n_max);
                if verify {
                    for r in &rows {
                        let split = exhaustive_nonsymplectic(r.n);
                        let ones: Vec<u64> =
                            split.iter().filter(|v| v.1 == Some(1)).map(|v| v.0).collect();
                        if ones != r.nu_square_2 {
                            return Err(Failure::Invariant(format!(
                                "n = {}: candidate scan differs from the exhaustive scan",
                                r.n
                            )));
                        }
                    }
                }
                emit(out, format, &rows)?;
            }
            TableKind::Table2 => {
                let span = t_range.unwrap_or(Span { lo: 1, hi: 30 });
                let rows: Vec<_> = table2(span.hi).into_iter().filter(|r| r.t >= span.lo).collect();
                emit(out, format, &rows)?;
            }
            TableKind::Prop54 => {
                let span = t_range.unwrap_or(Span { lo: 1, hi: 500 });
                let rows = prop54(span.lo, span.hi);
                emit(out, format, &rows)?;
                if let Some(bad) = rows.iter().find(|r| !r.within) {
                    return Err(Failure::Invariant(format!(
                        "t ≡ {} (mod 18): observed counts outside the possible values",
                        bad.residue
                    )));
                }
            }
        },
        Cmd::Conjecture { n_max, k_max } => {
            check_params(n_max, 1)?;
            let r = conjecture_check(n_max, k_max);
            let summary = if r.counterexamples.is_empty() {
                "no counterexamples".to_string()
            } else {
                format!("{} counterexamples", r.counterexamples.len())
            };
            emit(
                out,
                format,
                &[ConjectureJson {
                    n_max,
                    k_max,
                    checked: r.checked,
                    counterexamples: r.counterexamples,
                    summary,
                }],
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    // panics inside grid cells are reported with their (n, t) instead
    std::panic::set_hook(Box::new(|_| {}));
    let result = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                run(cli, &mut w).and_then(|()| w.flush().map_err(Failure::Io))
            }
            Err(e) => Err(Failure::Usage(format!("{}: {e}", path.display()))),
        },
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            run(cli, &mut w).and_then(|()| w.flush().map_err(Failure::Io))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant violation: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
