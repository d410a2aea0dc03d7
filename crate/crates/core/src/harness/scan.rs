use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::int::{is_prime, FactoredInt};
use crate::caps::SizeCaps;
use crate::criterion::{self, CriterionReport};
use crate::error::{Error, Result};
use crate::field::make_field_ctx;
use crate::harness::membership::{membership_for, MembershipReport};

pub const SCAN_SCHEMA: u32 = 1;
const BATCH: usize = 32;

/// Inclusive ranges over `p`, `k`, `n`; only primes in the `p` range are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanGrid {
    pub p: (u64, u64),
    pub k: (u32, u32),
    pub n: (u32, u32),
    /// Cells with `q^n` above this are left out of the grid entirely.
    pub max_qn: Option<u64>,
}

impl ScanGrid {
    /// Grid cells in `(p, k, n)` lexicographic order.
    pub fn cells(&self) -> Vec<(u64, u32, u32)> {
        let mut out = Vec::new();
        for p in self.p.0..=self.p.1 {
            if !is_prime(p) {
                continue;
            }
            for k in self.k.0.max(1)..=self.k.1 {
                for n in self.n.0.max(1)..=self.n.1 {
                    if let Some(max) = self.max_qn {
                        match field_size(p, k, n) {
                            Some(qn) if qn <= max as u128 => {}
                            _ => continue,
                        }
                    }
                    out.push((p, k, n));
                }
            }
        }
        out
    }
}

fn field_size(p: u64, k: u32, n: u32) -> Option<u128> {
    (p as u128).checked_pow(k.checked_mul(n)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub membership: Option<MembershipReport>,
    pub criterion: Option<CriterionReport>,
    pub error: Option<String>,
}

impl ScanRow {
    pub const CSV_HEADER: [&'static str; 18] = [
        "p",
        "k",
        "n",
        "q",
        "qn",
        "witness_count",
        "example_witness",
        "condition_41_holds",
        "char_count",
        "excluded_char",
        "route",
        "omega",
        "Omega",
        "lhs_log",
        "rhs_log",
        "holds",
        "flags",
        "error",
    ];

    /// CSV fields; the wall-clock runtime is left out so that reruns are byte-identical.
    pub fn csv_fields(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let m = self.membership.as_ref();
        let c = self.criterion.as_ref();
        let q = num_bigint::BigUint::from(self.p).pow(self.k);
        let qn = q.pow(self.n);
        vec![
            self.p.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            q.to_string(),
            qn.to_string(),
            opt(m.map(|m| m.witness_count.to_string())),
            opt(m.and_then(|m| m.example_witness).map(|w| w.to_string())),
            opt(m.and_then(|m| m.condition_41_holds).map(|b| b.to_string())),
            opt(m.and_then(|m| m.char_count).map(|x| format!("{x:.6}"))),
            (self.p == 2 || self.p == 3).to_string(),
            opt(c.map(|c| c.route.to_string())),
            opt(c.and_then(|c| c.omega).map(|w| w.to_string())),
            opt(c.map(|c| c.big_omega.to_string())),
            opt(c.map(|c| format!("{:.12}", c.lhs_log))),
            opt(c.map(|c| format!("{:.12}", c.rhs_log))),
            opt(c.map(|c| c.verdict.to_string())),
            opt(c.map(|c| c.flags.join("|"))),
            opt(self.error.clone()),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub cells: usize,
    pub enumerated: usize,
    pub with_witness: usize,
    pub condition_41_true: usize,
    /// Cells with `p ≥ 5`, the main condition true and no witness. Any entry contradicts the existence result.
    pub condition_41_true_without_witness: Vec<(u64, u32, u32)>,
    /// Cells where the main condition fails yet a witness exists.
    pub witness_despite_condition_failing: usize,
    /// Cells with `|char_count - witness_count| ≥ 10⁻⁴`.
    pub char_count_mismatches: Vec<(u64, u32, u32)>,
    pub errors: usize,
}

impl ScanSummary {
    fn add(&mut self, row: &ScanRow) {
        self.cells += 1;
        if row.error.is_some() {
            self.errors += 1;
        }
        let holds = row.criterion.as_ref().is_some_and(|c| c.route == criterion::Route::Direct41 && c.holds());
        if holds {
            self.condition_41_true += 1;
        }
        if let Some(m) = &row.membership {
            self.enumerated += 1;
            if m.witness_count > 0 {
                self.with_witness += 1;
                if !holds {
                    self.witness_despite_condition_failing += 1;
                }
            } else if holds && row.p >= 5 {
                self.condition_41_true_without_witness.push((row.p, row.k, row.n));
            }
            if let Some(cc) = m.char_count {
                if (cc - m.witness_count as f64).abs() >= 1e-4 {
                    self.char_count_mismatches.push((row.p, row.k, row.n));
                }
            }
        }
    }
}

pub type Factorizer<'a> = &'a (dyn Fn(u128) -> Result<FactoredInt> + Sync);

fn scan_cell(p: u64, k: u32, n: u32, caps: &SizeCaps, factor: Factorizer<'_>) -> ScanRow {
    let mut errors = Vec::new();
    let criterion = match criterion::evaluate(p, k, n, factor) {
        Ok(r) => Some(r),
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    };
    let under_cap = field_size(p, k, n).is_some_and(|qn| qn <= caps.enumeration_cap as u128);
    let membership = if under_cap {
        match make_field_ctx(p, k, n, caps) {
            Ok(ctx) => {
                let mut m = membership_for(&ctx, caps, Instant::now());
                m.runtime_ms = 0;
                Some(m)
            }
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        }
    } else {
        None
    };
    let error = (!errors.is_empty()).then(|| errors.join("; "));
    ScanRow { p, k, n, membership, criterion, error }
}

/// Evaluates every cell, in parallel batches, handing rows to `sink` in grid order.
pub fn scan(
    grid: &ScanGrid,
    caps: &SizeCaps,
    factor: Factorizer<'_>,
    mut sink: impl FnMut(&ScanRow) -> Result<()>,
) -> Result<ScanSummary> {
    let mut summary = ScanSummary::default();
    for batch in grid.cells().chunks(BATCH) {
        let rows: Vec<ScanRow> = batch.par_iter().map(|&(p, k, n)| scan_cell(p, k, n, caps, factor)).collect();
        for row in &rows {
            summary.add(row);
            sink(row)?;
        }
    }
    Ok(summary)
}

/// CSV writer for scan rows: a `# schema: 1` line, the header, then one line per cell.
pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "# schema: {SCAN_SCHEMA}").map_err(io_err)?;
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(ScanRow::CSV_HEADER).map_err(csv_err)?;
        Ok(CsvSink { writer })
    }

    pub fn write(&mut self, row: &ScanRow) -> Result<()> {
        self.writer.write_record(row.csv_fields()).map_err(csv_err)?;
        self.writer.flush().map_err(io_err)
    }
}

/// Whole-scan JSON document.
#[derive(Debug, Serialize)]
pub struct ScanDocument<'a> {
    pub schema: u32,
    pub grid: &'a ScanGrid,
    pub rows: &'a [ScanRow],
    pub summary: &'a ScanSummary,
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("write failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::factor_int;

    fn run(grid: &ScanGrid, caps: &SizeCaps) -> (Vec<ScanRow>, ScanSummary) {
        let mut rows = Vec::new();
        let summary = scan(grid, caps, &factor_int, |r| {
            rows.push(r.clone());
            Ok(())
        })
        .unwrap();
        (rows, summary)
    }

    #[test]
    fn small_grid() {
        let grid = ScanGrid { p: (5, 13), k: (1, 1), n: (2, 4), max_qn: None };
        let caps = SizeCaps::default().with_enumeration_cap(10_000);
        let (rows, summary) = run(&grid, &caps);
        assert_eq!(rows.len(), 12);
        let order: Vec<(u64, u32)> = rows.iter().map(|r| (r.p, r.n)).collect();
        assert_eq!(order[..3], [(5, 2), (5, 3), (5, 4)]);
        // 11^4 and 13^4 exceed the enumeration cap and carry criterion data only.
        let without: Vec<(u64, u32)> = rows.iter().filter(|r| r.membership.is_none()).map(|r| (r.p, r.n)).collect();
        assert_eq!(without, vec![(11, 4), (13, 4)]);
        assert!(rows.iter().all(|r| r.criterion.is_some() && r.error.is_none()));
        assert!(summary.condition_41_true_without_witness.is_empty());
        assert!(summary.char_count_mismatches.is_empty());
    }

    #[test]
    fn empty_grid() {
        let grid = ScanGrid { p: (24, 28), k: (1, 2), n: (1, 2), max_qn: None };
        let (rows, summary) = run(&grid, &SizeCaps::default());
        assert!(rows.is_empty());
        assert_eq!(summary.cells, 0);
    }

    #[test]
    fn huge_cells_use_corollary_routes() {
        let grid = ScanGrid { p: (11, 11), k: (40, 40), n: (40, 40), max_qn: None };
        let (rows, _) = run(&grid, &SizeCaps::default());
        let c = rows[0].criterion.as_ref().unwrap();
        assert_eq!(c.route, criterion::Route::Corollary42);
        assert!(c.omega.is_none());
        assert!(rows[0].membership.is_none());
    }

    #[test]
    fn csv_is_stable() {
        let grid = ScanGrid { p: (5, 7), k: (1, 1), n: (1, 3), max_qn: None };
        let render = || {
            let mut buf = Vec::new();
            {
                let mut sink = CsvSink::new(&mut buf).unwrap();
                scan(&grid, &SizeCaps::default(), &factor_int, |r| sink.write(r)).unwrap();
            }
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        assert!(a.starts_with("# schema: 1\np,k,n,q,qn,"));
        assert_eq!(a.lines().count(), 2 + 6);
    }
}
