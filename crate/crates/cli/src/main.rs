//! `pnf`: field inspection, single-cell checks, grid scans, the invariant suite,
//! and character-sum reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pnf_core::arith::int::{factor_int, FactorCache, FactoredInt};
use pnf_core::characters::{s_terms, CharEnv};
use pnf_core::criterion::{self, CriterionReport};
use pnf_core::field::make_field_ctx;
use pnf_core::harness::scan::{CsvSink, ScanDocument};
use pnf_core::harness::{brute_force_membership, scan, verify_suite, MembershipReport, ScanGrid, VerifyLevel};
use pnf_core::{Error, SizeCaps};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "pnf", version, about = "Primitive normal pairs (α, α²+α+1) over finite fields")]
struct Cli {
    /// Largest q^n enumerated element by element
    #[arg(long, global = true, default_value_t = pnf_core::caps::DEFAULT_ENUMERATION_CAP)]
    cap: u64,

    /// Largest q^n on which character sums are evaluated
    #[arg(long, global = true, default_value_t = pnf_core::caps::DEFAULT_CHARACTER_CAP)]
    character_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct FieldArgs {
    /// Characteristic
    #[arg(short)]
    p: u64,
    /// Base field is F_{p^k}
    #[arg(short, default_value_t = 1)]
    k: u32,
    /// Extension degree over F_q
    #[arg(short)]
    n: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moduli, generator and factorizations for F_{q^n}
    FieldInfo(FieldArgs),
    /// Criterion verdict and, under the cap, exhaustive witness count
    Check {
        #[command(flatten)]
        field: FieldArgs,
        /// Skip the element sweep
        #[arg(long)]
        criterion_only: bool,
    },
    /// Evaluate every (p, k, n) cell of a grid; ranges are inclusive
    Scan {
        #[arg(long, value_parser = parse_range::<u64>)]
        p_range: (u64, u64),
        #[arg(long, value_parser = parse_range::<u32>, default_value = "1..1")]
        k_range: (u32, u32),
        #[arg(long, value_parser = parse_range::<u32>)]
        n_range: (u32, u32),
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out cells with q^n above this
        #[arg(long)]
        max_qn: Option<u64>,
    },
    /// Run the invariant suite
    Verify {
        /// Add F_121, F_125 and the sweeps
        #[arg(long)]
        full: bool,
    },
    /// The sixteen-term character-sum decomposition with per-term bounds
    Sums(FieldArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_range<T: std::str::FromStr + Copy>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let parse = |t: &str| t.trim().parse::<T>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?)),
        None => parse(s).map(|v| (v, v)),
    }
}

#[derive(Serialize)]
struct FieldInfo {
    schema: u32,
    p: u64,
    k: u32,
    q: u64,
    n: u32,
    qn: u64,
    base_modulus: Vec<u64>,
    modulus: String,
    generator: String,
    group_order: String,
    group_order_omega: u32,
    xn_minus_1_factors: Vec<String>,
    xn_minus_1_omega: u32,
    excluded_char: bool,
}

#[derive(Serialize)]
struct CheckReport {
    schema: u32,
    criterion: Option<CriterionReport>,
    criterion_error: Option<String>,
    membership: Option<MembershipReport>,
    membership_error: Option<String>,
}

struct Factorizer {
    cache: Option<FactorCache>,
}

impl Factorizer {
    fn from_env() -> anyhow::Result<Self> {
        let cache = match std::env::var_os("PNF_CACHE") {
            Some(path) if !path.is_empty() => {
                Some(FactorCache::open(&path).with_context(|| format!("opening PNF_CACHE {path:?}"))?)
            }
            _ => None,
        };
        Ok(Factorizer { cache })
    }

    fn factor(&self, n: u128) -> pnf_core::Result<FactoredInt> {
        match &self.cache {
            Some(c) => c.factor(n),
            None => factor_int(n),
        }
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn field_info(f: FieldArgs, caps: &SizeCaps) -> anyhow::Result<u8> {
    let ctx = make_field_ctx(f.p, f.k, f.n, caps)?;
    let info = FieldInfo {
        schema: 1,
        p: ctx.p(),
        k: ctx.k(),
        q: ctx.q(),
        n: ctx.n(),
        qn: ctx.order(),
        base_modulus: ctx.base().modulus().to_vec(),
        modulus: ctx.modulus().to_string(),
        generator: ctx.generator().to_string(),
        group_order: ctx.group_order().to_string(),
        group_order_omega: ctx.group_order().omega(),
        xn_minus_1_factors: ctx
            .xn_minus_1()
            .factors()
            .iter()
            .map(|(f, e)| if *e == 1 { format!("{f}") } else { format!("({f})^{e}") })
            .collect(),
        xn_minus_1_omega: ctx.xn_minus_1().omega(),
        excluded_char: ctx.p() <= 3,
    };
    write_json(&mut io::stdout().lock(), &info)?;
    Ok(0)
}

fn check(f: FieldArgs, criterion_only: bool, caps: &SizeCaps, factor: &Factorizer) -> anyhow::Result<u8> {
    let (crit, crit_err) = match criterion::evaluate(f.p, f.k, f.n, |n| factor.factor(n)) {
        Ok(r) => (Some(r), None),
        Err(e @ (Error::NotPrime(_) | Error::InvalidParameter(_))) => return Err(e.into()),
        Err(e) => (None, Some(e.to_string())),
    };
    let (membership, membership_error) = if criterion_only {
        (None, None)
    } else {
        match brute_force_membership(f.p, f.k, f.n, caps) {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    let report = CheckReport { schema: 1, criterion: crit, criterion_error: crit_err, membership, membership_error };
    write_json(&mut io::stdout().lock(), &report)?;
    Ok(0)
}

fn run_scan(
    grid: ScanGrid,
    format: Format,
    out: Option<PathBuf>,
    caps: &SizeCaps,
    factor: &Factorizer,
) -> anyhow::Result<u8> {
    if grid.p.0 > grid.p.1 || grid.k.0 > grid.k.1 || grid.n.0 > grid.n.1 {
        bail!(Error::InvalidParameter("range start exceeds its end".into()));
    }
    let mut sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let factorize = |n: u128| factor.factor(n);
    let summary = match format {
        Format::Csv => {
            let mut csv = CsvSink::new(&mut sink)?;
            scan(&grid, caps, &factorize, |row| csv.write(row))?
        }
        Format::Json => {
            let mut rows = Vec::new();
            let summary = scan(&grid, caps, &factorize, |row| {
                rows.push(row.clone());
                Ok(())
            })?;
            write_json(&mut sink, &ScanDocument { schema: 1, grid: &grid, rows: &rows, summary: &summary })?;
            summary
        }
    };
    sink.flush()?;
    eprintln!(
        "{} cells, {} enumerated, {} with witnesses, main condition true in {}, {} errors",
        summary.cells, summary.enumerated, summary.with_witness, summary.condition_41_true, summary.errors
    );
    let broken = !summary.condition_41_true_without_witness.is_empty() || !summary.char_count_mismatches.is_empty();
    for c in &summary.condition_41_true_without_witness {
        eprintln!("main condition holds without a witness at (p, k, n) = {c:?}");
    }
    for c in &summary.char_count_mismatches {
        eprintln!("character count disagrees with enumeration at (p, k, n) = {c:?}");
    }
    Ok(if broken { EXIT_FAILURE } else { 0 })
}

fn verify(full: bool, caps: &SizeCaps) -> anyhow::Result<u8> {
    let level = if full { VerifyLevel::Full } else { VerifyLevel::Quick };
    let report = verify_suite(level, caps);
    print!("{}", report.render_text());
    Ok(if report.passed() { 0 } else { EXIT_FAILURE })
}

fn sums(f: FieldArgs, caps: &SizeCaps) -> anyhow::Result<u8> {
    let ctx = make_field_ctx(f.p, f.k, f.n, caps)?;
    let env = CharEnv::new(&ctx, caps)?;
    let report = s_terms(&env)?;
    write_json(&mut io::stdout().lock(), &report)?;
    if let Err(e) = report.check() {
        eprintln!("{e}");
        return Ok(EXIT_FAILURE);
    }
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let caps = SizeCaps::default().with_enumeration_cap(cli.cap).with_character_cap(cli.character_cap);
    let factor = Factorizer::from_env()?;
    match cli.command {
        Command::FieldInfo(f) => field_info(f, &caps),
        Command::Check { field, criterion_only } => check(field, criterion_only, &caps, &factor),
        Command::Scan { p_range, k_range, n_range, format, out, max_qn } => {
            let grid = ScanGrid { p: p_range, k: k_range, n: n_range, max_qn };
            run_scan(grid, format, out, &caps, &factor)
        }
        Command::Verify { full } => verify(full, &caps),
        Command::Sums(f) => sums(f, &caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::NotPrime(_) | Error::InvalidParameter(_) | Error::NoIrreducibleFound { .. })
            );
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_FAILURE })
        }
    }
}
