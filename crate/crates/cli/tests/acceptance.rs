//! Acceptance criteria 1–9, one `[PASS]`/`[FAIL]` line each.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pnf_core::criterion::{corollary42_check, corollary43_min_n};
use pnf_core::field::make_field_ctx;
use pnf_core::harness::verify::{
    check_gauss_magnitude, check_kappa_indicator, check_lemma37, check_lemma38, check_lemma39,
    check_normality_oracle, check_rho_indicator, check_s_decomposition, check_theorem_consistency, check_weil,
    fields_up_to,
};
use pnf_core::characters::CharEnv;
use pnf_core::{FieldCtx, SizeCaps};

type Outcome = Result<String, String>;

const PNF: &str = env!("CARGO_BIN_EXE_pnf");
const SCAN_ARGS: [&str; 9] =
    ["scan", "--p-range", "5..10000", "--k-range", "1..6", "--n-range", "1..6", "--max-qn", "10000"];

fn caps() -> SizeCaps {
    SizeCaps::default()
}

fn fields(list: &[(u64, u32, u32)]) -> Result<Vec<FieldCtx>, String> {
    list.iter().map(|&(p, k, n)| make_field_ctx(p, k, n, &caps()).map_err(|e| e.to_string())).collect()
}

fn on_small_fields(check: impl Fn(&CharEnv<'_>) -> Outcome) -> Outcome {
    let mut details = Vec::new();
    for ctx in fields(&[(5, 1, 2), (7, 1, 2)])? {
        let env = CharEnv::new(&ctx, &caps()).map_err(|e| e.to_string())?;
        details.push(format!("F_{}: {}", ctx.order(), check(&env)?));
    }
    Ok(details.join("; "))
}

fn indicator_equivalence() -> Outcome {
    let start = Instant::now();
    let detail = on_small_fields(|env| Ok(format!("{}, {}", check_rho_indicator(env)?, check_kappa_indicator(env)?)))?;
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{detail} ({elapsed:.1?})"))
}

fn gauss_magnitude() -> Outcome {
    let ctx = make_field_ctx(5, 1, 2, &caps()).map_err(|e| e.to_string())?;
    let env = CharEnv::new(&ctx, &caps()).map_err(|e| e.to_string())?;
    check_gauss_magnitude(&env)
}

fn s_decomposition() -> Outcome {
    on_small_fields(|env| {
        let (detail, report) = check_s_decomposition(env, true)?;
        if !report.bounds_asserted || report.terms.len() != 16 {
            return Err("bounds were not asserted on all sixteen terms".into());
        }
        let worst = report.terms.iter().skip(2).map(|t| t.slack).fold(f64::INFINITY, f64::min);
        Ok(format!("{detail}, min slack over S_3..S_16 {worst:.3}"))
    })
}

fn thresholds() -> Outcome {
    let m = corollary43_min_n(5u128.pow(7));
    if m != Some(72) {
        return Err(format!("corollary43_min_n(5^7) = {m:?}"));
    }
    if let Some(q) = (2..=32768u128).find(|&q| corollary43_min_n(q).is_some()) {
        return Err(format!("corollary43_min_n({q}) is present"));
    }
    match (corollary42_check(11, 6, 35), corollary42_check(11, 7, 35)) {
        (false, true) => Ok("min_n(5^7) = 72, absent for q ≤ 32768, flip between k = 6 and k = 7".into()),
        other => Err(format!("corollary42_check at (11,6,35), (11,7,35) = {other:?}")),
    }
}

fn lemma_sweeps() -> Outcome {
    Ok(format!(
        "{}; {}; {}",
        check_lemma38(49, 24)?,
        check_lemma39(1_000_000)?,
        check_lemma37(100_000, 6)?
    ))
}

fn normality_cross_oracle() -> Outcome {
    let list = fields_up_to(2401);
    for ctx in fields(&list)? {
        check_normality_oracle(&ctx)?;
    }
    Ok(format!("{} fields with q^n ≤ 2401", list.len()))
}

fn theorem_consistency() -> Outcome {
    check_theorem_consistency(10_000, &caps())
}

fn run_scan() -> Result<Vec<u8>, String> {
    let out = Command::new(PNF).args(SCAN_ARGS).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("pnf scan exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let first = run_scan()?;
    let second = run_scan()?;
    if first != second {
        return Err("two scans over the same grid differ".into());
    }
    let rows = first.iter().filter(|&&b| b == b'\n').count() - 2;
    let start = Instant::now();
    let status = Command::new(PNF).args(["verify", "--full"]).output().map_err(|e| e.to_string())?.status;
    let elapsed = start.elapsed();
    if !status.success() {
        return Err(format!("pnf verify --full exited with {status}"));
    }
    if elapsed >= Duration::from_secs(30 * 60) {
        return Err(format!("pnf verify --full took {elapsed:.1?}"));
    }
    Ok(format!("{rows} identical scan rows; verify --full passed in {elapsed:.1?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("indicator equivalence on F_25, F_49", indicator_equivalence),
        ("Gauss-sum magnitude on F_25", gauss_magnitude),
        ("S-decomposition identity and per-term bounds on F_25, F_49", s_decomposition),
        ("Weil-bound suite on F_25, F_49", || on_small_fields(check_weil)),
        ("criterion thresholds", thresholds),
        ("ω and Ω counting-bound sweeps", lemma_sweeps),
        ("normality cross-oracle for q^n ≤ 2401", normality_cross_oracle),
        ("theorem consistency for p ≥ 5, q^n ≤ 10^4", theorem_consistency),
        ("determinism and verify --full runtime", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
