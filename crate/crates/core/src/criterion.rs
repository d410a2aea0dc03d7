//! Sufficient conditions on `(q, n)` for a primitive normal pair to exist, and the
//! auxiliary estimates they rest on.
//!
//! Every inequality is compared in the natural-log domain. A comparison whose two
//! sides differ by at most [`LOG_BOUNDARY_BAND`] is reported as `boundary`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::cyclo::omega_xn_minus_1;
use crate::arith::int::{factor_int, first_primes, is_prime, pow_mod, FactoredInt};
use crate::error::{Error, Result};
use crate::numeric::LOG_BOUNDARY_BAND;

const LN_506_25: f64 = 6.227_030_302_262_006;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    #[serde(rename = "direct-4.1")]
    Direct41,
    #[serde(rename = "corollary-4.2")]
    Corollary42,
    #[serde(rename = "corollary-4.3")]
    Corollary43,
    #[serde(rename = "raw-4.2")]
    Raw42,
    #[serde(rename = "raw-4.4")]
    Raw44,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct41 => "direct-4.1",
            Route::Corollary42 => "corollary-4.2",
            Route::Corollary43 => "corollary-4.3",
            Route::Raw42 => "raw-4.2",
            Route::Raw44 => "raw-4.4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Boundary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Boundary => "boundary",
        })
    }
}

/// `lhs > rhs`, with a band around equality reported separately.
pub fn compare_logs(lhs: f64, rhs: f64) -> Verdict {
    if (lhs - rhs).abs() <= LOG_BOUNDARY_BAND {
        Verdict::Boundary
    } else if lhs > rhs {
        Verdict::True
    } else {
        Verdict::False
    }
}

pub const FLAG_EXCLUDED_CHAR: &str = "excluded_char";
pub const FLAG_BOUNDARY: &str = "boundary";
pub const FLAG_ROUTE_MISMATCH: &str = "route_mismatch";
pub const FLAG_N_NOT_DIVIDING: &str = "n_not_dividing_q_minus_1";
pub const FLAG_C_CHOICE: &str = "c_choice_changes_verdict";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub p: u64,
    pub k: u32,
    /// `q` as a decimal string, since it may exceed 64 bits.
    pub q: String,
    pub n: u32,
    pub route: Route,
    /// `ω(q^n - 1)`; absent when `q^n - 1` is beyond the factoring limit.
    pub omega: Option<u32>,
    #[serde(rename = "Omega")]
    pub big_omega: u32,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub verdict: Verdict,
    pub flags: Vec<&'static str>,
}

impl CriterionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::True
    }

    /// The conclusion `(q, n) ∈ 𝔐` is only drawn outside characteristics 2 and 3.
    pub fn implies_membership(&self) -> bool {
        self.holds() && !self.flags.contains(&FLAG_EXCLUDED_CHAR)
    }

    pub const CSV_HEADER: &'static str = "q,n,route,omega,Omega,lhs_log,rhs_log,holds,flags";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.12},{:.12},{},{}",
            self.q,
            self.n,
            self.route,
            self.omega.map(|w| w.to_string()).unwrap_or_default(),
            self.big_omega,
            self.lhs_log,
            self.rhs_log,
            self.verdict,
            self.flags.join("|")
        )
    }

    fn new(p: u64, k: u32, n: u32, route: Route, omega: Option<u32>, lhs: f64, rhs: f64) -> Self {
        let verdict = compare_logs(lhs, rhs);
        let mut flags = Vec::new();
        if p == 2 || p == 3 {
            flags.push(FLAG_EXCLUDED_CHAR);
        }
        if verdict == Verdict::Boundary {
            flags.push(FLAG_BOUNDARY);
        }
        CriterionReport {
            p,
            k,
            q: q_decimal(p, k),
            n,
            route,
            omega,
            big_omega: omega_xn_minus_1(p, k, n as u64),
            lhs_log: lhs,
            rhs_log: rhs,
            verdict,
            flags,
        }
    }
}

fn q_decimal(p: u64, k: u32) -> String {
    num_bigint::BigUint::from(p).pow(k).to_string()
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn ln_q(p: u64, k: u32) -> f64 {
    k as f64 * (p as f64).ln()
}

/// `q^n - 1` if it fits in 128 bits.
fn group_order(p: u64, k: u32, n: u32) -> Option<u128> {
    (p as u128).checked_pow(k.checked_mul(n)?).map(|v| v - 1)
}

/// Whether `n | q - 1`, without forming `q` when it is large.
pub fn n_divides_q_minus_1(p: u64, k: u32, n: u32) -> bool {
    n == 1 || pow_mod(p, k as u128, n as u64) == 1 % n as u64
}

/// The main condition `q^{n/2} > 4·2^{2ω + 2Ω}`, compared as `(n/2) ln q` against `ln 4 + (2ω + 2Ω) ln 2`.
pub fn condition_41(p: u64, k: u32, n: u32) -> Result<CriterionReport> {
    condition_41_with(p, k, n, factor_int)
}

/// [`condition_41`] with a caller-supplied factorizer (e.g. a cache).
pub fn condition_41_with(
    p: u64,
    k: u32,
    n: u32,
    factor: impl Fn(u128) -> Result<FactoredInt>,
) -> Result<CriterionReport> {
    check_prime(p)?;
    let big_n = group_order(p, k, n).ok_or(Error::TooLargeToFactor)?;
    let fi = factor(big_n).map_err(|e| match e {
        Error::TooLarge(_) => Error::TooLargeToFactor,
        other => other,
    })?;
    let omega = fi.omega();
    let big_omega = omega_xn_minus_1(p, k, n as u64);
    let lhs = n as f64 / 2.0 * ln_q(p, k);
    let rhs = 4f64.ln() + (2 * omega + 2 * big_omega) as f64 * 2f64.ln();
    Ok(CriterionReport::new(p, k, n, Route::Direct41, Some(omega), lhs, rhs))
}

/// Upper bound `(ln n - Σ_{i≤m} ln p_i)/ln p_m + m` for `ω(n)`, with `p_i` the first `m` primes.
pub fn lemma37_bound(n: u64, m: usize) -> f64 {
    assert!(m >= 1);
    let primes = first_primes(m);
    let ln_l: f64 = primes.iter().map(|&p| (p as f64).ln()).sum();
    ((n as f64).ln() - ln_l) / (primes[m - 1] as f64).ln() + m as f64
}

/// `(n + gcd(n, q - 1))/2`, and `3n/4` when `n ∤ q - 1`.
pub fn lemma38_bound(q: u64, n: u64) -> (Ratio<u64>, Option<Ratio<u64>>) {
    let g = n.gcd(&(q - 1));
    let bound = Ratio::new(n + g, 2);
    let refined = ((q - 1) % n != 0).then(|| Ratio::new(3 * n, 4));
    (bound, refined)
}

/// `C(N)`: 7.77 if `5 ∤ N`, else 8.31 if `7 ∤ N`, else 11.25.
pub fn c_of_n(five_divides: bool, seven_divides: bool) -> f64 {
    if !five_divides {
        7.77
    } else if !seven_divides {
        8.31
    } else {
        11.25
    }
}

/// Every constant the lemma permits for `N`, smallest first.
fn applicable_constants(five_divides: bool, seven_divides: bool) -> Vec<f64> {
    let mut out = Vec::new();
    if !five_divides {
        out.push(7.77);
    }
    if !seven_divides {
        out.push(8.31);
    }
    out.push(11.25);
    out
}

pub fn c_of_integer(big_n: u64) -> f64 {
    c_of_n(big_n % 5 == 0, big_n % 7 == 0)
}

/// Whether `ln q > 10 ln 506.25 / n + 20 ln 2`.
pub fn corollary42_check(p: u64, k: u32, n: u32) -> bool {
    corollary42_report(p, k, n).holds()
}

/// `(n/10) ln q > ln 506.25 + 2n ln 2`, flagging `n ∤ q - 1`.
pub fn corollary42_report(p: u64, k: u32, n: u32) -> CriterionReport {
    let lhs = n as f64 / 10.0 * ln_q(p, k);
    let rhs = LN_506_25 + 2.0 * n as f64 * 2f64.ln();
    let mut r = CriterionReport::new(p, k, n, Route::Corollary42, None, lhs, rhs);
    if !n_divides_q_minus_1(p, k, n) {
        r.flags.push(FLAG_N_NOT_DIVIDING);
    }
    r
}

/// Least `n` strictly above `ln 506.25 / ((1/10) ln q - (3/2) ln 2)`; absent for `q ≤ 32768`.
pub fn corollary43_min_n(q: u128) -> Option<u64> {
    if q <= 32768 {
        return None;
    }
    let denom = (q as f64).ln() / 10.0 - 1.5 * 2f64.ln();
    let rhs = LN_506_25 / denom;
    Some(rhs.floor() as u64 + 1)
}

/// `(n/10) ln q > ln 506.25 + (3/2) n ln 2`.
pub fn corollary43_report(p: u64, k: u32, n: u32) -> CriterionReport {
    let lhs = n as f64 / 10.0 * ln_q(p, k);
    let rhs = LN_506_25 + 1.5 * n as f64 * 2f64.ln();
    CriterionReport::new(p, k, n, Route::Corollary43, None, lhs, rhs)
}

/// `q^{n/10} > 4·C(q^n - 1)·2^{2n}` when `Ω = n`, or with `2^{3n/2}` when `Ω ≤ 3n/4`.
///
/// `C` is chosen from `q^n mod 5` and `q^n mod 7`, so no factorization is needed.
pub fn condition_42_raw(p: u64, k: u32, n: u32, route: Route) -> Result<CriterionReport> {
    check_prime(p)?;
    let exponent = match route {
        Route::Raw42 => 2.0,
        Route::Raw44 => 1.5,
        other => return Err(Error::InvalidParameter(format!("{other} is not a raw route"))),
    };
    let e = k as u128 * n as u128;
    let five = pow_mod(p, e, 5) == 1;
    let seven = pow_mod(p, e, 7) == 1;
    let lhs = n as f64 / 10.0 * ln_q(p, k);
    let rhs_for = |c: f64| 4f64.ln() + c.ln() + exponent * n as f64 * 2f64.ln();
    let mut r = CriterionReport::new(p, k, n, route, None, lhs, rhs_for(c_of_n(five, seven)));
    let divides = n_divides_q_minus_1(p, k, n);
    if (route == Route::Raw42) != divides {
        r.flags.push(FLAG_ROUTE_MISMATCH);
    }
    if applicable_constants(five, seven).iter().any(|&c| compare_logs(lhs, rhs_for(c)) != r.verdict) {
        r.flags.push(FLAG_C_CHOICE);
    }
    Ok(r)
}

/// The strongest computable test: the main condition when `q^n - 1` factors, else the matching corollary.
pub fn evaluate(p: u64, k: u32, n: u32, factor: impl Fn(u128) -> Result<FactoredInt>) -> Result<CriterionReport> {
    match condition_41_with(p, k, n, factor) {
        Err(Error::TooLargeToFactor) if n_divides_q_minus_1(p, k, n) => Ok(corollary42_report(p, k, n)),
        Err(Error::TooLargeToFactor) => Ok(corollary43_report(p, k, n)),
        other => other,
    }
}

/// One failed check from a lemma sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepViolation {
    pub lemma: &'static str,
    pub input: String,
    pub detail: String,
}

/// The `Ω(x^n - 1)` bounds on every prime power `q ≤ q_max` and `n ≤ n_max`, with the exact `Ω` supplied by `omega_of`.
///
/// Checks `Ω ≤ (n + gcd(n, q-1))/2`, `Ω ≤ 3n/4` when `n ∤ q-1`, and `Ω = n ⇔ n | q-1`.
/// Also returns the cells where the first bound is attained although `n ∤ q-1`.
pub fn lemma38_sweep(
    q_max: u64,
    n_max: u64,
    omega_of: impl Fn(u64, u32, u64) -> u32,
) -> (Vec<SweepViolation>, Vec<(u64, u64)>) {
    let mut violations = Vec::new();
    let mut tight_without_divisibility = Vec::new();
    for (p, k, q) in prime_powers_up_to(q_max) {
        for n in 1..=n_max {
            let omega = omega_of(p, k, n) as u64;
            let (bound, refined) = lemma38_bound(q, n);
            let divides = (q - 1) % n == 0;
            let input = format!("q = {q}, n = {n}, Omega = {omega}");
            if Ratio::from_integer(omega) > bound {
                violations.push(SweepViolation { lemma: "omega_xn_bound", input: input.clone(), detail: format!("exceeds {bound}") });
            }
            if let Some(r) = refined {
                if Ratio::from_integer(omega) > r {
                    violations.push(SweepViolation { lemma: "omega_xn_bound", input: input.clone(), detail: format!("exceeds 3n/4 = {r}") });
                }
            }
            if (omega == n) != divides {
                violations.push(SweepViolation { lemma: "omega_xn_bound", input, detail: "Omega = n iff n | q - 1 fails".into() });
            }
            if Ratio::from_integer(omega) == bound && !divides {
                tight_without_divisibility.push((q, n));
            }
        }
    }
    (violations, tight_without_divisibility)
}

/// `2^{ω(N)} < C(N) N^{1/5}` for `1 ≤ N ≤ limit`, with `ω` from the supplied table.
pub fn lemma39_sweep(limit: u64, omega: &[u8]) -> Vec<SweepViolation> {
    (1..=limit)
        .filter(|&big_n| 2f64.powi(omega[big_n as usize] as i32) >= c_of_integer(big_n) * (big_n as f64).powf(0.2))
        .map(|big_n| SweepViolation {
            lemma: "two_pow_omega",
            input: format!("N = {big_n}"),
            detail: format!("2^omega = {} not below C(N) N^(1/5)", 1u64 << omega[big_n as usize]),
        })
        .collect()
}

/// [`lemma37_bound`] is at least `ω(n)` for `2 ≤ n ≤ limit` and `1 ≤ m ≤ m_max`.
pub fn lemma37_sweep(limit: u64, m_max: usize, omega: &[u8]) -> Vec<SweepViolation> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for n in 2..=limit {
            let bound = lemma37_bound(n, m);
            if bound + 1e-9 < omega[n as usize] as f64 {
                out.push(SweepViolation {
                    lemma: "omega_prime_count",
                    input: format!("n = {n}, m = {m}"),
                    detail: format!("bound {bound} below omega {}", omega[n as usize]),
                });
            }
        }
    }
    out
}

/// `(p, k, p^k)` for every prime power `p^k ≤ limit`, ordered by `q`.
pub fn prime_powers_up_to(limit: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in 2..=limit {
        if !is_prime(p) {
            continue;
        }
        let (mut q, mut k) = (p, 1);
        while q <= limit {
            out.push((p, k, q));
            q *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(_, _, q)| q);
    out
}
