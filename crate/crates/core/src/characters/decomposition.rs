use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{kappa_table, rho_table, AddChar, CharEnv};
use crate::arith::cyclo::PolyDivisor;
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, within_bound};

pub const SUM_REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct SumTerm {
    pub index: usize,
    pub pattern: String,
    pub value_re: f64,
    pub value_im: f64,
    pub magnitude: f64,
    pub bound: f64,
    pub slack: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumReport {
    pub schema: u32,
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub q: u64,
    pub omega: u32,
    #[serde(rename = "Omega")]
    pub big_omega: u32,
    pub theta: f64,
    #[serde(rename = "Theta")]
    pub big_theta: f64,
    #[serde(rename = "N_real")]
    pub n_real: f64,
    #[serde(rename = "N_rounded")]
    pub n_rounded: i64,
    /// Bounds are only claimed for `p ∉ {2, 3}`.
    pub bounds_asserted: bool,
    pub terms: Vec<SumTerm>,
}

impl SumReport {
    pub fn term(&self, i: usize) -> &SumTerm {
        &self.terms[i - 1]
    }

    pub fn violations(&self) -> impl Iterator<Item = &SumTerm> {
        self.terms.iter().filter(|t| !t.within_bound)
    }

    /// `Err(BoundViolated)` for the first term outside its bound, when bounds are asserted.
    pub fn check(&self) -> Result<()> {
        if !self.bounds_asserted {
            return Ok(());
        }
        match self.violations().next() {
            None => Ok(()),
            Some(t) => Err(Error::BoundViolated { term: t.index, magnitude: t.magnitude, bound: t.bound }),
        }
    }
}

fn pattern_name(i: usize) -> String {
    let bits = i - 1;
    ["d", "h", "g", "f"]
        .iter()
        .enumerate()
        .map(|(b, name)| if bits >> b & 1 == 1 { format!("{name}!=1") } else { format!("{name}=1") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Per-term bounds for `|S_i|` with `s = q^{n/2}`, `W = 2^ω - 1`, `V = 2^Ω - 1`.
fn term_bound(i: usize, total: f64, s: f64, w: f64, v: f64) -> f64 {
    match i {
        1 => total,
        2 => 0.0,
        3 => (s + 1.0) * w,
        4 => 2.0 * s * w * w,
        5 => v,
        6 => s * w * v,
        7 => (2.0 * s + 1.0) * w * v,
        8 => 3.0 * s * w * w * v,
        9 => (s + 1.0) * v,
        10 => 2.0 * s * w * v,
        11 => (3.0 * s + 1.0) * w * v,
        12 => 4.0 * s * w * w * v,
        13 => v * v,
        14 => 2.0 * s * w * v * v,
        15 => (3.0 * s + 1.0) * w * v * v,
        16 => 4.0 * s * w * w * v * v,
        _ => unreachable!("sixteen terms"),
    }
}

/// `Σ_{d≠1} μ(d)/φ(d) Σ_{χ_d} χ_d(γ)` over squarefree `d | q^n - 1`, at every index.
fn mult_nontrivial_table(env: &CharEnv<'_>) -> Result<Vec<Complex64>> {
    let mut groups = Vec::new();
    for (d, mu) in env.ctx().group_order().squarefree_divisors() {
        if d == 1 {
            continue;
        }
        let chars = env.mult_chars_of_order(d as u64)?;
        groups.push((mu as f64 / chars.len() as f64, chars));
    }
    Ok((0..env.ctx().order())
        .into_par_iter()
        .map(|idx| {
            let parts: Vec<Complex64> = groups
                .iter()
                .map(|(w, chars)| {
                    let inner: Vec<Complex64> = chars.iter().map(|c| c.eval_index(env, idx)).collect();
                    pairwise_sum(&inner) * *w
                })
                .collect();
            pairwise_sum(&parts)
        })
        .collect())
}

/// `Σ_{g≠1} μ'(g)/Φ(g) Σ_{ψ_g} ψ_g(γ)` over squarefree `g | x^n - 1`, at every index.
fn add_nontrivial_table(env: &CharEnv<'_>) -> Result<Vec<Complex64>> {
    let ctx = env.ctx();
    let xn1 = ctx.xn_minus_1();
    let mut groups = Vec::new();
    for (g, mu) in xn1.squarefree_divisors(ctx.base()) {
        if g.is_one() {
            continue;
        }
        let chars: Vec<AddChar> = env.delta_set(&g).into_iter().map(|d| AddChar::from_index(env, d)).collect();
        groups.push((mu as f64 / xn1.phi_of(&g)? as f64, chars));
    }
    Ok((0..ctx.order())
        .into_par_iter()
        .map(|idx| {
            let parts: Vec<Complex64> = groups
                .iter()
                .map(|(w, chars)| {
                    let inner: Vec<Complex64> = chars.iter().map(|c| c.eval_index(env, idx)).collect();
                    pairwise_sum(&inner) * *w
                })
                .collect();
            pairwise_sum(&parts)
        })
        .collect())
}

/// All sixteen `S_i`, without asserting bounds.
///
/// For each `α ≠ 0` with `β = α² + α + 1`, the four character sums over `d`, `h`, `g`, `f`
/// each split into the trivial character and the rest; `S_i` collects the product whose
/// nontriviality pattern is `i - 1 = [d≠1] + 2[h≠1] + 4[g≠1] + 8[f≠1]`.
pub fn s_terms(env: &CharEnv<'_>) -> Result<SumReport> {
    let ctx = env.ctx();
    let mnon = mult_nontrivial_table(env)?;
    let gnon = add_nontrivial_table(env)?;
    let one = Complex64::new(1.0, 0.0);
    let rows: Vec<[Complex64; 16]> = (1..ctx.order())
        .into_par_iter()
        .map(|a| {
            let b = env.quad_index(a) as usize;
            let a = a as usize;
            let m = [one, mnon[a]];
            let h = [one, mnon[b]];
            let g = [one, gnon[a]];
            let f = [one, gnon[b]];
            std::array::from_fn(|bits| m[bits & 1] * h[bits >> 1 & 1] * g[bits >> 2 & 1] * f[bits >> 3 & 1])
        })
        .collect();

    let total = env.group_order() as f64;
    let s = (ctx.order() as f64).sqrt();
    let omega = ctx.group_order().omega();
    let big_omega = ctx.xn_minus_1().omega();
    let w = 2f64.powi(omega as i32) - 1.0;
    let v = 2f64.powi(big_omega as i32) - 1.0;
    let mut terms = Vec::with_capacity(16);
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 1..=16 {
        let column: Vec<Complex64> = rows.iter().map(|r| r[i - 1]).collect();
        let value = pairwise_sum(&column);
        sum += value;
        let magnitude = value.norm();
        let bound = term_bound(i, total, s, w, v);
        let within = match i {
            1 => (value - Complex64::new(total, 0.0)).norm() < 1e-6,
            2 => magnitude < 1e-6,
            _ => within_bound(magnitude, bound),
        };
        terms.push(SumTerm {
            index: i,
            pattern: pattern_name(i),
            value_re: value.re,
            value_im: value.im,
            magnitude,
            bound,
            slack: bound - magnitude,
            within_bound: within,
        });
    }

    let theta = ctx.group_order().euler_phi() as f64 / total;
    let big_theta = ctx.xn_minus_1().phi_of(&ctx.xn_minus_1().full(ctx.base()))? as f64 / ctx.order() as f64;
    let n_real = theta * theta * big_theta * big_theta * sum.re;
    Ok(SumReport {
        schema: SUM_REPORT_SCHEMA,
        p: ctx.p(),
        k: ctx.k(),
        n: ctx.n(),
        q: ctx.q(),
        omega,
        big_omega,
        theta,
        big_theta,
        n_real,
        n_rounded: n_real.round() as i64,
        bounds_asserted: ctx.p() > 3,
        terms,
    })
}

/// [`s_terms`] followed by the bound assertions.
pub fn s_decomposition(env: &CharEnv<'_>) -> Result<SumReport> {
    let report = s_terms(env)?;
    report.check()?;
    Ok(report)
}

/// `Σ_{α≠0} ρ_{m1}(α) ρ_{m2}(β) κ_{g1}(α) κ_{g2}(β)` with `β = α² + α + 1`.
///
/// When `β = 0` the factor for `β` is the indicator that `0` is `m2`-free and `g2`-free,
/// which holds exactly when `m2 = 1` and `g2 = 1`.
pub fn count_via_characters(
    env: &CharEnv<'_>,
    m1: u64,
    m2: u64,
    g1: &PolyDivisor,
    g2: &PolyDivisor,
) -> Result<f64> {
    let r1 = rho_table(env, m1)?;
    let r2 = rho_table(env, m2)?;
    let k1 = kappa_table(env, g1)?;
    let k2 = kappa_table(env, g2)?;
    let zero_factor = if m2 == 1 && g2.is_one() { 1.0 } else { 0.0 };
    let terms: Vec<Complex64> = (1..env.ctx().order())
        .into_par_iter()
        .map(|a| {
            let b = env.quad_index(a) as usize;
            let a = a as usize;
            let left = r1[a] * k1[a];
            if b == 0 {
                left * zero_factor
            } else {
                left * r2[b] * k2[b]
            }
        })
        .collect();
    Ok(pairwise_sum(&terms).re)
}
