use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{CharEnv, MultChar};
use crate::error::{Error, Result};
use crate::field::FFElement;
use crate::numeric::{pairwise_sum, within_bound};

/// Which classical estimate a character sum is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SumKind {
    /// All characters trivial: the sum is `q^n`.
    Trivial,
    /// `Σ_{α≠0} χ(α)ψ(α)`, of magnitude exactly `q^{n/2}`.
    Gauss,
    /// `Σ χ1(α)χ2(α²+α+1) ≤ (n1 + n2 - 1) q^{n/2}`.
    MultPair,
    /// `Σ ψ(f(α)) ≤ (deg f - 1) q^{n/2}`.
    Additive,
    /// `Σ χ(α²+α+1) ≤ (d - 1) q^{n/2}` with `d` distinct roots.
    MultPoly,
    /// `Σ χ1(α)χ2(α²+α+1)ψ(g(α)) ≤ (n1 + n2 + n3 + n4 - 1) q^{n/2}`.
    Mixed,
}

fn nontrivial(c: Option<&MultChar>) -> bool {
    c.is_some_and(|c| !c.is_trivial())
}

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

/// Degree of the squarefree part of `x² + x + 1`: it is `(x - 1)²` in characteristic 3.
fn quad_radical_degree(p: u64) -> u32 {
    if p == 3 {
        1
    } else {
        2
    }
}

/// `x² + x + 1` is an `m`-th power only for `p = 3, m = 2`.
fn quad_is_power(p: u64, chi: &MultChar) -> bool {
    p == 3 && chi.order() == 2
}

/// Checks the hypotheses of `kind` and returns its bound.
fn bound_for(
    env: &CharEnv<'_>,
    kind: SumKind,
    chi1: Option<&MultChar>,
    chi2: Option<&MultChar>,
    delta: &FFElement,
    gamma: &FFElement,
) -> Result<f64> {
    let ctx = env.ctx();
    let p = ctx.p();
    let s = (ctx.order() as f64).sqrt();
    let additive = !delta.is_zero() || !gamma.is_zero();
    let add_degree = if !gamma.is_zero() { 2 } else if !delta.is_zero() { 1 } else { 0 };
    let n_quad = quad_radical_degree(p) as f64;
    match kind {
        SumKind::Trivial => {
            if nontrivial(chi1) || nontrivial(chi2) || additive {
                return Err(violated("trivial sum requires all characters trivial"));
            }
            Ok(ctx.order() as f64)
        }
        SumKind::Gauss => {
            if !nontrivial(chi1) || nontrivial(chi2) || delta.is_zero() || !gamma.is_zero() {
                return Err(violated("Gauss sum requires nontrivial χ1, trivial χ2, δ ≠ 0, γ = 0"));
            }
            Ok(s)
        }
        SumKind::MultPair => {
            let (Some(c1), Some(c2)) = (chi1, chi2) else {
                return Err(violated("multiplicative pair requires both characters"));
            };
            if c1.is_trivial() || c2.is_trivial() || additive {
                return Err(violated("multiplicative pair requires nontrivial χ1, χ2 and no additive part"));
            }
            if quad_is_power(p, c2) {
                return Err(violated("x² + x + 1 is a power of order χ2"));
            }
            Ok((1.0 + n_quad - 1.0) * s)
        }
        SumKind::Additive => {
            if nontrivial(chi1) || nontrivial(chi2) || !additive {
                return Err(violated("additive sum requires trivial χ1, χ2 and (δ, γ) ≠ 0"));
            }
            if add_degree % p == 0 {
                return Err(violated("degree of the additive argument divisible by p"));
            }
            Ok((add_degree as f64 - 1.0) * s)
        }
        SumKind::MultPoly => {
            let Some(c2) = chi2.filter(|c| !c.is_trivial()) else {
                return Err(violated("polynomial character sum requires nontrivial χ2"));
            };
            if nontrivial(chi1) || additive {
                return Err(violated("polynomial character sum requires trivial χ1 and no additive part"));
            }
            if quad_is_power(p, c2) {
                return Err(violated("x² + x + 1 is a power of order χ2"));
            }
            Ok((n_quad - 1.0) * s)
        }
        SumKind::Mixed => {
            if !additive {
                return Err(violated("mixed sum requires a nontrivial additive part"));
            }
            if add_degree % p == 0 {
                return Err(violated("degree of the additive argument divisible by p"));
            }
            let n1 = if nontrivial(chi1) { 1.0 } else { 0.0 } + if nontrivial(chi2) { n_quad } else { 0.0 };
            Ok((n1 + add_degree as f64 - 1.0) * s)
        }
    }
}

/// `Σ_α χ1(α)·χ2(α²+α+1)·ψ_0(δα + γ(α²+α+1))` by full enumeration, with the bound of `kind`.
///
/// Absent characters are trivial. The Gauss configuration sums over `F*_{q^n}`,
/// every other kind over the whole field.
pub fn bounded_char_sum(
    env: &CharEnv<'_>,
    kind: SumKind,
    chi1: Option<&MultChar>,
    chi2: Option<&MultChar>,
    delta: &FFElement,
    gamma: &FFElement,
) -> Result<(Complex64, f64)> {
    let bound = bound_for(env, kind, chi1, chi2, delta, gamma)?;
    let ctx = env.ctx();
    let (di, gi) = (ctx.index(delta), ctx.index(gamma));
    let one = Complex64::new(1.0, 0.0);
    let start = if kind == SumKind::Gauss { 1 } else { 0 };
    let p = ctx.p();
    let terms: Vec<Complex64> = (start..ctx.order())
        .map(|a| {
            let b = env.quad_index(a);
            let m1 = chi1.map_or(one, |c| c.eval_index(env, a));
            let m2 = chi2.map_or(one, |c| c.eval_index(env, b));
            let tr = env.trace_of(env.mul_index(di, a)) + env.trace_of(env.mul_index(gi, b));
            m1 * m2 * env.zeta_p().get(tr % p)
        })
        .collect();
    Ok((pairwise_sum(&terms), bound))
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilCheck {
    pub kind: SumKind,
    pub config: String,
    pub magnitude: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilSuiteReport {
    pub q: u64,
    pub n: u32,
    /// Number of sums evaluated, per kind.
    pub checked: Vec<(SumKind, usize)>,
    /// Configurations skipped because a hypothesis of the cited estimate fails.
    pub skipped: usize,
    pub violations: Vec<WeilCheck>,
    /// Largest `| |S| - q^{n/2} |` over the Gauss configurations.
    pub gauss_max_deviation: f64,
}

impl WeilSuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Config = (SumKind, Option<MultChar>, Option<MultChar>, u64, u64);

/// Evaluates every configuration the expansion uses on this field and checks each against its bound.
///
/// Gauss, pair and single-polynomial sums run over all characters; mixed sums run over the
/// characters of squarefree order and every `(δ, γ)`.
pub fn weil_suite(env: &CharEnv<'_>) -> Result<WeilSuiteReport> {
    let ctx = env.ctx();
    let group = env.group_order();
    let size = ctx.order();
    let all_nontrivial: Vec<MultChar> = (1..group).map(|t| MultChar::from_twist(group, t)).collect();
    let mut squarefree_chars = Vec::new();
    for (d, _) in ctx.group_order().squarefree_divisors() {
        squarefree_chars.extend(env.mult_chars_of_order(d as u64)?);
    }

    let mut configs: Vec<Config> = vec![(SumKind::Trivial, None, None, 0, 0)];
    for c in &all_nontrivial {
        for delta in 1..size {
            configs.push((SumKind::Gauss, Some(*c), None, delta, 0));
        }
        configs.push((SumKind::MultPoly, None, Some(*c), 0, 0));
        for c2 in &all_nontrivial {
            configs.push((SumKind::MultPair, Some(*c), Some(*c2), 0, 0));
        }
    }
    for delta in 0..size {
        for gamma in 0..size {
            if delta == 0 && gamma == 0 {
                continue;
            }
            configs.push((SumKind::Additive, None, None, delta, gamma));
            for c1 in &squarefree_chars {
                for c2 in &squarefree_chars {
                    if !c1.is_trivial() || !c2.is_trivial() {
                        configs.push((SumKind::Mixed, Some(*c1), Some(*c2), delta, gamma));
                    }
                }
            }
        }
    }

    let s = (size as f64).sqrt();
    let results: Vec<(SumKind, Option<WeilCheck>, Option<f64>)> = configs
        .par_iter()
        .map(|&(kind, c1, c2, di, gi)| {
            let delta = ctx.from_index(di);
            let gamma = ctx.from_index(gi);
            match bounded_char_sum(env, kind, c1.as_ref(), c2.as_ref(), &delta, &gamma) {
                Err(_) => (kind, None, None),
                Ok((value, bound)) => {
                    let magnitude = value.norm();
                    let mut violation = None;
                    let ok = if kind == SumKind::Gauss {
                        (magnitude - s).abs() < 1e-6
                    } else {
                        within_bound(magnitude, bound)
                    };
                    if !ok {
                        let config = format!(
                            "chi1 twist {:?}, chi2 twist {:?}, delta #{di}, gamma #{gi}",
                            c1.map(|c| c.twist()),
                            c2.map(|c| c.twist())
                        );
                        violation = Some(WeilCheck { kind, config, magnitude, bound });
                    }
                    let dev = (kind == SumKind::Gauss).then(|| (magnitude - s).abs());
                    (kind, violation, dev.or(Some(-1.0)))
                }
            }
        })
        .collect();

    let kinds = [
        SumKind::Trivial,
        SumKind::Gauss,
        SumKind::MultPair,
        SumKind::Additive,
        SumKind::MultPoly,
        SumKind::Mixed,
    ];
    let mut checked: Vec<(SumKind, usize)> = kinds.iter().map(|&k| (k, 0)).collect();
    let mut skipped = 0;
    let mut violations = Vec::new();
    let mut gauss_max_deviation: f64 = 0.0;
    for (kind, violation, dev) in results {
        match dev {
            None => skipped += 1,
            Some(d) => {
                checked.iter_mut().find(|(k, _)| *k == kind).expect("known kind").1 += 1;
                gauss_max_deviation = gauss_max_deviation.max(d);
            }
        }
        violations.extend(violation);
    }
    Ok(WeilSuiteReport { q: ctx.q(), n: ctx.n(), checked, skipped, violations, gauss_max_deviation })
}
