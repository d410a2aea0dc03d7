use num_complex::Complex64;
use rayon::prelude::*;

use super::{AddChar, CharEnv};
use crate::arith::cyclo::PolyDivisor;
use crate::arith::int::FactoredInt;
use crate::error::{Error, Result};
use crate::field::FFElement;
use crate::numeric::pairwise_sum;

fn divisor_of_group(env: &CharEnv<'_>, e: u64) -> Result<FactoredInt> {
    if e == 0 || env.group_order() % e != 0 {
        return Err(Error::NotADivisor(e.to_string()));
    }
    env.ctx().group_order().factor_divisor(e as u128)
}

/// `(d, μ(d)/φ(d), characters of order d)` for every squarefree `d | e`.
fn rho_terms(env: &CharEnv<'_>, fe: &FactoredInt) -> Result<Vec<(f64, Vec<super::MultChar>)>> {
    fe.squarefree_divisors()
        .into_iter()
        .map(|(d, mu)| {
            let chars = env.mult_chars_of_order(d as u64)?;
            Ok((mu as f64 / chars.len() as f64, chars))
        })
        .collect()
}

fn rho_at(env: &CharEnv<'_>, theta: f64, terms: &[(f64, Vec<super::MultChar>)], idx: u64) -> Complex64 {
    let parts: Vec<Complex64> = terms
        .iter()
        .map(|(w, chars)| {
            let inner: Vec<Complex64> = chars.iter().map(|c| c.eval_index(env, idx)).collect();
            pairwise_sum(&inner) * *w
        })
        .collect();
    pairwise_sum(&parts) * theta
}

fn theta_of(fe: &FactoredInt) -> f64 {
    fe.euler_phi() as f64 / fe.value() as f64
}

/// `ρ_e(α) = θ(e) Σ_{d|e} μ(d)/φ(d) Σ_{χ_d} χ_d(α)`.
pub fn rho(env: &CharEnv<'_>, e: u64, a: &FFElement) -> Result<Complex64> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let fe = divisor_of_group(env, e)?;
    let terms = rho_terms(env, &fe)?;
    Ok(rho_at(env, theta_of(&fe), &terms, env.ctx().index(a)))
}

/// `ρ_e` at every element index; index 0 holds the literal value `θ(e)` from `χ(0)` conventions.
pub fn rho_table(env: &CharEnv<'_>, e: u64) -> Result<Vec<Complex64>> {
    let fe = divisor_of_group(env, e)?;
    let terms = rho_terms(env, &fe)?;
    let theta = theta_of(&fe);
    Ok((0..env.ctx().order()).into_par_iter().map(|idx| rho_at(env, theta, &terms, idx)).collect())
}

/// `(μ'(f)/Φ(f), Δ_f)` for every squarefree `f | g`.
fn kappa_terms(env: &CharEnv<'_>, g: &PolyDivisor) -> Result<(f64, Vec<(f64, Vec<AddChar>)>)> {
    let ctx = env.ctx();
    let xn1 = ctx.xn_minus_1();
    let phi_g = xn1.phi_of(g)? as f64;
    let big_theta = phi_g / (ctx.q() as f64).powi(g.degree() as i32);
    let mut terms = Vec::new();
    for (f, mu) in xn1.squarefree_divisors(ctx.base()) {
        if !f.divides(g) {
            continue;
        }
        let chars: Vec<AddChar> = env.delta_set(&f).into_iter().map(|d| AddChar::from_index(env, d)).collect();
        let phi_f = xn1.phi_of(&f)? as f64;
        terms.push((mu as f64 / phi_f, chars));
    }
    Ok((big_theta, terms))
}

fn kappa_at(env: &CharEnv<'_>, big_theta: f64, terms: &[(f64, Vec<AddChar>)], idx: u64) -> Complex64 {
    let parts: Vec<Complex64> = terms
        .iter()
        .map(|(w, chars)| {
            let inner: Vec<Complex64> = chars.iter().map(|c| c.eval_index(env, idx)).collect();
            pairwise_sum(&inner) * *w
        })
        .collect();
    pairwise_sum(&parts) * big_theta
}

/// `κ_g(α) = Θ(g) Σ_{f|g} μ'(f)/Φ(f) Σ_{ψ_f} ψ_f(α)` with `Θ(g) = Φ_q(g)/q^{deg g}`.
pub fn kappa(env: &CharEnv<'_>, g: &PolyDivisor, a: &FFElement) -> Result<Complex64> {
    let (big_theta, terms) = kappa_terms(env, g)?;
    Ok(kappa_at(env, big_theta, &terms, env.ctx().index(a)))
}

/// `κ_g` at every element index.
pub fn kappa_table(env: &CharEnv<'_>, g: &PolyDivisor) -> Result<Vec<Complex64>> {
    let (big_theta, terms) = kappa_terms(env, g)?;
    Ok((0..env.ctx().order()).into_par_iter().map(|idx| kappa_at(env, big_theta, &terms, idx)).collect())
}
