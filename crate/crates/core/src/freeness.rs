//! Multiplicative freeness (e-free, primitive) and additive freeness (F_q-order,
//! g-free, normal), plus the joint predicate on `(α, α² + α + 1)`.

use serde::Serialize;

use crate::arith::cyclo::PolyDivisor;
use crate::error::{Error, Result};
use crate::field::{FFElement, FieldCtx, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessProfile {
    pub element: FFElement,
    /// `None` for the zero element.
    pub mult_order: Option<u64>,
    pub fq_order: PolyDivisor,
    pub is_primitive: bool,
    pub is_normal: bool,
}

fn group_order(ctx: &FieldCtx) -> u64 {
    ctx.order() - 1
}

/// Exact multiplicative order, by stripping prime factors from `q^n - 1`.
pub fn mult_order(ctx: &FieldCtx, a: &FFElement) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut ord = group_order(ctx);
    for &(l, e) in ctx.group_order().factors() {
        for _ in 0..e {
            if ctx.is_one(&ctx.pow(a, (ord / l) as u128)) {
                ord /= l;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// `a` is `e`-free iff `a^{(q^n-1)/ℓ} ≠ 1` for every prime `ℓ | e`.
pub fn is_e_free(ctx: &FieldCtx, a: &FFElement, e: u64) -> Result<bool> {
    let n = group_order(ctx);
    if e == 0 || n % e != 0 {
        return Err(Error::NotADivisor(e.to_string()));
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(ctx
        .group_order()
        .primes()
        .filter(|&l| e % l == 0)
        .all(|l| !ctx.is_one(&ctx.pow(a, (n / l) as u128))))
}

pub fn is_primitive(ctx: &FieldCtx, a: &FFElement) -> bool {
    !a.is_zero() && is_e_free(ctx, a, group_order(ctx)).expect("q^n - 1 divides itself")
}

/// Minimal monic divisor `g` of `x^n - 1` with `g∘a = 0`, by descent through the divisor lattice.
pub fn fq_order(ctx: &FieldCtx, a: &FFElement) -> PolyDivisor {
    let base = ctx.base();
    let xn1 = ctx.xn_minus_1();
    let mut exps: Vec<u32> = xn1.factors().iter().map(|&(_, m)| m).collect();
    let mut g = xn1.poly().clone();
    for (i, (f, _)) in xn1.factors().iter().enumerate() {
        while exps[i] > 0 {
            let smaller = g.div_exact(f, base).expect("factor divides current order");
            if ctx.poly_action(&smaller, a).is_zero() {
                g = smaller;
                exps[i] -= 1;
            } else {
                break;
            }
        }
    }
    xn1.divisor_from_exps(exps, base).expect("exponents stay within x^n - 1")
}

/// `gcd(g, (x^n - 1)/fq_order(a)) = 1`, evaluated on exponent vectors.
pub fn is_g_free(ctx: &FieldCtx, a: &FFElement, g: &PolyDivisor) -> bool {
    let ord = fq_order(ctx, a);
    let full = ctx.xn_minus_1().factors();
    g.exps()
        .iter()
        .zip(ord.exps())
        .zip(full)
        .all(|((&ge, &oe), &(_, m))| ge == 0 || oe == m)
}

/// [`is_g_free`] for an arbitrary polynomial, which must divide `x^n - 1`.
pub fn is_g_free_poly(ctx: &FieldCtx, a: &FFElement, g: &Poly) -> Result<bool> {
    let g = ctx.xn_minus_1().divisor_from_poly(g, ctx.base())?;
    Ok(is_g_free(ctx, a, &g))
}

pub fn is_normal(ctx: &FieldCtx, a: &FFElement) -> bool {
    let ord = fq_order(ctx, a);
    ord.exps().iter().zip(ctx.xn_minus_1().factors()).all(|(&e, &(_, m))| e == m)
}

pub fn profile(ctx: &FieldCtx, a: &FFElement) -> FreenessProfile {
    let mult = mult_order(ctx, a).ok();
    let ord = fq_order(ctx, a);
    let is_normal = ord.exps().iter().zip(ctx.xn_minus_1().factors()).all(|(&e, &(_, m))| e == m);
    FreenessProfile {
        element: a.clone(),
        mult_order: mult,
        fq_order: ord,
        is_primitive: mult == Some(group_order(ctx)),
        is_normal,
    }
}

/// Both `a` and `a² + a + 1` primitive and normal. Primitivity is tested first.
pub fn is_primitive_normal_pair(ctx: &FieldCtx, a: &FFElement) -> bool {
    if !is_primitive(ctx, a) {
        return false;
    }
    let b = ctx.quad(a);
    is_primitive(ctx, &b) && is_normal(ctx, a) && is_normal(ctx, &b)
}

/// `0` is `e`-free only for `e = 1`; otherwise defer to [`is_e_free`].
fn e_free_or_zero(ctx: &FieldCtx, a: &FFElement, e: u64) -> Result<bool> {
    if a.is_zero() {
        let n = group_order(ctx);
        if e == 0 || n % e != 0 {
            return Err(Error::NotADivisor(e.to_string()));
        }
        return Ok(e == 1);
    }
    is_e_free(ctx, a, e)
}

/// Exhaustive `N_{q^n}(m1, m2, g1, g2)`: nonzero `α` with `α` m1-free, `β = α²+α+1`
/// m2-free, `α` g1-free and `β` g2-free.
pub fn count_free_pairs(
    ctx: &FieldCtx,
    m1: u64,
    m2: u64,
    g1: &PolyDivisor,
    g2: &PolyDivisor,
) -> Result<u64> {
    let mut count = 0;
    for idx in 1..ctx.order() {
        let a = ctx.from_index(idx);
        let b = ctx.quad(&a);
        if is_e_free(ctx, &a, m1)?
            && e_free_or_zero(ctx, &b, m2)?
            && is_g_free(ctx, &a, g1)
            && is_g_free(ctx, &b, g2)
        {
            count += 1;
        }
    }
    Ok(count)
}
