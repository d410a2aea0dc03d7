//! Reference implementations written independently of the main code paths.
//!
//! Every routine here recomputes a quantity by direct enumeration or linear
//! algebra, never by the structural shortcuts the library uses. They are slow
//! and meant for cross-checks on small fields only.

use std::collections::HashSet;

use crate::field::{BaseField, FFElement, FieldCtx, Poly};

/// `#{a ∈ [0, n) : gcd(a, n) = 1}` with `n = 1` counting the single class.
pub fn count_units_mod(n: u64) -> u128 {
    if n == 1 {
        return 1;
    }
    (1..n).filter(|&a| naive_gcd(a, n) == 1).count() as u128
}

fn naive_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Plain trial division.
pub fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `ω(N)` for every `N ≤ limit` via a sieve.
pub fn omega_table(limit: usize) -> Vec<u8> {
    let mut omega = vec![0u8; limit + 1];
    for d in 2..=limit {
        if omega[d] == 0 {
            let mut m = d;
            while m <= limit {
                omega[m] += 1;
                m += d;
            }
        }
    }
    omega
}

fn all_monic(base: &BaseField, degree: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = base.q() as u128;
    (0..q.pow(degree as u32)).map(move |mut t| {
        let mut c = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            c.push((t % q) as u64);
            t /= q;
        }
        c.push(1);
        Poly::from_coeffs(c)
    })
}

/// No monic factor of degree `1..=deg/2`, found by trying every candidate.
pub fn is_irreducible_exhaustive(f: &Poly, base: &BaseField) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    (1..=d / 2).all(|e| all_monic(base, e).all(|g| !f.rem(&g, base).unwrap().is_zero()))
}

pub fn smallest_irreducible_exhaustive(base: &BaseField, degree: usize) -> Option<Poly> {
    all_monic(base, degree).find(|f| is_irreducible_exhaustive(f, base))
}

/// Monic irreducible factorization by trial division over all monic irreducibles,
/// sorted by degree then coefficients from the top down.
pub fn irreducible_factors_exhaustive(base: &BaseField, g: &Poly) -> Vec<(Poly, u32)> {
    let mut rest = g.make_monic(base);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() > 0 {
        let mut cands: Vec<Poly> = all_monic(base, d).filter(|f| is_irreducible_exhaustive(f, base)).collect();
        cands.sort_by(|a, b| a.canonical_cmp(b));
        for f in cands {
            let mut e = 0;
            loop {
                let (qt, r) = rest.divrem(&f, base).unwrap();
                if !r.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            if e > 0 {
                out.push((f, e));
            }
        }
        d += 1;
    }
    out
}

/// Units of `F_q[x]/(g)`: residues `a` admitting some `b` with `a·b ≡ 1`; `g = 1` counts the single class.
pub fn count_units_mod_poly(base: &BaseField, g: &Poly) -> u128 {
    let d = g.deg() as u32;
    if d == 0 {
        return 1;
    }
    let q = base.q() as u128;
    let residue = |mut t: u128| {
        let mut c = Vec::new();
        for _ in 0..d {
            c.push((t % q) as u64);
            t /= q;
        }
        Poly::from_coeffs(c)
    };
    let total = q.pow(d);
    let all: Vec<Poly> = (0..total).map(residue).collect();
    all.iter()
        .filter(|a| all.iter().any(|b| a.mulmod(b, g, base).is_one()))
        .count() as u128
}

/// Multiplicative order by repeated multiplication.
pub fn order_by_enumeration(ctx: &FieldCtx, a: &FFElement) -> u64 {
    assert!(!a.is_zero());
    let mut cur = a.clone();
    let mut k = 1;
    while !ctx.is_one(&cur) {
        cur = ctx.mul(&cur, a);
        k += 1;
    }
    k
}

/// Rank over `F_q` of the rows `a, a^q, …, a^{q^{n-1}}` (powers taken by exponentiation).
pub fn conjugate_rank(ctx: &FieldCtx, a: &FFElement) -> usize {
    let f = ctx.base();
    let n = ctx.n() as usize;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut e: u128 = 1;
    for _ in 0..n {
        rows.push(ctx.pow(a, e).coeffs().to_vec());
        e *= ctx.q() as u128;
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col]).unwrap();
        for c in 0..n {
            rows[rank][c] = f.mul(rows[rank][c], inv);
        }
        for r in 0..n {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..n {
                    let t = f.mul(factor, rows[rank][c]);
                    rows[r][c] = f.sub(rows[r][c], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn is_normal_by_rank(ctx: &FieldCtx, a: &FFElement) -> bool {
    conjugate_rank(ctx, a) == ctx.n() as usize
}

/// Primitive by power enumeration.
pub fn is_primitive_by_enumeration(ctx: &FieldCtx, a: &FFElement) -> bool {
    !a.is_zero() && order_by_enumeration(ctx, a) == ctx.order() - 1
}

/// Witness count by a second, independently coded sweep: power-enumeration
/// primitivity and matrix-rank normality.
///
/// A generator `g` is located by walking powers; the primitive elements are then the
/// `g^j` with `gcd(j, q^n - 1) = 1`, which needs no factorization of `q^n - 1`.
pub fn count_witnesses_independent(ctx: &FieldCtx) -> u64 {
    let n = ctx.order() - 1;
    let g = (1..ctx.order())
        .map(|idx| ctx.from_index(idx))
        .find(|a| order_by_enumeration(ctx, a) == n)
        .expect("F*_{q^n} is cyclic");
    let mut primitive: HashSet<u64> = HashSet::new();
    let mut cur = ctx.one();
    for j in 0..n {
        if naive_gcd(j, n) == 1 {
            primitive.insert(ctx.index(&cur));
        }
        cur = ctx.mul(&cur, &g);
    }
    let mut count = 0;
    for idx in 1..ctx.order() {
        if !primitive.contains(&idx) {
            continue;
        }
        let a = ctx.from_index(idx);
        let mut b = ctx.mul(&a, &a);
        b = ctx.add(&b, &a);
        b = ctx.add(&b, &ctx.one());
        if b.is_zero() || !primitive.contains(&ctx.index(&b)) {
            continue;
        }
        if is_normal_by_rank(ctx, &a) && is_normal_by_rank(ctx, &b) {
            count += 1;
        }
    }
    count
}

/// Literal `e`-freeness: no `d | e`, `d > 1`, with `a = b^d` solvable.
pub fn is_e_free_by_definition(ctx: &FieldCtx, a: &FFElement, e: u64) -> bool {
    (2..=e).filter(|d| e % d == 0).all(|d| ctx.elements().all(|b| ctx.pow(&b, d as u128) != *a))
}

/// Literal `g`-freeness: `a = h∘b` with `h | g` forces `h = 1`.
pub fn is_g_free_by_definition(ctx: &FieldCtx, a: &FFElement, g: &Poly, divisors: &[Poly]) -> bool {
    let f = ctx.base();
    divisors
        .iter()
        .filter(|h| !h.is_one() && g.rem(h, f).unwrap().is_zero())
        .all(|h| ctx.elements().all(|b| ctx.poly_action(h, &b) != *a))
}
