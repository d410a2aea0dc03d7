//! Factorization of `x^n - 1` over `F_q` through q-cyclotomic cosets.
//!
//! Write `n = n'·p^e` with `gcd(n', p) = 1`. Each coset `C` of multiplication by
//! `q` on `Z/n'` yields the irreducible factor `Π_{j∈C} (x - ζ^j)`, where `ζ` is a
//! primitive `n'`-th root of unity in `F_{q^m}`, `m = ord_{n'}(q)`. Every factor of
//! `x^n - 1` then carries multiplicity `p^e`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::int::{factor_int, pow_mod};
use crate::error::{Error, Result};
use crate::field::base::BaseField;
use crate::field::irreducible::{is_irreducible, smallest_irreducible};
use crate::field::poly::Poly;

/// Splits `n = n'·p^e` with `p ∤ n'`, returning `(n', p^e)`.
pub fn split_coprime(n: u64, p: u64) -> (u64, u64) {
    let (mut rest, mut pe) = (n, 1u64);
    while rest % p == 0 {
        rest /= p;
        pe *= p;
    }
    (rest, pe)
}

/// Orbits of `j ↦ j·q (mod modulus)`, each sorted, ordered by least representative.
pub fn cyclotomic_cosets(q_mod: u64, modulus: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for start in 0..modulus {
        if seen[start as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut j = start;
        while !seen[j as usize] {
            seen[j as usize] = true;
            coset.push(j);
            j = ((j as u128 * q_mod as u128) % modulus as u128) as u64;
        }
        coset.sort_unstable();
        out.push(coset);
    }
    out
}

/// `Ω_q(x^n - 1)` for `q = p^k`, computed from the coset count alone.
pub fn omega_xn_minus_1(p: u64, k: u32, n: u64) -> u32 {
    let (n_prime, _) = split_coprime(n, p);
    let q_mod = pow_mod(p, k as u128, n_prime);
    cyclotomic_cosets(q_mod, n_prime).len() as u32
}

fn multiplicative_order_mod(q: u64, modulus: u64) -> u32 {
    if modulus == 1 {
        return 1;
    }
    let mut m = 1u32;
    let mut cur = q % modulus;
    while cur != 1 {
        cur = ((cur as u128 * q as u128) % modulus as u128) as u64;
        m += 1;
    }
    m
}

/// A monic divisor of a factored polynomial, by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyDivisor {
    exps: Vec<u32>,
    poly: Poly,
}

impl PolyDivisor {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &PolyDivisor) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

/// A monic polynomial with its factorization into monic irreducibles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredPoly {
    q: u64,
    poly: Poly,
    factors: Vec<(Poly, u32)>,
}

impl FactoredPoly {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    /// Number of distinct monic irreducible factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn build(&self, exps: Vec<u32>, base: &BaseField) -> PolyDivisor {
        let poly = self
            .factors
            .iter()
            .zip(&exps)
            .fold(Poly::one(), |acc, ((f, _), &e)| acc.mul(&f.pow(e, base), base));
        PolyDivisor { exps, poly }
    }

    pub fn divisor_from_exps(&self, exps: Vec<u32>, base: &BaseField) -> Result<PolyDivisor> {
        if exps.len() != self.factors.len() || exps.iter().zip(&self.factors).any(|(&e, (_, m))| e > *m) {
            return Err(Error::NotADivisor(format!("exponents {exps:?}")));
        }
        Ok(self.build(exps, base))
    }

    /// The divisor equal to the whole polynomial.
    pub fn full(&self, base: &BaseField) -> PolyDivisor {
        self.build(self.factors.iter().map(|&(_, m)| m).collect(), base)
    }

    pub fn unit(&self) -> PolyDivisor {
        PolyDivisor { exps: vec![0; self.factors.len()], poly: Poly::one() }
    }

    /// Locates a polynomial in the divisor lattice; it is made monic first.
    pub fn divisor_from_poly(&self, g: &Poly, base: &BaseField) -> Result<PolyDivisor> {
        if g.is_zero() {
            return Err(Error::NotADivisor("0".into()));
        }
        let mut rest = g.make_monic(base);
        let mut exps = Vec::with_capacity(self.factors.len());
        for (f, m) in &self.factors {
            let mut e = 0;
            while e < *m {
                let (qt, r) = rest.divrem(f, base)?;
                if !r.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            exps.push(e);
        }
        if !rest.is_one() {
            return Err(Error::NotADivisor(g.render()));
        }
        Ok(self.build(exps, base))
    }

    /// Every monic divisor, ordered by degree then canonically.
    pub fn all_divisors(&self, base: &BaseField) -> Vec<PolyDivisor> {
        let mut exps_list: Vec<Vec<u32>> = vec![Vec::new()];
        for &(_, m) in &self.factors {
            exps_list = exps_list
                .into_iter()
                .flat_map(|prefix| {
                    (0..=m).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<PolyDivisor> = exps_list.into_iter().map(|e| self.build(e, base)).collect();
        out.sort_by(|a, b| a.poly.canonical_cmp(&b.poly));
        out
    }

    /// All `2^Ω` squarefree monic divisors with their Möbius values `μ'`.
    pub fn squarefree_divisors(&self, base: &BaseField) -> Vec<(PolyDivisor, i32)> {
        let mut out: Vec<(PolyDivisor, i32)> = self
            .all_divisors(base)
            .into_iter()
            .filter(|d| d.is_squarefree())
            .map(|d| {
                let s = d.exps.iter().filter(|&&e| e == 1).count();
                (d, if s % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        out.sort_by(|a, b| a.0.poly.canonical_cmp(&b.0.poly));
        out
    }

    /// `μ'(g)`: `(-1)^s` for a product of `s` distinct irreducibles, else 0.
    pub fn mu_prime(&self, g: &PolyDivisor) -> i32 {
        if !g.is_squarefree() {
            return 0;
        }
        if g.exps.iter().filter(|&&e| e == 1).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `Φ_q(g) = |(F_q[x]/g)^*|`.
    pub fn phi_of(&self, g: &PolyDivisor) -> Result<u128> {
        let q = self.q as u128;
        let mut acc: u128 = 1;
        for ((f, _), &e) in self.factors.iter().zip(&g.exps) {
            if e == 0 {
                continue;
            }
            let d = f.deg() as u32;
            let hi = q.checked_pow(d * e).ok_or(Error::Overflow("Phi_q"))?;
            let lo = q.checked_pow(d * (e - 1)).ok_or(Error::Overflow("Phi_q"))?;
            acc = acc.checked_mul(hi - lo).ok_or(Error::Overflow("Phi_q"))?;
        }
        Ok(acc)
    }
}

/// `Φ_q` of the whole factored polynomial.
pub fn poly_phi(fp: &FactoredPoly) -> Result<u128> {
    let all = PolyDivisor { exps: fp.factors.iter().map(|&(_, m)| m).collect(), poly: fp.poly.clone() };
    fp.phi_of(&all)
}

/// Elements of `E = F_q[z]/(r)` are polynomials of degree `< deg r`.
struct Extension<'a> {
    base: &'a BaseField,
    r: Poly,
}

impl Extension<'_> {
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mulmod(b, &self.r, self.base)
    }

    fn pow_big(&self, a: &Poly, e: &BigUint) -> Poly {
        let bits = e.bits();
        a.powmod_bits((0..bits).rev().map(|i| e.bit(i)), &self.r, self.base)
    }

    fn pow(&self, a: &Poly, e: u64) -> Poly {
        a.powmod(e as u128, &self.r, self.base)
    }
}

/// Factors `x^n - 1` over `F_q` into monic irreducibles in canonical order.
pub fn factor_xn_minus_1(base: &BaseField, n: u32) -> Result<FactoredPoly> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let q = base.q();
    let target = Poly::x_pow_minus_one(base, n as usize);
    let (n_prime, pe) = split_coprime(n as u64, base.p());
    let mult = pe as u32;

    let mut factors: Vec<(Poly, u32)> = if n_prime == 1 {
        vec![(Poly::from_coeffs(vec![base.neg(1), 1]), mult)]
    } else {
        let m = multiplicative_order_mod(q % n_prime, n_prime);
        let ext = Extension { base, r: smallest_irreducible(base, m)? };
        let zeta = primitive_root_of_unity(&ext, q, m, n_prime)?;
        let powers: Vec<Poly> = (0..n_prime).map(|j| ext.pow(&zeta, j)).collect();
        let q_mod = q % n_prime;
        cyclotomic_cosets(q_mod, n_prime)
            .into_iter()
            .map(|coset| coset_polynomial(&ext, &coset, &powers).map(|f| (f, mult)))
            .collect::<Result<_>>()?
    };
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));

    let rebuilt = factors
        .iter()
        .fold(Poly::one(), |acc, (f, e)| acc.mul(&f.pow(*e, base), base));
    if rebuilt != target {
        return Err(Error::InvalidParameter(format!(
            "coset factorization of x^{n} - 1 over F_{q} failed to reconstruct"
        )));
    }
    if let Some((f, _)) = factors.iter().find(|(f, _)| !is_irreducible(f, base)) {
        return Err(Error::InvalidParameter(format!("coset factor {f} is reducible")));
    }
    Ok(FactoredPoly { q, poly: target, factors })
}

/// Finds an element of exact order `n'` in `F_{q^m}` by powering candidates to `(q^m - 1)/n'`.
fn primitive_root_of_unity(ext: &Extension<'_>, q: u64, m: u32, n_prime: u64) -> Result<Poly> {
    let group = BigUint::from(q).pow(m) - 1u32;
    let cofactor = &group / n_prime;
    let primes: Vec<u64> = factor_int(n_prime as u128)?.primes().collect();
    let q128 = q as u128;
    let total = q128.checked_pow(m).unwrap_or(u128::MAX);
    let mut t: u128 = 1;
    while t < total {
        let mut coeffs = Vec::with_capacity(m as usize);
        let mut rest = t;
        for _ in 0..m {
            coeffs.push((rest % q128) as u64);
            rest /= q128;
        }
        let cand = ext.pow_big(&Poly::from_coeffs(coeffs), &cofactor);
        if primes.iter().all(|&l| !ext.pow(&cand, n_prime / l).is_one()) {
            return Ok(cand);
        }
        t += 1;
    }
    Err(Error::InvalidParameter(format!("no primitive {n_prime}-th root of unity in F_{{{q}^{m}}}")))
}

/// `Π_{j∈C} (x - ζ^j)`; its coefficients must lie in `F_q`.
fn coset_polynomial(ext: &Extension<'_>, coset: &[u64], powers: &[Poly]) -> Result<Poly> {
    let base = ext.base;
    let mut coeffs: Vec<Poly> = vec![Poly::one()];
    for &j in coset {
        let root = &powers[j as usize];
        let mut next = vec![Poly::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c, base);
            next[i] = next[i].sub(&ext.mul(c, root), base);
        }
        coeffs = next;
    }
    let flat = coeffs
        .iter()
        .map(|c| match c.degree() {
            None => Ok(0),
            Some(0) => Ok(c.coeff(0)),
            _ => Err(Error::InvalidParameter("coset polynomial not defined over F_q".into())),
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(Poly::from_coeffs(flat))
}
