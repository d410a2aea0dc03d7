//! Rabin irreducibility test and deterministic modulus selection.

use crate::arith::int::factor_int;
use crate::error::{Error, Result};
use crate::field::base::BaseField;
use crate::field::poly::Poly;

/// `x^(q^j) mod f`, obtained by `j` successive q-th powers.
fn x_pow_q_iter(f: &Poly, base: &BaseField, j: u32) -> Poly {
    let mut cur = Poly::x().rem(f, base).expect("nonzero modulus");
    for _ in 0..j {
        cur = cur.powmod(base.q() as u128, f, base);
    }
    cur
}

/// Rabin's test: a polynomial of degree `d` over `F_q` is irreducible iff
/// `x^(q^d) ≡ x (mod f)` and `gcd(x^(q^(d/ℓ)) - x, f) = 1` for every prime `ℓ | d`.
pub fn is_irreducible(f: &Poly, base: &BaseField) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d as u32,
    };
    let f = f.make_monic(base);
    let x = Poly::x();
    if x_pow_q_iter(&f, base, d) != x.rem(&f, base).expect("nonzero") {
        return false;
    }
    let primes: Vec<u64> = factor_int(d as u128).expect("small").primes().collect();
    primes.iter().all(|&l| {
        let h = x_pow_q_iter(&f, base, d / l as u32).sub(&x, base);
        h.gcd(&f, base).is_one()
    })
}

/// Decodes the `t`-th monic polynomial of degree `degree` in lexicographic order:
/// the tail coefficients are the base-q digits of `t`, constant term least significant.
pub fn monic_from_index(base: &BaseField, degree: u32, mut t: u128) -> Poly {
    let q = base.q() as u128;
    let mut coeffs = Vec::with_capacity(degree as usize + 1);
    for _ in 0..degree {
        coeffs.push((t % q) as u64);
        t /= q;
    }
    coeffs.push(1);
    Poly::from_coeffs(coeffs)
}

/// Lexicographically smallest monic irreducible polynomial of the given degree.
pub fn smallest_irreducible(base: &BaseField, degree: u32) -> Result<Poly> {
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    if degree == 1 {
        return Ok(Poly::x());
    }
    let count = (base.q() as u128).checked_pow(degree);
    let mut t = 0u128;
    loop {
        if count.is_some_and(|c| t >= c) {
            return Err(Error::NoIrreducibleFound { degree });
        }
        let cand = monic_from_index(base, degree, t);
        // Skip anything with a zero constant term: divisible by x.
        if cand.coeff(0) != 0 && is_irreducible(&cand, base) {
            return Ok(cand);
        }
        t += 1;
    }
}
