//! Arithmetic in `F_q = F_p[y]/(h)`.
//!
//! An element is packed into a `u64` as base-`p` digits, the coefficient of
//! `y^j` being digit `j`. For `k = 1` this is the residue itself.

use crate::arith::int::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::field::irreducible::smallest_irreducible;
use crate::field::poly::Poly;

/// Log/antilog tables make `F_q` multiplication O(1) when `q` is small.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct BaseField {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial `h` over `F_p`, low degree first.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

impl BaseField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(BaseField { p, k: 1, q: p, modulus: vec![0, 1], tables: None })
    }

    /// `F_{p^k}` defined by the lexicographically smallest monic irreducible of degree `k`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let fp = Self::prime(p)?;
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree k must be positive".into()));
        }
        if k == 1 {
            return Ok(fp);
        }
        let q = (p as u128)
            .checked_pow(k)
            .filter(|&q| q <= u64::MAX as u128)
            .ok_or(Error::Overflow("q = p^k"))? as u64;
        let h = smallest_irreducible(&fp, k)?;
        let mut field = BaseField { p, k, q, modulus: h.coeffs().to_vec(), tables: None };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q - 1;
        let primes: Vec<u64> = crate::arith::int::factor_int(order as u128)
            .expect("q - 1 < 2^64")
            .primes()
            .collect();
        let g = (2..self.q)
            .find(|&c| primes.iter().all(|&l| self.pow_slow(c, (order / l) as u128) != 1))
            .expect("multiplicative group of a field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = 1u64;
        for j in 0..order {
            exp.push(cur);
            log[cur as usize] = j as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Defining polynomial over `F_p` (low degree first); `x` when `k = 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p + d % self.p)
    }

    /// Embeds an `F_p` residue.
    pub fn from_prime(&self, c: u64) -> u64 {
        c % self.p
    }

    #[inline]
    fn add_p(&self, a: u64, b: u64) -> u64 {
        if a >= self.p - b {
            a - (self.p - b)
        } else {
            a + b
        }
    }

    #[inline]
    fn sub_p(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return self.add_p(a, b);
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for j in 0..self.k {
            let d = self.add_p(a % self.p, b % self.p);
            out += d * place;
            a /= self.p;
            b /= self.p;
            if j + 1 < self.k {
                place *= self.p;
            }
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return self.sub_p(0, a);
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for j in 0..self.k {
            out += self.sub_p(0, a % self.p) * place;
            a /= self.p;
            if j + 1 < self.k {
                place *= self.p;
            }
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return self.sub_p(a, b);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return mul_mod(a, b, self.p);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                t.exp[(s % (self.q - 1)) as usize]
            }
            None => self.mul_slow(a, b),
        }
    }

    /// Schoolbook product of digit vectors reduced by `h`.
    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = self.add_p(prod[i + j], mul_mod(x, y, self.p));
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let t = mul_mod(c, self.modulus[j], self.p);
                prod[i - k + j] = self.sub_p(prod[i - k + j], t);
            }
        }
        self.from_digits(&prod[..k])
    }

    fn pow_slow(&self, a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u64, e: u128) -> u64 {
        if self.k == 1 {
            return pow_mod(a, e, self.p);
        }
        if let Some(t) = &self.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let l = (t.log[a as usize] as u128 * (e % (self.q - 1) as u128)) % (self.q - 1) as u128;
            return t.exp[l as usize];
        }
        self.pow_slow(a, e)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u128 - 2))
    }

    /// Trace from `F_q` down to `F_p`: `Σ_{j<k} a^{p^j}`, returned as a residue.
    pub fn trace_to_prime(&self, a: u64) -> u64 {
        let mut acc = 0u64;
        let mut cur = a;
        for _ in 0..self.k {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u128);
        }
        debug_assert!(acc < self.p, "trace must land in the prime field");
        acc
    }

    /// The defining polynomial as a [`Poly`] over the prime field.
    pub fn modulus_poly(&self) -> Poly {
        Poly::from_coeffs(self.modulus.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f5 = BaseField::prime(5).unwrap();
        assert_eq!(f5.add(2, 4), 1);
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f5.sub(1, 3), 3);
        assert_eq!(f5.inv(0), Err(Error::DivisionByZero));
        assert_eq!(BaseField::prime(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn f25_modulus_is_smallest_irreducible() {
        let f25 = BaseField::new(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
        assert_eq!(f25.q(), 25);
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = BaseField::new(3, 3).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn subfield_trace_is_linear_and_onto() {
        let f = BaseField::new(2, 4).unwrap();
        let mut seen = [false; 2];
        for a in 0..16 {
            seen[f.trace_to_prime(a) as usize] = true;
            for b in 0..16 {
                assert_eq!(
                    f.trace_to_prime(f.add(a, b)),
                    (f.trace_to_prime(a) + f.trace_to_prime(b)) % 2
                );
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
