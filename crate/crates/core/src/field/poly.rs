//! Dense univariate polynomials over a [`BaseField`].

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::base::BaseField;

/// Coefficients low degree first, no trailing zeros. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u64, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(f: &BaseField, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = f.neg(1);
        coeffs[n] = f.add(coeffs[n], 1);
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly, f: &BaseField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &BaseField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: u64, f: &BaseField) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &BaseField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: u32, f: &BaseField) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }

    pub fn divrem(&self, divisor: &Poly, f: &BaseField) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, f: &BaseField) -> Result<Poly> {
        Ok(self.divrem(divisor, f)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly, f: &BaseField) -> Result<Poly> {
        let (q, r) = self.divrem(divisor, f)?;
        if !r.is_zero() {
            return Err(Error::NotADivisor(format!("{divisor:?} does not divide {self:?}")));
        }
        Ok(q)
    }

    pub fn make_monic(&self, f: &BaseField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, f)
    }

    pub fn gcd(&self, other: &Poly, f: &BaseField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("b nonzero");
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly, f: &BaseField) -> Poly {
        self.mul(other, f).rem(modulus, f).expect("nonzero modulus")
    }

    /// `self^e mod modulus` by square-and-multiply over the bits of `e` (most significant first).
    pub fn powmod_bits(&self, bits: impl Iterator<Item = bool>, modulus: &Poly, f: &BaseField) -> Poly {
        let base = self.rem(modulus, f).expect("nonzero modulus");
        let mut acc = Poly::one().rem(modulus, f).expect("nonzero modulus");
        for bit in bits {
            acc = acc.mulmod(&acc, modulus, f);
            if bit {
                acc = acc.mulmod(&base, modulus, f);
            }
        }
        acc
    }

    pub fn powmod(&self, e: u128, modulus: &Poly, f: &BaseField) -> Poly {
        let nbits = 128 - e.leading_zeros();
        self.powmod_bits((0..nbits).rev().map(|i| (e >> i) & 1 == 1), modulus, f)
    }

    pub fn eval(&self, x: u64, f: &BaseField) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Reverses the coefficient order: `x^deg · self(1/x)`.
    pub fn reciprocal(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::from_coeffs(c)
    }

    /// Canonical order: by degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Human-readable rendering with `F_q` coefficients printed as packed integers.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}
