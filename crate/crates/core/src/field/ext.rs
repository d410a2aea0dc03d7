//! The tower `F_p ⊂ F_q ⊂ F_{q^n}` with `F_{q^n} = F_q[x]/(m)`.

use std::fmt;

use serde::Serialize;

use crate::arith::cyclo::{factor_xn_minus_1, FactoredPoly};
use crate::arith::int::{factor_int, FactoredInt};
use crate::caps::SizeCaps;
use crate::error::{Error, Result};
use crate::field::base::BaseField;
use crate::field::irreducible::smallest_irreducible;
use crate::field::poly::Poly;

/// An element of `F_{q^n}`: `n` packed `F_q` coefficients of `1, x, …, x^{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FFElement(Vec<u64>);

impl FFElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::from_coeffs(self.0.clone()).render())
    }
}

/// Discrete logarithms base the context generator, for every nonzero element.
#[derive(Debug, Clone)]
pub struct DlogTable {
    /// `exp[j]` is the index of `gen^j`.
    exp: Vec<u32>,
    /// `log[index]` is `j`; `u32::MAX` marks zero.
    log: Vec<u32>,
}

impl DlogTable {
    pub fn log_index(&self, index: u64) -> Option<u64> {
        match self.log[index as usize] {
            u32::MAX => None,
            j => Some(j as u64),
        }
    }

    pub fn exp_index(&self, j: u64) -> u64 {
        self.exp[(j % self.exp.len() as u64) as usize] as u64
    }

    pub fn len(&self) -> usize {
        self.exp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exp.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    base: BaseField,
    n: u32,
    order: u64,
    modulus: Poly,
    /// `x^{jq} mod m` for `j < n`: the columns of the q-Frobenius as an `F_q`-linear map.
    frob_images: Vec<FFElement>,
    /// Absolute trace of each `F_p`-basis element `y^j x^i`, stored at `i * k + j`.
    basis_traces: Vec<u64>,
    group_order: FactoredInt,
    xn1: FactoredPoly,
    gen: FFElement,
    dlog: Option<DlogTable>,
}

impl FieldCtx {
    /// Builds `F_{q^n}` without a discrete-log table.
    pub fn new(p: u64, k: u32, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("extension degree n must be positive".into()));
        }
        let base = BaseField::new(p, k)?;
        let order = (base.q() as u128)
            .checked_pow(n)
            .filter(|&o| o <= u64::MAX as u128)
            .ok_or(Error::CapExceeded {
                what: "field order q^n",
                size: u128::MAX,
                cap: u64::MAX as u128,
            })? as u64;
        let modulus = smallest_irreducible(&base, n)?;
        let xn1 = factor_xn_minus_1(&base, n)?;
        let group_order = factor_int(order as u128 - 1)?;
        let mut ctx = FieldCtx {
            base,
            n,
            order,
            modulus,
            frob_images: Vec::new(),
            basis_traces: Vec::new(),
            group_order,
            xn1,
            gen: FFElement(Vec::new()),
            dlog: None,
        };
        ctx.frob_images = (0..n as usize)
            .map(|j| {
                let e = (ctx.base.q() as u128) * j as u128;
                let r = Poly::x().powmod(e, &ctx.modulus, &ctx.base);
                ctx.from_poly(&r)
            })
            .collect();
        ctx.basis_traces = ctx.compute_basis_traces();
        ctx.gen = ctx.find_generator();
        Ok(ctx)
    }

    /// Builds `F_{q^n}` together with its discrete-log table.
    pub fn with_dlog(p: u64, k: u32, n: u32, caps: &SizeCaps) -> Result<Self> {
        check_order_cap(p, k, n, caps.enumeration_cap.min(u32::MAX as u64))?;
        let mut ctx = Self::new(p, k, n)?;
        ctx.dlog = Some(ctx.build_dlog());
        Ok(ctx)
    }

    fn compute_basis_traces(&self) -> Vec<u64> {
        let k = self.base.k() as usize;
        let mut out = Vec::with_capacity(self.n as usize * k);
        for i in 0..self.n as usize {
            let mut place = 1u64;
            for _ in 0..k {
                let mut coeffs = vec![0u64; self.n as usize];
                coeffs[i] = place;
                out.push(self.abs_trace_by_powers(&FFElement(coeffs)));
                place = place.wrapping_mul(self.base.p());
            }
        }
        out
    }

    fn find_generator(&self) -> FFElement {
        (1..self.order)
            .map(|idx| self.from_index(idx))
            .find(|a| self.has_full_order(a))
            .expect("F*_{q^n} is cyclic")
    }

    fn has_full_order(&self, a: &FFElement) -> bool {
        let big = self.order as u128 - 1;
        self.group_order.primes().all(|l| !self.is_one(&self.pow(a, big / l as u128)))
    }

    fn build_dlog(&self) -> DlogTable {
        let size = self.order as usize;
        let mut exp = Vec::with_capacity(size - 1);
        let mut log = vec![u32::MAX; size];
        let mut cur = self.one();
        for j in 0..size - 1 {
            let idx = self.index(&cur) as usize;
            assert_eq!(log[idx], u32::MAX, "generator power repeated early");
            exp.push(idx as u32);
            log[idx] = j as u32;
            cur = self.mul(&cur, &self.gen);
        }
        assert!(self.is_one(&cur), "generator order differs from q^n - 1");
        DlogTable { exp, log }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn k(&self) -> u32 {
        self.base.k()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field size `q^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Factorization of `q^n - 1`.
    pub fn group_order(&self) -> &FactoredInt {
        &self.group_order
    }

    /// Factorization of `x^n - 1` over `F_q`.
    pub fn xn_minus_1(&self) -> &FactoredPoly {
        &self.xn1
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generator(&self) -> &FFElement {
        &self.gen
    }

    pub fn dlog_table(&self) -> Option<&DlogTable> {
        self.dlog.as_ref()
    }

    pub fn dlog(&self, a: &FFElement) -> Result<u64> {
        let t = self.dlog.as_ref().ok_or(Error::NoDlogTable)?;
        t.log_index(self.index(a)).ok_or(Error::ZeroElement)
    }

    pub fn gen_pow(&self, j: u64) -> Result<FFElement> {
        let t = self.dlog.as_ref().ok_or(Error::NoDlogTable)?;
        Ok(self.from_index(t.exp_index(j)))
    }

    pub fn zero(&self) -> FFElement {
        FFElement(vec![0; self.n as usize])
    }

    pub fn one(&self) -> FFElement {
        self.from_base(1)
    }

    /// Embeds an `F_q` element.
    pub fn from_base(&self, c: u64) -> FFElement {
        let mut v = vec![0; self.n as usize];
        v[0] = c;
        FFElement(v)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElement> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.q()) {
            return Err(Error::InvalidParameter(format!("{coeffs:?} is not a reduced element")));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.n as usize, 0);
        Ok(FFElement(v))
    }

    /// Reduces an arbitrary polynomial over `F_q` modulo `m`.
    pub fn from_poly(&self, f: &Poly) -> FFElement {
        let r = f.rem(&self.modulus, &self.base).expect("nonzero modulus");
        let mut v = r.coeffs().to_vec();
        v.resize(self.n as usize, 0);
        FFElement(v)
    }

    /// The residue class of `x`.
    pub fn x(&self) -> FFElement {
        self.from_poly(&Poly::x())
    }

    /// Integer encoding: `Σ c_i q^i` where `c_i` is the packed coefficient of `x^i`.
    pub fn index(&self, a: &FFElement) -> u64 {
        a.0.iter().rev().fold(0u64, |acc, &c| acc * self.q() + c)
    }

    pub fn from_index(&self, mut idx: u64) -> FFElement {
        let q = self.q();
        let mut v = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            v.push(idx % q);
            idx /= q;
        }
        FFElement(v)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FFElement> + '_ {
        (0..self.order).map(|i| self.from_index(i))
    }

    pub fn is_one(&self, a: &FFElement) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// `true` when `a` lies in the subfield `F_q`.
    pub fn is_in_base(&self, a: &FFElement) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &FFElement) -> FFElement {
        FFElement(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    /// Multiplication by an `F_q` scalar.
    pub fn scale(&self, c: u64, a: &FFElement) -> FFElement {
        FFElement(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        let n = self.n as usize;
        let f = &self.base;
        if n == 1 {
            return FFElement(vec![f.mul(a.0[0], b.0[0])]);
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        let m = self.modulus.coeffs();
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..n {
                if m[j] != 0 {
                    prod[i - n + j] = f.sub(prod[i - n + j], f.mul(c, m[j]));
                }
            }
        }
        prod.truncate(n);
        FFElement(prod)
    }

    pub fn square(&self, a: &FFElement) -> FFElement {
        self.mul(a, a)
    }

    /// Square-and-multiply; the exponent is a full 128-bit value.
    pub fn pow(&self, a: &FFElement, e: u128) -> FFElement {
        let mut acc = self.one();
        let nbits = 128 - e.leading_zeros();
        for i in (0..nbits).rev() {
            acc = self.mul(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FFElement) -> Result<FFElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order as u128 - 2))
    }

    /// `a^{q^i}` with `i` taken mod `n`.
    pub fn frobenius(&self, a: &FFElement, i: u64) -> FFElement {
        let mut cur = a.clone();
        for _ in 0..(i % self.n as u64) {
            cur = self.frob_once(&cur);
        }
        cur
    }

    fn frob_once(&self, a: &FFElement) -> FFElement {
        let mut out = self.zero();
        for (j, &c) in a.0.iter().enumerate() {
            if c != 0 {
                out = self.add(&out, &self.scale(c, &self.frob_images[j]));
            }
        }
        out
    }

    /// The `F_q[x]`-module action `f ∘ a = Σ_i f_i a^{q^i}`, constant term included.
    pub fn poly_action(&self, f: &Poly, a: &FFElement) -> FFElement {
        let mut acc = self.zero();
        let mut cur = a.clone();
        for (i, &c) in f.coeffs().iter().enumerate() {
            if c != 0 {
                acc = self.add(&acc, &self.scale(c, &cur));
            }
            if i + 1 < f.coeffs().len() {
                cur = self.frob_once(&cur);
            }
        }
        acc
    }

    /// Absolute trace to `F_p` as the literal power sum `Σ_{j<kn} a^{p^j}`.
    pub fn abs_trace_by_powers(&self, a: &FFElement) -> u64 {
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..(self.k() * self.n) {
            acc = self.add(&acc, &cur);
            cur = self.pow(&cur, self.p() as u128);
        }
        assert!(self.is_in_base(&acc) && acc.0[0] < self.p(), "trace must lie in F_p");
        acc.0[0]
    }

    /// Absolute trace to `F_p`, evaluated as an `F_p`-linear functional.
    pub fn abs_trace(&self, a: &FFElement) -> u64 {
        let p = self.p();
        let k = self.k() as usize;
        let mut acc: u128 = 0;
        for (i, &c) in a.0.iter().enumerate() {
            let mut c = c;
            for j in 0..k {
                acc += (c % p) as u128 * self.basis_traces[i * k + j] as u128;
                c /= p;
            }
        }
        (acc % p as u128) as u64
    }

    /// Coefficients `Tr(δ·b)` over the `F_p`-basis `b = y^j x^i`, in index-digit order.
    pub fn trace_functional(&self, delta: &FFElement) -> Vec<u64> {
        let k = self.k() as usize;
        let mut out = Vec::with_capacity(self.n as usize * k);
        for i in 0..self.n as usize {
            let mut place = 1u64;
            for _ in 0..k {
                let mut coeffs = vec![0u64; self.n as usize];
                coeffs[i] = place;
                out.push(self.abs_trace(&self.mul(delta, &FFElement(coeffs))));
                place = place.wrapping_mul(self.p());
            }
        }
        out
    }

    /// `F_p` digits of an element in the basis `y^j x^i`, matching [`Self::trace_functional`].
    pub fn prime_digits(&self, a: &FFElement) -> Vec<u64> {
        a.0.iter().flat_map(|&c| self.base.digits(c)).collect()
    }

    /// `a² + a + 1`.
    pub fn quad(&self, a: &FFElement) -> FFElement {
        self.add(&self.add(&self.square(a), a), &self.one())
    }
}

/// Fails with `CapExceeded` when `p^{kn}` exceeds `cap`.
pub fn check_order_cap(p: u64, k: u32, n: u32, cap: u64) -> Result<()> {
    let size = (p as u128).checked_pow(k.saturating_mul(n)).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded { what: "field order q^n", size, cap: cap as u128 });
    }
    Ok(())
}

/// Builds the context for `F_{(p^k)^n}` with its discrete-log table.
pub fn make_field_ctx(p: u64, k: u32, n: u32, caps: &SizeCaps) -> Result<FieldCtx> {
    FieldCtx::with_dlog(p, k, n, caps)
}
