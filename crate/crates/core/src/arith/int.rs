//! Integer factorization and the multiplicative arithmetic functions built on it.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
/// Deterministic Miller–Rabin witnesses, sufficient for every n < 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard rho. `c` selects the polynomial x² + c.
fn brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let m = 128u64;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u64) -> u64 {
    // Fixed seed sequence c = 1, 2, 3, ... keeps runs reproducible.
    (1..)
        .find_map(|c| brent(n, c))
        .expect("Pollard rho exhausts seeds only on primes")
}

fn push_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = split_composite(n);
    push_prime_factors(d, out);
    push_prime_factors(n / d, out);
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    value: u128,
    factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    /// Builds a record from an explicit factor list, checking the product.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value: u128 = 1;
        for &(l, e) in &factors {
            if e == 0 || !is_prime(l) {
                return Err(Error::InvalidParameter(format!("bad factor {l}^{e}")));
            }
            for _ in 0..e {
                value = value.checked_mul(l as u128).ok_or(Error::Overflow("factor product"))?;
            }
        }
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!("repeated prime {}", w[0].0)));
            }
        }
        Ok(FactoredInt { value, factors })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(l, _)| l)
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn euler_phi(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &(l, e)| {
            acc * (l as u128 - 1) * (l as u128).pow(e - 1)
        })
    }

    pub fn mobius(&self) -> i32 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Factorization of a divisor `d` of this number, reusing the known primes.
    pub fn factor_divisor(&self, d: u128) -> Result<FactoredInt> {
        if d == 0 || self.value % d != 0 {
            return Err(Error::NotADivisor(d.to_string()));
        }
        let mut rest = d;
        let mut factors = Vec::new();
        for &(l, _) in &self.factors {
            let mut e = 0;
            while rest % l as u128 == 0 {
                rest /= l as u128;
                e += 1;
            }
            if e > 0 {
                factors.push((l, e));
            }
        }
        debug_assert_eq!(rest, 1);
        Ok(FactoredInt { value: d, factors })
    }

    /// All squarefree divisors with their Möbius values, sorted by divisor.
    pub fn squarefree_divisors(&self) -> Vec<(u128, i32)> {
        let mut out = vec![(1u128, 1i32)];
        for &(l, _) in &self.factors {
            let extra: Vec<_> = out.iter().map(|&(d, mu)| (d * l as u128, -mu)).collect();
            out.extend(extra);
        }
        out.sort_unstable();
        out
    }

    /// Every positive divisor, sorted.
    pub fn divisors(&self) -> Vec<u128> {
        let mut out = vec![1u128];
        for &(l, e) in &self.factors {
            let mut extra = Vec::new();
            for &d in &out {
                let mut m = d;
                for _ in 0..e {
                    m *= l as u128;
                    extra.push(m);
                }
            }
            out.extend(extra);
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|&(l, e)| format!("{l}^{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Trial division up to 10^6, Pollard–Brent on the remaining cofactor.
pub fn factor_int(n: u128) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::InvalidParameter("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut primes: Vec<u64> = Vec::new();
    let mut d = 2u64;
    while d < TRIAL_DIVISION_LIMIT && (d as u128) * (d as u128) <= rest {
        while rest % d as u128 == 0 {
            rest /= d as u128;
            primes.push(d);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let cofactor = u64::try_from(rest).map_err(|_| Error::TooLarge(rest))?;
        push_prime_factors(cofactor, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for l in primes {
        match factors.last_mut() {
            Some((p, e)) if *p == l => *e += 1,
            _ => factors.push((l, 1)),
        }
    }
    Ok(FactoredInt { value: n, factors })
}

pub fn euler_phi(fi: &FactoredInt) -> u128 {
    fi.euler_phi()
}

pub fn mobius(fi: &FactoredInt) -> i32 {
    fi.mobius()
}

pub fn squarefree_divisors(fi: &FactoredInt) -> Vec<(u128, i32)> {
    fi.squarefree_divisors()
}

/// First `m` primes, by simple sieve growth.
pub fn first_primes(m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    let mut c = 2u64;
    while out.len() < m {
        if is_prime(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Optional on-disk factorization cache.
///
/// Format: one record per line, `N<TAB>l1^e1 l2^e2 ...`. Records are loaded at
/// open time and every newly factored value is appended.
pub struct FactorCache {
    path: PathBuf,
    entries: RwLock<HashMap<u128, FactoredInt>>,
    writer: Mutex<File>,
}

impl FactorCache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(|e| Error::Cache(e.to_string()))?;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| Error::Cache(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec = parse_cache_line(&line)
                    .ok_or_else(|| Error::Cache(format!("line {}: malformed record", lineno + 1)))?;
                entries.insert(rec.value, rec);
            }
        }
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::Cache(e.to_string()))?;
        Ok(FactorCache { path, entries: RwLock::new(entries), writer: Mutex::new(writer) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: u128) -> Option<FactoredInt> {
        self.entries.read().expect("cache lock").get(&n).cloned()
    }

    pub fn factor(&self, n: u128) -> Result<FactoredInt> {
        if let Some(hit) = self.get(n) {
            return Ok(hit);
        }
        let fi = factor_int(n)?;
        let mut entries = self.entries.write().expect("cache lock");
        if entries.insert(n, fi.clone()).is_none() {
            let mut w = self.writer.lock().expect("cache writer lock");
            writeln!(w, "{}", format_cache_line(&fi)).map_err(|e| Error::Cache(e.to_string()))?;
        }
        Ok(fi)
    }
}

pub fn format_cache_line(fi: &FactoredInt) -> String {
    format!("{}\t{}", fi.value, fi)
}

pub fn parse_cache_line(line: &str) -> Option<FactoredInt> {
    let (n, rest) = line.split_once('\t')?;
    let n: u128 = n.trim().parse().ok()?;
    let mut factors = Vec::new();
    for tok in rest.split_whitespace() {
        let (l, e) = tok.split_once('^')?;
        factors.push((l.parse().ok()?, e.parse().ok()?));
    }
    let fi = FactoredInt::from_factors(factors).ok()?;
    (fi.value == n).then_some(fi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn factors_small_examples() {
        let f = factor_int(24).unwrap();
        assert_eq!(f.factors(), &[(2, 3), (3, 1)]);
        assert_eq!(f.omega(), 2);
        let one = factor_int(1).unwrap();
        assert!(one.factors().is_empty());
        assert_eq!(one.omega(), 0);
        let f = factor_int(624).unwrap();
        assert_eq!(f.factors(), &[(2, 4), (3, 1), (13, 1)]);
        assert_eq!(f.omega(), 3);
    }

    #[test]
    fn phi_and_mobius() {
        let f24 = factor_int(24).unwrap();
        assert_eq!(euler_phi(&f24), oracle::count_units_mod(24));
        assert_eq!(euler_phi(&f24), 8);
        let one = factor_int(1).unwrap();
        assert_eq!((euler_phi(&one), mobius(&one)), (1, 1));
        assert_eq!(mobius(&factor_int(12).unwrap()), 0);
        assert_eq!(mobius(&factor_int(30).unwrap()), -1);
    }

    #[test]
    fn squarefree_divisor_lists() {
        let d = squarefree_divisors(&factor_int(12).unwrap());
        assert_eq!(d, vec![(1, 1), (2, -1), (3, -1), (6, 1)]);
        assert_eq!(squarefree_divisors(&factor_int(1).unwrap()), vec![(1, 1)]);
        assert_eq!(squarefree_divisors(&factor_int(624).unwrap()).len(), 8);
    }

    #[test]
    fn large_semiprimes_and_primes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factor_int(p as u128 * q as u128).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        let f = factor_int(u64::MAX as u128).unwrap();
        assert_eq!(f.factors(), &[(3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6_700_417, 1)]);
    }

    #[test]
    fn rejects_oversized_cofactor() {
        let big = 18_446_744_073_709_551_557u128 * 18_446_744_073_709_551_533u128;
        assert!(matches!(factor_int(big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("pnf-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("factors.tsv");
        let _ = std::fs::remove_file(&path);
        {
            let cache = FactorCache::open(&path).unwrap();
            assert_eq!(cache.factor(624).unwrap().factors(), &[(2, 4), (3, 1), (13, 1)]);
            cache.factor(624).unwrap();
            cache.factor(48).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "624\t2^4 3^1 13^1\n48\t2^4 3^1\n");
        let cache = FactorCache::open(&path).unwrap();
        assert_eq!(cache.len(), 2);
        assert_eq!(cache.get(48).unwrap().factors(), &[(2, 4), (3, 1)]);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn moebius_sum_vanishes() {
        for n in 2..2000u128 {
            let s: i32 = squarefree_divisors(&factor_int(n).unwrap()).iter().map(|&(_, mu)| mu).sum();
            assert_eq!(s, 0, "n = {n}");
        }
    }
}
