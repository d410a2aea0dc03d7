use num_complex::Complex64;

use super::CharEnv;
use crate::arith::int::gcd;
use crate::error::{Error, Result};
use crate::field::FFElement;

/// `χ(α) = exp(2πi·t·log α / (q^n - 1))`, of exact order `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultChar {
    order: u64,
    twist: u64,
    group: u64,
}

impl MultChar {
    pub fn trivial(group: u64) -> Self {
        MultChar { order: 1, twist: 0, group }
    }

    /// The character with twist `t` on a cyclic group of the given order.
    pub fn from_twist(group: u64, twist: u64) -> Self {
        let twist = twist % group;
        MultChar { order: group / gcd(twist, group), twist, group }
    }

    pub(crate) fn all_of_order(group: u64, d: u64) -> Result<Vec<MultChar>> {
        if d == 0 || group % d != 0 {
            return Err(Error::NotADivisor(d.to_string()));
        }
        let step = group / d;
        Ok((0..d)
            .filter(|&s| gcd(s, d) == 1)
            .map(|s| MultChar { order: d, twist: (step * s) % group, group })
            .collect())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn twist(&self) -> u64 {
        self.twist
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Value at the element with the given index; `χ(0)` is 1 for the trivial character, else 0.
    pub fn eval_index(&self, env: &CharEnv<'_>, idx: u64) -> Complex64 {
        match env.log(idx) {
            None if self.is_trivial() => Complex64::new(1.0, 0.0),
            None => Complex64::new(0.0, 0.0),
            Some(j) => env.zeta_group().get(((self.twist as u128 * j as u128) % self.group as u128) as u64),
        }
    }

    pub fn eval(&self, env: &CharEnv<'_>, a: &FFElement) -> Complex64 {
        self.eval_index(env, env.ctx().index(a))
    }
}
