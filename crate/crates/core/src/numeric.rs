//! Floating-point helpers shared by the character and criterion modules.

use num_complex::Complex64;

/// Relative slack allowed when comparing a computed magnitude to a proven bound.
pub const BOUND_REL_TOL: f64 = 1e-9;

/// Width of the band around `lhs = rhs` in log-domain comparisons that gets flagged.
pub const LOG_BOUNDARY_BAND: f64 = 1e-9;

/// Sum by recursive halving: the result depends only on the order of the input.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1..=8 => xs.iter().sum(),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub fn pairwise_sum_real(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1..=8 => xs.iter().sum(),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum_real(a) + pairwise_sum_real(b)
        }
    }
}

/// `exp(2πi j / m)` for `j < m`, tabulated once.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(m: u64) -> Self {
        assert!(m > 0);
        let table = (0..m)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / m as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        RootsOfUnity { table }
    }

    pub fn modulus(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn get(&self, j: u64) -> Complex64 {
        self.table[(j % self.table.len() as u64) as usize]
    }
}

/// `|a| ≤ b` up to the relative tolerance.
pub fn within_bound(magnitude: f64, bound: f64) -> bool {
    magnitude <= bound * (1.0 + BOUND_REL_TOL) + BOUND_REL_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_sum_to_zero() {
        for m in [2u64, 3, 7, 24, 624] {
            let r = RootsOfUnity::new(m);
            let all: Vec<Complex64> = (0..m).map(|j| r.get(j)).collect();
            assert!(pairwise_sum(&all).norm() < 1e-9);
            assert!((r.get(m) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum_real(&xs), 249750.0);
    }
}
