//! Multiplicative and additive characters of `F_{q^n}`, the character functions
//! `ρ_e` and `κ_g`, Weil-type sums with their bounds, and the sixteen-term
//! expansion of the witness count.
//!
//! Everything here is evaluated by full enumeration over the field, so a
//! [`CharEnv`] is only built for fields within the character cap.

mod add;
mod bounds;
mod decomposition;
mod functions;
mod mult;

pub use add::AddChar;
pub use bounds::{bounded_char_sum, weil_suite, SumKind, WeilCheck, WeilSuiteReport};
pub use decomposition::{count_via_characters, s_decomposition, s_terms, SumReport, SumTerm};
pub use functions::{kappa, kappa_table, rho, rho_table};
pub use mult::MultChar;

use crate::arith::cyclo::PolyDivisor;
use crate::caps::SizeCaps;
use crate::error::{Error, Result};
use crate::field::{DlogTable, FFElement, FieldCtx};
use crate::numeric::RootsOfUnity;

/// Tables shared by every character computation on one field.
pub struct CharEnv<'a> {
    ctx: &'a FieldCtx,
    dlog: &'a DlogTable,
    group: u64,
    zeta_group: RootsOfUnity,
    zeta_p: RootsOfUnity,
    /// Absolute trace of every element, by index.
    trace: Vec<u32>,
    /// Index of `α² + α + 1`, by index of `α`.
    quad: Vec<u32>,
    /// All monic divisors of `x^n - 1`, degree first.
    divisors: Vec<PolyDivisor>,
    /// Position in `divisors` of the `F_q`-order of `ψ_δ`, by index of `δ`.
    add_order: Vec<u32>,
}

impl<'a> CharEnv<'a> {
    pub fn new(ctx: &'a FieldCtx, caps: &SizeCaps) -> Result<Self> {
        let order = ctx.order();
        if order > caps.character_cap {
            return Err(Error::CapExceeded {
                what: "character expansion field order",
                size: order as u128,
                cap: caps.character_cap as u128,
            });
        }
        let dlog = ctx.dlog_table().ok_or(Error::NoDlogTable)?;
        let elements: Vec<FFElement> = ctx.elements().collect();
        let trace = elements.iter().map(|a| ctx.abs_trace(a) as u32).collect();
        let quad = elements.iter().map(|a| ctx.index(&ctx.quad(a)) as u32).collect();
        let divisors = ctx.xn_minus_1().all_divisors(ctx.base());
        let mut env = CharEnv {
            ctx,
            dlog,
            group: order - 1,
            zeta_group: RootsOfUnity::new(order - 1),
            zeta_p: RootsOfUnity::new(ctx.p()),
            trace,
            quad,
            divisors,
            add_order: Vec::new(),
        };
        env.add_order = env.compute_additive_orders(&elements);
        Ok(env)
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> u64 {
        self.group
    }

    pub fn divisors(&self) -> &[PolyDivisor] {
        &self.divisors
    }

    pub(crate) fn log(&self, idx: u64) -> Option<u64> {
        self.dlog.log_index(idx)
    }

    pub(crate) fn mul_index(&self, a: u64, b: u64) -> u64 {
        match (self.dlog.log_index(a), self.dlog.log_index(b)) {
            (Some(i), Some(j)) => self.dlog.exp_index(i + j),
            _ => 0,
        }
    }

    pub(crate) fn trace_of(&self, idx: u64) -> u64 {
        self.trace[idx as usize] as u64
    }

    pub(crate) fn quad_index(&self, idx: u64) -> u64 {
        self.quad[idx as usize] as u64
    }

    pub(crate) fn zeta_group(&self) -> &RootsOfUnity {
        &self.zeta_group
    }

    pub(crate) fn zeta_p(&self) -> &RootsOfUnity {
        &self.zeta_p
    }

    /// `F_q`-order of `ψ_δ`, by the index of `δ`.
    pub(crate) fn add_order_pos(&self, delta: u64) -> usize {
        self.add_order[delta as usize] as usize
    }

    /// For each `δ`, the first divisor `g` (degree order) with `Tr(δ·(g∘α)) = 0` for every `α`.
    fn compute_additive_orders(&self, elements: &[FFElement]) -> Vec<u32> {
        let ctx = self.ctx;
        let images: Vec<Vec<u64>> = self
            .divisors
            .iter()
            .map(|g| elements.iter().map(|a| ctx.index(&ctx.poly_action(g.poly(), a))).collect())
            .collect();
        (0..ctx.order())
            .map(|delta| {
                let pos = images
                    .iter()
                    .position(|img| img.iter().all(|&x| self.trace_of(self.mul_index(delta, x)) == 0))
                    .expect("x^n - 1 annihilates every character");
                pos as u32
            })
            .collect()
    }

    /// The `F_q`-order of the additive character `ψ_δ`.
    pub fn additive_order(&self, delta: &FFElement) -> &PolyDivisor {
        &self.divisors[self.add_order_pos(self.ctx.index(delta))]
    }

    /// `Δ_g`: indices of the `δ` whose character has `F_q`-order exactly `g`.
    pub fn delta_set(&self, g: &PolyDivisor) -> Vec<u64> {
        let Some(pos) = self.divisors.iter().position(|d| d == g) else {
            return Vec::new();
        };
        (0..self.ctx.order()).filter(|&d| self.add_order_pos(d) == pos).collect()
    }

    /// The `φ(d)` characters of exact order `d`, by twist enumeration.
    pub fn mult_chars_of_order(&self, d: u64) -> Result<Vec<MultChar>> {
        MultChar::all_of_order(self.group, d)
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::field::{make_field_ctx, Poly};
    use crate::freeness;
    use crate::oracle;

    fn ctx(p: u64, k: u32, n: u32) -> FieldCtx {
        make_field_ctx(p, k, n, &SizeCaps::default()).unwrap()
    }

    fn env(c: &FieldCtx) -> CharEnv<'_> {
        CharEnv::new(c, &SizeCaps::default()).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn mult_char_examples() {
        let f5 = ctx(5, 1, 1);
        let e5 = env(&f5);
        let triv = e5.mult_chars_of_order(1).unwrap();
        assert_eq!(triv.len(), 1);
        assert!(f5.elements().all(|a| close(triv[0].eval(&e5, &a), Complex64::new(1.0, 0.0))));
        let quad = e5.mult_chars_of_order(2).unwrap();
        assert_eq!(quad.len(), 1);
        // 2 is not among the squares {1, 4} of F_5.
        assert!(close(quad[0].eval(&e5, &f5.from_base(2)), Complex64::new(-1.0, 0.0)));
        assert!(close(quad[0].eval(&e5, &f5.zero()), Complex64::new(0.0, 0.0)));
        assert!(matches!(e5.mult_chars_of_order(3), Err(Error::NotADivisor(_))));

        let f25 = ctx(5, 1, 2);
        let e25 = env(&f25);
        let gens = e25.mult_chars_of_order(24).unwrap();
        assert_eq!(gens.len() as u128, oracle::count_units_mod(24));
        for chi in &gens {
            assert_eq!(chi.order(), 24);
            for a in f25.elements().skip(1).step_by(5) {
                for b in f25.elements().skip(1).step_by(7) {
                    let lhs = chi.eval(&e25, &f25.mul(&a, &b));
                    assert!((lhs - chi.eval(&e25, &a) * chi.eval(&e25, &b)).norm() < 1e-9);
                }
            }
        }
        let total: usize = (1..=24u64).filter(|d| 24 % d == 0).map(|d| e25.mult_chars_of_order(d).unwrap().len()).sum();
        assert_eq!(total, 24);
    }

    #[test]
    fn additive_orders_partition_the_field() {
        for (p, n) in [(5, 2), (7, 2), (2, 3), (3, 2)] {
            let c = ctx(p, 1, n);
            let e = env(&c);
            assert!(e.additive_order(&c.zero()).is_one());
            let xn1 = c.xn_minus_1();
            let mut total = 0;
            for g in e.divisors() {
                let size = e.delta_set(g).len() as u128;
                assert_eq!(size, xn1.phi_of(g).unwrap(), "F_{p}^{n}, g = {}", g.poly());
                total += size;
            }
            assert_eq!(total, c.order() as u128);
        }
    }

    #[test]
    fn additive_order_is_reciprocal_of_module_order() {
        for (p, k, n) in [(5, 1, 2), (2, 1, 4), (3, 1, 3), (2, 2, 3), (5, 1, 4)] {
            let c = ctx(p, k, n);
            let e = env(&c);
            for delta in c.elements() {
                let by_definition = e.additive_order(&delta).poly().clone();
                let dual = freeness::fq_order(&c, &delta).poly().reciprocal().make_monic(c.base());
                assert_eq!(by_definition, dual, "F_{}^{n}: δ = {delta}", c.q());
            }
        }
    }

    #[test]
    fn additive_characters_are_homomorphisms() {
        let c = ctx(7, 1, 2);
        let e = env(&c);
        for di in [1u64, 8, 30] {
            let psi = AddChar::from_index(&e, di);
            for a in c.elements().step_by(3) {
                for b in c.elements().step_by(5) {
                    let lhs = psi.eval(&e, &c.add(&a, &b));
                    assert!(close(lhs, psi.eval(&e, &a) * psi.eval(&e, &b)));
                }
            }
        }
        let canonical = AddChar::canonical(&e);
        let lift = c.abs_trace(&c.x()) as f64;
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU * lift / 7.0);
        assert!(close(canonical.eval(&e, &c.x()), expected));
    }

    #[test]
    fn orthogonality() {
        for (p, n) in [(5, 2), (7, 2), (5, 3), (13, 1)] {
            let c = ctx(p, 1, n);
            let e = env(&c);
            for t in 1..e.group_order() {
                let chi = MultChar::from_twist(e.group_order(), t);
                let s: Complex64 = c.elements().skip(1).map(|a| chi.eval(&e, &a)).sum();
                assert!(s.norm() < 1e-6);
            }
            for d in 1..c.order() {
                let psi = AddChar::from_index(&e, d);
                let s: Complex64 = c.elements().map(|a| psi.eval(&e, &a)).sum();
                assert!(s.norm() < 1e-6);
            }
        }
    }

    #[test]
    fn rho_examples() {
        let f7 = ctx(7, 1, 1);
        let e7 = env(&f7);
        for a in f7.elements().skip(1) {
            assert!(close(rho(&e7, 1, &a).unwrap(), Complex64::new(1.0, 0.0)));
        }
        assert!(close(rho(&e7, 6, &f7.from_base(3)).unwrap(), Complex64::new(1.0, 0.0)));
        assert!(close(rho(&e7, 6, &f7.from_base(2)).unwrap(), Complex64::new(0.0, 0.0)));
        assert_eq!(rho(&e7, 6, &f7.zero()), Err(Error::ZeroElement));
        assert!(matches!(rho(&e7, 4, &f7.one()), Err(Error::NotADivisor(_))));
    }

    #[test]
    fn kappa_examples() {
        let f4 = ctx(2, 1, 2);
        let e4 = env(&f4);
        let xn1 = f4.xn_minus_1().full(f4.base());
        assert_eq!(xn1.poly(), &Poly::from_coeffs(vec![1, 0, 1]));
        assert!(close(kappa(&e4, &xn1, &f4.x()).unwrap(), Complex64::new(1.0, 0.0)));
        assert!(close(kappa(&e4, &xn1, &f4.one()).unwrap(), Complex64::new(0.0, 0.0)));
        let unit = f4.xn_minus_1().unit();
        for a in f4.elements() {
            assert!(close(kappa(&e4, &unit, &a).unwrap(), Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn character_functions_are_indicators_on_f25() {
        let c = ctx(5, 1, 2);
        let e = env(&c);
        for d in c.group_order().divisors() {
            let table = rho_table(&e, d as u64).unwrap();
            for a in c.elements().skip(1) {
                let want = freeness::is_e_free(&c, &a, d as u64).unwrap() as u8 as f64;
                assert!((table[c.index(&a) as usize] - want).norm() < 1e-6);
            }
        }
        for g in e.divisors() {
            let table = kappa_table(&e, g).unwrap();
            for a in c.elements() {
                let want = freeness::is_g_free(&c, &a, g) as u8 as f64;
                assert!((table[c.index(&a) as usize] - want).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn bounded_sum_examples() {
        let c = ctx(5, 1, 2);
        let e = env(&c);
        let chi = e.mult_chars_of_order(24).unwrap()[0];
        let (v, b) = bounded_char_sum(&e, SumKind::Gauss, Some(&chi), None, &c.one(), &c.zero()).unwrap();
        assert!((v.norm() - 5.0).abs() < 1e-6);
        assert_eq!(b, 5.0);
        let (v, b) = bounded_char_sum(&e, SumKind::Trivial, None, None, &c.zero(), &c.zero()).unwrap();
        assert!(close(v, Complex64::new(25.0, 0.0)));
        assert_eq!(b, 25.0);
        let (v, b) = bounded_char_sum(&e, SumKind::Additive, None, None, &c.zero(), &c.one()).unwrap();
        let brute: Complex64 = c
            .elements()
            .map(|a| {
                let tr = c.abs_trace(&c.quad(&a)) as f64;
                Complex64::from_polar(1.0, std::f64::consts::TAU * tr / 5.0)
            })
            .sum();
        assert!(close(v, brute));
        assert!(v.norm() <= b + 1e-9);
        assert_eq!(b, 5.0);
        let err = bounded_char_sum(&e, SumKind::Gauss, None, None, &c.one(), &c.zero());
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
        let f9 = ctx(3, 1, 2);
        let e9 = env(&f9);
        let sq = e9.mult_chars_of_order(2).unwrap()[0];
        let err = bounded_char_sum(&e9, SumKind::MultPoly, None, Some(&sq), &f9.zero(), &f9.zero());
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn decomposition_on_f25() {
        let c = ctx(5, 1, 2);
        let e = env(&c);
        let report = s_decomposition(&e).unwrap();
        assert_eq!(report.term(1).value_re, 24.0);
        assert!(report.term(1).value_im.abs() < 1e-9);
        assert!(report.term(2).magnitude < 1e-6);
        let exhaustive = c.elements().filter(|a| freeness::is_primitive_normal_pair(&c, a)).count() as f64;
        assert!((report.n_real - exhaustive).abs() < 1e-4);
        assert_eq!(report.n_rounded as f64, exhaustive);
        let json = serde_json::to_value(&report).unwrap();
        for key in ["theta", "Theta", "N_real", "N_rounded", "schema"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        for key in ["pattern", "value_re", "value_im", "magnitude", "bound", "slack"] {
            assert!(json["terms"][0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn s13_exceeds_its_stated_bound_on_f121() {
        let c = ctx(11, 1, 2);
        let e = env(&c);
        let report = s_terms(&e).unwrap();
        let s13 = report.term(13);
        let v = 2f64.powi(report.big_omega as i32) - 1.0;
        assert!(s13.magnitude > v * v);
        // Each inner sum is a quadratic Gauss sum minus one term, so |S_13| ≤ (q^{n/2} + 1) V².
        assert!(s13.magnitude <= (11.0 + 1.0) * v * v);
        assert!(matches!(report.check(), Err(Error::BoundViolated { term: 13, .. })));
        assert_eq!(report.violations().count(), 1);
    }

    #[test]
    fn count_via_characters_examples() {
        let c = ctx(5, 1, 2);
        let e = env(&c);
        let unit = c.xn_minus_1().unit();
        let full = c.xn_minus_1().full(c.base());
        let trivial = count_via_characters(&e, 1, 1, &unit, &unit).unwrap();
        assert!((trivial - 24.0).abs() < 1e-6);
        let count = count_via_characters(&e, 24, 24, &full, &full).unwrap();
        assert!((count - oracle::count_witnesses_independent(&c) as f64).abs() < 1e-4);
    }

    #[test]
    fn count_via_characters_matches_enumeration_for_every_tuple_on_f25() {
        let c = ctx(5, 1, 2);
        let e = env(&c);
        let ms: Vec<u64> = c.group_order().divisors().into_iter().map(|d| d as u64).collect();
        for &m1 in &ms {
            for &m2 in &ms {
                for g1 in e.divisors() {
                    for g2 in e.divisors() {
                        let via = count_via_characters(&e, m1, m2, g1, g2).unwrap();
                        let direct = freeness::count_free_pairs(&c, m1, m2, g1, g2).unwrap() as f64;
                        assert!((via - direct).abs() < 1e-4, "({m1}, {m2}, {}, {})", g1.poly(), g2.poly());
                    }
                }
            }
        }
    }

    #[test]
    fn character_cap_is_enforced() {
        let c = ctx(5, 1, 5);
        assert!(matches!(CharEnv::new(&c, &SizeCaps::default()), Err(Error::CapExceeded { .. })));
        let c = ctx(7, 1, 1);
        let no_dlog = FieldCtx::new(7, 1, 1).unwrap();
        assert!(CharEnv::new(&c, &SizeCaps::default()).is_ok());
        assert!(matches!(CharEnv::new(&no_dlog, &SizeCaps::default()), Err(Error::NoDlogTable)));
    }
}
