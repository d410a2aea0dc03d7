use pnf_core::characters::{count_via_characters, kappa_table, rho_table, s_decomposition, s_terms, weil_suite, CharEnv};
use pnf_core::field::make_field_ctx;
use pnf_core::freeness::{count_free_pairs, is_e_free, is_g_free};
use pnf_core::harness::membership::count_witnesses;
use pnf_core::{Error, FieldCtx, SizeCaps};

fn ctx(p: u64, k: u32, n: u32) -> FieldCtx {
    make_field_ctx(p, k, n, &SizeCaps::default()).unwrap()
}

#[test]
fn rho_is_the_e_free_indicator_on_f49() {
    let c = ctx(7, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    for e in c.group_order().divisors() {
        let table = rho_table(&env, e as u64).unwrap();
        for idx in 1..c.order() {
            let a = c.from_index(idx);
            let want = is_e_free(&c, &a, e as u64).unwrap() as u8 as f64;
            assert!((table[idx as usize] - want).norm() < 1e-6, "e = {e}, α = {a}");
        }
    }
}

#[test]
fn kappa_is_the_g_free_indicator_on_f49() {
    let c = ctx(7, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    for g in env.divisors() {
        let table = kappa_table(&env, g).unwrap();
        for idx in 0..c.order() {
            let a = c.from_index(idx);
            let want = is_g_free(&c, &a, g) as u8 as f64;
            assert!((table[idx as usize] - want).norm() < 1e-6, "g = {}, α = {a}", g.poly());
        }
    }
}

#[test]
fn decomposition_reproduces_enumeration_on_f49() {
    let c = ctx(7, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    let report = s_decomposition(&env).unwrap();
    assert_eq!(report.n_rounded, count_witnesses(&c).0 as i64);
    assert_eq!(report.term(1).value_re, 48.0);
    assert!(report.term(2).magnitude < 1e-6);
    assert!(report.terms.iter().all(|t| t.within_bound));
}

#[test]
fn decomposition_bound_breaks_on_f169() {
    let c = ctx(13, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    let report = s_terms(&env).unwrap();
    assert_eq!(report.n_rounded, count_witnesses(&c).0 as i64);
    let t = report.term(13);
    assert!(t.magnitude > t.bound);
    let s = (c.order() as f64).sqrt();
    assert!(t.magnitude <= (s + 1.0) * t.bound + 1e-9);
    assert!(matches!(s_decomposition(&env), Err(Error::BoundViolated { term: 13, .. })));
}

#[test]
fn character_counts_match_enumeration_on_f49_subsets() {
    let c = ctx(7, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    let xn1 = c.xn_minus_1();
    let divisors = xn1.all_divisors(c.base());
    for m1 in [1u64, 2, 3, 16, 48] {
        for m2 in [1u64, 6, 48] {
            for g1 in &divisors {
                for g2 in [&divisors[0], divisors.last().unwrap()] {
                    let via = count_via_characters(&env, m1, m2, g1, g2).unwrap();
                    let direct = count_free_pairs(&c, m1, m2, g1, g2).unwrap();
                    assert!((via - direct as f64).abs() < 1e-4, "m1 = {m1}, m2 = {m2}, g1 = {}", g1.poly());
                }
            }
        }
    }
}

#[test]
fn weil_suite_is_clean_on_f49() {
    let c = ctx(7, 1, 2);
    let env = CharEnv::new(&c, &SizeCaps::default()).unwrap();
    let report = weil_suite(&env).unwrap();
    assert!(report.passed(), "{:?}", report.violations.first());
    assert!(report.gauss_max_deviation < 1e-6);
}
