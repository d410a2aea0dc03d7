use pnf_core::arith::factor_int;
use pnf_core::criterion::{
    c_of_integer, condition_41, corollary42_check, corollary43_min_n, evaluate, lemma37_bound, lemma38_bound,
    lemma39_sweep, Route, Verdict,
};
use pnf_core::oracle;

#[test]
fn corollary_thresholds() {
    assert_eq!(corollary43_min_n(5u128.pow(7)), Some(72));
    assert_eq!(corollary43_min_n(32768), None);
    assert!(corollary43_min_n(32769).is_some());
    assert!(!corollary42_check(11, 6, 35));
    assert!(corollary42_check(11, 7, 35));
}

#[test]
fn corollary43_min_n_is_the_first_passing_n() {
    for q in [32771u128, 78125, 100_003, 1 << 20] {
        let m = corollary43_min_n(q).unwrap();
        let lhs = |n: u64| n as f64 / 10.0 * (q as f64).ln();
        let rhs = |n: u64| 506.25f64.ln() + 1.5 * n as f64 * 2f64.ln();
        assert!(lhs(m) > rhs(m), "q = {q}");
        assert!(m == 1 || lhs(m - 1) <= rhs(m - 1), "q = {q}");
    }
}

#[test]
fn small_fields_never_satisfy_condition_41() {
    for (p, k, n) in [(5, 1, 2), (7, 1, 3), (11, 1, 4), (13, 2, 3), (101, 1, 2)] {
        let r = condition_41(p, k, n).unwrap();
        assert_eq!(r.route, Route::Direct41);
        assert_eq!(r.verdict, Verdict::False, "({p}, {k}, {n})");
    }
}

#[test]
fn unfactorable_cells_fall_back_to_corollaries() {
    let r = evaluate(11, 40, 40, factor_int).unwrap();
    assert_eq!(r.route, Route::Corollary42);
    let r = evaluate(5, 40, 43, factor_int).unwrap();
    assert_eq!(r.route, Route::Corollary43);
}

#[test]
fn lemma38_on_known_factorizations() {
    let (b, refined) = lemma38_bound(7, 6);
    assert_eq!(b, 6.into());
    assert!(refined.is_none());
    let (b, refined) = lemma38_bound(2, 7);
    assert_eq!(b * 2, 8.into());
    assert_eq!(refined.unwrap() * 4, 21.into());
}

#[test]
fn lemma39_holds_on_primorials_and_neighbours() {
    for n in [2u64, 6, 30, 210, 2310, 30030, 510510] {
        assert!(2f64.powi(oracle::trial_division(n).len() as i32) < c_of_integer(n) * (n as f64).powf(0.2));
    }
    let omega = oracle::omega_table(20_000);
    assert!(lemma39_sweep(20_000, &omega).is_empty());
}

#[test]
fn lemma37_holds_for_first_ten_thousand() {
    for n in 2..10_000u64 {
        let w = oracle::trial_division(n).len() as f64;
        for m in 1..=6 {
            assert!(lemma37_bound(n, m) >= w - 1e-12, "n = {n}, m = {m}");
        }
    }
}
