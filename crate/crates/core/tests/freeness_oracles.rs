use pnf_core::field::make_field_ctx;
use pnf_core::freeness::{count_free_pairs, fq_order, is_normal, is_primitive, is_primitive_normal_pair, mult_order};
use pnf_core::harness::membership::count_witnesses;
use pnf_core::{oracle, FieldCtx, SizeCaps};

fn ctx(p: u64, k: u32, n: u32) -> FieldCtx {
    make_field_ctx(p, k, n, &SizeCaps::default()).unwrap()
}

const SMALL: [(u64, u32, u32); 9] =
    [(2, 1, 4), (2, 2, 3), (3, 1, 3), (3, 2, 2), (5, 1, 2), (5, 1, 3), (7, 1, 2), (2, 1, 6), (11, 1, 2)];

#[test]
fn primitivity_and_normality_match_oracles() {
    for (p, k, n) in SMALL {
        let c = ctx(p, k, n);
        for a in c.elements() {
            assert_eq!(is_primitive(&c, &a), oracle::is_primitive_by_enumeration(&c, &a), "F_{}: {a}", c.order());
            assert_eq!(is_normal(&c, &a), oracle::is_normal_by_rank(&c, &a), "F_{}: {a}", c.order());
            if !a.is_zero() {
                assert_eq!(mult_order(&c, &a).unwrap(), oracle::order_by_enumeration(&c, &a));
            }
        }
    }
}

#[test]
fn fq_order_degree_is_conjugate_rank() {
    for (p, k, n) in SMALL {
        let c = ctx(p, k, n);
        for a in c.elements() {
            let ord = fq_order(&c, &a);
            assert_eq!(ord.degree(), oracle::conjugate_rank(&c, &a), "F_{}: {a}", c.order());
            assert!(c.poly_action(ord.poly(), &a).is_zero());
        }
    }
}

#[test]
fn witness_counts_match_independent_oracle() {
    for (p, k, n) in SMALL {
        let c = ctx(p, k, n);
        let (main, first) = count_witnesses(&c);
        assert_eq!(main, oracle::count_witnesses_independent(&c), "F_{}", c.order());
        assert_eq!(main > 0, first.is_some());
        if let Some(j) = first {
            assert!(is_primitive_normal_pair(&c, &c.gen_pow(j).unwrap()));
        }
    }
}

#[test]
fn count_free_pairs_at_full_parameters_is_witness_count() {
    for (p, k, n) in [(5, 1, 2), (7, 1, 2), (3, 1, 3)] {
        let c = ctx(p, k, n);
        let m = c.order() - 1;
        let full = c.xn_minus_1().full(c.base());
        assert_eq!(count_free_pairs(&c, m, m, &full, &full).unwrap(), count_witnesses(&c).0);
        let unit = c.xn_minus_1().unit();
        let nonzero_beta = c.elements().skip(1).filter(|a| !c.quad(a).is_zero()).count() as u64;
        assert!(count_free_pairs(&c, 1, m, &unit, &unit).unwrap() <= nonzero_beta);
        assert_eq!(count_free_pairs(&c, 1, 1, &unit, &unit).unwrap(), c.order() - 1);
    }
}

#[test]
fn published_small_witness_counts() {
    assert_eq!(count_witnesses(&ctx(5, 1, 2)).0, 2);
    assert_eq!(count_witnesses(&ctx(7, 1, 2)).0, 8);
}
