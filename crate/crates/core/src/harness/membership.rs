use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::SizeCaps;
use crate::characters::{count_via_characters, CharEnv};
use crate::criterion;
use crate::error::Result;
use crate::field::{make_field_ctx, FieldCtx};
use crate::freeness::is_primitive_normal_pair;

pub const MEMBERSHIP_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub schema: u32,
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub q: u64,
    pub qn: u64,
    pub witness_count: u64,
    /// Discrete log, base the field generator, of the witness with the least such index.
    pub example_witness: Option<u64>,
    pub condition_41_holds: Option<bool>,
    pub char_count: Option<f64>,
    pub excluded_char: bool,
    pub runtime_ms: u64,
}

/// Counts witnesses over `F*_{q^n}` in discrete-log order; returns the count and the least index.
pub fn count_witnesses(ctx: &FieldCtx) -> (u64, Option<u64>) {
    let group = ctx.order() - 1;
    let chunk = 4096u64;
    let per_chunk: Vec<(u64, Option<u64>)> = (0..group.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let (lo, hi) = (c * chunk, ((c + 1) * chunk).min(group));
            let mut count = 0;
            let mut first = None;
            for j in lo..hi {
                let a = ctx.gen_pow(j).expect("dlog table present");
                if is_primitive_normal_pair(ctx, &a) {
                    count += 1;
                    first.get_or_insert(j);
                }
            }
            (count, first)
        })
        .collect();
    let count = per_chunk.iter().map(|(c, _)| c).sum();
    let first = per_chunk.iter().find_map(|(_, f)| *f);
    (count, first)
}

/// Enumerates `F*_{q^n}` with the pair predicate, adding the criterion verdict and,
/// within the character cap, the character-sum count.
pub fn brute_force_membership(p: u64, k: u32, n: u32, caps: &SizeCaps) -> Result<MembershipReport> {
    let start = Instant::now();
    let ctx = make_field_ctx(p, k, n, caps)?;
    Ok(membership_for(&ctx, caps, start))
}

pub(crate) fn membership_for(ctx: &FieldCtx, caps: &SizeCaps, start: Instant) -> MembershipReport {
    let (witness_count, example_witness) = count_witnesses(ctx);
    let condition_41_holds = criterion::condition_41(ctx.p(), ctx.k(), ctx.n()).ok().map(|r| r.holds());
    let char_count = CharEnv::new(ctx, caps).ok().and_then(|env| {
        let xn1 = ctx.xn_minus_1().full(ctx.base());
        let group = ctx.order() - 1;
        count_via_characters(&env, group, group, &xn1, &xn1).ok()
    });
    MembershipReport {
        schema: MEMBERSHIP_SCHEMA,
        p: ctx.p(),
        k: ctx.k(),
        n: ctx.n(),
        q: ctx.q(),
        qn: ctx.order(),
        witness_count,
        example_witness,
        condition_41_holds,
        char_count,
        excluded_char: ctx.p() == 2 || ctx.p() == 3,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn membership_examples() {
        let caps = SizeCaps::default();
        let r = brute_force_membership(5, 1, 2, &caps).unwrap();
        let ctx = make_field_ctx(5, 1, 2, &caps).unwrap();
        assert_eq!(r.witness_count, oracle::count_witnesses_independent(&ctx));
        assert!(!r.excluded_char);
        assert!((r.char_count.unwrap() - r.witness_count as f64).abs() < 1e-4);
        let j = r.example_witness.unwrap();
        assert!(is_primitive_normal_pair(&ctx, &ctx.gen_pow(j).unwrap()));
        assert!((0..j).all(|i| !is_primitive_normal_pair(&ctx, &ctx.gen_pow(i).unwrap())));

        let r = brute_force_membership(3, 1, 2, &caps).unwrap();
        assert!(r.excluded_char);
        let ctx = make_field_ctx(3, 1, 2, &caps).unwrap();
        assert_eq!(r.witness_count, oracle::count_witnesses_independent(&ctx));
        assert!(brute_force_membership(2, 1, 3, &caps).unwrap().excluded_char);
        assert_eq!(r.witness_count > 0, r.example_witness.is_some());
    }

    #[test]
    fn membership_respects_cap() {
        let caps = SizeCaps::default().with_enumeration_cap(100);
        assert!(brute_force_membership(11, 1, 2, &caps).is_err());
    }
}
