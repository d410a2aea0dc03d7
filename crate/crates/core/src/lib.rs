//! Verification toolkit for primitive normal pairs in finite fields.
//!
//! An element `α ∈ F_{q^n}` is sought such that both `α` and `α² + α + 1` are
//! primitive and normal over `F_q`. The crate provides exact tower arithmetic
//! (`F_p ⊂ F_q ⊂ F_{q^n}`), the multiplicative and additive freeness notions,
//! the character-sum expansion of the witness count with per-term bound checks,
//! the sufficient conditions on `(q, n)`, and a brute-force harness that ties
//! them together.

pub mod arith;
pub mod caps;
pub mod characters;
pub mod criterion;
pub mod error;
pub mod field;
pub mod freeness;
pub mod harness;
pub mod numeric;
pub mod oracle;

pub use caps::SizeCaps;
pub use error::{Error, Result};
pub use field::{BaseField, FFElement, FieldCtx, Poly};
