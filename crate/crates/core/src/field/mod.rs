//! Exact arithmetic in `F_p`, `F_q = F_p[y]/(h)` and `F_{q^n} = F_q[x]/(m)`.

pub mod base;
pub mod ext;
pub mod irreducible;
pub mod poly;

pub use base::BaseField;
pub use ext::{check_order_cap, make_field_ctx, DlogTable, FFElement, FieldCtx};
pub use poly::Poly;
