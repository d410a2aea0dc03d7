//! Integer-side and polynomial-side divisor structure.

pub mod cyclo;
pub mod int;

pub use cyclo::{factor_xn_minus_1, omega_xn_minus_1, FactoredPoly, PolyDivisor};
pub use int::{factor_int, FactorCache, FactoredInt};
