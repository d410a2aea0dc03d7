//! Exhaustive membership search, grid scans and the verification suite.

pub mod membership;
pub mod scan;
pub mod verify;

pub use membership::{brute_force_membership, MembershipReport};
pub use scan::{scan, ScanGrid, ScanRow, ScanSummary};
pub use verify::{verify_suite, CheckOutcome, VerifyLevel, VerifyReport};
