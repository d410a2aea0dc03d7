use serde::{Deserialize, Serialize};

/// Largest field for which a full discrete-log table and element sweeps are allowed.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
/// Largest field on which character expansions are evaluated by default.
pub const DEFAULT_CHARACTER_CAP: u64 = 625;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCaps {
    pub enumeration_cap: u64,
    pub character_cap: u64,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps { enumeration_cap: DEFAULT_ENUMERATION_CAP, character_cap: DEFAULT_CHARACTER_CAP }
    }
}

impl SizeCaps {
    pub fn with_character_cap(mut self, cap: u64) -> Self {
        self.character_cap = cap;
        self
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.enumeration_cap = cap;
        self
    }
}
