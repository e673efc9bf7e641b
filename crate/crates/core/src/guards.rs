use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding a JSON object that overrides guard ceilings.
pub const GUARDS_ENV: &str = "CHORDTEST_GUARDS";

/// Explicit ceilings for the brute-force routines. Exceeding one is an
/// error, never a silent truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Guards {
    pub edit_max_n: usize,
    pub edit_max_budget: usize,
    pub coloring_max_product: u128,
    pub search_node_limit: u64,
    pub enumerate_max_n: usize,
    pub enumerate_max_states: usize,
    pub pinned_max_n: usize,
    pub pinned_max_nodes: usize,
    pub pinned_max_states: usize,
    pub shape_max_gates: usize,
    pub events_max_s: usize,
    pub events_max_u: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            edit_max_n: 10,
            edit_max_budget: 3,
            coloring_max_product: 10_000_000,
            search_node_limit: 5_000_000,
            enumerate_max_n: 5,
            enumerate_max_states: 2_000_000,
            pinned_max_n: 10,
            pinned_max_nodes: 40,
            pinned_max_states: 500_000,
            shape_max_gates: 12,
            events_max_s: 6,
            events_max_u: 10,
        }
    }
}

impl Guards {
    /// Defaults, overridden field by field from `CHORDTEST_GUARDS` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(GUARDS_ENV) {
            Ok(text) if !text.trim().is_empty() => serde_json::from_str(&text)
                .map_err(|e| Error::InvalidParameter(format!("{GUARDS_ENV}: {e}"))),
            _ => Ok(Guards::default()),
        }
    }
}
