//! Resource limits for tower constructions.

/// Environment variable overriding the default degree cap.
pub const TOWER_BOUND_ENV: &str = "FFP_TOWER_BOUND";

/// Default cap on `[tower : base]`.
pub const DEFAULT_TOWER_BOUND: u64 = 64;

/// Default number of uniformizer terms kept beyond the leading term.
pub const DEFAULT_REL_PREC: i64 = 8;

/// Limits applied when building towers.
///
/// `bound` caps the absolute degree `e_abs · f_abs`; `rel_prec` is the number
/// of terms past the leading one that re-expansions of lower uniformizers
/// carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerConfig {
    pub bound: u64,
    pub rel_prec: i64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig { bound: DEFAULT_TOWER_BOUND, rel_prec: DEFAULT_REL_PREC }
    }
}

impl TowerConfig {
    /// Defaults, with the bound taken from `FFP_TOWER_BOUND` when it parses.
    pub fn from_env() -> Self {
        let mut cfg = TowerConfig::default();
        if let Ok(raw) = std::env::var(TOWER_BOUND_ENV) {
            if let Ok(b) = raw.trim().parse::<u64>() {
                if b > 0 {
                    cfg.bound = b;
                }
            }
        }
        cfg
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_rel_prec(mut self, rel_prec: i64) -> Self {
        self.rel_prec = rel_prec;
        self
    }
}
