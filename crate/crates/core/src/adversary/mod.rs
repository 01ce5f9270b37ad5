//! Adversaries that try to catch a local-access algorithm answering
//! inconsistently with any genuine walk, plus the forest experiment behind
//! the lower bound.

pub mod attack;
pub mod distinguisher;
pub mod forest_trial;
pub mod targets;

use serde::{Deserialize, Serialize};

pub use attack::{adaptive_attack, oblivious_attack, oblivious_sequence, AttackReport, Branch};
pub use distinguisher::{distinguisher, path_length, segment_threshold, verdict, Witness};
pub use forest_trial::{forest_probe_count, forest_trial, ForestTrial};
pub use targets::{AttackTarget, HonestWalker, Opaque, UniformCheater};

/// Constants of the distinguisher and the attacks. The analysis only fixes
/// them up to unspecified constants; these are the shipped defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttackConfig {
    /// Short-segment clause applies to segments longer than this times `log n`.
    pub seg_len_const: f64,
    /// A segment is short when its path length is below this fraction of its span.
    pub shortness_ratio: f64,
    /// First far query of the adaptive attack; `None` means `floor(sqrt(n) / log n)`.
    pub walk_len: Option<u64>,
    /// The push-down phase starts when the known distance is below this fraction of the walk length.
    pub short_path_ratio: f64,
    /// Slope of the push-down distance invariant (reported, not enforced).
    pub pushdown_slope: f64,
    /// Branch distance, in units of `log n`, that triggers the spike search.
    pub spike_const: f64,
    /// Additive slack of the push-down invariant.
    pub pushdown_slack: f64,
    /// Push-down stops once the window is shorter than this times `log n`.
    pub window_const: f64,
    /// The adaptive attack asks at most this times `ceil(log n)` queries.
    pub query_cap_const: u64,
    /// Far query of the oblivious attack; `None` means `floor(n^(1/4))`.
    pub oblivious_e: Option<u64>,
    pub log_base: f64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            seg_len_const: 40.0,
            shortness_ratio: 0.5,
            walk_len: None,
            short_path_ratio: 1.0 / 20.0,
            pushdown_slope: 1.0 / 10.0,
            spike_const: 20.0,
            pushdown_slack: 2.0,
            window_const: 200.0,
            query_cap_const: 203,
            oblivious_e: None,
            log_base: 2.0,
        }
    }
}

impl AttackConfig {
    pub fn log(&self, x: f64) -> f64 {
        x.ln() / self.log_base.ln()
    }

    pub fn walk_len(&self, n: usize) -> u64 {
        self.walk_len
            .unwrap_or_else(|| ((n as f64).sqrt() / self.log(n as f64).max(1.0)).floor() as u64)
            .max(2)
    }

    pub fn query_cap(&self, n: usize) -> u64 {
        self.query_cap_const * (self.log(n as f64).ceil().max(1.0) as u64)
    }

    pub fn oblivious_e(&self, n: usize) -> u64 {
        self.oblivious_e.unwrap_or_else(|| fourth_root(n as u64))
    }
}

fn fourth_root(n: u64) -> u64 {
    let mut r = (n as f64).powf(0.25).floor() as u64;
    while (r + 1).checked_pow(4).is_some_and(|p| p <= n) {
        r += 1;
    }
    while r.checked_pow(4).is_none_or(|p| p > n) {
        r -= 1;
    }
    r
}
