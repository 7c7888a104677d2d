use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::Pattern;

pub const CANDIDATE_GENERATION: &str = "candidate_generation";
pub const VALIDNESS_VERIFICATION: &str = "validness_verification";
pub const DOMINANCE_VERIFICATION: &str = "dominance_verification";
pub const ANNOTATION: &str = "span_annotation";

/// One row of a runtime breakdown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageStats {
    pub stage: &'static str,
    pub wall_ms: f64,
    /// Patterns (or candidate sequences) the stage produced.
    pub candidates: u64,
    pub non_maximal_removed: u64,
}

impl StageStats {
    pub fn new(stage: &'static str, elapsed: Duration, candidates: u64, non_maximal_removed: u64) -> Self {
        StageStats {
            stage,
            wall_ms: elapsed.as_secs_f64() * 1e3,
            candidates,
            non_maximal_removed,
        }
    }
}

/// Counters and timings of one mining run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MiningStats {
    pub algorithm: &'static str,
    pub stages: Vec<StageStats>,
    /// Patterns emitted before dominance elimination, duplicates included.
    pub candidates: u64,
    pub maximal: u64,
    /// `candidates - maximal`.
    pub non_maximal: u64,
    /// Work units of the validness-verification stage (FRB: candidate
    /// sequences refined). MaxGrowth has no such stage and reports 0.
    pub verification_work: u64,
    pub clusters: u64,
    pub roots_explored: u64,
    pub roots_pruned: u64,
    pub dependency_pruned: u64,
    pub sequences_grown: u64,
    /// Clusters found prunable by the root rule only after their own root
    /// subtree had been entered.
    pub late_root_prunes: u64,
    pub precedence_components: u64,
    pub non_singleton_components: u64,
}

impl MiningStats {
    pub fn stage(&self, name: &str) -> Option<&StageStats> {
        self.stages.iter().find(|s| s.stage == name)
    }

    pub fn total_ms(&self) -> f64 {
        self.stages.iter().map(|s| s.wall_ms).sum()
    }
}

/// Result of a mining run.
#[derive(Clone, Debug)]
pub struct MiningOutput {
    /// Maximal patterns, canonical order, annotated with spans.
    pub patterns: Vec<Pattern>,
    pub stats: MiningStats,
    /// Pre-filter candidates, kept only when asked for.
    pub candidates: Option<Vec<Pattern>>,
}

pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }

    pub fn lap(&mut self) -> Duration {
        let now = Instant::now();
        let d = now - self.0;
        self.0 = now;
        d
    }
}
