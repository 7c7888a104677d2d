//! Synthetic data, noise, and scoring of mined patterns.

mod gen;
mod metrics;
mod noise;

use rayon::prelude::*;
use serde::Serialize;

pub use gen::{gen_synthetic, GenConfig, Span};
pub use metrics::{f1, match_patterns, object_iou, span_iou, EvalReport, Match, HISTOGRAM_BINS};
pub use noise::{inject_noise, inject_noise_traced, NoiseSpec, NoiseTrace};

use crate::error::Result;
use crate::io::PatternRecord;
use crate::maxgrowth::{mine_maxgrowth, MaxGrowthOptions};
use crate::model::{CameraId, Dataset, Interval, MiningParams, ObjectId, Pattern};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub found: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Mines `data` once per gap bound and scores each run against `golden`.
pub fn sweep_d(
    data: &Dataset,
    golden: &[Pattern],
    base: &MiningParams,
    d_values: &[usize],
    threshold: f64,
) -> Result<Vec<SweepRow>> {
    d_values
        .par_iter()
        .map(|&d| {
            let params = MiningParams { d, ..*base };
            let found = mine_maxgrowth(data, &params, MaxGrowthOptions::default())?.patterns;
            let r = match_patterns(&found, golden, threshold, false)?;
            Ok(SweepRow {
                d,
                found: found.len(),
                precision: r.precision,
                recall: r.recall,
                f1: r.f1,
            })
        })
        .collect()
}

/// Patterns from two record lists over one shared name space, so that
/// object identity survives files mined from different datasets.
pub fn records_to_patterns(a: &[PatternRecord], b: &[PatternRecord]) -> (Vec<Pattern>, Vec<Pattern>) {
    let mut objects: Vec<&str> = Vec::new();
    let mut cameras: Vec<&str> = Vec::new();
    for r in a.iter().chain(b) {
        objects.extend(r.objects.iter().map(String::as_str));
        cameras.extend(r.route.iter().map(String::as_str));
    }
    objects.sort_unstable();
    objects.dedup();
    cameras.sort_unstable();
    cameras.dedup();
    let convert = |r: &PatternRecord| {
        let mut p = Pattern::new(
            r.objects
                .iter()
                .map(|o| ObjectId(objects.binary_search(&o.as_str()).unwrap() as u32))
                .collect(),
            r.route
                .iter()
                .map(|c| CameraId(cameras.binary_search(&c.as_str()).unwrap() as u32))
                .collect(),
        );
        p.span = r.span.map(|[b, e]| Interval::new(b, e));
        p.camera_windows = r
            .camera_windows
            .as_ref()
            .map(|w| w.iter().map(|&[b, e]| Interval::new(b, e)).collect());
        p
    };
    (a.iter().map(convert).collect(), b.iter().map(convert).collect())
}
