//! IoU matching of found against golden patterns.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Interval, ObjectId, Pattern};

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Match {
    pub found: usize,
    pub golden: usize,
    pub object_iou: f64,
    pub span_iou: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub num_found: usize,
    pub num_golden: usize,
    pub matches: Vec<Match>,
    /// Counts of each found pattern's best `min(object IoU, span IoU)`
    /// over the golden set, in bins `[0, 0.1)`, ..., `[0.9, 1.0]`.
    pub iou_histogram: Vec<u64>,
}

impl EvalReport {
    /// `bin_start,count` rows with a header.
    pub fn histogram_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bin_start", "count"]).expect("in-memory write");
        for (i, c) in self.iou_histogram.iter().enumerate() {
            w.write_record([format!("{:.1}", i as f64 / HISTOGRAM_BINS as f64), c.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }

    pub fn summary(&self) -> String {
        format!(
            "found {}\ngolden {}\nmatched {}\nprecision {:.4}\nrecall {:.4}\nf1 {:.4}\n",
            self.num_found,
            self.num_golden,
            self.matches.len(),
            self.precision,
            self.recall,
            self.f1
        )
    }
}

pub fn object_iou(a: &[ObjectId], b: &[ObjectId]) -> f64 {
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

/// Overlap over union of two closed intervals. Disjoint intervals give 0;
/// two identical instants give 1.
pub fn span_iou(a: Interval, b: Interval) -> f64 {
    let overlap = (a.end.min(b.end) - a.begin.max(b.begin)).max(0);
    let union = a.end.max(b.end) - a.begin.min(b.begin);
    if union == 0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    if a.end < b.begin || b.end < a.begin {
        return 0.0;
    }
    overlap as f64 / union as f64
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

fn spans(ps: &[Pattern], what: &str) -> Result<Vec<Interval>> {
    ps.iter()
        .enumerate()
        .map(|(i, p)| {
            p.span
                .ok_or_else(|| Error::input(format!("{what} pattern {} has no span", i + 1)))
        })
        .collect()
}

/// A found pattern matches a golden one when both IoUs exceed `threshold`.
/// Pairs are taken greedily by decreasing combined IoU, each golden pattern
/// at most once unless `many_to_one`. An empty found set has precision 1,
/// an empty golden set recall 1.
pub fn match_patterns(found: &[Pattern], golden: &[Pattern], threshold: f64, many_to_one: bool) -> Result<EvalReport> {
    let fs = spans(found, "found")?;
    let gs = spans(golden, "golden")?;

    let mut hist = vec![0u64; HISTOGRAM_BINS];
    let mut pairs: Vec<Match> = Vec::new();
    for (i, f) in found.iter().enumerate() {
        let mut best = 0.0f64;
        for (j, g) in golden.iter().enumerate() {
            let oi = object_iou(&f.objects, &g.objects);
            let si = span_iou(fs[i], gs[j]);
            best = best.max(oi.min(si));
            if oi > threshold && si > threshold {
                pairs.push(Match {
                    found: i,
                    golden: j,
                    object_iou: oi,
                    span_iou: si,
                });
            }
        }
        hist[((best * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)] += 1;
    }
    pairs.sort_by(|a, b| {
        (b.object_iou + b.span_iou)
            .total_cmp(&(a.object_iou + a.span_iou))
            .then(a.found.cmp(&b.found))
            .then(a.golden.cmp(&b.golden))
    });
    let mut found_used = vec![false; found.len()];
    let mut golden_used = vec![false; golden.len()];
    let mut matches = Vec::new();
    for m in pairs {
        if found_used[m.found] || (!many_to_one && golden_used[m.golden]) {
            continue;
        }
        found_used[m.found] = true;
        golden_used[m.golden] = true;
        matches.push(m);
    }
    matches.sort_by_key(|m| (m.found, m.golden));

    let precision = if found.is_empty() {
        1.0
    } else {
        matches.len() as f64 / found.len() as f64
    };
    let recall = if golden.is_empty() {
        1.0
    } else {
        golden_used.iter().filter(|&&u| u).count() as f64 / golden.len() as f64
    };
    Ok(EvalReport {
        precision,
        recall,
        f1: f1(precision, recall),
        num_found: found.len(),
        num_golden: golden.len(),
        matches,
        iou_histogram: hist,
    })
}
