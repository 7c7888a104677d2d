//! Tracker-style corruption of travel paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, RawPath, Timestamp};

#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Probability that a visit is moved in time.
    pub shift_rate: f64,
    /// Largest shift, in dataset ticks.
    pub shift_max: Timestamp,
    /// Probability that a visit is lost.
    pub delete_rate: f64,
    /// Probability, per object, of exchanging its path suffix with another
    /// object seen at the same time.
    pub idswitch_rate: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn check(&self) -> Result<()> {
        for (name, r) in [
            ("shift rate", self.shift_rate),
            ("delete rate", self.delete_rate),
            ("id switch rate", self.idswitch_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::input(format!("{name} {r} is not in [0, 1]")));
            }
        }
        if self.shift_max < 0 {
            return Err(Error::input("shift max must be non-negative"));
        }
        Ok(())
    }
}

/// What `inject_noise` did, in the order it did it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NoiseTrace {
    /// (path index, visit index, applied offset).
    pub shifted: Vec<(usize, usize, Timestamp)>,
    /// (path index, visit index) before deletion.
    pub deleted: Vec<(usize, usize)>,
    /// Paths emptied by deletion and dropped.
    pub dropped_paths: usize,
    /// (path a, path b, cut time) after dropping empty paths.
    pub switched: Vec<(usize, usize, Timestamp)>,
}

fn shift(paths: &mut [RawPath], spec: &NoiseSpec, rng: &mut ChaCha8Rng, trace: &mut NoiseTrace) {
    for (pi, p) in paths.iter_mut().enumerate() {
        for i in 0..p.visits.len() {
            if !rng.gen_bool(spec.shift_rate) {
                continue;
            }
            let offset = rng.gen_range(-spec.shift_max..=spec.shift_max);
            // keep entrances strictly increasing: clamp instead of reordering
            let lo = if i > 0 {
                p.visits[i - 1].enter + 1
            } else {
                Timestamp::MIN
            };
            let hi = p.visits.get(i + 1).map_or(Timestamp::MAX, |v| v.enter - 1);
            let v = &mut p.visits[i];
            let enter = (v.enter + offset).clamp(lo, hi.max(lo));
            let applied = enter - v.enter;
            v.enter += applied;
            v.exit += applied;
            trace.shifted.push((pi, i, applied));
        }
    }
}

fn delete(paths: &mut Vec<RawPath>, spec: &NoiseSpec, rng: &mut ChaCha8Rng, trace: &mut NoiseTrace) {
    for (pi, p) in paths.iter_mut().enumerate() {
        let mut i = 0;
        p.visits.retain(|_| {
            let gone = rng.gen_bool(spec.delete_rate);
            if gone {
                trace.deleted.push((pi, i));
            }
            i += 1;
            !gone
        });
    }
    let before = paths.len();
    paths.retain(|p| !p.visits.is_empty());
    trace.dropped_paths = before - paths.len();
}

fn span(p: &RawPath) -> (Timestamp, Timestamp) {
    (p.visits[0].enter, p.visits.iter().map(|v| v.exit).max().unwrap())
}

fn id_switch(paths: &mut [RawPath], spec: &NoiseSpec, rng: &mut ChaCha8Rng, trace: &mut NoiseTrace) {
    for a in 0..paths.len() {
        if !rng.gen_bool(spec.idswitch_rate) {
            continue;
        }
        let (a0, a1) = span(&paths[a]);
        let partners: Vec<usize> = (0..paths.len())
            .filter(|&b| b != a)
            .filter(|&b| {
                let (b0, b1) = span(&paths[b]);
                b0.max(a0) < b1.min(a1)
            })
            .collect();
        if partners.is_empty() {
            continue;
        }
        let b = partners[rng.gen_range(0..partners.len())];
        let (b0, b1) = span(&paths[b]);
        let cut = rng.gen_range(a0.max(b0) + 1..=a1.min(b1));
        let ka = paths[a].visits.partition_point(|v| v.enter < cut);
        let kb = paths[b].visits.partition_point(|v| v.enter < cut);
        // cut lies after both first entrances, so neither path empties
        let tail_a = paths[a].visits.split_off(ka);
        let tail_b = paths[b].visits.split_off(kb);
        paths[a].visits.extend(tail_b);
        paths[b].visits.extend(tail_a);
        trace.switched.push((a, b, cut));
    }
}

/// Applies shifts, then deletions, then id switches. Deterministic per seed.
pub fn inject_noise_traced(data: &Dataset, spec: &NoiseSpec) -> Result<(Dataset, NoiseTrace)> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut trace = NoiseTrace::default();
    let mut paths = data.to_raw();
    shift(&mut paths, spec, &mut rng, &mut trace);
    delete(&mut paths, spec, &mut rng, &mut trace);
    id_switch(&mut paths, spec, &mut rng, &mut trace);
    Ok((Dataset::from_raw(data.unit(), &paths)?, trace))
}

pub fn inject_noise(data: &Dataset, spec: &NoiseSpec) -> Result<Dataset> {
    inject_noise_traced(data, spec).map(|(d, _)| d)
}
