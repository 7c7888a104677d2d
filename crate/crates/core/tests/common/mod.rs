//! Helpers shared by the integration tests: a seeded generator of small
//! instances and an independent miner for the consecutive (d = 0) case.
#![allow(dead_code)]

use std::collections::BTreeMap;

use platoon::model::{CameraId, Dataset, MiningParams, ObjectId, Pattern, RawPath, RawVisit, TimeUnit, Timestamp};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPS_CHOICES: [Timestamp; 7] = [0, 1, 3, 6, 12, 25, 60];

/// A random instance with at most 8 objects, 8 cameras and 10 visits per
/// path, plus mining parameters. Objects mostly follow one of a few shared
/// template routes with dropped and inserted visits and entrance jitter, so
/// patterns are common. Objects may revisit a camera, also within eps.
pub fn small_instance(seed: u64) -> (Dataset, MiningParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(2..=3);
    let k = rng.gen_range(2..=3);
    let d = rng.gen_range(0..=2);
    let eps = *EPS_CHOICES.choose(&mut rng).unwrap();
    let params = MiningParams::new(m, k, d, eps).unwrap();

    let num_cameras = rng.gen_range(2..=8usize);
    let num_objects = rng.gen_range(2..=8usize);
    let num_templates = rng.gen_range(1..=3usize);
    let templates: Vec<Vec<(usize, Timestamp)>> = (0..num_templates)
        .map(|_| {
            let len = rng.gen_range(2..=10usize);
            let mut t = rng.gen_range(0..40);
            (0..len)
                .map(|_| {
                    t += rng.gen_range(2..30);
                    (rng.gen_range(0..num_cameras), t)
                })
                .collect()
        })
        .collect();
    let jitter = rng.gen_range(0..=2 * eps.max(1));

    let mut raw = Vec::new();
    for o in 0..num_objects {
        let mut stops: Vec<(usize, Timestamp)> = Vec::new();
        if rng.gen_bool(0.8) {
            let tpl = templates.choose(&mut rng).unwrap();
            for &(c, t) in tpl {
                if rng.gen_bool(0.15) {
                    continue;
                }
                if rng.gen_bool(0.15) {
                    stops.push((rng.gen_range(0..num_cameras), t - 1 - rng.gen_range(0..3)));
                }
                stops.push((c, t + rng.gen_range(0..=jitter)));
            }
        } else {
            let len = rng.gen_range(1..=10);
            let mut t = rng.gen_range(0..60);
            for _ in 0..len {
                t += rng.gen_range(1..30);
                stops.push((rng.gen_range(0..num_cameras), t));
            }
        }
        stops.sort_by_key(|&(_, t)| t);
        let mut visits: Vec<RawVisit> = Vec::new();
        for (c, t) in stops {
            if visits.len() == 10 || visits.last().is_some_and(|v| v.enter >= t) {
                continue;
            }
            visits.push(RawVisit::new(format!("c{c}"), t, t + rng.gen_range(1..5)));
        }
        if visits.is_empty() {
            visits.push(RawVisit::new("c0", 0, 1));
        }
        raw.push(RawPath {
            object: format!("o{o}"),
            visits,
        });
    }
    (Dataset::from_raw(TimeUnit::Seconds, &raw).unwrap(), params)
}

/// Occurrence of a route as a run of consecutive visits.
#[derive(Clone, Copy)]
struct Occ {
    object: ObjectId,
    start: usize,
}

fn distinct(occ: &[Occ]) -> usize {
    let mut v: Vec<ObjectId> = occ.iter().map(|o| o.object).collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn refine(data: &Dataset, occ: Vec<Occ>, dim: usize, len: usize, params: &MiningParams, out: &mut Vec<Vec<ObjectId>>) {
    if distinct(&occ) < params.m {
        return;
    }
    if dim == len {
        let mut objs: Vec<ObjectId> = occ.iter().map(|o| o.object).collect();
        objs.sort_unstable();
        objs.dedup();
        out.push(objs);
        return;
    }
    let enter = |o: &Occ| data.paths()[o.object.index()].visits()[o.start + dim].enter;
    let mut sorted = occ;
    sorted.sort_by_key(|o| enter(o));
    let mut hi = 0;
    let mut prev_hi = usize::MAX;
    for lo in 0..sorted.len() {
        hi = hi.max(lo);
        while hi + 1 < sorted.len() && enter(&sorted[hi + 1]) - enter(&sorted[lo]) <= params.eps {
            hi += 1;
        }
        if hi == prev_hi {
            continue;
        }
        prev_hi = hi;
        refine(data, sorted[lo..=hi].to_vec(), dim + 1, len, params, out);
    }
}

fn is_substring(small: &[CameraId], big: &[CameraId]) -> bool {
    small.is_empty() || big.windows(small.len()).any(|w| w == small)
}

fn is_subset(small: &[ObjectId], big: &[ObjectId]) -> bool {
    small.iter().all(|o| big.contains(o))
}

/// Maximal patterns whose route is a run of consecutive visits in every
/// member's path, computed directly from that definition.
pub fn mine_consecutive(data: &Dataset, params: &MiningParams) -> Vec<Pattern> {
    let mut by_route: BTreeMap<Vec<CameraId>, Vec<Occ>> = BTreeMap::new();
    for path in data.paths() {
        let cams = path.cameras();
        for start in 0..cams.len() {
            for end in start + params.k..=cams.len() {
                by_route.entry(cams[start..end].to_vec()).or_default().push(Occ {
                    object: path.object(),
                    start,
                });
            }
        }
    }
    let mut found: Vec<Pattern> = Vec::new();
    for (route, occ) in by_route {
        let mut groups = Vec::new();
        refine(data, occ, 0, route.len(), params, &mut groups);
        for g in groups {
            found.push(Pattern::new(g, route.clone()));
        }
    }
    found.sort_by(|a, b| (&a.objects, &a.route).cmp(&(&b.objects, &b.route)));
    found.dedup_by(|a, b| a.objects == b.objects && a.route == b.route);
    let keep: Vec<bool> = found
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !found.iter().enumerate().any(|(j, q)| {
                i != j
                    && q.objects.len() >= p.objects.len()
                    && q.route.len() >= p.route.len()
                    && is_subset(&p.objects, &q.objects)
                    && is_substring(&p.route, &q.route)
            })
        })
        .collect();
    let mut out: Vec<Pattern> = found
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    platoon::model::canonicalize(&mut out);
    out
}

pub fn keys(ps: &[Pattern]) -> Vec<(Vec<ObjectId>, Vec<CameraId>)> {
    ps.iter().map(|p| (p.objects.clone(), p.route.clone())).collect()
}
