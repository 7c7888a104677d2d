//! Exhaustive reference miner for small instances.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::maximality::remove_non_maximal;
use crate::model::{annotate, embeddings, find_witness, CameraId, Dataset, MiningParams, ObjectId, Pattern};
use crate::stats::{self, MiningOutput, MiningStats, StageStats, Stopwatch};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_objects: usize,
    /// Longest travel path (in visits) the oracle accepts.
    pub max_route_len: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_objects: 10,
            max_route_len: 8,
        }
    }
}

impl OracleLimits {
    pub fn check(&self, data: &Dataset) -> Result<()> {
        if data.num_objects() > self.max_objects {
            return Err(Error::LimitExceeded {
                dimension: "object count",
                actual: data.num_objects(),
                limit: self.max_objects,
            });
        }
        if data.max_path_len() > self.max_route_len {
            return Err(Error::LimitExceeded {
                dimension: "path length",
                actual: data.max_path_len(),
                limit: self.max_route_len,
            });
        }
        Ok(())
    }
}

/// Every route of length >= k that embeds with gaps <= d into some path.
fn candidate_routes(data: &Dataset, d: usize, k: usize) -> BTreeSet<Vec<CameraId>> {
    let step = crate::model::max_step(d);
    let mut routes = BTreeSet::new();
    for path in data.paths() {
        let cams = path.cameras();
        let mut stack: Vec<usize> = Vec::new();
        fn walk(cams: &[CameraId], step: usize, k: usize, stack: &mut Vec<usize>, out: &mut BTreeSet<Vec<CameraId>>) {
            if stack.len() >= k {
                out.insert(stack.iter().map(|&i| cams[i]).collect());
            }
            let (lo, hi) = match stack.last() {
                None => (0, cams.len()),
                Some(&q) => (q + 1, q.saturating_add(step).saturating_add(1).min(cams.len())),
            };
            for q in lo..hi {
                stack.push(q);
                walk(cams, step, k, stack, out);
                stack.pop();
            }
        }
        walk(&cams, step, k, &mut stack, &mut routes);
    }
    routes
}

/// Maximal patterns by exhaustive search: for each candidate route, the
/// maximal object sets that admit a witness, then dominance elimination.
pub fn mine_bruteforce(data: &Dataset, params: &MiningParams, limits: OracleLimits) -> Result<MiningOutput> {
    params.check()?;
    limits.check(data)?;
    let mut watch = Stopwatch::start();
    let mut candidates = Vec::new();
    let mut checked = 0u64;
    for route in candidate_routes(data, params.d, params.k) {
        let carriers: Vec<ObjectId> = data
            .paths()
            .iter()
            .filter(|p| !embeddings(&route, &p.cameras(), params.d).is_empty())
            .map(|p| p.object())
            .collect();
        if carriers.len() < params.m {
            continue;
        }
        // subsets by decreasing size; any subset of a valid set is valid
        let n = carriers.len();
        if n > 30 {
            return Err(Error::LimitExceeded {
                dimension: "objects carrying one route",
                actual: n,
                limit: 30,
            });
        }
        let mut masks: Vec<u32> = (1u32..(1 << n))
            .filter(|s| s.count_ones() as usize >= params.m)
            .collect();
        masks.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
        let mut valid: Vec<u32> = Vec::new();
        for s in masks {
            if valid.iter().any(|&v| v & s == s) {
                continue;
            }
            let objects = (0..n).filter(|i| s >> i & 1 == 1).map(|i| carriers[i]).collect();
            let p = Pattern::new(objects, route.clone());
            checked += 1;
            if find_witness(&p, data, params.d, params.eps)?.is_some() {
                valid.push(s);
                candidates.push(p);
            }
        }
    }
    let verification = watch.lap();

    let num_candidates = candidates.len() as u64;
    let mut patterns = remove_non_maximal(candidates, params.d);
    let dominance = watch.lap();
    for p in &mut patterns {
        annotate(p, data, params)?;
    }
    let annotation = watch.lap();

    let maximal = patterns.len() as u64;
    Ok(MiningOutput {
        patterns,
        stats: MiningStats {
            algorithm: "oracle",
            stages: vec![
                StageStats::new(stats::CANDIDATE_GENERATION, std::time::Duration::ZERO, 0, 0),
                StageStats::new(stats::VALIDNESS_VERIFICATION, verification, num_candidates, 0),
                StageStats::new(
                    stats::DOMINANCE_VERIFICATION,
                    dominance,
                    maximal,
                    num_candidates - maximal,
                ),
                StageStats::new(stats::ANNOTATION, annotation, maximal, 0),
            ],
            candidates: num_candidates,
            maximal,
            non_maximal: num_candidates - maximal,
            verification_work: checked,
            ..MiningStats::default()
        },
        candidates: None,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::io::parse_paths;
    use crate::model::route_embeds;
    use crate::testutil::{dataset_strategy, four_objects, pat};

    #[test]
    fn four_object_data() {
        let data = four_objects();
        let out = mine_bruteforce(&data, &MiningParams::new(2, 3, 1, 6).unwrap(), OracleLimits::default()).unwrap();
        let keys: Vec<_> = out.patterns.iter().map(|p| p.key()).collect();
        let abde = pat(&data, &["o2", "o3"], "ABDE");
        let abd = pat(&data, &["o1", "o2", "o3"], "ABD");
        assert_eq!(keys, vec![abde.key(), abd.key()]);
        assert_eq!(out.stats.maximal, 2);
        assert!(out.stats.verification_work > 0);
    }

    #[test]
    fn group_larger_than_dataset() {
        let data = four_objects();
        let out = mine_bruteforce(
            &data,
            &MiningParams::new(5, 1, 0, 100).unwrap(),
            OracleLimits::default(),
        )
        .unwrap();
        assert!(out.patterns.is_empty());
    }

    #[test]
    fn refuses_large_instances() {
        let data = four_objects();
        let params = MiningParams::new(2, 3, 1, 6).unwrap();
        let few = OracleLimits {
            max_objects: 3,
            ..Default::default()
        };
        assert!(matches!(
            mine_bruteforce(&data, &params, few),
            Err(Error::LimitExceeded { limit: 3, .. })
        ));
        let short = OracleLimits {
            max_route_len: 4,
            ..Default::default()
        };
        assert!(matches!(
            mine_bruteforce(&data, &params, short),
            Err(Error::LimitExceeded { actual: 5, .. })
        ));

        let crowd: String = std::iter::once("#platoon-paths v1 unit=s\n".to_string())
            .chain((0..31).map(|i| format!("x{i:02} A[{i},{}]\n", i + 1)))
            .collect();
        let crowd = parse_paths(&crowd).unwrap();
        let wide = OracleLimits {
            max_objects: 40,
            ..Default::default()
        };
        let p = MiningParams::new(2, 1, 0, 100).unwrap();
        assert!(matches!(
            mine_bruteforce(&crowd, &p, wide),
            Err(Error::LimitExceeded {
                actual: 31,
                limit: 30,
                ..
            })
        ));
    }

    #[test]
    fn deterministic() {
        let data = four_objects();
        let params = MiningParams::new(1, 2, 2, 10).unwrap();
        let a = mine_bruteforce(&data, &params, OracleLimits::default()).unwrap();
        let b = mine_bruteforce(&data, &params, OracleLimits::default()).unwrap();
        assert_eq!(a.patterns, b.patterns);
    }

    fn all_routes(cameras: u32, max_len: usize) -> Vec<Vec<CameraId>> {
        let mut out: Vec<Vec<CameraId>> = vec![Vec::new()];
        let mut frontier = out.clone();
        for _ in 0..max_len {
            frontier = frontier
                .iter()
                .flat_map(|r| (0..cameras).map(move |c| [r.as_slice(), &[CameraId(c)]].concat()))
                .collect();
            out.extend(frontier.iter().cloned());
        }
        out
    }

    proptest! {
        #[test]
        fn candidate_routes_are_the_embedded_ones(data in dataset_strategy(3, 3, 4), d in 0usize..3, k in 1usize..3) {
            let got = candidate_routes(&data, d, k);
            let want: BTreeSet<Vec<CameraId>> = all_routes(data.num_cameras() as u32, 4)
                .into_iter()
                .filter(|r| r.len() >= k)
                .filter(|r| data.paths().iter().any(|p| route_embeds(r, &p.cameras(), d)))
                .collect();
            prop_assert_eq!(got, want);
        }
    }
}
