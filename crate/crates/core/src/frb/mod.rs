//! Filter-and-refine baseline: candidate route/supporter pairs come from
//! closed sequential patterns over partition tokens, then each candidate is
//! refined into valid patterns with per-index buffers of partial patterns.

mod seqmine;

use std::collections::HashSet;

use rayon::prelude::*;

pub use seqmine::{mine_sequential_candidates, CandidateSeq, Token};

use crate::clustering::{build_partitions, distinct_objects, maximal_windows, PartitionTable, Sighting};
use crate::error::{Error, Result};
use crate::maxgrowth::{join_positions, Core};
use crate::maximality::remove_non_maximal;
use crate::model::{annotate, CameraId, Dataset, MiningParams, ObjectId, Pattern, Position};
use crate::stats::{self, MiningOutput, MiningStats, StageStats, Stopwatch};

/// How far back in the candidate sequence a new group may attach.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Lookback {
    /// Every earlier index. Needed for completeness: a candidate may hold
    /// tokens between two route cameras that the route skips over.
    #[default]
    Unbounded,
    /// Only the previous `d + 1` indices of the candidate.
    Window,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct FrbOptions {
    pub lookback: Lookback,
    /// Refine candidates on the rayon pool.
    pub parallel: bool,
    pub keep_candidates: bool,
}

/// Objects with their position at the last route camera, plus the route.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialPattern {
    pub objects: Core,
    pub route: Vec<CameraId>,
}

/// Each object's path rewritten as (camera, partition) tokens.
pub fn to_partition_sequences(data: &Dataset, parts: &PartitionTable) -> Vec<Vec<Token>> {
    data.paths()
        .iter()
        .map(|p| {
            p.visits()
                .iter()
                .enumerate()
                .map(|(i, v)| Token {
                    camera: v.camera,
                    part: parts
                        .partition_of(p.object(), i as Position + 1)
                        .expect("partition table built from this dataset"),
                })
                .collect()
        })
        .collect()
}

/// Number of visits strictly between two positions of `o`'s path.
pub fn distance(data: &Dataset, o: ObjectId, from_pos: Position, to_pos: Position) -> Result<usize> {
    let path = data.check_object(o)?;
    let len = path.len();
    if from_pos == 0 || to_pos as usize > len || from_pos >= to_pos {
        return Err(Error::input(format!(
            "positions {from_pos}..{to_pos} not increasing within a path of length {len}"
        )));
    }
    Ok((to_pos - from_pos - 1) as usize)
}

/// Valid patterns (route length >= k) whose route is a subsequence of the
/// candidate and whose objects are among its supporters.
pub fn refine_candidate(
    cand: &CandidateSeq,
    data: &Dataset,
    parts: &PartitionTable,
    params: &MiningParams,
    lookback: Lookback,
) -> Vec<Pattern> {
    let n = cand.tokens.len();
    let mut buffers: Vec<Vec<PartialPattern>> = Vec::with_capacity(n);
    let mut out = Vec::new();
    for (i, tok) in cand.tokens.iter().enumerate() {
        let mut sightings: Vec<Sighting> = Vec::new();
        for &o in &cand.supporters {
            for &pos in data.positions(o, tok.camera) {
                if parts.partition_of(o, pos) == Some(tok.part) {
                    let enter = data.paths()[o.index()].visit(pos).expect("indexed position").enter;
                    sightings.push(Sighting { enter, object: o, pos });
                }
            }
        }
        sightings.sort_unstable();
        let groups = maximal_windows(&sightings, params.eps, params.m);

        let first = match lookback {
            Lookback::Unbounded => 0,
            Lookback::Window => i.saturating_sub(crate::model::max_step(params.d)),
        };
        let mut seen: HashSet<PartialPattern> = HashSet::new();
        let mut here: Vec<PartialPattern> = Vec::new();
        for buf in &buffers[first..i] {
            for partial in buf {
                for g in &groups {
                    let objects = join_positions(&partial.objects, &g.members, params.d);
                    if distinct_objects(&objects) < params.m {
                        continue;
                    }
                    let mut route = partial.route.clone();
                    route.push(tok.camera);
                    let p = PartialPattern { objects, route };
                    if seen.insert(p.clone()) {
                        if p.route.len() >= params.k {
                            out.push(to_pattern(&p));
                        }
                        here.push(p);
                    }
                }
            }
        }
        for g in groups {
            let p = PartialPattern {
                objects: g.members,
                route: vec![tok.camera],
            };
            if seen.insert(p.clone()) {
                if params.k <= 1 {
                    out.push(to_pattern(&p));
                }
                here.push(p);
            }
        }
        buffers.push(here);
    }
    out
}

fn to_pattern(p: &PartialPattern) -> Pattern {
    Pattern::new(p.objects.iter().map(|&(o, _)| o).collect(), p.route.clone())
}

/// Mines all maximal patterns with the filter-and-refine pipeline.
pub fn mine_frb(data: &Dataset, params: &MiningParams, opts: FrbOptions) -> Result<MiningOutput> {
    params.check()?;
    let mut watch = Stopwatch::start();
    let parts = build_partitions(data, params.eps);
    let sequences = to_partition_sequences(data, &parts);
    let cands = mine_sequential_candidates(&sequences, params.m, params.k);
    let generation = watch.lap();

    let refine = |c: &CandidateSeq| refine_candidate(c, data, &parts, params, opts.lookback);
    let candidates: Vec<Pattern> = if opts.parallel {
        cands.par_iter().flat_map_iter(refine).collect()
    } else {
        cands.iter().flat_map(refine).collect()
    };
    let verification = watch.lap();

    let num_candidates = candidates.len() as u64;
    let kept = opts.keep_candidates.then(|| candidates.clone());
    let mut patterns = remove_non_maximal(candidates, params.d);
    let dominance = watch.lap();

    for p in &mut patterns {
        annotate(p, data, params)?;
    }
    let annotation = watch.lap();

    let maximal = patterns.len() as u64;
    let stats = MiningStats {
        algorithm: "frb",
        stages: vec![
            StageStats::new(stats::CANDIDATE_GENERATION, generation, cands.len() as u64, 0),
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
        verification_work: cands.len() as u64,
        ..MiningStats::default()
    };
    Ok(MiningOutput {
        patterns,
        stats,
        candidates: kept,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::io::parse_paths;
    use crate::model::validate_pattern;
    use crate::oracle::{mine_bruteforce, OracleLimits};
    use crate::testutil::{dataset_strategy, four_objects, obj, pat};

    fn keys(ps: &[Pattern]) -> BTreeSet<(Vec<ObjectId>, Vec<CameraId>)> {
        ps.iter().map(|p| (p.objects.clone(), p.route.clone())).collect()
    }

    /// A candidate route that holds a camera the valid route skips.
    const DETOUR: &str = "#platoon-paths v1 unit=s
o1 A[0,1] X[5,6] A[10,11] B[12,13]
o2 A[5,6] B[7,8] X[9,10] B[14,15]
";

    #[test]
    fn distance_counts_visits_between() {
        let data = four_objects();
        let o3 = obj(&data, "o3");
        let path = data.path(o3).unwrap();
        for from in 1..=5u32 {
            for to in from + 1..=5 {
                let between = path.visits()[from as usize..to as usize - 1].len();
                assert_eq!(distance(&data, o3, from, to).unwrap(), between);
            }
        }
        assert!(distance(&data, o3, 3, 3).is_err());
        assert!(distance(&data, o3, 0, 2).is_err());
        assert!(distance(&data, o3, 2, 6).is_err());
        assert!(distance(&data, ObjectId(7), 1, 2).is_err());
    }

    #[test]
    fn refine_the_four_object_data() {
        let data = four_objects();
        let params = MiningParams::new(2, 3, 1, 6).unwrap();
        let parts = build_partitions(&data, 6);
        let seqs = to_partition_sequences(&data, &parts);
        let abd: Vec<Token> = seqs[obj(&data, "o1").index()].clone();
        let cand = CandidateSeq {
            tokens: abd,
            supporters: (0..4).map(ObjectId).collect(),
        };
        let out = refine_candidate(&cand, &data, &parts, &params, Lookback::Unbounded);
        assert!(keys(&out).contains(&(
            pat(&data, &["o1", "o2", "o3"], "ABD").objects,
            pat(&data, &["o1"], "ABD").route
        )));
        for p in &out {
            assert!(validate_pattern(p, &data, &params).unwrap());
        }
    }

    #[test]
    fn supporters_never_close_in_time() {
        let data = parse_paths("#platoon-paths v1 unit=s\na P[0,1] Q[2,3]\nb P[100,101] Q[102,103]\n").unwrap();
        let params = MiningParams::new(2, 2, 0, 5).unwrap();
        let parts = build_partitions(&data, 5);
        let cand = CandidateSeq {
            tokens: to_partition_sequences(&data, &parts)[0].clone(),
            supporters: vec![ObjectId(0), ObjectId(1)],
        };
        assert!(refine_candidate(&cand, &data, &parts, &params, Lookback::Unbounded).is_empty());
        assert!(mine_frb(&data, &params, FrbOptions::default())
            .unwrap()
            .patterns
            .is_empty());
    }

    #[test]
    fn windowed_lookback_misses_a_skipped_token() {
        let data = parse_paths(DETOUR).unwrap();
        let params = MiningParams::new(2, 2, 0, 6).unwrap();
        let want = keys(
            &mine_bruteforce(&data, &params, OracleLimits::default())
                .unwrap()
                .patterns,
        );
        let expected = (
            vec![ObjectId(0), ObjectId(1)],
            vec![data.camera_id("A").unwrap(), data.camera_id("B").unwrap()],
        );
        assert!(want.contains(&expected));

        let full = mine_frb(&data, &params, FrbOptions::default()).unwrap();
        assert_eq!(keys(&full.patterns), want);
        let windowed = FrbOptions {
            lookback: Lookback::Window,
            ..Default::default()
        };
        assert!(!keys(&mine_frb(&data, &params, windowed).unwrap().patterns).contains(&expected));
    }

    proptest! {
        #[test]
        fn frb_matches_the_oracle(
            data in dataset_strategy(5, 3, 5),
            m in 1usize..4,
            k in 1usize..4,
            d in 0usize..3,
            eps in 0i64..12,
        ) {
            let params = MiningParams { m, k, d, eps };
            let opts = FrbOptions { keep_candidates: true, ..Default::default() };
            let out = mine_frb(&data, &params, opts).unwrap();
            for p in out.candidates.as_ref().unwrap() {
                prop_assert!(validate_pattern(p, &data, &params).unwrap());
            }
            let want = mine_bruteforce(&data, &params, OracleLimits::default()).unwrap();
            prop_assert_eq!(keys(&out.patterns), keys(&want.patterns));
        }
    }
}
