//! MaxGrowth: depth-first growth of feasible cluster sequences. Every grown
//! sequence already is a valid pattern, so there is no verification stage;
//! root pruning and dependency pruning cut subtrees that can only yield
//! non-maximal patterns.

mod order;
mod repair;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

pub use order::{precedence_edges, precedence_order, SearchOrder};

use crate::clustering::{build_clusters, Cluster, ClusterId, ClusterIndex};
use crate::error::Result;
use crate::maximality::remove_non_maximal;
use crate::model::{annotate, Dataset, MiningParams, ObjectId, Pattern, Position};
use crate::stats::{self, MiningOutput, MiningStats, StageStats, Stopwatch};

/// Core objects of a sequence with the positions at which each can sit in
/// its last cluster, sorted by (object, position).
pub type Core = Vec<(ObjectId, Position)>;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MaxGrowthOptions {
    /// Skip roots already shown to start only non-maximal sequences.
    pub root_prune: bool,
    /// Do not extend a feasible cluster that depends on another one.
    pub dep_prune: bool,
    /// Grow root subtrees on the rayon pool.
    pub parallel: bool,
    /// Return the pre-filter candidates alongside the maximal set.
    pub keep_candidates: bool,
}

impl Default for MaxGrowthOptions {
    fn default() -> Self {
        MaxGrowthOptions {
            root_prune: true,
            dep_prune: true,
            parallel: false,
            keep_candidates: false,
        }
    }
}

/// A cluster sequence under growth and its core objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSequence {
    pub clusters: Vec<ClusterId>,
    pub core: Core,
}

impl ClusterSequence {
    pub fn root(cl: &Cluster) -> Self {
        ClusterSequence {
            clusters: vec![cl.id],
            core: cl.members.clone(),
        }
    }

    pub fn extended(&self, next: &Cluster, d: usize) -> Self {
        let mut clusters = self.clusters.clone();
        clusters.push(next.id);
        ClusterSequence {
            clusters,
            core: extend_core(&self.core, next, d),
        }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// The candidate pattern `<core, cameras>` of this sequence.
    pub fn to_pattern(&self, clusters: &[Cluster]) -> Pattern {
        Pattern::new(
            core_objects(&self.core),
            self.clusters.iter().map(|c| clusters[c.index()].camera).collect(),
        )
    }
}

fn core_objects(core: &[(ObjectId, Position)]) -> Vec<ObjectId> {
    let mut objects: Vec<ObjectId> = core.iter().map(|&(o, _)| o).collect();
    objects.dedup();
    objects
}

/// Core objects that stay core when `next` is appended: members of `next`
/// seen there strictly after, and at most `d + 1` positions after, their
/// current position.
pub fn extend_core(core: &[(ObjectId, Position)], next: &Cluster, d: usize) -> Core {
    join_positions(core, &next.members, d)
}

/// Entries of `next` whose position lies 1 to `d + 1` steps after some
/// position of the same object in `core`. Both lists are sorted by
/// (object, position), and so is the result.
pub(crate) fn join_positions(core: &[(ObjectId, Position)], next: &[(ObjectId, Position)], d: usize) -> Core {
    let step = crate::model::max_step(d) as u64;
    let mut out = Vec::with_capacity(core.len().min(next.len()));
    let (mut i, mut j) = (0, 0);
    while i < core.len() && j < next.len() {
        let (a, b) = (core[i].0, next[j].0);
        match a.cmp(&b) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let ci = i + core[i..].iter().take_while(|x| x.0 == a).count();
                let nj = j + next[j..].iter().take_while(|x| x.0 == a).count();
                for &(_, q) in &next[j..nj] {
                    if core[i..ci].iter().any(|&(_, p)| q > p && (q - p) as u64 <= step) {
                        out.push((a, q));
                    }
                }
                i = ci;
                j = nj;
            }
        }
    }
    out
}

/// Clusters holding at least `m` core objects within the gap bound after
/// one of their current positions, sorted by id.
pub fn feasible_clusters(core: &[(ObjectId, Position)], index: &ClusterIndex, params: &MiningParams) -> Vec<ClusterId> {
    let step = crate::model::max_step(params.d);
    let mut hits: Vec<(ClusterId, ObjectId)> = Vec::new();
    for &(o, p) in core {
        let up_to = (p as usize).saturating_add(step).min(Position::MAX as usize) as Position;
        hits.extend(index.in_range(o, p, up_to).iter().map(|&(_, c)| (c, o)));
    }
    hits.sort_unstable();
    hits.dedup();
    let mut out = Vec::new();
    let mut i = 0;
    while i < hits.len() {
        let mut j = i;
        while j < hits.len() && hits[j].0 == hits[i].0 {
            j += 1;
        }
        if j - i >= params.m {
            out.push(hits[i].0);
        }
        i = j;
    }
    out
}

/// `a` depends on `b` for sequence `s`: every step a core object can take
/// from `s` into `a` passes through `b` on the way, strictly between the two
/// positions.
pub fn depends_on(a: &Cluster, b: &Cluster, s: &ClusterSequence, d: usize) -> bool {
    core_depends(&s.core, &extend_core(&s.core, a, d), &extend_core(&s.core, b, d), d)
}

fn core_depends(
    core: &[(ObjectId, Position)],
    core_a: &[(ObjectId, Position)],
    core_b: &[(ObjectId, Position)],
    d: usize,
) -> bool {
    if core_a.is_empty() {
        return false;
    }
    let step = crate::model::max_step(d) as u64;
    let of = |list: &[(ObjectId, Position)], o: ObjectId| {
        let lo = list.partition_point(|x| x.0 < o);
        let hi = list.partition_point(|x| x.0 <= o);
        list[lo..hi].iter().map(|&(_, p)| p).collect::<Vec<Position>>()
    };
    core_a.iter().all(|&(o, pa)| {
        let via = of(core_b, o);
        of(core, o)
            .into_iter()
            .filter(|&p| p < pa && (pa - p) as u64 <= step)
            .all(|p| via.iter().any(|&pb| p < pb && pb < pa))
    })
}

#[derive(Default)]
struct Counters {
    sequences: AtomicU64,
    dep_pruned: AtomicU64,
    late: AtomicU64,
}

struct Growth<'a> {
    clusters: &'a [Cluster],
    index: &'a ClusterIndex,
    params: MiningParams,
    opts: MaxGrowthOptions,
    pruned: Vec<AtomicBool>,
    entered: Vec<AtomicBool>,
    counters: Counters,
}

impl Growth<'_> {
    fn mark_prunable(&self, c: ClusterId) {
        if !self.pruned[c.index()].swap(true, Ordering::SeqCst) && self.entered[c.index()].load(Ordering::SeqCst) {
            self.counters.late.fetch_add(1, Ordering::Relaxed);
        }
    }

    /// Returns false when the root was skipped.
    fn run_root(&self, root: ClusterId, sink: &mut Vec<Pattern>) -> bool {
        if self.opts.root_prune && self.pruned[root.index()].load(Ordering::SeqCst) {
            return false;
        }
        self.entered[root.index()].store(true, Ordering::SeqCst);
        let cl = &self.clusters[root.index()];
        let mut seq = vec![root];
        self.grow(&mut seq, cl.members.clone(), sink);
        true
    }

    fn grow(&self, seq: &mut Vec<ClusterId>, core: Core, sink: &mut Vec<Pattern>) {
        self.counters.sequences.fetch_add(1, Ordering::Relaxed);
        let feasible = feasible_clusters(&core, self.index, &self.params);
        let extended: Vec<Core> = feasible
            .iter()
            .map(|&f| extend_core(&core, &self.clusters[f.index()], self.params.d))
            .collect();

        if self.opts.root_prune {
            for (&f, ext) in feasible.iter().zip(&extended) {
                if ext.len() == self.clusters[f.index()].members.len() {
                    self.mark_prunable(f);
                }
            }
        }

        for (i, &f) in feasible.iter().enumerate() {
            if self.opts.dep_prune
                && extended
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && core_depends(&core, &extended[i], other, self.params.d))
            {
                self.counters.dep_pruned.fetch_add(1, Ordering::Relaxed);
                continue;
            }
            seq.push(f);
            self.grow(seq, extended[i].clone(), sink);
            seq.pop();
        }

        if seq.len() >= self.params.k {
            sink.push(Pattern::new(
                core_objects(&core),
                seq.iter().map(|c| self.clusters[c.index()].camera).collect(),
            ));
        }
    }
}

/// Mines all maximal patterns with MaxGrowth.
pub fn mine_maxgrowth(data: &Dataset, params: &MiningParams, opts: MaxGrowthOptions) -> Result<MiningOutput> {
    params.check()?;
    let mut watch = Stopwatch::start();
    let clusters = build_clusters(data, params.m, params.eps);
    let index = ClusterIndex::new(&clusters, data.num_objects());
    let order = precedence_order(&clusters, data.num_objects());

    let growth = Growth {
        clusters: &clusters,
        index: &index,
        params: *params,
        opts,
        pruned: (0..clusters.len()).map(|_| AtomicBool::new(false)).collect(),
        entered: (0..clusters.len()).map(|_| AtomicBool::new(false)).collect(),
        counters: Counters::default(),
    };

    let (candidates, explored) = if opts.parallel {
        let per_root: Vec<(Vec<Pattern>, bool)> = order
            .order
            .par_iter()
            .map(|&root| {
                let mut sink = Vec::new();
                let ran = growth.run_root(root, &mut sink);
                (sink, ran)
            })
            .collect();
        let explored = per_root.iter().filter(|(_, ran)| *ran).count();
        (per_root.into_iter().flat_map(|(s, _)| s).collect::<Vec<_>>(), explored)
    } else {
        let mut sink = Vec::new();
        let mut explored = 0;
        for &root in &order.order {
            explored += growth.run_root(root, &mut sink) as usize;
        }
        (sink, explored)
    };
    let generation = watch.lap();

    let num_candidates = candidates.len() as u64;
    let kept = opts.keep_candidates.then(|| candidates.clone());
    let mut patterns = remove_non_maximal(candidates, params.d);
    if opts.dep_prune {
        let orphaned: Vec<bool> = patterns
            .par_iter()
            .map(|p| repair::has_valid_dominator(p, &clusters, &index, params))
            .collect();
        let before = patterns.len();
        let mut keep = orphaned.iter().map(|&o| !o);
        patterns.retain(|_| keep.next().unwrap_or(true));
        if patterns.len() < before {
            log::debug!(
                "{} survivor(s) dominated only by pruned sequences",
                before - patterns.len()
            );
        }
    }
    let dominance = watch.lap();

    for p in &mut patterns {
        annotate(p, data, params)?;
    }
    let annotation = watch.lap();

    let maximal = patterns.len() as u64;
    let stats = MiningStats {
        algorithm: "maxgrowth",
        stages: vec![
            StageStats::new(stats::CANDIDATE_GENERATION, generation, num_candidates, 0),
            StageStats::new(stats::VALIDNESS_VERIFICATION, std::time::Duration::ZERO, 0, 0),
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
        verification_work: 0,
        clusters: clusters.len() as u64,
        roots_explored: explored as u64,
        roots_pruned: (clusters.len() - explored) as u64,
        dependency_pruned: growth.counters.dep_pruned.load(Ordering::Relaxed),
        sequences_grown: growth.counters.sequences.load(Ordering::Relaxed),
        late_root_prunes: growth.counters.late.load(Ordering::Relaxed),
        precedence_components: order.num_components as u64,
        non_singleton_components: order.non_singleton_components() as u64,
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
    use crate::model::validate_pattern;
    use crate::testutil::{cam, dataset_strategy, four_objects, obj, three_objects};

    fn extend_by_definition(core: &[(ObjectId, Position)], next: &Cluster, d: usize) -> Core {
        next.members
            .iter()
            .copied()
            .filter(|&(o, q)| core.iter().any(|&(x, p)| x == o && q > p && (q - p) as usize <= d + 1))
            .collect()
    }

    fn depends_by_definition(a: &Cluster, b: &Cluster, s: &ClusterSequence, d: usize) -> bool {
        let ca = extend_by_definition(&s.core, a, d);
        let cb = extend_by_definition(&s.core, b, d);
        !ca.is_empty()
            && ca.iter().all(|&(o, pa)| {
                s.core
                    .iter()
                    .filter(|&&(x, p)| x == o && p < pa && pa - p <= d as Position + 1)
                    .all(|&(_, p)| cb.iter().any(|&(ob, pb)| ob == o && p < pb && pb < pa))
            })
    }

    fn cluster_at<'a>(clusters: &'a [Cluster], data: &Dataset, camera: &str, first: &str) -> &'a Cluster {
        clusters
            .iter()
            .find(|c| c.camera == cam(data, camera) && c.objects().next() == data.object_id(first))
            .unwrap()
    }

    fn keys(ps: &[Pattern]) -> BTreeSet<(Vec<ObjectId>, Vec<crate::model::CameraId>)> {
        ps.iter().map(|p| (p.objects.clone(), p.route.clone())).collect()
    }

    #[test]
    fn feasible_after_a_then_b() {
        let data = four_objects();
        let params = MiningParams::new(2, 3, 1, 6).unwrap();
        let clusters = build_clusters(&data, 2, 6);
        let index = ClusterIndex::new(&clusters, data.num_objects());
        let a = cluster_at(&clusters, &data, "A", "o1");
        let b = cluster_at(&clusters, &data, "B", "o1");
        let s = ClusterSequence::root(a).extended(b, 1);
        assert_eq!(s.core.len(), 3);
        let feasible: Vec<&Cluster> = feasible_clusters(&s.core, &index, &params)
            .iter()
            .map(|c| &clusters[c.index()])
            .collect();
        // D{o1,o2,o3} is reachable; D{o3,o4} keeps only o3 and E is too far for o1
        assert_eq!(feasible.len(), 1);
        assert_eq!(feasible[0].camera, cam(&data, "D"));
        assert_eq!(feasible[0].len(), 3);
        let d34 = cluster_at(&clusters, &data, "D", "o3");
        assert_eq!(extend_core(&s.core, d34, 1), vec![(obj(&data, "o3"), 4)]);
    }

    #[test]
    fn dependency_after_a() {
        let data = four_objects();
        let clusters = build_clusters(&data, 2, 6);
        let a = cluster_at(&clusters, &data, "A", "o1");
        let b = cluster_at(&clusters, &data, "B", "o1");
        let s = ClusterSequence::root(a);
        // with d=1 D{o1,o2,o3} is reachable from A by o1 and o2 only, both through B
        let d = cluster_at(&clusters, &data, "D", "o1");
        assert!(depends_on(d, b, &s, 1));
        assert!(!depends_on(b, d, &s, 1));
        assert!(!depends_on(b, b, &s, 1));
    }

    #[test]
    fn root_b_is_pruned_in_three_objects() {
        let data = three_objects();
        let params = MiningParams::new(2, 2, 1, 6).unwrap();
        let clusters = build_clusters(&data, 2, 6);
        let index = ClusterIndex::new(&clusters, data.num_objects());
        let growth = Growth {
            clusters: &clusters,
            index: &index,
            params,
            opts: MaxGrowthOptions::default(),
            pruned: (0..clusters.len()).map(|_| AtomicBool::new(false)).collect(),
            entered: (0..clusters.len()).map(|_| AtomicBool::new(false)).collect(),
            counters: Counters::default(),
        };
        let a = cluster_at(&clusters, &data, "A", "o2");
        let b = cluster_at(&clusters, &data, "B", "o2");
        assert!(growth.run_root(a.id, &mut Vec::new()));
        assert!(growth.pruned[b.id.index()].load(Ordering::SeqCst));
        assert!(!growth.run_root(b.id, &mut Vec::new()));
        assert_eq!(growth.counters.late.load(Ordering::Relaxed), 0);
    }

    fn small_params() -> impl Strategy<Value = MiningParams> {
        (1usize..4, 1usize..4, 0usize..3, 0i64..12).prop_map(|(m, k, d, eps)| MiningParams { m, k, d, eps })
    }

    proptest! {
        #[test]
        fn growth_steps_match_definitions(data in dataset_strategy(6, 3, 5), params in small_params()) {
            let clusters = build_clusters(&data, params.m, params.eps);
            let index = ClusterIndex::new(&clusters, data.num_objects());
            for root in &clusters {
                let s = ClusterSequence::root(root);
                let feasible = feasible_clusters(&s.core, &index, &params);
                let expected: Vec<ClusterId> = clusters
                    .iter()
                    .filter(|c| core_objects(&extend_by_definition(&s.core, c, params.d)).len() >= params.m)
                    .map(|c| c.id)
                    .collect();
                prop_assert_eq!(&feasible, &expected);
                for a in &clusters {
                    prop_assert_eq!(extend_core(&s.core, a, params.d), extend_by_definition(&s.core, a, params.d));
                    for b in &clusters {
                        prop_assert_eq!(depends_on(a, b, &s, params.d), depends_by_definition(a, b, &s, params.d));
                    }
                }
            }
        }

        #[test]
        fn order_respects_precedence(data in dataset_strategy(6, 3, 5), eps in 0i64..12) {
            let clusters = build_clusters(&data, 1, eps);
            let n = clusters.len();
            // reachability of the full relation: shared object at a later or equal position
            let mut reach = vec![vec![false; n]; n];
            for u in &clusters {
                for v in &clusters {
                    reach[u.id.index()][v.id.index()] = u
                        .members
                        .iter()
                        .any(|&(o, p)| v.positions_of(o).any(|q| p <= q));
                }
            }
            for k in 0..n {
                let via = reach[k].clone();
                for row in reach.iter_mut() {
                    if row[k] {
                        for (cell, &v) in row.iter_mut().zip(&via) {
                            *cell |= v;
                        }
                    }
                }
            }
            let order = precedence_order(&clusters, data.num_objects());
            let mut seen: Vec<ClusterId> = order.order.clone();
            seen.sort_unstable();
            prop_assert_eq!(seen, clusters.iter().map(|c| c.id).collect::<Vec<_>>());
            for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
                let mutual = reach[i][j] && reach[j][i];
                prop_assert_eq!(order.component[i] == order.component[j], i == j || mutual);
                if reach[i][j] && !reach[j][i] {
                    prop_assert!(order.rank[i] < order.rank[j]);
                }
            }
        }

        #[test]
        fn pruning_only_drops_dominated_candidates(data in dataset_strategy(6, 3, 5), params in small_params()) {
            let off = MaxGrowthOptions { root_prune: false, dep_prune: false, keep_candidates: true, ..Default::default() };
            let on = MaxGrowthOptions { keep_candidates: true, ..Default::default() };
            let full = mine_maxgrowth(&data, &params, off).unwrap();
            let pruned = mine_maxgrowth(&data, &params, on).unwrap();
            let all = full.candidates.unwrap();
            for p in &all {
                prop_assert!(validate_pattern(p, &data, &params).unwrap());
            }
            prop_assert!(keys(&pruned.candidates.unwrap()).is_subset(&keys(&all)));
            prop_assert_eq!(keys(&full.patterns), keys(&pruned.patterns));
            if pruned.stats.precedence_components == pruned.stats.clusters {
                prop_assert_eq!(pruned.stats.late_root_prunes, 0);
            }
        }
    }
}
