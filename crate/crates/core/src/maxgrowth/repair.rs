//! Exact maximality check for patterns that survive the final filter while
//! dependency pruning is on. Gap-bounded dominance is not transitive: a
//! pruned sequence can be the only dominator of an explored pattern, while
//! the explored sequence standing in for it (the same clusters with one
//! more inserted) no longer dominates that pattern.

use super::extend_core;
use crate::clustering::{Cluster, ClusterId, ClusterIndex};
use crate::model::{max_step, MiningParams, ObjectId, Pattern, Position};

/// Progress of embedding the target route into a growing route: cameras
/// matched so far and clusters appended since the last match (before the
/// first match: clusters of prefix).
type State = (usize, usize);

fn contains_all(core: &[(ObjectId, Position)], objects: &[ObjectId]) -> bool {
    let mut it = core.iter().map(|&(o, _)| o);
    objects.iter().all(|&o| it.any(|x| x == o))
}

fn distinct(core: &[(ObjectId, Position)]) -> usize {
    crate::clustering::distinct_objects(core)
}

struct Search<'a> {
    target: &'a Pattern,
    clusters: &'a [Cluster],
    index: &'a ClusterIndex,
    d: usize,
}

impl Search<'_> {
    /// States after appending a cluster at `camera`. A strict dominator can
    /// be trimmed to at most one cluster before and after the matched
    /// cameras, and never needs more than `d` between two of them.
    fn advance(&self, states: &[State], camera: crate::model::CameraId) -> Vec<State> {
        let route = &self.target.route;
        let n = route.len();
        let mut out = Vec::new();
        for &(j, g) in states {
            if j < n && route[j] == camera && (j == 0 || g < max_step(self.d)) {
                out.push((j + 1, 0));
            }
            let limit = if j == 0 || j == n { 1 } else { self.d };
            if g < limit {
                out.push((j, g + 1));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn grow(&self, len: usize, core: &[(ObjectId, Position)], states: &[State]) -> bool {
        let n = self.target.route.len();
        if states.iter().any(|&(j, _)| j == n) && (len > n || distinct(core) > self.target.objects.len()) {
            return true;
        }
        let step = max_step(self.d);
        let first = self.target.objects[0];
        let mut next: Vec<ClusterId> = core
            .iter()
            .filter(|&&(o, _)| o == first)
            .flat_map(|&(_, p)| {
                let up_to = (p as usize).saturating_add(step).min(Position::MAX as usize) as Position;
                self.index.in_range(first, p, up_to).iter().map(|&(_, c)| c)
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        next.into_iter().any(|c| {
            let cl = &self.clusters[c.index()];
            let states = self.advance(states, cl.camera);
            if states.is_empty() {
                return false;
            }
            let ext = extend_core(core, cl, self.d);
            contains_all(&ext, &self.target.objects) && self.grow(len + 1, &ext, &states)
        })
    }
}

/// Some valid pattern other than `target` dominates it.
pub(crate) fn has_valid_dominator(
    target: &Pattern,
    clusters: &[Cluster],
    index: &ClusterIndex,
    params: &MiningParams,
) -> bool {
    let Some(&first) = target.objects.first() else {
        return false;
    };
    let search = Search {
        target,
        clusters,
        index,
        d: params.d,
    };
    let mut roots: Vec<ClusterId> = index.of_object(first).iter().map(|&(_, c)| c).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.into_iter().any(|c| {
        let cl = &clusters[c.index()];
        let states = search.advance(&[(0, 0)], cl.camera);
        !states.is_empty() && contains_all(&cl.members, &target.objects) && search.grow(1, &cl.members, &states)
    })
}
