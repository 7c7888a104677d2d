//! Per-camera temporal grouping: maximal eps-close clusters for MaxGrowth and
//! disjoint proximity partitions for the filter stage of FRB.

use std::collections::BTreeMap;

use log::warn;
use rayon::prelude::*;

use crate::model::{CameraId, Dataset, Interval, ObjectId, Position, Timestamp};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterId(pub u32);

impl ClusterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A maximal eps-close run of sightings at one camera covering at least `m`
/// objects. An object seen more than once in the run keeps every sighting;
/// any one of them is eps-close to every other member's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub id: ClusterId,
    pub camera: CameraId,
    /// Sorted by (object, position).
    pub members: Vec<(ObjectId, Position)>,
    /// `[min entrance, max entrance]` of the members.
    pub window: Interval,
}

impl Cluster {
    /// Distinct member objects in ascending order.
    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|&(i, &(o, _))| i == 0 || self.members[i - 1].0 != o)
            .map(|(_, &(o, _))| o)
    }

    /// Positions at which `o` is seen in this cluster.
    pub fn positions_of(&self, o: ObjectId) -> impl Iterator<Item = Position> + '_ {
        let lo = self.members.partition_point(|&(x, _)| x < o);
        self.members[lo..]
            .iter()
            .take_while(move |&&(x, _)| x == o)
            .map(|&(_, p)| p)
    }

    /// Number of distinct objects.
    pub fn len(&self) -> usize {
        distinct_objects(&self.members)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Distinct objects in a list of (object, position) pairs sorted by object.
pub(crate) fn distinct_objects(members: &[(ObjectId, Position)]) -> usize {
    members
        .iter()
        .enumerate()
        .filter(|&(i, &(o, _))| i == 0 || members[i - 1].0 != o)
        .count()
}

/// One visit seen from the camera's side.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Sighting {
    pub enter: Timestamp,
    pub object: ObjectId,
    pub pos: Position,
}

/// Sightings of a maximal window, sorted by (object, position).
pub(crate) struct Window {
    pub members: Vec<(ObjectId, Position)>,
    pub span: Interval,
}

/// Every maximal run of `sorted` whose entrance spread is at most `eps` and
/// which holds at least `min_objects` distinct objects.
pub(crate) fn maximal_windows(sorted: &[Sighting], eps: Timestamp, min_objects: usize) -> Vec<Window> {
    let mut out = Vec::new();
    let n = sorted.len();
    let mut end = 0usize;
    let mut prev_end: Option<usize> = None;
    for start in 0..n {
        if end < start {
            end = start;
        }
        while end + 1 < n && sorted[end + 1].enter - sorted[start].enter <= eps {
            end += 1;
        }
        // left-extendable windows have the same right end as their predecessor
        if prev_end == Some(end) {
            continue;
        }
        prev_end = Some(end);

        let mut members: Vec<(ObjectId, Position)> = sorted[start..=end].iter().map(|s| (s.object, s.pos)).collect();
        members.sort_unstable();
        if distinct_objects(&members) < min_objects.max(1) {
            continue;
        }
        out.push(Window {
            members,
            span: Interval::new(sorted[start].enter, sorted[end].enter),
        });
    }
    out
}

/// Entrance-sorted sightings per camera.
pub(crate) fn sightings_by_camera(data: &Dataset) -> Vec<Vec<Sighting>> {
    let mut per_camera: Vec<Vec<Sighting>> = vec![Vec::new(); data.num_cameras()];
    for path in data.paths() {
        for (i, v) in path.visits().iter().enumerate() {
            per_camera[v.camera.index()].push(Sighting {
                enter: v.enter,
                object: path.object(),
                pos: i as Position + 1,
            });
        }
    }
    for s in &mut per_camera {
        s.sort_unstable();
    }
    per_camera
}

/// All maximal eps-close groups of at least `m` objects, one cluster each,
/// numbered by (camera, window start).
pub fn build_clusters(data: &Dataset, m: usize, eps: Timestamp) -> Vec<Cluster> {
    let per_camera = sightings_by_camera(data);
    let grouped: Vec<(CameraId, Vec<Window>)> = per_camera
        .par_iter()
        .enumerate()
        .map(|(c, sightings)| (CameraId(c as u32), maximal_windows(sightings, eps, m)))
        .collect();

    let mut clusters = Vec::new();
    let mut revisits = 0usize;
    for (camera, windows) in grouped {
        for w in windows {
            revisits += (distinct_objects(&w.members) < w.members.len()) as usize;
            clusters.push(Cluster {
                id: ClusterId(clusters.len() as u32),
                camera,
                members: w.members,
                window: w.span,
            });
        }
    }
    if revisits > 0 {
        warn!("{revisits} cluster(s) hold an object seen more than once within eps; growth may be slow");
    }
    clusters
}

/// Disjoint proximity partitions of each camera's visits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    /// Per camera, partitions in time order; each lists its visits.
    parts: Vec<Vec<Vec<(ObjectId, Position)>>>,
    /// Per object, the partition index of each visit (by position - 1).
    of_visit: Vec<Vec<u32>>,
}

impl PartitionTable {
    pub fn partitions(&self, c: CameraId) -> &[Vec<(ObjectId, Position)>] {
        self.parts.get(c.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Distinct objects of partition `i` at camera `c`, sorted.
    pub fn objects(&self, c: CameraId, i: usize) -> Vec<ObjectId> {
        let mut v: Vec<ObjectId> = self.parts[c.index()][i].iter().map(|&(o, _)| o).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Partition index of the visit of `o` at `pos`.
    pub fn partition_of(&self, o: ObjectId, pos: Position) -> Option<u32> {
        self.of_visit
            .get(o.index())
            .and_then(|v| v.get((pos as usize).checked_sub(1)?))
            .copied()
    }

    pub fn num_cameras(&self) -> usize {
        self.parts.len()
    }
}

/// Splits each camera's entrance-sorted visits wherever consecutive
/// entrances are more than `eps` apart.
pub fn build_partitions(data: &Dataset, eps: Timestamp) -> PartitionTable {
    let per_camera = sightings_by_camera(data);
    let mut of_visit: Vec<Vec<u32>> = data.paths().iter().map(|p| vec![0; p.len()]).collect();
    let mut parts = Vec::with_capacity(per_camera.len());
    for sightings in &per_camera {
        let mut cam_parts: Vec<Vec<(ObjectId, Position)>> = Vec::new();
        let mut prev: Option<Timestamp> = None;
        for s in sightings {
            if prev.is_none_or(|p| s.enter - p > eps) {
                cam_parts.push(Vec::new());
            }
            prev = Some(s.enter);
            let idx = cam_parts.len() - 1;
            cam_parts[idx].push((s.object, s.pos));
            of_visit[s.object.index()][s.pos as usize - 1] = idx as u32;
        }
        parts.push(cam_parts);
    }
    PartitionTable { parts, of_visit }
}

/// Per object, its `camera -> ascending positions` map.
pub fn position_lists(data: &Dataset) -> Vec<BTreeMap<CameraId, Vec<Position>>> {
    data.position_lists().to_vec()
}

/// Per object, the clusters it belongs to sorted by (position, cluster id).
#[derive(Clone, Debug)]
pub struct ClusterIndex {
    by_object: Vec<Vec<(Position, ClusterId)>>,
}

impl ClusterIndex {
    pub fn new(clusters: &[Cluster], num_objects: usize) -> Self {
        let mut by_object: Vec<Vec<(Position, ClusterId)>> = vec![Vec::new(); num_objects];
        for cl in clusters {
            for &(o, p) in &cl.members {
                by_object[o.index()].push((p, cl.id));
            }
        }
        for v in &mut by_object {
            v.sort_unstable();
        }
        ClusterIndex { by_object }
    }

    pub fn of_object(&self, o: ObjectId) -> &[(Position, ClusterId)] {
        &self.by_object[o.index()]
    }

    /// Memberships of `o` at positions in `(after, up_to]`.
    pub fn in_range(&self, o: ObjectId, after: Position, up_to: Position) -> &[(Position, ClusterId)] {
        let list = &self.by_object[o.index()];
        let lo = list.partition_point(|&(p, _)| p <= after);
        let hi = list.partition_point(|&(p, _)| p <= up_to);
        &list[lo..hi.max(lo)]
    }
}
