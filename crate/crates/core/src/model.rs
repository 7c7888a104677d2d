//! Travel paths, mining parameters, patterns and the predicates every miner
//! and every oracle is built on.
//!
//! Positions inside a travel path are 1-based throughout the crate: position
//! `p` of an object is its `p`-th camera visit.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Timestamps are integer ticks; the dataset's [`TimeUnit`] says how long a
/// tick is.
pub type Timestamp = i64;

/// 1-based index of a visit inside its travel path.
pub type Position = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectId(pub u32);

/// Camera ids are assigned in lexicographic order of camera names.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CameraId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl CameraId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    #[default]
    Seconds,
    Millis,
}

impl TimeUnit {
    pub fn ticks_per_second(self) -> i64 {
        match self {
            TimeUnit::Seconds => 1,
            TimeUnit::Millis => 1000,
        }
    }

    pub fn from_seconds(self, seconds: i64) -> Timestamp {
        seconds * self.ticks_per_second()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Seconds => "s",
            TimeUnit::Millis => "ms",
        }
    }
}

/// A closed time interval.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub begin: Timestamp,
    pub end: Timestamp,
}

impl Interval {
    pub fn new(begin: Timestamp, end: Timestamp) -> Self {
        Interval { begin, end }
    }

    pub fn len(&self) -> Timestamp {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.begin
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.begin, self.end)
    }
}

/// One camera sighting: entrance `enter`, exit `exit`, `enter < exit`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Visit {
    pub camera: CameraId,
    pub enter: Timestamp,
    pub exit: Timestamp,
}

/// An object's camera visits ordered by strictly increasing entrance time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TravelPath {
    object: ObjectId,
    visits: Vec<Visit>,
}

impl TravelPath {
    /// Checks the ordering invariants.
    pub fn new(object: ObjectId, visits: Vec<Visit>) -> Result<Self> {
        if visits.is_empty() {
            return Err(Error::input(format!("object #{} has no visits", object.0)));
        }
        for (i, v) in visits.iter().enumerate() {
            if v.enter >= v.exit {
                return Err(Error::input(format!(
                    "object #{} visit {}: entrance {} is not before exit {}",
                    object.0,
                    i + 1,
                    v.enter,
                    v.exit
                )));
            }
        }
        for (i, w) in visits.windows(2).enumerate() {
            if w[0].enter >= w[1].enter {
                return Err(Error::input(format!(
                    "object #{} visit {}: entrance {} does not follow {}",
                    object.0,
                    i + 2,
                    w[1].enter,
                    w[0].enter
                )));
            }
        }
        Ok(TravelPath { object, visits })
    }

    pub fn object(&self) -> ObjectId {
        self.object
    }

    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    /// Visit at a 1-based position.
    pub fn visit(&self, pos: Position) -> Option<&Visit> {
        (pos as usize).checked_sub(1).and_then(|i| self.visits.get(i))
    }

    /// `[first entrance, last exit]`.
    pub fn interval(&self) -> Interval {
        Interval::new(self.visits[0].enter, self.visits[self.visits.len() - 1].exit)
    }

    pub fn cameras(&self) -> Vec<CameraId> {
        self.visits.iter().map(|v| v.camera).collect()
    }
}

/// The four mining thresholds. `eps` is in dataset ticks.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MiningParams {
    pub m: usize,
    pub k: usize,
    pub d: usize,
    pub eps: Timestamp,
}

impl MiningParams {
    pub fn new(m: usize, k: usize, d: usize, eps: Timestamp) -> Result<Self> {
        let p = MiningParams { m, k, d, eps };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::input("m must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        if self.eps < 0 {
            return Err(Error::input("eps must be non-negative"));
        }
        Ok(())
    }
}

/// A relaxed co-movement pattern `<objects, route>`.
///
/// `objects` is kept sorted and duplicate-free. `span` and `camera_windows`
/// are filled in by [`annotate`] from a canonical witness; dominance and
/// equality of patterns only look at `objects` and `route`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub objects: Vec<ObjectId>,
    pub route: Vec<CameraId>,
    pub span: Option<Interval>,
    pub camera_windows: Option<Vec<Interval>>,
}

impl Pattern {
    pub fn new(mut objects: Vec<ObjectId>, route: Vec<CameraId>) -> Self {
        objects.sort_unstable();
        objects.dedup();
        Pattern {
            objects,
            route,
            span: None,
            camera_windows: None,
        }
    }

    pub fn key(&self) -> (&[ObjectId], &[CameraId]) {
        (&self.objects, &self.route)
    }

    /// Total order used for every canonical listing: longer routes first,
    /// then larger groups, then lexicographic on ids.
    pub fn canonical_cmp(&self, other: &Pattern) -> std::cmp::Ordering {
        other
            .route
            .len()
            .cmp(&self.route.len())
            .then_with(|| other.objects.len().cmp(&self.objects.len()))
            .then_with(|| self.route.cmp(&other.route))
            .then_with(|| self.objects.cmp(&other.objects))
    }
}

/// Sort and drop `<objects, route>` duplicates, keeping the first occurrence.
pub fn canonicalize(patterns: &mut Vec<Pattern>) {
    patterns.sort_by(|a, b| a.canonical_cmp(b));
    patterns.dedup_by(|a, b| a.key() == b.key());
}

/// One travel path in name form, as read from or written to disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPath {
    pub object: String,
    pub visits: Vec<RawVisit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVisit {
    pub camera: String,
    pub enter: Timestamp,
    pub exit: Timestamp,
}

impl RawVisit {
    pub fn new(camera: impl Into<String>, enter: Timestamp, exit: Timestamp) -> Self {
        RawVisit {
            camera: camera.into(),
            enter,
            exit,
        }
    }
}

/// The full set of travel paths plus the `(object, camera) -> positions`
/// lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    unit: TimeUnit,
    objects: Vec<String>,
    cameras: Vec<String>,
    paths: Vec<TravelPath>,
    positions: Vec<BTreeMap<CameraId, Vec<Position>>>,
}

impl Dataset {
    /// Object ids follow input order; camera ids follow sorted camera names.
    pub fn from_raw(unit: TimeUnit, raw: &[RawPath]) -> Result<Self> {
        let mut names: Vec<&str> = raw
            .iter()
            .flat_map(|p| p.visits.iter().map(|v| v.camera.as_str()))
            .collect();
        names.sort_unstable();
        names.dedup();
        let cameras: Vec<String> = names.iter().map(|s| s.to_string()).collect();

        let mut seen = std::collections::HashSet::new();
        let mut objects = Vec::with_capacity(raw.len());
        let mut paths = Vec::with_capacity(raw.len());
        for (i, rp) in raw.iter().enumerate() {
            if !seen.insert(rp.object.as_str()) {
                return Err(Error::DuplicateObject(rp.object.clone()));
            }
            let id = ObjectId(i as u32);
            let visits = rp
                .visits
                .iter()
                .map(|v| Visit {
                    camera: CameraId(names.binary_search(&v.camera.as_str()).unwrap() as u32),
                    enter: v.enter,
                    exit: v.exit,
                })
                .collect();
            let path =
                TravelPath::new(id, visits).map_err(|e| Error::input(format!("object {:?}: {}", rp.object, e)))?;
            objects.push(rp.object.clone());
            paths.push(path);
        }
        let positions = paths.iter().map(build_positions).collect();
        Ok(Dataset {
            unit,
            objects,
            cameras,
            paths,
            positions,
        })
    }

    pub fn empty(unit: TimeUnit) -> Self {
        Dataset {
            unit,
            objects: Vec::new(),
            cameras: Vec::new(),
            paths: Vec::new(),
            positions: Vec::new(),
        }
    }

    pub fn to_raw(&self) -> Vec<RawPath> {
        self.paths
            .iter()
            .map(|p| RawPath {
                object: self.objects[p.object.index()].clone(),
                visits: p
                    .visits
                    .iter()
                    .map(|v| RawVisit::new(self.cameras[v.camera.index()].clone(), v.enter, v.exit))
                    .collect(),
            })
            .collect()
    }

    pub fn unit(&self) -> TimeUnit {
        self.unit
    }

    pub fn paths(&self) -> &[TravelPath] {
        &self.paths
    }

    pub fn path(&self, o: ObjectId) -> Option<&TravelPath> {
        self.paths.get(o.index())
    }

    pub fn num_objects(&self) -> usize {
        self.paths.len()
    }

    pub fn num_cameras(&self) -> usize {
        self.cameras.len()
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.index()]
    }

    pub fn camera_name(&self, c: CameraId) -> &str {
        &self.cameras[c.index()]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|n| n == name).map(|i| ObjectId(i as u32))
    }

    pub fn camera_id(&self, name: &str) -> Option<CameraId> {
        self.cameras
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| CameraId(i as u32))
    }

    /// Positions (1-based, ascending) at which `o` visits `c`.
    pub fn positions(&self, o: ObjectId, c: CameraId) -> &[Position] {
        self.positions
            .get(o.index())
            .and_then(|m| m.get(&c))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Per-object `camera -> positions` maps.
    pub fn position_lists(&self) -> &[BTreeMap<CameraId, Vec<Position>>] {
        &self.positions
    }

    /// Rebuilds the position lookup from the paths and compares.
    pub fn index_consistent(&self) -> bool {
        self.paths.len() == self.positions.len()
            && self
                .paths
                .iter()
                .zip(&self.positions)
                .all(|(p, idx)| build_positions(p) == *idx)
    }

    /// Longest travel path, in visits.
    pub fn max_path_len(&self) -> usize {
        self.paths.iter().map(TravelPath::len).max().unwrap_or(0)
    }

    pub fn route_names(&self, route: &[CameraId]) -> Vec<&str> {
        route.iter().map(|&c| self.camera_name(c)).collect()
    }

    pub fn object_names(&self, objects: &[ObjectId]) -> Vec<&str> {
        objects.iter().map(|&o| self.object_name(o)).collect()
    }

    pub(crate) fn check_object(&self, o: ObjectId) -> Result<&TravelPath> {
        self.path(o).ok_or_else(|| Error::UnknownObject(format!("#{}", o.0)))
    }
}

fn build_positions(path: &TravelPath) -> BTreeMap<CameraId, Vec<Position>> {
    let mut map: BTreeMap<CameraId, Vec<Position>> = BTreeMap::new();
    for (i, v) in path.visits.iter().enumerate() {
        map.entry(v.camera).or_default().push(i as Position + 1);
    }
    map
}

/// True iff the entrances are pairwise within `eps`.
pub fn is_eps_close(entrances: &[Timestamp], eps: Timestamp) -> Result<bool> {
    let (Some(&lo), Some(&hi)) = (entrances.iter().min(), entrances.iter().max()) else {
        return Err(Error::input("is_eps_close needs at least one entrance"));
    };
    Ok(hi - lo <= eps)
}

/// Largest index step allowed between consecutive mapped positions.
pub(crate) fn max_step(d: usize) -> usize {
    d.saturating_add(1)
}

/// True iff `inner` maps into `outer` through a strictly increasing,
/// camera-preserving injection whose consecutive images differ by at most
/// `d + 1`. Pass `usize::MAX` for an unbounded gap.
pub fn route_embeds(inner: &[CameraId], outer: &[CameraId], d: usize) -> bool {
    if inner.is_empty() {
        return true;
    }
    if inner.len() > outer.len() {
        return false;
    }
    let step = max_step(d);
    let mut reach: Vec<bool> = outer.iter().map(|&c| c == inner[0]).collect();
    let mut next = vec![false; outer.len()];
    for &cam in &inner[1..] {
        // `window` counts reachable positions in [q - step, q - 1]
        let mut window = 0usize;
        for q in 0..outer.len() {
            if q >= 1 && reach[q - 1] {
                window += 1;
            }
            if q > step && reach[q - 1 - step] {
                window -= 1;
            }
            next[q] = outer[q] == cam && window > 0;
        }
        std::mem::swap(&mut reach, &mut next);
        if !reach.iter().any(|&r| r) {
            return false;
        }
    }
    reach.iter().any(|&r| r)
}

/// `inner` is a d-subpath of `outer`: time containment plus a gap-bounded
/// camera embedding.
pub fn is_d_subpath(inner: &TravelPath, outer: &TravelPath, d: usize) -> bool {
    outer.interval().contains(&inner.interval()) && route_embeds(&inner.cameras(), &outer.cameras(), d)
}

/// Every gap-bounded embedding of `route` into `path`, as 1-based position
/// vectors in lexicographic order.
pub fn embeddings(route: &[CameraId], path: &[CameraId], d: usize) -> Vec<Vec<Position>> {
    let n = route.len();
    let len = path.len();
    if n == 0 || n > len {
        return Vec::new();
    }
    let step = max_step(d);
    // alive[t][q]: route[t..] can be completed with route[t] at index q
    let mut alive = vec![vec![false; len]; n];
    for q in 0..len {
        alive[n - 1][q] = path[q] == route[n - 1];
    }
    for t in (0..n - 1).rev() {
        for q in 0..len {
            if path[q] != route[t] {
                continue;
            }
            let hi = q.saturating_add(step).min(len - 1);
            alive[t][q] = (q + 1..=hi).any(|r| alive[t + 1][r]);
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    fn walk(
        t: usize,
        lo: usize,
        hi: usize,
        alive: &[Vec<bool>],
        step: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<Position>>,
    ) {
        for q in lo..=hi {
            if !alive[t][q] {
                continue;
            }
            stack.push(q);
            if t + 1 == alive.len() {
                out.push(stack.iter().map(|&i| i as Position + 1).collect());
            } else {
                let len = alive[t].len();
                walk(
                    t + 1,
                    q + 1,
                    q.saturating_add(step).min(len - 1),
                    alive,
                    step,
                    stack,
                    out,
                );
            }
            stack.pop();
        }
    }
    walk(0, 0, len - 1, &alive, step, &mut stack, &mut out);
    out
}

/// Per-object positions witnessing a pattern; row `i` belongs to
/// `pattern.objects[i]` and has one position per route camera.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness(pub Vec<Vec<Position>>);

/// The lexicographically first witness under which every object embeds the
/// route and the group is eps-close at every route camera. Exhaustive over
/// the gap-bounded embeddings of each object.
pub fn find_witness(pattern: &Pattern, data: &Dataset, d: usize, eps: Timestamp) -> Result<Option<Witness>> {
    let mut options = Vec::with_capacity(pattern.objects.len());
    for &o in &pattern.objects {
        let path = data.check_object(o)?;
        let embs = embeddings(&pattern.route, &path.cameras(), d);
        if embs.is_empty() {
            return Ok(None);
        }
        let entrances: Vec<Vec<Timestamp>> = embs
            .iter()
            .map(|e| e.iter().map(|&p| path.visit(p).unwrap().enter).collect())
            .collect();
        options.push((embs, entrances));
    }
    if pattern.route.is_empty() || options.is_empty() {
        return Ok(None);
    }

    let n = pattern.route.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(options.len());
    let mut bounds: Vec<Vec<(Timestamp, Timestamp)>> = vec![vec![(Timestamp::MAX, Timestamp::MIN); n]];

    // iterative backtracking over objects
    let mut next_choice = vec![0usize; options.len()];
    let mut depth = 0usize;
    loop {
        if depth == options.len() {
            let rows = chosen
                .iter()
                .zip(&options)
                .map(|(&c, (embs, _))| embs[c].clone())
                .collect();
            return Ok(Some(Witness(rows)));
        }
        let (_, entrances) = &options[depth];
        let mut advanced = false;
        while next_choice[depth] < entrances.len() {
            let c = next_choice[depth];
            next_choice[depth] += 1;
            let cur = bounds.last().unwrap();
            let merged: Vec<(Timestamp, Timestamp)> = cur
                .iter()
                .zip(&entrances[c])
                .map(|(&(lo, hi), &t)| (lo.min(t), hi.max(t)))
                .collect();
            if merged.iter().all(|&(lo, hi)| hi - lo <= eps) {
                chosen.push(c);
                bounds.push(merged);
                depth += 1;
                advanced = true;
                break;
            }
        }
        if !advanced {
            if depth == 0 {
                return Ok(None);
            }
            next_choice[depth] = 0;
            depth -= 1;
            chosen.pop();
            bounds.pop();
        }
    }
}

/// Ground-truth check of a pattern against the dataset.
pub fn validate_pattern(pattern: &Pattern, data: &Dataset, params: &MiningParams) -> Result<bool> {
    for &o in &pattern.objects {
        data.check_object(o)?;
    }
    if pattern.objects.len() < params.m || pattern.route.len() < params.k {
        return Ok(false);
    }
    Ok(find_witness(pattern, data, params.d, params.eps)?.is_some())
}

fn check_witness<'a>(
    pattern: &Pattern,
    data: &'a Dataset,
    witness: &'a Witness,
) -> Result<Vec<(&'a TravelPath, &'a [Position])>> {
    if witness.0.len() != pattern.objects.len() {
        return Err(Error::input("witness has the wrong number of rows"));
    }
    let mut rows = Vec::with_capacity(witness.0.len());
    for (&o, row) in pattern.objects.iter().zip(&witness.0) {
        let path = data.check_object(o)?;
        if row.len() != pattern.route.len() {
            return Err(Error::input(format!("witness row for #{} has the wrong length", o.0)));
        }
        for (t, (&p, &cam)) in row.iter().zip(&pattern.route).enumerate() {
            match path.visit(p) {
                Some(v) if v.camera == cam => {}
                _ => {
                    return Err(Error::input(format!(
                        "witness position {} of #{} does not visit route camera {}",
                        p,
                        o.0,
                        t + 1
                    )))
                }
            }
        }
        if row.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(format!("witness row for #{} is not increasing", o.0)));
        }
        rows.push((path, row.as_slice()));
    }
    Ok(rows)
}

/// `[min entrance at the first route camera, max exit at the last]` under a
/// witness.
pub fn pattern_time_span(pattern: &Pattern, data: &Dataset, witness: &Witness) -> Result<Interval> {
    let rows = check_witness(pattern, data, witness)?;
    if rows.is_empty() {
        return Err(Error::input("pattern has no objects"));
    }
    let begin = rows
        .iter()
        .map(|(path, row)| path.visit(row[0]).unwrap().enter)
        .min()
        .unwrap();
    let end = rows
        .iter()
        .map(|(path, row)| path.visit(row[row.len() - 1]).unwrap().exit)
        .max()
        .unwrap();
    Ok(Interval::new(begin, end))
}

/// Per route camera, `[min entrance, max entrance]` over the group.
pub fn camera_windows(pattern: &Pattern, data: &Dataset, witness: &Witness) -> Result<Vec<Interval>> {
    let rows = check_witness(pattern, data, witness)?;
    if rows.is_empty() {
        return Err(Error::input("pattern has no objects"));
    }
    Ok((0..pattern.route.len())
        .map(|t| {
            let mut it = rows.iter().map(|(path, row)| path.visit(row[t]).unwrap().enter);
            let first = it.next().unwrap();
            let (lo, hi) = it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)));
            Interval::new(lo, hi)
        })
        .collect())
}

/// Fills `span` and `camera_windows` from the canonical (lexicographically
/// first) witness, so the annotation depends only on `<objects, route>`.
pub fn annotate(pattern: &mut Pattern, data: &Dataset, params: &MiningParams) -> Result<()> {
    let witness = find_witness(pattern, data, params.d, params.eps)?
        .ok_or_else(|| Error::input(format!("pattern over {} objects has no witness", pattern.objects.len())))?;
    pattern.span = Some(pattern_time_span(pattern, data, &witness)?);
    pattern.camera_windows = Some(camera_windows(pattern, data, &witness)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::testutil::{cam, dataset_strategy, four_objects, obj, pat};

    fn cams(ids: &[u32]) -> Vec<CameraId> {
        ids.iter().map(|&c| CameraId(c)).collect()
    }

    /// All strictly increasing index tuples of length `n` into `0..len`.
    fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, from: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in from..len {
                cur.push(i);
                rec(n, i + 1, len, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 0, len, &mut Vec::new(), &mut out);
        out
    }

    fn embeds_by_enumeration(inner: &[CameraId], outer: &[CameraId], d: usize) -> Vec<Vec<Position>> {
        tuples(inner.len(), outer.len())
            .into_iter()
            .filter(|t| t.iter().zip(inner).all(|(&i, &c)| outer[i] == c))
            .filter(|t| t.windows(2).all(|w| w[1] - w[0] <= d.saturating_add(1)))
            .map(|t| t.iter().map(|&i| i as Position + 1).collect())
            .collect()
    }

    /// Definition check by brute force over every per-object embedding choice.
    fn valid_by_enumeration(p: &Pattern, data: &Dataset, params: &MiningParams) -> bool {
        if p.objects.len() < params.m || p.route.len() < params.k {
            return false;
        }
        let choices: Vec<Vec<Vec<Timestamp>>> = p
            .objects
            .iter()
            .map(|&o| {
                let path = data.path(o).unwrap();
                embeds_by_enumeration(&p.route, &path.cameras(), params.d)
                    .iter()
                    .map(|e| e.iter().map(|&q| path.visit(q).unwrap().enter).collect())
                    .collect()
            })
            .collect();
        fn search(i: usize, choices: &[Vec<Vec<Timestamp>>], picked: &mut Vec<usize>, eps: Timestamp) -> bool {
            if i == choices.len() {
                let n = choices[0][0].len();
                return (0..n).all(|t| {
                    let col: Vec<Timestamp> = picked.iter().enumerate().map(|(o, &c)| choices[o][c][t]).collect();
                    col.iter().max().unwrap() - col.iter().min().unwrap() <= eps
                });
            }
            (0..choices[i].len()).any(|c| {
                picked.push(c);
                let ok = search(i + 1, choices, picked, eps);
                picked.pop();
                ok
            })
        }
        choices.iter().all(|c| !c.is_empty()) && search(0, &choices, &mut Vec::new(), params.eps)
    }

    #[test]
    fn eps_closeness() {
        assert!(is_eps_close(&[15, 12, 14], 6).unwrap());
        assert!(!is_eps_close(&[15, 32], 6).unwrap());
        assert!(is_eps_close(&[7], 0).unwrap());
        assert!(is_eps_close(&[], 3).is_err());
    }

    #[test]
    fn route_embedding_examples() {
        let data = four_objects();
        let (a, b, d) = (cam(&data, "A"), cam(&data, "B"), cam(&data, "D"));
        assert!(route_embeds(&[a, d], &[a, b, d], 1));
        assert!(!route_embeds(&[a, d], &[a, b, d], 0));
        assert!(route_embeds(&[a, d], &[a, b, d], usize::MAX));
        assert!(route_embeds(&[], &[a], 0));
        assert!(!route_embeds(&[a, b, d, a], &[a, b, d], 5));
    }

    #[test]
    fn subpath_needs_time_containment() {
        let data = four_objects();
        let p = |n| data.path(obj(&data, n)).unwrap();
        for n in ["o1", "o2", "o3", "o4"] {
            assert!(is_d_subpath(p(n), p(n), 0));
        }
        assert!(is_d_subpath(p("o1"), p("o3"), 1));
        assert!(!is_d_subpath(p("o1"), p("o3"), 0));
        // same cameras, but o3 is seen before o4 starts
        assert!(route_embeds(&p("o3").cameras(), &p("o4").cameras(), 0));
        assert!(!is_d_subpath(p("o3"), p("o4"), 0));
    }

    #[test]
    fn four_object_validity() {
        let data = four_objects();
        let params = MiningParams::new(2, 3, 1, 6).unwrap();
        assert!(validate_pattern(&pat(&data, &["o1", "o2", "o3"], "ABD"), &data, &params).unwrap());
        assert!(validate_pattern(&pat(&data, &["o2", "o3"], "ABDE"), &data, &params).unwrap());
        // o4 reaches B long after the others
        assert!(!validate_pattern(
            &pat(&data, &["o1", "o2", "o3", "o4"], "B"),
            &data,
            &MiningParams { k: 1, ..params }
        )
        .unwrap());
        assert!(!validate_pattern(&pat(&data, &["o1", "o2"], "AB"), &data, &params).unwrap());
        let ghost = Pattern::new(vec![ObjectId(9)], cams(&[0]));
        assert!(validate_pattern(&ghost, &data, &params).is_err());
    }

    #[test]
    fn span_and_windows_of_the_four_object_data() {
        let data = four_objects();
        let params = MiningParams::new(2, 3, 1, 6).unwrap();
        let p = pat(&data, &["o1"], "ABD");
        let w = find_witness(&p, &data, 1, 6).unwrap().unwrap();
        assert_eq!(w.0, vec![vec![1, 2, 3]]);
        assert_eq!(pattern_time_span(&p, &data, &w).unwrap(), Interval::new(1, 39));

        let mut q = pat(&data, &["o1", "o2", "o3"], "ABD");
        annotate(&mut q, &data, &params).unwrap();
        assert_eq!(q.span, Some(Interval::new(1, 40)));
        assert_eq!(
            q.camera_windows,
            Some(vec![Interval::new(1, 3), Interval::new(12, 15), Interval::new(33, 36)])
        );
        let bad = Witness(vec![vec![1, 3, 2]]);
        assert!(pattern_time_span(&p, &data, &bad).is_err());
    }

    #[test]
    fn dataset_index_and_round_trip() {
        let data = four_objects();
        assert!(data.index_consistent());
        assert_eq!(data.max_path_len(), 5);
        let o3 = obj(&data, "o3");
        assert_eq!(data.positions(o3, cam(&data, "C")), &[3]);
        let back = Dataset::from_raw(data.unit(), &data.to_raw()).unwrap();
        assert_eq!(back.paths(), data.paths());
    }

    #[test]
    fn rejects_malformed_paths() {
        let bad = [RawPath {
            object: "x".into(),
            visits: vec![RawVisit::new("A", 5, 9), RawVisit::new("B", 5, 8)],
        }];
        assert!(Dataset::from_raw(TimeUnit::Seconds, &bad).is_err());
        assert!(MiningParams::new(0, 1, 0, 0).is_err());
        assert!(MiningParams::new(1, 1, 0, -1).is_err());
    }

    proptest! {
        #[test]
        fn embedding_matches_enumeration(
            inner in prop::collection::vec(0u32..3, 1..5),
            outer in prop::collection::vec(0u32..3, 0..7),
            d in 0usize..4,
        ) {
            let (i, o) = (cams(&inner), cams(&outer));
            let all = embeds_by_enumeration(&i, &o, d);
            prop_assert_eq!(route_embeds(&i, &o, d), !all.is_empty());
            prop_assert_eq!(embeddings(&i, &o, d), all);
        }

        #[test]
        fn embedding_is_monotone_in_d(
            inner in prop::collection::vec(0u32..3, 1..5),
            outer in prop::collection::vec(0u32..3, 0..8),
            d in 0usize..4,
        ) {
            let (i, o) = (cams(&inner), cams(&outer));
            if route_embeds(&i, &o, d) {
                prop_assert!(route_embeds(&i, &o, d + 1));
            }
            let plain = {
                let mut it = o.iter();
                i.iter().all(|c| it.any(|x| x == c))
            };
            prop_assert_eq!(route_embeds(&i, &o, usize::MAX), plain);
        }

        #[test]
        fn zero_gap_is_substring(
            inner in prop::collection::vec(0u32..3, 1..4),
            outer in prop::collection::vec(0u32..3, 0..8),
        ) {
            let (i, o) = (cams(&inner), cams(&outer));
            let substring = o.windows(i.len()).any(|w| w == i.as_slice());
            prop_assert_eq!(route_embeds(&i, &o, 0), substring);
        }

        #[test]
        fn validity_matches_definition(
            data in dataset_strategy(4, 3, 5),
            mask in 1u32..16,
            route in prop::collection::vec(0u32..3, 1..4),
            d in 0usize..3,
            eps in 0i64..15,
        ) {
            // fold the draws onto the objects and cameras actually present
            let n = data.num_objects() as u32;
            let mask = match mask & ((1 << n) - 1) {
                0 => 1,
                m => m,
            };
            let objects: Vec<ObjectId> = (0..n).filter(|i| mask >> i & 1 == 1).map(ObjectId).collect();
            let route: Vec<CameraId> = route.iter().map(|c| CameraId(c % data.num_cameras() as u32)).collect();
            let p = Pattern::new(objects, route);
            let params = MiningParams::new(1, 1, d, eps).unwrap();
            let valid = validate_pattern(&p, &data, &params).unwrap();
            prop_assert_eq!(valid, valid_by_enumeration(&p, &data, &params));
            if valid {
                let mut q = p.clone();
                annotate(&mut q, &data, &params).unwrap();
                let windows = q.camera_windows.unwrap();
                prop_assert!(windows.iter().all(|w| w.len() <= eps));
                let span = q.span.unwrap();
                prop_assert_eq!(span.begin, windows[0].begin);
            }
        }
    }
}
