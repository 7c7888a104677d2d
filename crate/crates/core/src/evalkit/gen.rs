//! Synthetic camera networks with planted groups.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxgrowth::{mine_maxgrowth, MaxGrowthOptions};
use crate::model::{Dataset, MiningParams, Pattern, RawPath, RawVisit, TimeUnit, Timestamp};

/// Inclusive range.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: u64,
    pub max: u64,
}

impl Span {
    pub fn new(min: u64, max: u64) -> Self {
        Span { min, max }
    }

    fn check(&self, what: &str) -> Result<()> {
        if self.min > self.max {
            return Err(Error::input(format!(
                "{what} range {}..{} is empty",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(self.min..=self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub num_cameras: usize,
    /// Average number of road links per camera.
    pub grid_degree: usize,
    pub num_objects: usize,
    pub num_planted_groups: usize,
    pub group_size: Span,
    pub route_length: Span,
    /// Largest entrance offset of a group member from its group, seconds.
    pub entrance_jitter: u64,
    pub background_path_length: Span,
    /// Seconds between consecutive cameras.
    pub travel_time: Span,
    /// Seconds spent in view of a camera.
    pub dwell_time: Span,
    /// Paths start uniformly in `[0, horizon]` seconds.
    pub horizon: u64,
    pub seed: u64,
    /// Parameters the golden patterns are mined with (`eps` in seconds).
    pub params: MiningParams,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_cameras: 50,
            grid_degree: 3,
            num_objects: 200,
            num_planted_groups: 10,
            group_size: Span::new(3, 5),
            route_length: Span::new(4, 8),
            entrance_jitter: 5,
            background_path_length: Span::new(2, 8),
            travel_time: Span::new(60, 240),
            dwell_time: Span::new(5, 20),
            horizon: 86_400,
            seed: 0,
            params: MiningParams {
                m: 2,
                k: 3,
                d: 1,
                eps: 10,
            },
        }
    }
}

impl GenConfig {
    pub fn check(&self) -> Result<()> {
        self.params.check()?;
        self.group_size.check("group size")?;
        self.route_length.check("route length")?;
        self.background_path_length.check("background path length")?;
        self.travel_time.check("travel time")?;
        self.dwell_time.check("dwell time")?;
        if self.num_cameras == 0 {
            return Err(Error::input("need at least one camera"));
        }
        if self.group_size.min == 0 || self.route_length.min == 0 || self.background_path_length.min == 0 {
            return Err(Error::input("group size and path lengths must be positive"));
        }
        if self.dwell_time.min == 0 {
            return Err(Error::input("dwell time must be positive"));
        }
        if self.travel_time.min <= self.entrance_jitter {
            return Err(Error::input("travel time must exceed the entrance jitter"));
        }
        let planted = self.num_planted_groups as u64 * self.group_size.max;
        if planted > self.num_objects as u64 {
            return Err(Error::input(format!(
                "{} groups of up to {} objects do not fit into {} objects",
                self.num_planted_groups, self.group_size.max, self.num_objects
            )));
        }
        if self.route_length.max as usize > self.num_cameras {
            return Err(Error::input(format!(
                "routes of {} cameras need at least that many cameras, have {}",
                self.route_length.max, self.num_cameras
            )));
        }
        Ok(())
    }
}

/// Random connected undirected graph: a random spanning tree plus extra
/// links until the average degree is reached.
fn camera_graph(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    let target = (n * degree / 2).min(n * (n - 1) / 2);
    let mut tries = 0;
    while edges.len() < target && tries < 100 * target {
        tries += 1;
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// A walk of `len` distinct cameras, or `None` after repeated dead ends.
fn simple_walk(adj: &[Vec<usize>], len: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    for _ in 0..200 {
        let mut walk = vec![rng.gen_range(0..adj.len())];
        while walk.len() < len {
            let here = *walk.last().unwrap();
            let next: Vec<usize> = adj[here].iter().copied().filter(|c| !walk.contains(c)).collect();
            match next.choose(rng) {
                Some(&c) => walk.push(c),
                None => break,
            }
        }
        if walk.len() == len {
            return Some(walk);
        }
    }
    None
}

/// Camera names sort in numeric order.
fn camera_name(c: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(3);
    format!("c{c:0width$}")
}

/// A synthetic dataset (seconds) and its golden patterns: the maximal
/// patterns mined from it with `cfg.params`.
pub fn gen_synthetic(cfg: &GenConfig) -> Result<(Dataset, Vec<Pattern>)> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let adj = camera_graph(cfg.num_cameras, cfg.grid_degree, &mut rng);
    let n_cam = cfg.num_cameras;
    let visit = |rng: &mut ChaCha8Rng, c: usize, enter: Timestamp| {
        RawVisit::new(
            camera_name(c, n_cam),
            enter,
            enter + cfg.dwell_time.sample(rng) as Timestamp,
        )
    };

    let mut raw: Vec<RawPath> = Vec::with_capacity(cfg.num_objects);
    for _ in 0..cfg.num_planted_groups {
        let size = cfg.group_size.sample(&mut rng) as usize;
        let len = cfg.route_length.sample(&mut rng) as usize;
        let route = simple_walk(&adj, len, &mut rng)
            .ok_or_else(|| Error::input(format!("camera graph admits no simple route of {len} cameras")))?;
        let mut base = rng.gen_range(0..=cfg.horizon) as Timestamp;
        let mut times = Vec::with_capacity(len);
        for _ in 0..len {
            times.push(base);
            base += cfg.travel_time.sample(&mut rng) as Timestamp;
        }
        for _ in 0..size {
            let visits = route
                .iter()
                .zip(&times)
                .map(|(&c, &t)| {
                    let j = rng.gen_range(0..=cfg.entrance_jitter) as Timestamp;
                    visit(&mut rng, c, t + j)
                })
                .collect();
            raw.push(RawPath {
                object: String::new(),
                visits,
            });
        }
    }
    while raw.len() < cfg.num_objects {
        let len = cfg.background_path_length.sample(&mut rng) as usize;
        let mut walk = vec![rng.gen_range(0..n_cam)];
        while walk.len() < len {
            let here = *walk.last().unwrap();
            let prev = walk.len().checked_sub(2).map(|i| walk[i]);
            let next: Vec<usize> = adj[here].iter().copied().filter(|&c| Some(c) != prev).collect();
            match next.choose(&mut rng).or(adj[here].first()) {
                Some(&c) => walk.push(c),
                None => break,
            }
        }
        let mut t = rng.gen_range(0..=cfg.horizon) as Timestamp;
        let mut visits = Vec::with_capacity(len);
        for c in walk {
            visits.push(visit(&mut rng, c, t));
            t += cfg.travel_time.sample(&mut rng) as Timestamp;
        }
        raw.push(RawPath {
            object: String::new(),
            visits,
        });
    }
    // planted members should not sit next to each other in the file
    raw.shuffle(&mut rng);
    let width = cfg.num_objects.saturating_sub(1).to_string().len().max(4);
    for (i, p) in raw.iter_mut().enumerate() {
        p.object = format!("v{i:0width$}");
    }

    let data = Dataset::from_raw(TimeUnit::Seconds, &raw)?;
    let golden = mine_maxgrowth(&data, &cfg.params, MaxGrowthOptions::default())?.patterns;
    Ok((data, golden))
}
