//! Fixtures and proptest strategies for the unit tests.

use proptest::prelude::*;

use crate::io::parse_paths;
use crate::model::{CameraId, Dataset, ObjectId, Pattern, RawPath, RawVisit, TimeUnit};

pub const FOUR_OBJECTS: &str = include_str!("../fixtures/four_objects.paths");
pub const THREE_OBJECTS: &str = include_str!("../fixtures/three_objects.paths");

pub fn four_objects() -> Dataset {
    parse_paths(FOUR_OBJECTS).unwrap()
}

pub fn three_objects() -> Dataset {
    parse_paths(THREE_OBJECTS).unwrap()
}

pub fn cam(data: &Dataset, name: &str) -> CameraId {
    data.camera_id(name).unwrap()
}

pub fn obj(data: &Dataset, name: &str) -> ObjectId {
    data.object_id(name).unwrap()
}

/// Pattern from object names and a string of one-letter camera names.
pub fn pat(data: &Dataset, objects: &[&str], route: &str) -> Pattern {
    Pattern::new(
        objects.iter().map(|o| obj(data, o)).collect(),
        route.chars().map(|c| cam(data, &c.to_string())).collect(),
    )
}

/// One path: (camera index, entrance gap, duration) per visit.
pub fn path_strategy(cameras: usize, max_len: usize, max_gap: i64) -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0..cameras, 1..=max_gap, 1..5i64), 1..=max_len)
}

pub fn dataset_from(specs: &[Vec<(usize, i64, i64)>], starts: &[i64]) -> Dataset {
    let raw: Vec<RawPath> = specs
        .iter()
        .zip(starts.iter().chain(std::iter::repeat(&0)))
        .enumerate()
        .map(|(i, (spec, &start))| {
            let mut t = start;
            RawPath {
                object: format!("o{i}"),
                visits: spec
                    .iter()
                    .map(|&(c, gap, dur)| {
                        t += gap;
                        RawVisit::new(format!("c{c}"), t, t + dur)
                    })
                    .collect(),
            }
        })
        .collect();
    Dataset::from_raw(TimeUnit::Seconds, &raw).unwrap()
}

/// Small random datasets: up to `objects` paths over `cameras` cameras.
pub fn dataset_strategy(objects: usize, cameras: usize, max_len: usize) -> impl Strategy<Value = Dataset> {
    (
        prop::collection::vec(path_strategy(cameras, max_len, 12), 1..=objects),
        prop::collection::vec(0..20i64, objects),
    )
        .prop_map(|(specs, starts)| dataset_from(&specs, &starts))
}
