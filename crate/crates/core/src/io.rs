//! On-disk formats.
//!
//! Paths files are line oriented: a header `#platoon-paths v1 unit=s` (or
//! `unit=ms`) followed by one object per line, e.g.
//! `o1 A[1,6] B[15,25] D[35,39]`. Blank lines and later `#` lines are
//! ignored.
//!
//! Pattern files are JSON lines: a provenance record first, then one record
//! per pattern in canonical order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Dataset, MiningParams, Pattern, RawPath, RawVisit, TimeUnit, Timestamp};

pub const PATHS_MAGIC: &str = "#platoon-paths";
pub const PATHS_VERSION: &str = "v1";
pub const PATTERNS_FORMAT: &str = "platoon-patterns v1";

fn parse_unit(s: &str) -> Option<TimeUnit> {
    match s {
        "s" => Some(TimeUnit::Seconds),
        "ms" => Some(TimeUnit::Millis),
        _ => None,
    }
}

fn parse_header(line: &str) -> Result<TimeUnit> {
    let expected = format!("{PATHS_MAGIC} {PATHS_VERSION} unit=s|ms");
    let mut words = line.split_whitespace();
    if words.next() != Some(PATHS_MAGIC) {
        return Err(Error::Version {
            found: line.to_string(),
            expected,
        });
    }
    if words.next() != Some(PATHS_VERSION) {
        return Err(Error::Version {
            found: line.to_string(),
            expected,
        });
    }
    let mut unit = TimeUnit::Seconds;
    for w in words {
        match w.strip_prefix("unit=").and_then(parse_unit) {
            Some(u) => unit = u,
            None => return Err(Error::parse(1, format!("unknown header field {w:?}"))),
        }
    }
    Ok(unit)
}

fn parse_visit(tok: &str, line: usize) -> Result<RawVisit> {
    let bad = || Error::parse(line, format!("malformed visit {tok:?}, expected CAMERA[enter,exit]"));
    let open = tok.rfind('[').ok_or_else(bad)?;
    let inner = tok[open + 1..].strip_suffix(']').ok_or_else(bad)?;
    let camera = &tok[..open];
    if camera.is_empty() {
        return Err(bad());
    }
    let (s, e) = inner.split_once(',').ok_or_else(bad)?;
    let enter: Timestamp = s.trim().parse().map_err(|_| bad())?;
    let exit: Timestamp = e.trim().parse().map_err(|_| bad())?;
    if enter >= exit {
        return Err(Error::parse(
            line,
            format!("visit {camera}[{enter},{exit}] must have enter < exit"),
        ));
    }
    Ok(RawVisit::new(camera, enter, exit))
}

/// Parses a paths file. Errors carry 1-based line numbers.
pub fn parse_paths(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate();
    let unit = loop {
        match lines.next() {
            None => {
                return Err(Error::Version {
                    found: String::new(),
                    expected: format!("{PATHS_MAGIC} {PATHS_VERSION}"),
                })
            }
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break parse_header(l.trim())?,
        }
    };
    let mut raw: Vec<RawPath> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in lines {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let object = words.next().unwrap().to_string();
        if !seen.insert(object.clone()) {
            return Err(Error::DuplicateObject(object));
        }
        let visits = words.map(|w| parse_visit(w, n)).collect::<Result<Vec<_>>>()?;
        if visits.is_empty() {
            return Err(Error::parse(n, format!("object {object:?} has no visits")));
        }
        for w in visits.windows(2) {
            if w[1].enter <= w[0].enter {
                return Err(Error::parse(
                    n,
                    format!(
                        "entrances must increase: {}[{},{}] follows {}[{},{}]",
                        w[1].camera, w[1].enter, w[1].exit, w[0].camera, w[0].enter, w[0].exit
                    ),
                ));
            }
        }
        raw.push(RawPath { object, visits });
    }
    Dataset::from_raw(unit, &raw)
}

/// Canonical text of a dataset; `parse_paths` inverts it.
pub fn write_paths(data: &Dataset) -> String {
    let mut out = format!("{PATHS_MAGIC} {PATHS_VERSION} unit={}\n", data.unit().as_str());
    for p in data.to_raw() {
        out.push_str(&p.object);
        for v in &p.visits {
            out.push_str(&format!(" {}[{},{}]", v.camera, v.enter, v.exit));
        }
        out.push('\n');
    }
    out
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_paths(&text)
}

pub fn save_dataset(path: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_paths(data)).map_err(|e| Error::io(path, e))
}

/// Hex SHA-256 of the canonical text of a dataset.
pub fn dataset_digest(data: &Dataset) -> String {
    hex::encode(Sha256::digest(write_paths(data).as_bytes()))
}

/// First line of a pattern file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub format: String,
    pub algorithm: String,
    /// `eps` in dataset ticks.
    pub params: MiningParams,
    pub unit: String,
    pub dataset_sha256: String,
}

impl Provenance {
    pub fn new(algorithm: &str, params: &MiningParams, data: &Dataset) -> Self {
        Provenance {
            format: PATTERNS_FORMAT.to_string(),
            algorithm: algorithm.to_string(),
            params: *params,
            unit: data.unit().as_str().to_string(),
            dataset_sha256: dataset_digest(data),
        }
    }
}

/// A pattern by object and camera names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub objects: Vec<String>,
    pub route: Vec<String>,
    pub span: Option<[Timestamp; 2]>,
    pub camera_windows: Option<Vec<[Timestamp; 2]>>,
}

impl PatternRecord {
    pub fn from_pattern(p: &Pattern, data: &Dataset) -> Self {
        let mut objects: Vec<String> = data.object_names(&p.objects).into_iter().map(String::from).collect();
        objects.sort();
        PatternRecord {
            objects,
            route: data.route_names(&p.route).into_iter().map(String::from).collect(),
            span: p.span.map(|s| [s.begin, s.end]),
            camera_windows: p
                .camera_windows
                .as_ref()
                .map(|w| w.iter().map(|s| [s.begin, s.end]).collect()),
        }
    }
}

pub fn write_patterns(prov: &Provenance, patterns: &[Pattern], data: &Dataset) -> String {
    let mut out = serde_json::to_string(prov).expect("provenance serializes");
    out.push('\n');
    for p in patterns {
        out.push_str(&serde_json::to_string(&PatternRecord::from_pattern(p, data)).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_patterns(text: &str) -> Result<(Provenance, Vec<PatternRecord>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::parse(1, "empty pattern file"))?;
    let prov: Provenance =
        serde_json::from_str(first).map_err(|e| Error::parse(1, format!("bad provenance record: {e}")))?;
    if prov.format != PATTERNS_FORMAT {
        return Err(Error::Version {
            found: prov.format,
            expected: PATTERNS_FORMAT.to_string(),
        });
    }
    let records = lines
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, format!("bad pattern record: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((prov, records))
}

pub fn save_patterns(path: impl AsRef<Path>, prov: &Provenance, patterns: &[Pattern], data: &Dataset) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_patterns(prov, patterns, data)).map_err(|e| Error::io(path, e))
}

pub fn load_patterns(path: impl AsRef<Path>) -> Result<(Provenance, Vec<PatternRecord>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text)
}

/// Pattern lines without the provenance record, for comparing the output
/// of different miners.
pub fn canonical_body(text: &str) -> String {
    text.lines().skip(1).map(|l| format!("{l}\n")).collect()
}
