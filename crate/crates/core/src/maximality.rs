//! Dominance elimination shared by every miner.

use std::collections::HashMap;

use crate::model::{canonicalize, route_embeds, ObjectId, Pattern};

/// `big` dominates `small` when it has a superset of the objects and the
/// smaller route embeds into the bigger one with gaps of at most `d`.
/// Time spans play no part.
pub fn dominates(big: &Pattern, small: &Pattern, d: usize) -> bool {
    small.route.len() <= big.route.len()
        && small.objects.len() <= big.objects.len()
        && is_subset(&small.objects, &big.objects)
        && route_embeds(&small.route, &big.route, d)
}

fn is_subset(small: &[ObjectId], big: &[ObjectId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|o| it.any(|b| b == o))
}

/// Inverted object index over a canonical, duplicate-free pattern list.
pub struct PatternIndex {
    postings: HashMap<ObjectId, Vec<u32>>,
}

impl PatternIndex {
    pub fn new(patterns: &[Pattern]) -> Self {
        let mut postings: HashMap<ObjectId, Vec<u32>> = HashMap::new();
        for (i, p) in patterns.iter().enumerate() {
            for &o in &p.objects {
                postings.entry(o).or_default().push(i as u32);
            }
        }
        PatternIndex { postings }
    }

    pub fn postings(&self, o: ObjectId) -> &[u32] {
        self.postings.get(&o).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Patterns containing every object of `objects`, narrowed down through
    /// the two rarest objects only.
    fn candidates(&self, objects: &[ObjectId]) -> Vec<u32> {
        let mut lists: Vec<&[u32]> = objects.iter().map(|&o| self.postings(o)).collect();
        lists.sort_by_key(|l| l.len());
        match lists.as_slice() {
            [] => Vec::new(),
            [only] => only.to_vec(),
            [a, b, ..] => intersect_sorted(a, b),
        }
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Drops duplicates and every pattern dominated by another one; the
/// survivors come back in canonical order.
pub fn remove_non_maximal(mut patterns: Vec<Pattern>, d: usize) -> Vec<Pattern> {
    canonicalize(&mut patterns);
    if patterns.len() <= 1 {
        return patterns;
    }
    let index = PatternIndex::new(&patterns);
    let keep: Vec<bool> = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !index
                .candidates(&p.objects)
                .into_iter()
                .any(|j| j as usize != i && dominates(&patterns[j as usize], p, d))
        })
        .collect();
    patterns
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}
