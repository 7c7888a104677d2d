//! Closed frequent subsequence mining over partition-token sequences, by
//! prefix projection.

use std::collections::HashMap;

use crate::model::{CameraId, ObjectId};

/// A visit's camera together with the proximity partition it fell into.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub camera: CameraId,
    pub part: u32,
}

/// A frequent, closed token subsequence and the objects supporting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSeq {
    pub tokens: Vec<Token>,
    /// Sorted.
    pub supporters: Vec<ObjectId>,
}

impl CandidateSeq {
    pub fn seq(&self) -> Vec<CameraId> {
        self.tokens.iter().map(|t| t.camera).collect()
    }
}

/// Plain (unbounded-gap) subsequence test.
pub(crate) fn is_subsequence<T: PartialEq>(needle: &[T], hay: &[T]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|x| it.any(|y| y == x))
}

struct Miner<'a> {
    seqs: &'a [Vec<Token>],
    m: usize,
    k: usize,
    found: Vec<CandidateSeq>,
}

impl Miner<'_> {
    /// `proj` holds, per supporting object, where its unmatched suffix starts.
    fn grow(&mut self, prefix: &mut Vec<Token>, proj: &[(u32, u32)]) {
        if prefix.len() >= self.k {
            self.found.push(CandidateSeq {
                tokens: prefix.clone(),
                supporters: proj.iter().map(|&(o, _)| ObjectId(o)).collect(),
            });
        }
        let mut next: HashMap<Token, Vec<(u32, u32)>> = HashMap::new();
        for &(o, start) in proj {
            let seq = &self.seqs[o as usize];
            for (i, &tok) in seq.iter().enumerate().skip(start as usize) {
                let entry = next.entry(tok).or_default();
                // first occurrence in this object's suffix only
                if entry.last().is_none_or(|&(last, _)| last != o) {
                    entry.push((o, i as u32 + 1));
                }
            }
        }
        let mut frequent: Vec<(Token, Vec<(u32, u32)>)> = next.into_iter().filter(|(_, v)| v.len() >= self.m).collect();
        frequent.sort_unstable_by_key(|(t, _)| *t);
        for (tok, sub) in frequent {
            prefix.push(tok);
            self.grow(prefix, &sub);
            prefix.pop();
        }
    }
}

/// All closed token subsequences with at least `m` supporting objects and at
/// least `k` tokens. Gaps inside a supporter are unbounded.
pub fn mine_sequential_candidates(seqs: &[Vec<Token>], m: usize, k: usize) -> Vec<CandidateSeq> {
    let mut miner = Miner {
        seqs,
        m: m.max(1),
        k: k.max(1),
        found: Vec::new(),
    };
    let root: Vec<(u32, u32)> = (0..seqs.len() as u32)
        .filter(|&o| !seqs[o as usize].is_empty())
        .map(|o| (o, 0))
        .collect();
    if root.len() < miner.m {
        return Vec::new();
    }
    miner.grow(&mut Vec::new(), &root);
    close(miner.found)
}

/// Keeps the patterns that have no proper supersequence with the same
/// supporter set.
fn close(found: Vec<CandidateSeq>) -> Vec<CandidateSeq> {
    let mut groups: HashMap<Vec<ObjectId>, Vec<Vec<Token>>> = HashMap::new();
    for c in found {
        groups.entry(c.supporters).or_default().push(c.tokens);
    }
    let mut out = Vec::new();
    for (supporters, mut seqs) in groups {
        seqs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut closed: Vec<Vec<Token>> = Vec::new();
        for s in seqs {
            if !closed.iter().any(|c| c.len() > s.len() && is_subsequence(&s, c)) {
                closed.push(s);
            }
        }
        out.extend(closed.into_iter().map(|tokens| CandidateSeq {
            tokens,
            supporters: supporters.clone(),
        }));
    }
    out.sort_by(|a, b| a.tokens.cmp(&b.tokens).then_with(|| a.supporters.cmp(&b.supporters)));
    out
}
