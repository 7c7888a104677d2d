//! Root search order from the precedence relation between clusters.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::clustering::{Cluster, ClusterId};
use crate::model::Position;

/// A total order over clusters consistent with the strict part of the
/// precedence relation; ties (mutually preceding clusters) break by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOrder {
    pub order: Vec<ClusterId>,
    /// `rank[cluster] = index in order`.
    pub rank: Vec<u32>,
    /// Strongly connected component of each cluster.
    pub component: Vec<u32>,
    pub num_components: usize,
}

impl SearchOrder {
    pub fn non_singleton_components(&self) -> usize {
        let mut sizes = vec![0usize; self.num_components];
        for &c in &self.component {
            sizes[c as usize] += 1;
        }
        sizes.iter().filter(|&&s| s > 1).count()
    }

    pub fn only_singletons(&self) -> bool {
        self.num_components == self.order.len()
    }
}

/// Precedence edges `u -> v`: some object is in both with `p_u <= p_v`.
/// Per object only consecutive memberships are linked (plus a back edge
/// closing each run of equal positions); reachability is unchanged.
pub fn precedence_edges(clusters: &[Cluster], num_objects: usize) -> Vec<(ClusterId, ClusterId)> {
    let mut by_object: Vec<Vec<(Position, ClusterId)>> = vec![Vec::new(); num_objects];
    for cl in clusters {
        for &(o, p) in &cl.members {
            by_object[o.index()].push((p, cl.id));
        }
    }
    let mut edges = Vec::new();
    for list in &mut by_object {
        list.sort_unstable();
        for w in list.windows(2) {
            edges.push((w[0].1, w[1].1));
        }
        let mut i = 0;
        while i < list.len() {
            let mut j = i;
            while j + 1 < list.len() && list[j + 1].0 == list[i].0 {
                j += 1;
            }
            if j > i {
                edges.push((list[j].1, list[i].1));
            }
            i = j + 1;
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

pub fn precedence_order(clusters: &[Cluster], num_objects: usize) -> SearchOrder {
    let n = clusters.len();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        graph.add_node(());
    }
    let edges = precedence_edges(clusters, num_objects);
    for &(u, v) in &edges {
        if u != v {
            graph.add_edge(NodeIndex::new(u.index()), NodeIndex::new(v.index()), ());
        }
    }

    let sccs = tarjan_scc(&graph);
    let mut component = vec![0u32; n];
    let mut members: Vec<Vec<ClusterId>> = Vec::with_capacity(sccs.len());
    for (ci, scc) in sccs.iter().enumerate() {
        let mut ids: Vec<ClusterId> = scc.iter().map(|ix| ClusterId(ix.index() as u32)).collect();
        ids.sort_unstable();
        for id in &ids {
            component[id.index()] = ci as u32;
        }
        members.push(ids);
    }

    // Kahn over the condensation, smallest leading cluster id first
    let nc = members.len();
    let mut indegree = vec![0usize; nc];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for &(u, v) in &edges {
        let (cu, cv) = (component[u.index()] as usize, component[v.index()] as usize);
        if cu != cv {
            succ[cu].push(cv);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
        for &v in s.iter() {
            indegree[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(ClusterId, usize)>> = (0..nc)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((members[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.extend_from_slice(&members[c]);
        for &v in &succ[c] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                heap.push(Reverse((members[v][0], v)));
            }
        }
    }
    let mut rank = vec![0u32; n];
    for (i, id) in order.iter().enumerate() {
        rank[id.index()] = i as u32;
    }
    SearchOrder {
        order,
        rank,
        component,
        num_components: nc,
    }
}
