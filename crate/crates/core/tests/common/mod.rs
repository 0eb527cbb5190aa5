#![allow(dead_code)]

use std::collections::HashSet;

use pebblebound::solver::{probe_backends, SolverKind};
use pebblebound::Graph;
use proptest::prelude::*;

/// Connected graphs on `2..=max_n` vertices: a random spanning tree plus
/// random extra edges.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            let extra = proptest::collection::vec((0..n, 0..n), 0..n);
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges = HashSet::new();
            for (v, p) in parents.into_iter().enumerate() {
                edges.insert((p, v + 1));
            }
            for (a, b) in extra {
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            let mut list: Vec<_> = edges.into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
            list.sort_unstable();
            Graph::from_edges("random", n, &list).unwrap()
        })
}

/// Plain exhaustive search over pebbling moves, no pruning or memo reuse.
pub fn naive_solvable(g: &Graph, counts: &[u32], root: usize, target: u32) -> bool {
    fn go(g: &Graph, c: &mut Vec<u32>, root: usize, target: u32, seen: &mut HashSet<Vec<u32>>) -> bool {
        if c[root] >= target {
            return true;
        }
        if !seen.insert(c.clone()) {
            return false;
        }
        for v in 0..c.len() {
            if c[v] < 2 {
                continue;
            }
            for &w in g.neighbors(v) {
                c[v] -= 2;
                c[w] += 1;
                let ok = go(g, c, root, target, seen);
                c[v] += 2;
                c[w] -= 1;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(g, &mut counts.to_vec(), root, target, &mut HashSet::new())
}

pub fn cbc() -> Option<SolverKind> {
    probe_backends().contains(&SolverKind::Cbc).then_some(SolverKind::Cbc)
}
