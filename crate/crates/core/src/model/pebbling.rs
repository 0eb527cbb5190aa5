//! Pebbling constraints: strategy A (sets across slices) and strategy B
//! (pebbles pushed into the root slice).

use num_traits::One;

use super::defining::{affine, lbl};
use super::linear::{int, Family, LinExpr, Rational, Sense};
use super::vars::{Side, VarKey};
use super::Builder;

pub(crate) fn build_a_constraints(b: &mut Builder<'_>) {
    for k in Side::BOTH {
        set_count(b, k);
        sat_neighborhood(b, k);
        bipartite_pairs(b, k);
        root_reach(b, k);
        star_feed(b, k);
        stack_near_root(b, k);
    }
}

pub(crate) fn build_b_constraints(b: &mut Builder<'_>) {
    for k in Side::BOTH {
        root_no_set(b, k);
        stack_into_root(b, k);
        path_into_root(b, k);
    }
}

fn set_total(b: &Builder<'_>, k: Side) -> LinExpr {
    let mut e = LinExpr::new();
    for j in 0..b.params.side(k.other()).size {
        e.add_term(b.id(VarKey::Set(k, j)), Rational::one());
    }
    e
}

fn set_count(b: &mut Builder<'_>, k: Side) {
    let frame_pi = b.params.side(k.other()).pi;
    let lhs = affine(&set_total(b, k), int(1));
    b.push(
        Family::SetCount,
        vec![k.to_string()],
        lhs,
        Sense::Le,
        LinExpr::constant(int(frame_pi)),
    );
}

/// Largest hop distance usable from a central slice: `ceil(log2 pi(K)) - 1`.
fn neighborhood_max_distance(pi: i64) -> u32 {
    let mut bits = 0u32;
    while (1i64 << bits) < pi {
        bits += 1;
    }
    bits.saturating_sub(1)
}

fn sat_neighborhood(b: &mut Builder<'_>, k: Side) {
    let policy = b.policy.clone();
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let frame_pi = frame.pi();
    let m = b.params.big_m;
    let dmax = neighborhood_max_distance(p.pi);
    if dmax == 0 {
        return;
    }
    let max_set = policy.neighborhood_max_set.min(frame_pi as usize);
    let max_eta = policy.neighborhood_max_eta.min(frame_pi as usize);
    for v in 0..frame.size() {
        let near: Vec<usize> = (0..frame.size())
            .filter(|&w| w != v && frame.metric.distance(v, w) <= dmax)
            .collect();
        for size in 1..=max_set.min(near.len()) {
            for subset in combinations(&near, size) {
                let d = subset.iter().map(|&w| frame.metric.distance(v, w)).max().unwrap();
                for eta in 1..=max_eta.min(size) {
                    let chi = ((1usize << d) - 1) + size - eta;
                    if chi > p.saturation_max {
                        continue;
                    }
                    let mut lhs = b.var(VarKey::Extra(k, v));
                    lhs.add_const(int(p.size as i64 * (size - eta) as i64 + 1));
                    let mut rhs = LinExpr::new();
                    for &w in &subset {
                        let hop = 1i64 << frame.metric.distance(v, w);
                        rhs.add_term(b.id(VarKey::Extra(k, w)), int(-hop));
                        rhs.add_const(int(hop * p.pi));
                    }
                    rhs.add_term(b.id(VarKey::X(k, v, chi)), int(-m));
                    rhs.add_term(b.id(VarKey::Y(k, frame_pi as usize - eta)), int(-m));
                    rhs.add_const(int(2 * m));
                    let index = vec![k.to_string(), lbl(v), eta.to_string(), set_label(&subset)];
                    b.push(Family::SatNeighborhood, index, lhs, Sense::Le, rhs);
                }
            }
        }
    }
}

fn bipartite_pairs(b: &mut Builder<'_>, k: Side) {
    let policy = b.policy.clone();
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let frame_pi = frame.pi() as usize;
    let m = b.params.big_m;
    if p.saturation_max < 1 || policy.bipartite_max_s == 0 {
        return;
    }
    let vertices: Vec<usize> = (0..frame.size()).collect();
    for t_size in 1..=policy.bipartite_max_t.min(frame_pi).min(frame.size()) {
        for t in combinations(&vertices, t_size) {
            let common: Vec<usize> = vertices
                .iter()
                .copied()
                .filter(|&i| !t.contains(&i) && t.iter().all(|&j| frame.graph.adjacent(i, j)))
                .collect();
            for s_size in 1..=policy.bipartite_max_s.min(common.len()) {
                for s in combinations(&common, s_size) {
                    let mut lhs = LinExpr::constant(int(1));
                    let mut rhs = LinExpr::new();
                    for &i in &s {
                        lhs.add_term(b.id(VarKey::Pair(k, i)), Rational::one());
                        rhs.add_term(b.id(VarKey::X(k, i, 1)), int(-m));
                    }
                    rhs.add_const(int(m * s_size as i64));
                    for &j in &t {
                        rhs.add_term(b.id(VarKey::Extra(k, j)), int(-1));
                        rhs.add_const(int(p.pi));
                    }
                    rhs.add_term(b.id(VarKey::Y(k, frame_pi - t_size)), int(-m));
                    rhs.add_const(int(m));
                    let index = vec![k.to_string(), set_label(&s), set_label(&t)];
                    b.push(Family::BipartitePairs, index, lhs, Sense::Le, rhs);
                }
            }
        }
    }
}

fn root_reach(b: &mut Builder<'_>, k: Side) {
    let frame = b.params.side(k.other()).clone();
    let mut lhs = LinExpr::constant(int(1));
    for j in 0..frame.size {
        lhs.add_term(b.id(VarKey::NRoot(k, j)), Rational::one());
    }
    b.push(
        Family::RootReach,
        vec![k.to_string()],
        lhs,
        Sense::Le,
        LinExpr::constant(int(frame.pi)),
    );
}

fn star_feed(b: &mut Builder<'_>, k: Side) {
    let policy = b.policy.clone();
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let frame_pi = frame.pi();
    if frame_pi < 4 {
        return;
    }
    let cap = policy.star_max_size.min((frame_pi - 3) as usize);
    for v in 0..frame.size() {
        let nbrs = frame.graph.neighbors(v).to_vec();
        for size in 1..=cap.min(nbrs.len()) {
            for s in combinations(&nbrs, size) {
                let mut lhs = b.var(VarKey::Partial(k, v));
                lhs.add_const(int(1));
                let mut rhs = b.var(VarKey::N2peb(k, v));
                for &j in &s {
                    rhs.add_term(b.id(VarKey::Extra(k, j)), int(-2));
                    rhs.add_const(int(2 * p.pi));
                }
                rhs.add_const(int((frame_pi - 2 - size as i64) * p.pi));
                let index = vec![k.to_string(), lbl(v), set_label(&s)];
                b.push(Family::StarFeed, index, lhs, Sense::Le, rhs);
            }
        }
    }
}

fn stack_near_root(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let r = b.inst.root_of(k.other());
    for v in (0..frame.size()).filter(|&v| v != r) {
        let d = frame.metric.distance(v, r);
        let mut lhs = b.var(VarKey::Partial(k, v));
        lhs.add_const(int(1));
        for j in (0..frame.size()).filter(|&j| j != r && j != v) {
            lhs.add_term(b.id(VarKey::Stack(k, j, frame.metric.distance(v, j))), Rational::one());
        }
        let rhs = affine(&b.var(VarKey::N2pebMon(k, v)), int(((1i64 << d) - 2) * p.pi));
        b.push(Family::StackNearRoot, vec![k.to_string(), lbl(v)], lhs, Sense::Le, rhs);
    }
}

fn root_no_set(b: &mut Builder<'_>, k: Side) {
    let r = b.inst.root_of(k.other());
    b.push(
        Family::RootNoSet,
        vec![k.to_string()],
        b.var(VarKey::Set(k, r)),
        Sense::Eq,
        LinExpr::constant(int(0)),
    );
}

fn stack_into_root(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let r = b.inst.root_of(k.other());
    let mut lhs = b.var(VarKey::Partial(k, r));
    lhs.add_const(int(1));
    for j in (0..frame.size()).filter(|&j| j != r) {
        lhs.add_term(b.id(VarKey::Stack(k, j, frame.metric.distance(j, r))), Rational::one());
    }
    b.push(
        Family::StackIntoRoot,
        vec![k.to_string()],
        lhs,
        Sense::Le,
        LinExpr::constant(int(p.pi)),
    );
}

fn path_into_root(b: &mut Builder<'_>, k: Side) {
    let policy = b.policy.clone();
    let p = b.params.side(k).clone();
    let frame = b.inst.factor(k.other()).clone();
    let r = b.inst.root_of(k.other());
    let m = b.params.big_m;
    if p.saturation_max < 1 {
        return;
    }
    let max_len = policy.path_max_length.min(frame.metric.diameter() as usize);
    for path in root_paths(&frame.graph, r, max_len, policy.paths_per_terminal) {
        let alpha = path.len() - 1;
        let scale = 1i64 << alpha;
        let mut lhs = LinExpr::constant(int(1));
        for (i, &pv) in path.iter().enumerate().skip(1) {
            let w = 1i64 << (alpha - i);
            lhs.add_term(b.id(VarKey::Partial(k, pv)), int(w));
            lhs.add_const(int(-w * p.size as i64));
        }
        let mut rhs = LinExpr::constant(int(scale * p.pi));
        rhs.add_term(b.id(VarKey::Partial(k, r)), int(-scale));
        rhs.add_const(int(scale * m * alpha as i64));
        for &pv in &path[1..] {
            rhs.add_term(b.id(VarKey::X(k, pv, 1)), int(-scale * m));
        }
        let index = vec![
            k.to_string(),
            path.iter().map(|&v| lbl(v)).collect::<Vec<_>>().join("."),
        ];
        b.push(Family::PathIntoRoot, index, lhs, Sense::Le, rhs);
    }
}

/// Simple paths starting at `root` with 1..=`max_len` edges; for each far
/// endpoint keeps the first `per_endpoint` paths, shortest first, then
/// lexicographic.
pub(crate) fn root_paths(g: &crate::graph::Graph, root: usize, max_len: usize, per_endpoint: usize) -> Vec<Vec<usize>> {
    if per_endpoint == 0 || max_len == 0 {
        return Vec::new();
    }
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![root];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[root] = true;
    fn dfs(
        g: &crate::graph::Graph,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if path.len() > max_len {
            return;
        }
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            out.push(path.clone());
            dfs(g, max_len, path, on_path, out);
            on_path[w] = false;
            path.pop();
        }
    }
    dfs(g, max_len, &mut stack, &mut on_path, &mut all);
    all.sort_by(|a, b| (a.last(), a.len(), a).cmp(&(b.last(), b.len(), b)));
    let mut out = Vec::new();
    let mut taken = 0;
    let mut current = None;
    for p in all {
        if current != p.last().copied() {
            current = p.last().copied();
            taken = 0;
        }
        if taken < per_endpoint {
            out.push(p);
            taken += 1;
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// All `size`-element subsets of `items`, in lexicographic order.
pub(crate) fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut pos = size;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < items.len() - size + pos {
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn set_label(vs: &[usize]) -> String {
    vs.iter().map(|&v| lbl(v)).collect::<Vec<_>>().join(".")
}
