//! Vertex orbits under the automorphism group, by backtracking search.
//!
//! Candidate images are pruned by degree and by the sorted distance profile
//! of each vertex; the search is exhaustive, so on small graphs the result is
//! the exact orbit partition.

use crate::graph::{metric, Graph, MetricData};

/// Default vertex-count cap for the automorphism search.
pub const DEFAULT_ORBIT_CAP: usize = 16;

/// Partition of the 0-based vertex set into automorphism classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    orbits: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl OrbitPartition {
    fn from_classes(n: usize, mut orbits: Vec<Vec<usize>>) -> Self {
        for o in &mut orbits {
            o.sort_unstable();
        }
        orbits.sort();
        let mut class_of = vec![0; n];
        for (k, o) in orbits.iter().enumerate() {
            for &v in o {
                class_of[v] = k;
            }
        }
        OrbitPartition { orbits, class_of }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_classes(n, (0..n).map(|v| vec![v]).collect())
    }

    /// Classes sorted by their smallest member.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Smallest vertex of each class, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn representative_of(&self, v: usize) -> usize {
        self.orbits[self.class_of[v]][0]
    }
}

struct Profiles {
    metric: MetricData,
    keys: Vec<Vec<u32>>,
}

impl Profiles {
    fn new(g: &Graph) -> Self {
        let metric = metric(g).expect("catalog graphs are connected");
        let keys = (0..g.vertex_count())
            .map(|v| {
                let mut row = metric.rows()[v].clone();
                row.sort_unstable();
                row.push(g.degree(v) as u32);
                row
            })
            .collect();
        Profiles { metric, keys }
    }
}

/// Searches for an isomorphism `g -> h` mapping `pin.0` to `pin.1` when
/// given. Returns the vertex map as `map[v_g] = v_h`.
pub fn find_isomorphism(g: &Graph, h: &Graph, pin: Option<(usize, usize)>) -> Option<Vec<usize>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let pg = Profiles::new(g);
    let ph = Profiles::new(h);
    search(g, h, &pg, &ph, pin)
}

fn search(g: &Graph, h: &Graph, pg: &Profiles, ph: &Profiles, pin: Option<(usize, usize)>) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    // Map the pinned vertex first, then grow in BFS-ish order so every new
    // vertex has an already-mapped neighbor when possible.
    let start = pin.map(|p| p.0).unwrap_or(0);
    let mut placed = vec![false; n];
    order.push(start);
    placed[start] = true;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                (
                    order.iter().filter(|&&u| g.adjacent(u, v)).count(),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if let Some((a, b)) = pin {
        if pg.keys[a] != ph.keys[b] {
            return None;
        }
    }
    fn extend(
        depth: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        pg: &Profiles,
        ph: &Profiles,
        pin: Option<(usize, usize)>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        let candidates: Vec<usize> = match pin {
            Some((a, b)) if a == v => vec![b],
            _ => (0..h.vertex_count()).collect(),
        };
        for w in candidates {
            if used[w] || pg.keys[v] != ph.keys[w] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                let mu = map[u];
                g.adjacent(u, v) == h.adjacent(mu, w) && pg.metric.distance(u, v) == ph.metric.distance(mu, w)
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(depth + 1, order, g, h, pg, ph, pin, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    extend(0, &order, g, h, pg, ph, pin, &mut map, &mut used).then_some(map)
}

/// Orbit partition of `g`, or singletons when `g` exceeds `cap` vertices.
pub fn vertex_orbits_capped(g: &Graph, cap: usize) -> OrbitPartition {
    let n = g.vertex_count();
    if n > cap {
        return OrbitPartition::singletons(n);
    }
    let profiles = Profiles::new(g);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for u in 0..n {
        if find(&mut parent, u) != u {
            continue;
        }
        for v in u + 1..n {
            if find(&mut parent, v) == find(&mut parent, u) || profiles.keys[u] != profiles.keys[v] {
                continue;
            }
            if let Some(sigma) = search(g, g, &profiles, &profiles, Some((u, v))) {
                for (x, &y) in sigma.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        parent[rx.max(ry)] = rx.min(ry);
                    }
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = find(&mut parent, v);
        classes[r].push(v);
    }
    OrbitPartition::from_classes(n, classes.into_iter().filter(|c| !c.is_empty()).collect())
}

pub fn vertex_orbits(g: &Graph) -> OrbitPartition {
    vertex_orbits_capped(g, DEFAULT_ORBIT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cartesian_product, catalog_graph};

    fn is_automorphism(g: &Graph, p: &[usize]) -> bool {
        g.edges().iter().all(|&(u, v)| g.adjacent(p[u], p[v]))
    }

    /// Orbits from all 8! permutations, independent of the search above.
    fn brute_force_orbits(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut reach = vec![vec![false; n]; n];
        fn heap(k: usize, perm: &mut Vec<usize>, g: &Graph, reach: &mut Vec<Vec<bool>>) {
            if k == 1 {
                if is_automorphism(g, perm) {
                    for (x, &y) in perm.iter().enumerate() {
                        reach[x][y] = true;
                    }
                }
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, g, reach);
                let j = if k % 2 == 0 { i } else { 0 };
                perm.swap(j, k - 1);
            }
        }
        heap(n, &mut perm, g, &mut reach);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if !classes.iter().any(|c| c.contains(&v)) {
                classes.push((0..n).filter(|&w| reach[v][w]).collect());
            }
        }
        classes
    }

    #[test]
    fn complete_graph_is_one_orbit() {
        let o = vertex_orbits(&catalog_graph("complete:8").unwrap());
        assert_eq!(o.len(), 1);
        assert_eq!(o.orbits()[0].len(), 8);
    }

    #[test]
    fn path_has_mirror_pairs() {
        let o = vertex_orbits(&catalog_graph("path:8").unwrap());
        assert_eq!(o.orbits(), &[vec![0, 7], vec![1, 6], vec![2, 5], vec![3, 4]]);
    }

    #[test]
    fn lemke_family_matches_brute_force() {
        for name in ["lemke", "lemke1", "lemke2", "complete-bipartite:4,4", "cycle:7"] {
            let g = catalog_graph(name).unwrap();
            let got = vertex_orbits(&g);
            assert_eq!(got.orbits(), brute_force_orbits(&g).as_slice(), "{name}");
        }
    }

    #[test]
    fn above_cap_falls_back_to_singletons() {
        let g = catalog_graph("cycle:8").unwrap();
        assert_eq!(vertex_orbits_capped(&g, 4).len(), 8);
    }

    #[test]
    fn large_vertex_transitive_graphs_are_fast() {
        assert_eq!(vertex_orbits(&catalog_graph("complete:12").unwrap()).len(), 1);
        assert_eq!(
            vertex_orbits(&catalog_graph("complete-bipartite:6,6").unwrap()).len(),
            1
        );
        assert_eq!(vertex_orbits(&catalog_graph("cycle:12").unwrap()).len(), 1);
    }

    #[test]
    fn product_commutes_up_to_isomorphism() {
        for (a, b) in [("path:3", "cycle:4"), ("lemke", "path:2"), ("complete:3", "path:3")] {
            let g = catalog_graph(a).unwrap();
            let h = catalog_graph(b).unwrap();
            let gh = cartesian_product(&g, &h);
            let hg = cartesian_product(&h, &g);
            let iso = find_isomorphism(&gh, &hg, None).expect("isomorphic");
            assert!(gh.edges().iter().all(|&(u, v)| hg.adjacent(iso[u], iso[v])));
        }
        let k2 = catalog_graph("path:2").unwrap();
        let c4 = catalog_graph("cycle:4").unwrap();
        assert!(find_isomorphism(&cartesian_product(&k2, &k2), &c4, None).is_some());
        let cube = Graph::from_edges(
            "q3",
            8,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 5),
                (1, 5),
                (2, 6),
                (3, 7),
                (4, 8),
            ],
        )
        .unwrap();
        assert!(find_isomorphism(&cartesian_product(&k2, &c4), &cube, None).is_some());
    }
}
