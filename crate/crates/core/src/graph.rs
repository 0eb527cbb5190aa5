//! Simple undirected graphs, Cartesian products and hop metrics.
//!
//! Vertices are exposed with 1-based labels `1..=n`; internally every
//! routine works on 0-based indices (`label - 1`).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::GraphError;

/// A labeled simple undirected connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from 1-based edge pairs. Rejects loops, duplicate
    /// edges, out-of-range endpoints and disconnected inputs.
    pub fn from_edges(
        name: impl Into<String>,
        vertex_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(GraphError::VertexOutOfRange { u, v, n: vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v) - 1, u.max(v) - 1);
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[key.0].push(key.1);
            adjacency[key.1].push(key.0);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            name: name.into(),
            adjacency,
            edges: seen.into_iter().collect(),
        };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected(graph.name));
        }
        Ok(graph)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted 0-based pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted 0-based neighbors of the 0-based vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    fn is_connected(&self) -> bool {
        bfs_distances(&self.adjacency, 0).iter().all(Option::is_some)
    }

    /// Renames the graph, keeping its structure.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Text form: header `n m`, then one `u v` line per edge (1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    /// Parses the text form written by [`Graph::to_text`].
    pub fn from_text(name: impl Into<String>, text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| GraphError::Parse("missing header".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>, _>>()?;
        if edges.len() != m {
            return Err(GraphError::Parse(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(name, n, &edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_whitespace().map(usize::from_str);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(GraphError::Parse(format!("expected two integers, got {line:?}"))),
    }
}

fn bfs_distances(adjacency: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adjacency.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &w in &adjacency[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// The Cartesian product `g □ h`.
///
/// Vertex `(i, j)` (1-based) gets label `(i - 1) * |h| + j`, i.e. the 0-based
/// index `i0 * |h| + j0`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.vertex_count();
    let n = g.vertex_count() * nh;
    let mut edges = Vec::with_capacity(g.vertex_count() * h.edge_count() + nh * g.edge_count());
    for i in 0..g.vertex_count() {
        for &(a, b) in h.edges() {
            edges.push((i * nh + a + 1, i * nh + b + 1));
        }
    }
    for j in 0..nh {
        for &(a, b) in g.edges() {
            edges.push((a * nh + j + 1, b * nh + j + 1));
        }
    }
    Graph::from_edges(format!("{}x{}", g.name(), h.name()), n, &edges).expect("product of valid graphs is valid")
}

/// 0-based product index of the 0-based pair `(i, j)`.
pub fn product_index(i: usize, j: usize, h_count: usize) -> usize {
    i * h_count + j
}

/// All-pairs hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricData {
    distances: Vec<Vec<u32>>,
    diameter: u32,
}

impl MetricData {
    /// Distance between 0-based vertices.
    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.distances[u][v]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.distances
    }
}

pub fn metric(g: &Graph) -> Result<MetricData, GraphError> {
    let mut distances = Vec::with_capacity(g.vertex_count());
    for s in 0..g.vertex_count() {
        let row = bfs_distances(&g.adjacency, s)
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GraphError::Disconnected(g.name.clone()))?;
        distances.push(row);
    }
    let diameter = distances.iter().flatten().copied().max().unwrap_or(0);
    Ok(MetricData { distances, diameter })
}

/// Catalog identifiers accepted by [`catalog_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogName {
    Lemke,
    Lemke1,
    Lemke2,
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::Lemke => write!(f, "lemke"),
            CatalogName::Lemke1 => write!(f, "lemke1"),
            CatalogName::Lemke2 => write!(f, "lemke2"),
            CatalogName::Cycle(n) => write!(f, "cycle:{n}"),
            CatalogName::Path(n) => write!(f, "path:{n}"),
            CatalogName::Complete(n) => write!(f, "complete:{n}"),
            CatalogName::CompleteBipartite(a, b) => write!(f, "complete-bipartite:{a},{b}"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GraphError::UnknownCatalog(s.to_string());
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| unknown());
        let name = match s.trim().to_ascii_lowercase().as_str() {
            "lemke" | "l" => CatalogName::Lemke,
            "lemke1" | "l1" => CatalogName::Lemke1,
            "lemke2" | "l2" => CatalogName::Lemke2,
            other => {
                let (kind, arg) = other.split_once(':').ok_or_else(unknown)?;
                match kind {
                    "cycle" => CatalogName::Cycle(num(arg)?),
                    "path" => CatalogName::Path(num(arg)?),
                    "complete" => CatalogName::Complete(num(arg)?),
                    "complete-bipartite" => {
                        let (a, b) = arg.split_once(',').ok_or_else(unknown)?;
                        CatalogName::CompleteBipartite(num(a)?, num(b)?)
                    }
                    _ => return Err(unknown()),
                }
            }
        };
        Ok(name)
    }
}

// Lemke-family adjacency, read off the vertex/edge drawings (labels v1..v8).
const LEMKE_EDGES: [(usize, usize); 13] = [
    (8, 6),
    (6, 3),
    (3, 1),
    (1, 2),
    (2, 4),
    (4, 7),
    (7, 8),
    (8, 5),
    (5, 3),
    (4, 6),
    (5, 4),
    (4, 8),
    (7, 3),
];
const LEMKE1_EDGES: [(usize, usize); 12] = [
    (8, 6),
    (6, 3),
    (3, 1),
    (1, 2),
    (2, 4),
    (7, 8),
    (8, 5),
    (5, 3),
    (5, 4),
    (4, 8),
    (7, 3),
    (3, 2),
];
const LEMKE2_EDGES: [(usize, usize); 14] = [
    (8, 5),
    (5, 3),
    (3, 1),
    (1, 2),
    (2, 4),
    (4, 7),
    (7, 8),
    (6, 7),
    (4, 5),
    (5, 6),
    (6, 8),
    (8, 4),
    (7, 3),
    (3, 6),
];

/// Looks up a catalog graph by its CLI name, e.g. `lemke`, `cycle:7`,
/// `complete-bipartite:4,4`.
pub fn catalog_graph(name: &str) -> Result<Graph, GraphError> {
    build_catalog(name.parse()?)
}

pub fn build_catalog(name: CatalogName) -> Result<Graph, GraphError> {
    let label = name.to_string();
    let edges: Vec<(usize, usize)> = match name {
        CatalogName::Lemke => return Graph::from_edges(label, 8, &LEMKE_EDGES),
        CatalogName::Lemke1 => return Graph::from_edges(label, 8, &LEMKE1_EDGES),
        CatalogName::Lemke2 => return Graph::from_edges(label, 8, &LEMKE2_EDGES),
        CatalogName::Path(n) => (1..n).map(|i| (i, i + 1)).collect(),
        CatalogName::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::UnknownCatalog(label));
            }
            (1..=n).map(|i| (i, i % n + 1)).collect()
        }
        CatalogName::Complete(n) => (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect(),
        CatalogName::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return Err(GraphError::UnknownCatalog(label));
            }
            (1..=a).flat_map(|i| (a + 1..=a + b).map(move |j| (i, j))).collect()
        }
    };
    let n = match name {
        CatalogName::Path(n) | CatalogName::Cycle(n) | CatalogName::Complete(n) => n,
        CatalogName::CompleteBipartite(a, b) => a + b,
        _ => unreachable!(),
    };
    Graph::from_edges(label, n, &edges)
}
