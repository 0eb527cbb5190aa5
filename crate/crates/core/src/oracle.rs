//! Exhaustive pebbling oracle for small graphs.
//!
//! Solvability is decided by a memoized depth-first search over
//! configurations. The pebbling number and 2-pebbling tables come from an
//! ascending sweep over configuration sizes: unsolvable configurations form a
//! down-closed set, so the candidates of size `k + 1` are one-pebble
//! extensions of the unsolvable configurations of size `k`, and a candidate
//! with a solvable child is discarded without searching.

use std::collections::{HashMap, HashSet};

use crate::error::OracleError;
use crate::graph::{metric, Graph};
use crate::orbits::vertex_orbits;
use crate::profile::PebblingProfile;

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Pebble counts per 0-based vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: Vec<u32>,
}

impl Configuration {
    pub fn new(counts: Vec<u32>) -> Self {
        Configuration { counts }
    }

    pub fn zeros(n: usize) -> Self {
        Configuration { counts: vec![0; n] }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    fn key(&self) -> Key {
        self.counts.iter().map(|&c| c as u16).collect()
    }
}

impl From<Vec<u32>> for Configuration {
    fn from(counts: Vec<u32>) -> Self {
        Configuration::new(counts)
    }
}

type Key = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Hard cap on explored search states per oracle call.
    pub budget: u64,
    /// Largest graph the sweep operations accept.
    pub vertex_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_BUDGET,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Memoized solvability search for one `(graph, root, target)`.
///
/// The memo is kept across queries, so sweeping many related configurations
/// through one searcher reuses all shared sub-states.
pub struct Searcher<'g> {
    graph: &'g Graph,
    root: usize,
    target: u32,
    // weight[v] = 2^(diam - d(v, root)); total weight < target * 2^diam
    // certifies unsolvability since no move increases it.
    weight: Vec<u64>,
    threshold: u64,
    // Neighbor lists ordered by distance to the root, nearest first.
    moves: Vec<Vec<usize>>,
    memo: HashMap<Key, bool>,
    explored: u64,
    budget: u64,
}

impl<'g> Searcher<'g> {
    pub fn new(graph: &'g Graph, root: usize, target: u32, budget: u64) -> Self {
        let m = metric(graph).expect("graphs are connected");
        let diam = m.diameter();
        let weight = (0..graph.vertex_count())
            .map(|v| 1u64 << (diam - m.distance(v, root)))
            .collect();
        let moves = (0..graph.vertex_count())
            .map(|v| {
                let mut ns = graph.neighbors(v).to_vec();
                ns.sort_by_key(|&w| (m.distance(w, root), w));
                ns
            })
            .collect();
        Searcher {
            graph,
            root,
            target,
            weight,
            threshold: (target as u64) << diam,
            moves,
            memo: HashMap::new(),
            explored: 0,
            budget,
        }
    }

    pub fn explored(&self) -> u64 {
        self.explored
    }

    pub fn is_solvable(&mut self, c: &Configuration) -> Result<bool, OracleError> {
        let mut key = c.key();
        self.solve(&mut key)
    }

    fn potential(&self, key: &[u16]) -> u64 {
        key.iter().zip(&self.weight).map(|(&c, &w)| c as u64 * w).sum()
    }

    fn solve(&mut self, key: &mut Key) -> Result<bool, OracleError> {
        if key[self.root] as u32 >= self.target {
            return Ok(true);
        }
        if self.potential(key) < self.threshold {
            return Ok(false);
        }
        if let Some(&known) = self.memo.get(key.as_slice()) {
            return Ok(known);
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        let n = self.graph.vertex_count();
        let mut found = false;
        'outer: for v in 0..n {
            // Pebbles never need to leave the root.
            if v == self.root || key[v] < 2 {
                continue;
            }
            for k in 0..self.moves[v].len() {
                let w = self.moves[v][k];
                key[v] -= 2;
                key[w] += 1;
                let ok = self.solve(key);
                key[v] += 2;
                key[w] -= 1;
                if ok? {
                    found = true;
                    break 'outer;
                }
            }
        }
        self.memo.insert(key.clone(), found);
        Ok(found)
    }
}

/// Whether `target` pebbles can be moved onto `root` (0-based).
pub fn is_solvable(
    g: &Graph,
    c: &Configuration,
    root: usize,
    target: u32,
    options: &OracleOptions,
) -> Result<bool, OracleError> {
    if target == 0 {
        return Err(OracleError::Invalid("target must be positive".into()));
    }
    if root >= g.vertex_count() || c.len() != g.vertex_count() {
        return Err(OracleError::Invalid(format!(
            "root {} / configuration length {} do not fit a graph on {} vertices",
            root + 1,
            c.len(),
            g.vertex_count()
        )));
    }
    Searcher::new(g, root, target, options.budget).is_solvable(c)
}

fn check_cap(g: &Graph, options: &OracleOptions) -> Result<(), OracleError> {
    if g.vertex_count() > options.vertex_cap {
        return Err(OracleError::TooLarge {
            name: g.name().to_string(),
            n: g.vertex_count(),
            cap: options.vertex_cap,
        });
    }
    Ok(())
}

/// Result of an ascending sweep for one root.
#[derive(Debug, Clone)]
struct Sweep {
    /// Unsolvable configurations grouped by size, each level sorted.
    levels: Vec<Vec<Key>>,
    explored: u64,
}

impl Sweep {
    fn max_size(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }
}

/// Which configurations a sweep ranges over.
#[derive(Debug, Clone, Copy)]
enum Domain {
    All,
    /// Support size exactly `s`.
    Support(usize),
}

fn sweep(
    g: &Graph,
    root: usize,
    target: u32,
    domain: Domain,
    max_size: Option<usize>,
    budget: u64,
    stop_after: Option<usize>,
) -> Result<Sweep, OracleError> {
    let n = g.vertex_count();
    let mut searcher = Searcher::new(g, root, target, budget);
    let (start_size, start): (usize, Vec<Key>) = match domain {
        Domain::All => (0, vec![vec![0; n]]),
        Domain::Support(s) => (s, support_sets(n, s)),
    };
    let mut levels: Vec<Vec<Key>> = vec![Vec::new(); start_size];
    let mut current: Vec<Key> = Vec::new();
    for key in start {
        if !searcher.solve(&mut key.clone())? {
            current.push(key);
        }
    }
    current.sort();
    let mut size = start_size;
    let mut total = current.len();
    loop {
        let done =
            current.is_empty() || max_size.is_some_and(|m| size >= m) || stop_after.is_some_and(|limit| total >= limit);
        let known: HashSet<&Key> = current.iter().collect();
        let mut next: Vec<Key> = Vec::new();
        if !done {
            let mut tried: HashSet<Key> = HashSet::new();
            for base in &current {
                for v in 0..n {
                    if matches!(domain, Domain::Support(_)) && base[v] == 0 {
                        continue;
                    }
                    let mut cand = base.clone();
                    cand[v] += 1;
                    if !tried.insert(cand.clone()) {
                        continue;
                    }
                    // Every child inside the domain must itself be unsolvable.
                    let dominated_ok = (0..n).all(|u| {
                        let floor = if matches!(domain, Domain::Support(_)) { 2 } else { 1 };
                        if cand[u] < floor {
                            return true;
                        }
                        let mut child = cand.clone();
                        child[u] -= 1;
                        known.contains(&child)
                    });
                    if dominated_ok && !searcher.solve(&mut cand.clone())? {
                        next.push(cand);
                    }
                }
            }
            next.sort();
        }
        drop(known);
        levels.push(std::mem::take(&mut current));
        if done || next.is_empty() {
            break;
        }
        total += next.len();
        current = next;
        size += 1;
    }
    Ok(Sweep {
        levels,
        explored: searcher.explored(),
    })
}

/// All 0/1 configurations with exactly `s` ones, in lexicographic order.
fn support_sets(n: usize, s: usize) -> Vec<Key> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Key>) {
        let n = cur.len();
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if n - i < left {
            return;
        }
        cur[i] = 1;
        rec(i + 1, left - 1, cur, out);
        cur[i] = 0;
        rec(i + 1, left, cur, out);
    }
    rec(0, s, &mut cur, &mut out);
    out.sort();
    out
}

/// Largest unsolvable configuration for one root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub root: usize,
    pub configuration: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebblingNumber {
    pub pi: u64,
    pub witness: Witness,
    pub explored: u64,
}

fn key_to_config(k: &Key) -> Configuration {
    Configuration::new(k.iter().map(|&c| c as u32).collect())
}

/// `pi(g)`: one more than the largest unsolvable configuration over all roots.
pub fn pebbling_number(g: &Graph, options: &OracleOptions) -> Result<PebblingNumber, OracleError> {
    check_cap(g, options)?;
    let orbits = vertex_orbits(g);
    let mut best: Option<PebblingNumber> = None;
    let mut explored = 0;
    for root in orbits.representatives() {
        let remaining = options.budget.saturating_sub(explored);
        let sw = sweep(g, root, 1, Domain::All, None, remaining, None)?;
        explored += sw.explored;
        let size = sw.max_size().expect("the empty configuration is unsolvable");
        let witness = sw.levels[size].last().cloned().expect("nonempty level");
        if best.as_ref().is_none_or(|b| size as u64 + 1 > b.pi) {
            best = Some(PebblingNumber {
                pi: size as u64 + 1,
                witness: Witness {
                    root,
                    configuration: key_to_config(&witness),
                },
                explored: 0,
            });
        }
    }
    let mut result = best.expect("at least one root");
    result.explored = explored;
    Ok(result)
}

/// `pi_2(g, s)` for `s = 1..=n` (entry `s - 1`): the fewest pebbles that
/// guarantee two pebbles at any root from any configuration of support `s`.
pub fn two_pebbling_table(g: &Graph, options: &OracleOptions) -> Result<Vec<u64>, OracleError> {
    check_cap(g, options)?;
    let n = g.vertex_count();
    let roots = vertex_orbits(g).representatives();
    let mut explored = 0u64;
    let mut table = Vec::with_capacity(n);
    for s in 1..=n {
        let mut value = s as u64;
        for &root in &roots {
            let remaining = options.budget.saturating_sub(explored);
            let sw = sweep(g, root, 2, Domain::Support(s), None, remaining, None)?;
            explored += sw.explored;
            if let Some(m) = sw.max_size() {
                value = value.max(m as u64 + 1);
            }
        }
        table.push(value);
    }
    Ok(table)
}

/// Full profile: `pi`, the 2-pebbling table and its monotone envelope.
pub fn two_pebbling_tables(g: &Graph, options: &OracleOptions) -> Result<PebblingProfile, OracleError> {
    let pi = pebbling_number(g, options)?.pi;
    let table = two_pebbling_table(g, options)?;
    Ok(PebblingProfile::from_table(g.name(), pi, table))
}

/// Up to `limit` configurations of size at most `max_size` that cannot move
/// a pebble to `root`, ordered by size then lexicographically.
pub fn enumerate_unsolvable(
    g: &Graph,
    root: usize,
    max_size: usize,
    limit: usize,
    options: &OracleOptions,
) -> Result<Vec<Configuration>, OracleError> {
    check_cap(g, options)?;
    if limit == 0 {
        return Ok(Vec::new());
    }
    let sw = sweep(g, root, 1, Domain::All, Some(max_size), options.budget, Some(limit))?;
    Ok(sw.levels.iter().flatten().take(limit).map(key_to_config).collect())
}

/// Exact `pi` restricted to a single root.
pub fn rooted_pebbling_number(g: &Graph, root: usize, options: &OracleOptions) -> Result<u64, OracleError> {
    check_cap(g, options)?;
    let sw = sweep(g, root, 1, Domain::All, None, options.budget, None)?;
    Ok(sw.max_size().expect("nonempty") as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog_graph;

    fn opts() -> OracleOptions {
        OracleOptions::default()
    }

    #[test]
    fn trivial_solvability() {
        let g = catalog_graph("path:3").unwrap();
        let o = opts();
        assert!(is_solvable(&g, &vec![1, 0, 0].into(), 0, 1, &o).unwrap());
        assert!(is_solvable(&g, &vec![0, 2, 0].into(), 0, 1, &o).unwrap());
        assert!(!is_solvable(&g, &vec![0, 1, 0].into(), 0, 1, &o).unwrap());
        assert!(!is_solvable(&g, &vec![0, 0, 3].into(), 0, 1, &o).unwrap());
        assert!(is_solvable(&g, &vec![0, 0, 4].into(), 0, 1, &o).unwrap());
        assert!(is_solvable(&g, &vec![0, 1, 2].into(), 0, 1, &o).unwrap());
        assert!(is_solvable(&g, &vec![0, 0, 8].into(), 0, 2, &o).unwrap());
        assert!(!is_solvable(&g, &vec![0, 0, 7].into(), 0, 2, &o).unwrap());
    }

    #[test]
    fn invalid_inputs() {
        let g = catalog_graph("path:3").unwrap();
        assert!(is_solvable(&g, &vec![1, 0, 0].into(), 0, 0, &opts()).is_err());
        assert!(is_solvable(&g, &vec![1, 0].into(), 0, 1, &opts()).is_err());
        assert!(is_solvable(&g, &vec![1, 0, 0].into(), 3, 1, &opts()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let g = catalog_graph("cycle:8").unwrap();
        let tiny = OracleOptions {
            budget: 10,
            vertex_cap: 12,
        };
        assert!(matches!(
            pebbling_number(&g, &tiny),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let g = catalog_graph("cycle:8").unwrap();
        let small = OracleOptions {
            budget: 10,
            vertex_cap: 7,
        };
        assert!(matches!(pebbling_number(&g, &small), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn small_pebbling_numbers() {
        let cases = [
            ("path:2", 2),
            ("path:3", 4),
            ("path:4", 8),
            ("complete:3", 3),
            ("cycle:4", 4),
            ("cycle:5", 5),
        ];
        for (name, pi) in cases {
            assert_eq!(
                pebbling_number(&catalog_graph(name).unwrap(), &opts()).unwrap().pi,
                pi,
                "{name}"
            );
        }
    }

    #[test]
    fn witness_is_unsolvable_and_maximal() {
        let g = catalog_graph("path:4").unwrap();
        let res = pebbling_number(&g, &opts()).unwrap();
        assert_eq!(res.witness.configuration.size(), 7);
        assert!(!is_solvable(&g, &res.witness.configuration, res.witness.root, 1, &opts()).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let p3 = catalog_graph("path:3").unwrap();
        let list = enumerate_unsolvable(&p3, 0, 3, 1000, &opts()).unwrap();
        assert!(list.contains(&vec![0, 0, 3].into()));
        assert!(list.iter().all(|c| c.size() <= 3));
        let k3 = catalog_graph("complete:3").unwrap();
        assert!(enumerate_unsolvable(&k3, 0, 1, 10, &opts())
            .unwrap()
            .contains(&vec![0, 1, 0].into()));
        assert_eq!(
            enumerate_unsolvable(&k3, 0, 0, 10, &opts()).unwrap(),
            vec![Configuration::zeros(3)]
        );
        assert_eq!(enumerate_unsolvable(&k3, 0, 5, 2, &opts()).unwrap().len(), 2);
    }

    #[test]
    fn k2_two_pebbling_table() {
        let g = catalog_graph("path:2").unwrap();
        assert_eq!(two_pebbling_table(&g, &opts()).unwrap(), vec![4, 3]);
    }

    #[test]
    fn support_sets_are_binomial() {
        assert_eq!(support_sets(5, 2).len(), 10);
        assert_eq!(support_sets(8, 8), vec![vec![1u16; 8]]);
    }
}
