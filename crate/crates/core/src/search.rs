//! Bounding π(G□H) over every root: a gap-0 seed at (1,1), then a decreasing
//! gap schedule over the surviving orbit representatives.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{SearchError, SolverError};
use crate::model::{assemble_model, ConstraintEnumerationPolicy, ProductInstance};
use crate::orbits::vertex_orbits;
use crate::solver::{solve, SolveRequest, SolveStatus, SolverKind};

pub const DEFAULT_SCHEDULE: [f64; 3] = [0.1, 0.05, 0.0];
/// Per-solve cap for gapped phases; exact phases run uncapped by default.
pub const DEFAULT_GAPPED_LIMIT: Duration = Duration::from_secs(600);

/// One representative root per (orbit of G) × (orbit of H) class, (1,1) first.
pub fn candidate_roots(inst: &ProductInstance) -> Vec<(usize, usize)> {
    let og = vertex_orbits(&inst.g.graph);
    let oh = vertex_orbits(&inst.h.graph);
    let mut roots: Vec<(usize, usize)> = Vec::new();
    for &i in &og.representatives() {
        for &j in &oh.representatives() {
            roots.push((i, j));
        }
    }
    roots.sort_unstable();
    // 0 is the smallest vertex, so it represents its own orbit
    debug_assert_eq!(roots.first(), Some(&(0, 0)));
    roots
}

/// Representative of every root not in the candidate list.
pub fn orbit_pruned_roots(inst: &ProductInstance) -> Vec<((usize, usize), (usize, usize))> {
    let og = vertex_orbits(&inst.g.graph);
    let oh = vertex_orbits(&inst.h.graph);
    let mut out = Vec::new();
    for i in 0..inst.g.size() {
        for j in 0..inst.h.size() {
            let rep = (og.representative_of(i), oh.representative_of(j));
            if rep != (i, j) {
                out.push(((i, j), rep));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub solver: SolverKind,
    pub schedule: Vec<f64>,
    /// Concurrent solves within one phase.
    pub jobs: usize,
    pub gapped_time_limit: Option<Duration>,
    pub exact_time_limit: Option<Duration>,
    /// Wall-clock budget for the whole search.
    pub budget: Option<Duration>,
    pub workdir: Option<PathBuf>,
    pub keep_files: bool,
}

impl SearchOptions {
    pub fn new(solver: SolverKind) -> Self {
        SearchOptions {
            solver,
            schedule: DEFAULT_SCHEDULE.to_vec(),
            jobs: 1,
            gapped_time_limit: Some(DEFAULT_GAPPED_LIMIT),
            exact_time_limit: None,
            budget: None,
            workdir: None,
            keep_files: false,
        }
    }

    /// The schedule actually run: always ends with an exact phase.
    pub fn phases(&self) -> Vec<f64> {
        let mut p = self.schedule.clone();
        if p.last() != Some(&0.0) {
            p.push(0.0);
        }
        p
    }
}

/// One solver call in the search log (roots 1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSolve {
    pub root: (usize, usize),
    pub gap: f64,
    pub status: SolveStatus,
    pub n: Option<i64>,
    pub u: Option<i64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub instance: String,
    pub solver: SolverKind,
    pub schedule: Vec<f64>,
    /// Largest verified incumbent over all solves.
    pub incumbent: i64,
    /// Root (1-based) that produced the incumbent.
    pub incumbent_root: (usize, usize),
    /// `1 + incumbent` when complete; otherwise also covers the best known
    /// bound of every unresolved root.
    pub final_bound: i64,
    pub complete: bool,
    /// Unresolved roots (1-based) and their last dual bound, if any.
    pub unresolved: Vec<((usize, usize), Option<i64>)>,
    pub candidates: Vec<(usize, usize)>,
    /// Roots (1-based) skipped by symmetry, with their representative.
    pub orbit_pruned: Vec<((usize, usize), (usize, usize))>,
    pub log: Vec<RootSolve>,
    pub seconds: f64,
}

impl SearchReport {
    /// Latest (n, u) per root, 1-based.
    pub fn per_root_bounds(&self) -> BTreeMap<(usize, usize), (Option<i64>, Option<i64>)> {
        let mut out = BTreeMap::new();
        for s in &self.log {
            out.insert(s.root, (s.n, s.u));
        }
        out
    }
}

fn one_based(r: (usize, usize)) -> (usize, usize) {
    (r.0 + 1, r.1 + 1)
}

struct Shared {
    incumbent: i64,
    incumbent_root: (usize, usize),
    bounds: BTreeMap<(usize, usize), Option<i64>>,
    log: Vec<RootSolve>,
    error: Option<SearchError>,
}

struct Runner<'a> {
    inst: &'a ProductInstance,
    policy: &'a ConstraintEnumerationPolicy,
    opts: &'a SearchOptions,
    deadline: Option<Instant>,
}

impl Runner<'_> {
    fn time_limit(&self, gap: f64) -> Result<Option<Duration>, ()> {
        let base = if gap > 0.0 {
            self.opts.gapped_time_limit
        } else {
            self.opts.exact_time_limit
        };
        match self.deadline {
            None => Ok(base),
            Some(d) => {
                let left = d.saturating_duration_since(Instant::now());
                if left.is_zero() {
                    Err(())
                } else {
                    Ok(Some(base.map_or(left, |b| b.min(left))))
                }
            }
        }
    }

    /// Solves one root; `None` when the budget is spent.
    fn solve_root(&self, root: (usize, usize), gap: f64) -> Result<Option<RootSolve>, SearchError> {
        let Ok(limit) = self.time_limit(gap) else {
            return Ok(None);
        };
        let inst = self.inst.with_root(root)?;
        let model = assemble_model(&inst, self.policy);
        let mut req = SolveRequest::new(&model, self.opts.solver, gap);
        req.time_limit = limit;
        req.workdir = self.opts.workdir.clone();
        req.keep_files = self.opts.keep_files;
        let wrap = |source| SearchError::Solve { root, source };
        let r = solve(&req).map_err(wrap)?;
        if r.status == SolveStatus::Infeasible {
            // the empty configuration is always feasible
            return Err(wrap(SolverError::Integrity {
                solver: r.solver.id().into(),
                violated: vec!["model reported infeasible".into()],
            }));
        }
        let s = RootSolve {
            root: one_based(root),
            gap,
            status: r.status,
            n: r.incumbent,
            u: r.integral_bound(),
            seconds: r.seconds,
        };
        log::info!(
            "{} root ({},{}) gap {} -> n {:?} u {:?} [{:?}] {:.1}s",
            model.name,
            root.0 + 1,
            root.1 + 1,
            gap,
            s.n,
            s.u,
            s.status,
            s.seconds
        );
        Ok(Some(s))
    }

    fn record(shared: &Mutex<Shared>, root: (usize, usize), s: RootSolve) {
        let mut st = shared.lock().unwrap();
        if let Some(n) = s.n {
            if n > st.incumbent {
                st.incumbent = n;
                st.incumbent_root = root;
            }
        }
        st.bounds.insert(root, s.u);
        st.log.push(s);
    }

    /// Solves `roots` at `gap` on up to `jobs` threads; roots whose stored
    /// bound has already dropped to the incumbent are skipped.
    fn phase(&self, roots: &[(usize, usize)], gap: f64, shared: &Mutex<Shared>) -> bool {
        let next = AtomicUsize::new(0);
        let out_of_budget = AtomicUsize::new(0);
        let worker = || loop {
            let k = next.fetch_add(1, Ordering::SeqCst);
            let Some(&root) = roots.get(k) else { break };
            {
                let st = shared.lock().unwrap();
                if st.error.is_some() {
                    break;
                }
                if let Some(Some(u)) = st.bounds.get(&root) {
                    if *u <= st.incumbent {
                        continue;
                    }
                }
            }
            match self.solve_root(root, gap) {
                Ok(Some(s)) => Self::record(shared, root, s),
                Ok(None) => {
                    out_of_budget.fetch_add(1, Ordering::SeqCst);
                }
                Err(e) => {
                    shared.lock().unwrap().error.get_or_insert(e);
                    break;
                }
            }
        };
        let jobs = self.opts.jobs.max(1).min(roots.len().max(1));
        if jobs == 1 {
            worker();
        } else {
            std::thread::scope(|s| {
                for _ in 0..jobs {
                    s.spawn(worker);
                }
            });
        }
        out_of_budget.load(Ordering::SeqCst) == 0
    }
}

fn check_schedule(schedule: &[f64]) -> Result<(), SearchError> {
    for &g in schedule {
        if !(0.0..=1.0).contains(&g) || g.is_nan() {
            return Err(SolverError::BadGap(g).into());
        }
    }
    Ok(())
}

/// Runs the root search with the given candidate ordering (which must start
/// with (0,0)).
pub fn run_algorithm1_with_roots(
    inst: &ProductInstance,
    policy: &ConstraintEnumerationPolicy,
    opts: &SearchOptions,
    candidates: &[(usize, usize)],
) -> Result<SearchReport, SearchError> {
    check_schedule(&opts.schedule)?;
    let start = Instant::now();
    let runner = Runner {
        inst,
        policy,
        opts,
        deadline: opts.budget.map(|b| start + b),
    };
    let seed = (0, 0);
    let shared = Mutex::new(Shared {
        incumbent: 0,
        incumbent_root: seed,
        bounds: BTreeMap::new(),
        log: Vec::new(),
        error: None,
    });
    let mut in_budget = runner.phase(&[seed], 0.0, &shared);
    let mut surviving: Vec<(usize, usize)> = candidates.iter().copied().filter(|&r| r != seed).collect();
    let survives = |st: &Shared, r: &(usize, usize)| match st.bounds.get(r) {
        None | Some(None) => true,
        Some(Some(u)) => *u > st.incumbent,
    };
    {
        let st = shared.lock().unwrap();
        if survives(&st, &seed) {
            surviving.insert(0, seed);
        }
    }
    for gap in opts.phases() {
        if surviving.is_empty() || !in_budget {
            break;
        }
        in_budget &= runner.phase(&surviving, gap, &shared);
        let mut st = shared.lock().unwrap();
        if let Some(e) = st.error.take() {
            return Err(e);
        }
        surviving.retain(|r| survives(&st, r));
    }
    let st = shared.into_inner().unwrap();
    if let Some(e) = st.error {
        return Err(e);
    }
    let unresolved: Vec<((usize, usize), Option<i64>)> = surviving
        .iter()
        .map(|r| (one_based(*r), st.bounds.get(r).copied().flatten()))
        .collect();
    let worst_open = unresolved.iter().filter_map(|(_, u)| *u).max();
    let complete = unresolved.is_empty();
    Ok(SearchReport {
        instance: inst.name(),
        solver: opts.solver,
        schedule: opts.phases(),
        incumbent: st.incumbent,
        incumbent_root: one_based(st.incumbent_root),
        final_bound: 1 + worst_open.map_or(st.incumbent, |u| u.max(st.incumbent)),
        complete,
        unresolved,
        candidates: candidates.iter().copied().map(one_based).collect(),
        orbit_pruned: orbit_pruned_roots(inst)
            .into_iter()
            .map(|(r, rep)| (one_based(r), one_based(rep)))
            .collect(),
        log: st.log,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_algorithm1(
    inst: &ProductInstance,
    policy: &ConstraintEnumerationPolicy,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    run_algorithm1_with_roots(inst, policy, opts, &candidate_roots(inst))
}

/// Gap-0 solve of every root, no pruning: `1 + max n` and the per-root log.
pub fn exhaustive_baseline(
    inst: &ProductInstance,
    policy: &ConstraintEnumerationPolicy,
    opts: &SearchOptions,
) -> Result<(i64, Vec<RootSolve>), SearchError> {
    let runner = Runner {
        inst,
        policy,
        opts,
        deadline: None,
    };
    let mut best = 0;
    let mut log = Vec::new();
    for i in 0..inst.g.size() {
        for j in 0..inst.h.size() {
            let s = runner.solve_root((i, j), 0.0)?.expect("no budget");
            best = best.max(s.u.or(s.n).unwrap_or(0));
            log.push(s);
        }
    }
    Ok((best + 1, log))
}

#[cfg(test)]
mod tests;
