use super::*;
use crate::graph::catalog_graph;
use crate::model::Factor;
use crate::oracle::{two_pebbling_tables, OracleOptions};
use crate::solver::probe_backends;

fn factor(name: &str) -> Factor {
    let g = catalog_graph(name).unwrap();
    let p = two_pebbling_tables(&g, &OracleOptions::default()).unwrap();
    Factor::new(g, p).unwrap()
}

fn instance(g: &str, h: &str) -> ProductInstance {
    ProductInstance::new(factor(g), factor(h), (0, 0)).unwrap()
}

fn cbc() -> Option<SearchOptions> {
    probe_backends()
        .contains(&SolverKind::Cbc)
        .then(|| SearchOptions::new(SolverKind::Cbc))
}

#[test]
fn candidates_for_symmetric_factors() {
    assert_eq!(candidate_roots(&instance("complete:4", "complete:3")), vec![(0, 0)]);
    let p = candidate_roots(&instance("path:3", "path:3"));
    assert_eq!(p.len(), 4);
    assert_eq!(p[0], (0, 0));
    let pruned = orbit_pruned_roots(&instance("path:3", "path:3"));
    assert_eq!(pruned.len(), 5);
    assert!(pruned.contains(&((2, 2), (0, 0))));
}

#[test]
fn lemke_candidates_follow_its_orbits() {
    let inst = instance("lemke", "complete:3");
    let orbits = vertex_orbits(&inst.g.graph).len();
    assert_eq!(candidate_roots(&inst).len(), orbits);
}

#[test]
fn phases_end_exact() {
    let mut o = SearchOptions::new(SolverKind::Cbc);
    assert_eq!(o.phases(), vec![0.1, 0.05, 0.0]);
    o.schedule = vec![0.2];
    assert_eq!(o.phases(), vec![0.2, 0.0]);
}

#[test]
fn bad_schedule_is_rejected() {
    let mut o = SearchOptions::new(SolverKind::Cbc);
    o.schedule = vec![0.1, 2.0];
    let err = run_algorithm1(&instance("path:2", "path:2"), &Default::default(), &o).unwrap_err();
    assert!(matches!(err, SearchError::Solver(SolverError::BadGap(_))));
}

#[test]
fn algorithm1_matches_exhaustive_baseline() {
    let Some(opts) = cbc() else { return };
    for (g, h) in [("path:3", "path:2"), ("complete:3", "path:2"), ("cycle:4", "path:2")] {
        let inst = instance(g, h);
        let report = run_algorithm1(&inst, &Default::default(), &opts).unwrap();
        let (baseline, _) = exhaustive_baseline(&inst, &Default::default(), &opts).unwrap();
        assert!(report.complete);
        assert_eq!(report.final_bound, baseline, "{g}x{h}");
        assert!(report.log.iter().all(|s| s.n.unwrap() < report.final_bound));
    }
}

#[test]
fn bound_is_order_and_schedule_invariant() {
    let Some(mut opts) = cbc() else { return };
    let inst = instance("path:3", "path:3");
    let base = run_algorithm1(&inst, &Default::default(), &opts).unwrap();
    let mut roots = candidate_roots(&inst);
    roots[1..].reverse();
    let reordered = run_algorithm1_with_roots(&inst, &Default::default(), &opts, &roots).unwrap();
    assert_eq!(base.final_bound, reordered.final_bound);
    opts.schedule = vec![0.3, 0.1, 0.05, 0.02, 0.0];
    opts.jobs = 2;
    let longer = run_algorithm1(&inst, &Default::default(), &opts).unwrap();
    assert_eq!(base.final_bound, longer.final_bound);
}

#[test]
fn pruned_roots_match_their_representative() {
    let Some(opts) = cbc() else { return };
    let inst = instance("path:3", "path:2");
    let (_, log) = exhaustive_baseline(&inst, &Default::default(), &opts).unwrap();
    let n_at = |r: (usize, usize)| log.iter().find(|s| s.root == one_based(r)).unwrap().n;
    for (root, rep) in orbit_pruned_roots(&inst) {
        assert_eq!(n_at(root), n_at(rep), "{root:?} vs {rep:?}");
    }
}

#[test]
fn spent_budget_leaves_search_incomplete() {
    let Some(mut opts) = cbc() else { return };
    opts.budget = Some(Duration::ZERO);
    let r = run_algorithm1(&instance("path:3", "path:3"), &Default::default(), &opts).unwrap();
    assert!(!r.complete);
    assert!(r.log.is_empty());
    assert_eq!(r.unresolved.len(), 4);
}

#[test]
fn report_serializes() {
    let r = SearchReport {
        instance: "axb".into(),
        solver: SolverKind::Cbc,
        schedule: vec![0.0],
        incumbent: 7,
        incumbent_root: (1, 1),
        final_bound: 8,
        complete: true,
        unresolved: vec![],
        candidates: vec![(1, 1)],
        orbit_pruned: vec![((2, 1), (1, 1))],
        log: vec![RootSolve {
            root: (1, 1),
            gap: 0.0,
            status: SolveStatus::Optimal,
            n: Some(7),
            u: Some(7),
            seconds: 0.1,
        }],
        seconds: 0.1,
    };
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<SearchReport>(&text).unwrap(), r);
    assert_eq!(r.per_root_bounds()[&(1, 1)], (Some(7), Some(7)));
}
