mod common;

use common::cbc;
use pebblebound::harness::ProfileResolver;
use pebblebound::model::{assemble_model, check_feasibility, ProductInstance};
use pebblebound::search::{candidate_roots, run_algorithm1, run_algorithm1_with_roots, SearchOptions};
use pebblebound::solver::{solve, SolveRequest, SolveStatus};
use proptest::prelude::*;

fn instance(g: &str, h: &str) -> ProductInstance {
    ProfileResolver::default().instance(g, h).unwrap()
}

const SMALL: [(&str, &str); 4] = [
    ("path:3", "path:2"),
    ("complete:3", "path:3"),
    ("cycle:4", "path:2"),
    ("lemke", "path:2"),
];

#[test]
fn incumbents_verify_and_bounds_dominate() {
    let Some(solver) = cbc() else { return };
    for (g, h) in SMALL {
        let inst = instance(g, h);
        let model = assemble_model(&inst, &Default::default());
        for gap in [0.2, 0.05, 0.0] {
            let r = solve(&SolveRequest::new(&model, solver, gap)).unwrap();
            let n = r.incumbent.unwrap();
            assert!(check_feasibility(&model, r.assignment.as_ref().unwrap())
                .unwrap()
                .is_empty());
            let u = r.dual_bound.unwrap();
            assert!(u + 1e-6 >= n as f64, "{g}x{h}: u {u} < n {n}");
            assert!((u + 1e-6).floor() as i64 >= n);
            assert!(r.integral_bound().unwrap() >= n);
            if gap == 0.0 {
                assert_eq!(r.status, SolveStatus::Optimal);
            }
        }
    }
}

#[test]
fn exact_solves_repeat() {
    let Some(solver) = cbc() else { return };
    for (g, h) in SMALL {
        let model = assemble_model(&instance(g, h), &Default::default());
        let a = solve(&SolveRequest::new(&model, solver, 0.0)).unwrap();
        let b = solve(&SolveRequest::new(&model, solver, 0.0)).unwrap();
        assert_eq!(a.incumbent, b.incumbent, "{g}x{h}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn bound_ignores_root_order_and_extra_gaps(
        pick in 0..SMALL.len(),
        order in Just(()).prop_perturb(|_, mut rng| rng.next_u64()),
        extra in proptest::collection::vec(0.01f64..0.5, 0..3),
    ) {
        let Some(solver) = cbc() else { return Ok(()) };
        let (g, h) = SMALL[pick];
        let inst = instance(g, h);
        let opts = SearchOptions::new(solver);
        let base = run_algorithm1(&inst, &Default::default(), &opts).unwrap();

        let mut roots = candidate_roots(&inst);
        let tail = &mut roots[1..];
        for i in (1..tail.len()).rev() {
            tail.swap(i, (order as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let shuffled = run_algorithm1_with_roots(&inst, &Default::default(), &opts, &roots).unwrap();
        prop_assert_eq!(shuffled.final_bound, base.final_bound);

        let mut schedule = extra.clone();
        schedule.extend([0.1, 0.05, 0.0]);
        schedule.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let longer = SearchOptions { schedule, ..opts };
        prop_assert_eq!(run_algorithm1(&inst, &Default::default(), &longer).unwrap().final_bound, base.final_bound);
    }
}
