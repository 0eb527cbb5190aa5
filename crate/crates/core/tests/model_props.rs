mod common;

use common::{arb_graph, cbc, naive_solvable};
use pebblebound::model::{
    assemble_model, check_feasibility, derive_assignment, ConstraintEnumerationPolicy, Factor, ProductInstance,
};
use pebblebound::oracle::{is_solvable, two_pebbling_tables};
use pebblebound::solver::{solve, write_lp, SolveRequest, SolveStatus};
use pebblebound::{cartesian_product, catalog_graph, Configuration, Graph, OracleOptions};
use proptest::prelude::*;

fn factor(g: Graph) -> Factor {
    let p = two_pebbling_tables(&g, &OracleOptions::default()).unwrap();
    Factor::new(g, p).unwrap()
}

fn catalog_instance(g: &str, h: &str, root: (usize, usize)) -> ProductInstance {
    ProductInstance::new(
        factor(catalog_graph(g).unwrap()),
        factor(catalog_graph(h).unwrap()),
        root,
    )
    .unwrap()
}

fn arb_instance() -> impl Strategy<Value = ProductInstance> {
    (arb_graph(3), arb_graph(3))
        .prop_flat_map(|(g, h)| {
            let (ng, nh) = (g.vertex_count(), h.vertex_count());
            (Just(g), Just(h), 0..ng, 0..nh)
        })
        .prop_map(|(g, h, rg, rh)| ProductInstance::new(factor(g), factor(h), (rg, rh)).unwrap())
}

fn optimum(inst: &ProductInstance, policy: &ConstraintEnumerationPolicy) -> i64 {
    let model = assemble_model(inst, policy);
    let r = solve(&SolveRequest::new(&model, cbc().unwrap(), 0.0)).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    r.incumbent.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unsolvable_configurations_satisfy_the_model(
        (inst, picks) in arb_instance().prop_flat_map(|inst| {
            let n = inst.vertex_count();
            (Just(inst), proptest::collection::vec(0..n, 0..60))
        })
    ) {
        // Grow a configuration one pebble at a time, keeping it unsolvable.
        let product = cartesian_product(&inst.g.graph, &inst.h.graph);
        let root = inst.root.0 * inst.h.size() + inst.root.1;
        let mut counts = vec![0u32; product.vertex_count()];
        for v in picks {
            counts[v] += 1;
            if is_solvable(&product, &Configuration::new(counts.clone()), root, 1, &OracleOptions::default()).unwrap() {
                counts[v] -= 1;
            }
        }
        prop_assert!(!naive_solvable(&product, &counts, root, 1));
        let model = assemble_model(&inst, &Default::default());
        let c = Configuration::new(counts.clone());
        let bad = check_feasibility(&model, &derive_assignment(&inst, &c).unwrap()).unwrap();
        prop_assert!(bad.is_empty(), "{:?}: {:?}", counts, bad);
    }

    #[test]
    fn integer_forms_are_positive_rescalings(inst in arb_instance()) {
        let model = assemble_model(&inst, &Default::default());
        for c in &model.constraints {
            let (terms, rhs) = c.integer_form();
            let nonzero = c.terms.iter().map(|t| t.1).find(|q| *q != 0.into());
            let Some(q) = nonzero else { continue };
            let k = pebblebound::model::Rational::from_integer(terms[c.terms.iter().position(|t| t.1 == q).unwrap()].1) / q;
            prop_assert!(k > 0.into());
            for ((_, a), (_, b)) in c.terms.iter().zip(&terms) {
                prop_assert_eq!(*a * k, pebblebound::model::Rational::from_integer(*b));
            }
            prop_assert_eq!(c.rhs * k, pebblebound::model::Rational::from_integer(rhs));
        }
    }

    #[test]
    fn lp_text_is_deterministic(inst in arb_instance()) {
        let a = write_lp(&assemble_model(&inst, &Default::default())).unwrap();
        let b = write_lp(&assemble_model(&inst.clone(), &Default::default())).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn swapping_factors_keeps_the_optimum() {
    if cbc().is_none() {
        return;
    }
    for (g, h, root) in [
        ("path:3", "path:2", (1, 0)),
        ("complete:3", "cycle:4", (0, 2)),
        ("lemke", "path:2", (4, 1)),
    ] {
        let inst = catalog_instance(g, h, root);
        let swapped = inst.swapped();
        assert_eq!(swapped.root, (root.1, root.0));
        assert_eq!(
            optimum(&inst, &Default::default()),
            optimum(&swapped, &Default::default()),
            "{g}x{h}"
        );
    }
}

#[test]
fn raising_policy_caps_never_raises_the_optimum() {
    if cbc().is_none() {
        return;
    }
    let loose = ConstraintEnumerationPolicy {
        neighborhood_max_set: 0,
        bipartite_max_s: 0,
        star_max_size: 0,
        path_max_length: 0,
        ..Default::default()
    };
    let tight = ConstraintEnumerationPolicy {
        neighborhood_max_set: 4,
        neighborhood_max_eta: 3,
        paths_per_terminal: 3,
        ..Default::default()
    };
    for (g, h) in [("path:3", "path:3"), ("cycle:4", "path:2"), ("lemke", "path:2")] {
        let inst = catalog_instance(g, h, (0, 0));
        let values: Vec<i64> = [&loose, &Default::default(), &tight]
            .iter()
            .map(|p| optimum(&inst, p))
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{g}x{h}: {values:?}");
    }
}
