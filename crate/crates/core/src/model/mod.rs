//! The partial-pebbling integer program for `G □ H`.
//!
//! Every unsolvable configuration (for the chosen root) maps to a feasible
//! point, so `1 + max sum c` over the model bounds the pebbling number.

mod assign;
mod defining;
pub mod linear;
mod params;
mod pebbling;
pub mod vars;

use std::collections::BTreeMap;

pub use assign::{check_feasibility, derive_assignment, Assignment};
pub use linear::{ConstraintLabel, Family, LinExpr, LinearConstraint, Rational, Sense};
pub use params::{
    derive_parameters, ConstraintEnumerationPolicy, Factor, ModelParameters, ProductInstance, SideParameters,
};
pub use vars::{build_variables, Side, VarId, VarKey, VarKind, VariableCatalog};

use linear::int;

/// Solver-agnostic model: maximize the sum of `objective` variables.
#[derive(Debug, Clone)]
pub struct ModelIR {
    pub name: String,
    pub root: (usize, usize),
    pub params: ModelParameters,
    pub catalog: VariableCatalog,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<VarId>,
}

impl ModelIR {
    pub fn family_counts(&self) -> BTreeMap<Family, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.constraints {
            *counts.entry(c.label.family).or_insert(0) += 1;
        }
        counts
    }

    pub fn objective_value(&self, a: &Assignment) -> Option<i64> {
        self.objective.iter().map(|&v| a.get(self.catalog.key(v))).sum()
    }
}

pub(crate) struct Builder<'a> {
    pub inst: &'a ProductInstance,
    pub params: &'a ModelParameters,
    pub catalog: &'a VariableCatalog,
    pub policy: &'a ConstraintEnumerationPolicy,
    pub out: Vec<LinearConstraint>,
}

impl Builder<'_> {
    pub fn id(&self, key: VarKey) -> VarId {
        self.catalog.id(key)
    }

    pub fn var(&self, key: VarKey) -> LinExpr {
        LinExpr::var(self.id(key))
    }

    pub fn push(&mut self, family: Family, index: Vec<String>, lhs: LinExpr, sense: Sense, rhs: LinExpr) {
        self.out.push(LinearConstraint::new(
            ConstraintLabel::new(family, index),
            lhs,
            sense,
            rhs,
        ));
    }
}

fn run_builder(
    inst: &ProductInstance,
    params: &ModelParameters,
    catalog: &VariableCatalog,
    policy: &ConstraintEnumerationPolicy,
    f: impl FnOnce(&mut Builder<'_>),
) -> Vec<LinearConstraint> {
    let mut b = Builder {
        inst,
        params,
        catalog,
        policy,
        out: Vec::new(),
    };
    f(&mut b);
    b.out
}

pub fn build_defining_constraints(
    inst: &ProductInstance,
    params: &ModelParameters,
    catalog: &VariableCatalog,
) -> Vec<LinearConstraint> {
    let policy = ConstraintEnumerationPolicy::default();
    run_builder(inst, params, catalog, &policy, defining::build_defining_constraints)
}

pub fn build_a_constraints(
    inst: &ProductInstance,
    params: &ModelParameters,
    catalog: &VariableCatalog,
    policy: &ConstraintEnumerationPolicy,
) -> Vec<LinearConstraint> {
    run_builder(inst, params, catalog, policy, pebbling::build_a_constraints)
}

pub fn build_b_constraints(
    inst: &ProductInstance,
    params: &ModelParameters,
    catalog: &VariableCatalog,
    policy: &ConstraintEnumerationPolicy,
) -> Vec<LinearConstraint> {
    run_builder(inst, params, catalog, policy, pebbling::build_b_constraints)
}

pub fn assemble_model(inst: &ProductInstance, policy: &ConstraintEnumerationPolicy) -> ModelIR {
    let params = derive_parameters(inst);
    let catalog = build_variables(&params);
    let mut constraints = build_defining_constraints(inst, &params, &catalog);
    constraints.extend(build_a_constraints(inst, &params, &catalog, policy));
    constraints.extend(build_b_constraints(inst, &params, &catalog, policy));
    let objective = catalog
        .iter()
        .filter(|(_, k)| matches!(k, VarKey::C(..)))
        .map(|(id, _)| id)
        .collect();
    ModelIR {
        name: inst.name(),
        root: inst.root,
        params,
        catalog,
        constraints,
        objective,
    }
}

/// Objective row for writers: every coefficient is one.
pub fn objective_terms(model: &ModelIR) -> Vec<(VarId, Rational)> {
    model.objective.iter().map(|&v| (v, int(1))).collect()
}
