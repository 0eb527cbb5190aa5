//! Canonical variable values for a concrete configuration, and the exact
//! feasibility check.

use std::collections::HashMap;

use num_traits::Zero;

use super::linear::{frac, int, Rational};
use super::params::{derive_parameters, ProductInstance};
use super::vars::{Side, VarKey, VarKind};
use super::ModelIR;
use crate::error::ModelError;
use crate::oracle::Configuration;

/// Integer values keyed by variable meaning.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: HashMap<VarKey, i64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: VarKey, value: i64) {
        self.values.insert(key, value);
    }

    pub fn remove(&mut self, key: VarKey) -> Option<i64> {
        self.values.remove(&key)
    }

    pub fn get(&self, key: VarKey) -> Option<i64> {
        self.values.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarKey, &i64)> {
        self.values.iter()
    }
}

fn ceil_nonneg(r: Rational) -> i64 {
    if r <= Rational::zero() {
        0
    } else {
        r.ceil().to_integer() as i64
    }
}

/// Assignment induced by a configuration on the product, indexed by product
/// label `i * |H| + j`. Under-determined variables take their least
/// admissible values.
pub fn derive_assignment(inst: &ProductInstance, c: &Configuration) -> Result<Assignment, ModelError> {
    let (ng, nh) = (inst.g.size(), inst.h.size());
    if c.len() != ng * nh {
        return Err(ModelError::ConfigurationLength {
            got: c.len(),
            expected: ng * nh,
        });
    }
    let params = derive_parameters(inst);
    let counts = c.counts();
    let at = |i: usize, j: usize| counts[i * nh + j] as i64;
    let mut a = Assignment::new();
    for i in 0..ng {
        for j in 0..nh {
            a.set(VarKey::C(i, j), at(i, j));
            a.set(VarKey::Covered(i, j), (at(i, j) > 0) as i64);
        }
    }
    for k in Side::BOTH {
        let p = params.side(k);
        let frame = params.side(k.other());
        let root = inst.root_of(k);
        let kn = p.size as i64;
        let cell = |j: usize, i: usize| match k {
            Side::G => at(i, j),
            Side::H => at(j, i),
        };
        let mut total_sets = 0;
        for j in 0..frame.size {
            let ct: i64 = (0..p.size).map(|i| cell(j, i)).sum();
            let support = (0..p.size).filter(|&i| cell(j, i) > 0).count() as i64;
            let set = ct / p.pi;
            let extra = ct % p.pi;
            let sat = ct / kn;
            total_sets += set;
            a.set(VarKey::Partial(k, j), ct);
            a.set(VarKey::Set(k, j), set);
            a.set(VarKey::Extra(k, j), extra);
            a.set(VarKey::Pair(k, j), extra / 2);
            a.set(VarKey::Sat(k, j), sat);
            a.set(VarKey::Support(k, j), support);
            for t in 0..=p.saturation_max {
                a.set(VarKey::X(k, j, t), (sat >= t as i64) as i64);
            }
            for d in 1..=frame.diameter {
                let pow = 1i64 << d;
                let slack = ct - (pow - 1) * (support - 1);
                a.set(VarKey::GoodStack(k, j, d), (slack > 0) as i64);
                a.set(VarKey::Stack(k, j, d), ceil_nonneg(frac(ct - (pow - 1) * support, pow)));
            }
            for &s in &p.support_indices {
                let s = s as i64;
                a.set(VarKey::SupportIs(k, j, s as usize), (support == s) as i64);
                a.set(VarKey::SupportLess(k, j, s as usize), (support <= s) as i64);
                a.set(VarKey::SupportMore(k, j, s as usize), (support >= s) as i64);
            }
            let correction = |table: &[(usize, i64)]| {
                table
                    .iter()
                    .filter(|&&(s, _)| s as i64 == support)
                    .map(|&(_, d)| d)
                    .sum::<i64>()
            };
            let n2peb = 2 * p.pi - support + 1 + correction(&p.difference);
            let n2peb_mon = 2 * p.pi - support + 1 + correction(&p.difference_mon);
            let can = (ct >= n2peb) as i64;
            a.set(VarKey::N2peb(k, j), n2peb);
            a.set(VarKey::N2pebMon(k, j), n2peb_mon);
            a.set(VarKey::Can2peb(k, j), can);
            let at_root = cell(j, root);
            let discounted = int(2 * can - 1) + frac(ct - n2peb + 1, p.pi);
            let plain = frac(ct - at_root + 1, p.pi) + int(at_root - 1);
            a.set(VarKey::NRoot(k, j), ceil_nonneg(discounted.max(plain)));
        }
        for s in 0..=p.set_count_max {
            a.set(VarKey::Y(k, s), (total_sets >= s as i64) as i64);
        }
    }
    Ok(a)
}

/// Labels of all constraints the assignment violates, in exact arithmetic.
pub fn check_feasibility(model: &ModelIR, a: &Assignment) -> Result<Vec<String>, ModelError> {
    let mut violated = Vec::new();
    for (_, key) in model.catalog.iter() {
        let value = a.get(key).ok_or_else(|| ModelError::MissingVariable(key.to_string()))?;
        let upper = match key.kind() {
            VarKind::Binary => 1,
            VarKind::Integer => i64::MAX,
        };
        if !(0..=upper).contains(&value) {
            violated.push(format!("bound_{key}"));
        }
    }
    for c in &model.constraints {
        let ok = c
            .is_satisfied(|v| a.get(model.catalog.key(v)))
            .map_err(|v| ModelError::MissingVariable(model.catalog.name(v)))?;
        if !ok {
            violated.push(c.label.to_string());
        }
    }
    Ok(violated)
}
