//! Decision-variable catalog.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::ModelParameters;

/// Which factor plays `K` (the slice graph); the other factor is the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    G,
    H,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::G, Side::H];

    pub fn other(self) -> Side {
        match self {
            Side::G => Side::H,
            Side::H => Side::G,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::G => "G",
            Side::H => "H",
        })
    }
}

/// Index of a variable in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

/// Semantic key of a variable. Vertex and slice indices are 0-based; the
/// slice index `j` of a `K`-slice ranges over the frame graph's vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    /// Pebbles on product vertex `(i, j)`, `i` in G and `j` in H.
    C(usize, usize),
    Partial(Side, usize),
    Set(Side, usize),
    Extra(Side, usize),
    Sat(Side, usize),
    Pair(Side, usize),
    Support(Side, usize),
    /// Count of `2^d`-stacks in a slice, `d` a frame-graph distance.
    Stack(Side, usize, u32),
    N2peb(Side, usize),
    N2pebMon(Side, usize),
    NRoot(Side, usize),
    Covered(usize, usize),
    X(Side, usize, usize),
    Y(Side, usize),
    GoodStack(Side, usize, u32),
    Can2peb(Side, usize),
    SupportIs(Side, usize, usize),
    SupportLess(Side, usize, usize),
    SupportMore(Side, usize, usize),
}

impl VarKey {
    pub fn kind(self) -> VarKind {
        match self {
            VarKey::Covered(..)
            | VarKey::X(..)
            | VarKey::Y(..)
            | VarKey::GoodStack(..)
            | VarKey::Can2peb(..)
            | VarKey::SupportIs(..)
            | VarKey::SupportLess(..)
            | VarKey::SupportMore(..) => VarKind::Binary,
            _ => VarKind::Integer,
        }
    }
}

/// LP-safe, 1-based name, e.g. `c_1_2`, `stack_G_3_2`, `supIs_H_1_0`.
impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKey::C(i, j) => write!(f, "c_{}_{}", i + 1, j + 1),
            VarKey::Partial(k, j) => write!(f, "ct_{k}_{}", j + 1),
            VarKey::Set(k, j) => write!(f, "set_{k}_{}", j + 1),
            VarKey::Extra(k, j) => write!(f, "extra_{k}_{}", j + 1),
            VarKey::Sat(k, j) => write!(f, "sat_{k}_{}", j + 1),
            VarKey::Pair(k, j) => write!(f, "pair_{k}_{}", j + 1),
            VarKey::Support(k, j) => write!(f, "support_{k}_{}", j + 1),
            VarKey::Stack(k, j, d) => write!(f, "stack_{k}_{}_{d}", j + 1),
            VarKey::N2peb(k, j) => write!(f, "n2peb_{k}_{}", j + 1),
            VarKey::N2pebMon(k, j) => write!(f, "n2pebMon_{k}_{}", j + 1),
            VarKey::NRoot(k, j) => write!(f, "nroot_{k}_{}", j + 1),
            VarKey::Covered(i, j) => write!(f, "covered_{}_{}", i + 1, j + 1),
            VarKey::X(k, j, t) => write!(f, "x_{k}_{}_{t}", j + 1),
            VarKey::Y(k, s) => write!(f, "y_{k}_{s}"),
            VarKey::GoodStack(k, j, d) => write!(f, "goodStack_{k}_{}_{d}", j + 1),
            VarKey::Can2peb(k, j) => write!(f, "can2peb_{k}_{}", j + 1),
            VarKey::SupportIs(k, j, s) => write!(f, "supIs_{k}_{}_{s}", j + 1),
            VarKey::SupportLess(k, j, s) => write!(f, "supLess_{k}_{}_{s}", j + 1),
            VarKey::SupportMore(k, j, s) => write!(f, "supMore_{k}_{}_{s}", j + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Nonnegative integer.
    Integer,
    Binary,
}

/// Every model variable, in deterministic creation order.
#[derive(Debug, Clone, Default)]
pub struct VariableCatalog {
    keys: Vec<VarKey>,
    index: HashMap<VarKey, VarId>,
    by_name: HashMap<String, VarId>,
}

impl VariableCatalog {
    fn push(&mut self, key: VarKey) {
        let id = VarId(self.keys.len() as u32);
        let previous = self.index.insert(key, id);
        assert!(previous.is_none(), "duplicate variable {key}");
        self.by_name.insert(key.to_string(), id);
        self.keys.push(key);
    }

    /// Catalog over explicit keys, in the given order.
    pub fn from_keys(keys: impl IntoIterator<Item = VarKey>) -> Self {
        let mut cat = VariableCatalog::default();
        for k in keys {
            cat.push(k);
        }
        cat
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn key(&self, id: VarId) -> VarKey {
        self.keys[id.0 as usize]
    }

    pub fn get(&self, key: VarKey) -> Option<VarId> {
        self.index.get(&key).copied()
    }

    /// Id of a variable known to exist; panics otherwise.
    pub fn id(&self, key: VarKey) -> VarId {
        self.get(key).unwrap_or_else(|| panic!("variable {key} not in catalog"))
    }

    pub fn by_name(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> String {
        self.key(id).to_string()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, VarKey)> + '_ {
        self.keys.iter().enumerate().map(|(i, &k)| (VarId(i as u32), k))
    }

    pub fn count_where(&self, pred: impl Fn(&VarKey) -> bool) -> usize {
        self.keys.iter().filter(|k| pred(k)).count()
    }
}

/// Creates every variable over its index set, both orientations.
pub fn build_variables(params: &ModelParameters) -> VariableCatalog {
    let mut cat = VariableCatalog::default();
    let (ng, nh) = (params.side(Side::G).size, params.side(Side::H).size);
    for i in 0..ng {
        for j in 0..nh {
            cat.push(VarKey::C(i, j));
        }
    }
    for i in 0..ng {
        for j in 0..nh {
            cat.push(VarKey::Covered(i, j));
        }
    }
    for k in Side::BOTH {
        let p = params.side(k);
        let frame = params.side(k.other());
        for s in 0..=p.set_count_max {
            cat.push(VarKey::Y(k, s));
        }
        for j in 0..frame.size {
            cat.push(VarKey::Partial(k, j));
            cat.push(VarKey::Set(k, j));
            cat.push(VarKey::Extra(k, j));
            cat.push(VarKey::Sat(k, j));
            cat.push(VarKey::Pair(k, j));
            cat.push(VarKey::Support(k, j));
            cat.push(VarKey::N2peb(k, j));
            cat.push(VarKey::N2pebMon(k, j));
            cat.push(VarKey::NRoot(k, j));
            cat.push(VarKey::Can2peb(k, j));
            for d in 1..=frame.diameter {
                cat.push(VarKey::Stack(k, j, d));
                cat.push(VarKey::GoodStack(k, j, d));
            }
            for t in 0..=p.saturation_max {
                cat.push(VarKey::X(k, j, t));
            }
            for &s in &p.support_indices {
                cat.push(VarKey::SupportIs(k, j, s));
                cat.push(VarKey::SupportLess(k, j, s));
                cat.push(VarKey::SupportMore(k, j, s));
            }
        }
    }
    cat
}
