//! Product instances, derived model data and the enumeration policy.

use serde::{Deserialize, Serialize};

use super::vars::Side;
use crate::error::ModelError;
use crate::graph::{metric, Graph, MetricData};
use crate::profile::PebblingProfile;

/// One base graph with its pebbling data.
#[derive(Debug, Clone)]
pub struct Factor {
    pub graph: Graph,
    pub profile: PebblingProfile,
    pub metric: MetricData,
}

impl Factor {
    pub fn new(graph: Graph, profile: PebblingProfile) -> Result<Self, ModelError> {
        if profile.vertex_count != graph.vertex_count() {
            return Err(ModelError::ProfileMismatch {
                graph: graph.name().to_string(),
                reason: format!(
                    "profile has {} vertices, graph has {}",
                    profile.vertex_count,
                    graph.vertex_count()
                ),
            });
        }
        profile.validate().map_err(|reason| ModelError::ProfileMismatch {
            graph: graph.name().to_string(),
            reason,
        })?;
        let metric = metric(&graph)?;
        Ok(Factor { graph, profile, metric })
    }

    pub fn size(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn pi(&self) -> i64 {
        self.profile.pi as i64
    }
}

/// `G □ H` with a root `(r_G, r_H)`, 0-based.
#[derive(Debug, Clone)]
pub struct ProductInstance {
    pub g: Factor,
    pub h: Factor,
    pub root: (usize, usize),
}

impl ProductInstance {
    pub fn new(g: Factor, h: Factor, root: (usize, usize)) -> Result<Self, ModelError> {
        if root.0 >= g.size() || root.1 >= h.size() {
            return Err(ModelError::RootOutOfRange(root.0 + 1, root.1 + 1));
        }
        Ok(ProductInstance { g, h, root })
    }

    pub fn with_root(&self, root: (usize, usize)) -> Result<Self, ModelError> {
        ProductInstance::new(self.g.clone(), self.h.clone(), root)
    }

    /// `H □ G` with the root pair swapped.
    pub fn swapped(&self) -> Self {
        ProductInstance {
            g: self.h.clone(),
            h: self.g.clone(),
            root: (self.root.1, self.root.0),
        }
    }

    pub fn factor(&self, side: Side) -> &Factor {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }

    /// Root component inside the given factor.
    pub fn root_of(&self, side: Side) -> usize {
        match side {
            Side::G => self.root.0,
            Side::H => self.root.1,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.g.size() * self.h.size()
    }

    pub fn name(&self) -> String {
        format!("{}x{}", self.g.graph.name(), self.h.graph.name())
    }
}

/// Data of one orientation `K`; sizes and indices refer to `K` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideParameters {
    pub size: usize,
    pub pi: i64,
    pub diameter: u32,
    /// Top of the set-count index set, `pi(K̄) - 1`.
    pub set_count_max: usize,
    /// Top of the saturation index set, `floor((pi(G) pi(H) - 1) / |K|)`.
    pub saturation_max: usize,
    pub u_set: Vec<usize>,
    pub u_mon_set: Vec<usize>,
    /// Sorted union of `u_set` and `u_mon_set`.
    pub support_indices: Vec<usize>,
    /// `difference[s]` for `s in u_set`, paired.
    pub difference: Vec<(usize, i64)>,
    pub difference_mon: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParameters {
    pub big_m: i64,
    pub g: SideParameters,
    pub h: SideParameters,
}

impl ModelParameters {
    pub fn side(&self, side: Side) -> &SideParameters {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }
}

pub fn derive_parameters(inst: &ProductInstance) -> ModelParameters {
    let pi_product = inst.g.pi() * inst.h.pi();
    let side = |k: Side| {
        let f = inst.factor(k);
        let frame = inst.factor(k.other());
        let p = &f.profile;
        let u_set = p.u_set();
        let u_mon_set = p.u_mon_set();
        let mut support_indices: Vec<usize> = u_set.iter().chain(&u_mon_set).copied().collect();
        support_indices.sort_unstable();
        support_indices.dedup();
        SideParameters {
            size: f.size(),
            pi: f.pi(),
            diameter: f.metric.diameter(),
            set_count_max: (frame.pi() - 1) as usize,
            saturation_max: ((pi_product - 1) / f.size() as i64) as usize,
            difference: u_set.iter().map(|&s| (s, p.difference(s))).collect(),
            difference_mon: u_mon_set.iter().map(|&s| (s, p.difference_mon(s))).collect(),
            u_set,
            u_mon_set,
            support_indices,
        }
    };
    ModelParameters {
        big_m: 2 * pi_product,
        g: side(Side::G),
        h: side(Side::H),
    }
}

/// Caps on the parameterized constraint families. Zero disables a family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstraintEnumerationPolicy {
    /// Largest `|S|` in the saturated-neighbourhood family.
    pub neighborhood_max_set: usize,
    /// Largest `eta` in the saturated-neighbourhood family.
    pub neighborhood_max_eta: usize,
    pub bipartite_max_s: usize,
    pub bipartite_max_t: usize,
    /// Largest star in the star-feed family; further clamped to `min(deg v, pi(K̄) - 3)`.
    pub star_max_size: usize,
    /// Longest path in the path-into-root family; further clamped to the frame diameter.
    pub path_max_length: usize,
    /// Paths kept per (terminal vertex, length) in the path-into-root family.
    pub paths_per_terminal: usize,
}

impl Default for ConstraintEnumerationPolicy {
    fn default() -> Self {
        ConstraintEnumerationPolicy {
            neighborhood_max_set: 3,
            neighborhood_max_eta: 2,
            bipartite_max_s: 3,
            bipartite_max_t: 2,
            star_max_size: 64,
            path_max_length: 16,
            paths_per_terminal: 1,
        }
    }
}

impl ConstraintEnumerationPolicy {
    /// Short stable fingerprint used in cache keys.
    pub fn fingerprint(&self) -> String {
        format!(
            "ns{}e{}-bs{}t{}-st{}-pl{}p{}",
            self.neighborhood_max_set,
            self.neighborhood_max_eta,
            self.bipartite_max_s,
            self.bipartite_max_t,
            self.star_max_size,
            self.path_max_length,
            self.paths_per_terminal
        )
    }
}
