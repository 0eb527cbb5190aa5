//! Exact pebbling oracles for small graphs and integer-programming upper
//! bounds on the pebbling number of Cartesian products.

pub mod error;
pub mod graph;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod orbits;
pub mod profile;
pub mod reference;
pub mod search;
pub mod solver;

pub use error::{GraphError, HarnessError, ModelError, OracleError, SearchError, SolverError};
pub use graph::{cartesian_product, catalog_graph, metric, CatalogName, Graph, MetricData};
pub use oracle::{Configuration, OracleOptions};
pub use orbits::{vertex_orbits, OrbitPartition};
pub use profile::PebblingProfile;
