use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown catalog graph {0:?}")]
    UnknownCatalog(String),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) out of range 1..={n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph {0:?} is disconnected")]
    Disconnected(String),
    #[error("graph text: {0}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("search budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("graph {name:?} has {n} vertices, above the oracle cap of {cap}")]
    TooLarge { name: String, n: usize, cap: usize },
    #[error("invalid oracle input: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("profile for {graph:?} does not match: {reason}")]
    ProfileMismatch { graph: String, reason: String },
    #[error("root ({0}, {1}) out of range")]
    RootOutOfRange(usize, usize),
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
    #[error("configuration has {got} entries, expected {expected}")]
    ConfigurationLength { got: usize, expected: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no MILP solver backend available")]
    NoBackend,
    #[error("unknown solver id {0:?}")]
    UnknownSolver(String),
    #[error("relative gap {0} outside [0, 1]")]
    BadGap(f64),
    #[error("{solver} failed: {message}\n{diagnostics}")]
    Backend {
        solver: String,
        message: String,
        diagnostics: String,
    },
    #[error("incumbent from {solver} violates {} constraint(s), first: {}", violated.len(), violated.first().map(String::as_str).unwrap_or("-"))]
    Integrity { solver: String, violated: Vec<String> },
    #[error("cannot encode coefficient {0} in LP text")]
    Unencodable(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("root ({}, {}): {source}", root.0 + 1, root.1 + 1)]
    Solve {
        root: (usize, usize),
        #[source]
        source: SolverError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: schema version {found}, expected {expected}")]
    Schema { path: String, found: u32, expected: u32 },
    #[error("{path}: expected a {expected:?} document, found {found:?}")]
    Kind {
        path: String,
        expected: String,
        found: String,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown table {0}; tables 3 to 8 hold product results")]
    UnknownTable(u8),
    #[error("profile {name:?}: {reason}")]
    Profile { name: String, reason: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Search(#[from] SearchError),
}
