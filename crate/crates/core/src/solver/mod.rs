//! External MILP solvers behind a file-and-subprocess boundary.
//!
//! The model goes out as CPLEX-LP text; each backend's log and solution file
//! are parsed back, and every incumbent is re-checked in exact arithmetic
//! before it is returned.

mod backends;
pub mod lp;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use backends::{parse_output, RawOutcome};
pub use lp::{debug_listing, parse_lp, write_lp, LpRow, ParsedLp};

use crate::error::SolverError;
use crate::model::{check_feasibility, Assignment, ModelIR};

/// Environment variable naming the preferred backend.
pub const SOLVER_ENV: &str = "PEBBLEBOUND_SOLVER";

/// Supported command-line solvers, in preference order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Gurobi,
    Highs,
    Scip,
    Cbc,
}

impl SolverKind {
    pub const PREFERENCE: [SolverKind; 4] = [SolverKind::Gurobi, SolverKind::Highs, SolverKind::Scip, SolverKind::Cbc];

    pub fn id(self) -> &'static str {
        match self {
            SolverKind::Gurobi => "gurobi",
            SolverKind::Highs => "highs",
            SolverKind::Scip => "scip",
            SolverKind::Cbc => "cbc",
        }
    }

    pub fn executable(self) -> &'static str {
        match self {
            SolverKind::Gurobi => "gurobi_cl",
            SolverKind::Highs => "highs",
            SolverKind::Scip => "scip",
            SolverKind::Cbc => "cbc",
        }
    }

    pub fn from_id(id: &str) -> Result<Self, SolverError> {
        SolverKind::PREFERENCE
            .into_iter()
            .find(|k| k.id() == id.trim().to_ascii_lowercase())
            .ok_or_else(|| SolverError::UnknownSolver(id.to_string()))
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

fn find_on_path(exe: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(exe))
        .find(|p| p.is_file())
}

/// Installed backends, in preference order.
pub fn probe_backends() -> Vec<SolverKind> {
    SolverKind::PREFERENCE
        .into_iter()
        .filter(|k| find_on_path(k.executable()).is_some())
        .collect()
}

/// Explicit choice, else the environment variable, else the first installed.
pub fn select_backend(explicit: Option<&str>) -> Result<SolverKind, SolverError> {
    let env = std::env::var(SOLVER_ENV).ok().filter(|s| !s.trim().is_empty());
    match explicit.map(str::to_string).or(env) {
        Some(id) => {
            let kind = SolverKind::from_id(&id)?;
            if find_on_path(kind.executable()).is_none() {
                return Err(SolverError::Backend {
                    solver: kind.id().into(),
                    message: format!("executable {:?} not found on PATH", kind.executable()),
                    diagnostics: String::new(),
                });
            }
            Ok(kind)
        }
        None => probe_backends().into_iter().next().ok_or(SolverError::NoBackend),
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest<'m> {
    pub model: &'m ModelIR,
    /// Relative gap `(u - n) / max(1, |n|)` at which the solver may stop.
    pub relative_gap: f64,
    pub time_limit: Option<Duration>,
    pub solver: SolverKind,
    /// Parent directory for the per-solve scratch directory.
    pub workdir: Option<PathBuf>,
    /// Keep the scratch directory (LP, log, solution) after the solve.
    pub keep_files: bool,
}

impl<'m> SolveRequest<'m> {
    pub fn new(model: &'m ModelIR, solver: SolverKind, relative_gap: f64) -> Self {
        SolveRequest {
            model,
            relative_gap,
            time_limit: None,
            solver,
            workdir: None,
            keep_files: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    GapReached,
    TimeLimit,
    Infeasible,
    Error,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub solver: SolverKind,
    pub status: SolveStatus,
    /// Objective of the verified incumbent.
    pub incumbent: Option<i64>,
    /// Proven upper bound on the optimum, as reported by the solver.
    pub dual_bound: Option<f64>,
    pub assignment: Option<Assignment>,
    pub seconds: f64,
    /// Scratch directory, if kept.
    pub files: Option<PathBuf>,
}

impl SolveResult {
    /// Integral dual bound: the objective is a sum of integers, so the
    /// solver's bound may be floored. Never below the incumbent.
    pub fn integral_bound(&self) -> Option<i64> {
        let floored = self.dual_bound.map(|u| (u + 1e-6).floor() as i64);
        match (floored, self.incumbent) {
            (Some(u), Some(n)) => Some(u.max(n)),
            (u, None) => u,
            (None, Some(n)) if self.status == SolveStatus::Optimal => Some(n),
            _ => None,
        }
    }

    pub fn relative_gap(&self) -> Option<f64> {
        let n = self.incumbent? as f64;
        let u = self.integral_bound()? as f64;
        Some((u - n) / n.abs().max(1.0))
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SolverError + '_ {
    move |source| SolverError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs one solve and verifies the incumbent exactly.
pub fn solve(req: &SolveRequest<'_>) -> Result<SolveResult, SolverError> {
    if !(0.0..=1.0).contains(&req.relative_gap) || req.relative_gap.is_nan() {
        return Err(SolverError::BadGap(req.relative_gap));
    }
    let parent = req.workdir.clone().unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&parent).map_err(io_err(&parent))?;
    let dir = tempfile::Builder::new()
        .prefix("pebblebound-")
        .tempdir_in(&parent)
        .map_err(io_err(&parent))?;
    let lp_path = dir.path().join("model.lp");
    let sol_path = dir.path().join("model.sol");
    let text = write_lp(req.model)?;
    std::fs::write(&lp_path, text).map_err(io_err(&lp_path))?;

    let mut cmd: Command = backends::command(
        req.solver,
        &lp_path,
        &sol_path,
        req.relative_gap,
        req.time_limit,
        dir.path(),
    );
    cmd.current_dir(dir.path());
    log::debug!("running {:?}", cmd);
    let start = Instant::now();
    let output = cmd.output().map_err(|e| SolverError::Backend {
        solver: req.solver.id().into(),
        message: format!("failed to start {}: {e}", req.solver.executable()),
        diagnostics: String::new(),
    })?;
    let seconds = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();
    let _ = std::fs::write(dir.path().join("solver.log"), format!("{stdout}\n{stderr}"));
    let solution = std::fs::read_to_string(&sol_path).ok();
    let diagnostics = || {
        let tail: Vec<&str> = stdout.lines().rev().take(30).collect();
        let mut d: Vec<&str> = tail.into_iter().rev().collect();
        d.extend(stderr.lines().take(20));
        d.join("\n")
    };

    let raw = parse_output(req.solver, &stdout, solution.as_deref()).map_err(|message| SolverError::Backend {
        solver: req.solver.id().into(),
        message,
        diagnostics: diagnostics(),
    })?;
    if raw.status == SolveStatus::Error {
        return Err(SolverError::Backend {
            solver: req.solver.id().into(),
            message: format!("solver exited with {}", output.status),
            diagnostics: diagnostics(),
        });
    }

    let assignment = match &raw.values {
        Some(values) => Some(assignment_from_values(req.model, req.solver, values)?),
        None => None,
    };
    let incumbent = match &assignment {
        Some(a) => {
            let violated = check_feasibility(req.model, a)?;
            if !violated.is_empty() {
                return Err(SolverError::Integrity {
                    solver: req.solver.id().into(),
                    violated,
                });
            }
            req.model.objective_value(a)
        }
        None => None,
    };
    if let (Some(n), Some(obj)) = (incumbent, raw.objective) {
        if (n as f64 - obj).abs() > 1e-4 * obj.abs().max(1.0) {
            return Err(SolverError::Integrity {
                solver: req.solver.id().into(),
                violated: vec![format!("objective: reported {obj}, recomputed {n}")],
            });
        }
    }
    let dual_bound = match raw.status {
        SolveStatus::Optimal => raw.bound.or(incumbent.map(|n| n as f64)),
        _ => raw.bound,
    };
    // Some backends call a gap-tolerance stop "optimal".
    let status = match (raw.status, incumbent, dual_bound) {
        (SolveStatus::Optimal, Some(n), Some(u)) if (u + 1e-6).floor() as i64 > n => SolveStatus::GapReached,
        (s, _, _) => s,
    };
    let files = if req.keep_files { Some(dir.keep()) } else { None };
    Ok(SolveResult {
        solver: req.solver,
        status,
        incumbent,
        dual_bound,
        assignment,
        seconds,
        files,
    })
}

/// Rounds solver values to integers; variables the solver omitted are zero.
fn assignment_from_values(
    model: &ModelIR,
    solver: SolverKind,
    values: &[(String, f64)],
) -> Result<Assignment, SolverError> {
    let mut a = Assignment::new();
    for (_, key) in model.catalog.iter() {
        a.set(key, 0);
    }
    let mut off_integral = Vec::new();
    for (name, value) in values {
        let Some(id) = model.catalog.by_name(name) else {
            continue;
        };
        let rounded = value.round();
        if (value - rounded).abs() > 1e-6 {
            off_integral.push(format!("{name} = {value}"));
        }
        a.set(model.catalog.key(id), rounded as i64);
    }
    if !off_integral.is_empty() {
        return Err(SolverError::Integrity {
            solver: solver.id().into(),
            violated: off_integral,
        });
    }
    Ok(a)
}
