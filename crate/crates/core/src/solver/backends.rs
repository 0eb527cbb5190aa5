//! Per-backend command lines and output parsers.

use std::path::Path;
use std::process::Command;
use std::time::Duration;

use super::{SolveStatus, SolverKind};

/// What a backend reported, before verification.
#[derive(Debug, Clone, PartialEq)]
pub struct RawOutcome {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    /// Upper bound on the maximum.
    pub bound: Option<f64>,
    pub values: Option<Vec<(String, f64)>>,
}

pub(crate) fn command(
    kind: SolverKind,
    lp: &Path,
    sol: &Path,
    gap: f64,
    time: Option<Duration>,
    dir: &Path,
) -> Command {
    let mut cmd = Command::new(kind.executable());
    match kind {
        SolverKind::Cbc => {
            cmd.arg(lp).args(["ratioGap", &gap.to_string()]);
            if let Some(t) = time {
                // budgets are wall-clock; CBC counts CPU time by default
                cmd.args(["timeMode", "elapsed", "seconds", &t.as_secs_f64().to_string()]);
            }
            cmd.args(["solve", "solution"]).arg(sol);
        }
        SolverKind::Highs => {
            let mut opts = format!("mip_rel_gap = {gap}\n");
            if let Some(t) = time {
                opts.push_str(&format!("time_limit = {}\n", t.as_secs_f64()));
            }
            let path = dir.join("highs.opt");
            let _ = std::fs::write(&path, opts);
            cmd.arg("--model_file")
                .arg(lp)
                .arg("--options_file")
                .arg(&path)
                .arg("--solution_file")
                .arg(sol);
        }
        SolverKind::Scip => {
            let mut script = format!("read {}\nset limits gap {gap}\n", lp.display());
            if let Some(t) = time {
                script.push_str(&format!("set limits time {}\n", t.as_secs_f64()));
            }
            script.push_str(&format!(
                "optimize\nwrite solution {}\ndisplay statistics\nquit\n",
                sol.display()
            ));
            let path = dir.join("scip.cmd");
            let _ = std::fs::write(&path, script);
            cmd.arg("-b").arg(&path);
        }
        SolverKind::Gurobi => {
            cmd.arg(format!("MIPGap={gap}"));
            if let Some(t) = time {
                cmd.arg(format!("TimeLimit={}", t.as_secs_f64()));
            }
            cmd.arg(format!("ResultFile={}", sol.display())).arg(lp);
        }
    }
    cmd
}

pub fn parse_output(kind: SolverKind, log: &str, solution: Option<&str>) -> Result<RawOutcome, String> {
    match kind {
        SolverKind::Cbc => parse_cbc(log, solution),
        SolverKind::Highs => parse_highs(log, solution),
        SolverKind::Scip => parse_scip(log, solution),
        SolverKind::Gurobi => parse_gurobi(log, solution),
    }
}

fn number_after(line: &str, key: &str) -> Option<f64> {
    let rest = &line[line.find(key)? + key.len()..];
    rest.trim_start_matches([':', ' ', '=', '\t'])
        .split(|c: char| c.is_whitespace() || c == ',' || c == ')')
        .next()?
        .parse()
        .ok()
}

/// `name value` pairs, skipping lines that do not fit.
fn pairs<'a>(lines: impl Iterator<Item = &'a str>) -> Vec<(String, f64)> {
    lines
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let name = it.next()?;
            let value = it.next()?.parse().ok()?;
            Some((name.to_string(), value))
        })
        .collect()
}

fn parse_cbc(log: &str, solution: Option<&str>) -> Result<RawOutcome, String> {
    let result = log.lines().find_map(|l| l.strip_prefix("Result - "));
    let status = match result {
        // presolve can prove infeasibility without a result line
        None if log.contains("Problem is infeasible") || log.contains("problem is infeasible") => {
            SolveStatus::Infeasible
        }
        None => return Err("no result line in CBC output".into()),
        Some(r) if r.contains("within gap tolerance") => SolveStatus::GapReached,
        Some(r) if r.starts_with("Optimal") => SolveStatus::Optimal,
        Some(r) if r.contains("infeasible") => SolveStatus::Infeasible,
        Some(r) if r.contains("time") => SolveStatus::TimeLimit,
        Some(r) if r.contains("gap") => SolveStatus::GapReached,
        Some(r) if r.contains("Stopped") || r.contains("ctrl-c") => SolveStatus::TimeLimit,
        Some(_) => SolveStatus::Error,
    };
    let values = match (status, solution) {
        (SolveStatus::Infeasible, _) | (_, None) => None,
        (_, Some(text)) => {
            let first = text.lines().next().unwrap_or("");
            if first.starts_with("Infeasible")
                || first.contains("no integer solution")
                || !first.contains("objective value")
            {
                None
            } else {
                Some(
                    text.lines()
                        .skip(1)
                        .filter_map(|l| {
                            // "**" marks columns outside their bounds
                            let f: Vec<&str> = l.split_whitespace().filter(|t| *t != "**").collect();
                            Some((f.get(1)?.to_string(), f.get(2)?.parse().ok()?))
                        })
                        .collect(),
                )
            }
        }
    };
    let objective = log
        .lines()
        .find_map(|l| number_after(l, "Objective value:"))
        .filter(|_| values.is_some());
    // In maximization runs CBC prints the final bound in the caller's sense;
    // progress lines and the gap exit message are in its internal minimization sense.
    let summary = log
        .lines()
        .find_map(|l| l.strip_prefix("Upper bound:"))
        .and_then(|t| t.trim().parse().ok());
    let gap_exit = log
        .lines()
        .find_map(|l| number_after(l, "integer gap of"))
        .zip(objective)
        .map(|(g, n)| n + g);
    let progress = log
        .lines()
        .rev()
        .find_map(|l| number_after(l, "best possible"))
        .map(|b: f64| -b);
    let bound = match status {
        SolveStatus::Optimal => objective.or(progress),
        SolveStatus::Infeasible => None,
        _ => summary.or(gap_exit).or(progress),
    };
    Ok(RawOutcome {
        status,
        objective,
        bound,
        values,
    })
}

fn parse_highs(log: &str, solution: Option<&str>) -> Result<RawOutcome, String> {
    // HiGHS versions differ in the padding inside "Model status"
    let normalized: Vec<String> = log
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    let status_line = normalized
        .iter()
        .find_map(|l| l.strip_prefix("Model status"))
        .or_else(|| normalized.iter().find_map(|l| l.strip_prefix("Status")))
        .ok_or("no model status in HiGHS output")?
        .trim_start_matches([' ', ':'])
        .to_ascii_lowercase();
    let status = if status_line.starts_with("optimal") {
        SolveStatus::Optimal
    } else if status_line.contains("infeasible") {
        SolveStatus::Infeasible
    } else if status_line.contains("time limit") {
        SolveStatus::TimeLimit
    } else {
        SolveStatus::Error
    };
    let bound = log.lines().find_map(|l| number_after(l.trim(), "Dual bound"));
    let mut objective = log.lines().find_map(|l| number_after(l.trim(), "Primal bound"));
    let values = solution.and_then(|text| {
        let mut lines = text.lines();
        let header = lines.by_ref().find(|l| l.starts_with("# Columns"))?;
        let n: usize = header.trim_start_matches("# Columns").trim().parse().ok()?;
        if let Some(obj) = text.lines().find_map(|l| l.strip_prefix("Objective")) {
            objective = obj.trim().parse().ok().or(objective);
        }
        Some(pairs(lines.take(n)))
    });
    let values = values.filter(|_| !text_says_infeasible(solution));
    Ok(RawOutcome {
        status,
        objective: values.as_ref().and(objective),
        bound,
        values,
    })
}

fn text_says_infeasible(solution: Option<&str>) -> bool {
    solution.is_some_and(|t| t.lines().any(|l| l.trim() == "Infeasible"))
}

fn parse_scip(log: &str, solution: Option<&str>) -> Result<RawOutcome, String> {
    let status_line = log
        .lines()
        .find_map(|l| l.trim().strip_prefix("SCIP Status"))
        .ok_or("no status in SCIP output")?;
    let status = if status_line.contains("optimal solution found") {
        SolveStatus::Optimal
    } else if status_line.contains("infeasible") {
        SolveStatus::Infeasible
    } else if status_line.contains("gap limit") {
        SolveStatus::GapReached
    } else if status_line.contains("time limit") {
        SolveStatus::TimeLimit
    } else {
        SolveStatus::Error
    };
    let bound = log.lines().rev().find_map(|l| number_after(l.trim(), "Dual Bound"));
    let (objective, values) = match solution {
        Some(text) if !text.contains("no solution available") && status != SolveStatus::Infeasible => {
            let obj = text.lines().find_map(|l| number_after(l, "objective value:"));
            let body = text
                .lines()
                .filter(|l| !l.starts_with("solution status") && !l.starts_with("objective value"));
            (obj, Some(pairs(body)))
        }
        _ => (None, None),
    };
    Ok(RawOutcome {
        status,
        objective,
        bound,
        values,
    })
}

fn parse_gurobi(log: &str, solution: Option<&str>) -> Result<RawOutcome, String> {
    let status = if log.contains("Optimal solution found") {
        SolveStatus::Optimal
    } else if log.contains("Model is infeasible") || log.contains("Infeasible model") {
        SolveStatus::Infeasible
    } else if log.contains("Time limit reached") {
        SolveStatus::TimeLimit
    } else if log.contains("Best objective") {
        SolveStatus::GapReached
    } else {
        return Err("no termination message in Gurobi output".into());
    };
    let summary = log.lines().rev().find(|l| l.starts_with("Best objective"));
    let bound = summary.and_then(|l| number_after(l, "best bound"));
    let (objective, values) = match solution {
        Some(text) if status != SolveStatus::Infeasible => {
            let obj = text.lines().find_map(|l| number_after(l, "Objective value"));
            (obj, Some(pairs(text.lines().filter(|l| !l.starts_with('#')))))
        }
        _ => (None, None),
    };
    let status = match status {
        // Gurobi reports a gap stop as "Optimal solution found (tolerance ...)".
        SolveStatus::Optimal => match (objective, bound) {
            (Some(n), Some(u)) if u.floor() > n + 0.5 => SolveStatus::GapReached,
            _ => SolveStatus::Optimal,
        },
        s => s,
    };
    Ok(RawOutcome {
        status,
        objective,
        bound,
        values,
    })
}
