//! CPLEX-LP text output (and a small reader used to audit it).

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::SolverError;
use crate::model::{ModelIR, Sense, VarId, VarKind};

/// Largest magnitude a coefficient may have and still be read exactly by a
/// double-precision solver.
const MAX_EXACT: i128 = 1 << 53;
const LINE_WIDTH: usize = 200;

/// Constraint indices sorted by family (stable within a family).
pub fn constraint_order(model: &ModelIR) -> Vec<usize> {
    let mut order: Vec<usize> = (0..model.constraints.len()).collect();
    order.sort_by_key(|&i| model.constraints[i].label.family);
    order
}

struct Wrapped {
    out: String,
    line: usize,
}

impl Wrapped {
    fn token(&mut self, t: &str) {
        if self.line + t.len() + 1 > LINE_WIDTH {
            self.out.push_str("\n   ");
            self.line = 3;
        }
        self.out.push(' ');
        self.out.push_str(t);
        self.line += t.len() + 1;
    }

    fn start(&mut self, t: &str) {
        self.out.push(' ');
        self.out.push_str(t);
        self.line = t.len() + 1;
    }

    fn end(&mut self) {
        self.out.push('\n');
        self.line = 0;
    }
}

fn check(c: i128, what: &str) -> Result<i128, SolverError> {
    if c.abs() > MAX_EXACT {
        Err(SolverError::Unencodable(format!("{c} in {what}")))
    } else {
        Ok(c)
    }
}

fn push_terms(w: &mut Wrapped, model: &ModelIR, terms: &[(VarId, i128)]) {
    if terms.is_empty() {
        // A row needs at least one column; a zero coefficient keeps it inert.
        w.token(&format!("0 {}", model.catalog.name(model.objective[0])));
        return;
    }
    for (n, &(v, c)) in terms.iter().enumerate() {
        let sign = if c < 0 { "-" } else { "+" };
        let mag = c.abs();
        let name = model.catalog.name(v);
        let body = if mag == 1 { name } else { format!("{mag} {name}") };
        if n == 0 && c > 0 {
            w.token(&body);
        } else {
            w.token(&format!("{sign} {body}"));
        }
    }
}

/// Deterministic LP text: maximize the configuration total subject to every
/// constraint in integer form.
pub fn write_lp(model: &ModelIR) -> Result<String, SolverError> {
    let mut w = Wrapped {
        out: String::new(),
        line: 0,
    };
    let _ = writeln!(
        w.out,
        "\\ {} root ({},{})",
        model.name,
        model.root.0 + 1,
        model.root.1 + 1
    );
    w.out.push_str("Maximize\n");
    w.start("obj:");
    let obj: Vec<(VarId, i128)> = model.objective.iter().map(|&v| (v, 1)).collect();
    push_terms(&mut w, model, &obj);
    w.end();
    w.out.push_str("Subject To\n");
    for i in constraint_order(model) {
        let c = &model.constraints[i];
        let label = c.label.to_string();
        let (terms, rhs) = c.integer_form();
        for &(_, coef) in &terms {
            check(coef, &label)?;
        }
        check(rhs, &label)?;
        w.start(&format!("{label}:"));
        push_terms(&mut w, model, &terms);
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        w.token(&format!("{sense} {rhs}"));
        w.end();
    }
    // LP readers reject integer columns that appear nowhere; such columns
    // are left out and read back as zero.
    let mut used = vec![false; model.catalog.len()];
    for &v in &model.objective {
        used[v.0 as usize] = true;
    }
    for c in &model.constraints {
        for &(v, _) in &c.terms {
            used[v.0 as usize] = true;
        }
    }
    let mut generals = Vec::new();
    let mut binaries = Vec::new();
    for (id, key) in model.catalog.iter() {
        if !used[id.0 as usize] {
            continue;
        }
        match key.kind() {
            VarKind::Integer => generals.push(key.to_string()),
            VarKind::Binary => binaries.push(key.to_string()),
        }
    }
    for (title, names) in [("Generals", generals), ("Binaries", binaries)] {
        if names.is_empty() {
            continue;
        }
        w.out.push_str(title);
        w.out.push('\n');
        w.start("");
        for n in &names {
            w.token(n);
        }
        w.end();
    }
    w.out.push_str("End\n");
    Ok(w.out)
}

/// Human-readable listing: one line per constraint with its family meaning.
pub fn debug_listing(model: &ModelIR) -> String {
    let mut out = String::new();
    for i in constraint_order(model) {
        let c = &model.constraints[i];
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            c.label,
            c.label.family.tag(),
            c.label.family.description()
        );
    }
    out
}

/// A row read back from LP text.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(String, f64)>,
    pub sense: String,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedLp {
    pub objective: Vec<(String, f64)>,
    pub rows: Vec<LpRow>,
    pub generals: Vec<String>,
    pub binaries: Vec<String>,
}

fn parse_terms(tokens: &[&str]) -> Result<Vec<(String, f64)>, String> {
    let mut out = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for &t in tokens {
        match t {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(v) = t.parse::<f64>() {
                    coef = Some(v);
                } else {
                    out.push((t.to_string(), sign * coef.take().unwrap_or(1.0)));
                    sign = 1.0;
                }
            }
        }
    }
    if coef.is_some() {
        return Err("dangling coefficient".into());
    }
    Ok(out)
}

/// Reads the subset of CPLEX-LP written by [`write_lp`].
pub fn parse_lp(text: &str) -> Result<ParsedLp, String> {
    let mut statements: Vec<(String, String)> = Vec::new();
    let mut section = String::new();
    for raw in text.lines() {
        if raw.starts_with('\\') || raw.trim().is_empty() {
            continue;
        }
        if !raw.starts_with(' ') {
            section = raw.trim().to_string();
            continue;
        }
        let continuation = raw.starts_with("   ");
        match statements.last_mut() {
            Some((sec, body)) if continuation && *sec == section => {
                body.push(' ');
                body.push_str(raw.trim());
            }
            _ => statements.push((section.clone(), raw.trim().to_string())),
        }
    }
    let mut lp = ParsedLp::default();
    for (sec, body) in statements {
        match sec.as_str() {
            "Maximize" => {
                let rest = body.split_once(':').ok_or("objective without name")?.1;
                lp.objective = parse_terms(&rest.split_whitespace().collect::<Vec<_>>())?;
            }
            "Subject To" => {
                let (name, rest) = body.split_once(':').ok_or("row without name")?;
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let pos = tokens
                    .iter()
                    .position(|t| matches!(*t, "<=" | ">=" | "="))
                    .ok_or_else(|| format!("row {name} has no sense"))?;
                let rhs = tokens
                    .get(pos + 1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| format!("row {name} has no right-hand side"))?;
                lp.rows.push(LpRow {
                    name: name.trim().to_string(),
                    terms: parse_terms(&tokens[..pos])?,
                    sense: tokens[pos].to_string(),
                    rhs,
                });
            }
            "Generals" => lp.generals.extend(body.split_whitespace().map(String::from)),
            "Binaries" => lp.binaries.extend(body.split_whitespace().map(String::from)),
            other => return Err(format!("unexpected section {other:?}")),
        }
    }
    Ok(lp)
}

impl ParsedLp {
    /// Row lookup by name.
    pub fn row_index(&self) -> HashMap<&str, &LpRow> {
        self.rows.iter().map(|r| (r.name.as_str(), r)).collect()
    }
}
