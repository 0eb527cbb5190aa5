//! Per-graph pebbling data consumed by the integer program.

use serde::{Deserialize, Serialize};

/// Pebbling number plus (monotonic) 2-pebbling tables of one base graph.
///
/// Tables are indexed by support size `s = 1..=vertex_count` (entry `s - 1`).
/// A profile without tables stands for a graph with the 2-pebbling property,
/// for which `2 * pi - s + 1` is used in place of the exact table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PebblingProfile {
    pub name: String,
    pub vertex_count: usize,
    pub pi: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_peb: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_peb_mon: Option<Vec<u64>>,
}

impl PebblingProfile {
    /// Profile for a graph known to have the 2-pebbling property.
    pub fn with_default_tables(name: impl Into<String>, vertex_count: usize, pi: u64) -> Self {
        PebblingProfile {
            name: name.into(),
            vertex_count,
            pi,
            two_peb: None,
            two_peb_mon: None,
        }
    }

    /// Profile from an explicit 2-pebbling table; the monotone table is its
    /// suffix maximum.
    pub fn from_table(name: impl Into<String>, pi: u64, two_peb: Vec<u64>) -> Self {
        let two_peb_mon = monotone_envelope(&two_peb);
        PebblingProfile {
            name: name.into(),
            vertex_count: two_peb.len(),
            pi,
            two_peb: Some(two_peb),
            two_peb_mon: Some(two_peb_mon),
        }
    }

    /// `2 pi - s + 1`, the 2-pebbling-property baseline.
    pub fn baseline(&self, s: usize) -> i64 {
        2 * self.pi as i64 - s as i64 + 1
    }

    pub fn pi2(&self, s: usize) -> i64 {
        table_value(self.two_peb.as_deref(), s).unwrap_or_else(|| self.baseline(s))
    }

    pub fn pi2_mon(&self, s: usize) -> i64 {
        match (&self.two_peb_mon, &self.two_peb) {
            (Some(t), _) => table_value(Some(t), s).unwrap_or_else(|| self.baseline(s)),
            (None, Some(t)) => table_value(Some(&monotone_envelope(t)), s).unwrap_or_else(|| self.baseline(s)),
            (None, None) => self.baseline(s),
        }
    }

    /// `{0}` plus the support sizes whose 2-pebbling number exceeds the baseline.
    pub fn u_set(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain((1..=self.vertex_count).filter(|&s| self.pi2(s) > self.baseline(s)))
            .collect()
    }

    pub fn u_mon_set(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain((1..=self.vertex_count).filter(|&s| self.pi2_mon(s) > self.baseline(s)))
            .collect()
    }

    /// Correction to the baseline at support `s`; `-1` at `s = 0`.
    pub fn difference(&self, s: usize) -> i64 {
        if s == 0 {
            -1
        } else {
            self.pi2(s) - self.baseline(s)
        }
    }

    pub fn difference_mon(&self, s: usize) -> i64 {
        if s == 0 {
            -1
        } else {
            self.pi2_mon(s) - self.baseline(s)
        }
    }

    pub fn has_two_pebbling_property(&self) -> bool {
        self.u_set().len() == 1
    }

    /// Checks internal consistency: table lengths and the monotone envelope.
    pub fn validate(&self) -> Result<(), String> {
        if self.pi < self.vertex_count as u64 {
            return Err(format!("pi = {} below vertex count {}", self.pi, self.vertex_count));
        }
        for t in [&self.two_peb, &self.two_peb_mon].into_iter().flatten() {
            if t.len() != self.vertex_count {
                return Err(format!("table has {} entries, expected {}", t.len(), self.vertex_count));
            }
        }
        if let (Some(t), Some(m)) = (&self.two_peb, &self.two_peb_mon) {
            if monotone_envelope(t) != *m {
                return Err("monotone table is not the suffix maximum of the 2-pebbling table".into());
            }
        }
        Ok(())
    }
}

fn table_value(table: Option<&[u64]>, s: usize) -> Option<i64> {
    match (table, s) {
        (_, 0) => None,
        (Some(t), s) => t.get(s - 1).map(|&v| v as i64),
        (None, _) => None,
    }
}

/// `out[s] = max(table[s..])`.
pub fn monotone_envelope(table: &[u64]) -> Vec<u64> {
    let mut out = table.to_vec();
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i] = out[i].max(out[i + 1]);
    }
    out
}
