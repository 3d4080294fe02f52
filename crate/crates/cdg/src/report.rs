//! Homology reports: dimension tables with an honest method tag.

use std::collections::BTreeMap;

use serde_json::{json, Value};

/// How a dimension table was obtained.  `FiniteExact` results come from a
/// finite resolution and are exact; the truncated methods are heuristic and
/// say so in their notes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    FiniteExact,
    /// Two consecutive truncations agreed on the reliable window.
    TruncationStabilized(usize, usize),
    Inconclusive(usize),
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::FiniteExact => "FiniteExact".into(),
            Method::TruncationStabilized(a, b) => format!("TruncationStabilized({a},{b})"),
            Method::Inconclusive(t) => format!("Inconclusive({t})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub method: Method,
    /// Dimension per canonical degree; absent degrees are zero.
    pub table: BTreeMap<i64, usize>,
    /// Truncation used; `FiniteExact` reports carry none.
    pub truncation: Option<usize>,
    pub notes: Vec<String>,
}

impl HomologyReport {
    pub fn dim(&self, degree: i64) -> usize {
        self.table.get(&degree).copied().unwrap_or(0)
    }

    pub fn table_equals(&self, other: &HomologyReport) -> bool {
        let keys: std::collections::BTreeSet<i64> = self
            .table
            .keys()
            .chain(other.table.keys())
            .copied()
            .collect();
        keys.into_iter().all(|k| self.dim(k) == other.dim(k))
    }

    pub fn to_json(&self) -> Value {
        let table: serde_json::Map<String, Value> = self
            .table
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "method": self.method.label(),
            "table": table,
            "truncation": self.truncation,
            "notes": self.notes,
        })
    }
}

/// Two dimension tables side by side with a verdict.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub left: HomologyReport,
    pub right: HomologyReport,
    pub equal: bool,
    pub notes: Vec<String>,
}

impl CompareReport {
    pub fn new(left: HomologyReport, right: HomologyReport, notes: Vec<String>) -> CompareReport {
        let equal = left.table_equals(&right);
        CompareReport {
            left,
            right,
            equal,
            notes,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "verdict": if self.equal { "EQUAL" } else { "UNEQUAL" },
            "notes": self.notes,
        })
    }
}

/// Normalize a table: drop zero entries so equality is support-insensitive.
pub fn normalize_table(table: BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    table.into_iter().filter(|(_, v)| *v > 0).collect()
}
