//! Permutation tables, one row per triple `(D, π₂D, π₃D)`:
//!
//! ```text
//! target s2-4-13.L4.1
//! label J3[13]
//! row (a,b)(4,5) | (a,b)(c,8) | 5
//! row (0,1) | inv | -
//! ```
//!
//! `inv` as the third permutation is the inverse of the second; `-` leaves
//! the intersection number unclaimed.

use std::fmt::Write as _;

use crate::actions::PermRow;
use crate::error::{Error, Result};
use crate::spectrum::SetLabel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermTable {
    /// Catalog id of the design or GDD the rows act on.
    pub target: String,
    pub label: Option<SetLabel>,
    pub rows: Vec<PermRow>,
}

impl PermTable {
    pub fn label(&self) -> SetLabel {
        self.label.clone().unwrap_or_else(|| SetLabel::Other(self.target.clone()))
    }
}

pub fn parse_table(text: &str) -> Result<PermTable> {
    let mut target = None;
    let mut label = None;
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (head, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        let rest = rest.trim();
        match head {
            "target" => target = Some(rest.to_string()),
            "label" => label = Some(rest.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?),
            "row" => {
                let cols: Vec<&str> = rest.split('|').map(str::trim).collect();
                let [p2, p3, claim] = cols[..] else {
                    return Err(Error::parse(line, "expected `row <π₂> | <π₃> | <int. no.>`"));
                };
                let claimed = match claim {
                    "-" => None,
                    c => Some(c.parse().map_err(|_| Error::parse(line, "intersection number is not an integer"))?),
                };
                rows.push(PermRow::new(p2, p3, claimed).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    let target = target.ok_or_else(|| Error::parse(1, "missing `target`"))?;
    Ok(PermTable { target, label, rows })
}

pub fn emit_table(t: &PermTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "target {}", t.target);
    if let Some(l) = &t.label {
        let _ = writeln!(out, "label {l}");
    }
    for r in &t.rows {
        let claim = r.claimed.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(out, "row {} | {} | {claim}", r.p2, r.p3);
    }
    out
}
