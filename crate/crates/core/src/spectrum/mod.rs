//! Block counts, the candidate sets `I_3[v]`, sum closures and the registry
//! of achieved intersection sizes.

mod closure;
mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use closure::{parse_closure_spec, sum_closure, ClosureFile, ClosureSpec, Term};
pub use registry::{emit_ledger, parse_ledger, Registry};

/// `v(v-1)/12`, the block count of an S(2,4,v).
pub fn b(v: u64) -> Result<u64> {
    if v % 12 == 1 || v % 12 == 4 {
        Ok(v * (v - 1) / 12)
    } else {
        Err(Error::Inadmissible(v))
    }
}

/// `[0, b_v]` without `[b_v - 7, b_v - 1]`.
pub fn i3(v: u64) -> Result<SpectrumSet> {
    let bv = b(v)? as i64;
    let values = (0..=bv).filter(|&x| x >= bv || x < bv - 7);
    Ok(SpectrumSet::from_values(SetLabel::I3(v), values, Witness::Formula))
}

/// Which set a [`SpectrumSet`] describes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetLabel {
    J3(u64),
    /// Beyond a common parallel class.
    Jp3(u64),
    /// Beyond a common flower.
    Jf3(u64),
    I3(u64),
    Other(String),
}

impl SetLabel {
    pub fn order(&self) -> Option<u64> {
        match *self {
            SetLabel::J3(v) | SetLabel::Jp3(v) | SetLabel::Jf3(v) | SetLabel::I3(v) => Some(v),
            SetLabel::Other(_) => None,
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetLabel::J3(v) => write!(f, "J3[{v}]"),
            SetLabel::Jp3(v) => write!(f, "Jp3[{v}]"),
            SetLabel::Jf3(v) => write!(f, "Jf3[{v}]"),
            SetLabel::I3(v) => write!(f, "I3[{v}]"),
            SetLabel::Other(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for SetLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let indexed = |prefix: &str| {
            s.strip_prefix(prefix).and_then(|r| r.strip_prefix('[')).and_then(|r| r.strip_suffix(']')).and_then(|r| r.parse().ok())
        };
        Ok(if let Some(v) = indexed("J3") {
            SetLabel::J3(v)
        } else if let Some(v) = indexed("Jp3") {
            SetLabel::Jp3(v)
        } else if let Some(v) = indexed("Jf3") {
            SetLabel::Jf3(v)
        } else if let Some(v) = indexed("I3") {
            SetLabel::I3(v)
        } else if !s.is_empty() && !s.contains(char::is_whitespace) {
            SetLabel::Other(s.to_string())
        } else {
            return Err(Error::Structure(format!("bad set label `{s}`")));
        })
    }
}

/// Where a value came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Follows from a definition (`I_3`, `b_v`).
    Formula,
    /// A permutation row of a catalog table (0-based row index).
    ScanRow { table: String, row: usize },
    /// One element per closure slot, plus the spec's offset.
    Closure { parts: Vec<i64>, offset: i64 },
    /// A verified construction run.
    Construction(String),
    /// Ingested or cited, not replayed here.
    External(String),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Formula => "formula",
            Witness::ScanRow { .. } => "scan",
            Witness::Closure { .. } => "closure",
            Witness::Construction(_) => "construction",
            Witness::External(_) => "external",
        }
    }

    /// Whitespace-free reference string used in ledgers; closures render as
    /// `0+4+16` or `13+5@-3`.
    pub fn reference(&self) -> String {
        match self {
            Witness::Formula => "-".into(),
            Witness::ScanRow { table, row } => format!("{table}#{row}"),
            Witness::Closure { parts, offset } => {
                let mut s = if parts.is_empty() {
                    "none".to_string()
                } else {
                    parts.iter().map(i64::to_string).collect::<Vec<_>>().join("+")
                };
                if *offset != 0 {
                    s.push_str(&format!("@{offset}"));
                }
                s
            }
            Witness::Construction(r) | Witness::External(r) => r.clone(),
        }
    }

    pub fn parse(kind: &str, reference: &str) -> Result<Witness> {
        let bad = || Error::Structure(format!("bad {kind} witness `{reference}`"));
        Ok(match kind {
            "formula" => Witness::Formula,
            "scan" => {
                let (table, row) = reference.rsplit_once('#').ok_or_else(bad)?;
                Witness::ScanRow { table: table.into(), row: row.parse().map_err(|_| bad())? }
            }
            "closure" => {
                // `a+b+c` with an optional `@offset` suffix
                let (sum, offset) = match reference.split_once('@') {
                    Some((p, o)) => (p, o.parse().map_err(|_| bad())?),
                    None => (reference, 0),
                };
                let parts = if sum == "none" {
                    Vec::new()
                } else {
                    sum.split('+').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?
                };
                Witness::Closure { parts, offset }
            }
            "construction" => Witness::Construction(reference.into()),
            "external" => Witness::External(reference.into()),
            _ => return Err(Error::Structure(format!("unknown witness kind `{kind}`"))),
        })
    }
}

/// A set of intersection sizes, each carrying one witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSet {
    pub label: SetLabel,
    values: BTreeMap<i64, Witness>,
}

impl SpectrumSet {
    pub fn new(label: SetLabel) -> Self {
        SpectrumSet { label, values: BTreeMap::new() }
    }

    pub fn from_values(label: SetLabel, values: impl IntoIterator<Item = i64>, witness: Witness) -> Self {
        let mut s = SpectrumSet::new(label);
        for v in values {
            s.insert(v, witness.clone());
        }
        s
    }

    /// Keeps the first witness recorded for a value.
    pub fn insert(&mut self, value: i64, witness: Witness) -> bool {
        use std::collections::btree_map::Entry;
        match self.values.entry(value) {
            Entry::Vacant(e) => {
                e.insert(witness);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn contains(&self, value: i64) -> bool {
        self.values.contains_key(&value)
    }

    pub fn witness(&self, value: i64) -> Option<&Witness> {
        self.values.get(&value)
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.keys().copied()
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.values().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &Witness)> {
        self.values.iter().map(|(&v, w)| (v, w))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.values.keys().next().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.values.keys().next_back().copied()
    }

    /// Adds every value of `other` not yet present, keeping existing witnesses.
    pub fn merge(&mut self, other: &SpectrumSet) {
        for (v, w) in other.entries() {
            self.insert(v, w.clone());
        }
    }
}

/// Renders a value set compactly, e.g. `{0..5,13}`.
pub fn format_values(values: impl IntoIterator<Item = i64>) -> String {
    let v: Vec<i64> = values.into_iter().collect();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
            j += 1;
        }
        parts.push(match j - i {
            0 => v[i].to_string(),
            1 => format!("{},{}", v[i], v[j]),
            _ => format!("{}..{}", v[i], v[j]),
        });
        i = j + 1;
    }
    format!("{{{}}}", parts.join(","))
}

/// Parses `0..5,13` or `{0,1,2}` style value lists.
pub fn parse_values(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in text.split(|c: char| c == ',' || c.is_whitespace() || c == '{' || c == '}').filter(|p| !p.is_empty()) {
        let bad = || Error::Structure(format!("bad value `{part}`"));
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumDiff {
    /// In the target but not found.
    pub missing: Vec<i64>,
    /// Found but not in the target.
    pub extra: Vec<i64>,
}

impl SpectrumDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare(found: &SpectrumSet, target: &SpectrumSet) -> SpectrumDiff {
    SpectrumDiff {
        missing: target.values().filter(|&v| !found.contains(v)).collect(),
        extra: found.values().filter(|&v| !target.contains(v)).collect(),
    }
}
