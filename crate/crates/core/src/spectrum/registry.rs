use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{SetLabel, SpectrumSet, Witness};
use crate::error::{Error, Result};

/// Achieved sets keyed by label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    sets: BTreeMap<SetLabel, SpectrumSet>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Records a value; the first witness for a value wins.
    pub fn record(&mut self, label: &SetLabel, value: i64, witness: Witness) -> bool {
        self.sets.entry(label.clone()).or_insert_with(|| SpectrumSet::new(label.clone())).insert(value, witness)
    }

    pub fn record_set(&mut self, set: &SpectrumSet) {
        for (v, w) in set.entries() {
            self.record(&set.label, v, w.clone());
        }
    }

    pub fn get(&self, label: &SetLabel) -> Option<&SpectrumSet> {
        self.sets.get(label)
    }

    pub fn sets(&self) -> impl Iterator<Item = &SpectrumSet> {
        self.sets.values()
    }
}

/// One line per value: `<set-label> <value> <witness-kind> <ref>`.
pub fn emit_ledger(registry: &Registry) -> String {
    let mut out = String::new();
    for set in registry.sets() {
        for (v, w) in set.entries() {
            let _ = writeln!(out, "{} {} {} {}", set.label, v, w.kind(), w.reference());
        }
    }
    out
}

pub fn parse_ledger(text: &str) -> Result<Registry> {
    let mut reg = Registry::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        // `#` separates table and row in scan references, so only leading `#` starts a comment
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let t: Vec<&str> = raw.split_whitespace().collect();
        if t.is_empty() {
            continue;
        }
        let [label, value, kind, reference] = t[..] else {
            return Err(Error::parse(line, "expected `<set-label> <value> <witness-kind> <ref>`"));
        };
        let label: SetLabel = label.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let value = value.parse().map_err(|_| Error::parse(line, "value is not an integer"))?;
        let witness = Witness::parse(kind, reference).map_err(|e| Error::parse(line, e.to_string()))?;
        reg.record(&label, value, witness);
    }
    Ok(reg)
}
