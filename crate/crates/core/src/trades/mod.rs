//! μ-way trades: verification, extraction from design triples and an
//! exhaustive small-volume search.

mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::actions::{common_blocks, same_common_violation};
use crate::design::format::{resolve_block, tokens, write_block, write_labels};
use crate::design::{Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

pub use search::{search_trade, Budget, Certificate, SearchOutcome, SearchParams};

/// `μ` block collections over one label table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeSystem {
    k: usize,
    t: usize,
    labels: Labels,
    collections: Vec<Vec<Block>>,
}

impl TradeSystem {
    /// Checks block sizes, point ranges, `μ ≥ 2` and `t ≤ k`; the trade
    /// conditions themselves are left to [`verify_trade`].
    pub fn new(k: usize, t: usize, labels: Labels, collections: Vec<Vec<Block>>) -> Result<Self> {
        if collections.len() < 2 {
            return Err(Error::Structure(format!("a trade needs at least two collections, got {}", collections.len())));
        }
        if t == 0 || t > k {
            return Err(Error::Structure(format!("strength t = {t} must lie in 1..={k}")));
        }
        let v = labels.len() as u32;
        let mut collections = collections;
        for c in &mut collections {
            for b in c.iter() {
                if b.len() != k {
                    return Err(Error::Structure(format!("block {} has {} points, expected {k}", b.display(&labels), b.len())));
                }
                if b.points().iter().any(|&x| x >= v) {
                    return Err(Error::Structure(format!("block {b:?} uses a point outside the label table")));
                }
            }
            c.sort();
        }
        Ok(TradeSystem { k, t, labels, collections })
    }

    pub fn mu(&self) -> usize {
        self.collections.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn collections(&self) -> &[Vec<Block>] {
        &self.collections
    }

    /// `|T₁|`.
    pub fn volume(&self) -> usize {
        self.collections[0].len()
    }

    /// Points used by any block.
    pub fn foundation(&self) -> BTreeSet<u32> {
        self.collections.iter().flatten().flat_map(|b| b.points().iter().copied()).collect()
    }

    /// `r_x` in every collection, for each foundation point.
    pub fn replication(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut r: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.collections.iter().enumerate() {
            for b in c {
                for &x in b.points() {
                    r.entry(x).or_insert_with(|| vec![0; self.mu()])[i] += 1;
                }
            }
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TradeViolation {
    SizeMismatch { collection: usize, size: usize, expected: usize },
    NotDisjoint { first: usize, second: usize, block: Block },
    CoverageMismatch { subset: Vec<u32>, counts: Vec<usize> },
    NotSteiner { collection: usize, subset: Vec<u32>, count: usize },
    /// A collection repeats a block.
    RepeatedBlock { collection: usize, block: Block },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeReport {
    pub valid: bool,
    /// The first violation found, checked in the order: sizes, disjointness,
    /// coverage, Steiner property.
    pub violation: Option<TradeViolation>,
    pub volume: usize,
    pub foundation: BTreeSet<u32>,
    pub replication: BTreeMap<u32, Vec<usize>>,
}

impl TradeReport {
    pub fn min_replication(&self) -> Option<usize> {
        self.replication.values().flatten().copied().min()
    }
}

fn t_subsets(points: &[u32], t: usize, out: &mut Vec<Vec<u32>>) {
    fn go(points: &[u32], t: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..points.len() {
            cur.push(points[i]);
            go(points, t, i + 1, cur, out);
            cur.pop();
        }
    }
    go(points, t, 0, &mut Vec::with_capacity(t), out);
}

pub fn verify_trade(trade: &TradeSystem, steiner: bool) -> TradeReport {
    let violation = first_violation(trade, steiner);
    TradeReport {
        valid: violation.is_none(),
        violation,
        volume: trade.volume(),
        foundation: trade.foundation(),
        replication: trade.replication(),
    }
}

fn first_violation(trade: &TradeSystem, steiner: bool) -> Option<TradeViolation> {
    let cs = trade.collections();
    let s = cs[0].len();
    if let Some((i, c)) = cs.iter().enumerate().find(|(_, c)| c.len() != s) {
        return Some(TradeViolation::SizeMismatch { collection: i, size: c.len(), expected: s });
    }
    for (i, c) in cs.iter().enumerate() {
        if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
            return Some(TradeViolation::RepeatedBlock { collection: i, block: w[0].clone() });
        }
    }
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if let Some(b) = cs[i].iter().find(|b| cs[j].binary_search(b).is_ok()) {
                return Some(TradeViolation::NotDisjoint { first: i, second: j, block: b.clone() });
            }
        }
    }
    let mut cover: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    let mut subs = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        for b in c {
            subs.clear();
            t_subsets(b.points(), trade.t(), &mut subs);
            for sub in subs.drain(..) {
                cover.entry(sub).or_insert_with(|| vec![0; cs.len()])[i] += 1;
            }
        }
    }
    if let Some((sub, counts)) = cover.iter().find(|(_, c)| c.iter().any(|&x| x != c[0])) {
        return Some(TradeViolation::CoverageMismatch { subset: sub.clone(), counts: counts.clone() });
    }
    if steiner {
        for (sub, counts) in &cover {
            if let Some((i, &c)) = counts.iter().enumerate().find(|(_, &c)| c > 1) {
                return Some(TradeViolation::NotSteiner { collection: i, subset: sub.clone(), count: c });
            }
        }
    }
    None
}

/// Removes the mutual common blocks of a design triple; the leftovers
/// form a 3-way trade.
pub fn extract_trade(d1: &Design, d2: &Design, d3: &Design) -> Result<TradeSystem> {
    if d1.k() != d2.k() || d1.k() != d3.k() {
        return Err(Error::Mismatch("designs have different block sizes".into()));
    }
    let common: BTreeSet<Block> = common_blocks(&[d1, d2, d3])?.into_iter().collect();
    if let Some(b) = same_common_violation(d1, d2, d3) {
        return Err(Error::Precondition(format!(
            "block {} lies in exactly two of the designs, so the leftovers overlap",
            d1.format_block(&b)
        )));
    }
    let rest = |d: &Design| d.blocks().iter().filter(|b| !common.contains(b)).cloned().collect::<Vec<_>>();
    TradeSystem::new(d1.k(), 2, d1.labels().clone(), vec![rest(d1), rest(d2), rest(d3)])
}

/// The `.trd` text format: header `mu <m> k <k> t <t>`, optional `labels`,
/// then `collection` lines each followed by that collection's blocks.
pub fn parse_trade(text: &str) -> Result<TradeSystem> {
    let mut header = None;
    let mut labels = None;
    let mut collections: Vec<Vec<(usize, Vec<String>)>> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        match (header, t[0]) {
            (None, "mu") => {
                let num = |i: usize, what: &str| -> Result<usize> {
                    if t.get(i - 1).copied() != Some(what) {
                        return Err(Error::parse(line, "expected header `mu <m> k <k> t <t>`"));
                    }
                    t.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| Error::parse(line, format!("bad {what}")))
                };
                header = Some((num(1, "mu")?, num(3, "k")?, num(5, "t")?));
            }
            (None, _) => return Err(Error::parse(line, "expected header `mu <m> k <k> t <t>`")),
            (Some(_), "labels") => labels = Some(Labels::new(&t[1..]).map_err(|e| Error::parse(line, e.to_string()))?),
            (Some(_), "collection") => collections.push(Vec::new()),
            (Some(_), _) => collections
                .last_mut()
                .ok_or_else(|| Error::parse(line, "block before the first `collection` line"))?
                .push((line, t.iter().map(|s| s.to_string()).collect())),
        }
    }
    let (mu, k, t) = header.ok_or_else(|| Error::parse(1, "empty trade file"))?;
    if collections.len() != mu {
        return Err(Error::parse(1, format!("header says mu = {mu}, found {} collections", collections.len())));
    }
    let labels = match labels {
        Some(l) => l,
        None => Labels::from_unordered(collections.iter().flatten().flat_map(|(_, b)| b))?,
    };
    let cs = collections
        .iter()
        .map(|c| c.iter().map(|(line, b)| resolve_block(&labels, *line, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TradeSystem::new(k, t, labels, cs)
}

pub fn emit_trade(trade: &TradeSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mu {} k {} t {}", trade.mu(), trade.k(), trade.t());
    write_labels(&mut out, trade.labels());
    for c in trade.collections() {
        out.push_str("collection\n");
        for b in c {
            write_block(&mut out, trade.labels(), b);
        }
    }
    out
}
