use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::design::format::{parse_usize, resolve_block, resolve_labels, tokens, write_block, write_labels};
use crate::design::{pair_count_matrix, Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

/// Group divisible design: a partition of the points into groups plus
/// blocks of sizes from `K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gdd {
    labels: Labels,
    groups: Vec<Vec<u32>>,
    blocks: Vec<Block>,
}

impl Gdd {
    /// Checks that the groups partition the points and the blocks are
    /// distinct and in range. Group and block coverage is left to
    /// [`verify_gdd`].
    pub fn new(labels: Labels, groups: Vec<Vec<u32>>, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let v = labels.len();
        let mut seen = vec![false; v];
        let mut groups: Vec<Vec<u32>> = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        for g in &groups {
            if g.is_empty() {
                return Err(Error::Structure("empty group".into()));
            }
            for &x in g {
                let x = x as usize;
                if x >= v {
                    return Err(Error::Structure(format!("group point index {x} out of range")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Structure(format!("point `{}` lies in two groups", labels.name(x as u32))));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Structure(format!("point `{}` lies in no group", labels.name(x as u32))));
        }
        groups.sort();
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        for b in &blocks {
            if let Some(&x) = b.points().iter().find(|&&x| x as usize >= v) {
                return Err(Error::Structure(format!("point index {x} out of range for v = {v}")));
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("duplicate block {}", w[0].display(&labels))));
        }
        Ok(Gdd { labels, groups, blocks })
    }

    /// Groups taken from a set of blocks of `design` (e.g. a parallel class);
    /// the remaining blocks become the GDD's blocks.
    pub fn from_design_class(design: &Design, class: &[Block]) -> Result<Self> {
        let class_set: BTreeSet<&Block> = class.iter().collect();
        for b in class {
            if !design.contains_block(b) {
                return Err(Error::Precondition(format!("{} is not a block of the design", design.format_block(b))));
            }
        }
        let groups = class.iter().map(|b| b.points().to_vec()).collect();
        let blocks = design.blocks().iter().filter(|b| !class_set.contains(b)).cloned();
        Gdd::new(design.labels().clone(), groups, blocks)
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn with_blocks(&self, blocks: impl IntoIterator<Item = Block>) -> Result<Gdd> {
        Gdd::new(self.labels.clone(), self.groups.clone(), blocks)
    }

    /// Sizes in group order.
    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Type string such as `3^5` or `12^2 24^1`, sizes ascending.
    pub fn group_type(&self) -> String {
        group_type_string(&self.group_sizes())
    }

    /// Group index of every point.
    pub fn group_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.labels.len()];
        for (i, g) in self.groups.iter().enumerate() {
            for &x in g {
                of[x as usize] = i;
            }
        }
        of
    }

    /// Adds a new point to every group, turns each enlarged group into a
    /// block and keeps the GDD blocks: the inverse of point deletion.
    pub fn adjoin_point(&self, label: &str) -> Result<Design> {
        let mut labels = self.labels.clone();
        let x = labels.push(label)?;
        let k = self.groups.first().map_or(0, Vec::len) + 1;
        let mut blocks = self.blocks.clone();
        for g in &self.groups {
            blocks.push(Block::new(g.iter().copied().chain([x]))?);
        }
        Design::new(labels, k, blocks)
    }

    pub fn same_groups(&self, other: &Gdd) -> bool {
        self.labels == other.labels && self.groups == other.groups
    }
}

impl BlockSystem for Gdd {
    fn labels(&self) -> &Labels {
        &self.labels
    }

    fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

pub fn group_type_string(sizes: &[usize]) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in sizes {
        *counts.entry(s).or_default() += 1;
    }
    counts.iter().map(|(g, u)| format!("{g}^{u}")).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GddViolation {
    /// A block meets a group in more than one point.
    BlockMeetsGroup { block: Block, group: usize, meet: usize },
    /// A pair inside one group is covered by a block.
    GroupPairCovered { pair: (u32, u32) },
    /// A cross-group pair is covered a number of times other than one.
    CrossPair { pair: (u32, u32), count: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GddReport {
    pub valid: bool,
    pub group_type: String,
    pub block_sizes: BTreeSet<usize>,
    pub violations: Vec<GddViolation>,
}

pub fn verify_gdd(gdd: &Gdd) -> GddReport {
    let v = gdd.v();
    let of = gdd.group_of();
    let mut violations = Vec::new();
    for b in gdd.blocks() {
        let mut meet: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in b.points() {
            *meet.entry(of[x as usize]).or_default() += 1;
        }
        for (&g, &m) in &meet {
            if m > 1 {
                violations.push(GddViolation::BlockMeetsGroup { block: b.clone(), group: g, meet: m });
            }
        }
    }
    let counts = pair_count_matrix(v, gdd.blocks());
    for a in 0..v {
        for b in a + 1..v {
            let c = counts[a * v + b];
            let pair = (a as u32, b as u32);
            if of[a] == of[b] {
                if c > 0 {
                    violations.push(GddViolation::GroupPairCovered { pair });
                }
            } else if c != 1 {
                violations.push(GddViolation::CrossPair { pair, count: c });
            }
        }
    }
    GddReport {
        valid: violations.is_empty(),
        group_type: gdd.group_type(),
        block_sizes: gdd.blocks().iter().map(Block::len).collect(),
        violations,
    }
}

/// The `.gdd` text format: `v <int>`, optional `labels`, `group` lines,
/// then block lines.
pub fn parse_gdd(text: &str) -> Result<Gdd> {
    let mut v = None;
    let mut labels = None;
    let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
    let mut blocks: Vec<(usize, Vec<String>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        match (v, t[0]) {
            (None, "v") => v = Some(parse_usize(t.get(1), line, "v")?),
            (None, _) => return Err(Error::parse(line, "expected header `v <int>`")),
            (Some(_), "labels") => {
                labels = Some(Labels::new(&t[1..]).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            (Some(_), "group") => groups.push((line, t[1..].iter().map(|s| s.to_string()).collect())),
            (Some(_), _) => blocks.push((line, t.iter().map(|s| s.to_string()).collect())),
        }
    }
    let v = v.ok_or_else(|| Error::parse(1, "empty gdd file"))?;
    let all: Vec<(usize, Vec<String>)> = groups.iter().chain(&blocks).cloned().collect();
    let labels = resolve_labels(v, labels, &all)?;
    let groups = groups
        .iter()
        .map(|(line, g)| resolve_block(&labels, *line, g).map(|b| b.points().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let blocks = blocks.iter().map(|(line, b)| resolve_block(&labels, *line, b)).collect::<Result<Vec<_>>>()?;
    Gdd::new(labels, groups, blocks)
}

pub fn emit_gdd(gdd: &Gdd) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "v {}", gdd.v());
    write_labels(&mut out, gdd.labels());
    for g in gdd.groups() {
        out.push_str("group ");
        write_block(&mut out, gdd.labels(), &Block::new(g.iter().copied()).expect("group"));
    }
    for b in gdd.blocks() {
        write_block(&mut out, gdd.labels(), b);
    }
    out
}
