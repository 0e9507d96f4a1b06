//! Points, blocks and designs; Steiner verification and the basic
//! structural operations on a single design.

mod cover;
pub(crate) mod exact_cover;
pub(crate) mod format;
mod labels;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::constructions::Gdd;
use crate::error::{Error, Result};

pub use cover::{complete_cover, Completions, DEFAULT_COMPLETION_LIMIT};
pub use format::{emit_design, parse_design};
pub use labels::{canonical_token, natural_cmp, Labels};

/// A block: strictly increasing point indices, so block equality is set
/// equality and the derived order is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<u32>);

impl Block {
    /// Sorts the points; a repeated point is a structural error.
    pub fn new(points: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut p: Vec<u32> = points.into_iter().collect();
        p.sort_unstable();
        if p.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("block {p:?} repeats a point")));
        }
        Ok(Block(p))
    }

    pub fn points(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// All unordered pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let p = &self.0;
        (0..p.len()).flat_map(move |i| (i + 1..p.len()).map(move |j| (p[i], p[j])))
    }

    /// Image under a point map. Fails if the map is not injective on the block.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> Result<Block> {
        Block::new(self.0.iter().map(|&x| f(x)))
    }

    pub fn meet(&self, set: &BTreeSet<u32>) -> usize {
        self.0.iter().filter(|x| set.contains(x)).count()
    }

    /// Renders the block with the given labels, e.g. `{0,1,3,9}`.
    pub fn display<'a>(&'a self, labels: &'a Labels) -> impl fmt::Display + 'a {
        BlockDisplay { block: self, labels }
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

struct BlockDisplay<'a> {
    block: &'a Block,
    labels: &'a Labels,
}

impl fmt::Display for BlockDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &p) in self.block.points().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.labels.name(p))?;
        }
        write!(f, "}}")
    }
}

/// Anything with a labelled point set and a sorted block list.
pub trait BlockSystem {
    fn labels(&self) -> &Labels;
    fn blocks(&self) -> &[Block];

    fn v(&self) -> usize {
        self.labels().len()
    }

    fn contains_block(&self, b: &Block) -> bool {
        self.blocks().binary_search(b).is_ok()
    }

    fn format_block(&self, b: &Block) -> String {
        b.display(self.labels()).to_string()
    }
}

/// A point set with a set of `k`-element blocks. Immutable after
/// construction; blocks are kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Design {
    k: usize,
    labels: Labels,
    blocks: Vec<Block>,
}

impl Design {
    /// Checks block sizes, index ranges and distinctness.
    pub fn new(labels: Labels, k: usize, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let v = labels.len() as u32;
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        for b in &blocks {
            if b.len() != k {
                return Err(Error::Structure(format!("block {b:?} has {} points, expected {k}", b.len())));
            }
            if let Some(&x) = b.points().iter().find(|&&x| x >= v) {
                return Err(Error::Structure(format!("point index {x} out of range for v = {v}")));
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("duplicate block {}", w[0].display(&labels))));
        }
        Ok(Design { k, labels, blocks })
    }

    /// Builds a design from blocks written as label tokens. Without an explicit
    /// label table, labels are collected from the blocks in natural order.
    pub fn from_tokens<S: AsRef<str>>(k: usize, labels: Option<Labels>, blocks: &[Vec<S>]) -> Result<Self> {
        let labels = match labels {
            Some(l) => l,
            None => Labels::from_unordered(blocks.iter().flatten().map(|s| s.as_ref().to_string()))?,
        };
        let blocks = blocks
            .iter()
            .map(|b| Block::new(b.iter().map(|t| labels.index_of(t.as_ref())).collect::<Result<Vec<_>>>()?))
            .collect::<Result<Vec<_>>>()?;
        Design::new(labels, k, blocks)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn point(&self, label: &str) -> Result<u32> {
        self.labels.index_of(label)
    }

    /// Same blocks over a different table containing the same labels.
    pub fn reindex(&self, labels: &Labels) -> Result<Design> {
        if labels.len() != self.labels.len() {
            return Err(Error::Mismatch(format!("label tables of size {} and {}", self.labels.len(), labels.len())));
        }
        let map: Vec<u32> = self.labels.names().iter().map(|n| labels.index_of(n)).collect::<Result<_>>()?;
        let blocks = self.blocks.iter().map(|b| b.map(|x| map[x as usize])).collect::<Result<Vec<_>>>()?;
        Design::new(labels.clone(), self.k, blocks)
    }

    /// Replaces the block set, keeping labels and `k`.
    pub fn with_blocks(&self, blocks: impl IntoIterator<Item = Block>) -> Result<Design> {
        Design::new(self.labels.clone(), self.k, blocks)
    }

    pub fn expected_steiner_blocks(&self) -> Option<usize> {
        steiner_block_count(self.v(), self.k)
    }
}

impl BlockSystem for Design {
    fn labels(&self) -> &Labels {
        &self.labels
    }

    fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

/// `v(v-1) / (k(k-1))` when integral.
pub fn steiner_block_count(v: usize, k: usize) -> Option<usize> {
    let num = v * v.saturating_sub(1);
    let den = k * k.saturating_sub(1);
    (den > 0 && num % den == 0).then(|| num / den)
}

/// Pair-coverage verdict for a design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub is_steiner: bool,
    /// Count for every unordered pair `(a, b)`, `a < b`, including zeros.
    pub pair_counts: BTreeMap<(u32, u32), u32>,
    /// Pairs whose count is not 1.
    pub violations: Vec<((u32, u32), u32)>,
    pub block_count: usize,
    pub expected_block_count: Option<usize>,
    /// Blocks through each point.
    pub replication: Vec<usize>,
}

/// Checks that every pair of points lies in exactly one block.
pub fn verify_steiner(design: &Design, t: usize) -> Result<CoverageReport> {
    if t != 2 {
        return Err(Error::Precondition(format!("only t = 2 is supported, got t = {t}")));
    }
    let v = design.v();
    let counts = pair_count_matrix(v, design.blocks());
    let mut replication = vec![0usize; v];
    for b in design.blocks() {
        for &x in b.points() {
            replication[x as usize] += 1;
        }
    }
    let mut pair_counts = BTreeMap::new();
    let mut violations = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            let c = counts[a * v + b];
            pair_counts.insert((a as u32, b as u32), c);
            if c != 1 {
                violations.push(((a as u32, b as u32), c));
            }
        }
    }
    let expected = design.expected_steiner_blocks();
    let is_steiner = violations.is_empty() && expected == Some(design.block_count());
    Ok(CoverageReport {
        is_steiner,
        pair_counts,
        violations,
        block_count: design.block_count(),
        expected_block_count: expected,
        replication,
    })
}

/// Dense `v*v` pair-count table, upper triangle filled.
pub(crate) fn pair_count_matrix(v: usize, blocks: &[Block]) -> Vec<u32> {
    let mut counts = vec![0u32; v * v];
    for b in blocks {
        for (x, y) in b.pairs() {
            counts[x as usize * v + y as usize] += 1;
        }
    }
    counts
}

/// The blocks through `x`.
pub fn flower(design: &Design, x: u32) -> Result<Vec<Block>> {
    check_point(design, x)?;
    Ok(design.blocks().iter().filter(|b| b.contains(x)).cloned().collect())
}

fn check_point(design: &Design, x: u32) -> Result<()> {
    if (x as usize) < design.v() {
        Ok(())
    } else {
        Err(Error::UnknownPoint(format!("#{x}")))
    }
}

/// Deletes `x` from a Steiner system: the flower of `x` minus `x` become
/// the groups, the blocks avoiding `x` stay.
pub fn delete_point(design: &Design, x: u32) -> Result<Gdd> {
    check_point(design, x)?;
    if !verify_steiner(design, 2)?.is_steiner {
        return Err(Error::Precondition("point deletion needs a Steiner system".into()));
    }
    let shift = |p: u32| if p > x { p - 1 } else { p };
    let labels = design.labels().without(x);
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for b in design.blocks() {
        if b.contains(x) {
            groups.push(b.points().iter().filter(|&&p| p != x).map(|&p| shift(p)).collect::<Vec<_>>());
        } else {
            blocks.push(b.map(shift)?);
        }
    }
    Gdd::new(labels, groups, blocks)
}

/// Blocks split by how many points they share with a subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetPartition {
    /// At least two points in the subset.
    pub a: Vec<Block>,
    /// No point in the subset.
    pub b: Vec<Block>,
    /// Exactly one point in the subset.
    pub c: Vec<Block>,
}

pub fn classify_by_subset(design: &Design, subset: &BTreeSet<u32>) -> Result<SubsetPartition> {
    if let Some(&x) = subset.iter().find(|&&x| x as usize >= design.v()) {
        return Err(Error::UnknownPoint(format!("#{x}")));
    }
    let mut out = SubsetPartition { a: vec![], b: vec![], c: vec![] };
    for blk in design.blocks() {
        match blk.meet(subset) {
            0 => out.b.push(blk.clone()),
            1 => out.c.push(blk.clone()),
            _ => out.a.push(blk.clone()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s13() -> Design {
        let cols = [
            "0 0 0 0 1 1 1 2 2 3 3 4 5",
            "1 2 4 6 2 5 7 3 6 4 7 8 9",
            "3 8 5 a 4 6 b 5 7 6 8 9 a",
            "9 c 7 b a 8 c b 9 c a b c",
        ];
        let rows: Vec<Vec<&str>> = cols.iter().map(|r| r.split_whitespace().collect()).collect();
        let blocks: Vec<Vec<&str>> = (0..13).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        Design::from_tokens(4, None, &blocks).unwrap()
    }

    #[test]
    fn s13_is_steiner() {
        let d = s13();
        let r = verify_steiner(&d, 2).unwrap();
        assert!(r.is_steiner);
        assert_eq!(r.block_count, 13);
        assert!(r.replication.iter().all(|&x| x == 4));
    }

    #[test]
    fn single_block_is_steiner() {
        let d = Design::from_tokens(4, None, &[vec!["0", "1", "2", "3"]]).unwrap();
        let r = verify_steiner(&d, 2).unwrap();
        assert!(r.is_steiner);
        assert_eq!(r.block_count, 1);
    }

    #[test]
    fn replaced_block_breaks_coverage() {
        let d = s13();
        let l = d.labels().clone();
        let old = Block::new(["0", "1", "3", "9"].map(|t| l.get(t).unwrap())).unwrap();
        let new = Block::new(["0", "1", "3", "5"].map(|t| l.get(t).unwrap())).unwrap();
        let d2 = d.with_blocks(d.blocks().iter().map(|b| if *b == old { new.clone() } else { b.clone() })).unwrap();
        let r = verify_steiner(&d2, 2).unwrap();
        assert!(!r.is_steiner);
        // brute-force recount
        let count = |x: &str, y: &str| {
            let (a, b) = (l.get(x).unwrap(), l.get(y).unwrap());
            d2.blocks().iter().filter(|blk| blk.contains(a) && blk.contains(b)).count() as u32
        };
        assert_eq!(count("0", "9"), 0);
        assert_eq!(count("1", "5"), 2);
        let (a, b) = (l.get("0").unwrap(), l.get("9").unwrap());
        assert_eq!(r.pair_counts[&(a.min(b), a.max(b))], 0);
        let (a, b) = (l.get("1").unwrap(), l.get("5").unwrap());
        assert!(r.violations.contains(&((a.min(b), a.max(b)), 2)));
    }

    #[test]
    fn malformed_designs_are_structural_errors() {
        let l = Labels::numeric(4);
        assert!(matches!(Design::new(l.clone(), 4, [Block(vec![0, 1, 2, 7])]), Err(Error::Structure(_))));
        let b = Block::new([0, 1, 2, 3]).unwrap();
        assert!(matches!(Design::new(l.clone(), 4, [b.clone(), b]), Err(Error::Structure(_))));
        assert!(Block::new([1, 1, 2, 3]).is_err());
        assert!(verify_steiner(&Design::new(l, 4, []).unwrap(), 3).is_err());
    }

    #[test]
    fn flower_and_delete() {
        let d = s13();
        let f = flower(&d, d.point("0").unwrap()).unwrap();
        let shown: Vec<String> = f.iter().map(|b| d.format_block(b)).collect();
        assert_eq!(shown, ["{0,1,3,9}", "{0,2,8,c}", "{0,4,5,7}", "{0,6,a,b}"]);
        let g = delete_point(&d, 0).unwrap();
        assert_eq!(g.blocks().len(), 9);
        assert!(crate::constructions::verify_gdd(&g).valid);
        assert_eq!(crate::constructions::verify_gdd(&g).group_type, "3^4");
        assert!(flower(&d, 13).is_err());
    }

    #[test]
    fn delete_from_single_block() {
        let d = Design::from_tokens(4, None, &[vec!["0", "1", "2", "3"]]).unwrap();
        let g = delete_point(&d, 0).unwrap();
        assert!(g.blocks().is_empty());
        // one group {1,2,3}; three singleton groups would leave their pairs uncovered
        let r = crate::constructions::verify_gdd(&g);
        assert!(r.valid);
        assert_eq!(r.group_type, "3^1");
    }

    #[test]
    fn empty_subset_classification() {
        let d = s13();
        let p = classify_by_subset(&d, &BTreeSet::new()).unwrap();
        assert!(p.a.is_empty() && p.c.is_empty());
        assert_eq!(p.b.len(), 13);
    }
}
