//! Resolvable triple systems and the `v → 3v+1` rule.
//!
//! Resolved designs use the `.res` text format: a `.des` file in which each
//! `class` line starts a new parallel class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{check_declared, ConstructionOutput, Triple};
use crate::design::format::{parse_usize, resolve_block, tokens, write_block, write_labels};
use crate::design::{verify_steiner, Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

/// A partition of a design's blocks into parallel classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub classes: Vec<Vec<Block>>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every block.
    pub fn class_of(&self) -> BTreeMap<&Block, usize> {
        self.classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |b| (b, i))).collect()
    }
}

/// Checks that the classes partition the blocks and each covers every point once.
pub fn verify_resolution(design: &Design, res: &Resolution) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (i, class) in res.classes.iter().enumerate() {
        let mut hit = vec![false; design.v()];
        for b in class {
            if !design.contains_block(b) {
                return Err(Error::Structure(format!("class {i}: {} is not a block", design.format_block(b))));
            }
            if !seen.insert(b) {
                return Err(Error::Structure(format!("{} lies in two classes", design.format_block(b))));
            }
            for &p in b.points() {
                if std::mem::replace(&mut hit[p as usize], true) {
                    return Err(Error::Structure(format!(
                        "class {i} covers `{}` twice",
                        design.labels().name(p)
                    )));
                }
            }
        }
        if let Some(p) = hit.iter().position(|h| !h) {
            return Err(Error::Structure(format!("class {i} misses `{}`", design.labels().name(p as u32))));
        }
    }
    if seen.len() != design.block_count() {
        return Err(Error::Structure(format!("{} blocks lie in no class", design.block_count() - seen.len())));
    }
    Ok(())
}

/// Lines of AG(dim, q) for prime `q`, resolved by direction. Points are
/// coordinate strings with the first coordinate first; index `Σ cᵢ qⁱ`.
/// Directions are normalised to a last nonzero coordinate of 1 and ordered
/// by index, so directions inside the hyperplane of the last coordinate come
/// first.
pub fn affine_geometry(q: usize, dim: usize) -> Result<(Design, Resolution)> {
    if q < 2 || q > 10 || (2..q).any(|d| q % d == 0) {
        return Err(Error::Precondition(format!("affine geometry needs a prime q below 10, got {q}")));
    }
    if dim == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let n = q.pow(dim as u32);
    let coords = |mut x: usize| -> Vec<usize> {
        (0..dim)
            .map(|_| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    };
    let index = |c: &[usize]| c.iter().rev().fold(0, |acc, &x| acc * q + x);
    let labels = Labels::new((0..n).map(|x| coords(x).iter().map(|c| char::from(b'0' + *c as u8)).collect::<String>()))?;
    let mut classes = Vec::new();
    for d in 1..n {
        let dc = coords(d);
        if dc.iter().rev().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut covered = vec![false; n];
        let mut class = Vec::new();
        for p in 0..n {
            if covered[p] {
                continue;
            }
            let pc = coords(p);
            let line: Vec<u32> = (0..q)
                .map(|t| {
                    let c: Vec<usize> = pc.iter().zip(&dc).map(|(a, b)| (a + t * b) % q).collect();
                    index(&c) as u32
                })
                .collect();
            for &x in &line {
                covered[x as usize] = true;
            }
            class.push(Block::new(line)?);
        }
        class.sort();
        classes.push(class);
    }
    let design = Design::new(labels, q, classes.iter().flatten().cloned())?;
    Ok((design, Resolution { classes }))
}

/// Which added point each triple of the KTS joins, in one copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    assign: BTreeMap<Block, u32>,
}

impl Alignment {
    /// Class `c` joins added point `point_of_class[c]`.
    pub fn by_classes(res: &Resolution, point_of_class: &[u32]) -> Result<Self> {
        if point_of_class.len() != res.len() {
            return Err(Error::Construction(format!("{} targets for {} classes", point_of_class.len(), res.len())));
        }
        Ok(Alignment::from_fn(res, |c, _| point_of_class[c]))
    }

    /// Triple `b` of class `c` joins `f(c, b)`.
    pub fn from_fn(res: &Resolution, f: impl Fn(usize, &Block) -> u32) -> Self {
        let assign = res.classes.iter().enumerate().flat_map(|(c, cl)| cl.iter().map(move |b| (b.clone(), c))).map(|(b, c)| {
            let p = f(c, &b);
            (b, p)
        });
        Alignment { assign: assign.collect() }
    }

    pub fn point_of(&self, b: &Block) -> Option<u32> {
        self.assign.get(b).copied()
    }
}

/// The `v → 3v+1` rule: added point `i` joins every triple assigned to it;
/// the base design lives on the added points. Labels are the KTS labels
/// followed by the base labels. Predicted common count: base common plus
/// the triples aligned alike in all three copies.
pub fn expand_3v1(bases: &Triple<Design>, kts: &Design, alignments: &[Alignment; 3]) -> Result<ConstructionOutput<Design>> {
    let v = bases[0].v();
    if kts.v() != 2 * v + 1 || kts.k() != 3 {
        return Err(Error::Construction(format!(
            "needs a triple system on {} points, got k = {} on {}",
            2 * v + 1,
            kts.k(),
            kts.v()
        )));
    }
    if bases.iter().any(|b| b.labels() != bases[0].labels() || b.k() != 4) {
        return Err(Error::Construction("base triple must be three S(2,4,v) on one point set".into()));
    }
    let labels = kts.labels().concat(bases[0].labels())?;
    let off = kts.v() as u32;
    let mut blocks: [Vec<Block>; 3] = Default::default();
    for (j, al) in alignments.iter().enumerate() {
        let mut per_point: Vec<Vec<&Block>> = vec![Vec::new(); v];
        for t in kts.blocks() {
            let p = al
                .point_of(t)
                .filter(|&p| (p as usize) < v)
                .ok_or_else(|| Error::Construction(format!("copy {j}: triple {} is unassigned", kts.format_block(t))))?;
            per_point[p as usize].push(t);
        }
        for (p, ts) in per_point.iter().enumerate() {
            let covered: BTreeSet<u32> = ts.iter().flat_map(|t| t.points().iter().copied()).collect();
            if covered.len() != kts.v() || ts.len() * 3 != kts.v() {
                return Err(Error::Construction(format!(
                    "copy {j}: triples joining `{}` do not form a parallel class",
                    bases[0].labels().name(p as u32)
                )));
            }
            blocks[j].extend(ts.iter().map(|t| Block::new(t.points().iter().copied().chain([off + p as u32])).expect("distinct")));
        }
        blocks[j].extend(bases[j].blocks().iter().map(|b| b.map(|x| x + off).expect("distinct")));
    }
    let aligned = kts
        .blocks()
        .iter()
        .filter(|t| {
            let p = alignments[0].point_of(t);
            alignments[1].point_of(t) == p && alignments[2].point_of(t) == p
        })
        .count();
    let predicted = check_declared("base triple", bases, None)? + aligned;
    let [b0, b1, b2] = blocks.map(|b| Design::new(labels.clone(), 4, b));
    let designs = Triple([b0?, b1?, b2?]);
    for (j, d) in designs.iter().enumerate() {
        if !verify_steiner(d, 2)?.is_steiner {
            return Err(Error::Construction(format!("expanded design {j} is not a Steiner system")));
        }
    }
    ConstructionOutput::measure(designs, predicted)
}

/// Common counts reachable by reassigning `classes` parallel classes of
/// `class_size` blocks among three copies, under the same-common-blocks
/// condition. A class is either fixed in all copies or lies in three
/// distinct positions, so the moved classes form a pair of derangements
/// with no shared value; this needs at least three moved classes. Found by
/// enumeration.
pub fn class_permutation_spectrum(classes: usize, class_size: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for moved in 0..=classes {
        if realizable(moved) {
            out.insert((classes - moved) * class_size);
        }
    }
    out
}

/// Whether two permutations of `m` points exist with no fixed points and
/// no point where they agree.
fn realizable(m: usize) -> bool {
    if m == 0 {
        return true;
    }
    let mut sigma: Vec<usize> = (0..m).collect();
    loop {
        if sigma.iter().enumerate().all(|(i, &s)| s != i) {
            let mut tau: Vec<usize> = (0..m).collect();
            loop {
                if tau.iter().enumerate().all(|(i, &t)| t != i && t != sigma[i]) {
                    return true;
                }
                if !next_permutation(&mut tau) {
                    break;
                }
            }
        }
        if !next_permutation(&mut sigma) {
            return false;
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("pivot exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub fn parse_resolved(text: &str) -> Result<(Design, Resolution)> {
    let mut header: Option<(usize, usize)> = None;
    let mut labels: Option<Labels> = None;
    let mut classes: Vec<Vec<(usize, Vec<String>)>> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        match (header, t.first().copied()) {
            (_, None) => {}
            (None, Some("v")) => {
                if t.get(2) != Some(&"k") {
                    return Err(Error::parse(line, "header must read `v <int> k <int>`"));
                }
                header = Some((parse_usize(t.get(1), line, "v")?, parse_usize(t.get(3), line, "k")?));
            }
            (None, _) => return Err(Error::parse(line, "expected header `v <int> k <int>`")),
            (Some(_), Some("labels")) => {
                labels = Some(Labels::new(&t[1..]).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            (Some(_), Some("class")) => classes.push(Vec::new()),
            (Some(_), Some(_)) => classes
                .last_mut()
                .ok_or_else(|| Error::parse(line, "block before the first `class` line"))?
                .push((line, t.iter().map(|s| s.to_string()).collect())),
        }
    }
    let (v, k) = header.ok_or_else(|| Error::parse(1, "empty resolution file"))?;
    let all: Vec<(usize, Vec<String>)> = classes.iter().flatten().cloned().collect();
    let labels = crate::design::format::resolve_labels(v, labels, &all)?;
    let mut res = Vec::new();
    for class in &classes {
        let mut c = Vec::new();
        for (line, toks) in class {
            if toks.len() != k {
                return Err(Error::parse(*line, format!("block has {} points, expected {k}", toks.len())));
            }
            c.push(resolve_block(&labels, *line, toks)?);
        }
        c.sort();
        res.push(c);
    }
    let design = Design::new(labels, k, res.iter().flatten().cloned())?;
    let res = Resolution { classes: res };
    verify_resolution(&design, &res)?;
    Ok((design, res))
}

pub fn emit_resolved(design: &Design, res: &Resolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "v {} k {}", design.v(), design.k());
    write_labels(&mut out, design.labels());
    for c in &res.classes {
        out.push_str("class\n");
        for b in c {
            write_block(&mut out, design.labels(), b);
        }
    }
    out
}
