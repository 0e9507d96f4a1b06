//! Brute-force oracles over label strings, written without the library's
//! index machinery.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use steiner_core::design::BlockSystem;

pub type NBlock = BTreeSet<String>;

pub fn blocks_of<T: BlockSystem>(s: &T) -> Vec<NBlock> {
    s.blocks().iter().map(|b| b.points().iter().map(|&p| s.labels().name(p).to_string()).collect()).collect()
}

pub fn points_of<T: BlockSystem>(s: &T) -> Vec<String> {
    s.labels().names().to_vec()
}

/// Every pair of points in exactly one block, every block of size `k`.
pub fn is_steiner(points: &[String], blocks: &[NBlock], k: usize) -> bool {
    if blocks.iter().any(|b| b.len() != k) {
        return false;
    }
    let mut count: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for b in blocks {
        let v: Vec<&String> = b.iter().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                *count.entry((v[i], v[j])).or_default() += 1;
            }
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = if points[i] < points[j] { (&points[i], &points[j]) } else { (&points[j], &points[i]) };
            if count.get(&(a.as_str(), b.as_str())) != Some(&1) {
                return false;
            }
        }
    }
    true
}

pub fn common(a: &[NBlock], b: &[NBlock], c: &[NBlock]) -> usize {
    a.iter().filter(|x| b.contains(x) && c.contains(x)).count()
}

/// Pairwise intersections all equal the triple one.
pub fn same_common(a: &[NBlock], b: &[NBlock], c: &[NBlock]) -> bool {
    let n = common(a, b, c);
    let two = |x: &[NBlock], y: &[NBlock]| x.iter().filter(|b| y.contains(b)).count();
    two(a, b) == n && two(a, c) == n && two(b, c) == n
}

/// Cycle notation `(a,b,c)(d,e)` or `id`, as a label map.
pub fn cycles(text: &str) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    if text.trim() == "id" {
        return m;
    }
    for cyc in text.split(')').map(|c| c.trim().trim_start_matches('(')).filter(|c| !c.is_empty()) {
        let pts: Vec<&str> = cyc.split(',').map(str::trim).collect();
        for i in 0..pts.len() {
            m.insert(pts[i].to_string(), pts[(i + 1) % pts.len()].to_string());
        }
    }
    m
}

pub fn invert(m: &BTreeMap<String, String>) -> BTreeMap<String, String> {
    m.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
}

pub fn image(blocks: &[NBlock], m: &BTreeMap<String, String>) -> Vec<NBlock> {
    blocks.iter().map(|b| b.iter().map(|p| m.get(p).unwrap_or(p).clone()).collect()).collect()
}

/// Rows of a `.perm` file as `(π₂, π₃, printed)`.
pub fn perm_rows(text: &str) -> Vec<(BTreeMap<String, String>, BTreeMap<String, String>, Option<usize>)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix("row "))
        .map(|r| {
            let cols: Vec<&str> = r.split('|').map(str::trim).collect();
            let p2 = cycles(cols[0]);
            let p3 = if cols[1] == "inv" { invert(&p2) } else { cycles(cols[1]) };
            (p2, p3, cols[2].parse().ok())
        })
        .collect()
}

/// Intersection sizes of `(B, π₂B, π₃B)` over the rows.
pub fn table_sizes(blocks: &[NBlock], perm_text: &str) -> BTreeSet<usize> {
    perm_rows(perm_text).iter().map(|(p2, p3, _)| common(blocks, &image(blocks, p2), &image(blocks, p3))).collect()
}

/// Develops a `.dev` file: `<class><i>` tokens shift mod the order, others
/// stay fixed; orbits are deduplicated.
pub fn develop_text(text: &str) -> (Vec<String>, Vec<NBlock>) {
    let mut order = 0usize;
    let mut classes: Vec<String> = Vec::new();
    let mut consts: Vec<String> = Vec::new();
    let mut base: Vec<Vec<String>> = Vec::new();
    let mut literal: Vec<NBlock> = Vec::new();
    for line in text.lines() {
        let t: Vec<&str> = line.split('#').next().unwrap().split_whitespace().collect();
        match t.first() {
            Some(&"order") => order = t[1].parse().unwrap(),
            Some(&"classes") => classes = t[1..].iter().map(|s| s.to_string()).collect(),
            Some(&"const") => consts = t[1..].iter().map(|s| s.to_string()).collect(),
            Some(&"base") => base.push(t[1..].iter().map(|s| s.to_string()).collect()),
            Some(&"literal") => literal.push(t[1..].iter().map(|s| s.to_string()).collect()),
            _ => {}
        }
    }
    let shift = |tok: &str, s: usize| -> String {
        for c in &classes {
            if let Some(i) = tok.strip_prefix(c.as_str()).and_then(|r| r.parse::<usize>().ok()) {
                return format!("{c}{}", (i + s) % order);
            }
        }
        tok.to_string()
    };
    let mut out: BTreeSet<NBlock> = literal.into_iter().collect();
    for b in &base {
        for s in 0..order {
            out.insert(b.iter().map(|t| shift(t, s)).collect());
        }
    }
    let mut points: Vec<String> = classes.iter().flat_map(|c| (0..order).map(move |i| format!("{c}{i}"))).collect();
    points.extend(consts);
    (points, out.into_iter().collect())
}

/// All sums with one element per slot.
pub fn sums(slots: &[(&BTreeSet<i64>, usize)], offset: i64) -> BTreeSet<i64> {
    let mut acc = BTreeSet::from([offset]);
    for (set, count) in slots {
        for _ in 0..*count {
            acc = acc.iter().flat_map(|a| set.iter().map(move |x| a + x)).collect();
        }
    }
    acc
}

/// `[0, b]` without `[b - 7, b - 1]` for `b = v(v-1)/12`.
pub fn i3(v: i64) -> BTreeSet<i64> {
    let b = v * (v - 1) / 12;
    (0..=b).filter(|&x| x == b || x < b - 7).collect()
}

/// Which numbers of moved classes two further copies can realise: every
/// moved class sits at three distinct positions. Exhaustive for small `m`,
/// and the shifts by one and two cover `m ≥ 3`.
pub fn moved_counts(m: usize) -> BTreeSet<usize> {
    let mut ok = BTreeSet::from([0]);
    for j in 1..=m {
        let feasible = if j <= 5 {
            let perms = permutations(j);
            perms.iter().any(|s| {
                s.iter().enumerate().all(|(i, &x)| x != i)
                    && perms.iter().any(|t| t.iter().enumerate().all(|(i, &y)| y != i && y != s[i]))
            })
        } else {
            (0..j).all(|i| (i + 1) % j != i && (i + 2) % j != i && (i + 1) % j != (i + 2) % j)
        };
        if feasible {
            ok.insert(j);
        }
    }
    ok
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
