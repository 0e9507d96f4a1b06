use std::collections::{BTreeMap, BTreeSet};

use super::{check_declared, ConstructionOutput, Triple};
use crate::design::{verify_steiner, Block, BlockSystem, Design};
use crate::error::{Error, Result};

/// Replaces the sub-design of `host` on the points of `subs` by each member
/// of `subs` in turn. Sub-point labels are matched by name. Predicted
/// common count: `b_v - b_w + |common(subs)|`.
pub fn subsystem_swap(host: &Design, subs: &Triple<Design>) -> Result<ConstructionOutput<Design>> {
    let sub_labels = subs[0].labels();
    if subs.iter().any(|s| s.labels() != sub_labels) {
        return Err(Error::Mismatch("sub-design triple uses different point sets".into()));
    }
    let map: Vec<u32> = sub_labels.names().iter().map(|n| host.point(n)).collect::<Result<_>>()?;
    let points: BTreeSet<u32> = map.iter().copied().collect();
    let (inside, outside): (Vec<&Block>, Vec<&Block>) =
        host.blocks().iter().partition(|b| b.points().iter().all(|p| points.contains(p)));
    let sub_count = crate::design::steiner_block_count(points.len(), host.k());
    if sub_count != Some(inside.len()) {
        return Err(Error::Precondition(format!(
            "host has {} blocks inside the {} sub-points, not a sub-design",
            inside.len(),
            points.len()
        )));
    }
    let mut out = Vec::with_capacity(3);
    for (j, s) in subs.iter().enumerate() {
        if !verify_steiner(s, 2)?.is_steiner || s.k() != host.k() {
            return Err(Error::Construction(format!("sub-design {j} is not a Steiner system")));
        }
        let mapped = s.blocks().iter().map(|b| b.map(|p| map[p as usize])).collect::<Result<Vec<_>>>()?;
        out.push(host.with_blocks(outside.iter().map(|b| (*b).clone()).chain(mapped))?);
    }
    let predicted = outside.len() + check_declared("sub-design triple", subs, None)?;
    let designs = Triple(out.try_into().expect("three outputs"));
    ConstructionOutput::measure(designs, predicted)
}

/// `(blocks ∖ old) ∪ new`, provided `old` and `new` cover the same pairs.
pub fn cover_replace(design: &Design, old: &[Block], new: &[Block]) -> Result<Design> {
    for b in old {
        if !design.contains_block(b) {
            return Err(Error::Precondition(format!("{} is not a block of the design", design.format_block(b))));
        }
    }
    let pairs = |bs: &[Block]| {
        let mut m: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for b in bs {
            for p in b.pairs() {
                *m.entry(p).or_default() += 1;
            }
        }
        m
    };
    let (po, pn) = (pairs(old), pairs(new));
    let keys: BTreeSet<&(u32, u32)> = po.keys().chain(pn.keys()).collect();
    for &&(x, y) in &keys {
        let (a, b) = (po.get(&(x, y)).copied().unwrap_or(0), pn.get(&(x, y)).copied().unwrap_or(0));
        if a != b {
            let l = design.labels();
            return Err(Error::Construction(format!(
                "pair {{{},{}}} covered {a} times by the old blocks and {b} by the new",
                l.name(x),
                l.name(y)
            )));
        }
    }
    let old: BTreeSet<&Block> = old.iter().collect();
    design.with_blocks(design.blocks().iter().filter(|b| !old.contains(b)).chain(new).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{apply_permutation, Permutation};
    use crate::design::Labels;

    fn s13() -> Design {
        let blocks = "0139 028c 0457 06ab 124a 1568 17bc 235b 2679 346c 378a 489b 59ac";
        let blocks: Vec<Vec<String>> =
            blocks.split_whitespace().map(|b| b.chars().map(|c| c.to_string()).collect()).collect();
        Design::from_tokens(4, None, &blocks).unwrap()
    }

    #[test]
    fn swap_on_whole_design() {
        let d = s13();
        let p2 = Permutation::parse("(a,b)(4,5)").unwrap();
        let p3 = Permutation::parse("(a,b)(c,8)").unwrap();
        let subs = Triple::new(d.clone(), apply_permutation(&d, &p2).unwrap(), apply_permutation(&d, &p3).unwrap());
        let out = subsystem_swap(&d, &subs).unwrap();
        assert_eq!(out.measured_common, 5);
        assert!(out.consistent());
    }

    #[test]
    fn swap_needs_sub_design() {
        let d = s13();
        let labels = Labels::new(["0", "1", "2", "3"]).unwrap();
        let sub = Design::new(labels, 4, [Block::new([0, 1, 2, 3]).unwrap()]).unwrap();
        assert!(matches!(subsystem_swap(&d, &Triple::identical(sub)), Err(Error::Precondition(_))));
    }

    #[test]
    fn cover_replace_identity_and_mismatch() {
        let d = s13();
        let old = d.blocks()[..2].to_vec();
        assert_eq!(cover_replace(&d, &old, &old).unwrap(), d);
        let err = cover_replace(&d, &old, &old[..1]).unwrap_err().to_string();
        assert!(err.contains("pair"), "{err}");
    }
}
