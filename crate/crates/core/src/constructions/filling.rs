use super::{check_declared, ConstructionOutput, Gdd, Triple};
use crate::design::{verify_steiner, Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

/// Steiner system triple filling one group. `attach` lists the filler points
/// that become the adjoined points; the others map onto the group in index
/// order.
#[derive(Clone, Debug)]
pub struct Filler {
    pub designs: Triple<Design>,
    pub attach: Vec<u32>,
    pub declared_common: Option<usize>,
}

impl Filler {
    /// Attaches the last point.
    pub fn plus_one(designs: Triple<Design>) -> Self {
        let last = designs[0].v().saturating_sub(1) as u32;
        Filler { designs, attach: vec![last], declared_common: None }
    }

    /// Attaches the points of `y`, which must be a block of all three designs.
    pub fn plus_four(designs: Triple<Design>, y: Block) -> Self {
        Filler { designs, attach: y.points().to_vec(), declared_common: None }
    }

    pub fn with_attach(designs: Triple<Design>, attach: &[&str]) -> Result<Self> {
        let attach = attach.iter().map(|t| designs[0].point(t)).collect::<Result<_>>()?;
        Ok(Filler { designs, attach, declared_common: None })
    }

    pub fn declared(mut self, common: usize) -> Self {
        self.declared_common = Some(common);
        self
    }
}

/// Adjoins a point `inf` to every group of the GDD triple and fills group `i`
/// with `fillers[i]`. Predicted common count: `b + Σ b_i`.
pub fn fill_plus_one(gdds: &Triple<Gdd>, fillers: &[Filler]) -> Result<ConstructionOutput<Design>> {
    fill(gdds, fillers, &["inf"])
}

/// Adjoins `inf1..inf4`. Every filler contains the block on the adjoined
/// points; only the last group keeps it. Predicted common count:
/// `b + Σ b_i - (s - 1)` for `s` groups.
pub fn fill_plus_four(gdds: &Triple<Gdd>, fillers: &[Filler]) -> Result<ConstructionOutput<Design>> {
    fill(gdds, fillers, &["inf1", "inf2", "inf3", "inf4"])
}

fn fill(gdds: &Triple<Gdd>, fillers: &[Filler], extra: &[&str]) -> Result<ConstructionOutput<Design>> {
    let base = &gdds[0];
    if !gdds.iter().all(|g| g.same_groups(base)) {
        return Err(Error::Construction("GDD triple does not share its groups".into()));
    }
    if fillers.len() != base.groups().len() {
        return Err(Error::Construction(format!("{} fillers for {} groups", fillers.len(), base.groups().len())));
    }
    let labels = base.labels().concat(&Labels::new(extra)?)?;
    let n = base.v() as u32;
    let y = Block::new(n..n + extra.len() as u32)?;
    let drop_y = extra.len() > 1;

    let mut blocks: [Vec<Block>; 3] = Default::default();
    for (j, g) in gdds.iter().enumerate() {
        blocks[j].extend(g.blocks().iter().cloned());
    }
    let mut predicted = check_declared("GDD triple", gdds, None)?;
    let last = fillers.len().saturating_sub(1);
    for (i, (group, f)) in base.groups().iter().zip(fillers).enumerate() {
        let what = format!("filler for group {i}");
        let fv = f.designs[0].v();
        if fv != group.len() + extra.len() || f.attach.len() != extra.len() {
            return Err(Error::Construction(format!(
                "{what} has {fv} points and {} attached, group has {}",
                f.attach.len(),
                group.len()
            )));
        }
        if f.designs.iter().any(|d| d.labels() != f.designs[0].labels()) {
            return Err(Error::Construction(format!("{what} members use different point sets")));
        }
        let mut map = vec![u32::MAX; fv];
        for (j, &a) in f.attach.iter().enumerate() {
            if a as usize >= fv || map[a as usize] != u32::MAX {
                return Err(Error::Construction(format!("{what} has a bad attach list")));
            }
            map[a as usize] = n + j as u32;
        }
        let mut rest = group.iter();
        for m in map.iter_mut().filter(|m| **m == u32::MAX) {
            *m = *rest.next().expect("sizes checked");
        }
        let count = check_declared(&what, &f.designs, f.declared_common)?;
        predicted += count;
        for (j, d) in f.designs.iter().enumerate() {
            if !verify_steiner(d, 2)?.is_steiner {
                return Err(Error::Construction(format!("{what} member {j} is not a Steiner system")));
            }
            let mapped = d.blocks().iter().map(|b| b.map(|p| map[p as usize])).collect::<Result<Vec<_>>>()?;
            if drop_y && !mapped.contains(&y) {
                return Err(Error::Construction(format!("{what} member {j} lacks the block on the attached points")));
            }
            blocks[j].extend(mapped.into_iter().filter(|b| !(drop_y && i != last && *b == y)));
        }
        if drop_y && i != last {
            predicted -= 1;
        }
    }
    let k = fillers.first().map_or(4, |f| f.designs[0].k());
    let [b0, b1, b2] = blocks.map(|b| Design::new(labels.clone(), k, b));
    let designs = Triple([b0?, b1?, b2?]);
    for (j, d) in designs.iter().enumerate() {
        if !verify_steiner(d, 2)?.is_steiner {
            return Err(Error::Construction(format!("filled design {j} is not a Steiner system")));
        }
    }
    ConstructionOutput::measure(designs, predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{apply_permutation, Permutation};
    use crate::design::delete_point;

    fn s13() -> Design {
        let blocks = "0139 028c 0457 06ab 124a 1568 17bc 235b 2679 346c 378a 489b 59ac";
        let blocks: Vec<Vec<String>> =
            blocks.split_whitespace().map(|b| b.chars().map(|c| c.to_string()).collect()).collect();
        Design::from_tokens(4, None, &blocks).unwrap()
    }

    fn s4() -> Design {
        Design::from_tokens(4, None, &[vec!["0", "1", "2", "3"]]).unwrap()
    }

    #[test]
    fn deletion_then_plus_one_restores() {
        let d = s13();
        let g = delete_point(&d, 0).unwrap();
        let fillers: Vec<Filler> = g.groups().iter().map(|_| Filler::plus_one(Triple::identical(s4()))).collect();
        let out = fill_plus_one(&Triple::identical(g), &fillers).unwrap();
        assert_eq!(out.designs[0].block_count(), 13);
        assert_eq!(out.predicted_common, 13);
        assert!(out.consistent());
    }

    #[test]
    fn plus_four_single_group_keeps_block() {
        let labels = Labels::numeric(9);
        let g = Gdd::new(labels, vec![(0..9).collect()], []).unwrap();
        let d = s13();
        let y = d.blocks()[0].clone();
        let out = fill_plus_four(&Triple::identical(g), &[Filler::plus_four(Triple::identical(d), y)]).unwrap();
        assert_eq!(out.designs[0].block_count(), 13);
        assert_eq!(out.predicted_common, 13);
        assert!(out.consistent());
    }

    #[test]
    fn declared_count_and_filler_arity() {
        let d = s13();
        let g = delete_point(&d, 0).unwrap();
        let mut fillers: Vec<Filler> = g.groups().iter().map(|_| Filler::plus_one(Triple::identical(s4()))).collect();
        let p = Permutation::parse("(0,1)").unwrap();
        let swapped = apply_permutation(&s4(), &p).unwrap();
        fillers[1] = Filler::plus_one(Triple::new(s4(), swapped.clone(), swapped)).declared(1);
        let out = fill_plus_one(&Triple::identical(g), &fillers).unwrap();
        assert!(out.consistent());
        assert!(fill_plus_one(&Triple::identical(delete_point(&d, 0).unwrap()), &fillers[..2]).is_err());
    }
}
