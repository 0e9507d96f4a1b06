use super::{check_declared, ConstructionOutput, Gdd, Triple};
use crate::design::{Block, BlockSystem, Labels};
use crate::error::{Error, Result};

/// GDD triple placed on the copies of one base block. Its groups must have
/// the block's weights as sizes and be shared by all three members.
#[derive(Clone, Debug)]
pub struct Ingredient {
    pub gdds: Triple<Gdd>,
    pub declared_common: Option<usize>,
}

impl Ingredient {
    pub fn new(gdds: Triple<Gdd>) -> Self {
        Ingredient { gdds, declared_common: None }
    }

    pub fn declared(mut self, common: usize) -> Self {
        self.declared_common = Some(common);
        self
    }
}

/// Gives point `x` of `base` `weights[x]` copies, labelled `<x>_<copy>`, and
/// replaces block `base.blocks()[i]` by the blocks of `ingredients[i]`. The
/// result has groups `S(G)` for the base groups `G`; the predicted common
/// count is the sum of the ingredient counts.
pub fn weighting(base: &Gdd, weights: &[usize], ingredients: &[Ingredient]) -> Result<ConstructionOutput<Gdd>> {
    if weights.len() != base.v() {
        return Err(Error::Construction(format!("{} weights for {} points", weights.len(), base.v())));
    }
    if ingredients.len() != base.blocks().len() {
        return Err(Error::Construction(format!(
            "{} ingredients for {} base blocks",
            ingredients.len(),
            base.blocks().len()
        )));
    }
    let mut offset = Vec::with_capacity(weights.len());
    let mut names = Vec::new();
    for (x, &w) in weights.iter().enumerate() {
        offset.push(names.len() as u32);
        names.extend((0..w).map(|c| format!("{}_{c}", base.labels().name(x as u32))));
    }
    let labels = Labels::new(&names)?;
    let groups: Vec<Vec<u32>> = base
        .groups()
        .iter()
        .map(|g| g.iter().flat_map(|&x| (0..weights[x as usize] as u32).map(|c| offset[x as usize] + c).collect::<Vec<_>>()).collect())
        .filter(|g: &Vec<u32>| !g.is_empty())
        .collect();

    let mut blocks: [Vec<Block>; 3] = Default::default();
    let mut predicted = 0;
    for (i, (blk, ing)) in base.blocks().iter().zip(ingredients).enumerate() {
        let what = format!("ingredient for base block {}", base.format_block(blk));
        let first = &ing.gdds[0];
        if !ing.gdds.iter().all(|g| g.same_groups(first)) {
            return Err(Error::Construction(format!("{what} does not share its groups")));
        }
        for g in ing.gdds.iter() {
            let rep = super::verify_gdd(g);
            if !rep.valid {
                return Err(Error::Construction(format!("{what} is not a GDD: {:?}", rep.violations.first())));
            }
        }
        let map = match_groups(first, blk, weights)
            .ok_or_else(|| Error::Construction(format!("{what} has group type {}", first.group_type())))?;
        let to_out: Vec<u32> = {
            let mut t = vec![0; first.v()];
            for (g, &x) in first.groups().iter().zip(&map) {
                for (c, &p) in g.iter().enumerate() {
                    t[p as usize] = offset[x as usize] + c as u32;
                }
            }
            t
        };
        for (j, g) in ing.gdds.iter().enumerate() {
            for b in g.blocks() {
                blocks[j].push(b.map(|p| to_out[p as usize])?);
            }
        }
        predicted += check_declared(&format!("ingredient {i}"), &ing.gdds, ing.declared_common)?;
    }
    let [b0, b1, b2] = blocks.map(|b| Gdd::new(labels.clone(), groups.clone(), b));
    let designs = Triple([b0?, b1?, b2?]);
    for g in designs.iter() {
        let rep = super::verify_gdd(g);
        if !rep.valid {
            return Err(Error::Construction(format!("weighted result is not a GDD: {:?}", rep.violations.first())));
        }
    }
    ConstructionOutput::measure(designs, predicted)
}

/// Pairs each ingredient group with a point of `blk` of equal weight. Points
/// are taken in index order, groups in their stored order.
fn match_groups(ing: &Gdd, blk: &Block, weights: &[usize]) -> Option<Vec<u32>> {
    let mut free: Vec<u32> = blk.points().iter().copied().filter(|&x| weights[x as usize] > 0).collect();
    if free.len() != ing.groups().len() {
        return None;
    }
    let mut out = Vec::with_capacity(free.len());
    for g in ing.groups() {
        let pos = free.iter().position(|&x| weights[x as usize] == g.len())?;
        out.push(free.remove(pos));
    }
    Some(out)
}
