//! Construction plans: a base GDD, a uniform weight, ingredient triples per
//! base block and, optionally, filler triples per inflated group.
//!
//! ```text
//! base gdd gdd-3-4.L4.8.delete-0
//! weight 4
//! ingredient * gdd-4-4.L4.5.perms#0
//! ingredient 2,5 gdd-4-4.L4.5.perms#3
//! fill plus-one
//! filler * s2-4-13.L4.1.perms#6
//! ```
//!
//! A selection is `<table-id>#<row>` (rows count from 0) or a catalog id,
//! which stands for three identical copies. Later lines override earlier
//! ones for the slots they name.

use std::collections::BTreeSet;

use super::{catalog, Payload};
use crate::actions::{apply_permutation, PermRow, Permutable};
use crate::constructions::{
    affine_geometry, fill_plus_four, fill_plus_one, weighting, ConstructionOutput, Filler, Gdd, Ingredient, Triple,
};
use crate::design::{delete_point, Block, BlockSystem, Design};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanBase {
    Gdd(String),
    /// A catalog design with one point deleted.
    Delete { design: String, point: String },
    /// AG(dim, q), optionally with a point deleted; otherwise the groups are
    /// singletons.
    Affine { q: usize, dim: usize, delete: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillMode {
    PlusOne,
    PlusFour,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// `None` for every slot.
    pub slots: Option<Vec<usize>>,
    pub source: String,
    pub row: Option<usize>,
    /// Filler points that become the adjoined points.
    pub attach: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub base: PlanBase,
    pub weight: usize,
    pub ingredients: Vec<Selection>,
    pub fill: Option<FillMode>,
    pub fillers: Vec<Selection>,
}

/// What a plan produced, with the common count of every slot in order.
#[derive(Clone, Debug)]
pub struct PlanOutput {
    pub base: Gdd,
    pub weighted: ConstructionOutput<Gdd>,
    pub filled: Option<ConstructionOutput<Design>>,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
}

impl PlanOutput {
    pub fn predicted_common(&self) -> usize {
        self.filled.as_ref().map_or(self.weighted.predicted_common, |f| f.predicted_common)
    }

    pub fn measured_common(&self) -> usize {
        self.filled.as_ref().map_or(self.weighted.measured_common, |f| f.measured_common)
    }
}

pub fn parse_plan(text: &str) -> Result<Plan> {
    let mut base = None;
    let mut weight = None;
    let mut fill = None;
    let (mut ingredients, mut fillers) = (Vec::new(), Vec::new());
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        // `#` inside a token names a row; a token starting with `#` opens a comment
        let t: Vec<&str> = raw.split_whitespace().take_while(|w| !w.starts_with('#')).collect();
        let Some((&head, rest)) = t.split_first() else { continue };
        let err = |msg: &str| Error::parse(line, msg);
        match head {
            "base" => {
                base = Some(match rest {
                    ["gdd", id] => PlanBase::Gdd(id.to_string()),
                    ["delete", design, point] => PlanBase::Delete { design: design.to_string(), point: point.to_string() },
                    ["affine", q, dim, tail @ ..] => {
                        let q = q.parse().map_err(|_| err("q is not an integer"))?;
                        let dim = dim.parse().map_err(|_| err("dim is not an integer"))?;
                        let delete = match tail {
                            [] => None,
                            ["delete", p] => Some(p.to_string()),
                            _ => return Err(err("expected `base affine <q> <dim> [delete <point>]`")),
                        };
                        PlanBase::Affine { q, dim, delete }
                    }
                    _ => return Err(err("expected `base gdd <id>`, `base delete <id> <point>` or `base affine ...`")),
                })
            }
            "weight" => {
                let [w] = rest else { return Err(err("expected `weight <n>`")) };
                weight = Some(w.parse().map_err(|_| err("weight is not an integer"))?);
            }
            "fill" => {
                fill = Some(match rest {
                    ["plus-one"] => FillMode::PlusOne,
                    ["plus-four"] => FillMode::PlusFour,
                    _ => return Err(err("expected `fill plus-one|plus-four`")),
                })
            }
            "ingredient" | "filler" => {
                let sel = parse_selection(rest).map_err(|m| err(&m))?;
                if head == "ingredient" {
                    if sel.attach.is_some() {
                        return Err(err("ingredients take no attach list"));
                    }
                    ingredients.push(sel);
                } else {
                    fillers.push(sel);
                }
            }
            other => return Err(err(&format!("unknown directive `{other}`"))),
        }
    }
    let base = base.ok_or_else(|| Error::parse(1, "missing `base`"))?;
    let weight = weight.ok_or_else(|| Error::parse(1, "missing `weight`"))?;
    if fill.is_none() && !fillers.is_empty() {
        return Err(Error::parse(1, "fillers given without `fill`"));
    }
    Ok(Plan { base, weight, ingredients, fill, fillers })
}

fn parse_selection(rest: &[&str]) -> std::result::Result<Selection, String> {
    let (slots, sel, tail) = match rest {
        [slots, sel, tail @ ..] => (slots, sel, tail),
        _ => return Err("expected `<slots> <selection> [attach <points>]`".into()),
    };
    let slots = match *slots {
        "*" => None,
        s => Some(
            s.split(',').map(|x| x.parse().map_err(|_| format!("bad slot `{x}`"))).collect::<std::result::Result<_, _>>()?,
        ),
    };
    let (source, row) = match sel.split_once('#') {
        Some((src, r)) => (src.to_string(), Some(r.parse().map_err(|_| format!("bad row `{r}`"))?)),
        None => (sel.to_string(), None),
    };
    let attach = match tail {
        [] => None,
        ["attach", pts @ ..] if !pts.is_empty() => Some(pts.iter().map(|p| p.to_string()).collect()),
        _ => return Err("expected `attach <points>` after the selection".into()),
    };
    Ok(Selection { slots, source, row, attach })
}

/// The triple `(D, π₂D, π₃D)` of a table row.
pub fn row_triple<T: Permutable + Clone>(system: &T, row: &PermRow) -> Result<Triple<T>> {
    Ok(Triple::new(system.clone(), apply_permutation(system, &row.p2)?, apply_permutation(system, &row.p3)?))
}

/// Resolves a selection to a GDD or design triple of the catalog.
fn resolve(sel: &Selection) -> Result<(Payload, Option<&'static PermRow>)> {
    let cat = catalog()?;
    let entry = cat.get(&sel.source)?;
    match (&entry.payload, sel.row) {
        (Payload::Table(t), Some(r)) => {
            let row = t.rows.get(r).ok_or_else(|| {
                Error::Precondition(format!("`{}` has {} rows, no row {r}", sel.source, t.rows.len()))
            })?;
            Ok((cat.get(&t.target)?.payload.clone(), Some(row)))
        }
        (Payload::Table(_), None) => Err(Error::Precondition(format!("`{}` is a table; name a row with `#`", sel.source))),
        (_, Some(_)) => Err(Error::Precondition(format!("`{}` is not a table", sel.source))),
        (p, None) => Ok((p.clone(), None)),
    }
}

fn gdd_triple(sel: &Selection) -> Result<Triple<Gdd>> {
    match resolve(sel)? {
        (Payload::Gdd(g), Some(row)) => row_triple(&g, row),
        (Payload::Gdd(g), None) => Ok(Triple::identical(g)),
        _ => Err(Error::Mismatch(format!("`{}` does not give a GDD", sel.source))),
    }
}

fn design_triple(sel: &Selection) -> Result<Triple<Design>> {
    let d = match resolve(sel)? {
        (Payload::Design(d) | Payload::DevSpec(_, d) | Payload::Resolution(d, _), row) => (d, row),
        _ => return Err(Error::Mismatch(format!("`{}` does not give a design", sel.source))),
    };
    match d {
        (d, Some(row)) => row_triple(&d, row),
        (d, None) => Ok(Triple::identical(d)),
    }
}

/// Applies `sels` in order to `n` slots; every slot must end up chosen.
fn assign<'a>(what: &str, n: usize, sels: &'a [Selection]) -> Result<Vec<&'a Selection>> {
    let mut out: Vec<Option<&Selection>> = vec![None; n];
    for s in sels {
        match &s.slots {
            None => out.iter_mut().for_each(|o| *o = Some(s)),
            Some(idx) => {
                for &i in idx {
                    *out.get_mut(i).ok_or_else(|| Error::Precondition(format!("{what} slot {i} out of range 0..{n}")))? =
                        Some(s);
                }
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Error::Precondition(format!("{what} slot {i} has no selection"))))
        .collect()
}

pub fn base_gdd(base: &PlanBase) -> Result<Gdd> {
    let cat = catalog()?;
    match base {
        PlanBase::Gdd(id) => Ok(cat.gdd(id)?.clone()),
        PlanBase::Delete { design, point } => {
            let d = cat.design(design)?;
            delete_point(d, d.point(point)?)
        }
        PlanBase::Affine { q, dim, delete } => {
            let (d, _) = affine_geometry(*q, *dim)?;
            match delete {
                Some(p) => delete_point(&d, d.point(p)?),
                None => Gdd::new(d.labels().clone(), (0..d.v() as u32).map(|x| vec![x]).collect(), d.blocks().iter().cloned()),
            }
        }
    }
}

pub fn run_plan(plan: &Plan) -> Result<PlanOutput> {
    let base = base_gdd(&plan.base)?;
    let ingredients: Vec<Ingredient> = assign("ingredient", base.blocks().len(), &plan.ingredients)?
        .into_iter()
        .map(|s| gdd_triple(s).map(Ingredient::new))
        .collect::<Result<_>>()?;
    let alphas = ingredients.iter().map(|i| i.gdds.common()).collect::<Result<Vec<_>>>()?;
    let weighted = weighting(&base, &vec![plan.weight; base.v()], &ingredients)?;
    let Some(mode) = plan.fill else {
        return Ok(PlanOutput { base, weighted, filled: None, alphas, betas: vec![] });
    };
    let groups = weighted.designs[0].groups().len();
    let fillers: Vec<Filler> = assign("filler", groups, &plan.fillers)?
        .into_iter()
        .map(|s| {
            let designs = design_triple(s)?;
            match (&s.attach, mode) {
                (Some(pts), _) => Filler::with_attach(designs, &pts.iter().map(String::as_str).collect::<Vec<_>>()),
                (None, FillMode::PlusOne) => Ok(Filler::plus_one(designs)),
                (None, FillMode::PlusFour) => {
                    let y = first_common(&designs)
                        .ok_or_else(|| Error::Precondition(format!("`{}` shares no block to attach", s.source)))?;
                    Ok(Filler::plus_four(designs, y))
                }
            }
        })
        .collect::<Result<_>>()?;
    let betas = fillers.iter().map(|f| f.designs.common()).collect::<Result<Vec<_>>>()?;
    let filled = match mode {
        FillMode::PlusOne => fill_plus_one(&weighted.designs, &fillers)?,
        FillMode::PlusFour => fill_plus_four(&weighted.designs, &fillers)?,
    };
    Ok(PlanOutput { base, weighted, filled: Some(filled), alphas, betas })
}

fn first_common(t: &Triple<Design>) -> Option<Block> {
    let (b, c): (BTreeSet<&Block>, BTreeSet<&Block>) = (t[1].blocks().iter().collect(), t[2].blocks().iter().collect());
    t[0].blocks().iter().find(|x| b.contains(x) && c.contains(x)).cloned()
}
