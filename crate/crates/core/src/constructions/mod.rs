//! Group divisible designs and the recursive constructions that combine
//! small design triples into large ones. Every construction re-measures the
//! mutual intersection of its outputs and compares it with the count its
//! formula predicts.

mod filling;
pub mod gdd;
mod kts;
mod swap;
mod weighting;

use std::ops::Index;

use crate::actions::{common_blocks, same_common_violation};
use crate::design::{BlockSystem, Design};
use crate::error::{Error, Result};

pub use filling::{fill_plus_four, fill_plus_one, Filler};
pub use gdd::{emit_gdd, group_type_string, parse_gdd, verify_gdd, Gdd, GddReport, GddViolation};
pub use kts::{
    affine_geometry, class_permutation_spectrum, emit_resolved, expand_3v1, parse_resolved, verify_resolution,
    Alignment, Resolution,
};
pub use swap::{cover_replace, subsystem_swap};
pub use weighting::{weighting, Ingredient};

/// Three systems on one point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple<T>(pub [T; 3]);

impl<T> Triple<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Triple([a, b, c])
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Triple<U>> {
        let [a, b, c] = &self.0;
        let mut f = f;
        Ok(Triple([f(a)?, f(b)?, f(c)?]))
    }
}

impl<T: Clone> Triple<T> {
    pub fn identical(x: T) -> Self {
        Triple([x.clone(), x.clone(), x])
    }
}

impl<T> Index<usize> for Triple<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: BlockSystem> Triple<T> {
    /// Size of the mutual intersection.
    pub fn common(&self) -> Result<usize> {
        Ok(common_blocks(&[&self.0[0], &self.0[1], &self.0[2]])?.len())
    }

    /// True when every block in two members lies in all three.
    pub fn same_common(&self) -> bool {
        same_common_violation(&self.0[0], &self.0[1], &self.0[2]).is_none()
    }
}

/// Outputs of a construction with the predicted and measured common counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionOutput<T> {
    pub designs: Triple<T>,
    pub predicted_common: usize,
    pub measured_common: usize,
}

impl<T: BlockSystem> ConstructionOutput<T> {
    pub(crate) fn measure(designs: Triple<T>, predicted_common: usize) -> Result<Self> {
        let measured_common = designs.common()?;
        Ok(ConstructionOutput { designs, predicted_common, measured_common })
    }

    pub fn consistent(&self) -> bool {
        self.predicted_common == self.measured_common
    }
}

/// A triple together with the common count it is expected to have. The
/// declared count is checked against the measured one.
pub(crate) fn check_declared<T: BlockSystem>(what: &str, t: &Triple<T>, declared: Option<usize>) -> Result<usize> {
    let measured = t.common()?;
    match declared {
        Some(d) if d != measured => {
            Err(Error::Construction(format!("{what} declares {d} common blocks but has {measured}")))
        }
        _ => Ok(measured),
    }
}

/// Uniform weighting followed by filling each inflated group with one extra
/// point. With weight 3 and `3^4`/`3^5` ingredients this takes a GDD with
/// block sizes 4 and 5 to `S(2,4,3v+1)`.
pub fn assemble_plus_one(
    base: &Gdd,
    weight: usize,
    ingredients: &[Ingredient],
    fillers: &[Filler],
) -> Result<ConstructionOutput<Design>> {
    let w = weighting(base, &vec![weight; base.v()], ingredients)?;
    let out = fill_plus_one(&w.designs, fillers)?;
    Ok(ConstructionOutput { predicted_common: out.predicted_common - w.measured_common + w.predicted_common, ..out })
}

/// Uniform weighting followed by filling with four shared extra points. With
/// weight 4 and `4^4` ingredients this takes a `3^s 6^t` GDD on `v` points
/// to `S(2,4,4v+4)`.
pub fn assemble_plus_four(
    base: &Gdd,
    weight: usize,
    ingredients: &[Ingredient],
    fillers: &[Filler],
) -> Result<ConstructionOutput<Design>> {
    let w = weighting(base, &vec![weight; base.v()], ingredients)?;
    let out = fill_plus_four(&w.designs, fillers)?;
    Ok(ConstructionOutput { predicted_common: out.predicted_common - w.measured_common + w.predicted_common, ..out })
}
