use std::collections::BTreeSet;

use rayon::prelude::*;

use super::perm::{parse_third, Permutable, Permutation};
use crate::design::{Block, BlockSystem};
use crate::error::{Error, Result};
use crate::spectrum::{SetLabel, SpectrumSet, Witness};

/// Blocks present in every system. All systems must share one label table.
pub fn common_blocks<T: BlockSystem>(systems: &[&T]) -> Result<Vec<Block>> {
    let Some((first, rest)) = systems.split_first() else {
        return Ok(Vec::new());
    };
    for s in rest {
        if s.labels() != first.labels() {
            return Err(Error::Mismatch(format!("point sets of sizes {} and {} differ", first.v(), s.v())));
        }
    }
    Ok(first.blocks().iter().filter(|b| rest.iter().all(|s| s.contains_block(b))).cloned().collect())
}

/// A block lying in exactly two of the three systems, if any. Such a block
/// breaks the "same common blocks" condition.
pub fn same_common_violation<T: BlockSystem>(a: &T, b: &T, c: &T) -> Option<Block> {
    let all: BTreeSet<&Block> = a.blocks().iter().chain(b.blocks()).chain(c.blocks()).collect();
    all.into_iter()
        .find(|blk| [a, b, c].iter().filter(|s| s.contains_block(blk)).count() == 2)
        .cloned()
}

/// One row of a permutation table; `π₁` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermRow {
    pub p2: Permutation,
    pub p3: Permutation,
    /// The printed intersection number, when there is one.
    pub claimed: Option<usize>,
}

impl PermRow {
    pub fn new(p2: &str, p3: &str, claimed: Option<usize>) -> Result<Self> {
        let p2 = Permutation::parse(p2)?;
        let p3 = parse_third(p3, &p2)?;
        Ok(PermRow { p2, p3, claimed })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowResult {
    pub row: usize,
    pub common: usize,
    /// Every block in two of the designs lies in all three.
    pub same_common: bool,
    pub offending: Option<Block>,
    /// Both images keep the structure (groups of a GDD).
    pub structure_preserved: bool,
    pub claimed: Option<usize>,
}

impl RowResult {
    pub fn matches_claim(&self) -> bool {
        self.claimed.is_none_or(|c| c == self.common)
    }

    pub fn is_clean(&self) -> bool {
        self.same_common && self.structure_preserved && self.matches_claim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub rows: Vec<RowResult>,
    /// Achieved sizes, each witnessed by its first row.
    pub spectrum: SpectrumSet,
}

impl ScanReport {
    pub fn flagged(&self) -> impl Iterator<Item = &RowResult> {
        self.rows.iter().filter(|r| !r.is_clean())
    }
}

/// Mutual intersection of `(D, π₂D, π₃D)` for every row. Rows run in
/// parallel; results are in row order.
pub fn spectrum_scan<T: Permutable>(system: &T, rows: &[PermRow], table: &str, label: SetLabel) -> Result<ScanReport> {
    let results: Vec<RowResult> = rows
        .par_iter()
        .enumerate()
        .map(|(i, row)| {
            let d2 = system.permuted(&row.p2.bind(system.labels())?)?;
            let d3 = system.permuted(&row.p3.bind(system.labels())?)?;
            let common = common_blocks(&[system, &d2, &d3])?.len();
            let offending = same_common_violation(system, &d2, &d3);
            Ok(RowResult {
                row: i,
                common,
                same_common: offending.is_none(),
                offending,
                structure_preserved: system.same_structure(&d2) && system.same_structure(&d3),
                claimed: row.claimed,
            })
        })
        .collect::<Result<_>>()?;
    let mut spectrum = SpectrumSet::new(label);
    for r in &results {
        spectrum.insert(r.common as i64, Witness::ScanRow { table: table.to_string(), row: r.row });
    }
    Ok(ScanReport { rows: results, spectrum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{Design, Labels};

    fn s13() -> Design {
        let blocks = "0139 028c 0457 06ab 124a 1568 17bc 235b 2679 346c 378a 489b 59ac";
        let blocks: Vec<Vec<String>> =
            blocks.split_whitespace().map(|b| b.chars().map(|c| c.to_string()).collect()).collect();
        Design::from_tokens(4, None, &blocks).unwrap()
    }

    fn brute_common(a: &Design, b: &Design, c: &Design) -> usize {
        a.blocks().iter().filter(|x| b.blocks().contains(x) && c.blocks().contains(x)).count()
    }

    #[test]
    fn identical_triple_shares_everything() {
        let d = s13();
        assert_eq!(common_blocks(&[&d, &d, &d]).unwrap().len(), 13);
        assert!(same_common_violation(&d, &d, &d).is_none());
    }

    #[test]
    fn mismatched_labels() {
        let d = s13();
        let e = Design::new(Labels::numeric(13), 4, []).unwrap();
        assert!(matches!(common_blocks(&[&d, &e]), Err(Error::Mismatch(_))));
    }

    #[test]
    fn scan_agrees_with_brute_force() {
        let d = s13();
        let rows = [
            PermRow::new("id", "id", Some(13)).unwrap(),
            PermRow::new("(a,b)(4,5)", "(a,b)(c,8)", None).unwrap(),
            PermRow::new("(0,1,2,3,4,5)", "(5,4,3,2,1,0)", Some(0)).unwrap(),
            PermRow::new("(0,1)", "inv", None).unwrap(),
        ];
        let rep = spectrum_scan(&d, &rows, "t", SetLabel::J3(13)).unwrap();
        for (r, row) in rep.rows.iter().zip(&rows) {
            let d2 = crate::actions::apply_permutation(&d, &row.p2).unwrap();
            let d3 = crate::actions::apply_permutation(&d, &row.p3).unwrap();
            assert_eq!(r.common, brute_common(&d, &d2, &d3));
        }
        assert_eq!(rep.rows[0].common, 13);
        assert_eq!(rep.rows[1].common, 5);
        assert_eq!(rep.rows[2].common, 0);
        // (0,1) is an involution, so the second and third images coincide
        assert!(!rep.rows[3].same_common);
        assert_eq!(rep.spectrum.witness(5), Some(&Witness::ScanRow { table: "t".into(), row: 1 }));
    }
}
