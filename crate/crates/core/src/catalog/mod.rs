//! Embedded designs, development specs, GDD derivations, permutation tables
//! and resolutions. Every entry is verified when the catalog is first used.

mod plan;
mod repro;
mod table;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::actions::{develop, emit_dev, parse_dev, DevelopmentSpec, PermRow};
use crate::constructions::{emit_gdd, emit_resolved, parse_resolved, verify_gdd, verify_resolution, Gdd, Resolution};
use crate::design::{delete_point, emit_design, parse_design, pair_count_matrix, verify_steiner, Block, BlockSystem, Design};
use crate::error::{Error, Result};

pub use plan::{base_gdd, parse_plan, row_triple, run_plan, FillMode, Plan, PlanBase, PlanOutput, Selection};
pub use repro::{achieved_set, run_reproduction, Claim, ClaimStatus, ReproOptions, ReproReport, REPRO_TOKENS};
pub use table::{emit_table, parse_table, PermTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Design,
    DevSpec,
    Gdd,
    PermutationTable,
    Resolution,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Design => "design",
            Kind::DevSpec => "dev-spec",
            Kind::Gdd => "gdd",
            Kind::PermutationTable => "permutation-table",
            Kind::Resolution => "resolution",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Design(Design),
    /// The spec and its development.
    DevSpec(DevelopmentSpec, Design),
    Gdd(Gdd),
    Table(PermTable),
    Resolution(Design, Resolution),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub payload: Payload,
    pub source: &'static str,
}

impl CatalogEntry {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Design(_) => Kind::Design,
            Payload::DevSpec(..) => Kind::DevSpec,
            Payload::Gdd(_) => Kind::Gdd,
            Payload::Table(_) => Kind::PermutationTable,
            Payload::Resolution(..) => Kind::Resolution,
        }
    }

    /// The design carried by the entry: the design itself, a development or
    /// the resolved triple system.
    pub fn design(&self) -> Option<&Design> {
        match &self.payload {
            Payload::Design(d) | Payload::DevSpec(_, d) | Payload::Resolution(d, _) => Some(d),
            _ => None,
        }
    }

    pub fn gdd(&self) -> Option<&Gdd> {
        match &self.payload {
            Payload::Gdd(g) => Some(g),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&PermTable> {
        match &self.payload {
            Payload::Table(t) => Some(t),
            _ => None,
        }
    }

    /// Text form in the entry's file format.
    pub fn emit(&self) -> String {
        match &self.payload {
            Payload::Design(d) => emit_design(d),
            Payload::DevSpec(s, _) => emit_dev(s),
            Payload::Gdd(g) => emit_gdd(g),
            Payload::Table(t) => emit_table(t),
            Payload::Resolution(d, r) => emit_resolved(d, r),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self.kind() {
            Kind::Design => "des",
            Kind::DevSpec => "dev",
            Kind::Gdd => "gdd",
            Kind::PermutationTable => "perm",
            Kind::Resolution => "res",
        }
    }
}

pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownId {
            id: id.to_string(),
            nearest: self.nearest(id).join(", "),
        })
    }

    fn nearest(&self, id: &str) -> Vec<&'static str> {
        let mut scored: Vec<(usize, &'static str)> =
            self.entries.iter().map(|e| (strsim::levenshtein(id, e.id), e.id)).collect();
        scored.sort();
        scored.into_iter().take(3).map(|(_, id)| id).collect()
    }

    pub fn design(&self, id: &str) -> Result<&Design> {
        self.get(id)?.design().ok_or_else(|| Error::Mismatch(format!("`{id}` is not a design")))
    }

    pub fn gdd(&self, id: &str) -> Result<&Gdd> {
        self.get(id)?.gdd().ok_or_else(|| Error::Mismatch(format!("`{id}` is not a GDD")))
    }

    pub fn table(&self, id: &str) -> Result<&PermTable> {
        self.get(id)?.table().ok_or_else(|| Error::Mismatch(format!("`{id}` is not a permutation table")))
    }
}

static CATALOG: OnceLock<Result<Catalog>> = OnceLock::new();

/// The verified catalog. The first call loads and checks every entry.
pub fn catalog() -> Result<&'static Catalog> {
    CATALOG.get_or_init(load).as_ref().map_err(Clone::clone)
}

pub fn catalog_get(id: &str) -> Result<&'static CatalogEntry> {
    catalog()?.get(id)
}

macro_rules! data {
    ($f:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $f))
    };
}

/// Designs with their block counts.
const DESIGNS: &[(&str, &str, usize, &str)] = &[
    ("s2-4-13.L4.1", data!("s2-4-13.L4.1.des"), 13, "printed block list on Z10 ∪ {a,b,c}"),
    ("s2-4-16.L4.2", data!("s2-4-16.L4.2.des"), 20, "printed block list on Z10 ∪ {a..f}"),
    ("s2-4-25.L4.3", data!("s2-4-25.L4.3.des"), 50, "printed block list on Z10 ∪ {a..o}, one block repaired"),
    ("s2-4-25.Ex6.1", data!("s2-4-25.Ex6.1.des"), 50, "printed parts A, B, C on 1..25"),
    ("s2-4-28.step1", data!("s2-4-28.step1.des"), 63, "printed block list on Z28"),
    ("s2-4-28.step2", data!("s2-4-28.step2.des"), 63, "printed block list on Z28"),
];

/// Development specs: id, text, developed block count, whether the result
/// is a full Steiner system.
const DEVS: &[(&str, &str, usize, bool, &str)] = &[
    ("s2-4-37.step1", data!("s2-4-37.step1.dev"), 111, true, "base blocks over Z9 with one fixed point"),
    ("s2-4-37.step2", data!("s2-4-37.step2.dev"), 111, true, "base blocks over Z11 × {1,2,3} with four fixed points"),
    ("s2-4-37.step3", data!("s2-4-37.step3.dev"), 102, false, "base blocks over Z12 ∪ {∞}, nine blocks short of a design"),
];

/// GDDs derived from designs: id, source design, deleted point or groups
/// taken from a parallel class, the printed groups.
const GDDS: &[(&str, &str, GddFrom, &str)] = &[
    (
        "gdd-4-4.L4.5",
        "s2-4-16.L4.2",
        GddFrom::Class("0123 48bf 59ae 67cd"),
        "parallel class of s2-4-16.L4.2 as groups",
    ),
    (
        "gdd-3-5.L4.7.delete-0",
        "s2-4-16.L4.2",
        GddFrom::Delete("0", "123 456 789 abc def"),
        "s2-4-16.L4.2 with point 0 deleted",
    ),
    (
        "gdd-3-5.L4.7.delete-d",
        "s2-4-16.L4.2",
        GddFrom::Delete("d", "67c 28a 15b 349 0ef"),
        "s2-4-16.L4.2 with point d deleted",
    ),
    (
        "gdd-3-4.L4.8.delete-0",
        "s2-4-13.L4.1",
        GddFrom::Delete("0", "139 28c 457 6ab"),
        "s2-4-13.L4.1 with point 0 deleted",
    ),
    (
        "gdd-3-4.L4.8.delete-8",
        "s2-4-13.L4.1",
        GddFrom::Delete("8", "02c 156 37a b49"),
        "s2-4-13.L4.1 with point 8 deleted",
    ),
];

#[derive(Clone, Copy)]
enum GddFrom {
    /// Groups given as one-character labels.
    Class(&'static str),
    Delete(&'static str, &'static str),
}

const TABLES: &[(&str, &str)] = &[
    ("s2-4-13.L4.1.perms", data!("s2-4-13.L4.1.perm")),
    ("s2-4-16.L4.2.perms", data!("s2-4-16.L4.2.perm")),
    ("s2-4-25.L4.3.perms", data!("s2-4-25.L4.3.perm")),
    ("s2-4-25.Ex6.1.perms", data!("s2-4-25.Ex6.1.perm")),
    ("s2-4-28.step1.perms", data!("s2-4-28.step1.perm")),
    ("gdd-4-4.L4.5.perms", data!("gdd-4-4.L4.5.perm")),
    ("gdd-3-5.L4.7.delete-0.perms", data!("gdd-3-5.L4.7.delete-0.perm")),
    ("gdd-3-5.L4.7.delete-d.perms", data!("gdd-3-5.L4.7.delete-d.perm")),
    ("gdd-3-4.L4.8.delete-0.perms", data!("gdd-3-4.L4.8.delete-0.perm")),
    ("gdd-3-4.L4.8.delete-8.perms", data!("gdd-3-4.L4.8.delete-8.perm")),
];

fn load() -> Result<Catalog> {
    let fail = |id: &str, e: Error| Error::Structure(format!("catalog entry `{id}`: {e}"));
    let mut entries = Vec::new();
    for &(id, text, blocks, source) in DESIGNS {
        let d = parse_design(text).map_err(|e| fail(id, e))?;
        check_steiner(&d, blocks).map_err(|e| fail(id, e))?;
        entries.push(CatalogEntry { id, payload: Payload::Design(d), source });
    }
    for &(id, text, blocks, full, source) in DEVS {
        let spec = parse_dev(text).map_err(|e| fail(id, e))?;
        let d = develop(&spec).map_err(|e| fail(id, e))?;
        if full {
            check_steiner(&d, blocks).map_err(|e| fail(id, e))?;
        } else {
            check_partial(&d, blocks).map_err(|e| fail(id, e))?;
        }
        entries.push(CatalogEntry { id, payload: Payload::DevSpec(spec, d), source });
    }
    for &(id, from, how, source) in GDDS {
        let base = entries
            .iter()
            .find(|e| e.id == from)
            .and_then(CatalogEntry::design)
            .expect("GDD sources precede GDDs");
        let g = derive_gdd(base, how).map_err(|e| fail(id, e))?;
        entries.push(CatalogEntry { id, payload: Payload::Gdd(g), source });
    }
    let (kts, res) = parse_resolved(data!("kts-27.sub9.res")).map_err(|e| fail("kts-27.sub9", e))?;
    check_kts27(&kts, &res).map_err(|e| fail("kts-27.sub9", e))?;
    entries.push(CatalogEntry {
        id: "kts-27.sub9",
        payload: Payload::Resolution(kts, res),
        source: "AG(3,3) resolved by direction",
    });
    let (ag, ag_res) = crate::constructions::affine_geometry(3, 2).map_err(|e| fail("kts-9.ag", e))?;
    verify_resolution(&ag, &ag_res).map_err(|e| fail("kts-9.ag", e))?;
    entries.push(CatalogEntry { id: "kts-9.ag", payload: Payload::Resolution(ag, ag_res), source: "affine plane of order 3" });

    for &(id, text) in TABLES {
        let t = parse_table(text).map_err(|e| fail(id, e))?;
        let target = entries.iter().find(|e| e.id == t.target).ok_or_else(|| {
            fail(id, Error::UnknownId { id: t.target.clone(), nearest: String::new() })
        })?;
        replay_table(target, &t).map_err(|e| fail(id, e))?;
        entries.push(CatalogEntry { id, payload: Payload::Table(t), source: "printed permutation table" });
    }
    Ok(Catalog { entries })
}

fn check_steiner(d: &Design, blocks: usize) -> Result<()> {
    if d.block_count() != blocks {
        return Err(Error::Structure(format!("{} blocks, expected {blocks}", d.block_count())));
    }
    let rep = verify_steiner(d, 2)?;
    if !rep.is_steiner {
        return Err(Error::Structure(format!("not a Steiner system: {rep:?}")));
    }
    Ok(())
}

/// No pair is covered twice.
fn check_partial(d: &Design, blocks: usize) -> Result<()> {
    if d.block_count() != blocks {
        return Err(Error::Structure(format!("{} blocks, expected {blocks}", d.block_count())));
    }
    if pair_count_matrix(d.v(), d.blocks()).iter().any(|&c| c > 1) {
        return Err(Error::Structure("a pair is covered twice".into()));
    }
    Ok(())
}

fn derive_gdd(base: &Design, how: GddFrom) -> Result<Gdd> {
    let groups_of = |text: &str, labels: &crate::design::Labels| -> Result<BTreeSet<Vec<u32>>> {
        text.split_whitespace()
            .map(|g| {
                let mut v = g.chars().map(|c| labels.index_of(&c.to_string())).collect::<Result<Vec<_>>>()?;
                v.sort_unstable();
                Ok(v)
            })
            .collect()
    };
    let g = match how {
        GddFrom::Class(groups) => {
            let class: Vec<Block> = groups_of(groups, base.labels())?.into_iter().map(Block::new).collect::<Result<_>>()?;
            Gdd::from_design_class(base, &class)?
        }
        GddFrom::Delete(point, groups) => {
            let g = delete_point(base, base.point(point)?)?;
            let printed = groups_of(groups, g.labels())?;
            let derived: BTreeSet<Vec<u32>> = g.groups().iter().cloned().collect();
            if printed != derived {
                return Err(Error::Structure("derived groups differ from the printed ones".into()));
            }
            g
        }
    };
    let rep = verify_gdd(&g);
    if !rep.valid {
        return Err(Error::Structure(format!("not a GDD: {:?}", rep.violations)));
    }
    Ok(g)
}

/// The first four classes induce parallel classes on each plane of the last
/// coordinate, giving three disjoint sub-KTS(9).
fn check_kts27(kts: &Design, res: &Resolution) -> Result<()> {
    if kts.v() != 27 || res.len() != 13 || !verify_steiner(kts, 2)?.is_steiner {
        return Err(Error::Structure("not a KTS(27) with 13 classes".into()));
    }
    for z in 0..3u32 {
        for (c, class) in res.classes[..4].iter().enumerate() {
            let inside = class.iter().filter(|b| b.points().iter().all(|p| p / 9 == z)).count();
            if inside != 3 {
                return Err(Error::Structure(format!("class {c} does not induce a parallel class on plane {z}")));
            }
        }
    }
    Ok(())
}

/// Every printed row replays to its printed intersection number.
fn replay_table(target: &CatalogEntry, t: &PermTable) -> Result<()> {
    let rows = match &target.payload {
        Payload::Gdd(g) => crate::actions::spectrum_scan(g, &t.rows, &t.target, t.label())?.rows,
        _ => {
            let d = target.design().ok_or_else(|| Error::Mismatch("table target has no design".into()))?;
            crate::actions::spectrum_scan(d, &t.rows, &t.target, t.label())?.rows
        }
    };
    if let Some(r) = rows.iter().find(|r| !r.matches_claim()) {
        return Err(Error::Structure(format!("row {} gives {}, printed {:?}", r.row, r.common, r.claimed)));
    }
    if let Some(r) = rows.iter().find(|r| !r.structure_preserved) {
        return Err(Error::Structure(format!("row {} does not keep the groups", r.row)));
    }
    Ok(())
}

/// Rows of a table as `PermRow`s, for callers that build their own scans.
pub fn table_rows(id: &str) -> Result<&'static [PermRow]> {
    Ok(&catalog()?.table(id)?.rows)
}
