//! Cyclic development of base blocks over `Z_n`.
//!
//! Points are `<class><i>` for each coordinate class and `i` in `0..n`, plus
//! constants that development leaves fixed. The `.dev` text format:
//!
//! ```text
//! order 9
//! classes a b c d
//! const inf
//! base inf a0 a3 a6
//! base a0 a1 b3 c0
//! literal inf1 inf2 inf3 inf4
//! ```
//!
//! `short-orbits off` turns off automatic short-orbit detection; every base
//! block then has to develop into `n` distinct blocks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::design::format::{parse_usize, tokens};
use crate::design::{canonical_token, Block, Design, Labels};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevelopmentSpec {
    pub order: usize,
    pub classes: Vec<String>,
    pub constants: Vec<String>,
    pub base_blocks: Vec<Vec<String>>,
    /// Blocks appended verbatim after development.
    pub literals: Vec<Vec<String>>,
    pub auto_short_orbits: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Coord {
    Const(usize),
    Class(usize, usize),
}

impl DevelopmentSpec {
    pub fn labels(&self) -> Result<Labels> {
        let mut names = Vec::with_capacity(self.classes.len() * self.order + self.constants.len());
        for c in &self.classes {
            for i in 0..self.order {
                names.push(format!("{c}{i}"));
            }
        }
        names.extend(self.constants.iter().cloned());
        Labels::new(names)
    }

    fn coord(&self, token: &str) -> Result<Coord> {
        let token = canonical_token(token)?;
        if let Some(i) = self.constants.iter().position(|c| *c == token) {
            return Ok(Coord::Const(i));
        }
        let split = token.find(|c: char| c.is_ascii_digit()).unwrap_or(token.len());
        let (class, sub) = token.split_at(split);
        let ci = self
            .classes
            .iter()
            .position(|c| c == class)
            .ok_or_else(|| Error::Precondition(format!("`{token}` is neither a constant nor in a declared class")))?;
        let s: usize = sub.parse().map_err(|_| Error::Precondition(format!("`{token}` has no numeric subscript")))?;
        if s >= self.order {
            return Err(Error::Precondition(format!("subscript of `{token}` is not below {}", self.order)));
        }
        Ok(Coord::Class(ci, s))
    }

    fn index(&self, c: Coord) -> u32 {
        match c {
            Coord::Class(ci, s) => (ci * self.order + s) as u32,
            Coord::Const(i) => (self.classes.len() * self.order + i) as u32,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Precondition("order must be positive".into()));
        }
        for c in &self.classes {
            if c.is_empty() || !c.chars().all(|ch| ch.is_ascii_alphabetic()) {
                return Err(Error::Precondition(format!("class name `{c}` must be alphabetic")));
            }
        }
        Ok(())
    }
}

/// One developed orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub base: usize,
    pub length: usize,
}

/// Develops every base block over `Z_n`. With automatic short orbits, a
/// block fixed by translation with the smallest divisor `d` of `n` yields
/// `d` blocks instead of `n`.
pub fn develop(spec: &DevelopmentSpec) -> Result<Design> {
    develop_with_orbits(spec).map(|(d, _)| d)
}

pub fn develop_with_orbits(spec: &DevelopmentSpec) -> Result<(Design, Vec<Orbit>)> {
    spec.validate()?;
    let labels = spec.labels()?;
    let k = spec
        .base_blocks
        .first()
        .or(spec.literals.first())
        .map(Vec::len)
        .ok_or_else(|| Error::Precondition("no base blocks".into()))?;
    let n = spec.order;
    let mut origin: BTreeMap<Block, usize> = BTreeMap::new();
    let mut orbits = Vec::new();
    for (bi, base) in spec.base_blocks.iter().enumerate() {
        let coords = base.iter().map(|t| spec.coord(t)).collect::<Result<Vec<_>>>()?;
        let shift = |d: usize| {
            Block::new(coords.iter().map(|&c| {
                spec.index(match c {
                    Coord::Class(ci, s) => Coord::Class(ci, (s + d) % n),
                    konst => konst,
                })
            }))
        };
        let first = shift(0)?;
        let length = if spec.auto_short_orbits {
            (1..=n).find(|d| n % d == 0 && shift(*d % n).map(|b| b == first).unwrap_or(false)).unwrap_or(n)
        } else {
            n
        };
        for d in 0..length {
            let b = shift(d)?;
            if let Some(prev) = origin.insert(b.clone(), bi) {
                return Err(Error::Precondition(format!(
                    "block {} arises from base blocks #{prev} and #{bi}",
                    b.display(&labels)
                )));
            }
        }
        orbits.push(Orbit { base: bi, length });
    }
    for lit in &spec.literals {
        let b = Block::new(lit.iter().map(|t| labels.index_of(&canonical_token(t)?)).collect::<Result<Vec<_>>>()?)?;
        if origin.insert(b.clone(), usize::MAX).is_some() {
            return Err(Error::Precondition(format!("literal block {} already developed", b.display(&labels))));
        }
    }
    Ok((Design::new(labels, k, origin.into_keys())?, orbits))
}

pub fn parse_dev(text: &str) -> Result<DevelopmentSpec> {
    let mut spec = DevelopmentSpec {
        order: 0,
        classes: vec![],
        constants: vec![],
        base_blocks: vec![],
        literals: vec![],
        auto_short_orbits: true,
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        let Some((&head, rest)) = t.split_first() else { continue };
        let owned = || rest.iter().map(|s| canonical_token(s)).collect::<Result<Vec<_>>>();
        match head {
            "order" => spec.order = parse_usize(rest.first(), line, "order")?,
            "classes" => spec.classes = owned()?,
            "const" => spec.constants.extend(owned()?),
            "base" => spec.base_blocks.push(owned()?),
            "literal" => spec.literals.push(owned()?),
            "short-orbits" => {
                spec.auto_short_orbits = match rest.first() {
                    Some(&"auto") => true,
                    Some(&"off") => false,
                    _ => return Err(Error::parse(line, "expected `short-orbits auto|off`")),
                }
            }
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    if spec.order == 0 {
        return Err(Error::parse(1, "missing `order`"));
    }
    Ok(spec)
}

pub fn emit_dev(spec: &DevelopmentSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "order {}", spec.order);
    let _ = writeln!(out, "classes {}", spec.classes.join(" "));
    if !spec.constants.is_empty() {
        let _ = writeln!(out, "const {}", spec.constants.join(" "));
    }
    if !spec.auto_short_orbits {
        out.push_str("short-orbits off\n");
    }
    for b in &spec.base_blocks {
        let _ = writeln!(out, "base {}", b.join(" "));
    }
    for b in &spec.literals {
        let _ = writeln!(out, "literal {}", b.join(" "));
    }
    out
}
