use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::constructions::Gdd;
use crate::design::{BlockSystem, Design, Labels};
use crate::error::{Error, Result};

/// A permutation written in cycle notation over point labels; labels not
/// mentioned are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Permutation {
    cycles: Vec<Vec<String>>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// Parses `(0,1,2)(a,b)`. Whitespace is ignored; `id` (or an empty
    /// string) is the identity. One-cycles and repeated labels are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "id" {
            return Ok(Permutation::identity());
        }
        let mut cycles = Vec::new();
        let mut seen = HashSet::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Permutation(format!("expected `(…)` at `{rest}`")))?;
            let (inner, tail) = body;
            let cycle: Vec<String> = inner
                .split(',')
                .map(|t| crate::design::canonical_token(t).map_err(|e| Error::Permutation(e.to_string())))
                .collect::<Result<_>>()?;
            if cycle.len() < 2 {
                return Err(Error::Permutation(format!("one-cycle `({inner})` is not allowed")));
            }
            for t in &cycle {
                if !seen.insert(t.clone()) {
                    return Err(Error::Permutation(format!("label `{t}` appears twice")));
                }
            }
            cycles.push(cycle);
            rest = tail;
        }
        Ok(Permutation { cycles })
    }

    pub fn cycles(&self) -> &[Vec<String>] {
        &self.cycles
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Permutation {
            cycles: self
                .cycles
                .iter()
                .map(|c| {
                    let mut r = c.clone();
                    r[1..].reverse();
                    r
                })
                .collect(),
        }
    }

    /// Index map `x -> π(x)` over a label table.
    pub fn bind(&self, labels: &Labels) -> Result<Vec<u32>> {
        let mut map: Vec<u32> = (0..labels.len() as u32).collect();
        for c in &self.cycles {
            let idx =
                c.iter().map(|t| labels.get(t).ok_or_else(|| Error::UnknownPoint(t.clone()))).collect::<Result<Vec<_>>>()?;
            for i in 0..idx.len() {
                map[idx[i] as usize] = idx[(i + 1) % idx.len()];
            }
        }
        Ok(map)
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return write!(f, "id");
        }
        for c in &self.cycles {
            write!(f, "({})", c.join(","))?;
        }
        Ok(())
    }
}

/// Parses the third permutation of a row, where `inv` means the inverse
/// of the second.
pub fn parse_third(text: &str, second: &Permutation) -> Result<Permutation> {
    if text.trim() == "inv" {
        Ok(second.inverse())
    } else {
        Permutation::parse(text)
    }
}

/// Block systems that can be pushed through a point bijection.
pub trait Permutable: BlockSystem + Sized + Clone + Send + Sync {
    fn permuted(&self, map: &[u32]) -> Result<Self>;

    /// Whether `image` keeps the extra structure beyond the blocks.
    fn same_structure(&self, _image: &Self) -> bool {
        true
    }
}

impl Permutable for Design {
    fn permuted(&self, map: &[u32]) -> Result<Self> {
        let blocks = self.blocks().iter().map(|b| b.map(|x| map[x as usize])).collect::<Result<Vec<_>>>()?;
        self.with_blocks(blocks)
    }
}

impl Permutable for Gdd {
    /// Groups are mapped along with the blocks.
    fn permuted(&self, map: &[u32]) -> Result<Self> {
        let blocks = self.blocks().iter().map(|b| b.map(|x| map[x as usize])).collect::<Result<Vec<_>>>()?;
        let groups = self.groups().iter().map(|g| g.iter().map(|&x| map[x as usize]).collect()).collect();
        Gdd::new(self.labels().clone(), groups, blocks)
    }

    fn same_structure(&self, image: &Self) -> bool {
        self.same_groups(image)
    }
}

/// Image of a design (or GDD) under `pi`.
pub fn apply_permutation<T: Permutable>(system: &T, pi: &Permutation) -> Result<T> {
    let map = pi.bind(system.labels())?;
    system.permuted(&map)
}

/// True when `pi` maps every group of `gdd` onto a group.
pub fn preserves_groups(gdd: &Gdd, pi: &Permutation) -> Result<bool> {
    let image = apply_permutation(gdd, pi)?;
    Ok(image.groups() == gdd.groups())
}
