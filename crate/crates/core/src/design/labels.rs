use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Token ↔ index table of a point set. Indices are exactly `0..len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl fmt::Debug for Labels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

impl Labels {
    /// Builds a table from tokens in index order. Tokens are canonicalized
    /// (see [`canonical_token`]) and must be unique.
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out = Labels { names: Vec::new(), index: HashMap::new() };
        for name in names {
            out.push(name.as_ref())?;
        }
        Ok(out)
    }

    /// `"0"`, `"1"`, …, `"v-1"`.
    pub fn numeric(v: usize) -> Self {
        Labels::new((0..v).map(|i| i.to_string())).expect("numeric labels are unique")
    }

    /// Builds a table from an unordered token collection, assigning indices
    /// in natural order (digit runs compare numerically).
    pub fn from_unordered<S: AsRef<str>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names = Vec::new();
        for t in tokens {
            names.push(canonical_token(t.as_ref())?);
        }
        names.sort_by(|a, b| natural_cmp(a, b));
        names.dedup();
        Labels::new(names)
    }

    pub(crate) fn push(&mut self, name: &str) -> Result<u32> {
        let name = canonical_token(name)?;
        if self.index.contains_key(&name) {
            return Err(Error::Structure(format!("duplicate point label `{name}`")));
        }
        let idx = self.names.len() as u32;
        self.index.insert(name.clone(), idx);
        self.names.push(name);
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        match self.index.get(token) {
            Some(&i) => Some(i),
            None => canonical_token(token).ok().and_then(|t| self.index.get(&t).copied()),
        }
    }

    /// Like [`get`](Self::get) but reports unknown tokens as errors.
    pub fn index_of(&self, token: &str) -> Result<u32> {
        self.get(token).ok_or_else(|| Error::UnknownPoint(token.to_string()))
    }

    pub fn name(&self, idx: u32) -> &str {
        &self.names[idx as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Copy of this table without point `idx`; later indices shift down by one.
    pub fn without(&self, idx: u32) -> Labels {
        Labels::new(self.names.iter().enumerate().filter(|&(i, _)| i as u32 != idx).map(|(_, n)| n))
            .expect("subset of unique labels")
    }

    /// Concatenation; fails on a shared token.
    pub fn concat(&self, other: &Labels) -> Result<Labels> {
        Labels::new(self.names.iter().chain(other.names.iter()))
    }
}

/// Canonical spelling of a point token. `∞`-style labels become `inf`,
/// `inf1`, …; everything else must be ASCII alphanumeric, `_` or `.`.
pub fn canonical_token(token: &str) -> Result<String> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Structure("empty point label".into()));
    }
    let rest = if let Some(r) = t.strip_prefix('∞') {
        Some(r)
    } else if let Some(r) = t.strip_prefix("\\infty") {
        Some(r)
    } else {
        t.strip_prefix("inf")
    };
    if let Some(rest) = rest {
        let rest = rest.trim_start_matches(['_', '{']).trim_end_matches('}');
        if rest.chars().all(|c| c.is_ascii_digit()) {
            return Ok(format!("inf{rest}"));
        }
    }
    if t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
        Ok(t.to_string())
    } else {
        Err(Error::Structure(format!("point label `{t}` is not an ASCII token")))
    }
}

/// Ordering that compares maximal digit runs numerically, so that
/// `a2 < a10` and `9 < 10 < a`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let nx = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let ny = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (dx, dy) = (trim_zeros(&x[..nx]), trim_zeros(&y[..ny]));
                let ord = dx.len().cmp(&dy.len()).then_with(|| dx.cmp(dy)).then(nx.cmp(&ny));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[nx..];
                y = &y[ny..];
            }
            (Some(_), Some(_)) => {
                let c = x[0].is_ascii_digit();
                let d = y[0].is_ascii_digit();
                // digits sort before letters
                let ord = d.cmp(&c).then(x[0].cmp(&y[0]));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let z = s.iter().take_while(|&&c| c == b'0').count();
    if z == s.len() {
        &s[s.len().saturating_sub(1)..]
    } else {
        &s[z..]
    }
}
