//! The `.des` text format.
//!
//! ```text
//! # comment
//! v 13 k 4
//! labels 0 1 2 3 4 5 6 7 8 9 a b c
//! 0 1 3 9
//! 0 2 8 c
//! ```
//!
//! The `labels` line is optional. Without it, purely numeric blocks use the
//! labels `0..v`; otherwise the block tokens are ordered naturally. Block
//! tokens may be separated by whitespace or commas.

use std::fmt::Write as _;

use super::{Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

/// Splits a line into tokens, dropping comments, commas and braces.
pub(crate) fn tokens(line: &str) -> Vec<&str> {
    let line = line.split('#').next().unwrap_or("");
    line.split(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}').filter(|t| !t.is_empty()).collect()
}

pub(crate) fn parse_usize(tok: Option<&&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} is not a nonnegative integer")))
}

/// Resolves block token lines against an optional explicit label table.
pub(crate) fn resolve_labels(v: usize, explicit: Option<Labels>, blocks: &[(usize, Vec<String>)]) -> Result<Labels> {
    if let Some(l) = explicit {
        if l.len() != v {
            return Err(Error::parse(1, format!("labels line names {} points, header says v = {v}", l.len())));
        }
        return Ok(l);
    }
    let numeric = blocks.iter().flat_map(|(_, b)| b).all(|t| t.parse::<usize>().map(|x| x < v).unwrap_or(false));
    if numeric {
        return Ok(Labels::numeric(v));
    }
    let l = Labels::from_unordered(blocks.iter().flat_map(|(_, b)| b))?;
    if l.len() != v {
        return Err(Error::parse(1, format!("blocks use {} distinct points, header says v = {v}", l.len())));
    }
    Ok(l)
}

pub(crate) fn resolve_block(labels: &Labels, line: usize, toks: &[String]) -> Result<Block> {
    let idx = toks
        .iter()
        .map(|t| labels.get(t).ok_or_else(|| Error::parse(line, format!("unknown point `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    Block::new(idx).map_err(|e| Error::parse(line, e.to_string()))
}

pub fn parse_design(text: &str) -> Result<Design> {
    let mut header: Option<(usize, usize)> = None;
    let mut labels = None;
    let mut blocks = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        match (header, t[0]) {
            (None, "v") => {
                let v = parse_usize(t.get(1), line, "v")?;
                if t.get(2) != Some(&"k") {
                    return Err(Error::parse(line, "header must read `v <int> k <int>`"));
                }
                let k = parse_usize(t.get(3), line, "k")?;
                header = Some((v, k));
            }
            (None, _) => return Err(Error::parse(line, "expected header `v <int> k <int>`")),
            (Some(_), "labels") => {
                if labels.is_some() || !blocks.is_empty() {
                    return Err(Error::parse(line, "labels line must come once, before the blocks"));
                }
                labels = Some(Labels::new(&t[1..]).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            (Some(_), _) => blocks.push((line, t.iter().map(|s| s.to_string()).collect::<Vec<_>>())),
        }
    }
    let (v, k) = header.ok_or_else(|| Error::parse(1, "empty design file"))?;
    let labels = resolve_labels(v, labels, &blocks)?;
    let mut out = Vec::with_capacity(blocks.len());
    for (line, toks) in &blocks {
        if toks.len() != k {
            return Err(Error::parse(*line, format!("block has {} points, expected {k}", toks.len())));
        }
        out.push(resolve_block(&labels, *line, toks)?);
    }
    Design::new(labels, k, out)
}

pub(crate) fn write_labels(out: &mut String, labels: &Labels) {
    out.push_str("labels");
    for n in labels.names() {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
}

pub(crate) fn write_block(out: &mut String, labels: &Labels, b: &Block) {
    for (i, &p) in b.points().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(labels.name(p));
    }
    out.push('\n');
}

/// Canonical text: header, full label line, one sorted block per line.
pub fn emit_design(design: &Design) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "v {} k {}", design.v(), design.k());
    write_labels(&mut out, design.labels());
    for b in design.blocks() {
        write_block(&mut out, design.labels(), b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_printed_style_rows() {
        let d = parse_design("# S(2,4,4)\nv 4 k 4\n0,1,2,3\n").unwrap();
        assert_eq!(d.block_count(), 1);
        let d = parse_design("v 5 k 4\nlabels a b c d inf\n{a,b,c,d}\n").unwrap();
        assert_eq!(d.labels().get("inf"), Some(4));
    }

    #[test]
    fn header_and_block_errors_carry_lines() {
        assert!(matches!(parse_design("0 1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_design("v 4 k 4\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_design("v 4 k 4\nlabels 0 1 2 3\n0 1 2 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_design("v 4 k 4\n0 1 2 3\n0 1 2 3\n").is_err());
    }

    #[test]
    fn infinity_labels_in_files() {
        let d = parse_design("v 4 k 4\n∞ a b c\n").unwrap();
        assert!(d.labels().get("inf").is_some());
        assert!(emit_design(&d).contains("inf"));
    }

    proptest! {
        #[test]
        fn parse_emit_parse_is_identity(seed in any::<u64>(), v in 4usize..14) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let offset = rng.random_range(0..3);
            let labels = Labels::new((0..v).map(|i| if offset == 0 { i.to_string() } else { format!("p{}", i * offset) })).unwrap();
            let mut blocks = std::collections::BTreeSet::new();
            for _ in 0..rng.random_range(0..12) {
                let mut pts = std::collections::BTreeSet::new();
                while pts.len() < 4 {
                    pts.insert(rng.random_range(0..v as u32));
                }
                blocks.insert(Block::new(pts).unwrap());
            }
            let d = Design::new(labels, 4, blocks).unwrap();
            let text = emit_design(&d);
            let back = parse_design(&text).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(emit_design(&back), text);
        }
    }
}
