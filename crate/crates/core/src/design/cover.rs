use std::ops::ControlFlow;

use super::exact_cover::ExactCover;
use super::{pair_count_matrix, Block, BlockSystem, Design, Labels};
use crate::error::{Error, Result};

pub const DEFAULT_COMPLETION_LIMIT: usize = 16;

/// Result of [`complete_cover`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completions {
    /// The partial design extended to the target order.
    pub partial: Design,
    /// Each completion is a sorted block list; the list itself is sorted.
    pub completions: Vec<Vec<Block>>,
    /// True when the search space was exhausted before the limit was hit.
    pub exhaustive: bool,
    pub nodes: u64,
}

impl Completions {
    /// `partial ∪ completions[i]` as a design.
    pub fn completed(&self, i: usize) -> Result<Design> {
        self.partial.with_blocks(self.partial.blocks().iter().chain(&self.completions[i]).cloned())
    }
}

/// Enumerates sets of `k`-blocks covering every pair the partial design
/// leaves uncovered exactly once, up to `limit` of them.
///
/// `v` may exceed the partial design's order; the extra points get numeric
/// labels continuing after the existing ones.
pub fn complete_cover(partial: &Design, v: usize, limit: usize) -> Result<Completions> {
    let partial = extend_points(partial, v)?;
    let k = partial.k();
    let counts = pair_count_matrix(v, partial.blocks());
    let mut uncovered = vec![u64::MAX; v * v];
    let mut columns = 0usize;
    let mut adj = vec![Vec::new(); v];
    for a in 0..v {
        for b in a + 1..v {
            match counts[a * v + b] {
                0 => {
                    uncovered[a * v + b] = columns as u64;
                    columns += 1;
                    adj[a].push(b);
                }
                1 => {}
                c => {
                    return Err(Error::Precondition(format!(
                        "pair {{{},{}}} is covered {c} times",
                        partial.labels().name(a as u32),
                        partial.labels().name(b as u32)
                    )))
                }
            }
        }
    }

    // rows: k-cliques of the uncovered-pair graph, in lexicographic order
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::with_capacity(k);
    let is_edge = |a: usize, b: usize| uncovered[a.min(b) * v + a.max(b)] != u64::MAX;
    fn extend(
        stack: &mut Vec<usize>,
        cands: &[usize],
        k: usize,
        is_edge: &dyn Fn(usize, usize) -> bool,
        rows: &mut Vec<Vec<usize>>,
    ) {
        if stack.len() == k {
            rows.push(stack.clone());
            return;
        }
        for (i, &c) in cands.iter().enumerate() {
            stack.push(c);
            let next: Vec<usize> = cands[i + 1..].iter().copied().filter(|&d| is_edge(c, d)).collect();
            extend(stack, &next, k, is_edge, rows);
            stack.pop();
        }
    }
    for a in 0..v {
        stack.push(a);
        extend(&mut stack, &adj[a], k, &is_edge, &mut rows);
        stack.pop();
    }

    let mut ec = ExactCover::new(columns);
    for r in &rows {
        let mut cols = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                cols.push(uncovered[r[i] * v + r[j]] as usize);
            }
        }
        ec.add_row(&cols);
    }
    let mut completions = Vec::new();
    let mut exhaustive = true;
    let nodes = ec.solve(|sol| {
        if completions.len() == limit {
            exhaustive = false;
            return ControlFlow::Break(());
        }
        let mut blocks: Vec<Block> =
            sol.iter().map(|&r| Block::new(rows[r].iter().map(|&x| x as u32)).expect("clique")).collect();
        blocks.sort();
        completions.push(blocks);
        ControlFlow::Continue(())
    });
    completions.sort();
    Ok(Completions { partial, completions, exhaustive, nodes })
}

fn extend_points(partial: &Design, v: usize) -> Result<Design> {
    let have = partial.v();
    if v < have {
        return Err(Error::Precondition(format!("target order {v} is below the design's {have} points")));
    }
    if v == have {
        return Ok(partial.clone());
    }
    let mut names: Vec<String> = partial.labels().names().to_vec();
    names.extend((have..v).map(|i| i.to_string()));
    let labels = Labels::new(names)?;
    Design::new(labels, partial.k(), partial.blocks().iter().cloned())
}
