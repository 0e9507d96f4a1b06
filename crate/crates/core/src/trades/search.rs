//! Exhaustive search for μ-way `(v, k, 2)` trades of a given volume.
//!
//! The first block of `T₁` is fixed to `{0, …, k-1}`. At every node the
//! search picks a pair whose coverage differs between collections and
//! branches over every block that could cover it in a deficient
//! collection, most constrained choice first. Points never seen before are
//! interchangeable, so a branch only ever introduces the next unused labels.
//!
//! Any trade of volume `s` contains a chain of such forced steps ending in a
//! balanced state. That state is either the whole trade or a smaller trade;
//! smaller trades are counted and pruned. An exhausted search with no
//! witness and no smaller trade is therefore a proof of nonexistence.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{verify_trade, TradeSystem};
use crate::design::{Block, Labels};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub volume: usize,
    /// Each pair at most once per collection.
    pub steiner: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, max_time: None };

    pub fn extended() -> Self {
        Budget { max_nodes: Some(20_000_000_000), max_time: Some(Duration::from_secs(3600)) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: Some(200_000_000), max_time: Some(Duration::from_secs(120)) }
    }
}

/// Record of an exhausted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub params: SearchParams,
    pub nodes: u64,
    pub partitions: usize,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "trade search certificate")?;
        writeln!(f, "mu={} k={} t={} volume={} steiner={}", p.mu, p.k, p.t, p.volume, p.steiner)?;
        writeln!(f, "first block fixed to {{0..{}}}; new points introduced in increasing order", p.k - 1)?;
        writeln!(f, "partitions={} nodes={}", self.partitions, self.nodes)?;
        write!(
            f,
            "search space exhausted: no trade of volume {} exists, and no smaller trade was met on the way",
            p.volume
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness { trade: TradeSystem, nodes: u64 },
    Nonexistence(Certificate),
    /// The budget ran out, or the search met smaller trades and so cannot
    /// rule out composite trades of the requested volume.
    Inconclusive { nodes: u64, reason: String, smaller: Option<TradeSystem> },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Witness { nodes, .. } | SearchOutcome::Inconclusive { nodes, .. } => *nodes,
            SearchOutcome::Nonexistence(c) => c.nodes,
        }
    }
}

/// Largest supported foundation.
const MAX_POINTS: usize = 128;

pub fn search_trade(params: SearchParams, budget: Budget) -> Result<SearchOutcome> {
    let SearchParams { mu, k, t, volume, .. } = params;
    if t != 2 {
        return Err(Error::Precondition(format!("trade search supports t = 2 only, got t = {t}")));
    }
    if mu < 2 {
        return Err(Error::Precondition(format!("mu must be at least 2, got {mu}")));
    }
    if k < 2 {
        return Err(Error::Precondition(format!("block size must be at least 2, got {k}")));
    }
    if volume == 0 {
        let trade = TradeSystem::new(k, t, Labels::numeric(0), vec![Vec::new(); mu])?;
        return Ok(SearchOutcome::Witness { trade, nodes: 0 });
    }
    // every foundation point lies in at least two blocks of each collection
    let max_points = (k * volume / 2).max(k);
    if max_points > MAX_POINTS {
        return Err(Error::Precondition(format!("volume {volume} is too large for the search")));
    }

    let shared = Shared {
        params,
        max_points,
        budget,
        start: Instant::now(),
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        best: AtomicUsize::new(usize::MAX),
    };

    let mut root = State::new(&shared);
    root.add(0, &(0..k as u32).collect::<Vec<_>>());
    let branches = match root.choose(&shared) {
        Choice::Balanced => unreachable!("a single block is never balanced"),
        Choice::Dead => Vec::new(),
        Choice::Branch(j, cands) => cands.into_iter().map(|c| (j, c)).collect::<Vec<_>>(),
    };
    let partitions = branches.len();

    let results: Vec<Partial> = branches
        .into_par_iter()
        .enumerate()
        .map(|(i, (j, cand))| {
            let mut st = root.clone();
            st.add(j, &cand);
            let mut p = Partial { index: i, nodes: 0, witness: None, smaller: None, smaller_count: 0, aborted: false };
            st.dfs(&shared, &mut p);
            if p.witness.is_some() {
                shared.best.fetch_min(i, Ordering::SeqCst);
            }
            p
        })
        .collect();

    // sequential-order accounting: partitions up to the first witness
    let first = results.iter().position(|p| p.witness.is_some());
    let counted = first.map_or(results.len(), |w| w + 1);
    let nodes = 1 + results[..counted].iter().map(|p| p.nodes).sum::<u64>();
    if let Some(w) = first {
        let trade = canonical_trade(&results[w].witness.clone().unwrap(), k)?;
        debug_assert!(verify_trade(&trade, params.steiner).valid);
        return Ok(SearchOutcome::Witness { trade, nodes });
    }
    if shared.exhausted.load(Ordering::SeqCst) || results.iter().any(|p| p.aborted) {
        return Ok(SearchOutcome::Inconclusive { nodes, reason: "budget exhausted".into(), smaller: None });
    }
    let smaller_count: u64 = results.iter().map(|p| p.smaller_count).sum();
    if smaller_count > 0 {
        let smaller = results.iter().find_map(|p| p.smaller.clone()).map(|c| canonical_trade(&c, k)).transpose()?;
        return Ok(SearchOutcome::Inconclusive {
            nodes,
            reason: format!("{smaller_count} smaller trades met; composite trades of volume {volume} not explored"),
            smaller,
        });
    }
    Ok(SearchOutcome::Nonexistence(Certificate { params, nodes, partitions }))
}

struct Shared {
    params: SearchParams,
    max_points: usize,
    budget: Budget,
    start: Instant,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    best: AtomicUsize,
}

impl Shared {
    /// Charges `n` nodes to the global budget ahead of use; false once it
    /// is spent.
    fn charge(&self, n: u64) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self.budget.max_time.is_some_and(|d| self.start.elapsed() > d);
        if over_nodes || over_time {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

struct Partial {
    index: usize,
    nodes: u64,
    witness: Option<Vec<Vec<Vec<u32>>>>,
    smaller: Option<Vec<Vec<Vec<u32>>>>,
    smaller_count: u64,
    aborted: bool,
}

enum Choice {
    Balanced,
    Dead,
    Branch(usize, Vec<Vec<u32>>),
}

#[derive(Clone)]
struct State {
    mu: usize,
    k: usize,
    n: usize,
    /// Points in use.
    nv: usize,
    /// `counts[j][a * n + b]` for `a < b`.
    counts: Vec<Vec<u16>>,
    colls: Vec<Vec<Vec<u32>>>,
}

const CHARGE_EVERY: u64 = 4096;

impl State {
    fn new(sh: &Shared) -> Self {
        let n = sh.max_points;
        State {
            mu: sh.params.mu,
            k: sh.params.k,
            n,
            nv: 0,
            counts: vec![vec![0; n * n]; sh.params.mu],
            colls: vec![Vec::new(); sh.params.mu],
        }
    }

    fn add(&mut self, j: usize, block: &[u32]) {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                self.counts[j][a as usize * self.n + b as usize] += 1;
            }
        }
        self.nv = self.nv.max(block.iter().map(|&x| x as usize + 1).max().unwrap_or(0));
        self.colls[j].push(block.to_vec());
    }

    fn remove(&mut self, j: usize, nv: usize) {
        let block = self.colls[j].pop().expect("block to remove");
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                self.counts[j][a as usize * self.n + b as usize] -= 1;
            }
        }
        self.nv = nv;
    }

    fn used(&self, block: &[u32]) -> bool {
        self.colls.iter().any(|c| c.iter().any(|b| b == block))
    }

    fn allowed(&self, j: usize, a: u32, b: u32, steiner: bool) -> bool {
        let (a, b) = (a.min(b) as usize, a.max(b) as usize);
        !steiner || b >= self.nv || self.counts[j][a * self.n + b] == 0
    }

    /// Blocks through `{x, y}` that collection `j` may take.
    fn candidates(&self, j: usize, x: u32, y: u32, sh: &Shared, limit: usize) -> Vec<Vec<u32>> {
        let steiner = sh.params.steiner;
        let k = self.k;
        let others: Vec<u32> = (0..self.nv as u32)
            .filter(|&o| o != x && o != y && self.allowed(j, x, o, steiner) && self.allowed(j, y, o, steiner))
            .collect();
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(k);
        for fresh in 0..=k - 2 {
            if self.nv + fresh > sh.max_points {
                break;
            }
            let old = k - 2 - fresh;
            self.combine(j, &others, old, 0, &mut pick, steiner, &mut |pick: &[u32]| {
                let mut b: Vec<u32> = pick.iter().copied().chain([x, y]).chain(self.nv as u32..(self.nv + fresh) as u32).collect();
                b.sort_unstable();
                if !self.used(&b) {
                    out.push(b);
                }
                out.len() <= limit
            });
            if out.len() > limit {
                break;
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn combine(
        &self,
        j: usize,
        pool: &[u32],
        need: usize,
        start: usize,
        pick: &mut Vec<u32>,
        steiner: bool,
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if need == 0 {
            return emit(pick);
        }
        for i in start..pool.len() {
            let c = pool[i];
            if pick.iter().all(|&p| self.allowed(j, p, c, steiner)) {
                pick.push(c);
                let go_on = self.combine(j, pool, need - 1, i + 1, pick, steiner, emit);
                pick.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    fn choose(&self, sh: &Shared) -> Choice {
        let s = sh.params.volume;
        let per_block = self.k * (self.k - 1) / 2;
        let mut demand = vec![0usize; self.mu];
        let mut deficient: Vec<(usize, u32, u32)> = Vec::new();
        for a in 0..self.nv {
            for b in a + 1..self.nv {
                let idx = a * self.n + b;
                let mx = (0..self.mu).map(|j| self.counts[j][idx]).max().unwrap_or(0);
                for j in 0..self.mu {
                    let c = self.counts[j][idx];
                    if c < mx {
                        demand[j] += (mx - c) as usize;
                        deficient.push((j, a as u32, b as u32));
                    }
                }
            }
        }
        if deficient.is_empty() {
            return Choice::Balanced;
        }
        for j in 0..self.mu {
            if self.colls[j].len() + demand[j].div_ceil(per_block) > s {
                return Choice::Dead;
            }
        }
        let mut best: Option<(usize, Vec<Vec<u32>>)> = None;
        for &(j, a, b) in &deficient {
            let limit = best.as_ref().map_or(usize::MAX, |(_, c)| c.len());
            let c = self.candidates(j, a, b, sh, limit);
            if c.is_empty() {
                return Choice::Dead;
            }
            if best.as_ref().is_none_or(|(_, bc)| c.len() < bc.len()) {
                best = Some((j, c));
            }
        }
        let (j, c) = best.expect("deficient pair");
        Choice::Branch(j, c)
    }

    fn dfs(&mut self, sh: &Shared, p: &mut Partial) {
        p.nodes += 1;
        if p.nodes % CHARGE_EVERY == 1 {
            if !sh.charge(CHARGE_EVERY) {
                p.aborted = true;
                return;
            }
            if sh.best.load(Ordering::Relaxed) < p.index {
                p.aborted = true;
                return;
            }
        }
        match self.choose(sh) {
            Choice::Dead => {}
            Choice::Balanced => {
                if self.colls[0].len() == sh.params.volume {
                    p.witness = Some(self.colls.clone());
                } else {
                    p.smaller_count += 1;
                    if p.smaller.is_none() {
                        p.smaller = Some(self.colls.clone());
                    }
                }
            }
            Choice::Branch(j, cands) => {
                if self.colls[j].len() == sh.params.volume {
                    return;
                }
                let nv = self.nv;
                for c in cands {
                    self.add(j, &c);
                    self.dfs(sh, p);
                    self.remove(j, nv);
                    if p.witness.is_some() || p.aborted {
                        return;
                    }
                }
            }
        }
    }
}

/// Relabels points by first appearance (collections in order, blocks
/// sorted) and sorts blocks and collections.
fn canonical_trade(colls: &[Vec<Vec<u32>>], k: usize) -> Result<TradeSystem> {
    let mut order: Vec<u32> = Vec::new();
    let mut map = std::collections::HashMap::new();
    for c in colls {
        let mut sorted = c.clone();
        sorted.sort();
        for b in &sorted {
            for &x in b {
                map.entry(x).or_insert_with(|| {
                    order.push(x);
                    order.len() as u32 - 1
                });
            }
        }
    }
    let mut cs: Vec<Vec<Block>> = colls
        .iter()
        .map(|c| c.iter().map(|b| Block::new(b.iter().map(|x| map[x]))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for c in &mut cs {
        c.sort();
    }
    cs.sort();
    TradeSystem::new(k, 2, Labels::numeric(order.len()), cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(mu: usize, k: usize, volume: usize, steiner: bool) -> SearchOutcome {
        search_trade(SearchParams { mu, k, t: 2, volume, steiner }, Budget::default()).unwrap()
    }

    #[test]
    fn volume_zero_is_the_empty_trade() {
        let SearchOutcome::Witness { trade, .. } = run(3, 4, 0, true) else { panic!() };
        assert_eq!(trade.volume(), 0);
        assert!(verify_trade(&trade, true).valid);
    }

    #[test]
    fn pasch_is_the_smallest_triple_trade() {
        for s in 1..4 {
            assert!(matches!(run(2, 3, s, true), SearchOutcome::Nonexistence(_)), "volume {s}");
            assert!(matches!(run(2, 3, s, false), SearchOutcome::Nonexistence(_)), "volume {s}");
        }
        let SearchOutcome::Witness { trade, .. } = run(2, 3, 4, true) else { panic!() };
        let r = verify_trade(&trade, true);
        assert!(r.valid);
        assert_eq!(r.foundation.len(), 6);
    }

    #[test]
    fn small_volumes_have_certificates() {
        for s in 1..=3 {
            let SearchOutcome::Nonexistence(c) = run(3, 4, s, true) else { panic!("volume {s}") };
            assert!(c.to_string().contains("exhausted"));
        }
    }

    #[test]
    fn deterministic() {
        let a = run(2, 3, 4, true);
        let b = run(2, 3, 4, true);
        assert_eq!(a, b);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let b = Budget { max_nodes: Some(1), max_time: None };
        let r = search_trade(SearchParams { mu: 3, k: 4, t: 2, volume: 6, steiner: true }, b).unwrap();
        assert!(matches!(r, SearchOutcome::Inconclusive { .. }), "{r:?}");
    }

    #[test]
    fn rejects_unsupported_parameters() {
        assert!(search_trade(SearchParams { mu: 3, k: 4, t: 3, volume: 2, steiner: true }, Budget::default()).is_err());
        assert!(search_trade(SearchParams { mu: 1, k: 4, t: 2, volume: 2, steiner: true }, Budget::default()).is_err());
    }
}
