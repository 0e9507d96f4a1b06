//! Steiner systems S(2,4,v), group divisible designs and μ-way Steiner trades.
//!
//! The crate covers the full pipeline used to study which triples of
//! S(2,4,v) designs can share exactly `k` blocks:
//!
//! * [`design`]: points, blocks, designs, Steiner verification, flowers,
//!   point deletion and exact-cover completion of partial designs;
//! * [`actions`]: permutations in cycle notation, cyclic base-block
//!   development and intersection scans over permutation tables;
//! * [`trades`]: trade verification, extraction from design triples and an
//!   exhaustive small-volume search;
//! * [`constructions`]: GDDs and the recursive constructions (weighting,
//!   filling, the `v -> 3v+1` rule, subsystem swaps, cover replacement);
//! * [`spectrum`]: `b_v`, `I_3[v]`, sum closures with witnesses and the
//!   intersection-set registry;
//! * [`catalog`]: embedded designs and tables, plus the reproduction driver.

pub mod actions;
pub mod catalog;
pub mod constructions;
pub mod design;
mod error;
pub mod spectrum;
pub mod trades;

pub use actions::{apply_permutation, common_blocks, develop, spectrum_scan, DevelopmentSpec, Permutation};
pub use constructions::{verify_gdd, Gdd, Triple};
pub use design::{verify_steiner, Block, CoverageReport, Design, Labels};
pub use error::{Error, Result};
pub use spectrum::{b, i3, sum_closure, ClosureSpec, SpectrumSet};
pub use trades::{extract_trade, search_trade, verify_trade, TradeSystem};
