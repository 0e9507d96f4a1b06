//! Permutations in cycle notation, cyclic development and intersection
//! scans over permutation tables.

mod develop;
mod intersect;
mod perm;

pub use develop::{develop, develop_with_orbits, emit_dev, parse_dev, DevelopmentSpec, Orbit};
pub use intersect::{common_blocks, same_common_violation, spectrum_scan, PermRow, RowResult, ScanReport};
pub use perm::{apply_permutation, parse_third, preserves_groups, Permutable, Permutation};
