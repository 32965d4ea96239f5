//! Koszul cohomology of monomial rings generated in degree one.
//!
//! `k_{i,j}` is the homology of
//! `∧^{i+1}V ⊗ R_{j-1} -> ∧^i V ⊗ R_j -> ∧^{i-1}V ⊗ R_{j+1}`,
//! computed from exact ranks over prime fields or `Q`.

mod betti;
mod complex;
mod field;
mod ring;
mod sparse;

use thiserror::Error;

pub use betti::{
    betti_strip, koszul_dim, property_np, BettiEntry, BettiStrip, Evidence, KoszulValue, NpVerdict,
    Soundness, DEFAULT_J_CUT,
};
pub use complex::{
    differential_blocks, differential_rank, koszul_cell, koszul_differential, virtual_size, KoszulCell,
    DEFAULT_BUDGET,
};
pub use field::{is_prime, random_prime_31, Field, FieldStrategy};
pub use ring::{parse_ring, scroll_ring, veronese_ring, GradedRingPresentation};
pub use sparse::{rank_exact, rank_fp, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("ring not generated in degree 1: {monomial} in degree {degree} is not a product")]
    NotGenerated { degree: usize, monomial: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("cell too large: δ_({p},{q}) has virtual size {size} > budget {budget}")]
    CellTooLarge { p: usize, q: usize, size: u128, budget: u128 },
    #[error("bad field: {0}")]
    BadField(String),
}
