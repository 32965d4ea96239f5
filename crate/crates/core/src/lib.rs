//! Certification of syzygy properties for ruled varieties over curves.
//!
//! The crate has three layers:
//!
//! - [`slope`]: exact slope calculus on formal vector bundles over a curve;
//! - [`certifier`]: effective Property `N_p` criteria combined into an
//!   audited [`certifier::Certificate`];
//! - [`koszul`]: graded Betti numbers of monomially presented coordinate
//!   rings, computed from Koszul complexes by exact rank computations.

pub mod certifier;
pub mod combinatorics;
pub mod koszul;
pub mod rational;
pub mod slope;

pub use rational::Rational;
