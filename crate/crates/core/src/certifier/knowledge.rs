//! Known `N_p` facts: Veronese embeddings, rational ruled surfaces, Mukai-type bounds.

use serde::{Deserialize, Serialize};

use super::{CertifyError, PLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    Open,
}

/// What is known about `(P^n, O(d))`: `N_p` holds for `p` covered by
/// `holds_through`, fails for `p >= fails_from`, open in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeroneseBoundary {
    pub holds_through: PLevel,
    pub fails_from: Option<u32>,
}

pub fn veronese_boundary(n: u32, d: u32) -> Result<VeroneseBoundary, CertifyError> {
    if n < 1 || d < 1 {
        return Err(CertifyError::InvalidRange(format!("(n, d) = ({n}, {d}) needs n >= 1, d >= 1")));
    }
    let exact = |p: u32| VeroneseBoundary { holds_through: PLevel::Finite(p), fails_from: Some(p + 1) };
    Ok(match (n, d) {
        (1, _) | (_, 1) | (2, 2) => VeroneseBoundary { holds_through: PLevel::Infinite, fails_from: None },
        (_, 2) => exact(5),
        (2, _) => exact(3 * d - 3),
        (3, 3) => exact(6),
        _ => VeroneseBoundary {
            holds_through: PLevel::Finite(if d == 3 { 4 } else { d }),
            fails_from: Some(3 * d - 2),
        },
    })
}

pub fn veronese_status(n: u32, d: u32, p: u32) -> Result<Status, CertifyError> {
    let b = veronese_boundary(n, d)?;
    Ok(if b.holds_through.covers(p) {
        Status::Holds
    } else if b.fails_from.is_some_and(|f| p >= f) {
        Status::Fails
    } else {
        Status::Open
    })
}

/// `N_p` for `aH + bF` on the rational ruled surface with invariant `e`.
pub fn rational_ruled_surface_status(e: i64, a: i64, b: i64, p: u32) -> Result<Status, CertifyError> {
    if e < 0 {
        return Err(CertifyError::InvalidRange(format!("e = {e} must be >= 0")));
    }
    if a < 1 || b - a * e < 1 {
        return Err(CertifyError::Hypothesis(format!(
            "(a, b) = ({a}, {b}) is not very ample for e = {e}: need a >= 1 and b - ae >= 1"
        )));
    }
    if a == 1 || (e == 0 && b == 1) {
        return Ok(Status::Holds);
    }
    Ok(if 2 * a + 2 * b - a * e >= 3 + i64::from(p) { Status::Holds } else { Status::Fails })
}

/// `q` ample summands with `mu_minus(E) = nu / tau` certify `N_p` when `q > tau (g + 1 + p)`.
pub fn mukai_check(genus: u32, rank: u64, tau: u64, q: u64, p: u32) -> Result<bool, CertifyError> {
    if tau < 1 {
        return Err(CertifyError::InvalidRange("tau must be >= 1".into()));
    }
    if q < rank + 1 {
        return Err(CertifyError::Hypothesis(format!("q = {q} must be >= rank + 1 = {}", rank + 1)));
    }
    let bound = u128::from(tau) * (u128::from(genus) + 1 + u128::from(p));
    Ok(u128::from(q) > bound)
}

/// Smallest `q` accepted by [`mukai_check`].
pub fn mukai_min_q(genus: u32, rank: u64, tau: u64, p: u32) -> u64 {
    let bound = tau * (u64::from(genus) + 1 + u64::from(p));
    (rank + 1).max(bound + 1)
}
