//! Slope calculus for formal vector bundles on a smooth projective curve.
//!
//! A [`FormalBundle`] records rank, degree and certified bounds
//! `mu_minus <= mu(E) <= mu_plus` on its minimal and maximal slopes. Every
//! construction propagates the strongest bound that the standard slope
//! identities allow; no Harder–Narasimhan data is kept.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, binomial_signed};
use crate::rational::{format_rational, int, serde_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("bundle rank must be positive")]
    ZeroRank,
    #[error("slope bounds violate mu_minus <= degree/rank <= mu_plus: {mu_minus} <= {slope} <= {mu_plus}")]
    BoundsViolated {
        mu_minus: String,
        slope: String,
        mu_plus: String,
    },
    #[error("a line bundle has mu_minus = mu_plus = degree")]
    LineBundleBounds,
    #[error("derived degree {0} is not an integer; input invariants are inconsistent")]
    NonIntegralDegree(String),
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("exterior power {ell} exceeds rank {rank}")]
    WedgeTooLarge { ell: u64, rank: u64 },
    #[error("no pushforward formula for a = {0} (need a >= 1)")]
    NoPushforward(i64),
    #[error("bundle rank {found} does not match fiber dimension (expected {expected})")]
    RankMismatch { expected: u64, found: u64 },
    #[error("form degree j = {j} outside 1..={n}")]
    InvalidFormDegree { j: u64, n: u64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("rank overflow")]
    Overflow,
}

/// The base curve; only its genus enters the criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveContext {
    pub genus: u32,
}

impl CurveContext {
    pub fn new(genus: u32) -> Self {
        CurveContext { genus }
    }

    fn g(&self) -> Rational {
        int(i64::from(self.genus))
    }
}

/// Three-valued outcome of a one-sided criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriState {
    Certified,
    NotCertified,
    KnownFalse,
}

/// `L = a H + pi^* B` on `P_C(E)`, recorded numerically as `(a, deg B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleClass {
    pub a: i64,
    pub b: i64,
}

impl LineBundleClass {
    pub fn new(a: i64, b: i64) -> Self {
        LineBundleClass { a, b }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalBundle {
    rank: u64,
    #[serde(with = "serde_bigint")]
    degree: BigInt,
    #[serde(with = "serde_rational")]
    mu_minus: Rational,
    #[serde(with = "serde_rational")]
    mu_plus: Rational,
    semistable: bool,
    /// `mu_minus` is the true minimal slope, not just a lower bound.
    mu_minus_exact: bool,
}

mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        BigInt::from_str(&text).map_err(serde::de::Error::custom)
    }
}

impl FormalBundle {
    /// General constructor from rank, degree and slope bounds.
    pub fn new(
        rank: u64,
        degree: impl Into<BigInt>,
        mu_minus: Rational,
        mu_plus: Rational,
    ) -> Result<Self, SlopeError> {
        Self::assemble(rank, degree.into(), mu_minus, mu_plus, false)
    }

    /// A semistable bundle: all three slopes coincide.
    pub fn semistable(rank: u64, degree: impl Into<BigInt>) -> Result<Self, SlopeError> {
        if rank == 0 {
            return Err(SlopeError::ZeroRank);
        }
        let degree = degree.into();
        let mu = Rational::new(degree.clone(), BigInt::from(rank));
        Self::assemble(rank, degree, mu.clone(), mu, true)
    }

    pub fn line(degree: i64) -> Self {
        Self::semistable(1, degree).expect("rank one is always valid")
    }

    /// Direct sum of line bundles of the given degrees; its minimal slope is
    /// exactly the smallest degree.
    pub fn decomposable(degrees: &[i64]) -> Result<Self, SlopeError> {
        let min = degrees.iter().min().ok_or(SlopeError::ZeroRank)?;
        let max = degrees.iter().max().ok_or(SlopeError::ZeroRank)?;
        let total: i64 = degrees.iter().sum();
        Self::assemble(degrees.len() as u64, BigInt::from(total), int(*min), int(*max), true)
    }

    /// Caller asserts `mu_minus` is the true minimal slope.
    pub fn with_exact_mu_minus(mut self) -> Self {
        self.mu_minus_exact = true;
        self
    }

    fn assemble(
        rank: u64,
        degree: BigInt,
        mu_minus: Rational,
        mu_plus: Rational,
        exact: bool,
    ) -> Result<Self, SlopeError> {
        if rank == 0 {
            return Err(SlopeError::ZeroRank);
        }
        let slope = Rational::new(degree.clone(), BigInt::from(rank));
        if mu_minus > slope || slope > mu_plus {
            return Err(SlopeError::BoundsViolated {
                mu_minus: format_rational(&mu_minus),
                slope: format_rational(&slope),
                mu_plus: format_rational(&mu_plus),
            });
        }
        if rank == 1 && (mu_minus != slope || mu_plus != slope) {
            return Err(SlopeError::LineBundleBounds);
        }
        // mu_minus = mu = mu_plus is the definition of semistability
        let semistable = mu_minus == mu_plus;
        Ok(FormalBundle {
            rank,
            degree,
            mu_minus,
            mu_plus,
            semistable,
            mu_minus_exact: exact || semistable,
        })
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn mu_minus(&self) -> &Rational {
        &self.mu_minus
    }

    pub fn mu_plus(&self) -> &Rational {
        &self.mu_plus
    }

    pub fn is_semistable(&self) -> bool {
        self.semistable
    }

    pub fn mu_minus_is_exact(&self) -> bool {
        self.mu_minus_exact
    }

    /// `deg / rank`.
    pub fn slope(&self) -> Rational {
        Rational::new(self.degree.clone(), BigInt::from(self.rank))
    }
}

/// `E ⊗ F`; minimal and maximal slopes add.
pub fn tensor(e: &FormalBundle, f: &FormalBundle) -> Result<FormalBundle, SlopeError> {
    let rank = e.rank.checked_mul(f.rank).ok_or(SlopeError::Overflow)?;
    let degree = BigInt::from(e.rank) * &f.degree + BigInt::from(f.rank) * &e.degree;
    FormalBundle::assemble(
        rank,
        degree,
        &e.mu_minus + &f.mu_minus,
        &e.mu_plus + &f.mu_plus,
        e.mu_minus_exact && f.mu_minus_exact,
    )
}

/// `S^ell E`; both slope bounds scale by `ell`.
pub fn sym_power(e: &FormalBundle, ell: u64) -> Result<FormalBundle, SlopeError> {
    if ell == 0 {
        return Err(SlopeError::ZeroPower);
    }
    let rank = binomial(e.rank + ell - 1, ell).ok_or(SlopeError::Overflow)?;
    let scale = int(ell as i64);
    let degree = &scale * int_of(rank) * e.slope();
    let degree = integral(degree)?;
    FormalBundle::assemble(
        rank,
        degree,
        &scale * &e.mu_minus,
        &scale * &e.mu_plus,
        e.mu_minus_exact,
    )
}

/// `∧^ell E`. The stored `mu_minus` is the lower bound `ell * mu_minus(E)`.
pub fn wedge_power(e: &FormalBundle, ell: u64) -> Result<FormalBundle, SlopeError> {
    if ell == 0 {
        return Err(SlopeError::ZeroPower);
    }
    if ell > e.rank {
        return Err(SlopeError::WedgeTooLarge { ell, rank: e.rank });
    }
    let rank = binomial(e.rank, ell).ok_or(SlopeError::Overflow)?;
    let degree = BigInt::from(binomial(e.rank - 1, ell - 1).ok_or(SlopeError::Overflow)?) * &e.degree;
    let scale = int(ell as i64);
    if rank == 1 {
        // the determinant
        let d = Rational::from_integer(degree.clone());
        return FormalBundle::assemble(1, degree, d.clone(), d, true);
    }
    FormalBundle::assemble(rank, degree, &scale * &e.mu_minus, &scale * &e.mu_plus, e.semistable)
}

/// Middle term of `0 -> sub -> F -> quotient -> 0`:
/// `mu_minus(F) >= min(mu_minus(sub), mu_minus(quotient))` and dually for `mu_plus`.
pub fn extension(sub: &FormalBundle, quotient: &FormalBundle) -> Result<FormalBundle, SlopeError> {
    let rank = sub.rank.checked_add(quotient.rank).ok_or(SlopeError::Overflow)?;
    let degree = &sub.degree + &quotient.degree;
    let lower = sub.mu_minus.clone().min(quotient.mu_minus.clone());
    let upper = sub.mu_plus.clone().max(quotient.mu_plus.clone());
    FormalBundle::assemble(rank, degree, lower, upper, false)
}

/// Sufficient criterion for `h^1(C, F) = 0`: `mu_minus > 2g - 2`.
pub fn h1_vanishes(f: &FormalBundle, ctx: CurveContext) -> bool {
    f.mu_minus > int(2) * ctx.g() - int(2)
}

/// Sufficient criterion for global generation: `mu_minus > 2g - 1`.
pub fn globally_generated(f: &FormalBundle, ctx: CurveContext) -> bool {
    f.mu_minus > int(2) * ctx.g() - int(1)
}

/// Sufficient criterion for very ampleness of `O_{P(F)}(1)`: `mu_minus > 2g`.
pub fn taut_very_ample(f: &FormalBundle, ctx: CurveContext) -> bool {
    f.mu_minus > int(2) * ctx.g()
}

/// Lower bound `-mu/(mu - g)` for the minimal slope of the dual span bundle
/// `M_F`, valid when `mu = mu_minus(F) >= 2g`.
pub fn butler_dual_span_bound(f: &FormalBundle, ctx: CurveContext) -> Result<Rational, SlopeError> {
    let g = ctx.g();
    let mu = &f.mu_minus;
    if *mu < int(2) * &g {
        return Err(SlopeError::Hypothesis(format!(
            "mu_minus = {} < 2g = {}",
            format_rational(mu),
            2 * ctx.genus
        )));
    }
    let denominator = mu - &g;
    if denominator.is_zero() {
        return Err(SlopeError::Hypothesis("mu_minus = g = 0 leaves the bound undefined".into()));
    }
    Ok(-(mu / denominator))
}

/// Ampleness of `aH + pi^* B`: `a >= 1` and `a mu_minus(E) + deg B > 0`.
///
/// With only a lower bound on `mu_minus` a failing sum is `NotCertified`.
pub fn miyaoka_ample(e: &FormalBundle, l: LineBundleClass) -> TriState {
    if l.a < 1 {
        return TriState::KnownFalse;
    }
    let sum = int(l.a) * &e.mu_minus + int(l.b);
    if sum.is_positive() {
        TriState::Certified
    } else if e.mu_minus_exact {
        TriState::KnownFalse
    } else {
        TriState::NotCertified
    }
}

/// `pi_* L = S^a(E) ⊗ B` for `L = aH + pi^* B` on `P_C(E)` with `rank E = n + 1`.
pub fn pushforward(e: &FormalBundle, l: LineBundleClass, n: u64) -> Result<FormalBundle, SlopeError> {
    if l.a < 1 {
        return Err(SlopeError::NoPushforward(l.a));
    }
    if e.rank != n + 1 {
        return Err(SlopeError::RankMismatch { expected: n + 1, found: e.rank });
    }
    let sym = sym_power(e, l.a as u64)?;
    tensor(&sym, &FormalBundle::line(l.b))
}

/// Rank of `pi_* Omega^j_{X/Y}(k)`: `C(k+n-j, k) * C(k-1, j)`, zero for `k <= j`.
pub fn bott_rank(n: u64, j: u64, k: u64) -> Result<u64, SlopeError> {
    if j < 1 || j > n {
        return Err(SlopeError::InvalidFormDegree { j, n });
    }
    if k <= j {
        return Ok(0);
    }
    let first = binomial(k + n - j, k).ok_or(SlopeError::Overflow)?;
    let second = binomial_signed(k as i64 - 1, j as i64).ok_or(SlopeError::Overflow)?;
    first.checked_mul(second).ok_or(SlopeError::Overflow)
}

/// Riemann–Roch lower bound `floor(rank * (mu_minus - g + 1))` for `h^0(C, F)`,
/// valid once `mu_minus > 2g - 2`.
pub fn h0_lower_bound(f: &FormalBundle, ctx: CurveContext) -> Result<BigInt, SlopeError> {
    if !h1_vanishes(f, ctx) {
        return Err(SlopeError::Hypothesis(format!(
            "mu_minus = {} is not > 2g - 2",
            format_rational(&f.mu_minus)
        )));
    }
    let value = int_of(f.rank) * (&f.mu_minus - ctx.g() + Rational::one());
    Ok(value.floor().to_integer())
}

fn int_of(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn integral(q: Rational) -> Result<BigInt, SlopeError> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(SlopeError::NonIntegralDegree(format_rational(&q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn bundle(rank: u64, degree: i64, mu_minus: Rational, mu_plus: Rational) -> FormalBundle {
        FormalBundle::new(rank, degree, mu_minus, mu_plus).unwrap()
    }

    #[test]
    fn slopes() {
        assert_eq!(FormalBundle::semistable(2, 1).unwrap().slope(), ratio(1, 2));
        assert_eq!(FormalBundle::line(-3).slope(), int(-3));
        assert_eq!(FormalBundle::semistable(3, 0).unwrap().slope(), int(0));
    }

    #[test]
    fn constructor_rejects_inconsistent_bounds() {
        assert_eq!(FormalBundle::new(0, 0, int(0), int(0)), Err(SlopeError::ZeroRank));
        assert!(matches!(
            FormalBundle::new(2, 1, int(1), int(2)),
            Err(SlopeError::BoundsViolated { .. })
        ));
        assert_eq!(FormalBundle::new(1, 2, int(1), int(2)), Err(SlopeError::LineBundleBounds));
    }

    #[test]
    fn coinciding_bounds_mean_semistable() {
        let e = bundle(2, 2, int(1), int(1));
        assert!(e.is_semistable());
        assert!(e.mu_minus_is_exact());
        assert!(!bundle(2, 1, int(0), int(1)).is_semistable());
    }

    #[test]
    fn tensor_examples() {
        let e = FormalBundle::semistable(2, 1).unwrap();
        let t = tensor(&e, &FormalBundle::line(3)).unwrap();
        assert_eq!((t.rank(), t.degree().clone()), (2, BigInt::from(7)));
        assert_eq!(t.mu_minus(), &ratio(7, 2));
        assert_eq!(tensor(&e, &FormalBundle::line(0)).unwrap(), e);

        let a = bundle(3, 2, ratio(1, 3), int(1));
        let b = FormalBundle::line(-2);
        assert_eq!(tensor(&a, &b).unwrap().mu_minus(), &ratio(-5, 3));
    }

    #[test]
    fn sym_examples() {
        let s = sym_power(&FormalBundle::semistable(2, 1).unwrap(), 2).unwrap();
        assert_eq!((s.rank(), s.degree().clone(), s.slope()), (3, BigInt::from(3), int(1)));
        let e = bundle(3, 1, int(0), int(1));
        assert_eq!(sym_power(&e, 1).unwrap(), e);
        let c = sym_power(&FormalBundle::line(2), 3).unwrap();
        assert_eq!((c.rank(), c.degree().clone()), (1, BigInt::from(6)));
        assert_eq!(sym_power(&e, 0), Err(SlopeError::ZeroPower));
    }

    #[test]
    fn wedge_examples() {
        let e = bundle(3, 1, int(0), int(1));
        let w = wedge_power(&e, 2).unwrap();
        assert_eq!((w.rank(), w.degree().clone()), (3, BigInt::from(2)));
        assert_eq!(w.mu_minus(), &int(0));
        let s = FormalBundle::semistable(3, 1).unwrap();
        assert_eq!(wedge_power(&s, 2).unwrap().mu_minus(), &ratio(2, 3));
        let det = wedge_power(&e, 3).unwrap();
        assert_eq!((det.rank(), det.degree().clone()), (1, BigInt::from(1)));
        assert_eq!(wedge_power(&e, 1).unwrap(), e);
        assert_eq!(wedge_power(&e, 4), Err(SlopeError::WedgeTooLarge { ell: 4, rank: 3 }));
    }

    #[test]
    fn positivity_criteria() {
        let half = bundle(2, 1, ratio(1, 2), ratio(1, 2));
        assert!(h1_vanishes(&half, CurveContext::new(1)));
        assert!(!h1_vanishes(&FormalBundle::line(2), CurveContext::new(2)));
        assert!(h1_vanishes(&FormalBundle::line(0), CurveContext::new(0)));

        assert!(globally_generated(&FormalBundle::line(2), CurveContext::new(1)));
        assert!(!globally_generated(&FormalBundle::line(1), CurveContext::new(1)));
        assert!(globally_generated(&FormalBundle::line(0), CurveContext::new(0)));

        assert!(taut_very_ample(&FormalBundle::line(3), CurveContext::new(1)));
        assert!(!taut_very_ample(&FormalBundle::line(2), CurveContext::new(1)));
        assert!(taut_very_ample(&half, CurveContext::new(0)));
    }

    #[test]
    fn butler_examples() {
        let at = |mu: Rational, g| {
            let e = FormalBundle::new(2, 0, mu.clone().min(int(0)), mu.clone().max(int(0))).unwrap();
            butler_dual_span_bound(&e, CurveContext::new(g))
        };
        assert_eq!(butler_dual_span_bound(&FormalBundle::line(4), CurveContext::new(2)), Ok(int(-2)));
        assert_eq!(butler_dual_span_bound(&FormalBundle::line(1), CurveContext::new(0)), Ok(int(-1)));
        assert_eq!(butler_dual_span_bound(&FormalBundle::line(5), CurveContext::new(2)), Ok(ratio(-5, 3)));
        assert!(butler_dual_span_bound(&FormalBundle::line(0), CurveContext::new(0)).is_err());
        assert!(butler_dual_span_bound(&FormalBundle::line(3), CurveContext::new(2)).is_err());
        assert!(at(int(-1), 0).is_err());
    }

    #[test]
    fn miyaoka_examples() {
        let half = FormalBundle::semistable(2, 1).unwrap();
        assert_eq!(miyaoka_ample(&half, LineBundleClass::new(1, 0)), TriState::Certified);
        assert_eq!(miyaoka_ample(&half, LineBundleClass::new(0, 5)), TriState::KnownFalse);
        let minus_one = FormalBundle::semistable(2, -2).unwrap();
        assert_eq!(miyaoka_ample(&minus_one, LineBundleClass::new(2, 2)), TriState::KnownFalse);
        // only a lower bound: the failing sum is not a certificate
        let loose = bundle(2, 0, int(-1), int(1));
        assert_eq!(miyaoka_ample(&loose, LineBundleClass::new(2, 2)), TriState::NotCertified);
        assert_eq!(
            miyaoka_ample(&loose.with_exact_mu_minus(), LineBundleClass::new(2, 2)),
            TriState::KnownFalse
        );
    }

    #[test]
    fn pushforward_examples() {
        let e = FormalBundle::semistable(2, 1).unwrap();
        assert_eq!(pushforward(&e, LineBundleClass::new(1, 0), 1).unwrap(), e);

        let e3 = FormalBundle::semistable(3, 1).unwrap();
        let f = pushforward(&e3, LineBundleClass::new(2, 3), 2).unwrap();
        assert_eq!((f.rank(), f.degree().clone()), (6, BigInt::from(22)));
        assert_eq!(f.mu_minus(), &ratio(11, 3));

        let e0 = FormalBundle::semistable(2, 0).unwrap();
        let f = pushforward(&e0, LineBundleClass::new(3, 1), 1).unwrap();
        assert_eq!((f.rank(), f.degree().clone(), f.mu_minus().clone()), (4, BigInt::from(4), int(1)));

        assert_eq!(pushforward(&e, LineBundleClass::new(0, 1), 1), Err(SlopeError::NoPushforward(0)));
        assert!(matches!(
            pushforward(&e, LineBundleClass::new(1, 1), 2),
            Err(SlopeError::RankMismatch { .. })
        ));
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_rank(2, 1, 2), Ok(3));
        assert_eq!(bott_rank(2, 2, 3), Ok(1));
        assert_eq!(bott_rank(3, 1, 1), Ok(0));
        assert!(bott_rank(2, 0, 3).is_err());
        assert!(bott_rank(2, 3, 5).is_err());
    }

    #[test]
    fn h0_examples() {
        let six = FormalBundle::semistable(6, 18).unwrap();
        assert_eq!(h0_lower_bound(&six, CurveContext::new(1)), Ok(BigInt::from(18)));
        assert_eq!(h0_lower_bound(&FormalBundle::line(4), CurveContext::new(0)), Ok(BigInt::from(5)));
        let three = FormalBundle::semistable(3, 15).unwrap();
        assert_eq!(h0_lower_bound(&three, CurveContext::new(2)), Ok(BigInt::from(12)));
        assert!(h0_lower_bound(&FormalBundle::line(2), CurveContext::new(2)).is_err());
    }

    #[test]
    fn extension_bounds() {
        let e = extension(&FormalBundle::line(0), &FormalBundle::semistable(2, 1).unwrap()).unwrap();
        assert_eq!((e.rank(), e.degree().clone()), (3, BigInt::from(1)));
        assert_eq!(e.mu_minus(), &int(0));
        assert_eq!(e.mu_plus(), &ratio(1, 2));
    }
}
