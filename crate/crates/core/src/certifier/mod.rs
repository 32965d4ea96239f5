//! Property `N_p` certification for `L = aH + pi^* B` on `X = P_C(E)`.
//!
//! Each effective criterion is a rule producing a [`RuleTrace`]: the
//! hypotheses it checked (exact inequalities with pass/fail bits) and what it
//! concludes. [`best_certificate`] runs every rule and merges the results
//! into a [`Certificate`] holding the largest certified `p` and the smallest
//! `p` known to fail.

mod knowledge;
mod rules;
mod witness;

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{display_rational, int, serde_rational, Rational};
use crate::slope::{miyaoka_ample, pushforward, FormalBundle, LineBundleClass, SlopeError, TriState};

pub use knowledge::{
    mukai_check, mukai_min_q, rational_ruled_surface_status, veronese_boundary, veronese_status,
    Status, VeroneseBoundary,
};
pub use rules::{
    certify_butler, certify_fiber_knowledge, certify_general, certify_rational_ruled_surface,
    certify_ruled_surface, certify_scroll, certify_veronese_fibration, failure_bound,
    quadratic_p_max, quadratic_threshold,
};
pub use witness::{optimality_witness, ChainLink, WitnessReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid embedding: {0}")]
    InvalidSpec(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("no hyperelliptic witness for genus {0}: the construction needs g >= 2")]
    NoHyperellipticWitness(u32),
    #[error("certificate invariant breached: {0}")]
    InvariantBreach(String),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

/// `(g, n, a, deg B, E)` describing `L = aH + pi^* B` on `P_C(E)`, `rank E = n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub genus: u32,
    pub n: u32,
    pub a: i64,
    pub b: i64,
    pub bundle: FormalBundle,
    /// `e = -deg(det E)` for a normalized rank-2 bundle.
    pub surface_e: Option<i64>,
}

impl EmbeddingSpec {
    pub fn new(genus: u32, n: u32, a: i64, b: i64, bundle: FormalBundle) -> Result<Self, CertifyError> {
        let spec = EmbeddingSpec { genus, n, a, b, bundle, surface_e: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_surface_e(mut self, e: i64) -> Self {
        self.surface_e = Some(e);
        self
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        if self.n < 1 {
            return Err(CertifyError::InvalidSpec("fiber dimension n must be >= 1".into()));
        }
        if self.bundle.rank() != u64::from(self.n) + 1 {
            return Err(CertifyError::InvalidSpec(format!(
                "bundle rank {} != n + 1 = {}",
                self.bundle.rank(),
                self.n + 1
            )));
        }
        if self.a < 1 {
            return Err(CertifyError::InvalidSpec(format!("a = {} must be >= 1", self.a)));
        }
        Ok(())
    }

    pub fn line_bundle(&self) -> LineBundleClass {
        LineBundleClass::new(self.a, self.b)
    }

    /// `pi_* L = S^a(E) ⊗ B`.
    pub fn pushforward(&self) -> FormalBundle {
        pushforward(&self.bundle, self.line_bundle(), u64::from(self.n))
            .expect("validated spec has a pushforward")
    }

    /// `nu = mu_minus(pi_* L) = a mu_minus(E) + deg B`.
    pub fn nu(&self) -> Rational {
        int(self.a) * self.bundle.mu_minus() + int(self.b)
    }
}

/// A certified syzygy level: nothing, `N_p` for a finite `p`, or all `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PLevel {
    None,
    Finite(u32),
    Infinite,
}

impl PLevel {
    pub fn from_option(p: Option<u32>) -> Self {
        p.map_or(PLevel::None, PLevel::Finite)
    }

    pub fn is_some(&self) -> bool {
        !matches!(self, PLevel::None)
    }

    /// Whether `N_p` is covered by this level.
    pub fn covers(&self, p: u32) -> bool {
        match self {
            PLevel::None => false,
            PLevel::Finite(k) => p <= *k,
            PLevel::Infinite => true,
        }
    }
}

impl fmt::Display for PLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PLevel::None => write!(f, "none"),
            PLevel::Finite(p) => write!(f, "{p}"),
            PLevel::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for PLevel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PLevel::None => s.serialize_none(),
            PLevel::Finite(p) => s.serialize_u32(*p),
            PLevel::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for PLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct LevelVisitor;

        impl<'de> Visitor<'de> for LevelVisitor {
            type Value = PLevel;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer, \"infinite\", or null")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<PLevel, E> {
                u32::try_from(v).map(PLevel::Finite).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<PLevel, E> {
                u32::try_from(v).map(PLevel::Finite).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<PLevel, E> {
                match v {
                    "infinite" => Ok(PLevel::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }

            fn visit_none<E: de::Error>(self) -> Result<PLevel, E> {
                Ok(PLevel::None)
            }

            fn visit_unit<E: de::Error>(self) -> Result<PLevel, E> {
                Ok(PLevel::None)
            }
        }

        d.deserialize_any(LevelVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Gt,
    Ge,
    Eq,
    Le,
}

impl Relation {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        let ord = lhs.cmp(rhs);
        match self {
            Relation::Gt => ord == Ordering::Greater,
            Relation::Ge => ord != Ordering::Less,
            Relation::Eq => ord == Ordering::Equal,
            Relation::Le => ord != Ordering::Greater,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Le => "<=",
        }
    }
}

/// One inequality checked by a rule, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub text: String,
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    pub passed: bool,
}

impl Hypothesis {
    pub fn check(label: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let passed = relation.holds(&lhs, &rhs);
        let text = format!(
            "{label}: {} {} {}",
            display_rational(&lhs),
            relation.symbol(),
            display_rational(&rhs)
        );
        Hypothesis { text, lhs, rhs, passed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub p_certified: PLevel,
    pub p_known_fail: Option<u32>,
    pub summary: String,
}

impl Conclusion {
    pub fn certifies(p: PLevel, summary: impl Into<String>) -> Self {
        Conclusion { p_certified: p, p_known_fail: None, summary: summary.into() }
    }

    pub fn fails_at(p: u32, summary: impl Into<String>) -> Self {
        Conclusion { p_certified: PLevel::None, p_known_fail: Some(p), summary: summary.into() }
    }

    pub fn nothing(summary: impl Into<String>) -> Self {
        Conclusion { p_certified: PLevel::None, p_known_fail: None, summary: summary.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTrace {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
}

impl RuleTrace {
    /// Builds a trace; `conclude` runs only when every hypothesis passed.
    pub fn gated(
        name: &str,
        hypotheses: Vec<Hypothesis>,
        conclude: impl FnOnce() -> Conclusion,
    ) -> Self {
        let conclusion = if hypotheses.iter().all(|h| h.passed) {
            conclude()
        } else {
            Conclusion::nothing("inapplicable: hypothesis failed")
        };
        RuleTrace { name: name.to_string(), hypotheses, conclusion }
    }

    pub fn applicable(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub input: EmbeddingSpec,
    pub very_ample: TriState,
    pub p_certified: PLevel,
    pub p_known_fail: Option<u32>,
    pub rules: Vec<RuleTrace>,
}

impl Certificate {
    fn check_invariants(&self) -> Result<(), CertifyError> {
        match (self.p_certified, self.p_known_fail) {
            (PLevel::Finite(c), Some(f)) if c >= f => Err(CertifyError::InvariantBreach(format!(
                "certified N_{c} but N_{f} is known to fail"
            ))),
            (PLevel::Infinite, Some(f)) => Err(CertifyError::InvariantBreach(format!(
                "all p certified but N_{f} is known to fail"
            ))),
            _ => Ok(()),
        }
    }

    /// Smallest `p` that is neither certified nor known to fail, if any gap exists.
    pub fn open_gap(&self) -> Option<(u32, Option<u32>)> {
        let start = match self.p_certified {
            PLevel::None => 0,
            PLevel::Finite(p) => p + 1,
            PLevel::Infinite => return None,
        };
        match self.p_known_fail {
            Some(f) if f <= start => None,
            Some(f) => Some((start, Some(f - 1))),
            None => Some((start, None)),
        }
    }
}

/// Very ampleness: certified once `nu > 2g`; known false when `L` is not even ample.
pub fn very_ampleness(spec: &EmbeddingSpec) -> TriState {
    if spec.nu() > int(2 * i64::from(spec.genus)) {
        return TriState::Certified;
    }
    match miyaoka_ample(&spec.bundle, spec.line_bundle()) {
        TriState::KnownFalse => TriState::KnownFalse,
        _ => TriState::NotCertified,
    }
}

/// Runs every rule and merges: maximum certified `p`, minimum failing `p`.
pub fn best_certificate(spec: &EmbeddingSpec) -> Result<Certificate, CertifyError> {
    spec.validate()?;
    let mut rules = vec![
        certify_scroll(spec),
        certify_ruled_surface(spec),
        certify_veronese_fibration(spec),
        certify_general(spec),
        certify_butler(spec),
        failure_bound(spec),
        certify_fiber_knowledge(spec),
    ];
    if spec.surface_e.is_some() {
        rules.push(certify_rational_ruled_surface(spec));
    }

    let contributing = || rules.iter().filter(|r| r.applicable());
    let p_certified = contributing()
        .map(|r| r.conclusion.p_certified)
        .max()
        .unwrap_or(PLevel::None);
    let p_known_fail = contributing().filter_map(|r| r.conclusion.p_known_fail).min();

    let certificate = Certificate {
        input: spec.clone(),
        very_ample: very_ampleness(spec),
        p_certified,
        p_known_fail,
        rules,
    };
    certificate.check_invariants()?;
    Ok(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn spec(g: u32, n: u32, a: i64, b: i64, bundle: FormalBundle) -> EmbeddingSpec {
        EmbeddingSpec::new(g, n, a, b, bundle).unwrap()
    }

    #[test]
    fn plevel_json_forms() {
        assert_eq!(serde_json::to_string(&PLevel::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&PLevel::Infinite).unwrap(), "\"infinite\"");
        assert_eq!(serde_json::to_string(&PLevel::None).unwrap(), "null");
        for level in [PLevel::None, PLevel::Finite(0), PLevel::Finite(7), PLevel::Infinite] {
            let text = serde_json::to_string(&level).unwrap();
            assert_eq!(serde_json::from_str::<PLevel>(&text).unwrap(), level);
        }
        assert!(PLevel::None < PLevel::Finite(0));
        assert!(PLevel::Finite(100) < PLevel::Infinite);
    }

    #[test]
    fn spec_validation() {
        let e = FormalBundle::semistable(2, 0).unwrap();
        assert!(EmbeddingSpec::new(1, 2, 1, 0, e.clone()).is_err());
        assert!(EmbeddingSpec::new(1, 1, 0, 0, e.clone()).is_err());
        assert!(EmbeddingSpec::new(1, 0, 1, 0, FormalBundle::line(0)).is_err());
        assert!(EmbeddingSpec::new(1, 1, 1, 0, e).is_ok());
    }

    #[test]
    fn genus_zero_scroll_is_infinite() {
        let c = best_certificate(&spec(0, 4, 1, 1, FormalBundle::semistable(5, 0).unwrap())).unwrap();
        assert_eq!(c.p_certified, PLevel::Infinite);
        assert_eq!(c.p_known_fail, None);
        assert_eq!(c.very_ample, TriState::Certified);
        assert_eq!(c.open_gap(), None);
    }

    #[test]
    fn genus_one_fourfold_mixed_rules() {
        let e = FormalBundle::semistable(4, 1).unwrap();
        let c = best_certificate(&spec(1, 3, 2, 10, e)).unwrap();
        assert_eq!(c.input.nu(), ratio(21, 2));
        assert_eq!(c.p_certified, PLevel::Finite(1));
        assert_eq!(c.p_known_fail, Some(6));
        assert_eq!(c.open_gap(), Some((2, Some(5))));
        // inapplicable rules stay in the trace
        assert!(c.rules.iter().any(|r| !r.applicable()));
    }

    #[test]
    fn genus_two_normal_generation_threshold() {
        let c = best_certificate(&spec(2, 1, 1, 5, FormalBundle::semistable(2, 0).unwrap())).unwrap();
        assert_eq!(c.p_certified, PLevel::Finite(0));
        let contributing: Vec<_> = c
            .rules
            .iter()
            .filter(|r| r.applicable() && r.conclusion.p_certified == PLevel::Finite(0))
            .map(|r| r.name.as_str())
            .collect();
        assert!(contributing.contains(&"scroll-quadratic"));
        assert!(contributing.contains(&"butler"));
    }

    #[test]
    fn not_ample_is_known_false() {
        let e = FormalBundle::semistable(2, -2).unwrap();
        let c = best_certificate(&spec(1, 1, 2, 2, e)).unwrap();
        assert_eq!(c.very_ample, TriState::KnownFalse);
        assert_eq!(c.p_certified, PLevel::None);
    }

    #[test]
    fn invariant_breach_detected() {
        let e = FormalBundle::semistable(2, 0).unwrap();
        let mut c = best_certificate(&spec(1, 1, 1, 10, e)).unwrap();
        c.p_known_fail = Some(0);
        assert!(matches!(c.check_invariants(), Err(CertifyError::InvariantBreach(_))));
        c.p_certified = PLevel::Infinite;
        assert!(c.check_invariants().is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let e = FormalBundle::semistable(4, 1).unwrap();
        let c = best_certificate(&spec(1, 3, 2, 10, e)).unwrap();
        let text = serde_json::to_string_pretty(&c).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["p_certified"], 1);
        assert_eq!(value["p_known_fail"], 6);
        assert_eq!(value["very_ample"], "certified");
        assert_eq!(value["input"]["bundle"]["mu_minus"], "1/4");
    }
}
