//! Numeric chain behind the sharpness example on hyperelliptic curves:
//! `K_X + (n + 2 + p)H` on `P_C(E_n)` fails `N_{p+1}`.

use serde::{Deserialize, Serialize};

use super::{best_certificate, CertifyError, EmbeddingSpec, PLevel};
use crate::rational::{serde_rational, Rational};
use crate::slope::{extension, miyaoka_ample, FormalBundle, LineBundleClass, TriState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub rank: u64,
    pub bundle: FormalBundle,
    pub tautological_ample: TriState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: u32,
    pub genus: u32,
    pub p: u32,
    pub chain: Vec<ChainLink>,
    /// `L = K_X + (n + 2 + p)H = aH + pi^* B` on `P_C(E_n)`.
    pub line_bundle: String,
    pub a: i64,
    pub b: i64,
    /// Degree of `L` on the minimal section of `P_C(E_2)`.
    pub restricted_degree: i64,
    #[serde(with = "serde_rational")]
    pub mu_minus_pushforward: Rational,
    pub predicted_holds: u32,
    pub fails: u32,
    pub certifier_p_certified: PLevel,
    pub certifier_p_known_fail: Option<u32>,
}

pub fn optimality_witness(n: u32, genus: u32, p: u32) -> Result<WitnessReport, CertifyError> {
    if genus < 2 {
        return Err(CertifyError::NoHyperellipticWitness(genus));
    }
    if n < 2 {
        return Err(CertifyError::InvalidRange(format!("n = {n} must be >= 2")));
    }
    let g = i64::from(genus);
    let a = 2 + i64::from(p);
    // K_X = -nH + pi^*(K_C + det E_n), deg det E_n = 1
    let b = 2 * g - 1;

    let mut chain = Vec::new();
    let mut current = FormalBundle::semistable(2, 1)?;
    for rank in 2..=u64::from(n) {
        if rank > 2 {
            // 0 -> O -> E_rank -> E_{rank-1} -> 0, nonsplit, hence semistable
            let ext = extension(&FormalBundle::line(0), &current)?;
            current = FormalBundle::semistable(rank, 1)?;
            debug_assert_eq!(ext.degree(), current.degree());
            debug_assert!(ext.mu_minus() <= current.mu_minus());
        }
        let ample = miyaoka_ample(&current, LineBundleClass::new(1, 0));
        if ample != TriState::Certified || *current.mu_minus() != Rational::new(1.into(), rank.into()) {
            return Err(CertifyError::InvariantBreach(format!("E_{rank} is not ample with slope 1/{rank}")));
        }
        chain.push(ChainLink { rank, bundle: current.clone(), tautological_ample: ample });
    }

    // The minimal section of P(E_2) is cut out by its degree-one quotient.
    let section_quotient_degree = 1;
    let restricted_degree = a * section_quotient_degree + b;
    if restricted_degree != 2 * g + 1 + i64::from(p) {
        return Err(CertifyError::InvariantBreach(format!(
            "restricted degree {restricted_degree} != 2g + 1 + p"
        )));
    }

    let spec = EmbeddingSpec::new(genus, n - 1, a, b, current)?;
    let certificate = best_certificate(&spec)?;
    if certificate.p_certified.covers(p + 1) {
        return Err(CertifyError::InvariantBreach(format!(
            "certifier claims N_{} which the construction refutes",
            p + 1
        )));
    }
    if let Some(f) = certificate.p_known_fail {
        if f <= p && certificate.p_certified.covers(f) {
            return Err(CertifyError::InvariantBreach("certificate contradicts itself".into()));
        }
    }

    Ok(WitnessReport {
        n,
        genus,
        p,
        chain,
        line_bundle: format!("K_X + {}H", i64::from(n) + a),
        a,
        b,
        restricted_degree,
        mu_minus_pushforward: spec.nu(),
        predicted_holds: p,
        fails: p + 1,
        certifier_p_certified: certificate.p_certified,
        certifier_p_known_fail: certificate.p_known_fail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn genus_two_plane() {
        let w = optimality_witness(2, 2, 0).unwrap();
        assert_eq!(w.restricted_degree, 5);
        assert_eq!(w.fails, 1);
        assert_eq!(w.chain.len(), 1);
        assert_eq!(w.line_bundle, "K_X + 4H");
    }

    #[test]
    fn chain_slopes() {
        let w = optimality_witness(3, 2, 2).unwrap();
        assert_eq!(w.restricted_degree, 7);
        assert_eq!(w.fails, 3);
        let slopes: Vec<_> = w.chain.iter().map(|l| l.bundle.mu_minus().clone()).collect();
        assert_eq!(slopes, vec![ratio(1, 2), ratio(1, 3)]);
        let w = optimality_witness(2, 3, 1).unwrap();
        assert_eq!(w.chain[0].tautological_ample, TriState::Certified);
        assert_eq!(w.mu_minus_pushforward, int(3) * ratio(1, 2) + int(5));
    }

    #[test]
    fn rejects_low_genus() {
        assert_eq!(optimality_witness(2, 1, 0), Err(CertifyError::NoHyperellipticWitness(1)));
        assert!(optimality_witness(1, 2, 0).is_err());
    }

    #[test]
    fn certifier_stays_below_failure() {
        for n in 2..6 {
            for g in 2..6 {
                for p in 0..12 {
                    let w = optimality_witness(n, g, p).unwrap();
                    assert!(!w.certifier_p_certified.covers(p + 1));
                }
            }
        }
    }
}
