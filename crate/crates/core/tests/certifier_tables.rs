use syzcert::certifier::{
    best_certificate, optimality_witness, rational_ruled_surface_status, veronese_status, Certificate, CertifyError,
    EmbeddingSpec, PLevel, Status,
};
use syzcert::rational::ratio;
use syzcert::slope::{FormalBundle, TriState};

fn cert(g: u32, n: u32, a: i64, b: i64, e: FormalBundle) -> Certificate {
    best_certificate(&EmbeddingSpec::new(g, n, a, b, e).unwrap()).unwrap()
}

fn rule<'a>(c: &'a Certificate, name: &str) -> &'a syzcert::certifier::RuleTrace {
    c.rules.iter().find(|r| r.name == name).unwrap_or_else(|| panic!("no rule {name}"))
}

/// Decomposable rank `n + 1` bundle whose smallest summand has degree `low`.
fn split_with_min(n: u32, low: i64) -> FormalBundle {
    let degrees: Vec<i64> = (0..=i64::from(n)).map(|k| low + k).collect();
    FormalBundle::decomposable(&degrees).unwrap()
}

#[test]
fn genus_two_scrolls_are_sharp() {
    for n in 1..=3 {
        for low in -3..=3 {
            for b in -2..=16 {
                let c = cert(2, n, 1, b, split_with_min(n, low));
                for p in 0..=8u32 {
                    assert_eq!(c.p_certified.covers(p), b + low >= 5 + i64::from(p), "n={n} a_n={low} b={b} p={p}");
                }
            }
        }
    }
}

#[test]
fn elliptic_scrolls_are_sharp() {
    for n in 1..=3 {
        for low in -2..=2 {
            for b in 0..=14 {
                let c = cert(1, n, 1, b, split_with_min(n, low));
                assert_eq!(c.very_ample == TriState::Certified, b + low >= 3);
                for p in 0..=8u32 {
                    assert_eq!(c.p_certified.covers(p), b + low > 2 + i64::from(p));
                }
            }
        }
    }
}

#[test]
fn elliptic_normal_generation_boundary() {
    let c = cert(1, 1, 1, 3, FormalBundle::decomposable(&[0, 0]).unwrap());
    assert_eq!(c.p_certified, PLevel::Finite(0));
}

#[test]
fn rational_scroll_is_unbounded() {
    let c = cert(0, 2, 1, 1, FormalBundle::decomposable(&[0, 0, 0]).unwrap());
    assert_eq!(c.p_certified, PLevel::Infinite);
    assert_eq!(c.p_known_fail, None);
    assert_eq!(c.open_gap(), None);
    assert!(rule(&c, "rational-normal-scroll").applicable());
}

#[test]
fn mixed_rules_on_elliptic_threefold() {
    let e = FormalBundle::semistable(4, 1).unwrap();
    let c = cert(1, 3, 2, 10, e);
    assert_eq!(c.p_certified, PLevel::Finite(1));
    assert_eq!(c.p_known_fail, Some(6));
    assert_eq!(c.open_gap(), Some((2, Some(5))));
    assert_eq!(rule(&c, "general-capped").conclusion.p_certified, PLevel::Finite(1));
    assert_eq!(rule(&c, "butler").conclusion.p_certified, PLevel::Finite(1));
    assert_eq!(rule(&c, "multisecant-failure").conclusion.p_known_fail, Some(6));
    assert!(!rule(&c, "scroll-quadratic").applicable());
}

#[test]
fn genus_two_normal_generation_from_two_rules() {
    let c = cert(2, 1, 1, 5, FormalBundle::decomposable(&[0, 0]).unwrap());
    assert_eq!(c.p_certified, PLevel::Finite(0));
    assert_eq!(rule(&c, "scroll-quadratic").conclusion.p_certified, PLevel::Finite(0));
    assert_eq!(rule(&c, "butler").conclusion.p_certified, PLevel::Finite(0));
}

#[test]
fn inapplicable_rules_conclude_nothing() {
    let c = cert(3, 2, 3, 1, FormalBundle::semistable(3, 2).unwrap());
    for r in &c.rules {
        if !r.applicable() {
            assert_eq!(r.conclusion.p_certified, PLevel::None, "{}", r.name);
            assert_eq!(r.conclusion.p_known_fail, None, "{}", r.name);
        }
    }
    let failed: Vec<_> = c.rules.iter().flat_map(|r| &r.hypotheses).filter(|h| !h.passed).collect();
    assert!(!failed.is_empty());
}

#[test]
fn ruled_surfaces_over_p1_match_classification() {
    for e in 0..=4i64 {
        for a in 1..=6i64 {
            for b in (a * e + 1)..=(a * e + 10) {
                let bundle = FormalBundle::decomposable(&[0, -e]).unwrap();
                let spec = EmbeddingSpec::new(0, 1, a, b, bundle).unwrap().with_surface_e(e);
                let c = best_certificate(&spec).unwrap();
                for p in 0..=40u32 {
                    match rational_ruled_surface_status(e, a, b, p).unwrap() {
                        Status::Holds => assert!(c.p_certified.covers(p), "e={e} a={a} b={b} p={p}"),
                        Status::Fails => {
                            assert!(!c.p_certified.covers(p));
                            assert!(c.p_known_fail.is_some_and(|f| f <= p));
                        }
                        Status::Open => panic!("classification is complete"),
                    }
                }
            }
        }
    }
}

#[test]
fn ruled_surface_table() {
    assert_eq!(rational_ruled_surface_status(0, 2, 2, 5).unwrap(), Status::Holds);
    assert_eq!(rational_ruled_surface_status(1, 2, 3, 8).unwrap(), Status::Fails);
    assert_eq!(rational_ruled_surface_status(0, 5, 1, 1000).unwrap(), Status::Holds);
}

#[test]
fn veronese_table() {
    let cases = [
        (3, 2, 5, Status::Holds),
        (3, 2, 6, Status::Fails),
        (2, 4, 9, Status::Holds),
        (2, 4, 10, Status::Fails),
        (4, 4, 7, Status::Open),
        (1, 7, 500, Status::Holds),
        (2, 2, 500, Status::Holds),
        (2, 3, 6, Status::Holds),
        (2, 3, 7, Status::Fails),
        (3, 3, 6, Status::Holds),
    ];
    for (n, d, p, expected) in cases {
        assert_eq!(veronese_status(n, d, p).unwrap(), expected, "n={n} d={d} p={p}");
    }
}

#[test]
fn hyperelliptic_witness_chain() {
    let w = optimality_witness(2, 2, 0).unwrap();
    assert_eq!(w.restricted_degree, 5);
    assert_eq!(w.fails, 1);
    assert!(!w.certifier_p_certified.covers(1));

    let w = optimality_witness(3, 2, 2).unwrap();
    assert_eq!(w.restricted_degree, 7);
    assert_eq!(w.fails, 3);
    assert_eq!(w.chain.len(), 2);

    let w = optimality_witness(2, 3, 1).unwrap();
    assert_eq!(w.chain[0].bundle.mu_minus().clone(), ratio(1, 2));
    assert_eq!(w.chain[0].tautological_ample, TriState::Certified);

    assert!(matches!(optimality_witness(2, 1, 0), Err(CertifyError::NoHyperellipticWitness(1))));
}

#[test]
fn certificate_json_round_trip() {
    let e = FormalBundle::new(3, 1, ratio(-1, 2), ratio(5, 3)).unwrap();
    let c = cert(2, 2, 2, 9, e);
    let text = serde_json::to_string(&c).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(c, back);

    let levels = [PLevel::None, PLevel::Finite(4), PLevel::Infinite];
    let json: Vec<String> = levels.iter().map(|l| serde_json::to_string(l).unwrap()).collect();
    assert_eq!(json, ["null", "4", "\"infinite\""]);
    for (l, j) in levels.iter().zip(&json) {
        assert_eq!(&serde_json::from_str::<PLevel>(j).unwrap(), l);
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(EmbeddingSpec::new(1, 2, 1, 0, FormalBundle::semistable(2, 0).unwrap()).is_err());
    assert!(EmbeddingSpec::new(1, 1, 0, 4, FormalBundle::semistable(2, 0).unwrap()).is_err());
    assert!(EmbeddingSpec::new(1, 0, 1, 4, FormalBundle::line(0)).is_err());
}
