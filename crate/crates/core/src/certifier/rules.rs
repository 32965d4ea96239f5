//! The effective `N_p` criteria, each as a hypothesis-gated rule.

use super::knowledge::{rational_ruled_surface_status, veronese_boundary};
use super::{CertifyError, Conclusion, EmbeddingSpec, Hypothesis, PLevel, Relation, RuleTrace, Status};
use crate::rational::{ceil_i64, floor_i64, int, Rational};

fn two_g(spec: &EmbeddingSpec) -> Rational {
    int(2 * i64::from(spec.genus))
}

fn very_ample_gate(spec: &EmbeddingSpec) -> Hypothesis {
    Hypothesis::check("mu_minus(pi_* L) > 2g", spec.nu(), Relation::Gt, two_g(spec))
}

/// Largest `p >= 0` with `nu^2 - (3g - 1 + p) nu + 2g^2 - 2g > 0`.
///
/// Requires `nu > 2g`; `None` when even `p = 0` fails.
pub fn quadratic_p_max(nu: &Rational, genus: u32) -> Result<Option<u32>, CertifyError> {
    let g = i64::from(genus);
    if *nu <= int(2 * g) {
        return Err(CertifyError::Hypothesis(format!(
            "nu = {nu} must exceed 2g = {}",
            2 * g
        )));
    }
    // nu > 0 here, so the quadratic is equivalent to p < nu - (3g-1) + (2g^2-2g)/nu.
    let bound = nu - int(3 * g - 1) + int(2 * g * g - 2 * g) / nu;
    let p = ceil_i64(&bound).ok_or(CertifyError::InvalidRange("nu too large".into()))? - 1;
    if p < 0 {
        return Ok(None);
    }
    u32::try_from(p)
        .map(Some)
        .map_err(|_| CertifyError::InvalidRange(format!("p = {p} exceeds u32")))
}

/// Smallest integer `nu > 2g` at which the quadratic certifies `N_p`.
pub fn quadratic_threshold(genus: u32, p: u32) -> i64 {
    let mut nu = 2 * i64::from(genus) + 1;
    loop {
        if let Ok(Some(q)) = quadratic_p_max(&int(nu), genus) {
            if q >= p {
                return nu;
            }
        }
        nu += 1;
    }
}

fn quadratic_conclusion(nu: &Rational, genus: u32, cap: Option<u32>) -> Conclusion {
    match quadratic_p_max(nu, genus) {
        Ok(Some(p)) => {
            let p = cap.map_or(p, |c| p.min(c));
            Conclusion::certifies(PLevel::Finite(p), format!("N_p for p <= {p}"))
        }
        Ok(None) => Conclusion::nothing("quadratic inequality fails already at p = 0"),
        Err(e) => Conclusion::nothing(e.to_string()),
    }
}

/// Scrolls `L = H + pi^* B`; genus 0 gives rational normal scrolls (all `p`).
pub fn certify_scroll(spec: &EmbeddingSpec) -> RuleTrace {
    let a_is_one = Hypothesis::check("a = 1", int(spec.a), Relation::Eq, int(1));
    if spec.genus == 0 {
        let positive = Hypothesis::check("mu_minus(E) + deg B > 0", spec.nu(), Relation::Gt, int(0));
        return RuleTrace::gated("rational-normal-scroll", vec![a_is_one, positive], || {
            Conclusion::certifies(PLevel::Infinite, "rational normal scroll: N_p for all p")
        });
    }
    let nu = spec.nu();
    RuleTrace::gated("scroll-quadratic", vec![a_is_one, very_ample_gate(spec)], || {
        quadratic_conclusion(&nu, spec.genus, None)
    })
}

/// Ruled surfaces: the quadratic with `nu = a mu_minus(E) + b`, no cap from `a`.
pub fn certify_ruled_surface(spec: &EmbeddingSpec) -> RuleTrace {
    let nu = spec.nu();
    let hyps = vec![
        Hypothesis::check("n = 1", int(i64::from(spec.n)), Relation::Eq, int(1)),
        very_ample_gate(spec),
    ];
    RuleTrace::gated("ruled-surface-quadratic", hyps, || quadratic_conclusion(&nu, spec.genus, None))
}

/// Veronese fibrations `n = 2, a = 2`, gated by `7 mu(pi_* L) >= mu_plus(pi_* L)`.
pub fn certify_veronese_fibration(spec: &EmbeddingSpec) -> RuleTrace {
    let nu = spec.nu();
    let mut hyps = vec![
        Hypothesis::check("n = 2", int(i64::from(spec.n)), Relation::Eq, int(2)),
        Hypothesis::check("a = 2", int(spec.a), Relation::Eq, int(2)),
        very_ample_gate(spec),
    ];
    if hyps.iter().all(|h| h.passed) {
        let f = spec.pushforward();
        let label = if spec.bundle.is_semistable() {
            "7 mu(pi_* L) >= mu_plus(pi_* L) (automatic, E semistable)"
        } else {
            "7 mu(pi_* L) >= mu_plus(pi_* L)"
        };
        hyps.push(Hypothesis::check(label, int(7) * f.slope(), Relation::Ge, f.mu_plus().clone()));
    }
    RuleTrace::gated("veronese-fibration", hyps, || quadratic_conclusion(&nu, spec.genus, None))
}

/// Arbitrary `(n, a)`: the quadratic capped at `p <= a - 1`.
pub fn certify_general(spec: &EmbeddingSpec) -> RuleTrace {
    let nu = spec.nu();
    let cap = u32::try_from(spec.a - 1).unwrap_or(u32::MAX);
    RuleTrace::gated("general-capped", vec![very_ample_gate(spec)], || {
        quadratic_conclusion(&nu, spec.genus, Some(cap))
    })
}

/// Butler-type bounds: normal generation from `nu >= 2g + 1`, and
/// `N_p` for `1 <= p <= a - 1` from `nu >= 2g + 2p`.
pub fn certify_butler(spec: &EmbeddingSpec) -> RuleTrace {
    let nu = spec.nu();
    let g2 = two_g(spec);
    let hyps = vec![Hypothesis::check("mu_minus(pi_* L) >= 2g + 1", nu.clone(), Relation::Ge, &g2 + int(1))];
    RuleTrace::gated("butler", hyps, || {
        let half = floor_i64(&((&nu - &g2) / int(2))).unwrap_or(i64::MAX);
        let p = half.min(spec.a - 1);
        if p >= 1 {
            let p = u32::try_from(p).unwrap_or(u32::MAX);
            Conclusion::certifies(PLevel::Finite(p), format!("N_p for p <= {p} (nu >= 2g + 2p, p <= a - 1)"))
        } else {
            Conclusion::certifies(PLevel::Finite(0), "normally generated")
        }
    })
}

/// Failure through multisecant planes of the fiber Veronese.
pub fn failure_bound(spec: &EmbeddingSpec) -> RuleTrace {
    let n = int(i64::from(spec.n));
    let gate = || {
        let mut h = very_ample_gate(spec);
        h.text.push_str(" (sufficient-condition gate)");
        h
    };
    if spec.a == 2 {
        let hyps = vec![Hypothesis::check("n >= 3", n, Relation::Ge, int(3)), gate()];
        return RuleTrace::gated("multisecant-failure", hyps, || {
            Conclusion::fails_at(6, "N_6 fails (quadric fiber Veronese, n >= 3)")
        });
    }
    let hyps = vec![
        Hypothesis::check("a >= 3", int(spec.a), Relation::Ge, int(3)),
        Hypothesis::check("n >= 2", n, Relation::Ge, int(2)),
        gate(),
    ];
    RuleTrace::gated("multisecant-failure", hyps, || {
        let p = u32::try_from(3 * spec.a - 2).unwrap_or(u32::MAX);
        Conclusion::fails_at(p, format!("N_{p} fails (3a - 2)"))
    })
}

/// Records the fiber Veronese `(P^n, O(a))` status; contributes no bound.
pub fn certify_fiber_knowledge(spec: &EmbeddingSpec) -> RuleTrace {
    let summary = match veronese_boundary(spec.n, u32::try_from(spec.a).unwrap_or(u32::MAX)) {
        Ok(b) => {
            let holds = match b.holds_through {
                PLevel::Infinite => "all p".to_string(),
                PLevel::Finite(p) => format!("p <= {p}"),
                PLevel::None => "no p".to_string(),
            };
            match b.fails_from {
                Some(f) => format!("fiber (P^{}, O({})): N_p holds for {holds}, fails from {f}", spec.n, spec.a),
                None => format!("fiber (P^{}, O({})): N_p holds for {holds}", spec.n, spec.a),
            }
        }
        Err(e) => e.to_string(),
    };
    RuleTrace {
        name: "fiber-veronese".into(),
        hypotheses: Vec::new(),
        conclusion: Conclusion::nothing(format!("informational: {summary}")),
    }
}

/// Decomposable rank-2 bundles `O + O(-e)` on `P^1`: an exact classification.
pub fn certify_rational_ruled_surface(spec: &EmbeddingSpec) -> RuleTrace {
    let e = spec.surface_e.unwrap_or(0);
    let mut hyps = vec![
        Hypothesis::check("g = 0", int(i64::from(spec.genus)), Relation::Eq, int(0)),
        Hypothesis::check("n = 1", int(i64::from(spec.n)), Relation::Eq, int(1)),
        Hypothesis::check("e >= 0", int(e), Relation::Ge, int(0)),
        Hypothesis::check(
            "deg E = -e",
            Rational::from_integer(spec.bundle.degree().clone()),
            Relation::Eq,
            int(-e),
        ),
        Hypothesis::check("mu_minus(E) = -e", spec.bundle.mu_minus().clone(), Relation::Eq, int(-e)),
        Hypothesis::check("b - a e >= 1", int(spec.b - spec.a * e), Relation::Ge, int(1)),
    ];
    if spec.surface_e.is_none() {
        hyps.push(Hypothesis::check("e supplied", int(0), Relation::Eq, int(1)));
    }
    RuleTrace::gated("rational-ruled-surface", hyps, || {
        let threshold = 2 * spec.a + 2 * spec.b - spec.a * e - 3;
        let always = rational_ruled_surface_status(e, spec.a, spec.b, u32::MAX)
            .map(|s| s == Status::Holds)
            .unwrap_or(false);
        if always {
            return Conclusion::certifies(PLevel::Infinite, "N_p for all p (exact classification)");
        }
        Conclusion {
            p_certified: PLevel::from_option(u32::try_from(threshold).ok()),
            p_known_fail: Some(u32::try_from(threshold + 1).unwrap_or(0)),
            summary: format!("N_p iff 2a + 2b - ae >= 3 + p, i.e. p <= {threshold}"),
        }
    })
}
