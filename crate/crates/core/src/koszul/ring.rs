//! Graded monomial rings generated in degree one.

use std::collections::HashMap;

use super::KoszulError;
use crate::combinatorics::monomials;

/// `R = ⊕ R_q` with monomial bases, `V = R_1`, and the multiplication table
/// `V ⊗ R_q -> R_{q+1}` obtained by adding exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRingPresentation {
    label: String,
    width: usize,
    pieces: Vec<Vec<Vec<u32>>>,
    mult: Vec<Vec<u32>>,
}

impl GradedRingPresentation {
    /// Builds a presentation from monomial bases `pieces[q]` of `R_q`.
    ///
    /// `R_0` is inserted when `pieces[0]` is empty. Every product of a
    /// degree-one monomial with a basis monomial of `R_q` must lie in
    /// `R_{q+1}`, and every monomial of `R_{q+1}` must be such a product.
    pub fn from_monomials(label: &str, mut pieces: Vec<Vec<Vec<u32>>>) -> Result<Self, KoszulError> {
        let width = pieces
            .iter()
            .flatten()
            .map(Vec::len)
            .next()
            .ok_or_else(|| KoszulError::Presentation("no monomials given".into()))?;
        if pieces.iter().flatten().any(|m| m.len() != width) {
            return Err(KoszulError::Presentation("exponent vectors of different lengths".into()));
        }
        if pieces.len() < 2 {
            return Err(KoszulError::Presentation("need at least degrees 0 and 1".into()));
        }
        if pieces[0].is_empty() {
            pieces[0].push(vec![0; width]);
        }
        if pieces[0] != vec![vec![0; width]] {
            return Err(KoszulError::Presentation("R_0 must be spanned by the unit".into()));
        }
        if pieces[1].is_empty() {
            return Err(KoszulError::Presentation("R_1 is empty".into()));
        }

        let index: Vec<HashMap<&[u32], u32>> = pieces
            .iter()
            .enumerate()
            .map(|(q, basis)| {
                let map: HashMap<&[u32], u32> =
                    basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i as u32)).collect();
                if map.len() != basis.len() {
                    return Err(KoszulError::Presentation(format!("duplicate monomial in degree {q}")));
                }
                Ok(map)
            })
            .collect::<Result<_, _>>()?;

        let v = &pieces[1];
        let mut mult = Vec::with_capacity(pieces.len() - 1);
        for q in 0..pieces.len() - 1 {
            let rq = &pieces[q];
            let mut table = Vec::with_capacity(v.len() * rq.len());
            let mut hit = vec![false; pieces[q + 1].len()];
            let mut product = vec![0u32; width];
            for x in v {
                for m in rq {
                    for (k, slot) in product.iter_mut().enumerate() {
                        *slot = x[k] + m[k];
                    }
                    let target = *index[q + 1].get(product.as_slice()).ok_or_else(|| {
                        KoszulError::Presentation(format!(
                            "product {product:?} missing from degree {}",
                            q + 1
                        ))
                    })?;
                    hit[target as usize] = true;
                    table.push(target);
                }
            }
            if let Some(missed) = hit.iter().position(|h| !h) {
                return Err(KoszulError::NotGenerated {
                    degree: q + 1,
                    monomial: format!("{:?}", pieces[q + 1][missed]),
                });
            }
            mult.push(table);
        }
        Ok(GradedRingPresentation { label: label.to_string(), width, pieces, mult })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Length of the exponent vectors (the multigrading rank).
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn q_max(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn dim_v(&self) -> usize {
        self.pieces[1].len()
    }

    pub fn v_basis(&self) -> &[Vec<u32>] {
        &self.pieces[1]
    }

    pub fn dim(&self, q: usize) -> usize {
        self.pieces.get(q).map_or(0, Vec::len)
    }

    pub fn piece(&self, q: usize) -> &[Vec<u32>] {
        &self.pieces[q]
    }

    /// Index in `R_{q+1}` of `v_i * m_r` for `m_r` in `R_q`.
    pub fn mult(&self, v_index: usize, q: usize, r_index: usize) -> usize {
        self.mult[q][v_index * self.pieces[q].len() + r_index] as usize
    }

    /// The same ring with `V` listed in the order `perm` (new position `k`
    /// holds old element `perm[k]`).
    pub fn with_v_order(&self, perm: &[usize]) -> Result<Self, KoszulError> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dim_v()).collect::<Vec<_>>() {
            return Err(KoszulError::Presentation("not a permutation of V".into()));
        }
        let mut pieces = self.pieces.clone();
        pieces[1] = perm.iter().map(|&i| self.pieces[1][i].clone()).collect();
        Self::from_monomials(&self.label, pieces)
    }

    /// Plain-text form accepted by [`parse_ring`].
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.label);
        for (q, basis) in self.pieces.iter().enumerate() {
            out.push_str(&format!("#degree {q}\n"));
            for m in basis {
                let row: Vec<String> = m.iter().map(u32::to_string).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Coordinate ring of the degree-`d` Veronese embedding of `P^n`, through degree `q_max`.
pub fn veronese_ring(n: usize, d: u32, q_max: usize) -> Result<GradedRingPresentation, KoszulError> {
    if n < 1 || d < 1 || q_max < 2 {
        return Err(KoszulError::InvalidRange(format!(
            "veronese_ring needs n >= 1, d >= 1, q_max >= 2 (got {n}, {d}, {q_max})"
        )));
    }
    let pieces = (0..=q_max).map(|q| monomials(n + 1, d * q as u32)).collect();
    GradedRingPresentation::from_monomials(&format!("veronese:{n},{d}"), pieces)
}

/// Coordinate ring of the scroll `P(⊕ O(a_i))` over `P^1` under `O(1)`.
///
/// Basis of `R_q`: exponent vectors `[alpha_1, .., alpha_k, s]` with
/// `|alpha| = q` and `0 <= s <= sum alpha_i a_i`.
pub fn scroll_ring(degrees: &[u32], q_max: usize) -> Result<GradedRingPresentation, KoszulError> {
    if degrees.is_empty() || degrees.iter().all(|&a| a == 0) {
        return Err(KoszulError::InvalidRange("scroll needs some a_i >= 1".into()));
    }
    if q_max < 2 {
        return Err(KoszulError::InvalidRange("q_max must be >= 2".into()));
    }
    let k = degrees.len();
    let pieces = (0..=q_max)
        .map(|q| {
            let mut basis = Vec::new();
            for alpha in monomials(k, q as u32) {
                let top: u32 = alpha.iter().zip(degrees).map(|(x, a)| x * a).sum();
                for s in 0..=top {
                    let mut m = alpha.clone();
                    m.push(s);
                    basis.push(m);
                }
            }
            basis
        })
        .collect();
    let names: Vec<String> = degrees.iter().map(u32::to_string).collect();
    GradedRingPresentation::from_monomials(&format!("scroll:{}", names.join(",")), pieces)
}

/// Parses `#degree q` sections of exponent vectors (whitespace or comma
/// separated). Other `#` lines and blank lines are ignored.
pub fn parse_ring(label: &str, text: &str) -> Result<GradedRingPresentation, KoszulError> {
    let mut pieces: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| KoszulError::Parse { line: lineno + 1, message: msg };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#degree") {
            let q: usize = rest.trim().parse().map_err(|_| err(format!("bad degree header `{line}`")))?;
            if q == 1 && pieces.is_empty() {
                pieces.push(Vec::new());
            }
            if q != pieces.len() {
                return Err(err(format!("expected degree {} next, found {q}", pieces.len())));
            }
            pieces.push(Vec::new());
            current = Some(q);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let q = current.ok_or_else(|| err("monomial before any `#degree` header".into()))?;
        let m = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| err(format!("bad exponent `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        pieces[q].push(m);
    }
    if pieces.is_empty() {
        return Err(KoszulError::Parse { line: 0, message: "no `#degree` sections".into() });
    }
    GradedRingPresentation::from_monomials(label, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn veronese_dimensions() {
        let r = veronese_ring(1, 2, 2).unwrap();
        assert_eq!((r.dim_v(), r.dim(2)), (3, 5));
        let r = veronese_ring(2, 3, 2).unwrap();
        assert_eq!((r.dim_v(), r.dim(2)), (10, 28));
        let r = veronese_ring(3, 2, 2).unwrap();
        assert_eq!((r.dim_v(), r.dim(2)), (10, 35));
        assert_eq!(r.v_basis()[0], vec![2, 0, 0, 0]);
        assert!(veronese_ring(0, 2, 2).is_err());
        assert!(veronese_ring(1, 2, 1).is_err());
    }

    #[test]
    fn scroll_dimensions() {
        assert_eq!(scroll_ring(&[1, 2], 2).unwrap().dim_v(), 5);
        assert_eq!(scroll_ring(&[4], 2).unwrap().dim_v(), 5);
        assert_eq!(scroll_ring(&[1, 1], 2).unwrap().dim_v(), 4);
        // S(1,1) is P^1 x P^1: h0(O(2,2)) = 9
        assert_eq!(scroll_ring(&[1, 1], 2).unwrap().dim(2), 9);
        assert!(scroll_ring(&[0, 0], 2).is_err());
        assert!(scroll_ring(&[0, 2], 2).is_ok());
    }

    #[test]
    fn multiplication_table() {
        let r = veronese_ring(1, 2, 3).unwrap();
        // x0^2 * x0 x1 = x0^3 x1
        let v0 = 0;
        let m = r.piece(1).iter().position(|m| *m == vec![1, 1]).unwrap();
        let target = r.mult(v0, 1, m);
        assert_eq!(r.piece(2)[target], vec![3, 1]);
    }

    #[test]
    fn text_round_trip() {
        let r = scroll_ring(&[1, 2], 3).unwrap();
        let back = parse_ring(r.label(), &r.to_text()).unwrap();
        assert_eq!(back, r);
        let text = "#degree 1\n1,0\n0,1\n#degree 2\n2 0\n1 1\n0 2\n";
        let p = parse_ring("p1", text).unwrap();
        assert_eq!(p.dim(0), 1);
        assert_eq!(p.dim(2), 3);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(parse_ring("x", "1 0\n"), Err(KoszulError::Parse { line: 1, .. })));
        assert!(parse_ring("x", "#degree 1\n1 0\n0 1\n#degree 2\n2 0\n0 2\n").is_err());
        let not_generated = "#degree 1\n1 0\n#degree 2\n2 0\n1 1\n";
        assert!(matches!(parse_ring("x", not_generated), Err(KoszulError::NotGenerated { .. })));
        assert!(parse_ring("x", "#degree 0\n#degree 2\n").is_err());
        assert!(parse_ring("x", "#degree 1\n1 x\n").is_err());
    }

    #[test]
    fn reorder_v() {
        let r = veronese_ring(1, 3, 2).unwrap();
        let s = r.with_v_order(&[3, 1, 0, 2]).unwrap();
        assert_eq!(s.v_basis()[0], r.v_basis()[3]);
        assert!(r.with_v_order(&[0, 0, 1, 2]).is_err());
    }
}
