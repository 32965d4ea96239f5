//! Graded Betti numbers `k_{i,j}` as Koszul homology, with soundness flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{differential_rank, koszul_cell};
use super::field::Field;
use super::ring::GradedRingPresentation;
use super::KoszulError;

/// How far a reported `k_{i,j}` can be trusted over `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Soundness {
    /// Zero over some prime, hence zero over `Q`.
    CertifiedZero,
    /// Nonzero over every prime tried, exact value not proved.
    ProbableValue,
    Exact,
    /// Not computed: the cell exceeded the budget.
    Hole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulValue {
    pub value: u64,
    pub soundness: Soundness,
    /// `k` over each field, in the order the fields were given.
    pub per_field: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub j: usize,
    pub value: Option<u64>,
    pub soundness: Soundness,
    pub per_field: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiStrip {
    pub ring: String,
    pub p_max: usize,
    pub j_max: usize,
    pub fields: Vec<Field>,
    pub entries: Vec<BettiEntry>,
}

type RankKey = (i64, i64);
type RankTable = BTreeMap<RankKey, Result<Vec<u64>, KoszulError>>;

fn rank_table(
    pres: &GradedRingPresentation,
    keys: BTreeSet<RankKey>,
    fields: &[Field],
    budget: u128,
) -> RankTable {
    let keys: Vec<RankKey> = keys.into_iter().collect();
    let ranks: Vec<_> = keys
        .par_iter()
        .map(|&(p, q)| differential_rank(pres, p, q, fields, budget))
        .collect();
    keys.into_iter().zip(ranks).collect()
}

fn needed(cells: &[(usize, usize)]) -> BTreeSet<RankKey> {
    cells
        .iter()
        .flat_map(|&(i, j)| [(i as i64, j as i64), (i as i64 + 1, j as i64 - 1)])
        .collect()
}

fn classify(dim: u64, r_out: &[u64], r_in: &[u64], fields: &[Field]) -> Option<(u64, Soundness, Vec<u64>)> {
    let per_field: Vec<u64> = r_out.iter().zip(r_in).map(|(a, b)| dim - a - b).collect();
    if fields.iter().all(|f| *f == Field::Rationals) {
        return Some((per_field[0], Soundness::Exact, per_field));
    }
    let min = *per_field.iter().min().expect("at least one field");
    if min == 0 {
        return Some((0, Soundness::CertifiedZero, per_field));
    }
    if per_field.iter().all(|&v| v == min) {
        return Some((min, Soundness::ProbableValue, per_field));
    }
    None
}

fn evaluate(
    pres: &GradedRingPresentation,
    cells: &[(usize, usize)],
    fields: &[Field],
    budget: u128,
) -> Result<Vec<BettiEntry>, KoszulError> {
    let table = rank_table(pres, needed(cells), fields, budget);
    let mut entries = Vec::with_capacity(cells.len());
    for &(i, j) in cells {
        let out = &table[&(i as i64, j as i64)];
        let inn = &table[&(i as i64 + 1, j as i64 - 1)];
        let (r_out, r_in) = match (out, inn) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(KoszulError::CellTooLarge { .. }), _) | (_, Err(KoszulError::CellTooLarge { .. })) => {
                entries.push(BettiEntry { i, j, value: None, soundness: Soundness::Hole, per_field: Vec::new() });
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.clone()),
        };
        let dim = koszul_cell(pres, i, j).dims[1];
        let entry = match classify(dim, r_out, r_in, fields) {
            Some((value, soundness, per_field)) => BettiEntry { i, j, value: Some(value), soundness, per_field },
            None => {
                // primes disagree on a nonzero value: settle over Q
                let exact = koszul_dim(pres, i, j, &[Field::Rationals], budget)?;
                let mut per_field: Vec<u64> = r_out.iter().zip(r_in).map(|(a, b)| dim - a - b).collect();
                per_field.push(exact.value);
                BettiEntry { i, j, value: Some(exact.value), soundness: Soundness::Exact, per_field }
            }
        };
        entries.push(entry);
    }
    Ok(entries)
}

/// `k_{p,q} = dim(∧^p V ⊗ R_q) - rank δ_{p,q} - rank δ_{p+1,q-1}`.
pub fn koszul_dim(
    pres: &GradedRingPresentation,
    p: usize,
    q: usize,
    fields: &[Field],
    budget: u128,
) -> Result<KoszulValue, KoszulError> {
    if fields.is_empty() {
        return Err(KoszulError::BadField("no field given".into()));
    }
    if q + 1 > pres.q_max() {
        return Err(KoszulError::IndexOutOfRange(format!(
            "k_({p},{q}) needs R_{} but the ring stops at degree {}",
            q + 1,
            pres.q_max()
        )));
    }
    let r_out = differential_rank(pres, p as i64, q as i64, fields, budget)?;
    let r_in = differential_rank(pres, p as i64 + 1, q as i64 - 1, fields, budget)?;
    let dim = koszul_cell(pres, p, q).dims[1];
    match classify(dim, &r_out, &r_in, fields) {
        Some((value, soundness, per_field)) => Ok(KoszulValue { value, soundness, per_field }),
        None => {
            let exact = koszul_dim(pres, p, q, &[Field::Rationals], budget)?;
            let mut per_field: Vec<u64> = r_out.iter().zip(&r_in).map(|(a, b)| dim - a - b).collect();
            per_field.push(exact.value);
            Ok(KoszulValue { value: exact.value, soundness: Soundness::Exact, per_field })
        }
    }
}

/// `k_{i,j}` for `0 <= i <= p_max`, `0 <= j <= j_max`; over-budget cells become holes.
pub fn betti_strip(
    pres: &GradedRingPresentation,
    p_max: usize,
    j_max: usize,
    fields: &[Field],
    budget: u128,
) -> Result<BettiStrip, KoszulError> {
    if fields.is_empty() {
        return Err(KoszulError::BadField("no field given".into()));
    }
    if p_max + 1 > pres.dim_v() {
        return Err(KoszulError::InvalidRange(format!("p_max = {p_max} must be <= dim V - 1 = {}", pres.dim_v() - 1)));
    }
    if j_max < 2 {
        return Err(KoszulError::InvalidRange("j_max must be >= 2".into()));
    }
    if j_max + 1 > pres.q_max() {
        return Err(KoszulError::InvalidRange(format!(
            "j_max = {j_max} needs the ring through degree {}, have {}",
            j_max + 1,
            pres.q_max()
        )));
    }
    let cells: Vec<(usize, usize)> = (0..=p_max).flat_map(|i| (0..=j_max).map(move |j| (i, j))).collect();
    let entries = evaluate(pres, &cells, fields, budget)?;
    Ok(BettiStrip { ring: pres.label().to_string(), p_max, j_max, fields: fields.to_vec(), entries })
}

impl BettiStrip {
    pub fn get(&self, i: usize, j: usize) -> Option<&BettiEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    pub fn value(&self, i: usize, j: usize) -> Option<u64> {
        self.get(i, j).and_then(|e| e.value)
    }

    pub fn has_holes(&self) -> bool {
        self.entries.iter().any(|e| e.soundness == Soundness::Hole)
    }

    /// Rows `i`, columns `j`, holes as `?`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\\j");
        for j in 0..=self.j_max {
            let _ = write!(out, "\t{j}");
        }
        out.push('\n');
        for i in 0..=self.p_max {
            let _ = write!(out, "{i}");
            for j in 0..=self.j_max {
                match self.value(i, j) {
                    Some(v) => {
                        let _ = write!(out, "\t{v}");
                    }
                    None => out.push_str("\t?"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("strip serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Exact,
    TwoPrimes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum NpVerdict {
    HoldsCertified,
    Fails { i: usize, j: usize, value: u64, evidence: Evidence },
    Undecided { reason: String },
}

/// Default top row checked by [`property_np`].
pub const DEFAULT_J_CUT: usize = 3;

/// Decides `N_p` from `k_{i,j}` with `i <= p`, `2 <= j <= j_cut`.
///
/// All zero gives a certificate. A nonzero entry is a failure once it is
/// confirmed over `Q` or by two primes; a nonzero seen over a single prime
/// is recomputed exactly. Holes leave the verdict undecided.
pub fn property_np(
    pres: &GradedRingPresentation,
    p: usize,
    j_cut: usize,
    fields: &[Field],
    budget: u128,
) -> Result<NpVerdict, KoszulError> {
    if fields.is_empty() {
        return Err(KoszulError::BadField("no field given".into()));
    }
    if j_cut < 2 || j_cut + 1 > pres.q_max() {
        return Err(KoszulError::InvalidRange(format!(
            "j_cut = {j_cut} needs 2 <= j_cut and the ring through degree {}",
            j_cut + 1
        )));
    }
    let top = p.min(pres.dim_v());
    let cells: Vec<(usize, usize)> = (0..=top).flat_map(|i| (2..=j_cut).map(move |j| (i, j))).collect();
    let entries = evaluate(pres, &cells, fields, budget)?;

    let primes = fields.iter().filter(|f| matches!(f, Field::Prime(_))).count();
    let mut undecided: Option<String> = None;
    for e in &entries {
        match (e.value, e.soundness) {
            (None, _) => {
                undecided.get_or_insert_with(|| format!("k_({},{}) exceeds the budget", e.i, e.j));
            }
            (Some(0), _) => {}
            (Some(value), Soundness::Exact) => {
                return Ok(NpVerdict::Fails { i: e.i, j: e.j, value, evidence: Evidence::Exact });
            }
            (Some(value), _) if primes >= 2 => {
                return Ok(NpVerdict::Fails { i: e.i, j: e.j, value, evidence: Evidence::TwoPrimes });
            }
            (Some(_), _) => {
                // one prime can overcount; settle the cell over Q
                let exact = koszul_dim(pres, e.i, e.j, &[Field::Rationals], budget)?;
                if exact.value > 0 {
                    return Ok(NpVerdict::Fails { i: e.i, j: e.j, value: exact.value, evidence: Evidence::Exact });
                }
            }
        }
    }
    Ok(match undecided {
        Some(reason) => NpVerdict::Undecided { reason },
        None => NpVerdict::HoldsCertified,
    })
}
