//! Text renderings and the regenerated numeric tables.
//!
//! Every number printed here comes from a library call; string literals in
//! this file carry no digits (a test enforces it).

use std::fmt::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use syzcert::certifier::{
    best_certificate, mukai_min_q, optimality_witness, veronese_boundary, Certificate, EmbeddingSpec, PLevel,
    Status, WitnessReport,
};
use syzcert::koszul::{property_np, veronese_ring, BettiStrip, Field, NpVerdict, DEFAULT_J_CUT};
use syzcert::rational::display_rational;
use syzcert::slope::FormalBundle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeroneseReport {
    pub n: u32,
    pub d: u32,
    pub p: Option<u32>,
    pub status: Option<Status>,
    pub holds_through: PLevel,
    pub fails_from: Option<u32>,
}

fn fail_text(p: Option<u32>) -> String {
    p.map_or_else(|| "none".to_string(), |p| p.to_string())
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Open => "open",
    }
}

impl Table {
    pub fn to_markdown(&self) -> String {
        let mut out = format!("## {}\n\n| {} |\n|", self.title, self.header.join(" | "));
        for _ in &self.header {
            out.push_str(" --- |");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.title, self.header.join("\t"));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }
}

impl ReferenceTables {
    pub fn to_markdown(&self) -> String {
        let parts: Vec<String> = self.tables.iter().map(Table::to_markdown).collect();
        format!("# Regenerated tables\n\n{}", parts.join("\n"))
    }

    pub fn to_tsv(&self) -> String {
        let parts: Vec<String> = self.tables.iter().map(Table::to_tsv).collect();
        parts.join("\n")
    }
}

pub fn certificate_markdown(c: &Certificate) -> String {
    let s = &c.input;
    let mut out = String::from("# Certificate\n\n");
    let _ = writeln!(
        out,
        "- input: g = {}, n = {}, L = {}H + B with deg B = {}, rank E = {}, deg E = {}",
        s.genus,
        s.n,
        s.a,
        s.b,
        s.bundle.rank(),
        s.bundle.degree()
    );
    let _ = writeln!(
        out,
        "- slopes of E: mu_minus = {}, mu_plus = {}",
        display_rational(s.bundle.mu_minus()),
        display_rational(s.bundle.mu_plus())
    );
    let _ = writeln!(out, "- nu = a mu_minus(E) + deg B = {}", display_rational(&s.nu()));
    let _ = writeln!(out, "- very ample: {:?}", c.very_ample);
    let _ = writeln!(out, "- certified: N_p for p <= {}", c.p_certified);
    let _ = writeln!(out, "- known failure: N_p for p >= {}", fail_text(c.p_known_fail));
    match c.open_gap() {
        Some((lo, Some(hi))) => {
            let _ = writeln!(out, "- open: {lo} <= p <= {hi}");
        }
        Some((lo, None)) => {
            let _ = writeln!(out, "- open: p >= {lo}");
        }
        None => {}
    }
    out.push_str("\n| rule | applicable | certified | fails from | hypotheses |\n| --- | --- | --- | --- | --- |\n");
    for r in &c.rules {
        let hyps: Vec<String> = r
            .hypotheses
            .iter()
            .map(|h| format!("{} {}", if h.passed { "ok" } else { "FAILED" }, h.text))
            .collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.name,
            r.applicable(),
            r.conclusion.p_certified,
            fail_text(r.conclusion.p_known_fail),
            hyps.join("; ")
        );
    }
    out
}

pub fn certificate_tsv(c: &Certificate) -> String {
    let mut out = String::from("rule\tapplicable\tcertified\tfails_from\tsummary\n");
    for r in &c.rules {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            r.name,
            r.applicable(),
            r.conclusion.p_certified,
            fail_text(r.conclusion.p_known_fail),
            r.conclusion.summary
        );
    }
    let _ = writeln!(out, "best\t\t{}\t{}\t", c.p_certified, fail_text(c.p_known_fail));
    out
}

pub fn veronese_table(r: &VeroneseReport) -> Table {
    let mut header = vec!["n".to_string(), "d".into(), "holds through".into(), "fails from".into()];
    let mut row = vec![r.n.to_string(), r.d.to_string(), r.holds_through.to_string(), fail_text(r.fails_from)];
    if let (Some(p), Some(s)) = (r.p, r.status) {
        header.extend(["p".to_string(), "status".into()]);
        row.extend([p.to_string(), status_text(s).to_string()]);
    }
    Table { title: format!("N_p for (P^{}, O({}))", r.n, r.d), header, rows: vec![row] }
}

pub fn strip_markdown(s: &BettiStrip) -> String {
    let mut header = vec!["i \\ j".to_string()];
    header.extend((0..=s.j_max).map(|j| j.to_string()));
    let rows = (0..=s.p_max)
        .map(|i| {
            let mut row = vec![i.to_string()];
            row.extend((0..=s.j_max).map(|j| s.value(i, j).map_or_else(|| "?".to_string(), |v| v.to_string())));
            row
        })
        .collect();
    let fields: Vec<String> = s.fields.iter().map(ToString::to_string).collect();
    let table = Table { title: format!("k_{{i,j}} of {} over {}", s.ring, fields.join(", ")), header, rows };
    table.to_markdown()
}

pub fn witness_markdown(w: &WitnessReport) -> String {
    let mut out = format!("# Hyperelliptic witness: n = {}, g = {}, p = {}\n\n", w.n, w.genus, w.p);
    out.push_str("| rank | deg E_i | mu_minus | tautological ample |\n| --- | --- | --- | --- |\n");
    for link in &w.chain {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:?} |",
            link.rank,
            link.bundle.degree(),
            display_rational(link.bundle.mu_minus()),
            link.tautological_ample
        );
    }
    let _ = writeln!(out, "\n- L = {} = {}H + B with deg B = {}", w.line_bundle, w.a, w.b);
    let _ = writeln!(out, "- deg L on the minimal section: {}", w.restricted_degree);
    let _ = writeln!(out, "- mu_minus of the pushforward: {}", display_rational(&w.mu_minus_pushforward));
    let _ = writeln!(out, "- N_{} holds, N_{} fails", w.predicted_holds, w.fails);
    let _ = writeln!(
        out,
        "- certifier: certified {}, known failure {}",
        w.certifier_p_certified,
        fail_text(w.certifier_p_known_fail)
    );
    out
}

// table generation

/// Largest `p` shown per genus in the threshold tables, following the ranges
/// in which the closed forms are stated.
const THRESHOLD_RANGE: [(u32, u32); 5] = [(1, 4), (2, 4), (3, 4), (4, 2), (5, 2)];
const SCAN: std::ops::RangeInclusive<i64> = -64..=256;

fn trivial(rank: u32) -> FormalBundle {
    FormalBundle::decomposable(&vec![0; rank as usize]).expect("positive rank")
}

/// Least integer `deg B` (with `mu_minus(E) = 0`) whose certificate covers `N_p`.
fn least_b(genus: u32, n: u32, a: i64, p: u32) -> Result<Option<i64>> {
    for b in SCAN {
        let spec = EmbeddingSpec::new(genus, n, a, b, trivial(n + 1))?;
        if best_certificate(&spec)?.p_certified.covers(p) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

fn pattern(thresholds: &[Option<i64>]) -> String {
    let offsets: Vec<Option<i64>> = thresholds.iter().zip(0..).map(|(t, p)| t.map(|t| t - p)).collect();
    match offsets.first() {
        Some(Some(c)) if offsets.iter().all(|o| *o == Some(*c)) => format!("nu >= {c} + p"),
        _ => "varies".to_string(),
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Scroll,
    RuledSurface,
    Capped,
}

impl Family {
    /// `(n, a)` used to certify `N_p`.
    fn params(self, p: u32) -> (u32, i64) {
        match self {
            Family::Scroll => (1, 1),
            Family::RuledSurface => (1, 2),
            Family::Capped => (2, i64::from(p) + 1),
        }
    }

    fn title(self) -> String {
        let (n, a) = self.params(0);
        let what = match self {
            Family::Scroll => format!("Scrolls (a = {a})"),
            Family::RuledSurface => format!("Ruled surfaces (n = {n}, a = {a})"),
            Family::Capped => format!("Arbitrary a (n = {n}, a = p + {a})"),
        };
        format!("{what}: least integer nu = b + a mu_minus(E) certifying N_p")
    }
}

fn threshold_table(family: Family) -> Result<Table> {
    let width = THRESHOLD_RANGE.iter().map(|&(_, top)| top).max().unwrap_or_default();
    let mut header = vec!["g".to_string()];
    header.extend((0..=width).map(|p| format!("p = {p}")));
    header.push("closed form".into());
    let mut rows = Vec::new();
    for &(g, top) in &THRESHOLD_RANGE {
        let mut row = vec![g.to_string()];
        let mut stated = Vec::new();
        for p in 0..=width {
            let (n, a) = family.params(p);
            let t = least_b(g, n, a, p)?;
            if p <= top {
                stated.push(t);
            }
            row.push(t.map_or_else(|| "-".to_string(), |t| t.to_string()));
        }
        row.push(pattern(&stated));
        rows.push(row);
    }
    Ok(Table { title: family.title(), header, rows })
}

fn engine_check(n: u32, d: u32, holds: PLevel, fails: Option<u32>, fields: &[Field], budget: u128) -> Result<String> {
    let ring = veronese_ring(n as usize, d, DEFAULT_J_CUT + 1)?;
    let dim_v = ring.dim_v();
    let verdict = |p: usize| property_np(&ring, p, DEFAULT_J_CUT, fields, budget);
    let (holds_at, fails_at) = match (holds, fails) {
        (PLevel::Infinite, _) => (dim_v, None),
        (PLevel::Finite(h), Some(f)) if f == h + 1 => (h as usize, Some(f as usize)),
        _ => return Ok("-".to_string()),
    };
    let held = matches!(verdict(holds_at)?, NpVerdict::HoldsCertified);
    let failed = match fails_at {
        Some(f) => matches!(verdict(f)?, NpVerdict::Fails { .. }),
        None => true,
    };
    Ok(if held && failed { "confirmed" } else { "MISMATCH" }.to_string())
}

fn veronese_tables(fields: &[Field], budget: u128, engine_dim: u64) -> Result<Table> {
    let header = ["n", "d", "holds through", "fails from", "engine"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for n in 1..=4u32 {
        for d in 1..=5u32 {
            let b = veronese_boundary(n, d)?;
            let dim_v = syzcert::combinatorics::binomial(u64::from(n + d), u64::from(n)).unwrap_or(u64::MAX);
            let engine = if dim_v <= engine_dim {
                engine_check(n, d, b.holds_through, b.fails_from, fields, budget)?
            } else {
                "-".to_string()
            };
            rows.push(vec![n.to_string(), d.to_string(), b.holds_through.to_string(), fail_text(b.fails_from), engine]);
        }
    }
    Ok(Table { title: "Veronese embeddings (P^n, O(d))".into(), header, rows })
}

fn normal_generation_table() -> Result<Table> {
    let header = ["g", "normal generation", "normal presentation"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for g in 1..=6u32 {
        let cells = [least_b(g, 1, 2, 0)?, least_b(g, 1, 2, 1)?];
        let mut row = vec![g.to_string()];
        row.extend(cells.iter().map(|t| t.map_or_else(|| "-".to_string(), |t| format!("nu >= {t}"))));
        rows.push(row);
    }
    Ok(Table { title: "Ruled surfaces: least integer nu for normal generation and presentation".into(), header, rows })
}

fn mukai_table() -> Table {
    let tau = 1;
    let mut header = vec!["g".to_string(), "rank".into()];
    header.extend((0..=3).map(|p| format!("p = {p}")));
    let mut rows = Vec::new();
    for g in 0..=3u32 {
        for rank in 1..=3u64 {
            let mut row = vec![g.to_string(), rank.to_string()];
            row.extend((0..=3).map(|p| format!("q >= {}", mukai_min_q(g, rank, tau, p))));
            rows.push(row);
        }
    }
    Table { title: format!("Mukai-type bound, least q (tau = {tau})"), header, rows }
}

fn failure_table() -> Result<Table> {
    let header = ["n", "a", "fails from"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for n in 2..=4u32 {
        for a in 2..=4i64 {
            // elliptic base, very ample twist
            let spec = EmbeddingSpec::new(1, n, a, 16, trivial(n + 1))?;
            let c = best_certificate(&spec)?;
            rows.push(vec![n.to_string(), a.to_string(), fail_text(c.p_known_fail)]);
        }
    }
    Ok(Table { title: "Multisecant failures of the fiber Veronese".into(), header, rows })
}

const WITNESS_N: u32 = 2;

fn witness_table() -> Result<Table> {
    let header = ["g", "p", "deg L on section", "fails", "certifier"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for g in 2..=4u32 {
        for p in 0..=2u32 {
            let w = optimality_witness(WITNESS_N, g, p)?;
            rows.push(vec![
                g.to_string(),
                p.to_string(),
                w.restricted_degree.to_string(),
                format!("N_{}", w.fails),
                w.certifier_p_certified.to_string(),
            ]);
        }
    }
    Ok(Table { title: format!("Sharpness on hyperelliptic curves (n = {WITNESS_N})"), header, rows })
}

/// Engine cross-checks run for Veronese rings with `dim V` up to this size.
pub const ENGINE_DIM: u64 = 10;

pub fn reference_tables(fields: &[Field], budget: u128) -> Result<ReferenceTables> {
    Ok(ReferenceTables {
        tables: vec![
            veronese_tables(fields, budget, ENGINE_DIM)?,
            threshold_table(Family::Scroll)?,
            threshold_table(Family::RuledSurface)?,
            threshold_table(Family::Capped)?,
            normal_generation_table()?,
            mukai_table(),
            failure_table()?,
            witness_table()?,
        ],
    })
}
