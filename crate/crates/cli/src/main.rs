use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use syzcert::certifier::{
    best_certificate, optimality_witness, veronese_boundary, veronese_status, EmbeddingSpec, PLevel,
};
use syzcert::koszul::{
    betti_strip, parse_ring, scroll_ring, veronese_ring, FieldStrategy, GradedRingPresentation, DEFAULT_BUDGET,
};
use syzcert::rational::{ceil_i64, int, parse_rational, Rational};
use syzcert::slope::FormalBundle;

mod report;

use report::VeroneseReport;

const GOLDEN_TABLES: &str = include_str!("../golden/reference_tables.md");

#[derive(Debug, Parser)]
#[command(name = "syzcert", version, about = "Certify syzygy properties N_p of embeddings of projective bundles over curves")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest virtual matrix size allowed per Koszul differential.
    #[arg(long, global = true, env = "SYZ_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Coefficient fields: two-primes, two-primes:SEED, prime:P or exact.
    #[arg(long, global = true, env = "SYZ_FIELD", default_value = "two-primes")]
    field: FieldStrategy,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Tsv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify N_p for L = aH + pi^*B on P_C(E).
    Certify(CertifyArgs),
    /// Known N_p status of a Veronese embedding.
    Veronese {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Koszul cohomology strip of a ring generated in degree one.
    Betti {
        /// veronese:N,D, scroll:A1,A2,... or a path to a ring file.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        p_max: usize,
        #[arg(long, default_value_t = 3)]
        j_max: usize,
    },
    /// Regenerate the numeric tables and compare with the golden copy.
    Tables {
        /// Golden file to compare against (default: the copy built into the binary).
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Write the regenerated tables to the golden path instead of comparing.
        #[arg(long, requires = "golden")]
        bless: bool,
    },
    /// Numeric chain of the hyperelliptic sharpness construction.
    Optimality {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    genus: u32,
    /// Fiber dimension; rank E = n + 1.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    a: i64,
    /// deg B.
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    /// Minimal slope of E, as an integer or num/den.
    #[arg(long, allow_hyphen_values = true)]
    mu_minus: String,
    /// Maximal slope of E; needs --degree.
    #[arg(long, allow_hyphen_values = true)]
    mu_plus: Option<String>,
    /// deg E; defaults to the most balanced bundle with the given minimal slope.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// E is semistable of slope mu_minus.
    #[arg(long)]
    semistable: bool,
    /// Invariant e of a ruled surface over P^1 (genus 0, n = 1).
    #[arg(long, allow_hyphen_values = true)]
    e: Option<i64>,
}

enum Outcome {
    Done,
    NothingCertified,
    Holes,
    GoldenDiff,
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::NothingCertified => 2,
            Outcome::Holes => 3,
            Outcome::GoldenDiff => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn rational_arg(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("--{name}: {e}"))
}

/// Bundle of rank `n + 1` built from the command line slope data.
fn bundle(args: &CertifyArgs) -> Result<FormalBundle> {
    let rank = u64::from(args.n) + 1;
    let mu_minus = rational_arg("mu-minus", &args.mu_minus)?;
    let mu_plus = args.mu_plus.as_deref().map(|t| rational_arg("mu-plus", t)).transpose()?;
    let rank_q = int(rank as i64);

    if args.semistable {
        if mu_plus.as_ref().is_some_and(|m| *m != mu_minus) {
            bail!("--semistable needs mu-plus = mu-minus");
        }
        let degree = &mu_minus * &rank_q;
        if !degree.is_integer() {
            bail!("a semistable bundle of rank {rank} cannot have slope {}", args.mu_minus);
        }
        if args.degree.is_some_and(|d| int(d) != degree) {
            bail!("--degree disagrees with rank * mu-minus for a semistable bundle");
        }
        return Ok(FormalBundle::semistable(rank, degree.to_integer())?);
    }

    let Some(degree) = args.degree else {
        if mu_plus.is_some() {
            bail!("--mu-plus needs --degree");
        }
        return balanced(rank, mu_minus);
    };
    // without mu_plus: the largest slope any subbundle can have when every
    // quotient has slope >= mu_minus
    let mu_plus = mu_plus.unwrap_or_else(|| int(degree) - int(rank as i64 - 1) * &mu_minus);
    Ok(FormalBundle::new(rank, degree, mu_minus, mu_plus)?)
}

/// Least-degree bundle with the given minimal slope: copies of a stable
/// bundle of slope `mu` plus one balanced remainder.
fn balanced(rank: u64, mu: Rational) -> Result<FormalBundle> {
    let den = u64::try_from(mu.denom().clone()).map_err(|_| anyhow!("mu-minus denominator too large"))?;
    if den > rank {
        bail!("no bundle of rank {rank} has minimal slope with denominator {den}; pass --degree");
    }
    let copies = rank / den;
    let rest = rank % den;
    let mut degree = int(copies as i64) * int(den as i64) * &mu;
    let mut mu_plus = mu.clone();
    if rest > 0 {
        let top = ceil_i64(&(int(rest as i64) * &mu)).ok_or_else(|| anyhow!("slope out of range"))?;
        degree += int(top);
        mu_plus = Rational::new(top.into(), (rest as i64).into()).max(mu.clone());
    }
    Ok(FormalBundle::new(rank, degree.to_integer(), mu, mu_plus)?)
}

fn load_ring(spec: &str, q_max: usize) -> Result<GradedRingPresentation> {
    let numbers = |list: &str| -> Result<Vec<u32>> {
        list.split(',')
            .map(|t| t.trim().parse::<u32>().with_context(|| format!("bad number `{t}` in `{spec}`")))
            .collect()
    };
    if let Some(rest) = spec.strip_prefix("veronese:") {
        let v = numbers(rest)?;
        let [n, d] = v[..] else { bail!("expected veronese:N,D, got `{spec}`") };
        return Ok(veronese_ring(n as usize, d, q_max)?);
    }
    if let Some(rest) = spec.strip_prefix("scroll:") {
        return Ok(scroll_ring(&numbers(rest)?, q_max)?);
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading ring file `{spec}`"))?;
    let ring = parse_ring(spec, &text)?;
    if ring.q_max() < q_max {
        bail!("ring file stops at degree {} but j-max needs degree {q_max}", ring.q_max());
    }
    Ok(ring)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Certify(args) => {
            let mut spec = EmbeddingSpec::new(args.genus, args.n, args.a, args.b, bundle(args)?)?;
            if let Some(e) = args.e {
                spec = spec.with_surface_e(e);
            }
            let cert = best_certificate(&spec)?;
            match cli.format {
                Format::Json => print_json(&cert)?,
                Format::Markdown => print!("{}", report::certificate_markdown(&cert)),
                Format::Tsv => print!("{}", report::certificate_tsv(&cert)),
            }
            Ok(if cert.p_certified == PLevel::None { Outcome::NothingCertified } else { Outcome::Done })
        }
        Command::Veronese { n, d, p } => {
            let boundary = veronese_boundary(*n, *d)?;
            let status = p.map(|p| veronese_status(*n, *d, p)).transpose()?;
            let out = VeroneseReport {
                n: *n,
                d: *d,
                p: *p,
                status,
                holds_through: boundary.holds_through,
                fails_from: boundary.fails_from,
            };
            match cli.format {
                Format::Json => print_json(&out)?,
                Format::Markdown => print!("{}", report::veronese_table(&out).to_markdown()),
                Format::Tsv => print!("{}", report::veronese_table(&out).to_tsv()),
            }
            Ok(Outcome::Done)
        }
        Command::Betti { ring, p_max, j_max } => {
            let pres = load_ring(ring, j_max + 1)?;
            let fields = cli.field.fields()?;
            let strip = betti_strip(&pres, *p_max, *j_max, &fields, cli.budget)?;
            match cli.format {
                Format::Json => println!("{}", strip.to_json()),
                Format::Markdown => print!("{}", report::strip_markdown(&strip)),
                Format::Tsv => print!("{}", strip.to_tsv()),
            }
            if strip.has_holes() {
                eprintln!("some entries exceed the budget of {} and are reported as holes", cli.budget);
                return Ok(Outcome::Holes);
            }
            Ok(Outcome::Done)
        }
        Command::Tables { golden, bless } => {
            let fields = cli.field.fields()?;
            let tables = report::reference_tables(&fields, cli.budget)?;
            let rendered = tables.to_markdown();
            match cli.format {
                Format::Json => print_json(&tables)?,
                Format::Markdown => print!("{rendered}"),
                Format::Tsv => print!("{}", tables.to_tsv()),
            }
            if *bless {
                let path = golden.as_ref().expect("clap enforces --golden with --bless");
                fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
                return Ok(Outcome::Done);
            }
            let expected = match golden {
                Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
                None => GOLDEN_TABLES.to_string(),
            };
            match first_difference(&expected, &rendered) {
                None => Ok(Outcome::Done),
                Some((line, want, got)) => {
                    eprintln!("tables differ from the golden copy at line {line}:\n  golden: {want}\n  now:    {got}");
                    Ok(Outcome::GoldenDiff)
                }
            }
        }
        Command::Optimality { n, g, p } => {
            let w = optimality_witness(*n, *g, *p).map_err(|e| match e {
                syzcert::certifier::CertifyError::NoHyperellipticWitness(_) => {
                    anyhow!("{e}; hyperelliptic curves only exist from genus 2 on, so the witness is undefined")
                }
                other => other.into(),
            })?;
            match cli.format {
                Format::Json => print_json(&w)?,
                Format::Markdown | Format::Tsv => print!("{}", report::witness_markdown(&w)),
            }
            Ok(Outcome::Done)
        }
    }
}

fn first_difference(expected: &str, actual: &str) -> Option<(usize, String, String)> {
    let mut want = expected.lines();
    let mut got = actual.lines();
    for line in 1.. {
        match (want.next(), got.next()) {
            (None, None) => return None,
            (a, b) if a == b => continue,
            (a, b) => {
                let show = |s: Option<&str>| s.unwrap_or("<end of file>").to_string();
                return Some((line, show(a), show(b)));
            }
        }
    }
    None
}
