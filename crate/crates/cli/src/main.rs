//! Command-line front end: parse rational-function expressions over
//! F_p(t), run the local-symbol and determinant-line computations, and
//! print text or JSON reports.
//!
//! Exit codes: 0 when the requested law holds, 1 when a verified product
//! comes out wrong (which would mean a bug, the laws are theorems), and 2
//! for usage, parse, or input errors.

mod expr;

use clap::{Parser, Subcommand};
use std::process::ExitCode;
use weilrec::detline;
use weilrec::ff::PrimeField;
use weilrec::poly;
use weilrec::ratfun::ClosedPoint;
use weilrec::seqspace::{self, BlockOperator, EventuallyPeriodicSet, FamilyRule};
use weilrec::symbols::{self, LocalSymbolReport, ReciprocityReport};
use weilrec::{Error, Result};

#[derive(Parser)]
#[command(name = "weilrec", version, about = "Exact local symbols and reciprocity laws on F_p(t)")]
struct Cli {
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the factorization randomness; fixed by default so runs are
    /// byte-identical.
    #[arg(long, global = true, default_value_t = poly::DEFAULT_FACTOR_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local symbol data for f, g at one closed point.
    Symbol {
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// A polynomial expression generating the point, or "inf".
        #[arg(long)]
        point: String,
    },
    /// Verify the product of tame symbols over all closed points is 1.
    Weil {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Verify the product of m-th power-residue symbols is 1 (m | p-1).
    Hilbert {
        #[arg(long)]
        p: u64,
        /// Root-of-unity order; must divide p - 1.
        #[arg(long)]
        m: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Sum deg(x)*v_x(f) mod n over all closed points (equals 0).
    Charsum {
        #[arg(long)]
        p: u64,
        /// Character order.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f: String,
    },
    /// Degree of the divisor of f (equals 0).
    Degsum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
    },
    /// Determinant-line commutator of multiplication by f and g over
    /// t^shift * k[[t]], compared against the closed-form local symbol.
    Commutator {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Base subspace exponent: V+ = t^shift * k[[t]].
        #[arg(long, default_value_t = 0)]
        shift: i64,
        /// Compute over the complement span{t^-1, t^-2, ...} instead
        /// (--shift is ignored).
        #[arg(long)]
        complement: bool,
    },
    /// The 2x2 antidiagonal worked example over the even/odd splitting.
    GlkExample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        lambda: i64,
    },
    /// Validate a family of monomial subspaces; optionally check index
    /// additivity for a block operator.
    FamilyCheck {
        #[arg(long)]
        p: u64,
        /// Family description: "linear:K" for residue classes mod K, or a
        /// path to a JSON file listing index sets.
        #[arg(long)]
        phi: String,
        /// Number of subspaces.
        #[arg(long)]
        r: usize,
        /// Block operator as a JSON matrix, e.g. "[[0,2],[3,0]]".
        #[arg(long)]
        op: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_point(src: &str, p: u64) -> Result<ClosedPoint> {
    if src.trim() == "inf" {
        return Ok(ClosedPoint::infinity());
    }
    let poly = expr::parse_polynomial(src, p)?;
    if poly.degree() == 0 {
        return Err(Error::BadInput(
            "a point generator must be nonconstant".into(),
        ));
    }
    let (lead, monic) = poly.make_monic();
    if lead != 1 {
        eprintln!("warning: point generator rescaled to monic: {monic}");
    }
    ClosedPoint::finite(monic)
}

fn print_local(r: &LocalSymbolReport) {
    println!(
        "{}: v_f = {}, v_g = {}, index_f = {}, index_g = {}, commutator = {}, tame = {}, symbol = {}",
        r.point, r.v_f, r.v_g, r.index_f, r.index_g, r.commutator, r.tame, r.symbol
    );
}

fn print_report(rep: &ReciprocityReport) {
    for r in &rep.points {
        print_local(r);
    }
    println!(
        "product = {} ({})",
        rep.product,
        if rep.passed { "passed" } else { "FAILED" }
    );
}

fn run(cli: &Cli) -> Result<bool> {
    let seed = cli.seed;
    match &cli.command {
        Command::Symbol { p, f, g, point } => {
            let f = expr::parse_seeded(f, *p, seed)?;
            let g = expr::parse_seeded(g, *p, seed)?;
            let x = parse_point(point, *p)?;
            let report = symbols::symbol_report(&f, &g, &x)?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print_local(&report);
            }
            Ok(true)
        }
        Command::Weil { p, f, g } => {
            let f = expr::parse_seeded(f, *p, seed)?;
            let g = expr::parse_seeded(g, *p, seed)?;
            let report = symbols::weil_check(&f, &g)?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print_report(&report);
            }
            Ok(report.passed)
        }
        Command::Hilbert { p, m, f, g } => {
            let f = expr::parse_seeded(f, *p, seed)?;
            let g = expr::parse_seeded(g, *p, seed)?;
            let report = symbols::hilbert_check(&f, &g, *m)?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("m = {m}");
                print_report(&report);
            }
            Ok(report.passed)
        }
        Command::Charsum { p, n, f } => {
            if *n == 0 {
                return Err(Error::BadInput("character order n must be positive".into()));
            }
            let f = expr::parse_seeded(f, *p, seed)?;
            let (sum, passed) = symbols::character_check(&f, *n);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "n": n, "sum": sum, "passed": passed })
                );
            } else {
                println!(
                    "sum of deg(x)*v_x(f) mod {n} = {sum} ({})",
                    if passed { "passed" } else { "FAILED" }
                );
            }
            Ok(passed)
        }
        Command::Degsum { p, f } => {
            let f = expr::parse_seeded(f, *p, seed)?;
            let total = f.degree_sum();
            let passed = total == 0;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "degree": total, "passed": passed })
                );
            } else {
                println!(
                    "divisor degree = {total} ({})",
                    if passed { "passed" } else { "FAILED" }
                );
            }
            Ok(passed)
        }
        Command::Commutator {
            p,
            f,
            g,
            shift,
            complement,
        } => {
            let f = expr::parse_seeded(f, *p, seed)?;
            let g = expr::parse_seeded(g, *p, seed)?;
            let field = PrimeField::new(*p)?;
            let origin = ClosedPoint::finite(poly::Polynomial::var(field))
                .expect("t is monic irreducible");
            let local = symbols::commutator_value(&f, &g, &origin)?;
            let (value, oracle, where_) = if *complement {
                (
                    detline::commutator_complement(&f, &g),
                    local.inv()?,
                    "inverse of the local symbol at t = 0",
                )
            } else {
                (
                    detline::laurent_commutator(&f, &g, *shift),
                    local,
                    "local symbol at t = 0",
                )
            };
            let agree = value == oracle;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "value": value.to_json(),
                        "oracle": oracle.to_json(),
                        "match": agree,
                    })
                );
            } else {
                println!("value = {value}");
                println!("oracle = {oracle} ({where_})");
                println!("agreement: {}", if agree { "yes" } else { "NO" });
            }
            Ok(agree)
        }
        Command::GlkExample { p, a, b, lambda } => {
            let field = PrimeField::new(*p)?;
            let example = detline::glk_example(field, *a, *b, *lambda)?;
            let passed = example
                .v1_commutator
                .mul(&example.v2_commutator)
                .is_one();
            if cli.json {
                println!("{}", example.to_json());
            } else {
                println!("mu = {}", example.mu);
                println!(
                    "V1: sigma~tau~ = {}, tau~sigma~ = {}, commutator = {}",
                    example.v1_sigma_tau, example.v1_tau_sigma, example.v1_commutator
                );
                println!(
                    "V2: sigma~tau~ = {}, tau~sigma~ = {}, commutator = {}",
                    example.v2_sigma_tau, example.v2_tau_sigma, example.v2_commutator
                );
                println!(
                    "indices: sigma|V1 = {}, sigma|V2 = {}, tau|V1 = {}, tau|V2 = {}",
                    example.index_sigma_v1,
                    example.index_sigma_v2,
                    example.index_tau_v1,
                    example.index_tau_v2
                );
                println!(
                    "product of commutators = {} ({})",
                    example.v1_commutator.mul(&example.v2_commutator),
                    if passed { "passed" } else { "FAILED" }
                );
            }
            Ok(passed)
        }
        Command::FamilyCheck { p, phi, r, op } => {
            let field = PrimeField::new(*p)?;
            let rule = parse_family_rule(phi)?;
            let family = seqspace::admissible_family(&rule, *r)?;
            let operator = match op {
                Some(text) => Some(parse_block_operator(field, text)?),
                None => None,
            };
            let mut passed = true;
            let mut json = serde_json::json!({
                "admissible": true,
                "members": family.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            });
            if !cli.json {
                for (i, member) in family.iter().enumerate() {
                    println!("V_{} = {}", i + 1, member);
                }
                println!("admissible family of {} subspaces", family.len());
            }
            if let Some(sigma) = operator {
                let indices: Vec<i64> =
                    family.iter().map(|v| seqspace::index(&sigma, v)).collect();
                let total: i64 = indices.iter().sum();
                passed = seqspace::index_additivity_check(&sigma, &family)?;
                if cli.json {
                    json["indices"] = serde_json::json!(indices);
                    json["total"] = serde_json::json!(total);
                    json["passed"] = serde_json::json!(passed);
                } else {
                    for (i, idx) in indices.iter().enumerate() {
                        println!("index over V_{} = {}", i + 1, idx);
                    }
                    println!(
                        "index sum = {total} ({})",
                        if passed { "passed" } else { "FAILED" }
                    );
                }
            }
            if cli.json {
                println!("{json}");
            }
            Ok(passed)
        }
    }
}

/// "linear:K" builds residue classes mod K; anything else is read as a
/// path to a JSON file holding a list of index-set descriptions.
fn parse_family_rule(phi: &str) -> Result<FamilyRule> {
    if let Some(rest) = phi.strip_prefix("linear:") {
        let modulus: usize = rest
            .parse()
            .map_err(|_| Error::BadInput(format!("bad modulus in family rule {phi:?}")))?;
        return Ok(FamilyRule::Linear { modulus });
    }
    let text = std::fs::read_to_string(phi)
        .map_err(|e| Error::BadInput(format!("cannot read family file {phi:?}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::BadInput(format!("family file {phi:?} is not JSON: {e}")))?;
    let list = value
        .as_array()
        .ok_or_else(|| Error::BadInput("family file must hold a JSON list of sets".into()))?;
    let sets = list
        .iter()
        .map(EventuallyPeriodicSet::from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyRule::Explicit(sets))
}

fn parse_block_operator(field: PrimeField, text: &str) -> Result<BlockOperator> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text)
        .map_err(|e| Error::BadInput(format!("operator must be a JSON matrix: {e}")))?;
    BlockOperator::new(field, &rows)
}
