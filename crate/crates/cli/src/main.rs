//! Command-line surface: construct class polynomials, compute and factor
//! their discriminants, verify the relations between them, and sweep the
//! reference table.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 precision exhaustion.

mod cache;
mod doc;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use classpoly::construct::{
    hilbert_class_poly, ramanujan_poly_with_hilbert, ClassPolynomialResult, PolyKind,
};
use classpoly::dataset::Dataset;
use classpoly::error::Error;
use classpoly::factor::{factorize, FactoredInteger};
use classpoly::polyz::discriminant;
use classpoly::quadform::ClassGroup;
use classpoly::verify::{analyze_prebuilt, VerificationReport};

use doc::{DiscriminantDoc, ResultDocument};

#[derive(Parser)]
#[command(
    name = "classpoly",
    version,
    about = "Hilbert and Ramanujan class polynomials for discriminants -n, n ≡ 11 (mod 24)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON documents.
    #[arg(long, global = true)]
    json: bool,

    /// Emit CSV (table and verify only).
    #[arg(long, global = true)]
    csv: bool,

    /// Emit human-readable text (the default).
    #[arg(long, global = true)]
    text: bool,

    /// Override the automatic working precision.
    #[arg(long, global = true, value_name = "BITS")]
    precision_bits: Option<usize>,

    /// Read/write a result cache in this directory.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Parallel sweep width for `table`.
    #[arg(long, global = true, value_name = "K", default_value_t = 1)]
    jobs: usize,

    /// Treat diagnostic-only flags (e.g. the literal perfect-square probe)
    /// as failures.
    #[arg(long, global = true)]
    strict: bool,

    /// Override the embedded expected dataset (testing surface).
    #[arg(long, global = true, value_name = "FILE")]
    dataset: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced forms, class number, and invariant factors of Cl(n).
    Classgroup { n: i64 },
    /// The Hilbert class polynomial H_n.
    Hilbert { n: i64 },
    /// The Ramanujan minimal polynomial P_n.
    Ramanujan { n: i64 },
    /// Both discriminants, factored, with quotient and index.
    Disc { n: i64 },
    /// Full verification report for one n.
    Verify { n: i64 },
    /// Sweep n ≡ 11 (mod 24) over a range and cross-check the reference table.
    Table {
        #[arg(long, default_value_t = 11)]
        from: i64,
        #[arg(long, default_value_t = 995)]
        to: i64,
    },
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnsupportedDiscriminant(_)
        | Error::InvalidPrecision(_)
        | Error::NotSquarefree(_)
        | Error::Dataset(_) => 1,
        Error::PrecisionExhausted(_) | Error::NeedsMorePrecision(_) | Error::Residual { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let format = match (cli.json, cli.csv, cli.text) {
        (true, false, false) => Format::Json,
        (false, true, false) => Format::Csv,
        (false, false, _) => Format::Text,
        _ => {
            eprintln!("error: --json, --csv and --text are mutually exclusive");
            return Ok(1);
        }
    };

    let dataset_owned;
    let dataset: &Dataset = match &cli.dataset {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Dataset(format!("cannot read {}: {e}", path.display())))?;
            dataset_owned = Dataset::from_json(&text)?;
            &dataset_owned
        }
        None => Dataset::embedded(),
    };

    match &cli.command {
        Command::Classgroup { n } => cmd_classgroup(*n, format),
        Command::Hilbert { n } => cmd_polynomial(*n, PolyKind::Hilbert, cli, format),
        Command::Ramanujan { n } => cmd_polynomial(*n, PolyKind::Ramanujan, cli, format),
        Command::Disc { n } => cmd_disc(*n, cli, format),
        Command::Verify { n } => cmd_verify(*n, cli, dataset, format),
        Command::Table { from, to } => cmd_table(*from, *to, cli, dataset, format),
    }
}

fn invariant_string(factors: &[u64]) -> String {
    factors.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
}

fn group_name(factors: &[u64]) -> String {
    factors.iter().map(|d| format!("Z/{d}Z")).collect::<Vec<_>>().join(" x ")
}

fn cmd_classgroup(n: i64, format: Format) -> Result<u8, Error> {
    let group = ClassGroup::new(n)?;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct GroupDoc {
                schema_version: u32,
                n: i64,
                h: usize,
                invariant_factors: Vec<u64>,
                two_torsion: usize,
                forms: Vec<[i64; 3]>,
            }
            let doc = GroupDoc {
                schema_version: doc::SCHEMA_VERSION,
                n,
                h: group.order(),
                invariant_factors: group.invariant_factors().to_vec(),
                two_torsion: group.two_torsion_count(),
                forms: group.forms().iter().map(|f| [f.a(), f.b(), f.c()]).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        _ => {
            println!("n = {n}");
            println!("h_{n} = {}", group.order());
            println!("Cl({n}) = {}", group_name(group.invariant_factors()));
            println!("|Cl({n})[2]| = {}", group.two_torsion_count());
            println!("reduced forms:");
            for f in group.forms() {
                println!("  {f}");
            }
        }
    }
    Ok(0)
}

/// Cache-aware construction of one polynomial plus the data its document
/// carries.
struct Built {
    result: ClassPolynomialResult,
    discriminant: FactoredInteger,
    from_cache: bool,
}

fn build(
    n: i64,
    kind: PolyKind,
    bits: Option<usize>,
    cache_dir: Option<&Path>,
    hilbert: Option<&ClassPolynomialResult>,
) -> Result<Built, Error> {
    if let Some(dir) = cache_dir {
        if let Some(doc) = cache::read(dir, kind, n) {
            let result = doc.to_class_polynomial_result()?;
            let delta = discriminant(&result.polynomial)?;
            return Ok(Built {
                discriminant: factorize(&delta, n as u64)?,
                result,
                from_cache: true,
            });
        }
    }
    let result = match kind {
        PolyKind::Hilbert => hilbert_class_poly(n, bits)?,
        PolyKind::Ramanujan => {
            let owned;
            let h = match hilbert {
                Some(h) => h,
                None => {
                    owned = hilbert_class_poly(n, bits)?;
                    &owned
                }
            };
            ramanujan_poly_with_hilbert(n, bits, &h.polynomial)?
        }
    };
    let delta = discriminant(&result.polynomial)?;
    let discriminant = factorize(&delta, n as u64)?;
    if let Some(dir) = cache_dir {
        let group = ClassGroup::new(n)?;
        cache::write(dir, &ResultDocument::new(&result, &discriminant, group.invariant_factors()))?;
    }
    Ok(Built { result, discriminant, from_cache: false })
}

fn cmd_polynomial(n: i64, kind: PolyKind, cli: &Cli, format: Format) -> Result<u8, Error> {
    if format == Format::Csv {
        eprintln!("error: --csv applies to `table` and `verify` only");
        return Ok(1);
    }
    let built = build(n, kind, cli.precision_bits, cli.cache.as_deref(), None)?;
    let group = ClassGroup::new(n)?;
    let document = ResultDocument::new(&built.result, &built.discriminant, group.invariant_factors());
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&document).unwrap()),
        _ => {
            let name = match kind {
                PolyKind::Hilbert => "H",
                PolyKind::Ramanujan => "P",
            };
            println!("{name}_{n}(z) = {}", built.result.polynomial);
            println!("degree = {}", document.degree);
            println!("Δ({name}_{n}) = {}", built.discriminant.signed_string("·"));
            println!("precision bits = {}", built.result.bits_used);
            println!("verified = {}", built.result.verified);
            if built.from_cache {
                println!("(from cache)");
            }
        }
    }
    Ok(0)
}

fn cmd_disc(n: i64, cli: &Cli, format: Format) -> Result<u8, Error> {
    if format == Format::Csv {
        eprintln!("error: --csv applies to `table` and `verify` only");
        return Ok(1);
    }
    let hilbert = build(n, PolyKind::Hilbert, cli.precision_bits, cli.cache.as_deref(), None)?;
    let ramanujan = build(
        n,
        PolyKind::Ramanujan,
        cli.precision_bits,
        cli.cache.as_deref(),
        Some(&hilbert.result),
    )?;
    let report = analyze_prebuilt(n, None, hilbert.result, ramanujan.result)?;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct DiscDoc {
                schema_version: u32,
                n: i64,
                delta_ramanujan: DiscriminantDoc,
                delta_hilbert: DiscriminantDoc,
                quotient: String,
                index: String,
                index_factors: DiscriminantDoc,
            }
            let d = DiscDoc {
                schema_version: doc::SCHEMA_VERSION,
                n,
                delta_ramanujan: DiscriminantDoc::from_factored(&report.delta_ramanujan_factors),
                delta_hilbert: DiscriminantDoc::from_factored(&report.delta_hilbert_factors),
                quotient: report.quotient.to_string(),
                index: report.index.to_string(),
                index_factors: DiscriminantDoc::from_factored(&report.index_factors),
            };
            println!("{}", serde_json::to_string_pretty(&d).unwrap());
        }
        _ => {
            println!("Δ(P_{n}) = {}", report.delta_ramanujan_factors.signed_string("·"));
            println!("Δ(H_{n}) = {}", report.delta_hilbert_factors.signed_string("·"));
            println!(
                "Δ(H_{n})/Δ(P_{n}) = index² with index = {}",
                report.index_factors.magnitude_string("·")
            );
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ReportDoc {
    schema_version: u32,
    n: i64,
    h: usize,
    invariant_factors: Vec<u64>,
    two_torsion: usize,
    delta_ramanujan: DiscriminantDoc,
    delta_hilbert: DiscriminantDoc,
    index: String,
    index_factors: DiscriminantDoc,
    predicted_sign: String,
    actual_sign: String,
    dorman_discriminant: Option<String>,
    dorman_ring_index: Option<String>,
    three_divides_delta_p: bool,
    three_splits: bool,
    delta_p_is_square: bool,
    real_roots_hilbert: usize,
    real_roots_ramanujan: usize,
    precision_bits_hilbert: usize,
    precision_bits_ramanujan: usize,
    table_match: Option<bool>,
    table_mismatch_field: Option<String>,
    elapsed_ms: u128,
}

impl ReportDoc {
    fn new(r: &VerificationReport) -> Self {
        let sign = |s: i8| if s < 0 { "-".to_string() } else { "+".to_string() };
        Self {
            schema_version: doc::SCHEMA_VERSION,
            n: r.n,
            h: r.h,
            invariant_factors: r.invariant_factors.clone(),
            two_torsion: r.two_torsion,
            delta_ramanujan: DiscriminantDoc::from_factored(&r.delta_ramanujan_factors),
            delta_hilbert: DiscriminantDoc::from_factored(&r.delta_hilbert_factors),
            index: r.index.to_string(),
            index_factors: DiscriminantDoc::from_factored(&r.index_factors),
            predicted_sign: sign(r.predicted_sign),
            actual_sign: sign(if r.delta_ramanujan.sign() == num_bigint::Sign::Minus {
                -1
            } else {
                1
            }),
            dorman_discriminant: r.dorman.as_ref().map(|d| d.discriminant.to_string()),
            dorman_ring_index: r.dorman.as_ref().map(|d| d.ring_index.to_string()),
            three_divides_delta_p: r.three_divides_delta_p,
            three_splits: r.split_type == classpoly::factor::SplitType::Split,
            delta_p_is_square: r.delta_p_is_square,
            real_roots_hilbert: r.real_roots_hilbert,
            real_roots_ramanujan: r.real_roots_ramanujan,
            precision_bits_hilbert: r.hilbert.bits_used,
            precision_bits_ramanujan: r.ramanujan.bits_used,
            table_match: r.table.as_ref().map(|t| t.all_ok()),
            table_mismatch_field: r
                .table
                .as_ref()
                .and_then(|t| t.first_mismatch().map(String::from)),
            elapsed_ms: r.elapsed_ms,
        }
    }
}

fn report_for(n: i64, cli: &Cli, dataset: &Dataset) -> Result<VerificationReport, Error> {
    let hilbert = build(n, PolyKind::Hilbert, cli.precision_bits, cli.cache.as_deref(), None)?;
    let ramanujan = build(
        n,
        PolyKind::Ramanujan,
        cli.precision_bits,
        cli.cache.as_deref(),
        Some(&hilbert.result),
    )?;
    analyze_prebuilt(n, Some(dataset), hilbert.result, ramanujan.result)
}

/// 0 when everything asserted (and, under --strict, everything diagnostic)
/// passed; 2 otherwise.
fn report_exit(r: &VerificationReport, strict: bool) -> u8 {
    let table_ok = r.table.as_ref().is_none_or(|t| t.all_ok());
    let strict_ok = !strict
        || (r.delta_p_is_square
            && r.delta_ramanujan_factors.is_complete()
            && r.index_factors.is_complete());
    if table_ok && strict_ok {
        0
    } else {
        2
    }
}

fn print_report_text(r: &VerificationReport) {
    let sign = |s: i8| if s < 0 { "-" } else { "+" };
    println!("n = {}", r.n);
    println!("h_{} = {}", r.n, r.h);
    println!(
        "Cl({}) = {} (invariant factors {})",
        r.n,
        group_name(&r.invariant_factors),
        invariant_string(&r.invariant_factors)
    );
    println!("|Cl({})[2]| = {}", r.n, r.two_torsion);
    println!("Δ(P_{}) = {}", r.n, r.delta_ramanujan_factors.signed_string("·"));
    println!("Δ(H_{}) = {}", r.n, r.delta_hilbert_factors.signed_string("·"));
    println!(
        "Δ(H)/Δ(P) = index², index [Z[t_n]:Z[j_n]] = {}",
        r.index_factors.magnitude_string("·")
    );
    println!(
        "sign rule: predicted {}, actual {} — ok",
        sign(r.predicted_sign),
        sign(if r.delta_ramanujan.sign() == num_bigint::Sign::Minus { -1 } else { 1 })
    );
    match &r.dorman {
        Some(d) => println!(
            "field discriminant D(Q(j_n)) = {} divides Δ(P_n) with square quotient; ring index = {}",
            d.factors.signed_string("·"),
            d.ring_index
        ),
        None => println!("field discriminant check skipped (n not squarefree)"),
    }
    println!("3 ∤ Δ(P_n): ok; 3 splits in Q(√-{}): ok", r.n);
    println!(
        "real roots: H has {}, P has {}, |Cl[2]| = {} — ok",
        r.real_roots_hilbert, r.real_roots_ramanujan, r.two_torsion
    );
    println!(
        "diagnostic: Δ(P_n) itself a perfect square: {}",
        if r.delta_p_is_square { "yes" } else { "no" }
    );
    match &r.table {
        Some(t) if t.all_ok() => println!("reference table row: all fields match"),
        Some(t) => println!(
            "reference table row: MISMATCH in {}",
            t.first_mismatch().unwrap_or("?")
        ),
        None => println!("reference table row: not present (n outside 11..=995)"),
    }
    println!(
        "precision: H at {} bits, P at {} bits; elapsed {} ms",
        r.hilbert.bits_used, r.ramanujan.bits_used, r.elapsed_ms
    );
}

fn table_row_csv(r: &VerificationReport) -> String {
    let sign = if r.delta_ramanujan.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
    let match_col = match &r.table {
        Some(t) => match t.first_mismatch() {
            None => "ok".to_string(),
            Some(f) => format!("MISMATCH({f})"),
        },
        None => "-".to_string(),
    };
    format!(
        "{},{},{},{},{},{}",
        r.n,
        r.h,
        sign,
        r.delta_ramanujan_factors.magnitude_string("×"),
        invariant_string(&r.invariant_factors),
        match_col
    )
}

fn cmd_verify(n: i64, cli: &Cli, dataset: &Dataset, format: Format) -> Result<u8, Error> {
    let report = report_for(n, cli, dataset)?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&ReportDoc::new(&report)).unwrap())
        }
        Format::Csv => {
            println!("n,h,sign,factorization,invariant_factors,match");
            println!("{}", table_row_csv(&report));
        }
        Format::Text => print_report_text(&report),
    }
    Ok(report_exit(&report, cli.strict))
}

fn cmd_table(from: i64, to: i64, cli: &Cli, dataset: &Dataset, format: Format) -> Result<u8, Error> {
    if from > to {
        eprintln!("error: --from must not exceed --to");
        return Ok(1);
    }
    let first = from + (11 - from.rem_euclid(24)).rem_euclid(24);
    let targets: Vec<i64> = (0..).map(|k| first + 24 * k).take_while(|&n| n <= to).collect();
    if targets.is_empty() {
        eprintln!("error: no n ≡ 11 (mod 24) in [{from}, {to}]");
        return Ok(1);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .map_err(|e| Error::Inconsistency(format!("thread pool: {e}")))?;
    let reports: Vec<Result<VerificationReport, Error>> = pool.install(|| {
        use rayon::prelude::*;
        targets.par_iter().map(|&n| report_for(n, cli, dataset)).collect()
    });

    let mut exit = 0u8;
    let mut rows = Vec::with_capacity(reports.len());
    for r in reports {
        match r {
            Ok(report) => {
                exit = exit.max(report_exit(&report, cli.strict));
                rows.push(report);
            }
            Err(e) => return Err(e),
        }
    }

    match format {
        Format::Json => {
            let docs: Vec<ReportDoc> = rows.iter().map(ReportDoc::new).collect();
            println!("{}", serde_json::to_string_pretty(&docs).unwrap());
        }
        Format::Csv => {
            println!("n,h,sign,factorization,invariant_factors,match");
            for r in &rows {
                println!("{}", table_row_csv(r));
            }
        }
        Format::Text => {
            println!(
                "{:>5} {:>3} {:>4}  {:<55} {:<10} {}",
                "n", "h", "sign", "factorization of |Δ(P_n)|", "Cl(n)", "match"
            );
            for r in &rows {
                let sign = if r.delta_ramanujan.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
                let match_col = match &r.table {
                    Some(t) => match t.first_mismatch() {
                        None => "ok".to_string(),
                        Some(f) => format!("MISMATCH({f})"),
                    },
                    None => "-".to_string(),
                };
                println!(
                    "{:>5} {:>3} {:>4}  {:<55} {:<10} {}",
                    r.n,
                    r.h,
                    sign,
                    r.delta_ramanujan_factors.magnitude_string("×"),
                    invariant_string(&r.invariant_factors),
                    match_col
                );
            }
        }
    }

    // Cache spot check: one random cached row is recomputed from scratch and
    // must agree with what the cache produced.
    if let Some(dir) = cli.cache.as_deref() {
        let cached: Vec<i64> = targets
            .iter()
            .copied()
            .filter(|&n| cache::read(dir, PolyKind::Ramanujan, n).is_some())
            .collect();
        if !cached.is_empty() {
            let pick = cached[std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.subsec_nanos() as usize)
                .unwrap_or(0)
                % cached.len()];
            let fresh = hilbert_class_poly(pick, cli.precision_bits)?;
            let fresh_p = ramanujan_poly_with_hilbert(pick, cli.precision_bits, &fresh.polynomial)?;
            let cached_doc = cache::read(dir, PolyKind::Ramanujan, pick).unwrap();
            if cached_doc.polynomial()? != fresh_p.polynomial {
                eprintln!(
                    "cache spot check FAILED for n={pick}: cached result differs from fresh recomputation"
                );
                return Ok(2);
            }
            eprintln!("cache spot check: n={pick} re-verified identically");
        }
    }

    Ok(exit)
}
