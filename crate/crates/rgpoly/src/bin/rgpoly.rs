//! Command-line interface: compute Poincaré polynomials and dessin counts,
//! run the verification suites, and dump intersection-number tables.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or
//! unstable type, 3 internal invariant failure, 4 enumeration guard
//! exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rgpoly::analysis::{
    self, extract_intersection_numbers, string_dilaton_check, verify_euler, verify_laplace,
    IntersectionTable, Report,
};
use rgpoly::cache::DiskCache;
use rgpoly::error::Error;
use rgpoly::lattice::CountTable;
use rgpoly::recursion::{euler_level, is_stable, Engine};
use rgpoly::ribbon::{Oracle, DEFAULT_GUARD_E};
use rgpoly::LaurentPoly;

#[derive(Parser)]
#[command(
    name = "rgpoly",
    version,
    about = "Poincaré polynomials of the moduli of curves, dessin counts, and their cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Poincaré polynomial F_{g,n}.
    ComputeF(ComputeF),
    /// Compute dessin counts N_{g,n}(p), one value or a whole box.
    ComputeN(ComputeN),
    /// Run verification suites and emit a JSON report.
    Verify(Verify),
    /// Extract psi-class intersection numbers from the leading terms.
    Intersections(Intersections),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Latex,
    Pretty,
}

#[derive(Args)]
struct Common {
    /// Genus.
    #[arg(long = "g")]
    g: u32,
    /// Number of boundary components (marked points).
    #[arg(long = "n")]
    n: u32,
    /// Directory for the persistent cache.
    #[arg(long = "cache-dir", env = "RGREC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeF {
    #[command(flatten)]
    common: Common,
    #[arg(long = "format", value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ComputeN {
    #[command(flatten)]
    common: Common,
    /// Perimeter vector, comma-separated (e.g. 2,2,2).
    #[arg(long = "p", value_delimiter = ',')]
    p: Option<Vec<u32>>,
    /// Tabulate the whole box 1..=SIZE in every coordinate.
    #[arg(long = "box", conflicts_with = "p")]
    box_size: Option<u32>,
    #[arg(long = "format", value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct Verify {
    #[command(flatten)]
    common: Common,
    /// Which checks to run.
    #[arg(long = "suite", value_enum, default_value = "all")]
    suite: Suite,
    /// Per-variable series truncation order for the Laplace check.
    #[arg(long = "truncation", default_value_t = 10)]
    truncation: u32,
    /// Edge-count guard for the brute-force enumerator.
    #[arg(long = "guard-e", default_value_t = DEFAULT_GUARD_E)]
    guard_e: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Euler,
    Laplace,
    Oracle,
    Intersection,
}

#[derive(Args)]
struct Intersections {
    #[command(flatten)]
    common: Common,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::GuardExceeded { .. } => 4,
        Error::InvariantViolation { .. }
        | Error::LogTerm { .. }
        | Error::OddExponent { .. }
        | Error::NonLaurent(_)
        | Error::MissingDependency { .. }
        | Error::InconsistentOrbit(_)
        | Error::Precondition(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ComputeF(args) => cmd_compute_f(args),
        Command::ComputeN(args) => cmd_compute_n(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Intersections(args) => cmd_intersections(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn open_cache(dir: &Option<PathBuf>) -> Result<Option<DiskCache>, Error> {
    match dir {
        Some(d) => Ok(Some(DiskCache::new(d)?)),
        None => Ok(None),
    }
}

/// Fetch F_{g,n} through the engine, priming the memo table from the disk
/// cache first and persisting everything newly computed afterwards.
fn obtain_f(
    engine: &Engine,
    cache: &Option<DiskCache>,
    g: u32,
    n: u32,
) -> Result<std::sync::Arc<LaurentPoly>, Error> {
    if let Some(c) = cache {
        c.load_all(engine)?;
    }
    let f = engine.compute_f(g, n)?;
    if let Some(c) = cache {
        c.store_all(engine)?;
    }
    Ok(f)
}

fn cmd_compute_f(args: ComputeF) -> Result<ExitCode, Error> {
    let Common { g, n, cache_dir } = args.common;
    let cache = open_cache(&cache_dir)?;
    let engine = Engine::new();
    let f = obtain_f(&engine, &cache, g, n)?;
    match args.format {
        Format::Json => println!("{}", f.to_canonical_json()),
        Format::Latex => println!("{}", f.to_latex()),
        Format::Pretty => println!("{f}"),
        Format::Tsv => print!("{}", f.to_tsv()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_compute_n(args: ComputeN) -> Result<ExitCode, Error> {
    let Common { g, n, cache_dir } = args.common;
    let cache = open_cache(&cache_dir)?;
    let counts = CountTable::new();
    if let Some(c) = &cache {
        c.load_counts(&counts)?;
    }
    match (args.p, args.box_size) {
        (Some(p), None) => {
            let v = counts.compute_n(g, n, &p)?;
            match args.format {
                Format::Pretty | Format::Latex => println!("{v}"),
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "g": g, "n": n, "p": p, "value": v.to_frac_string()
                        })
                    );
                }
                Format::Tsv => {
                    let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    println!("{g}\t{n}\t{}\t{}", ps.join("\t"), v.to_frac_string());
                }
            }
        }
        (None, Some(size)) => {
            if size == 0 {
                return Err(Error::InvalidPerimeter("box size must be positive".into()));
            }
            print!("{}", counts.box_tsv(g, n, size)?);
        }
        _ => {
            return Err(Error::InvalidPerimeter(
                "exactly one of --p or --box is required".into(),
            ));
        }
    }
    if let Some(c) = &cache {
        c.store_counts(&counts)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Extract intersection tables for every stable type up to the level of
/// `(g, n)` and merge them, so the string/dilaton identities have their
/// lower entries available.
fn merged_intersections(engine: &Engine, g: u32, n: u32) -> Result<IntersectionTable, Error> {
    let mut table = IntersectionTable::new();
    for (gg, nn) in Engine::keys_up_to_level(euler_level(g, n)) {
        let f = engine.compute_f(gg, nn)?;
        table.merge(extract_intersection_numbers(gg, nn, &f)?)?;
    }
    Ok(table)
}

fn cmd_verify(args: Verify) -> Result<ExitCode, Error> {
    let Common { g, n, cache_dir } = args.common;
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let cache = open_cache(&cache_dir)?;
    let engine = Engine::new();
    let counts = CountTable::new();
    if let Some(c) = &cache {
        c.load_counts(&counts)?;
    }
    let mut report = Report::default();
    let run_euler = matches!(args.suite, Suite::All | Suite::Euler);
    let run_laplace = matches!(args.suite, Suite::All | Suite::Laplace);
    let run_oracle = matches!(args.suite, Suite::All | Suite::Oracle);
    let run_intersection = matches!(args.suite, Suite::All | Suite::Intersection);

    if run_euler || run_laplace || run_intersection {
        let f = obtain_f(&engine, &cache, g, n)?;
        if run_euler {
            report.push(verify_euler(g, n, &f));
        }
        if run_laplace {
            report.push(verify_laplace(g, n, &f, &counts, args.truncation));
        }
        if run_intersection {
            let table = merged_intersections(&engine, g, n)?;
            report.push(analysis::CheckResult::pass("intersection-extract", g, n));
            report.extend(string_dilaton_check(&table));
        }
    }
    if run_oracle {
        let oracle = Oracle::new(g, n, args.guard_e)?;
        let f = obtain_f(&engine, &cache, g, n)?;
        report.push(if oracle.poincare()? == *f {
            analysis::CheckResult::pass("oracle-poincare", g, n)
        } else {
            analysis::CheckResult::fail(
                "oracle-poincare",
                g,
                n,
                "graph-sum polynomial differs from the recursion".into(),
            )
        });
        let budget = 2 * args.truncation;
        let mismatch = compare_counts(&oracle, &counts, g, n, budget)?;
        report.push(match mismatch {
            None => analysis::CheckResult::pass("oracle-counts", g, n),
            Some(d) => analysis::CheckResult::fail("oracle-counts", g, n, d),
        });
        let chi = analysis::euler_char_hz(g, n)?;
        let expected = if n % 2 == 0 { chi } else { -chi };
        report.push(if oracle.euler_characteristic() == expected {
            analysis::CheckResult::pass("oracle-euler", g, n)
        } else {
            analysis::CheckResult::fail(
                "oracle-euler",
                g,
                n,
                "alternating graph count differs from the closed form".into(),
            )
        });
    }

    if let Some(c) = &cache {
        c.store_counts(&counts)?;
    }
    println!("{}", report.to_json());
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// First mismatch between the recursion counts and the oracle counts over
/// all perimeter vectors with total at most `budget`.
fn compare_counts(
    oracle: &Oracle,
    counts: &CountTable,
    g: u32,
    n: u32,
    budget: u32,
) -> Result<Option<String>, Error> {
    let nv = n as usize;
    let mut p = vec![1u32; nv];
    loop {
        if p.iter().sum::<u32>() <= budget {
            let expected = oracle.count_lattice_points(&p);
            let got = counts.compute_n(g, n, &p)?;
            if expected != got {
                return Ok(Some(format!(
                    "at p = {p:?}: recursion {got}, enumeration {expected}"
                )));
            }
        }
        let mut i = nv;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if p[i] < budget {
                p[i] += 1;
                for x in &mut p[i + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

fn cmd_intersections(args: Intersections) -> Result<ExitCode, Error> {
    let Common { g, n, cache_dir } = args.common;
    let cache = open_cache(&cache_dir)?;
    let engine = Engine::new();
    let f = obtain_f(&engine, &cache, g, n)?;
    let table = extract_intersection_numbers(g, n, &f)?;
    print!("{}", table.to_tsv());
    Ok(ExitCode::SUCCESS)
}
