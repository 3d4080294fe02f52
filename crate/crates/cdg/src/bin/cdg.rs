//! Command-line front end: load categories and modules from JSON files, run
//! validators, builders, and engines, and emit tables as text or JSON.
//!
//! Exit codes: 0 success, 1 mathematical failure or unequal comparison,
//! 2 usage/parse error, 3 unsupported case.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cdg::bicomplex::{
    bar_bicomplex, cobar_bicomplex, hochschild_bicomplex, HochschildVariant,
};
use cdg::category::CdgCategory;
use cdg::engines::{self, DEFAULT_MAX_DEPTH, DEFAULT_TRUNCATION};
use cdg::io::{category_from_path, dump_bicomplex, module_from_path};
use cdg::module::{diagonal_bimodule, free_cdg_on_generators, CdgModule, Side};
use cdg::report::{CompareReport, HomologyReport};
use cdg::resolution::{check_resolution, projective_resolution};
use cdg::scalar::parse_scalar;
use cdg::CdgError;

#[derive(Parser)]
#[command(name = "cdg", version, about = "Exact computations with curved DG categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    First,
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Homology,
    Cohomology,
}

impl Variant {
    fn hoch(self) -> HochschildVariant {
        match self {
            Variant::Homology => HochschildVariant::Homology,
            Variant::Cohomology => HochschildVariant::Cohomology,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Bar,
    Cobar,
    HochschildHomology,
    HochschildCohomology,
}

#[derive(Args)]
struct ReportOut {
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate category files (and optionally modules over the first one).
    Validate {
        /// Category JSON files.
        paths: Vec<PathBuf>,
        /// Module JSON files, validated over the first category.
        #[arg(long = "module")]
        modules: Vec<PathBuf>,
    },
    /// Hochschild invariants of a category.
    Hh {
        category: PathBuf,
        #[arg(long, value_enum, default_value = "second")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "homology")]
        variant: Variant,
        /// Coefficient bimodule over the enveloping category; defaults to
        /// the diagonal bimodule.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncate: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Tor of a right and a left module.
    Tor {
        category: PathBuf,
        /// Right module (first argument).
        n: PathBuf,
        /// Left module (second argument).
        m: PathBuf,
        #[arg(long, value_enum, default_value = "second")]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncate: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Ext of two left modules.
    Ext {
        category: PathBuf,
        /// Left module (first argument, resolved).
        l: PathBuf,
        /// Left module (second argument).
        m: PathBuf,
        #[arg(long, value_enum, default_value = "second")]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncate: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Minimal projective resolution of a module.
    Resolve {
        category: PathBuf,
        module: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Dump a bicomplex as matrix triplet files plus a manifest.
    ComplexDump {
        category: PathBuf,
        #[arg(long, value_enum)]
        builder: Builder,
        /// First module argument (bar: right module N; cobar: left module L).
        #[arg(long)]
        first: Option<PathBuf>,
        /// Second module argument (left module M).
        #[arg(long)]
        second: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncate: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Property suites.
    Check {
        /// Suite name: `bicomplex-identities`.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 5)]
        truncate: usize,
    },
    /// Comparison engines.
    Compare {
        #[command(subcommand)]
        which: CompareCmd,
    },
}

#[derive(Subcommand)]
enum CompareCmd {
    /// HH of B against HH of the DG-category of CDG-modules over B.
    Bvsc {
        category: PathBuf,
        /// Module-category objects: right modules with presentations.
        #[arg(long = "object")]
        objects: Vec<PathBuf>,
        /// Add a free module of this rank as an object (repeatable).
        #[arg(long = "free-rank")]
        free_ranks: Vec<usize>,
        #[arg(long, value_enum, default_value = "homology")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Invariance of second-kind HH under a curvature shift by c.id.
    CurvatureShift {
        category: PathBuf,
        /// Shift scalar, e.g. "1", "-1", "2/3".
        #[arg(long)]
        shift: String,
        #[arg(long, value_enum, default_value = "homology")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Compatibility of the Z -> Z/2 pushforward with Hochschild data.
    GradingPushforward {
        category: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncate: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        out: ReportOut,
    },
}

fn exit_code_of(e: &CdgError) -> ExitCode {
    match e {
        CdgError::Parse(_) | CdgError::Io(_) => ExitCode::from(2),
        CdgError::Unsupported(_) => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn print_report(rep: &HomologyReport) {
    println!("method: {}", rep.method.label());
    if let Some(t) = rep.truncation {
        println!("truncation: {t}");
    }
    if rep.table.is_empty() {
        println!("table: (zero)");
    } else {
        println!("table:");
        for (deg, dim) in &rep.table {
            println!("  degree {deg}: dim {dim}");
        }
    }
    for note in &rep.notes {
        println!("note: {note}");
    }
}

fn print_compare(rep: &CompareReport) {
    println!("left:");
    print_report(&rep.left);
    println!("right:");
    print_report(&rep.right);
    println!("verdict: {}", if rep.equal { "EQUAL" } else { "UNEQUAL" });
    for note in &rep.notes {
        println!("note: {note}");
    }
}

fn write_json(path: &Option<PathBuf>, value: &Value) -> Result<(), CdgError> {
    if let Some(path) = path {
        std::fs::write(path, serde_json::to_string_pretty(value).unwrap() + "\n")?;
    }
    Ok(())
}

/// Load a coefficient bimodule over the enveloping category of `b`.
fn load_envelope_module(b: &CdgCategory, path: &PathBuf) -> Result<CdgModule, CdgError> {
    let (e, _) = diagonal_bimodule(b);
    module_from_path(&e, path)
}

fn run(cli: Cli) -> Result<ExitCode, CdgError> {
    match cli.command {
        Command::Validate { paths, modules } => {
            if paths.is_empty() {
                return Err(CdgError::Parse("validate needs at least one category file".into()));
            }
            let mut all_ok = true;
            let mut first: Option<CdgCategory> = None;
            for p in &paths {
                let cat = category_from_path(p)?;
                let report = cat.validate();
                if report.ok() {
                    println!("{}: ok ({} objects, {} basis morphisms)",
                        p.display(), cat.num_objects(), cat.basis.len());
                } else {
                    all_ok = false;
                    println!("{}: FAILED", p.display());
                    for f in &report.failures {
                        println!("  {f}");
                    }
                }
                if first.is_none() {
                    first = Some(cat);
                }
            }
            let cat = first.unwrap();
            for p in &modules {
                let m = module_from_path(&cat, p)?;
                let report = m.validate(&cat, true);
                if report.ok() {
                    println!("{}: ok ({} elements)", p.display(), m.dim());
                } else {
                    all_ok = false;
                    println!("{}: FAILED", p.display());
                    for f in &report.failures {
                        println!("  {f}");
                    }
                }
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Hh { category, kind, variant, coefficients, truncate, max_depth, out } => {
            let b = category_from_path(&category)?;
            let coeff = match &coefficients {
                Some(p) => Some(load_envelope_module(&b, p)?),
                None => None,
            };
            let rep = match kind {
                Kind::Second => engines::hh_second_kind(&b, coeff.as_ref(), variant.hoch(), max_depth)?,
                Kind::First => engines::hh_first_kind(&b, coeff.as_ref(), variant.hoch(), truncate)?,
            };
            print_report(&rep);
            write_json(&out.json, &rep.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tor { category, n, m, kind, truncate, max_depth, out } => {
            let cat = category_from_path(&category)?;
            let n = module_from_path(&cat, &n)?;
            let m = module_from_path(&cat, &m)?;
            let rep = match kind {
                Kind::Second => engines::tor_second_kind(&cat, &n, &m, max_depth)?,
                Kind::First => engines::tor_first_kind(&cat, &n, &m, truncate)?,
            };
            print_report(&rep);
            write_json(&out.json, &rep.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ext { category, l, m, kind, truncate, max_depth, out } => {
            let cat = category_from_path(&category)?;
            let l = module_from_path(&cat, &l)?;
            let m = module_from_path(&cat, &m)?;
            let rep = match kind {
                Kind::Second => engines::ext_second_kind(&cat, &l, &m, max_depth)?,
                Kind::First => engines::ext_first_kind(&cat, &l, &m, truncate)?,
            };
            print_report(&rep);
            write_json(&out.json, &rep.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolve { category, module, max_depth, out } => {
            let cat = category_from_path(&category)?;
            let m = module_from_path(&cat, &module)?;
            let res = projective_resolution(&cat, &m, max_depth)?;
            let dims: Vec<usize> = res.terms.iter().map(|t| t.dim()).collect();
            if res.complete {
                check_resolution(&cat, &m, &res)?;
                println!("complete, length {}", res.length());
            } else {
                println!("incomplete at depth {}", max_depth);
            }
            println!("term dimensions: {dims:?}");
            write_json(&out.json, &json!({
                "complete": res.complete,
                "length": if res.complete { Some(res.length()) } else { None },
                "depth_exhausted": res.depth_exhausted,
                "term_dimensions": dims,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ComplexDump { category, builder, first, second, truncate, out } => {
            let cat = category_from_path(&category)?;
            let need = |p: &Option<PathBuf>, what: &str| -> Result<CdgModule, CdgError> {
                let p = p.as_ref().ok_or_else(|| {
                    CdgError::Parse(format!("this builder needs --{what}"))
                })?;
                module_from_path(&cat, p)
            };
            let bc = match builder {
                Builder::Bar => {
                    let n = need(&first, "first")?;
                    let m = need(&second, "second")?;
                    bar_bicomplex(&cat, &n, &m, truncate)?
                }
                Builder::Cobar => {
                    let l = need(&first, "first")?;
                    let m = need(&second, "second")?;
                    cobar_bicomplex(&cat, &l, &m, truncate)?
                }
                Builder::HochschildHomology | Builder::HochschildCohomology => {
                    let variant = match builder {
                        Builder::HochschildHomology => HochschildVariant::Homology,
                        _ => HochschildVariant::Cohomology,
                    };
                    let m = match &first {
                        Some(p) => load_envelope_module(&cat, p)?,
                        None => diagonal_bimodule(&cat).1,
                    };
                    hochschild_bicomplex(&cat, &m, variant, truncate)?
                }
            };
            let identities = bc.check_identities();
            dump_bicomplex(&out, &bc)?;
            println!("wrote {} (identities: {})", out.display(),
                if identities.ok() { "ok" } else { "FAILED" });
            Ok(if identities.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Check { suite, seed, cases, truncate } => match suite.as_str() {
            "bicomplex-identities" => {
                let n = engines::bicomplex_identity_cases(seed, cases, truncate)?;
                println!("pass ({n} cases, seed {seed}, truncation {truncate})");
                Ok(ExitCode::SUCCESS)
            }
            other => Err(CdgError::Parse(format!("unknown suite {other:?}"))),
        },
        Command::Compare { which } => match which {
            CompareCmd::Bvsc { category, objects, free_ranks, variant, max_depth, out } => {
                let b = category_from_path(&category)?;
                let mut objs: Vec<CdgModule> = Vec::new();
                for p in &objects {
                    objs.push(module_from_path(&b, p)?);
                }
                for &r in &free_ranks {
                    let gens: Vec<(usize, cdg::Degree)> =
                        (0..r.max(1)).map(|_| (0, b.grading.zero())).collect();
                    objs.push(free_cdg_on_generators(&b, Side::Right, &gens)?);
                }
                if objs.is_empty() {
                    objs.push(free_cdg_on_generators(
                        &b,
                        Side::Right,
                        &[(0, b.grading.zero())],
                    )?);
                }
                let rep = engines::compare_hh_b_vs_c(&b, &objs, variant.hoch(), max_depth)?;
                print_compare(&rep);
                write_json(&out.json, &rep.to_json())?;
                Ok(if rep.equal { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
            CompareCmd::CurvatureShift { category, shift, variant, max_depth, out } => {
                let b = category_from_path(&category)?;
                let c = parse_scalar(b.field, &shift)?;
                let rep = engines::curvature_shift_check(&b, &c, variant.hoch(), max_depth)?;
                println!("envelope identity: {}",
                    if rep.envelope_identity { "holds" } else { "FAILED" });
                print_compare(&rep.compare);
                let ok = rep.envelope_identity && rep.compare.equal;
                write_json(&out.json, &json!({
                    "envelope_identity": rep.envelope_identity,
                    "compare": rep.compare.to_json(),
                }))?;
                Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
            CompareCmd::GradingPushforward { category, truncate, max_depth, out } => {
                let b = category_from_path(&category)?;
                let rep = engines::pushforward_compat_check(&b, truncate, max_depth)?;
                println!("bicomplex identity: {}",
                    if rep.bicomplex_identity { "holds" } else { "FAILED" });
                let mut ok = rep.bicomplex_identity;
                match &rep.folded_tables {
                    Some(cmp) => {
                        print_compare(cmp);
                        ok = ok && cmp.equal;
                    }
                    None => println!("folded tables: not applicable"),
                }
                for note in &rep.notes {
                    println!("note: {note}");
                }
                write_json(&out.json, &json!({
                    "bicomplex_identity": rep.bicomplex_identity,
                    "folded_tables": rep.folded_tables.as_ref().map(|c| c.to_json()),
                    "notes": rep.notes,
                }))?;
                Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}
