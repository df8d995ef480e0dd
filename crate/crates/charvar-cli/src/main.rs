//! Command-line front end: classify representations, compute lifting
//! obstructions, cohomology dimensions, trace polynomials, rank-2
//! character coordinates, the torus-bundle family census, and run the
//! built-in identity checks.
//!
//! Exit codes: 0 success, 1 identity-check failure, 2 parse error,
//! 3 invalid representation, 4 precondition violation.

use charvar::classify::classify;
use charvar::cohomology::{self, h1_dim};
use charvar::family;
use charvar::lift::{lift_obstruction, LiftError, LiftReport};
use charvar::mat2::{adjoint_so3, verify_fundamental_identity, PSL2Elt};
use charvar::rep::{RepDocument, RepError, Representation};
use charvar::sampling;
use charvar::tracepoly::{
    j_coords_from_xf2, verify_eq3, verify_eq4, xf2_coords, TraceError, TraceReducer,
};
use charvar::words::{default_names, parse_word, ParseError};
use charvar::Tolerances;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "charvar",
    version,
    about = "PSL(2,C) character-variety toolkit: trace polynomials, \
             classification, cohomology, lifting obstructions"
)]
struct Cli {
    /// Override the matrix-equality tolerance (default 1e-9).
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,

    /// Random seed for the identity sweeps (also: env CHARVAR_SEED).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Output format; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reducibility, Ad-reducibility, stabilizer and smoothness verdicts.
    Classify {
        /// Representation JSON file.
        rep_file: PathBuf,
    },
    /// Sign obstruction to lifting a PSL2 representation to SL2.
    Lift { rep_file: PathBuf },
    /// Twisted cocycle/coboundary/H¹ dimensions.
    Cohomology { rep_file: PathBuf },
    /// Census of the non-lifting torus-bundle families for moduli (m1, m2).
    Family {
        m1: u32,
        m2: u32,
        /// Trace-coordinate samples, each "re" or "re,im"; may repeat.
        #[arg(long = "z", value_name = "Z")]
        z: Vec<String>,
    },
    /// Expand tr(word) as a polynomial in square-free trace coordinates.
    Tracepoly {
        /// Word in generators a, b, c, ... with ^, * and [u,v] brackets.
        word: String,
        /// Number of generators (default: as many as the word uses).
        #[arg(long, value_name = "N")]
        rank: Option<usize>,
    },
    /// Rank-2 character coordinates (X, Y, Z, W) and derived values.
    Xf2 { rep_file: PathBuf },
    /// Exact and numeric trace-identity checks; nonzero exit on failure.
    VerifyIdentities,
}

enum CliError {
    /// Exit 2: unreadable or unparseable input.
    Parse(String),
    /// Exit 3: input parsed but is not a valid representation.
    InvalidRep(String),
    /// Exit 4: valid input outside an operation's domain.
    Precondition(String),
    /// Exit 1: an identity check failed.
    ChecksFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::ChecksFailed => 1,
            CliError::Parse(_) => 2,
            CliError::InvalidRep(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            CliError::ChecksFailed => None,
            CliError::Parse(m) | CliError::InvalidRep(m) | CliError::Precondition(m) => Some(m),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::UnsupportedSchema(_) | RepError::Presentation(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::InvalidRep(e.to_string()),
        }
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<family::FamilyError> for CliError {
    fn from(e: family::FamilyError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::NotARepresentation { .. } => CliError::InvalidRep(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(m) = e.message() {
                eprintln!("error: {m}");
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tolerances = match cli.tol {
        Some(eps) if eps > 0.0 => Tolerances::with_eps_eq(eps),
        Some(eps) => {
            return Err(CliError::Parse(format!("--tol must be positive, got {eps}")));
        }
        None => Tolerances::default(),
    };
    let seed = cli
        .seed
        .or_else(|| {
            std::env::var("CHARVAR_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(17);
    let format = cli.format;
    match cli.cmd {
        Cmd::Classify { rep_file } => cmd_classify(&rep_file, tolerances, format),
        Cmd::Lift { rep_file } => cmd_lift(&rep_file, tolerances, format),
        Cmd::Cohomology { rep_file } => cmd_cohomology(&rep_file, tolerances, format),
        Cmd::Family { m1, m2, z } => cmd_family(m1, m2, &z, format),
        Cmd::Tracepoly { word, rank } => cmd_tracepoly(&word, rank, format),
        Cmd::Xf2 { rep_file } => cmd_xf2(&rep_file, tolerances, format),
        Cmd::VerifyIdentities => cmd_verify_identities(seed, format),
    }
}

/// Loads, parses and fully validates a representation file.
fn load_rep(path: &Path, tol: Tolerances) -> Result<Representation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: RepDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let rho = doc.into_representation(tol)?;
    if !rho.is_valid() {
        return Err(CliError::InvalidRep(format!(
            "a relator does not evaluate to the required central element (flavor {:?})",
            rho.flavor()
        )));
    }
    Ok(rho)
}

/// Serializes a payload as a JSON document with sorted keys and the
/// schema version stamped at the top level.
fn print_json<T: Serialize>(payload: &T) {
    let mut value = serde_json::to_value(payload).expect("reports serialize cleanly");
    value
        .as_object_mut()
        .expect("top-level JSON documents are objects")
        .insert("schema".into(), serde_json::json!(1));
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
}

/// Shortest clean decimal for a float (Display round-trips f64).
fn fmt_f64(x: f64) -> String {
    // Avoid "-0" noise from signed zeros.
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Six decimals with trailing zeros trimmed, for human-facing tables.
fn fmt_f64_short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Complex formatting without commas (CSV-safe): "re", "re+imi", "re-imi".
fn fmt_complex_with(z: Complex64, f: fn(f64) -> String) -> String {
    if z.im.abs() <= 1e-12 {
        f(z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", f(z.re), f(z.im))
    } else {
        format!("{}-{}i", f(z.re), f(-z.im))
    }
}

/// Full-precision complex rendering (machine-consumable CSV).
fn fmt_complex(z: Complex64) -> String {
    fmt_complex_with(z, fmt_f64)
}

/// Rounded complex rendering for aligned text tables.
fn fmt_complex_short(z: Complex64) -> String {
    fmt_complex_with(z, fmt_f64_short)
}

fn unsupported_format(cmd: &str, fmt: &str) -> CliError {
    CliError::Parse(format!("{cmd} does not support --format {fmt}"))
}

fn cmd_classify(path: &Path, tol: Tolerances, format: Option<Format>) -> Result<(), CliError> {
    let rho = load_rep(path, tol)?;
    let report = classify(&rho);
    match format.unwrap_or(Format::Json) {
        Format::Json => print_json(&report),
        Format::Text => {
            println!("reducible: {}", report.reducible);
            println!("ad_reducible: {}", report.ad_reducible);
            println!("is_trivial_character: {}", report.is_trivial_character);
            println!("klein4_image: {}", report.klein4_image);
            println!("stabilizer_type: {:?}", report.stabilizer_type);
            println!("singular_verdict: {:?}", report.singular_verdict);
        }
        Format::Csv => return Err(unsupported_format("classify", "csv")),
    }
    Ok(())
}

fn lift_text(report: &LiftReport) -> String {
    let mut out = String::new();
    let signs: Vec<String> = report.relator_signs.iter().map(|s| s.to_string()).collect();
    writeln!(out, "relator signs: [{}]", signs.join(" ")).unwrap();
    writeln!(
        out,
        "F2 system ({} relators x {} generators):",
        report.system.nrows(),
        report.system.ncols()
    )
    .unwrap();
    for i in 0..report.system.nrows() {
        writeln!(out, "  {}", report.system.row(i)).unwrap();
    }
    writeln!(out, "rhs: {}", report.rhs).unwrap();
    writeln!(out, "liftable: {}", report.liftable).unwrap();
    match (&report.solution, report.lift_class_count) {
        (Some(sol), Some(count)) => {
            writeln!(out, "sign flip solution: {sol}").unwrap();
            writeln!(out, "lift classes: {count}").unwrap();
        }
        _ => writeln!(out, "lift classes: none").unwrap(),
    }
    out
}

fn cmd_lift(path: &Path, tol: Tolerances, format: Option<Format>) -> Result<(), CliError> {
    let rho = load_rep(path, tol)?;
    let report = lift_obstruction(&rho)?;
    match format.unwrap_or(Format::Json) {
        Format::Json => print_json(&report),
        Format::Text => print!("{}", lift_text(&report)),
        Format::Csv => return Err(unsupported_format("lift", "csv")),
    }
    Ok(())
}

fn cmd_cohomology(path: &Path, tol: Tolerances, format: Option<Format>) -> Result<(), CliError> {
    let rho = load_rep(path, tol)?;
    let report = h1_dim(&rho);
    match format.unwrap_or(Format::Json) {
        Format::Json => print_json(&report),
        Format::Text => {
            println!("dim_z1: {}", report.dim_z1);
            println!("dim_b1: {}", report.dim_b1);
            println!("dim_h1: {}", report.dim_h1);
            match report.block_dims {
                Some(b) => {
                    println!(
                        "h0 block (z1, b1, h1): ({}, {}, {})",
                        b.h0.0, b.h0.1, b.h0.2
                    );
                    println!(
                        "h+/h- block (z1, b1, h1): ({}, {}, {})",
                        b.hplus_hminus.0, b.hplus_hminus.1, b.hplus_hminus.2
                    );
                }
                None => println!("blocks: image does not preserve the sl2 splitting"),
            }
        }
        Format::Csv => {
            let class = serde_json::to_value(classify(&rho).stabilizer_type)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string();
            println!("{}", cohomology::CSV_HEADER);
            println!("{}", cohomology::csv_row(rho.rank(), &class, &report));
        }
    }
    Ok(())
}

fn parse_z(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Parse(format!("invalid z value {text:?}; expected \"re\" or \"re,im\""));
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(Complex64::new(text.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}

fn cmd_family(m1: u32, m2: u32, z: &[String], format: Option<Format>) -> Result<(), CliError> {
    let z_samples = if z.is_empty() {
        family::default_z_samples()
    } else {
        z.iter().map(|s| parse_z(s)).collect::<Result<Vec<_>, _>>()?
    };
    let census = family::component_census(m1, m2, &z_samples)?;
    match format.unwrap_or(Format::Text) {
        Format::Json => print_json(&census),
        Format::Csv => {
            println!("m1,m2,p1,p2,tau_alpha,tau_beta,liftable");
            for r in &census.rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.m1,
                    r.m2,
                    r.p1,
                    r.p2,
                    fmt_complex(r.tau_alpha),
                    fmt_complex(r.tau_beta),
                    r.liftable
                );
            }
        }
        Format::Text => {
            let mut rows: Vec<[String; 7]> = vec![[
                "m1".into(),
                "m2".into(),
                "p1".into(),
                "p2".into(),
                "tau_alpha".into(),
                "tau_beta".into(),
                "liftable".into(),
            ]];
            for r in &census.rows {
                rows.push([
                    r.m1.to_string(),
                    r.m2.to_string(),
                    r.p1.to_string(),
                    r.p2.to_string(),
                    fmt_complex_short(r.tau_alpha),
                    fmt_complex_short(r.tau_beta),
                    r.liftable.to_string(),
                ]);
            }
            let widths: Vec<usize> = (0..7)
                .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap())
                .collect();
            for r in &rows {
                let line: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(cell, &w)| format!("{cell:<w$}"))
                    .collect();
                println!("{}", line.join("  ").trim_end());
            }
            println!(
                "distinct (tau_alpha, tau_beta) pairs: {}",
                census.distinct_count
            );
        }
    }
    Ok(())
}

fn cmd_tracepoly(word: &str, rank: Option<usize>, format: Option<Format>) -> Result<(), CliError> {
    // Parse over the full default alphabet, then check against the rank.
    let names = default_names(26);
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let w = parse_word(word, &name_refs)?;
    let needed = w.max_generator().map_or(0, |g| g + 1);
    let rank = rank.unwrap_or(needed.max(1));
    if needed > rank {
        return Err(CliError::Precondition(format!(
            "word uses {needed} generators but rank is {rank}"
        )));
    }
    let mut reducer = TraceReducer::new(rank);
    let poly = reducer.reduce_trace(&w)?;
    let rendered = poly.format(&default_names(rank));
    match format.unwrap_or(Format::Text) {
        Format::Text => println!("{rendered}"),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                word: &'a str,
                rank: usize,
                polynomial: String,
                variables: Vec<String>,
            }
            let variables = poly
                .variables()
                .into_iter()
                .map(|v| v.display_name(&default_names(rank)))
                .collect();
            print_json(&Out {
                word,
                rank,
                polynomial: rendered,
                variables,
            });
        }
        Format::Csv => return Err(unsupported_format("tracepoly", "csv")),
    }
    Ok(())
}

fn cmd_xf2(path: &Path, tol: Tolerances, format: Option<Format>) -> Result<(), CliError> {
    let rho = load_rep(path, tol)?;
    let (x, y, z, w) = xf2_coords(&rho)?;
    let (_, _, _, j_ab_inv) = j_coords_from_xf2(x, y, z, w);
    let surface_residual = (w * w - x * y * z).norm();
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                x: Complex64,
                y: Complex64,
                z: Complex64,
                w: Complex64,
                j_ab_inv: Complex64,
                surface_residual: f64,
            }
            print_json(&Out {
                x,
                y,
                z,
                w,
                j_ab_inv,
                surface_residual,
            });
        }
        Format::Text => {
            println!("X = tau(a): {}", fmt_complex(x));
            println!("Y = tau(b): {}", fmt_complex(y));
            println!("Z = tau(ab): {}", fmt_complex(z));
            println!("W = tr(a)tr(b)tr(ab): {}", fmt_complex(w));
            println!("J(ab^-1) = XY + Z - 2W: {}", fmt_complex(j_ab_inv));
            println!("|W^2 - XYZ|: {:.3e}", surface_residual);
        }
        Format::Csv => return Err(unsupported_format("xf2", "csv")),
    }
    Ok(())
}

fn cmd_verify_identities(seed: u64, format: Option<Format>) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut worst_adjoint: f64 = 0.0;
    for _ in 0..1000 {
        let x = sampling::bounded_random_sl2(&mut rng);
        let ad_trace = adjoint_so3(&PSL2Elt::new(x)).trace();
        let t = x.trace();
        worst_adjoint = worst_adjoint
            .max((ad_trace - (t * t - Complex64::ONE)).norm())
            .max((ad_trace - ((x * x).trace() + Complex64::ONE)).norm());
    }
    let mut worst_fundamental: f64 = 0.0;
    for _ in 0..1000 {
        let a = sampling::bounded_random_sl2(&mut rng);
        let b = sampling::bounded_random_sl2(&mut rng);
        worst_fundamental = worst_fundamental.max(verify_fundamental_identity(&a, &b));
    }

    #[derive(Serialize)]
    struct Check {
        name: &'static str,
        pass: bool,
        residual: Option<f64>,
    }
    let checks = vec![
        Check {
            name: "trace-of-adjoint sweep (1000 samples)",
            pass: worst_adjoint <= 1e-8,
            residual: Some(worst_adjoint),
        },
        Check {
            name: "fundamental trace identity sweep (1000 samples)",
            pass: worst_fundamental <= 1e-8,
            residual: Some(worst_fundamental),
        },
        Check {
            name: "sigma product expansion (exact)",
            pass: verify_eq3(),
            residual: None,
        },
        Check {
            name: "commutator trace expansion (exact)",
            pass: verify_eq4(),
            residual: None,
        },
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    match format.unwrap_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                seed: u64,
                checks: Vec<Check>,
                all_pass: bool,
            }
            print_json(&Out {
                seed,
                checks,
                all_pass,
            });
        }
        Format::Text => {
            for c in &checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                match c.residual {
                    Some(r) => println!("{}: {verdict} (max residual {r:.3e})", c.name),
                    None => println!("{}: {verdict}", c.name),
                }
            }
        }
        Format::Csv => return Err(unsupported_format("verify-identities", "csv")),
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}
