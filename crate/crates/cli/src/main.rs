mod records;
mod report;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cmpol::analytic::bigcomplex::real;
use cmpol::analytic::{analyze, assess, default_max_height, Verdict, DEFAULT_PRECISION};
use cmpol::classify::{enumerate_polarizations, enumerate_polarizations_any, ClassificationResult};
use cmpol::fixtures::curve_table;
use cmpol::hermitian::is_congruent;
use cmpol::moduli::{certify, verify_witness, ModuliCertificate};
use cmpol::quad_order::{scan_discriminants, Discriminant, OrderElement};
use cmpol::{Error, Result};
use serde::Serialize;

use records::{curve_text, FormRecord, ModuliRecord, WitnessRecord};

const MAX_SCAN_BOUND: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "cmpol", version, about = "Principal polarizations on squares of CM elliptic curves")]
struct Cli {
    /// Worker threads for the parallel parts (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List fundamental discriminants whose class group has exponent at most 2.
    Scan {
        #[arg(long)]
        max_abs_disc: u64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the principal polarizations of one discriminant.
    Polarizations {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Run even when the class group has exponent greater than 2; the
        /// listing is then not known to be complete.
        #[arg(long)]
        force: bool,
    },
    /// Decide field of moduli and field of definition for each indecomposable polarization.
    Moduli {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        json: bool,
    },
    /// Compute the Igusa invariants of one indecomposable polarization and
    /// compare them with the bundled curves over Q.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Position among the indecomposable polarizations, in canonical order.
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Working precision in bits.
        #[arg(long, env = "CMPOL_PRECISION", default_value_t = DEFAULT_PRECISION)]
        precision: usize,
        #[arg(long)]
        json: bool,
    },
    /// Counts for every exponent-2 discriminant, checked against the bundled tables.
    Report {
        /// Only discriminants with |D| <= 600.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Outcome of a subcommand that ran to completion.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDiscriminant(_) | Error::ExponentTooLarge(_) | Error::InvalidForm(_) | Error::InvalidIdeal(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = String::new();
    let res = run(cli.command, &mut out);
    print!("{out}");
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, out: &mut String) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Scan { max_abs_disc, json } => cmd_scan(max_abs_disc, json, out),
        Command::Polarizations { disc, format, force } => cmd_polarizations(disc, format, force, out),
        Command::Moduli { disc, json } => cmd_moduli(disc, json, out),
        Command::Invariants { disc, index, precision, json } => cmd_invariants(disc, index, precision, json, out),
        Command::Report { quick, json } => cmd_report(quick, json, out),
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ScanRecord {
    disc: i64,
    h: usize,
}

fn cmd_scan(bound: u64, json: bool, out: &mut String) -> std::result::Result<(), Failure> {
    if bound > MAX_SCAN_BOUND {
        return Err(Failure::Usage(format!("--max-abs-disc must be at most {MAX_SCAN_BOUND}")));
    }
    let rows: Vec<ScanRecord> = scan_discriminants(bound).into_iter().map(|e| ScanRecord { disc: e.disc.get(), h: e.h }).collect();
    if json {
        out.push_str(&to_json(&rows));
    } else {
        for r in &rows {
            writeln!(out, "{:>6} {:>3}", r.disc, r.h).unwrap();
        }
    }
    Ok(())
}

fn discriminant(d: i64) -> std::result::Result<Discriminant, Failure> {
    Discriminant::new(d).map_err(Failure::from)
}

fn classify(d: i64, force: bool) -> std::result::Result<ClassificationResult, Failure> {
    let delta = discriminant(d)?;
    match enumerate_polarizations(delta) {
        Ok(r) => Ok(r),
        Err(Error::ExponentTooLarge(_)) if force => Ok(enumerate_polarizations_any(delta)),
        Err(Error::ExponentTooLarge(_)) => Err(Failure::Usage(format!(
            "class group of discriminant {d} has exponent greater than 2; pass --force to list the forms found anyway"
        ))),
        Err(e) => Err(e.into()),
    }
}

fn certificates(r: &ClassificationResult) -> std::result::Result<Option<Vec<ModuliCertificate>>, Failure> {
    if !r.complete {
        return Ok(None);
    }
    let certs = r.indecomposables.iter().map(|rec| certify(rec, &r.class_group)).collect::<Result<Vec<_>>>()?;
    Ok(Some(certs))
}

fn cmd_polarizations(d: i64, format: Format, force: bool, out: &mut String) -> std::result::Result<(), Failure> {
    let r = classify(d, force)?;
    let certs = certificates(&r)?;
    let mut records: Vec<FormRecord> = r.decomposables.iter().map(|rec| FormRecord::new(rec, None)).collect();
    records.extend(r.indecomposables.iter().enumerate().map(|(i, rec)| FormRecord::new(rec, certs.as_ref().map(|c| &c[i]))));
    if !r.complete {
        eprintln!("warning: class group of {d} has exponent greater than 2; the listing may be incomplete");
    }
    match format {
        Format::Json => out.push_str(&to_json(&records)),
        Format::Csv => {
            writeln!(out, "{}", FormRecord::CSV_HEADER).unwrap();
            for rec in &records {
                writeln!(out, "{}", rec.csv_line()).unwrap();
            }
        }
        Format::Text => {
            let cg = &r.class_group;
            writeln!(out, "D = {d}, h = {}: {} decomposable, {} indecomposable", cg.h, r.decomposables.len(), r.indecomposables.len())
                .unwrap();
            for rec in &r.decomposables {
                writeln!(out, "  decomposable      {}  aut {}", rec.form, rec.aut_order).unwrap();
            }
            for (i, rec) in r.indecomposables.iter().enumerate() {
                let flags = match certs.as_ref().map(|c| &c[i]) {
                    Some(c) => format!("  fom {}  fod {}", q_flag(c.fom_is_q), q_flag(c.fod_is_q)),
                    None => String::new(),
                };
                writeln!(out, "  indecomposable {i:>2} {}  aut {}{flags}", rec.form, rec.aut_order).unwrap();
            }
        }
    }
    Ok(())
}

fn q_flag(b: bool) -> &'static str {
    if b {
        "Q"
    } else {
        "-"
    }
}

fn cmd_moduli(d: i64, json: bool, out: &mut String) -> std::result::Result<(), Failure> {
    let r = classify(d, false)?;
    let certs = certificates(&r)?.expect("exponent checked");
    let bad: Vec<String> = r
        .indecomposables
        .iter()
        .zip(&certs)
        .flat_map(|(rec, c)| {
            c.witnesses.iter().filter(|w| !verify_witness(&rec.form, w)).map(|w| format!("{} with {}", rec.form, w.matrix))
        })
        .collect();
    let listing: Vec<ModuliRecord> = r
        .indecomposables
        .iter()
        .zip(&certs)
        .enumerate()
        .map(|(index, (rec, c))| ModuliRecord {
            index,
            form: FormRecord::new(rec, Some(c)),
            witnesses: c.witnesses.iter().map(WitnessRecord::from).collect(),
        })
        .collect();
    if json {
        out.push_str(&to_json(&listing));
    } else {
        let fom = certs.iter().filter(|c| c.fom_is_q).count();
        let fod = certs.iter().filter(|c| c.fod_is_q).count();
        writeln!(out, "D = {d}: {fom} of {} indecomposable polarizations have field of moduli Q, {fod} are defined over Q", certs.len())
            .unwrap();
        for (i, (rec, c)) in r.indecomposables.iter().zip(&certs).enumerate() {
            writeln!(out, "  {i:>2} {}  aut {}  fom {}  fod {}", rec.form, rec.aut_order, q_flag(c.fom_is_q), q_flag(c.fod_is_q)).unwrap();
            for w in &c.witnesses {
                writeln!(out, "       ideal ({}, {}): P = {}", w.ideal.n, w.ideal.alpha, w.matrix).unwrap();
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("witnesses do not re-verify: {}", bad.join("; "))))
    }
}

#[derive(Serialize)]
struct InvariantsRecord {
    disc: i64,
    index: usize,
    form: FormRecord,
    precision: usize,
    /// Decimal values of the absolute invariants, real and imaginary parts.
    invariants: Vec<[String; 2]>,
    recognized: Vec<Option<String>>,
    verdict: &'static str,
    /// Coefficients of the matching curve, constant term first.
    curve: Option<Vec<i64>>,
    distance_log2: Option<f64>,
    error: Option<String>,
}

fn cmd_invariants(d: i64, index: usize, precision: usize, json: bool, out: &mut String) -> std::result::Result<(), Failure> {
    let r = classify(d, false)?;
    let Some(rec) = r.indecomposables.get(index) else {
        return Err(Failure::Usage(format!(
            "--index {index} is out of range: D = {d} has {} indecomposable polarizations",
            r.indecomposables.len()
        )));
    };
    let form = rec.form;
    let expected_curve = curve_table().rows.iter().any(|c| {
        c.disc == d
            && Discriminant::new(c.disc)
                .and_then(|delta| {
                    cmpol::hermitian::HermitianForm::new(delta, c.a.into(), OrderElement::new(c.b[0].into(), c.b[1].into()), c.d.into())
                })
                .and_then(|m| is_congruent(&m, &form))
                .unwrap_or(false)
    });

    let mut record = InvariantsRecord {
        disc: d,
        index,
        form: FormRecord::new(rec, None),
        precision,
        invariants: Vec::new(),
        recognized: Vec::new(),
        verdict: "unrecognized",
        curve: None,
        distance_log2: None,
        error: None,
    };
    let mut failure = None;
    match analyze(&form, precision) {
        Ok(run) => {
            let rep = assess(&run, &default_max_height(precision));
            // Only half of the working bits are claimed as correct.
            let sig = ((precision / 2) as f64 * std::f64::consts::LOG10_2).floor().max(1.0) as usize;
            record.invariants =
                run.invariants.j.iter().map(|z| [real::to_scientific(&z.re, sig), real::to_scientific(&z.im, sig)]).collect();
            record.recognized = rep.recognized.iter().map(|q| q.as_ref().map(|q| q.to_string())).collect();
            record.distance_log2 = rep.distance_log2;
            match rep.verdict {
                Verdict::Match(i) => {
                    record.verdict = "match";
                    record.curve = Some(curve_table().rows[i].f.clone());
                }
                Verdict::Mismatch => {
                    record.verdict = "mismatch";
                    if expected_curve {
                        failure = Some("invariants are rational but differ from the bundled curve".to_string());
                    }
                }
                Verdict::Unrecognized => failure = Some("invariants were not recognized at this precision".to_string()),
            }
        }
        Err(e) => {
            record.error = Some(e.to_string());
            failure = Some(e.to_string());
        }
    }

    if json {
        out.push_str(&to_json(&record));
    } else {
        writeln!(out, "D = {d}, polarization {index}: {form}").unwrap();
        writeln!(out, "precision: {precision} bits").unwrap();
        for (i, [re, im]) in record.invariants.iter().enumerate() {
            writeln!(out, "j{} = {re}", i + 1).unwrap();
            writeln!(out, "     + ({im}) i").unwrap();
        }
        for (i, q) in record.recognized.iter().enumerate() {
            writeln!(out, "j{} recognized: {}", i + 1, q.as_deref().unwrap_or("none")).unwrap();
        }
        if let Some(dist) = record.distance_log2 {
            writeln!(out, "distance to the closest bundled curve: 2^{dist:.1}").unwrap();
        }
        if let Some(e) = &record.error {
            writeln!(out, "error: {e}").unwrap();
        }
        match &record.curve {
            Some(f) => writeln!(out, "verdict: match: {}", curve_text(f)).unwrap(),
            None => writeln!(out, "verdict: {}", record.verdict).unwrap(),
        }
    }
    match failure {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn cmd_report(quick: bool, json: bool, out: &mut String) -> std::result::Result<(), Failure> {
    let bound = if quick { report::QUICK_BOUND } else { report::FULL_BOUND };
    let rep = report::build(bound)?;
    if json {
        out.push_str(&to_json(&rep));
    } else {
        report::write_text(&rep, out).unwrap();
    }
    let issues = report::discrepancies(&rep);
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(issues.join("\n")))
    }
}
