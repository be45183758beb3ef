//! `cylsphere` command line: coefficient tables, μ polynomials, identity
//! sweeps, constraint deduplication and point evaluation.
//!
//! Output is JSON lines on stdout (CSV for `coeffs --format csv`),
//! diagnostics on stderr. Exit codes: 0 success, 1 an identity failed,
//! 2 usage or domain error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use cylsphere_core::verify::{lemma1_sweep, lemma2_sweep, theorem_residual_with};
use cylsphere_core::{
    check_2f1_form, dedup, expand_oracle, mu_table, ConstraintSystem, Error, Rational,
    TheoremReport,
};

/// Largest j, k or m accepted on the command line.
pub const CAP: u32 = 32;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cylsphere",
    version,
    about = "Exact cylinder-sphere integral coefficients and identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the β_l table of I_jk.
    Coeffs(CoeffsArgs),
    /// Print μ_1..=μ_max as ρ² coefficient lists.
    Mu(MuArgs),
    /// Check the ρ-independence residuals (and optionally the lemmas).
    Verify(VerifyArgs),
    /// Count independent constraint rows for a set of terms.
    Dedup(DedupArgs),
    /// Evaluate I_jk at a rational point as √(ρ²−s²)·P.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn capped(s: &str) -> Result<u32, String> {
    let v: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if v > CAP {
        return Err(format!("{v} exceeds the cap {CAP}"));
    }
    Ok(v)
}

fn capped_positive(s: &str) -> Result<u32, String> {
    match capped(s)? {
        0 => Err("must be positive".into()),
        v => Ok(v),
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>().map_err(|e| format!("{e}"))? {
        0 => Err("must be positive".into()),
        v => Ok(v),
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_parser = capped)]
    pub j: u32,
    #[arg(long, value_parser = capped)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MuArgs {
    /// Highest m to print.
    #[arg(long, value_parser = capped_positive)]
    pub max: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = capped, default_value = "6")]
    pub jmax: u32,
    #[arg(long, value_parser = capped, default_value = "6")]
    pub kmax: u32,
    /// Also run both binomial lemma sweeps.
    #[arg(long)]
    pub lemmas: bool,
    /// Emit one TheoremReport JSON line per (j, k, N).
    #[arg(long)]
    pub report: bool,
    /// Worker threads for the theorem sweep (0 = one per core).
    #[arg(long, default_value = "1")]
    pub jobs: usize,
    /// Seed for the lemma samples.
    #[arg(long, default_value = "0")]
    pub seed: u64,
    /// Largest n in the lemma sweeps.
    #[arg(long, default_value = "40")]
    pub lemma_n: u32,
    /// Random α (first lemma) and β (second lemma) samples.
    #[arg(long, value_parser = positive_count, default_value = "50")]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct DedupArgs {
    /// JSON file: {"terms":[{"j":0,"k":1,"a":"2/3"}], "rho_inner":"7/20", "rho_outer":"1"}.
    #[arg(long)]
    pub terms: PathBuf,
    #[arg(long, value_parser = rational)]
    pub rho_inner: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub rho_outer: Option<Rational>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_parser = capped)]
    pub j: u32,
    #[arg(long, value_parser = capped)]
    pub k: u32,
    #[arg(long, value_parser = rational)]
    pub rho: Rational,
    #[arg(long, value_parser = rational)]
    pub s: Rational,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IdentityViolation(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("io error: {e}"))
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Coeffs(a) => coeffs(a, out),
        Command::Mu(a) => mu(a, out),
        Command::Verify(a) => verify(a, out, err),
        Command::Dedup(a) => dedup_cmd(a, out),
        Command::Eval(a) => eval(a, out),
    }
}

fn coeffs(args: CoeffsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let table = expand_oracle(args.j, args.k);
    match args.format {
        Format::Json => json_line(out, &table),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Failure::usage(e.to_string());
            w.write_record(["l", "beta", "rho_power"])
                .map_err(csv_err)?;
            for (l, beta) in table.betas.iter().enumerate() {
                let power = table.rho_power(l as u32).to_string();
                w.write_record([l.to_string(), beta.to_string(), power])
                    .map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn mu(args: MuArgs, out: &mut dyn Write) -> Result<(), Failure> {
    for p in mu_table(args.max) {
        json_line(out, &p)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifySummary {
    jmax: u32,
    kmax: u32,
    theorem_tuples: usize,
    lemma1_identities: Option<usize>,
    lemma2_identities: Option<usize>,
    ok: bool,
}

fn theorem_reports(jmax: u32, kmax: u32, jobs: usize) -> Result<Vec<TheoremReport>, Failure> {
    let mus = mu_table(jmax + kmax);
    let pairs: Vec<(u32, u32)> = (0..=jmax)
        .flat_map(|j| (0..=kmax).map(move |k| (j, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    // Collected in (j, k) order, so the first error seen is the first in sweep order.
    let chunks: Vec<Result<Vec<TheoremReport>, Error>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(j, k)| {
                let table = expand_oracle(j, k);
                (j..=j + k)
                    .map(|n| {
                        let rep = theorem_residual_with(&table, &mus, n)?;
                        rep.check()?;
                        Ok(rep)
                    })
                    .collect()
            })
            .collect()
    });
    let mut reports = Vec::new();
    for chunk in chunks {
        reports.extend(chunk?);
    }
    Ok(reports)
}

fn verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let reports = theorem_reports(args.jmax, args.kmax, args.jobs)?;
    if args.report {
        for rep in &reports {
            json_line(out, rep)?;
        }
    }
    let (lemma1, lemma2) = if args.lemmas {
        (
            Some(lemma1_sweep(args.lemma_n, 10, args.samples, args.seed)?),
            Some(lemma2_sweep(
                args.lemma_n,
                args.samples,
                args.seed.wrapping_add(1),
            )?),
        )
    } else {
        (None, None)
    };
    let summary = VerifySummary {
        jmax: args.jmax,
        kmax: args.kmax,
        theorem_tuples: reports.len(),
        lemma1_identities: lemma1,
        lemma2_identities: lemma2,
        ok: true,
    };
    if args.report {
        json_line(err, &summary)
    } else {
        json_line(out, &summary)
    }
}

fn dedup_cmd(args: DedupArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.terms)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.terms.display())))?;
    let mut system: ConstraintSystem = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.terms.display())))?;
    if args.rho_inner.is_some() || args.rho_outer.is_some() {
        let inner = args.rho_inner.unwrap_or_else(|| system.rho_inner().clone());
        let outer = args.rho_outer.unwrap_or_else(|| system.rho_outer().clone());
        system = system.with_radii(inner, outer)?;
    }
    let report = dedup(&system)?;
    match args.out {
        Some(path) => {
            let mut file = fs::File::create(&path)
                .map_err(|e| Failure::usage(format!("cannot create {}: {e}", path.display())))?;
            json_line(&mut file, &report)
        }
        None => json_line(out, &report),
    }
}

#[derive(Serialize)]
struct EvalOutput {
    j: u32,
    k: u32,
    rho: Rational,
    s: Rational,
    /// I_jk = √(rho2_minus_s2) · p.
    p: Rational,
    rho2_minus_s2: Rational,
    /// I_jk² = p² · (ρ² − s²).
    i_squared: Rational,
    hypergeometric_form_agrees: bool,
}

fn eval(args: EvalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (agrees, p, _) = check_2f1_form(args.j, args.k, &args.rho, &args.s)?;
    let gap = &args.rho * &args.rho - &args.s * &args.s;
    let out_value = EvalOutput {
        j: args.j,
        k: args.k,
        i_squared: &p * &p * &gap,
        rho: args.rho,
        s: args.s,
        p,
        rho2_minus_s2: gap,
        hypergeometric_form_agrees: agrees,
    };
    json_line(out, &out_value)?;
    if !agrees {
        return Err(Error::IdentityViolation(format!(
            "closed hypergeometric form disagrees with the table for (j,k) = ({},{})",
            args.j, args.k
        ))
        .into());
    }
    Ok(())
}
