//! Command-line front end: certificate verification, minimality tables,
//! range scans, local/global power reports, and the self-test suite.
//!
//! Exit codes are a stable contract: 0 on success (and verified
//! certificates), 1 on mathematical failure, 2 on usage errors. Reports go
//! to stdout (or to `--out`), diagnostics to stderr. Output depends only on
//! the arguments: no configuration files, no environment variables.

mod render;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadtwist_core::certify;
use quadtwist_core::exactmath::{Int, Rat};
use quadtwist_core::localpowers::{self, NumberField};

/// Desk-scale bound on the verified prime.
const P_CAP: u64 = 1000;
/// Desk-scale bound on the scanned prime range in `gw`.
const PRIME_BOUND_CAP: u64 = 1_000_000;
/// Desk-scale bound on minimality conductors.
const N_CAP: u64 = 100_000;

#[derive(Parser)]
#[command(
    name = "quadtwist",
    version,
    about = "Exact certificates for local-global quadratic twist obstructions in cyclotomic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the counterexample class for a prime p = 13 (mod 24).
    Verify {
        /// The prime to verify (p <= 1000).
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify odd conductors by the minimality analysis.
    Minimality {
        /// Classify a single odd conductor.
        #[arg(long, conflicts_with = "max")]
        n: Option<u64>,
        /// Classify every odd conductor up to this bound.
        #[arg(long)]
        max: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify every prime p = 13 (mod 24) up to a bound.
    Scan {
        /// Upper bound on p (<= 1000).
        #[arg(long)]
        pmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Local/global m-th power report (Grunwald-Wang scanner).
    Gw {
        /// The element, as an integer or "num/den" rational.
        #[arg(long)]
        alpha: String,
        /// The power m >= 1.
        #[arg(long)]
        m: u64,
        /// Base field: "q" for the rationals or "qsqrt:D" for Q(sqrt(D)).
        #[arg(long, default_value = "q")]
        field: String,
        /// Examine all primes up to this bound (<= 10^6).
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the built-in brute-force oracle suites.
    Selftest,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(report: String, output: &OutputArgs) -> ExitCode {
    match &output.out {
        None => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Some(path) => match std::fs::write(path, report + "\n") {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::from(2)
            }
        },
    }
}

fn parse_rational(text: &str) -> Option<Rat> {
    let mut parts = text.splitn(2, '/');
    let num: Int = parts.next()?.trim().parse().ok()?;
    let den: Int = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => Int::from(1),
    };
    if den == Int::from(0) {
        return None;
    }
    Some(Rat::new(num, den))
}

fn parse_field(text: &str) -> Option<NumberField> {
    match text.to_ascii_lowercase().as_str() {
        "q" => Some(NumberField::Rational),
        other => {
            let d = other.strip_prefix("qsqrt:")?;
            Some(NumberField::RealQuadratic(d.parse().ok()?))
        }
    }
}

fn run_verify(p: u64, output: &OutputArgs) -> ExitCode {
    if p > P_CAP {
        return usage_error(&format!("p = {p} exceeds the supported bound {P_CAP}"));
    }
    let certificate = match certify::verify_theorem(p) {
        Ok(certificate) => certificate,
        Err(e) => return usage_error(&e.to_string()),
    };
    let report = if output.json {
        render::certificate_json(&certificate)
    } else {
        render::certificate_text(&certificate)
    };
    let code = emit(report, output);
    if code == ExitCode::SUCCESS && !certificate.is_verified() {
        eprintln!("verification failed: {}", certificate.verdict);
        return ExitCode::from(1);
    }
    code
}

fn run_minimality(n: Option<u64>, max: Option<u64>, output: &OutputArgs) -> ExitCode {
    let verdicts = match (n, max) {
        (Some(n), None) => {
            if n > N_CAP {
                return usage_error(&format!("n = {n} exceeds the supported bound {N_CAP}"));
            }
            match certify::minimality_verdict(n) {
                Ok(v) => vec![v],
                Err(e) => return usage_error(&e.to_string()),
            }
        }
        (None, Some(max)) => {
            if max > N_CAP {
                return usage_error(&format!("max = {max} exceeds the supported bound {N_CAP}"));
            }
            match certify::scan_minimality(max) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
        }
        _ => return usage_error("pass exactly one of --n or --max"),
    };
    let report = if output.json {
        render::minimality_json(&verdicts)
    } else {
        render::minimality_text(&verdicts)
    };
    emit(report, output)
}

fn run_scan(pmax: u64, output: &OutputArgs) -> ExitCode {
    if pmax > P_CAP {
        return usage_error(&format!(
            "pmax = {pmax} exceeds the supported bound {P_CAP}"
        ));
    }
    let certificates = match certify::scan_theorem(pmax) {
        Ok(certificates) => certificates,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = if output.json {
        render::scan_json(&certificates)
    } else {
        render::scan_text(&certificates)
    };
    emit(report, output)
}

fn run_gw(alpha: &str, m: u64, field: &str, bound: u64, output: &OutputArgs) -> ExitCode {
    let Some(alpha) = parse_rational(alpha) else {
        return usage_error("alpha must be an integer or num/den rational");
    };
    let Some(field) = parse_field(field) else {
        return usage_error("field must be \"q\" or \"qsqrt:D\" for squarefree D > 1");
    };
    if m == 0 || m > 64 {
        return usage_error("m must lie in 1..=64");
    }
    if bound > PRIME_BOUND_CAP {
        return usage_error(&format!(
            "bound = {bound} exceeds the supported bound {PRIME_BOUND_CAP}"
        ));
    }
    let report = match localpowers::gw_scan(&alpha, m, &field, bound) {
        Ok(report) => report,
        Err(e) => return usage_error(&e.to_string()),
    };
    let rendered = if output.json {
        render::gw_json(&report)
    } else {
        render::gw_text(&report)
    };
    emit(rendered, output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { p, output } => run_verify(p, &output),
        Command::Minimality { n, max, output } => run_minimality(n, max, &output),
        Command::Scan { pmax, output } => run_scan(pmax, &output),
        Command::Gw {
            alpha,
            m,
            field,
            bound,
            output,
        } => run_gw(&alpha, m, &field, bound, &output),
        Command::Selftest => selftest::run(),
    }
}
