//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code together with the text for stdout and stderr; the binary only
//! prints them.
//!
//! Exit codes: 0 success, 1 a check failed, 2 the input was rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{analytic_torsion, cohomology, zeta_at_zero, zeta_derivative_at_zero, ChainComplex};
use crate::constructions::{cw_cochain_complex, morse_smale_complex, restrict_scalars, tensor_power_cyclic};
use crate::document::{self, ComplexDocument, CwDocument, MsDocument, OrderDocument};
use crate::equivariant::{nrt_parts, rt_sigma, tau_sigma_numeric, tau_sigma_spectral, twisted_zeta_derivative};
use crate::error::{Error, Result};
use crate::verify::{self, Verdict, CONVENTIONS_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fintorsion", version, about = "Torsion invariants of finite cochain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology groups, elementary divisors and regulators.
    Cohomology { file: PathBuf },
    /// Analytic torsion from Laplacian pseudo-determinants.
    Tau { file: PathBuf },
    /// Twisted analytic torsion of a complex with an action.
    TauSigma {
        file: PathBuf,
        /// Rigorous interval enclosure instead of the exact value.
        #[arg(long)]
        numeric: bool,
        /// Working precision in bits for --numeric.
        #[arg(long, default_value_t = 128)]
        precision: u64,
    },
    /// Naive equivariant Reidemeister torsion.
    Nrt { file: PathBuf },
    /// Equivariant Reidemeister torsion with metric volume forms.
    RtSigma { file: PathBuf },
    /// Zeta function data at zero.
    Zeta0 { file: PathBuf },
    /// Build a complex document from other data.
    #[command(subcommand)]
    Build(Build),
    /// Run identity checks on seeded random instances.
    Verify {
        /// A check name or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Subcommand, Debug)]
enum Build {
    /// Cyclic tensor power with the cyclic permutation action.
    TensorPower {
        #[arg(long)]
        p: u32,
        file: PathBuf,
    },
    /// Cellular cochains of a cell complex document.
    Cw { file: PathBuf },
    /// Morse-Smale cochains of flow data.
    Morse { file: PathBuf },
    /// Restriction of scalars of an order complex.
    Restrict { file: PathBuf },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &PathBuf) -> Result<String> {
    let res = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    res.map_err(|e| Error::Document { path: path.display().to_string(), message: e.to_string() })
}

fn load_complex(path: &PathBuf) -> Result<(String, ChainComplex)> {
    let doc: ComplexDocument = document::parse(&read(path)?)?;
    let c = doc.to_complex()?;
    Ok((doc.name, c))
}

/// Metric commands fall back to the standard inner product.
fn metrized(c: ChainComplex) -> (ChainComplex, &'static str) {
    if c.has_gram() {
        (c, "document")
    } else {
        (c.with_identity_gram(), "identity")
    }
}

fn header(command: &str, input: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!(input));
    m.insert("conventions_version".into(), json!(CONVENTIONS_VERSION));
    m
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn report(m: serde_json::Map<String, Value>) -> String {
    document::to_text(&Value::Object(m))
}

fn execute(cmd: Command) -> Result<(i32, String)> {
    match cmd {
        Command::Cohomology { file } => {
            let (name, c) = load_complex(&file)?;
            let h = cohomology(&c)?;
            let mut m = header("cohomology", &name);
            m.insert("rationally_acyclic".into(), json!(h.is_rationally_acyclic()));
            m.insert("degrees".into(), to_value(&h.degrees));
            Ok((EXIT_OK, report(m)))
        }
        Command::Tau { file } => {
            let (name, c) = load_complex(&file)?;
            let (c, metric) = metrized(c);
            let mut m = header("tau", &name);
            m.insert("metric".into(), json!(metric));
            m.insert("log_tau".into(), json!("1/2 sum_j (-1)^j j log pdet Delta_j"));
            m.insert("value".into(), to_value(&analytic_torsion(&c)?));
            Ok((EXIT_OK, report(m)))
        }
        Command::TauSigma { file, numeric, precision } => {
            let (name, c) = load_complex(&file)?;
            let (c, metric) = metrized(c);
            c.require_action("twisted torsion")?;
            let mut m = header("tau-sigma", &name);
            m.insert("metric".into(), json!(metric));
            let exact = if numeric { None } else { Some(tau_sigma_spectral(&c)) };
            match exact {
                Some(Ok(v)) => {
                    m.insert("value".into(), to_value(&v));
                }
                Some(Err(Error::NonIntegralTraces)) | None => {
                    if !numeric {
                        m.insert("note".into(), json!(Error::NonIntegralTraces.to_string()));
                    }
                    m.insert("numeric".into(), to_value(&tau_sigma_numeric(&c, precision)?));
                }
                Some(Err(e)) => return Err(e),
            }
            Ok((EXIT_OK, report(m)))
        }
        Command::Nrt { file } => {
            let (name, c) = load_complex(&file)?;
            let parts = nrt_parts(&c)?;
            let mut m = header("nrt", &name);
            m.insert("order".into(), json!(parts.order));
            m.insert("value".into(), to_value(&parts.value(0)));
            m.insert("fixed_term".into(), to_value(&parts.fixed_term(0)));
            m.insert("pofsigma_term".into(), to_value(&parts.pofsigma_term(0)));
            m.insert("quotient_term".into(), to_value(&parts.quotient_term(0)));
            m.insert("quotient".into(), to_value(&parts.quotient));
            Ok((EXIT_OK, report(m)))
        }
        Command::RtSigma { file } => {
            let (name, c) = load_complex(&file)?;
            let (c, metric) = metrized(c);
            let mut m = header("rt-sigma", &name);
            m.insert("metric".into(), json!(metric));
            m.insert("value".into(), to_value(&rt_sigma(&c)?));
            Ok((EXIT_OK, report(m)))
        }
        Command::Zeta0 { file } => {
            let (name, c) = load_complex(&file)?;
            let (c, metric) = metrized(c);
            let mut m = header("zeta0", &name);
            m.insert("metric".into(), json!(metric));
            m.insert("zeta_at_zero".into(), json!(zeta_at_zero(&c)?));
            m.insert("exp_zeta_derivative_at_zero".into(), to_value(&zeta_derivative_at_zero(&c)?));
            if c.action().is_some() {
                match twisted_zeta_derivative(&c) {
                    Ok(v) => {
                        m.insert("exp_twisted_zeta_derivative_at_zero".into(), to_value(&v));
                    }
                    Err(Error::NonIntegralTraces) => {
                        m.insert("note".into(), json!(Error::NonIntegralTraces.to_string()));
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((EXIT_OK, report(m)))
        }
        Command::Build(b) => {
            let doc = match b {
                Build::TensorPower { p, file } => {
                    let (name, c) = load_complex(&file)?;
                    let t = tensor_power_cyclic(&c, p)?;
                    ComplexDocument::from_complex(&format!("({name})^(x){p}"), &t)
                }
                Build::Cw { file } => {
                    let doc: CwDocument = document::parse(&read(&file)?)?;
                    ComplexDocument::from_complex(&doc.name, &cw_cochain_complex(&doc.to_cw()?)?)
                }
                Build::Morse { file } => {
                    let doc: MsDocument = document::parse(&read(&file)?)?;
                    ComplexDocument::from_complex(&doc.name, &morse_smale_complex(&doc.to_data())?)
                }
                Build::Restrict { file } => {
                    let doc: OrderDocument = document::parse(&read(&file)?)?;
                    ComplexDocument::from_complex(&doc.name, &restrict_scalars(&doc.to_order()?)?)
                }
            };
            Ok((EXIT_OK, document::to_text(&doc)))
        }
        Command::Verify { suite, seed, count } => {
            let reports = verify::run_suite(&suite, seed, count)?;
            let mut summary: BTreeMap<&str, usize> = BTreeMap::new();
            for r in &reports {
                *summary.entry(r.verdict.as_str()).or_default() += 1;
            }
            let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
            let mut m = header("verify", &suite);
            m.insert("seed".into(), json!(seed));
            m.insert("count".into(), json!(count));
            m.insert("summary".into(), to_value(&summary));
            m.insert("reports".into(), to_value(&reports));
            Ok((if failed { EXIT_CHECK_FAILED } else { EXIT_OK }, report(m)))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_exits_zero() {
        let o = run(["fintorsion", "--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("verify"));
    }

    #[test]
    fn unknown_subcommand_is_input_error() {
        assert_eq!(run(["fintorsion", "frobnicate"]).code, EXIT_INPUT);
    }

    #[test]
    fn missing_file_is_input_error() {
        let o = run(["fintorsion", "tau", "/nonexistent/doc.json"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("/nonexistent/doc.json"));
    }

    #[test]
    fn unknown_suite_is_input_error() {
        let o = run(["fintorsion", "verify", "--suite", "nope"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("unknown check"));
    }
}
