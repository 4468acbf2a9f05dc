//! Thin CLI over the library: scene computation, the identity suite, and
//! Q-polynomial printing.
//!
//! Exit codes: 0 success/pass, 1 hypothesis rejection, 2 schema or scene
//! error, 3 suite counterexample.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use segre::residual::{q_polynomial_roots, q_polynomial_symmetric};
use segre::scene::{dispatch_compute, format_table, parse_scene, to_json_report};
use segre::suite::{run_identity_suite, SuiteConfig};
use segre::Error;

#[derive(Parser)]
#[command(
    name = "segre",
    about = "Segre classes of unions of regularly embedded components",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute s(W, Z) for a scene file.
    Compute {
        /// Path to a scene JSON document (schema_version "1").
        #[arg(long)]
        scene: PathBuf,
        /// Formula override: auto, thm1, thm2, cor26, fulton, oracle.
        #[arg(long)]
        formula: Option<String>,
        /// Keep only coefficients of codimension ≤ K.
        #[arg(long)]
        max_codim: Option<u32>,
        /// Output format: json or table.
        #[arg(long)]
        format: Option<String>,
    },
    /// Run the randomized identity suite.
    Verify {
        /// Truncation bound for randomized polynomial checks.
        #[arg(long, default_value_t = 8)]
        trunc: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Case count per randomized battery.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Print the Q-polynomial for n Chern roots.
    Qpoly {
        /// Number of Chern roots.
        #[arg(long)]
        roots: u32,
        /// Truncation bound (total degree).
        #[arg(long)]
        trunc: u32,
        /// Print in elementary-symmetric (Chern class) variables instead
        /// of root variables.
        #[arg(long, default_value_t = false)]
        symmetric: bool,
        /// Output format: json or table.
        #[arg(long, default_value = "table")]
        format: String,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::TransversalityViolated(_)
        | Error::HypothesisNotDeclared(_)
        | Error::NoApplicableFormula(_)
        | Error::OracleInapplicable(_) => 1,
        _ => 2,
    }
}

fn run_compute(
    scene: &PathBuf,
    formula: Option<String>,
    max_codim: Option<u32>,
    format: Option<String>,
) -> ExitCode {
    let text = match std::fs::read_to_string(scene) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", scene.display());
            return ExitCode::from(2);
        }
    };
    let mut doc = match parse_scene(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Some(f) = formula {
        doc.request.formula = f;
    }
    if let Some(k) = max_codim {
        doc.request.max_codim = Some(k);
    }
    if let Some(f) = format {
        doc.request.format = f;
    }
    if !["json", "table"].contains(&doc.request.format.as_str()) {
        eprintln!("error: unknown format {:?}", doc.request.format);
        return ExitCode::from(2);
    }
    if !["auto", "thm1", "thm2", "cor26", "fulton", "oracle"]
        .contains(&doc.request.formula.as_str())
    {
        eprintln!("error: unknown formula {:?}", doc.request.formula);
        return ExitCode::from(2);
    }
    match dispatch_compute(&doc) {
        Ok(report) => {
            if doc.request.format == "json" {
                let json = to_json_report(&report, doc.request.max_codim);
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json).expect("serializable")
                );
            } else {
                print!("{}", format_table(&report, doc.request.max_codim));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run_verify(trunc: u32, seed: u64, cases: usize) -> ExitCode {
    let report = run_identity_suite(&SuiteConfig { trunc, seed, cases });
    print!("{}", report.format_table());
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run_qpoly(roots: u32, trunc: u32, symmetric: bool, format: &str) -> ExitCode {
    if trunc < 1 {
        eprintln!("error: qpoly needs --trunc >= 1");
        return ExitCode::from(2);
    }
    let q = if symmetric {
        q_polynomial_symmetric(roots, trunc)
    } else {
        q_polynomial_roots(roots, trunc)
    };
    match format {
        "json" => {
            let terms: Vec<serde_json::Value> = q
                .value()
                .iter_terms()
                .map(|(mono, coeff)| {
                    serde_json::json!({
                        "monomial": mono
                            .iter()
                            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                            .collect::<Vec<_>>()
                            .join("*"),
                        "value": coeff.to_string(),
                    })
                })
                .collect();
            let out = serde_json::json!({
                "roots": roots,
                "truncation": q.truncation(),
                "variables": if symmetric { "chern" } else { "roots" },
                "reconstruction_holds": q.reconstruction_holds(),
                "terms": terms,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
        }
        "table" => {
            println!(
                "Q for {roots} roots, truncation {} ({} variables)",
                q.truncation(),
                if symmetric { "chern" } else { "root" }
            );
            println!("Q = {}", q.value());
            println!(
                "reconstruction identity: {}",
                if q.reconstruction_holds() {
                    "holds"
                } else {
                    "FAILS"
                }
            );
        }
        other => {
            eprintln!("error: unknown format {other:?}");
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute {
            scene,
            formula,
            max_codim,
            format,
        } => run_compute(&scene, formula, max_codim, format),
        Command::Verify { trunc, seed, cases } => run_verify(trunc, seed, cases),
        Command::Qpoly {
            roots,
            trunc,
            symmetric,
            format,
        } => run_qpoly(roots, trunc, symmetric, &format),
    }
}
