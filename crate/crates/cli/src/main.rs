//! Command-line front end: parse words, compute invariants and normal
//! forms, and run the verification suites. Text output by default,
//! `--json` for machine-readable output.
//!
//! Exit codes: 0 on success (or a true answer), 1 when a checked
//! property fails (a non-Brunnian answer, a failed suite), 2 on usage
//! errors including word syntax errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linkhom::combinat::distinct_sequences;
use linkhom::dk::{btf_kernel_rank, btf_realized_signs};
use linkhom::freelie::multilinear_dim;
use linkhom::kappa::kappa_coeffs;
use linkhom::links::{closure_mu, StringLink};
use linkhom::rfree::{brunnian_witness, normal_form, quotient_rank, RFWord};
use linkhom::verify::{four_t_suite, verify_all};

#[derive(Parser)]
#[command(
    name = "linkhom",
    version,
    about = "Exact Milnor invariants of string links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WordInput {
    /// Word text, e.g. "[t1,t2]" or "t1 t2 t1'"
    word: Option<String>,

    /// Read the word from a file instead
    #[arg(long, value_name = "PATH", conflicts_with = "word")]
    file: Option<PathBuf>,
}

impl WordInput {
    fn text(&self) -> Result<String, String> {
        if let Some(w) = &self.word {
            return Ok(w.clone());
        }
        if let Some(path) = &self.file {
            return std::fs::read_to_string(path)
                .map(|s| s.trim().to_string())
                .map_err(|e| format!("cannot read {}: {e}", path.display()));
        }
        Err("missing word: pass it as an argument or with --file".into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distinct-index invariants mu(I; n) of the closure of a word
    Mu {
        /// Number of components
        #[arg(short)]
        n: usize,
        /// Maximum index length (defaults to n-1)
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        input: WordInput,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Normal-form exponent table of a word
    Nf {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// Test whether a word is Brunnian; reports a witness strand if not
    Brunnian {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// Top-degree coefficient vector of a Brunnian word
    Kappa {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized equality harness and the exact identity suites
    Verify {
        #[arg(short)]
        n: usize,
        /// Random trials (and random pairs) per suite
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// PRNG seed (chacha8)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Include elapsed-time fields in JSON output
        #[arg(long)]
        timing: bool,
    },
    /// Rank tables: series quotients, multilinear dimension, kernel rank
    Dims {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify the defining relations of the bracket evaluation
    #[command(name = "fourT", alias = "four-t")]
    FourT {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Mu {
            n,
            degree,
            input,
            json,
        } => {
            let link = StringLink::new(parse_rf(&input.text()?, n)?);
            let degree = degree.unwrap_or(n - 1).min(n - 1);
            if degree < 1 {
                return Err("degree must be at least 1".into());
            }
            let mut entries = Vec::new();
            for k in 1..=degree {
                for index in distinct_sequences(n - 1, k) {
                    let value = closure_mu(&link, &index).map_err(|e| e.to_string())?;
                    entries.push((index, value));
                }
            }
            if json {
                let obj = serde_json::json!({
                    "n": n,
                    "degree": degree,
                    "mu": entries
                        .iter()
                        .map(|(index, value)| {
                            serde_json::json!({
                                "I": index,
                                "value": value.to_string(),
                            })
                        })
                        .collect::<Vec<_>>(),
                });
                println!("{obj}");
            } else {
                for (index, value) in &entries {
                    let list = index
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    println!("mu({list};{n}) = {value}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Nf { n, input, json } => {
            let word = parse_rf(&input.text()?, n)?;
            let nf = normal_form(&word).map_err(|e| e.to_string())?;
            if json {
                println!("{}", nf.to_json());
            } else if nf.is_trivial() {
                println!("trivial");
            } else {
                for (key, e) in nf.terms() {
                    let index = key
                        .index
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    let sigma = key
                        .sigma
                        .one_line()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    println!("e(({index}), ({sigma})) = {e}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Brunnian { n, input, json } => {
            let word = parse_rf(&input.text()?, n)?;
            let witness = brunnian_witness(&word).map_err(|e| e.to_string())?;
            let brunnian = witness.is_none();
            if json {
                let obj = serde_json::json!({
                    "n": n,
                    "brunnian": brunnian,
                    "witness": witness,
                });
                println!("{obj}");
            } else {
                match witness {
                    None => println!("brunnian: true"),
                    Some(j) => {
                        println!("brunnian: false (deleting strand {j} leaves a nontrivial link)")
                    }
                }
            }
            Ok(bool_exit(brunnian))
        }
        Command::Kappa { n, input, json } => {
            let link = StringLink::new(parse_rf(&input.text()?, n)?);
            let coeffs = kappa_coeffs(&link).map_err(|e| e.to_string())?;
            if json {
                println!("{}", coeffs.to_json());
            } else {
                for (sigma, value) in coeffs.entries() {
                    let one_line = sigma
                        .one_line()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    println!("kappa[({one_line})] = {value}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            n,
            trials,
            seed,
            json,
            timing,
        } => {
            let report = verify_all(n, trials, seed).map_err(|e| e.to_string())?;
            if json {
                println!("{}", report.to_json(timing));
            } else {
                let mt = &report.kappa_equals_mu;
                println!(
                    "kappa_equals_mu: {} ({} trials, seed {}, {} failures)",
                    pass_str(mt.passed()),
                    mt.trials,
                    mt.seed,
                    mt.failures.len()
                );
                for suite in &report.suites {
                    println!(
                        "{}: {} ({} checks, {} failures)",
                        suite.name,
                        pass_str(suite.passed()),
                        suite.checks,
                        suite.failures
                    );
                }
                if timing {
                    println!("elapsed_ms: {}", report.elapsed_ms);
                }
            }
            Ok(bool_exit(report.passed()))
        }
        Command::Dims { n, json } => {
            if n < 2 {
                return Err("need at least 2 components".into());
            }
            let mut quotients = Vec::new();
            for k in 1..=n - 1 {
                let r = quotient_rank(n, k).map_err(|e| e.to_string())?;
                quotients.push((k, r));
            }
            let mdim = multilinear_dim(n).map_err(|e| e.to_string())?;
            let kernel = btf_kernel_rank(n).map_err(|e| e.to_string())?;
            let signs = btf_realized_signs(n).map_err(|e| e.to_string())?;
            if json {
                let obj = serde_json::json!({
                    "n": n,
                    "quotient_ranks": quotients
                        .iter()
                        .map(|(k, r)| {
                            serde_json::json!({
                                "k": k,
                                "formula": r.formula,
                                "enumerated": r.enumerated,
                            })
                        })
                        .collect::<Vec<_>>(),
                    "multilinear_dim": mdim,
                    "btf_kernel": {
                        "rank": kernel.kernel_rank,
                        "expected": kernel.expected,
                        "span_rank": kernel.span_rank,
                        "basis_in_kernel": kernel.basis_in_kernel,
                        "pbw_det_is_one": kernel.pbw_det_is_one,
                        "verified": kernel.verified(),
                    },
                    "bracket_signs": signs
                        .iter()
                        .map(|(sigma, sign)| {
                            serde_json::json!({
                                "sigma": sigma.one_line(),
                                "sign": sign,
                            })
                        })
                        .collect::<Vec<_>>(),
                });
                println!("{obj}");
            } else {
                let mut table = String::new();
                for (k, r) in &quotients {
                    writeln!(
                        table,
                        "quotient rank (k={k}): formula {} enumerated {}",
                        r.formula, r.enumerated
                    )
                    .unwrap();
                }
                writeln!(
                    table,
                    "multilinear dim: {mdim}\nkernel rank: {} (expected {}, span {}, verified {})",
                    kernel.kernel_rank,
                    kernel.expected,
                    kernel.span_rank,
                    kernel.verified()
                )
                .unwrap();
                let rendered: Vec<String> = signs
                    .iter()
                    .map(|(sigma, sign)| {
                        let one_line = sigma
                            .one_line()
                            .iter()
                            .map(u32::to_string)
                            .collect::<Vec<_>>()
                            .join(",");
                        format!("({one_line}): {sign:+}")
                    })
                    .collect();
                write!(table, "bracket signs: {}", rendered.join("  ")).unwrap();
                println!("{table}");
            }
            let ok = quotients.iter().all(|(_, r)| r.formula == r.enumerated) && kernel.verified();
            Ok(bool_exit(ok))
        }
        Command::FourT { n, json } => {
            let outcome = four_t_suite(n).map_err(|e| e.to_string())?;
            let ok = outcome.passed();
            if json {
                let obj = serde_json::json!({
                    "n": n,
                    "four_t": ok,
                    "checks": outcome.checks,
                });
                println!("{obj}");
            } else {
                println!("four_t (n={n}): {}", pass_str(ok));
            }
            Ok(bool_exit(ok))
        }
    }
}

fn parse_rf(text: &str, n: usize) -> Result<RFWord, String> {
    if n < 2 {
        return Err("need at least 2 components".into());
    }
    RFWord::parse(text, n).map_err(|e| e.to_string())
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn bool_exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
