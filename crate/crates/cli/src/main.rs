use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use secidx::codes::{construct_secure_code, verify_linear_code};
use secidx::oracle::{exact_feasible, OracleVerdict};
use secidx::report::{analyze, fraction};
use secidx::reproduce::{reproduce, IDS};
use secidx::{fixtures, AnalyzeOptions, CodeSpec, Error, Problem, VerificationReport};

const OK: u8 = 0;
const INPUT_ERROR: u8 = 1;
const NEGATIVE: u8 = 2;
const MISMATCH: u8 = 3;
const CONSTRUCTION_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "secidx", version, about = "Secure index coding: bounds, rates and code construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds, feasibility verdicts and symmetric rates for a problem file.
    /// Exit 2 when infeasibility is proven.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Skip the polymatroidal outer bound.
        #[arg(long)]
        no_outer: bool,
    },
    /// Build and verify a secure linear code from the secure clique-cover LP.
    Construct {
        file: PathBuf,
        /// Field degree m of GF(2^m).
        #[arg(long, default_value_t = 8)]
        field: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random assembly attempts per field.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Where to write the code document; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Retry over GF(2^16) when the budget runs out.
        #[arg(long)]
        escalate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Rank-check a linear code against a problem. Exit 2 when any check fails.
    Verify {
        problem: PathBuf,
        code: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search for a binary code with codeword length up to rmax.
    /// Exit 2 when none exists.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        rmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Recompute a worked instance and diff against frozen values.
    /// Exit 3 on mismatch.
    Reproduce {
        id: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a built-in problem document.
    Fixture { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_problem(path: &Path) -> Result<Problem> {
    Problem::parse(&read(path)?).with_context(|| format!("parsing problem {}", path.display()))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Analyze { file, json: as_json, no_outer } => {
            let p = load_problem(&file)?;
            let report = analyze(&p, AnalyzeOptions { outer: !no_outer })?;
            if as_json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            Ok(if report.infeasible { NEGATIVE } else { OK })
        }
        Command::Construct { file, field, seed, budget, out, escalate, json: as_json } => {
            let p = load_problem(&file)?;
            let built = match construct_secure_code(&p, field, seed, budget, escalate) {
                Ok(c) => c,
                Err(e @ (Error::ZeroRate | Error::SearchExhausted { .. } | Error::FieldTooSmall { .. })) => {
                    eprintln!("construction failed: {e}");
                    return Ok(CONSTRUCTION_FAILED);
                }
                Err(e) => return Err(e.into()),
            };
            let outcome = &built.outcome;
            let doc = outcome.spec.to_json();
            match &out {
                Some(path) => fs::write(path, &doc).with_context(|| format!("writing {}", path.display()))?,
                None => println!("{doc}"),
            }
            if as_json {
                eprintln!("{}", serde_json::to_string_pretty(&outcome.report)?);
            } else {
                eprintln!(
                    "symmetric rate {} over GF(2^{}) after {} attempt(s)",
                    fraction(&built.solution.rate),
                    outcome.spec.field.degree(),
                    outcome.attempts
                );
                eprint!("{}", render_verification(&outcome.report));
            }
            Ok(if outcome.report.all_pass { OK } else { CONSTRUCTION_FAILED })
        }
        Command::Verify { problem, code, json: as_json } => {
            let p = load_problem(&problem)?;
            let spec = CodeSpec::parse(&read(&code)?).with_context(|| format!("parsing code {}", code.display()))?;
            let report = verify_linear_code(&p, &spec)?;
            if as_json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", render_verification(&report));
            }
            Ok(if report.all_pass { OK } else { NEGATIVE })
        }
        Command::Oracle { file, rmax, json: as_json } => {
            let p = load_problem(&file)?;
            let verdict = exact_feasible(&p, rmax)?;
            if as_json {
                println!("{}", serde_json::to_string_pretty(&verdict)?);
            } else {
                match &verdict {
                    OracleVerdict::Feasible { code } => {
                        println!("code found: r = {} bits, rate 1/{}", code.r, code.r);
                        for (x, y) in code.table.iter().enumerate() {
                            println!("  {:0n$b} -> {:0r$b}", x, y, n = code.n, r = code.r);
                        }
                    }
                    OracleVerdict::NoCodeFound { checked_up_to } => {
                        println!("no valid code with r <= {checked_up_to}");
                    }
                }
            }
            Ok(if verdict.code().is_some() { OK } else { NEGATIVE })
        }
        Command::Reproduce { id, json: as_json } => {
            let rep = reproduce(&id).ok_or_else(|| anyhow!("unknown id {id:?}; expected one of {}", IDS.join(", ")))??;
            if as_json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                print!("{}", rep.render_text());
            }
            Ok(if rep.all_match { OK } else { MISMATCH })
        }
        Command::Fixture { name } => {
            let p = fixtures::by_name(&name)
                .ok_or_else(|| anyhow!("unknown fixture {name:?}; expected one of {}", fixtures::NAMES.join(", ")))?;
            println!("{}", p.to_json());
            Ok(OK)
        }
    }
}

fn render_verification(r: &VerificationReport) -> String {
    let mut o = format!("field {}, r = {}, t = {:?}\n", r.field, r.r, r.t);
    for d in &r.decoding {
        o.push_str(&format!(
            "  decode   receiver {}: rank {} - {} = {} (need {}) {}\n",
            d.receiver,
            d.rank_with,
            d.rank_without,
            d.rank_with - d.rank_without,
            d.needed,
            if d.pass { "ok" } else { "FAIL" }
        ));
    }
    for s in &r.security {
        o.push_str(&format!(
            "  secure   receiver {} / message {}: leakage {} {}\n",
            s.receiver,
            s.message,
            s.leakage,
            if s.pass { "ok" } else { "FAIL" }
        ));
    }
    o.push_str(&format!(
        "{}/{} checks pass: {}\n",
        r.passed_checks(),
        r.total_checks(),
        if r.all_pass { "VALID" } else { "INVALID" }
    ));
    o
}
