//! Command-line interface for the measure-only quantum automata toolkit.
//!
//! Exit codes: 0 success (or positive verdict), 1 negative verdict
//! (non-member, failed invariants), 2 usage or processing error.

mod formats;
mod report;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use formats::{dfa_from_doc, dfa_to_doc, load_qfa, qfa_to_doc, DfaDoc, LoadedQfa, QfaDoc};
use moqfa::basis::{build_basis_automaton, BasisSeq};
use moqfa::closure::linear_representation;
use moqfa::corpus::run_invariants;
use moqfa::decide::{is_lmo, synthesize, DecideConfig, SynthesisConfig};
use moqfa::dfa::{Dfa, Variation};
use moqfa::event::parse_event;
use moqfa::logic::parse_formula;
use moqfa::monoid::transition_monoid;
use moqfa::regex::compile_regex;
use moqfa::scalar::{Exact, ExactReal, RealScalar, Scalar};
use moqfa::{Alphabet, Matrix, MonQfa};

/// Default float-mode comparison tolerance; override with MOQFA_TOL.
fn float_tol() -> f64 {
    std::env::var("MOQFA_TOL").ok().and_then(|v| v.parse().ok()).unwrap_or(1e-9)
}

#[derive(Parser)]
#[command(name = "moqfa", version, about = "Measure-only quantum finite automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DfaInput {
    /// A DFA interchange file, or a regex when no such file exists
    /// (literals, concatenation, `|`, `*`, parentheses, `.` for any letter).
    source: String,
    /// Alphabet letters, e.g. `ab` (inferred from regex literals when omitted).
    #[arg(long)]
    alphabet: Option<String>,
}

impl DfaInput {
    fn load(&self) -> Result<Dfa> {
        let path = Path::new(&self.source);
        if path.exists() {
            let doc: DfaDoc = serde_json::from_str(&fs::read_to_string(path)?)
                .with_context(|| format!("parsing {}", self.source))?;
            return dfa_from_doc(&doc);
        }
        let alphabet = self.alphabet.as_deref().map(Alphabet::from_str_letters);
        compile_regex(&self.source, alphabet.as_ref()).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the acceptance probability of a word.
    Simulate {
        /// Automaton interchange file.
        qfa: PathBuf,
        /// Input word (letters concatenated; may be empty).
        word: String,
        /// Evaluate by summing measurement branches instead of densities.
        #[arg(long)]
        branches: bool,
        /// Branch count limit for --branches.
        #[arg(long, default_value_t = 1 << 20)]
        branch_limit: u64,
        /// Require exact rational input.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write the basis automaton recognizing Σ*a₁Σ*⋯Σ*a_kΣ*.
    BuildBasis {
        /// The letter sequence, e.g. `aba` (adjacent letters must differ).
        sequence: String,
        #[arg(long)]
        alphabet: String,
        /// Output file.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an event expression file on a word.
    Combine {
        /// File holding an expression such as `(had (basis "a") (fc (basis "b")))`.
        expr: PathBuf,
        word: String,
        /// Alphabet letters; defaults to the letters of the word and expression.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the flattened linear representation and verify its norms.
    Linrep {
        qfa: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide recognizability by a measure-only automaton with isolated
    /// cut-point. Exit 0 when the language is recognizable, 1 otherwise.
    Decide {
        #[command(flatten)]
        input: DfaInput,
        #[arg(long)]
        json: bool,
    },
    /// Print the transition monoid report of the minimal DFA.
    Monoid {
        #[command(flatten)]
        input: DfaInput,
        /// Element limit.
        #[arg(long, default_value_t = 1 << 20)]
        limit: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the supremum of the variation, or `infinite`.
    Variation {
        #[command(flatten)]
        input: DfaInput,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a recognizable language and synthesize a cut-point 1/2
    /// event, reporting the measured isolation. Exit 1 on non-members.
    Synthesize {
        #[command(flatten)]
        input: DfaInput,
        /// Verification word length.
        #[arg(long, default_value_t = 8)]
        check_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compile an easy formula (`fo(...)` / `ltl(...)` with `!`, `&`, `|`).
    LogicCompile {
        formula: String,
        #[arg(long)]
        alphabet: String,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized property corpus. Exit 1 on any failure.
    CheckInvariants {
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_qfa(path: &Path, exact: bool) -> Result<LoadedQfa> {
    let doc: QfaDoc = serde_json::from_str(&fs::read_to_string(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    load_qfa(&doc, exact, float_tol())
}

fn run() -> Result<u8> {
    match Cli::parse().command {
        Command::Simulate { qfa, word, branches, branch_limit, exact, json } => {
            let loaded = read_qfa(&qfa, exact)?;
            let (text, decimal) = match &loaded {
                LoadedQfa::Exact(a) => {
                    let p = if branches {
                        a.accept_prob_branches(&word, branch_limit)?
                    } else {
                        a.accept_prob(&word)?
                    };
                    (report::format_exact_prob(&p), p.to_f64())
                }
                LoadedQfa::Float(a) => {
                    let p = if branches {
                        a.accept_prob_branches(&word, branch_limit)?
                    } else {
                        a.accept_prob(&word)?
                    };
                    (format!("{p}"), p)
                }
            };
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "word": word, "probability": text, "decimal": decimal, "branches": branches })
                );
            } else {
                println!("{text}");
            }
            Ok(0)
        }
        Command::BuildBasis { sequence, alphabet, output, json } => {
            let seq = BasisSeq::parse(&sequence)?;
            let sigma = Alphabet::from_str_letters(&alphabet);
            let qfa: MonQfa<Exact> = build_basis_automaton(&seq, &sigma)?;
            let doc = qfa_to_doc(&qfa)?;
            fs::write(&output, serde_json::to_string_pretty(&doc)?)?;
            let meta = qfa.meta().expect("basis automata declare their cut-point");
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "sequence": sequence, "dim": qfa.dim(),
                        "cutpoint": format!("{}", meta.cutpoint),
                        "isolation": format!("{}", meta.isolation),
                        "output": output.display().to_string(),
                    })
                );
            } else {
                println!(
                    "wrote {} ({}-dimensional, cut-point {} isolated by {})",
                    output.display(),
                    qfa.dim(),
                    meta.cutpoint,
                    meta.isolation
                );
            }
            Ok(0)
        }
        Command::Combine { expr, word, alphabet, json } => {
            let text = fs::read_to_string(&expr)?;
            let sigma = match alphabet {
                Some(s) => Alphabet::from_str_letters(&s),
                None => {
                    // default: letters of the word plus all letters in the file
                    let mut letters: BTreeSet<char> = word.chars().collect();
                    letters.extend(text.chars().filter(|c| c.is_ascii_lowercase()));
                    Alphabet::new(letters)
                }
            };
            let event = parse_event::<Exact>(&text, &sigma)?;
            match event.value(&word) {
                Ok(p) => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({ "word": word, "value": report::format_exact_prob(&p), "decimal": p.to_f64() })
                        );
                    } else {
                        println!("{}", report::format_exact_prob(&p));
                    }
                }
                // wide amplification exceeds exact arithmetic; fall back
                Err(moqfa::Error::ExactLimit { .. }) => {
                    let p = event.value_f64(&word)?;
                    if json {
                        println!("{}", serde_json::json!({ "word": word, "value": p, "decimal": p }));
                    } else {
                        println!("{p}");
                    }
                }
                Err(e) => return Err(e.into()),
            }
            Ok(0)
        }
        Command::Linrep { qfa, exact, json } => match read_qfa(&qfa, exact)? {
            LoadedQfa::Exact(a) => run_linrep(&a, json, &ExactReal::zero()),
            LoadedQfa::Float(a) => run_linrep(&a, json, &float_tol()),
        },
        Command::Decide { input, json } => {
            let dfa = input.load()?;
            let verdict = is_lmo(&dfa, &DecideConfig::default())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report::verdict_doc(&verdict))?);
            } else {
                report::print_verdict(&verdict);
            }
            Ok(u8::from(!verdict.member))
        }
        Command::Monoid { input, limit, json } => {
            let dfa = input.load()?.minimize();
            let monoid = transition_monoid(&dfa, limit)?;
            let r = report::monoid_report(&monoid);
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                report::print_monoid_report(&r);
            }
            Ok(0)
        }
        Command::Variation { input, json } => {
            let dfa = input.load()?.minimize();
            let v = dfa.variation_sup();
            if json {
                let value = match v {
                    Variation::Finite(n) => serde_json::json!({ "variation": n }),
                    Variation::Infinite => serde_json::json!({ "variation": "infinite" }),
                };
                println!("{value}");
            } else {
                println!("{v}");
            }
            Ok(0)
        }
        Command::Synthesize { input, check_len, json } => {
            let dfa = input.load()?;
            let cfg = SynthesisConfig { check_len, ..Default::default() };
            match synthesize(&dfa, &cfg) {
                Ok(s) => {
                    let doc = report::synthesis_doc(&s);
                    if json {
                        println!("{}", serde_json::to_string_pretty(&doc)?);
                    } else {
                        report::print_synthesis(&doc);
                    }
                    Ok(0)
                }
                Err(moqfa::Error::NotLmoMember) => {
                    let verdict = is_lmo(&dfa, &cfg.decide)?;
                    if json {
                        println!("{}", serde_json::to_string_pretty(&report::verdict_doc(&verdict))?);
                    } else {
                        report::print_verdict(&verdict);
                    }
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::LogicCompile { formula, alphabet, output, json } => {
            let sigma = Alphabet::from_str_letters(&alphabet);
            let parsed = parse_formula(&formula)?;
            let dfa = parsed.compile(&sigma)?;
            let doc = dfa_to_doc(&dfa);
            let rendered = serde_json::to_string_pretty(&doc)?;
            match output {
                Some(path) => {
                    fs::write(&path, rendered)?;
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({ "states": dfa.state_count(), "output": path.display().to_string() })
                        );
                    } else {
                        println!("wrote {} ({} states)", path.display(), dfa.state_count());
                    }
                }
                None => println!("{rendered}"),
            }
            Ok(0)
        }
        Command::CheckInvariants { seed, samples, json } => {
            let reportv = run_invariants(seed, samples);
            if json {
                let checks: Vec<_> = reportv
                    .checks
                    .iter()
                    .map(|c| {
                        serde_json::json!({ "name": c.name, "cases": c.cases, "failures": c.failures })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({ "seed": reportv.seed, "samples": reportv.samples, "checks": checks, "passed": reportv.all_passed() })
                );
            } else {
                println!("seed {seed}, {samples} samples per check", );
                for c in &reportv.checks {
                    if c.passed() {
                        println!("ok   {} ({} cases)", c.name, c.cases);
                    } else {
                        println!("FAIL {} ({} cases):", c.name, c.cases);
                        for f in &c.failures {
                            println!("     {f}");
                        }
                    }
                }
            }
            Ok(u8::from(!reportv.all_passed()))
        }
    }
}

fn run_linrep<T: Scalar>(qfa: &MonQfa<T>, json: bool, tol: &T::Real) -> Result<u8> {
    let rep = linear_representation(qfa)?;
    let m = qfa.dim();
    let xi_ok = {
        let gap = rep.xi.norm_sq().sub(&T::Real::one());
        gap.partial_cmp(tol) != Some(std::cmp::Ordering::Greater)
            && T::Real::zero().sub(&gap).partial_cmp(tol) != Some(std::cmp::Ordering::Greater)
    };
    let projectors_ok =
        rep.letters.values().map(|p| p.is_projector(tol)).collect::<moqfa::Result<Vec<bool>>>()?.iter().all(|&b| b);
    let eta_bound = T::Real::from_ratio(moqfa::scalar::ratio(m as i128, 1));
    let eta_ok = rep.eta.norm_sq().partial_cmp(&eta_bound) != Some(std::cmp::Ordering::Greater);
    if json {
        let matrix_doc = |mat: &Matrix<T>| -> Vec<Vec<String>> {
            (0..mat.rows())
                .map(|i| (0..mat.cols()).map(|j| format!("{}", mat.at(i, j))).collect())
                .collect()
        };
        let letters: serde_json::Map<String, serde_json::Value> = rep
            .letters
            .iter()
            .map(|(c, p)| (c.to_string(), serde_json::json!(matrix_doc(p))))
            .collect();
        println!(
            "{}",
            serde_json::json!({
                "xi": matrix_doc(&rep.xi)[0],
                "letters": letters,
                "eta": matrix_doc(&rep.eta)[0],
                "xi_unit_norm": xi_ok,
                "letter_matrices_projectors": projectors_ok,
                "eta_within_sqrt_m": eta_ok,
            })
        );
    } else {
        println!("ξ =\n{}", report::format_matrix(&rep.xi));
        for (c, p) in &rep.letters {
            println!("P({c}) =\n{}", report::format_matrix(p));
        }
        println!("η =\n{}", report::format_matrix(&rep.eta));
        println!("‖ξ‖ = 1: {xi_ok}");
        println!("every P(c) is a projector: {projectors_ok}");
        println!("‖η‖ ≤ √{m}: {eta_ok}");
    }
    if xi_ok && projectors_ok && eta_ok {
        Ok(0)
    } else {
        Ok(1)
    }
}
