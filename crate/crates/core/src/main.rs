//! `bigo-wa` command-line front end.
//!
//! Exit codes: 0 IsBigO, 1 NotBigO, 2 Unknown, 64 usage error, 65 and up
//! for input and resource errors (see [`Error::exit_code`]).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use bigo_wa::automaton::{ratio_profile, validate_lmc, Query, Ratio, DEFAULT_WORD_CAP};
use bigo_wa::bounded::{self, BoundedOptions, RealExpFormula};
use bigo_wa::io::{self, Parsed};
use bigo_wa::rational::{format_rational, parse_rational};
use bigo_wa::unambiguous::{decide_unambiguous, is_unambiguous_from};
use bigo_wa::unary::decide_unary;
use bigo_wa::{reductions, Error, Result, Verdict};

#[derive(Parser, Debug)]
#[command(name = "bigo-wa", version, about = "Big-O decision procedures for weighted automata")]
struct Cli {
    /// Pretty human-readable output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct QueryArgs {
    /// Automaton document (JSON).
    file: PathBuf,
    /// State `s`; overrides the document's query.
    #[arg(long)]
    s: Option<String>,
    /// State `s'`; overrides the document's query.
    #[arg(long = "s-prime")]
    s_prime: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Unary,
    Unambiguous,
    Bounded,
    /// Input is a Δ document rather than an automaton.
    FinitelyAmbiguous,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReduceKind {
    BigTheta,
    FromBigTheta,
    Eventual,
    Value1,
    FromValue1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    Undecidable,
    Hardness,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether s is big-O of s'.
    Check {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        /// Bounding words for the bounded decider, e.g. `ab,c` or `a b|c`.
        #[arg(long)]
        words: Option<String>,
        /// Worker threads for the bounded decider's candidate loop.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Starting interval precision in bits.
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Write each unresolved sentence as an SMT-LIB 2 file into DIR.
        #[arg(long, value_name = "DIR")]
        emit_smt: Option<PathBuf>,
    },
    /// Report which deciders apply.
    Classify {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Exhaustive ratio table up to a length bound.
    Oracle {
        #[command(flatten)]
        query: QueryArgs,
        /// Longest word length enumerated.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Maximum number of enumerated words.
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        cap: u128,
        /// Include every word with its weights.
        #[arg(long)]
        entries: bool,
    },
    /// Apply a reduction and print the resulting document.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        #[command(flatten)]
        query: QueryArgs,
        /// Symbol used by the big-Θ gadgets (default: the first one).
        #[arg(long)]
        symbol: Option<String>,
        /// Completion weight δ for `eventual`, as `num/den`.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Build a labelled instance from a probabilistic automaton
    /// (`undecidable`) or a restricted Chrobak normal form (`hardness`).
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        /// Probabilistic automaton or Chrobak document (JSON).
        file: PathBuf,
    },
    /// Print the real-exponential sentences of the bounded or finitely
    /// ambiguous procedure without settling them.
    ExportFormula {
        #[command(flatten)]
        query: QueryArgs,
        /// Bounding words, as for `check`.
        #[arg(long)]
        words: Option<String>,
        /// Treat the input as a Δ document.
        #[arg(long)]
        delta: bool,
        /// Also write SMT-LIB 2 files into DIR.
        #[arg(long, value_name = "DIR")]
        emit_smt: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_query(a: &QueryArgs) -> Result<Parsed<Query>> {
    io::parse_query(&read(&a.file)?, a.s.as_deref(), a.s_prime.as_deref())
}

fn write_smt(dir: &Path, formulas: &[RealExpFormula]) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    formulas
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("formula-{i:03}.smt2"));
            fs::write(&path, f.to_smtlib()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(path.display().to_string())
        })
        .collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckReport {
    command: &'static str,
    decider: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_prime: Option<String>,
    #[serde(flatten)]
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    sub_queries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    smt_files: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    skipped: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    elapsed_ms: u128,
}

struct Outcome {
    verdict: Verdict,
    decider: &'static str,
    unresolved: Vec<RealExpFormula>,
    sub_queries: Option<usize>,
    candidates: Option<usize>,
    skipped: Vec<String>,
}

impl Outcome {
    fn plain(verdict: Verdict, decider: &'static str) -> Outcome {
        Outcome { verdict, decider, unresolved: Vec::new(), sub_queries: None, candidates: None, skipped: Vec::new() }
    }
}

fn run_bounded(q: &Query, opts: &BoundedOptions) -> Result<Outcome> {
    let r = bounded::decide_bounded(q, opts)?;
    Ok(Outcome {
        verdict: r.verdict,
        decider: "bounded",
        unresolved: r.unresolved,
        sub_queries: Some(r.sub_queries),
        candidates: Some(r.candidates),
        skipped: Vec::new(),
    })
}

fn decide(q: &Query, mode: Mode, opts: &BoundedOptions) -> Result<Outcome> {
    match mode {
        Mode::Unary => Ok(Outcome::plain(decide_unary(q)?, "unary")),
        Mode::Unambiguous => Ok(Outcome::plain(decide_unambiguous(q)?, "unambiguous")),
        Mode::Bounded => run_bounded(q, opts),
        Mode::FinitelyAmbiguous => unreachable!("handled by the caller"),
        Mode::Auto => {
            if q.s == q.s_prime {
                return Ok(Outcome::plain(Verdict::IsBigO, "trivial"));
            }
            let mut skipped = Vec::new();
            let attempts: [(&str, &dyn Fn() -> Result<Outcome>); 3] = [
                ("unambiguous", &|| Ok(Outcome::plain(decide_unambiguous(q)?, "unambiguous"))),
                ("unary", &|| Ok(Outcome::plain(decide_unary(q)?, "unary"))),
                ("bounded", &|| run_bounded(q, opts)),
            ];
            for (name, f) in attempts {
                match f() {
                    Ok(mut o) => {
                        o.skipped = skipped;
                        return Ok(o);
                    }
                    Err(Error::NotApplicable(m)) => skipped.push(format!("{name}: {m}")),
                    Err(e) => return Err(e),
                }
            }
            Err(Error::NotApplicable(format!("no decider applies ({})", skipped.join("; "))))
        }
    }
}

/// Runs the command and returns the report plus the exit code.
fn run(cli: &Cli) -> Result<(Value, i32)> {
    let start = Instant::now();
    match &cli.command {
        Command::Check { query, mode, words, parallel, precision_bits, emit_smt } => {
            let mut opts = BoundedOptions { words: None, threads: *parallel, start_bits: *precision_bits };
            let (outcome, s, sp, warnings) = if *mode == Mode::FinitelyAmbiguous {
                let delta = io::parse_delta(&read(&query.file)?)?;
                let (verdict, unresolved) = bounded::decide_finitely_ambiguous(&delta, *precision_bits)?;
                let o = Outcome { unresolved, ..Outcome::plain(verdict, "finitely-ambiguous") };
                (o, None, None, Vec::new())
            } else {
                let Parsed { value: q, warnings } = load_query(query)?;
                if let Some(w) = words {
                    opts.words = Some(io::parse_words(&q.automaton, w)?);
                }
                let o = decide(&q, *mode, &opts)?;
                let names = (q.automaton.state_name(q.s).to_string(), q.automaton.state_name(q.s_prime).to_string());
                (o, Some(names.0), Some(names.1), warnings)
            };
            let smt_files = match emit_smt {
                Some(dir) if !outcome.unresolved.is_empty() => write_smt(dir, &outcome.unresolved)?,
                _ => Vec::new(),
            };
            let code = outcome.verdict.exit_code();
            let report = CheckReport {
                command: "check",
                decider: outcome.decider,
                s,
                s_prime: sp,
                verdict: outcome.verdict,
                sub_queries: outcome.sub_queries,
                candidates: outcome.candidates,
                smt_files,
                skipped: outcome.skipped,
                warnings,
                elapsed_ms: start.elapsed().as_millis(),
            };
            Ok((serde_json::to_value(report).expect("report serializes"), code))
        }
        Command::Classify { query } => {
            let Parsed { value: q, warnings } = load_query(query)?;
            let wa = &q.automaton;
            let letters = bounded::detect_letter_bounded(wa, q.s);
            let unary = wa.num_symbols() == 1;
            let un_s = is_unambiguous_from(wa, q.s).is_unambiguous();
            let un_sp = is_unambiguous_from(wa, q.s_prime).is_unambiguous();
            let mut applicable = Vec::new();
            if un_s && un_sp {
                applicable.push("unambiguous");
            }
            if unary {
                applicable.push("unary");
            }
            if letters.is_some() {
                applicable.push("bounded");
            }
            let report = json!({
                "command": "classify",
                "unary": unary,
                "unambiguousFromS": un_s,
                "unambiguousFromSPrime": un_sp,
                "letterBounded": letters.is_some(),
                "letters": letters.map(|l| l.iter().map(|&a| wa.symbol_name(a).to_string()).collect::<Vec<_>>()),
                "labelledMarkovChain": validate_lmc(wa).is_ok(),
                "applicable": applicable,
                "warnings": warnings,
            });
            Ok((report, 0))
        }
        Command::Oracle { query, max_len, cap, entries } => {
            let Parsed { value: q, warnings } = load_query(query)?;
            let wa = &q.automaton;
            let p = ratio_profile(&q, *max_len, *cap)?;
            let mut per_length: Vec<(usize, Ratio, String)> = Vec::new();
            for e in &p.entries {
                let r = e.ratio();
                match per_length.iter_mut().find(|x| x.0 == e.word.len()) {
                    Some(x) if r > x.1 => *x = (e.word.len(), r, wa.format_word(&e.word)),
                    Some(_) => {}
                    None => per_length.push((e.word.len(), r, wa.format_word(&e.word))),
                }
            }
            let mut report = json!({
                "command": "oracle",
                "maxLen": max_len,
                "words": p.entries.len(),
                "maxRatio": p.max_ratio.to_string(),
                "argmax": p.argmax.as_ref().map(|w| wa.format_word(w)),
                "perLength": per_length
                    .iter()
                    .map(|(n, r, w)| json!({"length": n, "maxRatio": r.to_string(), "word": w}))
                    .collect::<Vec<_>>(),
                "warnings": warnings,
            });
            if *entries {
                report["entries"] = p
                    .entries
                    .iter()
                    .map(|e| {
                        json!({
                            "word": wa.format_word(&e.word),
                            "weightS": format_rational(&e.weight_s),
                            "weightSPrime": format_rational(&e.weight_s_prime),
                            "ratio": e.ratio().to_string(),
                        })
                    })
                    .collect();
            }
            Ok((report, 0))
        }
        Command::Reduce { kind, query, symbol, delta } => {
            let text = read(&query.file)?;
            let doc = io::parse_document(&text)?;
            let out = match kind {
                ReduceKind::Value1 => {
                    let pa = io::pa_from_doc(&doc)?.value;
                    io::query_to_doc(&reductions::value1_to_bigo(&pa)?, None)
                }
                _ => {
                    let q = io::query_from_doc(&doc, query.s.as_deref(), query.s_prime.as_deref())?.value;
                    let sym = symbol.as_deref().map(|a| q.automaton.symbol(a)).transpose()?;
                    match kind {
                        ReduceKind::BigTheta => io::query_to_doc(&reductions::to_big_theta(&q, sym)?, None),
                        ReduceKind::FromBigTheta => io::query_to_doc(&reductions::from_big_theta(&q, sym)?, None),
                        ReduceKind::Eventual => {
                            let d = delta.as_deref().map(|d| parse_rational(d).map(|p| p.value)).transpose()?;
                            io::query_to_doc(&reductions::complete_for_eventual(&q, d, None)?, None)
                        }
                        ReduceKind::FromValue1 => io::pa_to_doc(&reductions::bigo_to_value1(&q)?.pa),
                        ReduceKind::Value1 => unreachable!("handled above"),
                    }
                }
            };
            Ok((serde_json::to_value(out).expect("document serializes"), 0))
        }
        Command::Generate { kind, file } => {
            let text = read(file)?;
            let out = match kind {
                GenerateKind::Undecidable => {
                    let pa = io::pa_from_doc(&io::parse_document(&text)?)?.value;
                    let inst = reductions::gen_undecidable(&pa)?;
                    let q = Query::new(inst.lmc.automaton().clone(), inst.s, inst.s_prime)?;
                    let mut v = serde_json::to_value(io::query_to_doc(&q, None)).expect("document serializes");
                    v["marked"] = json!({ "s''": q.automaton.state_name(inst.s_double_prime) });
                    v
                }
                GenerateKind::Hardness => {
                    let c = io::parse_chrobak(&text)?;
                    let inst = reductions::gen_hardness(&c)?;
                    let truth = if inst.is_big_o { "IsBigO" } else { "NotBigO" };
                    serde_json::to_value(io::query_to_doc(&inst.query, Some(truth))).expect("document serializes")
                }
            };
            Ok((out, 0))
        }
        Command::ExportFormula { query, words, delta, emit_smt } => {
            let text = read(&query.file)?;
            let formulas = if *delta {
                bounded::finitely_ambiguous_formula(&io::parse_delta(&text)?)?
            } else {
                let q = io::parse_query(&text, query.s.as_deref(), query.s_prime.as_deref())?.value;
                let w = words.as_deref().map(|w| io::parse_words(&q.automaton, w)).transpose()?;
                bounded::bounded_formulas(&q, w.as_deref())?
            };
            let files = match emit_smt {
                Some(dir) => write_smt(dir, &formulas)?,
                None => Vec::new(),
            };
            let report = json!({
                "command": "export-formula",
                "formulas": formulas
                    .iter()
                    .map(|f| json!({"provenance": f.provenance, "sentence": f.to_string()}))
                    .collect::<Vec<_>>(),
                "smtFiles": files,
            });
            Ok((report, 0))
        }
    }
}

fn human(v: &Value) -> String {
    let Some(obj) = v.as_object() else { return format!("{v}\n") };
    let mut out = String::new();
    for (k, x) in obj {
        match x {
            Value::String(s) => out += &format!("{k}: {s}\n"),
            Value::Array(a) if a.is_empty() => {}
            Value::Array(a) => {
                out += &format!("{k}:\n");
                for item in a {
                    match item {
                        Value::String(s) => out += &format!("  - {s}\n"),
                        other => out += &format!("  - {other}\n"),
                    }
                }
            }
            Value::Null => {}
            other => out += &format!("{k}: {other}\n"),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, code)) => {
            let text = if cli.human { human(&report) } else { io::to_pretty_json(&report) + "\n" };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            if cli.human {
                eprintln!("error: {e}");
            } else {
                eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
