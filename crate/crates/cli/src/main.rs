//! `umps`: batch front end for the uMPS workbench.
//!
//! Every subcommand writes one JSON report (or CSV for tables) and exits
//! with 0 when its check passes, 1 when it does not and 2 on errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use umps_core::arith::{
    is_prime_u64, ComplexF, QuadExt, Rational, ScalarText, DEFAULT_PRIME, SECOND_PRIME,
};
use umps_core::necklace::CyclicTensor;
use umps_core::poly::PolyFile;
use umps_core::umps::{evaluate_umps, MatrixTuple};
use umps_core::{Error, Result};
use umps_lab::membership_lab::{
    builtin_family, certify_not_member_e012, certify_not_member_wstate, classify_cell,
    decide_membership_224, default_grid, limit_experiment,
};
use umps_lab::trace_algebra::{parse_word, verify_word_identity};
use umps_lab::variety_lab::{
    fiber_count, implicitize_with_primes, jacobian_dimension, linear_span_dimension,
    surjectivity_check, LinearSubspace, SurjectivityVerdict,
};

const HEARTBEAT: Duration = Duration::from_secs(10);

#[derive(Parser)]
#[command(
    name = "umps",
    version,
    about = "Uniform matrix product states: exact experiments"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// First prime for modular computations.
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on Gröbner reduction steps.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Comma separated λ values, decreasing.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Include wall time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate T_N on a tuple file.
    Eval {
        tuple: PathBuf,
        #[arg(short = 'n', long = "sites")]
        n: usize,
    },
    /// Closedness table for d = 2.
    Table {
        #[arg(long, default_value_t = 3)]
        dmax: usize,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
    /// Jacobian rank of T_N at random points.
    Dimension {
        bond: usize,
        d: usize,
        n: usize,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Dimension of the linear span of uMPS(D, d, N).
    Span {
        bond: usize,
        d: usize,
        n: usize,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Whether two words have equal traces for all 2×2 pairs.
    Identity { left: String, right: String },
    /// Minimal generators of the ideal of uMPS(2, 2, N) by degree.
    Implicitize {
        bond: usize,
        d: usize,
        n: usize,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Size of a generic fiber of the trace parametrization.
    Fiber { n: usize },
    /// Ideal dimension of T_N restricted to a linear subspace.
    Surjectivity {
        /// Built-in subspace; only `324` exists.
        #[arg(long, conflicts_with = "subspace")]
        example: Option<u32>,
        /// Subspace file in the polynomial text format.
        #[arg(long, requires_all = ["bond", "d"])]
        subspace: Option<PathBuf>,
        #[arg(long)]
        bond: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(short = 'n', long = "sites", default_value_t = 4)]
        n: usize,
    },
    /// Exact membership in uMPS(2, 2, 4) for a cyclic tensor over ℚ(√2).
    Membership { point: PathBuf },
    /// Convergence rates of the limit families.
    Limits {
        #[arg(default_values_t = ["e012".to_string(), "wstate(4)".to_string(), "wstate(5)".to_string()])]
        families: Vec<String>,
    },
    /// Infeasibility certificates.
    Certify {
        #[command(subcommand)]
        which: Certificate,
    },
}

#[derive(Subcommand)]
enum Certificate {
    /// e012 is not in uMPS(2, 3, 3).
    E012,
    /// W_N is not in uMPS(2, 2, N).
    Wstate { n: Vec<usize> },
}

struct Outcome {
    pass: bool,
    summary: String,
    result: Value,
    primes: Vec<u64>,
    csv: Option<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String, result: Value) -> Self {
        Outcome {
            pass,
            summary,
            result,
            primes: vec![],
            csv: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let start = Instant::now();
    let (stop, ticks) = mpsc::channel::<()>();
    let heartbeat = thread::spawn(move || {
        while let Err(mpsc::RecvTimeoutError::Timeout) = ticks.recv_timeout(HEARTBEAT) {
            eprintln!(
                "umps {name}: running, {}s elapsed",
                start.elapsed().as_secs()
            );
        }
    });
    let outcome = run(&cli);
    let _ = stop.send(());
    let _ = heartbeat.join();
    match outcome.and_then(|o| emit(&cli.opts, name, o, start)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("umps {name}: error: {e}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Table { .. } => "table",
        Command::Dimension { .. } => "dimension",
        Command::Span { .. } => "span",
        Command::Identity { .. } => "identity",
        Command::Implicitize { .. } => "implicitize",
        Command::Fiber { .. } => "fiber",
        Command::Surjectivity { .. } => "surjectivity",
        Command::Membership { .. } => "membership",
        Command::Limits { .. } => "limits",
        Command::Certify { .. } => "certify",
    }
}

fn emit(opts: &GlobalOpts, name: &str, o: Outcome, start: Instant) -> Result<bool> {
    let text = match (opts.format, &o.csv) {
        (Format::Csv, Some(csv)) => csv.clone(),
        (Format::Csv, None) => {
            return Err(Error::InvalidArgument(format!("{name} has no CSV output")));
        }
        (Format::Json, _) => {
            let mut report = json!({
                "tool": "umps",
                "version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "seed": opts.seed,
                "primes": o.primes,
                "pass": o.pass,
                "summary": o.summary,
                "result": o.result,
            });
            if opts.timing {
                report["wall_time_s"] = json!(start.elapsed().as_secs_f64());
            }
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    match &opts.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(o.pass)
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &PathBuf) -> Result<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::ParseAt {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn primes(opts: &GlobalOpts) -> Result<[u64; 2]> {
    match opts.prime {
        None => Ok([DEFAULT_PRIME, SECOND_PRIME]),
        Some(p) if p >= 1 << 62 || !is_prime_u64(p) => Err(Error::InvalidArgument(format!(
            "--prime {p} must be a prime below 2^62"
        ))),
        Some(p) if p == SECOND_PRIME => Ok([p, DEFAULT_PRIME]),
        Some(p) => Ok([p, SECOND_PRIME]),
    }
}

fn grid(opts: &GlobalOpts) -> Result<Vec<f64>> {
    match &opts.grid {
        None => Ok(default_grid()),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad λ value {t:?}")))
            })
            .collect(),
    }
}

fn eval_typed<K: ScalarText>(v: &Value, n: usize) -> Result<Value> {
    let tuple = MatrixTuple::<K>::from_json(v)?;
    Ok(evaluate_umps(&tuple, n)?.to_json())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    let seed = opts.seed;
    match &cli.command {
        Command::Eval { tuple, n } => {
            let v = read_json(tuple)?;
            let field = v.get("field").and_then(Value::as_str).unwrap_or("QQ");
            let t = match field {
                "QQ" => eval_typed::<Rational>(&v, *n)?,
                "QQ(sqrt2)" => eval_typed::<QuadExt>(&v, *n)?,
                "CC" => eval_typed::<ComplexF>(&v, *n)?,
                f => return Err(Error::Parse(format!("unknown field {f:?}"))),
            };
            Ok(Outcome::new(true, format!("T_{n} over {field}"), t))
        }
        Command::Table { dmax, nmax } => {
            if !(1..=3).contains(dmax) || !(1..=7).contains(nmax) {
                return Err(Error::InvalidArgument(
                    "table needs 1 ≤ dmax ≤ 3 and 1 ≤ nmax ≤ 7".into(),
                ));
            }
            let mut cells = Vec::new();
            for bond in 1..=*dmax {
                for n in 1..=*nmax {
                    cells.push(classify_cell(bond, n, seed, opts.budget)?);
                }
            }
            let disagreements: Vec<String> = cells
                .iter()
                .filter(|c| c.table_letter.is_some_and(|l| l != c.letter()))
                .map(|c| format!("D={} N={}", c.bond, c.n))
                .collect();
            let mut csv = String::from("D,d,N,ambient,expected,jacobian_rank,fills,closedness,computed_letter,table_letter\n");
            for c in &cells {
                csv += &format!(
                    "{},2,{},{},{},{},{},{},{},{}\n",
                    c.bond,
                    c.n,
                    c.ambient,
                    c.expected,
                    c.jacobian_rank,
                    c.fills,
                    c.closedness.describe(),
                    c.letter(),
                    c.table_letter.map(String::from).unwrap_or_default()
                );
            }
            let summary = if disagreements.is_empty() {
                format!("{} cells, all letters agree with the table", cells.len())
            } else {
                format!("letters differ at {}", disagreements.join(", "))
            };
            let mut o = Outcome::new(
                disagreements.is_empty(),
                summary,
                json!({ "cells": cells.iter().map(|c| c.to_json()).collect::<Vec<_>>() }),
            );
            o.csv = Some(csv);
            Ok(o)
        }
        Command::Dimension { bond, d, n, trials } => {
            let r = jacobian_dimension(*bond, *d, *n, *trials, seed)?;
            let pass = r.jacobian_rank == r.expected;
            let summary = format!(
                "jacobian rank {}, expected {}, ambient {}{}",
                r.jacobian_rank,
                r.expected,
                r.ambient,
                if r.fills_ambient { ", fills" } else { "" }
            );
            Ok(Outcome::new(pass, summary, r.to_json()))
        }
        Command::Span {
            bond,
            d,
            n,
            samples,
        } => {
            let r = linear_span_dimension(*bond, *d, *n, *samples, seed)?;
            let mut o = Outcome::new(
                true,
                format!("span dimension {} of {}", r.rank, r.ambient),
                r.to_json(),
            );
            o.primes = r.primes.to_vec();
            Ok(o)
        }
        Command::Identity { left, right } => {
            let equal = verify_word_identity(&parse_word(left)?, &parse_word(right)?)?;
            Ok(Outcome::new(
                equal,
                format!("tr({left}) {} tr({right})", if equal { "=" } else { "≠" }),
                json!({ "left": left, "right": right, "identity": equal }),
            ))
        }
        Command::Implicitize { bond, d, n, bound } => {
            let primes = primes(opts)?;
            let r = implicitize_with_primes(*bond, *d, *n, *bound, seed, primes)?;
            let counts: Vec<String> = r
                .generator_counts()
                .iter()
                .filter(|(_, c)| *c > 0)
                .map(|(k, c)| format!("{c} of degree {k}"))
                .collect();
            let total = r.total_generators();
            let mut summary = format!(
                "{total} generator{}{}",
                if total == 1 { "" } else { "s" },
                if counts.is_empty() {
                    String::new()
                } else {
                    format!(", {}", counts.join(", "))
                }
            );
            if let Some(m) = r.matches_golden {
                summary += &format!(", matches golden f224: {m}");
            }
            let pass = r.counts_agree && r.matches_golden != Some(false);
            let mut o = Outcome::new(pass, summary, r.to_json());
            o.primes = primes.to_vec();
            Ok(o)
        }
        Command::Fiber { n } => {
            let r = fiber_count(*n, seed, opts.budget)?;
            let summary = format!(
                "dim {}, degree {}, matches N: {}",
                r.ideal_dim,
                r.degree.map_or("n/a".to_string(), |d| d.to_string()),
                r.matches_n
            );
            Ok(Outcome::new(r.matches_n, summary, r.to_json()))
        }
        Command::Surjectivity {
            example,
            subspace,
            bond,
            d,
            n,
        } => {
            let sub = match (example, subspace) {
                (Some(324), None) => LinearSubspace::example_324(),
                (Some(e), None) => {
                    return Err(Error::InvalidArgument(format!("no built-in subspace {e}")))
                }
                (None, Some(path)) => {
                    let file = PolyFile::<Rational>::parse(&read(path)?)?;
                    LinearSubspace::from_file(&file, bond.unwrap(), d.unwrap())?
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "give --example 324 or --subspace FILE".into(),
                    ))
                }
            };
            let r = surjectivity_check(&sub, *n, opts.budget, seed)?;
            let pass = r.verdict == SurjectivityVerdict::ClosedAndFills;
            let mut summary = format!("ideal dim {}; {}", r.ideal_dim, r.verdict.name());
            if pass {
                summary += &format!("; uMPS({},{},{}) fills", r.bond, r.d, r.n);
            }
            let mut o = Outcome::new(pass, summary, r.to_json());
            o.primes = vec![DEFAULT_PRIME, SECOND_PRIME];
            Ok(o)
        }
        Command::Membership { point } => {
            let t = CyclicTensor::<QuadExt>::from_json(&read_json(point)?)?;
            let v = decide_membership_224(&t)?;
            let in_set = v.in_set == Some(true);
            let summary = format!("in closure: {}, in uMPS(2,2,4): {in_set}", v.in_closure);
            Ok(Outcome::new(in_set, summary, v.to_json()))
        }
        Command::Limits { families } => {
            let grid = grid(opts)?;
            let mut reports = Vec::new();
            for name in families {
                reports.push(limit_experiment(&builtin_family(name)?, &grid)?);
            }
            let pass = reports.iter().all(|r| r.pass);
            let summary = reports
                .iter()
                .map(|r| match r.slope {
                    Some(s) => format!("{}: slope {s:.3} (claimed {})", r.label, r.claimed_rate),
                    None => format!("{}: exact", r.label),
                })
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Outcome::new(
                pass,
                summary,
                json!({ "families": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>() }),
            ))
        }
        Command::Certify {
            which: Certificate::E012,
        } => {
            let c = certify_not_member_e012()?;
            let summary = format!("e012 not in uMPS(2,3,3): {}", c.certified);
            Ok(Outcome::new(c.certified, summary, c.to_json()))
        }
        Command::Certify {
            which: Certificate::Wstate { n },
        } => {
            let ns = if n.is_empty() {
                vec![4, 5, 6]
            } else {
                n.clone()
            };
            let certs = thread::scope(|s| {
                let handles: Vec<_> = ns
                    .iter()
                    .map(|&k| s.spawn(move || certify_not_member_wstate(k, opts.budget)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect::<Result<Vec<_>>>()
            })?;
            let summary = certs
                .iter()
                .map(|c| {
                    format!(
                        "W_{}: {}",
                        c.n,
                        if c.certified {
                            "not a member"
                        } else {
                            "member"
                        }
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Outcome::new(
                certs.iter().all(|c| c.certified),
                summary,
                json!({ "certificates": certs.iter().map(|c| c.to_json()).collect::<Vec<_>>() }),
            ))
        }
    }
}
