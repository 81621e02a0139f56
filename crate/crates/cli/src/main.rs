//! `permsub`: detect, count and search for arithmetic-patterned subsequences.
//!
//! Exit codes: 0 ok, 1 a corpus claim failed, 2 usage or input error, 3 the search
//! budget ran out before an answer.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permsub_core::bounds::BoundReport;
use permsub_core::constructions::{
    self, odda_double, parse_corpus, known_witness, staircase_avoider, two_run_permutation,
    BUILTIN_CORPUS,
};
use permsub_core::pattern::all_hits;
use permsub_core::search::{
    self, exists_avoider, threshold_resumable, Budget, Checkpoint, SearchConfig, SearchStatus,
    ThresholdOutcome,
};
use permsub_core::{count_hits, find_hit, Error, Flavor, PatternSpec, Permutation};
use serde_json::{json, Value};

use report::{RunReport, Stats};

const EXIT_CLAIM_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "permsub", version, about = "Arithmetic-patterned subsequences in permutations")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the first hit (lexicographic by positions) in each permutation.
    Detect {
        #[command(flatten)]
        input: PermInput,
        #[command(flatten)]
        spec: SpecArgs,
        /// List every hit instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Count the hits in each permutation.
    Count {
        #[command(flatten)]
        input: PermInput,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Decide whether some permutation of length n avoids the pattern.
    Search {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Find the least n at which every permutation contains the pattern.
    Threshold {
        #[command(flatten)]
        spec: SpecArgs,
        /// First n to search (defaults to k).
        #[arg(long)]
        n_start: Option<usize>,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        #[command(flatten)]
        run: RunArgs,
        /// Resume from this file if it exists; written when the budget runs out.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Exact minimum number of hits over all permutations of length n.
    MinCount {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Evaluate the closed-form bounds.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        monotone: bool,
        /// Known threshold f(k, ell), enabling the F lower bound.
        #[arg(long)]
        f: Option<u64>,
    },
    /// Build a permutation from one of the explicit families.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        /// Witness id for `--family witness`.
        #[arg(long)]
        id: Option<String>,
        /// Seed permutation for `--family odda` (defaults to `1`).
        #[arg(long)]
        perm: Option<String>,
        /// Number of doublings for `--family odda`.
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// Re-check the claims of a witness corpus.
    Verify {
        #[arg(long, conflicts_with = "all_builtin", required_unless_present = "all_builtin")]
        corpus_file: Option<PathBuf>,
        #[arg(long)]
        all_builtin: bool,
    },
    /// Print the built-in witness corpus file.
    Corpus,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Staircase,
    Odda,
    TwoRun,
    Identity,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Add,
    Mul,
    Inv,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Add => Flavor::Additive,
            FlavorArg::Mul => Flavor::Multiplicative,
            FlavorArg::Inv => Flavor::InverseAdditive,
        }
    }
}

#[derive(Args)]
struct SpecArgs {
    /// Subsequence length.
    #[arg(long)]
    k: usize,
    /// Multiplier.
    #[arg(long)]
    ell: u32,
    #[arg(long, value_enum, default_value = "add")]
    flavor: FlavorArg,
    /// Only count strictly monotone subsequences.
    #[arg(long)]
    monotone: bool,
}

impl SpecArgs {
    fn spec(&self) -> Result<PatternSpec, Error> {
        PatternSpec::new(self.k, self.ell, self.flavor.into(), self.monotone)
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PermInput {
    /// Comma-separated one-line notation, e.g. `1,4,3,5,2`.
    #[arg(long)]
    perm: Option<String>,
    /// File with one permutation per line.
    #[arg(long)]
    perm_file: Option<PathBuf>,
}

impl PermInput {
    fn load(&self) -> Result<Vec<Permutation>, String> {
        if let Some(p) = &self.perm {
            return p.parse().map(|p| vec![p]).map_err(|e: Error| e.to_string());
        }
        let path = self.perm_file.as_ref().expect("clap enforces one source");
        let text = read(path)?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                l.parse::<Permutation>()
                    .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))
            })
            .collect()
    }

    fn describe(&self) -> Value {
        match (&self.perm, &self.perm_file) {
            (Some(p), _) => json!({ "perm": p }),
            (_, Some(f)) => json!({ "perm_file": f.display().to_string() }),
            _ => Value::Null,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads for the search.
    #[arg(long, env = "PERMSUB_THREADS", default_value_t = 1)]
    threads: usize,
    /// Stop after visiting this many search nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    budget_secs: Option<f64>,
}

impl RunArgs {
    fn config(&self) -> Result<SearchConfig, String> {
        let max_time = match self.budget_secs {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(format!("--budget-secs must be a non-negative number, got {s}"))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SearchConfig::default()
            .with_threads(self.threads)
            .with_budget(Budget {
                max_nodes: self.budget_nodes,
                max_time,
            }))
    }

    fn describe(&self) -> Value {
        json!({
            "threads": self.threads,
            "budget_nodes": self.budget_nodes,
            "budget_secs": self.budget_secs,
        })
    }
}

/// A finished command: its report and exit code.
struct Outcome {
    report: RunReport,
    code: u8,
}

impl Outcome {
    fn ok(report: RunReport) -> Self {
        Outcome { report, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn hit_json(hit: &permsub_core::Hit) -> Value {
    serde_json::to_value(hit).expect("hit serializes")
}

fn status_code(status: SearchStatus) -> u8 {
    if status == SearchStatus::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        0
    }
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn run(command: Command) -> Result<Outcome, String> {
    match command {
        Command::Detect { input, spec, all } => {
            let s = spec.spec().map_err(err)?;
            let perms = input.load()?;
            let mut results = Vec::new();
            for p in &perms {
                let hit = if all {
                    json!(all_hits(p, &s).map_err(err)?.iter().map(hit_json).collect::<Vec<_>>())
                } else {
                    find_hit(p, &s).map_err(err)?.as_ref().map_or(Value::Null, hit_json)
                };
                let key = if all { "hits" } else { "hit" };
                results.push(json!({ "perm": p.to_string(), key: hit }));
            }
            Ok(Outcome::ok(RunReport::new(
                "detect",
                Some(s),
                input.describe(),
                json!({ "results": results }),
            )))
        }
        Command::Count { input, spec } => {
            let s = spec.spec().map_err(err)?;
            let perms = input.load()?;
            let results = perms
                .iter()
                .map(|p| Ok(json!({ "perm": p.to_string(), "count": count_hits(p, &s).map_err(err)? })))
                .collect::<Result<Vec<_>, String>>()?;
            Ok(Outcome::ok(RunReport::new(
                "count",
                Some(s),
                input.describe(),
                json!({ "results": results }),
            )))
        }
        Command::Search { n, spec, run } => {
            let s = spec.spec().map_err(err)?;
            let cfg = run.config()?;
            let o = exists_avoider(n, &s, &cfg).map_err(err)?;
            let mut inputs = run.describe();
            inputs["n"] = json!(n);
            let report = RunReport::new(
                "search",
                Some(s),
                inputs,
                json!({
                    "n": n,
                    "status": o.status,
                    "witness": o.witness.as_ref().map(ToString::to_string),
                    "reason": o.reason,
                }),
            )
            .with_stats(Stats {
                nodes: o.nodes_explored,
                elapsed_ms: ms(o.elapsed),
                parallel: o.parallel,
            });
            Ok(Outcome {
                report,
                code: status_code(o.status),
            })
        }
        Command::Threshold {
            spec,
            n_start,
            n_max,
            run,
            checkpoint,
        } => cmd_threshold(spec.spec().map_err(err)?, n_start, n_max, &run, checkpoint),
        Command::MinCount { n, spec } => {
            let s = spec.spec().map_err(err)?;
            let started = std::time::Instant::now();
            let r = search::min_count(n, &s).map_err(err)?;
            let report = RunReport::new(
                "min-count",
                Some(s),
                json!({ "n": n }),
                json!({ "n": n, "minimum": r.minimum, "argmin": r.argmin.to_string() }),
            )
            .with_stats(Stats {
                nodes: r.nodes,
                elapsed_ms: ms(started.elapsed()),
                parallel: false,
            });
            Ok(Outcome::ok(report))
        }
        Command::Bounds {
            k,
            ell,
            n,
            monotone,
            f,
        } => {
            let b = BoundReport::compute(k, ell, n, monotone, f).map_err(err)?;
            Ok(Outcome::ok(RunReport::new(
                "bounds",
                None,
                json!({ "k": k, "ell": ell, "n": n, "monotone": monotone, "f": f }),
                serde_json::to_value(b).expect("bounds serialize"),
            )))
        }
        Command::Construct {
            family,
            k,
            n,
            a,
            id,
            perm,
            iterations,
        } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or(format!("this family needs --{flag}"));
            let (name, p, spec) = match family {
                Family::Staircase => {
                    let k = need(k, "k")?;
                    let p = staircase_avoider(k).map_err(err)?;
                    ("staircase", p, Some(PatternSpec::additive(k, 2)))
                }
                Family::Odda => {
                    let mut p: Permutation = match &perm {
                        Some(s) => s.parse().map_err(err)?,
                        None => Permutation::identity(1),
                    };
                    for _ in 0..iterations {
                        if p.len() > u32::MAX as usize / 4 {
                            return Err("odda doubling exceeds the supported length".into());
                        }
                        p = odda_double(&p);
                    }
                    ("odda", p, None)
                }
                Family::TwoRun => {
                    let p = two_run_permutation(need(n, "n")?, need(a, "a")?).map_err(err)?;
                    let s = PatternSpec::additive(3, 2).with_monotone(true);
                    ("two-run", p, Some(s))
                }
                Family::Identity => {
                    let n = need(n, "n")?;
                    if n == 0 {
                        return Err("--n must be at least 1".into());
                    }
                    ("identity", constructions::identity(n), None)
                }
                Family::Witness => {
                    let id = id.as_deref().ok_or("this family needs --id")?;
                    let r = known_witness(id).map_err(err)?;
                    ("witness", r.permutation, Some(r.spec))
                }
            };
            let mut result = json!({ "n": p.len(), "permutation": p.to_string() });
            if let Some(s) = spec {
                result["hits"] = json!(count_hits(&p, &s).map_err(err)?);
            }
            if matches!(family, Family::Odda) {
                result["monotone_3ap"] = json!(permsub_core::pattern::has_monotone_3ap(&p));
            }
            Ok(Outcome::ok(RunReport::new(
                "construct",
                spec,
                json!({ "family": name, "k": k, "n": n, "a": a, "id": id, "perm": perm, "iterations": iterations }),
                result,
            )))
        }
        Command::Verify {
            corpus_file,
            all_builtin,
        } => {
            let (source, text) = match &corpus_file {
                Some(path) => (path.display().to_string(), read(path)?),
                None => ("builtin".to_string(), BUILTIN_CORPUS.to_string()),
            };
            debug_assert!(all_builtin || corpus_file.is_some());
            let records = parse_corpus(&text).map_err(|e| format!("{source}: {e}"))?;
            let mut failed = 0;
            let results: Vec<Value> = records
                .iter()
                .map(|r| {
                    let verdict = r.verify();
                    failed += verdict.is_err() as usize;
                    json!({
                        "id": r.id,
                        "n": r.n,
                        "spec": r.spec,
                        "claim": r.claim,
                        "ok": verdict.is_ok(),
                        "detail": verdict.err().map(|e| e.to_string()),
                    })
                })
                .collect();
            let report = RunReport::new(
                "verify",
                None,
                json!({ "corpus": source }),
                json!({ "records": records.len(), "passed": records.len() - failed, "failed": failed, "results": results }),
            );
            Ok(Outcome {
                report,
                code: if failed == 0 { 0 } else { EXIT_CLAIM_FAILED },
            })
        }
        Command::Corpus => unreachable!("handled before dispatch"),
    }
}

fn cmd_threshold(
    spec: PatternSpec,
    n_start: Option<usize>,
    n_max: usize,
    run: &RunArgs,
    checkpoint: Option<PathBuf>,
) -> Result<Outcome, String> {
    let cfg = run.config()?;
    let resume = match &checkpoint {
        Some(path) if path.exists() => {
            let cp: Checkpoint = read(path)?
                .parse()
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Some(cp)
        }
        _ => None,
    };
    let resumed = resume.is_some();
    let (outcome, next) =
        threshold_resumable(&spec, n_start, n_max, &cfg, resume).map_err(err)?;

    let checkpoint_state = match (&checkpoint, &next) {
        (Some(path), Some(cp)) => {
            std::fs::write(path, cp.to_string()).map_err(|e| format!("{}: {e}", path.display()))?;
            "written"
        }
        (Some(path), None) if path.exists() => {
            std::fs::remove_file(path).map_err(|e| format!("{}: {e}", path.display()))?;
            "cleared"
        }
        _ => "none",
    };

    let per_n: Vec<Value> = outcome
        .per_n()
        .iter()
        .map(|s| {
            json!({
                "n": s.n,
                "status": s.status,
                "nodes": s.nodes_explored,
                "elapsed_ms": ms(s.elapsed),
                "witness": s.witness.as_ref().map(ToString::to_string),
            })
        })
        .collect();
    let nodes = outcome.per_n().iter().map(|s| s.nodes_explored).sum();
    let elapsed = outcome.per_n().iter().map(|s| s.elapsed).sum();
    let (result, code) = match &outcome {
        ThresholdOutcome::Resolved(r) => (
            json!({
                "status": "resolved",
                "threshold": r.threshold,
                "largest_avoider": r.largest_avoider.to_string(),
                "per_n": per_n,
            }),
            0,
        ),
        ThresholdOutcome::Unresolved { reason, .. } => (
            json!({ "status": "unresolved", "reason": reason, "per_n": per_n }),
            if next.is_some() { EXIT_INCONCLUSIVE } else { 0 },
        ),
    };
    let mut inputs = run.describe();
    inputs["n_start"] = json!(n_start.unwrap_or(spec.k()));
    inputs["n_max"] = json!(n_max);
    inputs["checkpoint"] = json!(checkpoint.as_ref().map(|p| p.display().to_string()));
    inputs["resumed"] = json!(resumed);
    let mut result = result;
    result["checkpoint"] = json!(checkpoint_state);
    let report = RunReport::new("threshold", Some(spec), inputs, result).with_stats(Stats {
        nodes,
        elapsed_ms: ms(elapsed),
        parallel: run.threads > 1,
    });
    Ok(Outcome { report, code })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Corpus = cli.command {
        print!("{BUILTIN_CORPUS}");
        return ExitCode::SUCCESS;
    }
    match run(cli.command) {
        Ok(Outcome { report, code }) => {
            if cli.pretty {
                print!("{}", report.to_pretty());
            } else {
                println!("{}", report.to_json());
            }
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
