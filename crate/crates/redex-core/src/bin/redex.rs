//! Command-line driver: parsing, reduction, strategy and axiom commands
//! over both calculi. Every command writes line-delimited JSON records to
//! standard out; field names are documented in the repository README.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad term text, invalid
//! position, falsified axiom, oracle failure), 2 on a usage error.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use redex_core::ars::{check_axiom, check_axiom_sampled, AxiomName, AxiomReport, PpcArs};
use redex_core::corpus::{por_corpus, ppc_corpus};
use redex_core::matching::{match_terms, Match};
use redex_core::multistep::{
    is_necessary_bounded, is_never_gripping_bounded, Multistep, DEFAULT_DEPTH_BOUND,
    DEFAULT_SIZE_BOUND, DEFAULT_STEP_BOUND,
};
use redex_core::por::{
    parse_por_term, por_develop, por_is_necessary_bounded, por_is_never_gripping_bounded,
    por_normalize, por_redex_positions, por_s_pi, PorArs, PorStep,
};
use redex_core::reduction::{redex_positions, Step};
use redex_core::strategy::{normalize, s_pi, NormalizeOutcome, NormalizeTrace, Selection};
use redex_core::syntax::parse_term;
use redex_core::term::Position;

#[derive(Parser)]
#[command(name = "redex", version, about = "Term rewriting engine for pattern and parallel-or calculi")]
struct Cli {
    /// Which calculus interprets terms and commands.
    #[arg(long, value_enum, default_value_t = Calculus::Ppc, global = true)]
    calculus: Calculus,

    /// Seed for the sampled axiom mode.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Calculus {
    Ppc,
    Por,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyName {
    /// The necessary and never-gripping multistep strategy.
    Necessary,
    /// Leftmost-outermost single steps (lambda fragment only).
    Lo,
    /// All outermost redexes at once; comparison only.
    ParallelOutermost,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleName {
    Necessary,
    NeverGripping,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it back.
    Parse { term: String },
    /// List the redex positions of a term, root first.
    Redexes { term: String },
    /// Contract the single step at a position ("" is the root).
    Step { term: String, position: String },
    /// Completely develop a set of redex positions.
    Develop {
        term: String,
        positions: Vec<String>,
    },
    /// Reduce to normal form under a strategy, recording every round.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value_t = StrategyName::Necessary)]
        strategy: StrategyName,
        /// Maximum number of rounds before giving up.
        #[arg(long, default_value_t = 64)]
        fuse: usize,
    },
    /// Match a term against a pattern under a binder set.
    Match {
        /// Binders of the match, comma separated.
        #[arg(long, value_delimiter = ',')]
        binders: Vec<String>,
        term: String,
        pattern: String,
    },
    /// Print the strategy's selected positions for one round.
    Strategy { term: String },
    /// Check reduction axioms over the exhaustive closed-term corpus.
    CheckAxioms(CheckAxiomsArgs),
    /// Run a bounded strategy oracle on a set of redex positions.
    Oracle {
        #[arg(value_enum)]
        oracle: OracleName,
        term: String,
        positions: Vec<String>,
        /// Step budget for the necessity oracle.
        #[arg(long, default_value_t = DEFAULT_STEP_BOUND)]
        step_bound: usize,
        /// Lookahead depth for the never-gripping oracle.
        #[arg(long, default_value_t = DEFAULT_DEPTH_BOUND)]
        depth_bound: usize,
        /// Term size cutoff for the never-gripping oracle.
        #[arg(long, default_value_t = DEFAULT_SIZE_BOUND)]
        size_bound: usize,
    },
}

#[derive(Args)]
struct CheckAxiomsArgs {
    /// Largest term size in the corpus.
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Axioms to check, comma separated; defaults to all thirteen.
    /// `stability` must be requested explicitly.
    #[arg(long, value_delimiter = ',')]
    axioms: Option<Vec<AxiomName>>,
    /// Check a random subsample of this many corpus terms (seeded).
    #[arg(long)]
    sample: Option<usize>,
}

/// A domain failure: reported as a structured record with exit code 1.
struct DomainError(String);

impl<E: std::error::Error> From<E> for DomainError {
    fn from(e: E) -> DomainError {
        DomainError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(DomainError(message)) => {
            emit(json!({ "status": "error", "message": message }));
            ExitCode::from(1)
        }
    }
}

fn emit(record: Value) {
    println!("{record}");
}

fn positions_value(positions: impl IntoIterator<Item = Position>) -> Value {
    Value::Array(
        positions
            .into_iter()
            .map(|p| Value::String(p.to_string()))
            .collect(),
    )
}

fn parse_positions(texts: &[String]) -> Result<BTreeSet<Position>, DomainError> {
    texts.iter().map(|s| Ok(Position::parse(s)?)).collect()
}

fn run(cli: &Cli) -> Result<ExitCode, DomainError> {
    match &cli.command {
        Command::Parse { term } => {
            let printed = match cli.calculus {
                Calculus::Ppc => parse_term(term)?.to_string(),
                Calculus::Por => parse_por_term(term)?.to_string(),
            };
            emit(json!({ "status": "ok", "term": printed }));
        }
        Command::Redexes { term } => {
            let positions = match cli.calculus {
                Calculus::Ppc => redex_positions(&parse_term(term)?),
                Calculus::Por => por_redex_positions(&parse_por_term(term)?),
            };
            emit(json!({ "status": "ok", "positions": positions_value(positions) }));
        }
        Command::Step { term, position } => {
            let pos = Position::parse(position)?;
            let (source, target) = match cli.calculus {
                Calculus::Ppc => {
                    let step = Step::new(parse_term(term)?, pos.clone())?;
                    (step.source().to_string(), step.target().to_string())
                }
                Calculus::Por => {
                    let step = PorStep::new(parse_por_term(term)?, pos.clone())?;
                    (step.source().to_string(), step.target().to_string())
                }
            };
            emit(json!({
                "status": "ok",
                "source": source,
                "position": pos.to_string(),
                "term": target,
            }));
        }
        Command::Develop { term, positions } => {
            let set = parse_positions(positions)?;
            match cli.calculus {
                Calculus::Ppc => {
                    let multistep = Multistep::new(parse_term(term)?, set)?;
                    let development = multistep.develop();
                    emit(json!({
                        "status": "ok",
                        "term": development.target().to_string(),
                        "contracted": positions_value(development.positions()),
                    }));
                }
                Calculus::Por => {
                    let target = por_develop(&parse_por_term(term)?, &set)?;
                    emit(json!({ "status": "ok", "term": target.to_string() }));
                }
            }
        }
        Command::Normalize {
            term,
            strategy,
            fuse,
        } => match cli.calculus {
            Calculus::Ppc => {
                let selection = match strategy {
                    StrategyName::Necessary => Selection::NecessaryS,
                    StrategyName::Lo => Selection::LoLambda,
                    StrategyName::ParallelOutermost => Selection::ParallelOutermost,
                };
                let trace = normalize(&parse_term(term)?, selection, *fuse)?;
                emit(trace_record(&trace));
            }
            Calculus::Por => {
                if *strategy != StrategyName::Necessary {
                    usage_error("only the necessary strategy is defined for --calculus por");
                }
                let trace = por_normalize(&parse_por_term(term)?, *fuse);
                emit(trace_record(&trace));
            }
        },
        Command::Match {
            binders,
            term,
            pattern,
        } => {
            if cli.calculus == Calculus::Por {
                usage_error("match is only defined for --calculus ppc");
            }
            let theta: BTreeSet<String> = binders.iter().cloned().collect();
            let mu = match_terms(&theta, &parse_term(term)?, &parse_term(pattern)?);
            let mut record = json!({ "status": "ok", "match": mu.to_string() });
            if let Match::Positive(sub) = &mu {
                let bindings: serde_json::Map<String, Value> = sub
                    .0
                    .iter()
                    .map(|(x, t)| (x.clone(), Value::String(t.to_string())))
                    .collect();
                record["bindings"] = Value::Object(bindings);
            }
            emit(record);
        }
        Command::Strategy { term } => {
            let positions = match cli.calculus {
                Calculus::Ppc => s_pi(&parse_term(term)?),
                Calculus::Por => por_s_pi(&parse_por_term(term)?),
            };
            emit(json!({ "status": "ok", "positions": positions_value(positions) }));
        }
        Command::CheckAxioms(args) => return check_axioms_command(cli, args),
        Command::Oracle {
            oracle,
            term,
            positions,
            step_bound,
            depth_bound,
            size_bound,
        } => {
            let set = parse_positions(positions)?;
            let record = match (cli.calculus, oracle) {
                (Calculus::Ppc, OracleName::Necessary) => {
                    let multistep = Multistep::new(parse_term(term)?, set)?;
                    let verdict = is_necessary_bounded(&multistep, *step_bound)?;
                    json!({
                        "status": "ok",
                        "oracle": "necessary",
                        "verdict": verdict,
                        "step_bound": step_bound,
                    })
                }
                (Calculus::Ppc, OracleName::NeverGripping) => {
                    let multistep = Multistep::new(parse_term(term)?, set)?;
                    let verdict = is_never_gripping_bounded(&multistep, *depth_bound, *size_bound);
                    json!({
                        "status": "ok",
                        "oracle": "never-gripping",
                        "verdict": verdict,
                        "depth_bound": depth_bound,
                        "size_bound": size_bound,
                    })
                }
                (Calculus::Por, OracleName::Necessary) => {
                    let t = parse_por_term(term)?;
                    let verdict = por_is_necessary_bounded(&t, &set, *step_bound)?;
                    json!({
                        "status": "ok",
                        "oracle": "necessary",
                        "verdict": verdict,
                        "step_bound": step_bound,
                    })
                }
                (Calculus::Por, OracleName::NeverGripping) => {
                    let t = parse_por_term(term)?;
                    let verdict =
                        por_is_never_gripping_bounded(&t, &set, *depth_bound, *size_bound);
                    json!({
                        "status": "ok",
                        "oracle": "never-gripping",
                        "verdict": verdict,
                        "depth_bound": depth_bound,
                        "size_bound": size_bound,
                    })
                }
            };
            emit(record);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Usage misuse detected after argument parsing: report like clap does.
fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn trace_record<T: std::fmt::Display>(trace: &NormalizeTrace<T>) -> Value {
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .map(|(term, selected)| {
            json!({
                "term": term.to_string(),
                "selected": positions_value(selected.iter().cloned()),
            })
        })
        .collect();
    match &trace.outcome {
        NormalizeOutcome::NormalForm(result) => json!({
            "status": "ok",
            "rounds": rounds.len(),
            "trace": rounds,
            "result": result.to_string(),
        }),
        NormalizeOutcome::FuseExceeded => json!({
            "status": "fuse-exceeded",
            "rounds": rounds.len(),
            "trace": rounds,
        }),
    }
}

fn check_axioms_command(cli: &Cli, args: &CheckAxiomsArgs) -> Result<ExitCode, DomainError> {
    let axioms: Vec<AxiomName> = match &args.axioms {
        Some(named) => named.clone(),
        None => AxiomName::all().to_vec(),
    };
    let reports: Vec<AxiomReport> = match cli.calculus {
        Calculus::Ppc => {
            let corpus = ppc_corpus(args.max_size);
            run_axioms(&PpcArs, &corpus, &axioms, args.sample, cli.seed)
        }
        Calculus::Por => {
            let corpus = por_corpus(args.max_size);
            run_axioms(&PorArs, &corpus, &axioms, args.sample, cli.seed)
        }
    };
    let mut failed = 0;
    for report in &reports {
        if !report.holds() {
            failed += 1;
        }
        let mut record = serde_json::to_value(report).expect("reports serialize");
        record["holds"] = Value::Bool(report.holds());
        emit(record);
    }
    emit(json!({
        "status": if failed == 0 { "ok" } else { "failed" },
        "passed": reports.len() - failed,
        "failed": failed,
    }));
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_axioms<I: redex_core::ars::ArsInstance>(
    inst: &I,
    corpus: &[I::Object],
    axioms: &[AxiomName],
    sample: Option<usize>,
    seed: u64,
) -> Vec<AxiomReport> {
    axioms
        .iter()
        .map(|&axiom| match sample {
            Some(n) => check_axiom_sampled(inst, corpus, axiom, n, seed),
            None => check_axiom(inst, corpus, axiom),
        })
        .collect()
}
