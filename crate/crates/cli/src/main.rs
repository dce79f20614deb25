use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::warn;

use plp::bench::{generate, Family};
use plp::ground::{ground, GroundOptions};
use plp::inference::{answer_conditional, default_eot, format_answer, InferenceError, QueryOptions, QueryReport};
use plp::logic::{Literal, Term};
use plp::parser::{answer_variables, ground_literals, parse_program, parse_query, InputQuery, SourceProgram};
use plp::Program;

#[derive(Parser, Debug)]
#[command(name = "plpc", version, about = "Query probabilistic logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a program and answer its queries.
    Run(RunArgs),
    /// Print a benchmark program with its query.
    Bench {
        /// markov-timesteps, markov-specificity, markov-timepoint, hmm-rainy, hmm-sunny or hmm-mixed
        family: Family,
        #[arg(long)]
        n: usize,
        /// Write to this file instead of stdout.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    file: PathBuf,
    /// Last time point (default: `config(eot, N)`, else the latest time in the query).
    #[arg(long)]
    eot: Option<i64>,
    /// Ground exhaustively instead of guided by the query.
    #[arg(long)]
    unguided: bool,
    #[arg(long)]
    no_ve_pruning: bool,
    /// Compute probabilities by enumerating choices (small programs only).
    #[arg(long)]
    oracle: bool,
    /// Print the ground program of each query.
    #[arg(long)]
    dump_ground: bool,
    /// Print the predicate stratification.
    #[arg(long)]
    dump_strat: bool,
    #[arg(long)]
    stats: bool,
    /// Decimal places of printed probabilities.
    #[arg(long, default_value_t = 6)]
    precision: usize,
    /// Answer this query instead of those in the file.
    #[arg(long)]
    query: Option<String>,
    /// Answer candidates of one query in parallel.
    #[arg(long)]
    parallel: bool,
}

struct Settings {
    eot: Option<i64>,
    guided: bool,
    cautious: bool,
    inst_sol: bool,
}

fn flag(src: &SourceProgram, key: &str) -> Result<Option<bool>> {
    match src.config(key) {
        None => Ok(None),
        Some(t) if *t == Term::constant("true") => Ok(Some(true)),
        Some(t) if *t == Term::constant("false") => Ok(Some(false)),
        Some(t) => bail!("config({key}, {t}): expected true or false"),
    }
}

fn settings(src: &SourceProgram, args: &RunArgs) -> Result<Settings> {
    for (key, _) in &src.configs {
        if !matches!(
            key.as_str(),
            "eot" | "query_optimization_grounding" | "cautious_disjointing" | "inst_sol" | "show_info"
        ) {
            warn!("ignoring unknown config key `{key}`");
        }
    }
    let eot = match (args.eot, src.config("eot")) {
        (Some(n), _) => Some(n),
        (None, Some(Term::Int(n))) => Some(*n),
        (None, Some(t)) => bail!("config(eot, {t}): expected an integer"),
        (None, None) => None,
    };
    Ok(Settings {
        eot,
        guided: !args.unguided && flag(src, "query_optimization_grounding")?.unwrap_or(true),
        cautious: flag(src, "cautious_disjointing")?.unwrap_or(false),
        inst_sol: flag(src, "inst_sol")?.unwrap_or(true),
    })
}

fn print_stats(report: &QueryReport, elapsed: f64) {
    println!("# eot = {}", report.eot);
    println!("# ground rules = normal rules + probabilistic facts");
    for s in &report.stages {
        println!(
            "# stage {}: {} ground rules, {} probabilistic facts, {} domain atoms, {:.3}s",
            s.name,
            s.rules,
            s.prob_facts,
            s.domain,
            s.elapsed.as_secs_f64()
        );
    }
    println!(
        "# ve: {} expansions, {} cache hits, {} pruned",
        report.ve.expansions, report.ve.cache_hits, report.ve.prunes
    );
    println!("# time {elapsed:.3}s");
}

fn run_query(program: &Program, q: &InputQuery, args: &RunArgs, s: &Settings) -> Result<()> {
    let mut opts = QueryOptions {
        eot: s.eot,
        guided: s.guided,
        cautious_disjointing: s.cautious,
        oracle: args.oracle,
        parallel: args.parallel,
        ..QueryOptions::default()
    };
    opts.ve.pruning = !args.no_ve_pruning;
    if args.dump_ground {
        let mut lits = ground_literals(&q.body);
        lits.extend(q.evidence.iter().cloned().map(Literal::pos));
        let g = ground(
            program,
            &lits,
            &GroundOptions {
                eot: s.eot.unwrap_or_else(|| default_eot(q)),
                guided: s.guided,
            },
        )?;
        println!("% ground program for {q}");
        print!("{g}");
    }
    let start = Instant::now();
    let report = answer_conditional(program, q, &opts)?;
    let elapsed = start.elapsed().as_secs_f64();
    if args.stats {
        println!("# {q}");
    }
    let vars = if s.inst_sol {
        answer_variables(&q.body)
    } else {
        Vec::new()
    };
    for a in &report.answers {
        println!(
            "{}",
            format_answer(a, &vars, args.precision, report.ground || !s.inst_sol)
        );
    }
    if args.stats {
        print_stats(&report, elapsed);
    }
    Ok(())
}

fn run(args: &RunArgs) -> Result<()> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("cannot read {}", args.file.display()))?;
    let src = parse_program(&text)?;
    init_logging(flag(&src, "show_info")? == Some(true));
    let s = settings(&src, args)?;
    let program = Program::from_source(&src)?;
    if args.dump_strat {
        print!("{}", program.strat);
    }
    let queries = match &args.query {
        Some(text) => vec![parse_query(text)?],
        None => src.queries.clone(),
    };
    if queries.is_empty() {
        bail!("no query in {} and none given with --query", args.file.display());
    }
    for q in &queries {
        run_query(&program, q, args, &s)?;
    }
    Ok(())
}

/// `RUST_LOG` wins over the `show_info` setting.
fn init_logging(verbose: bool) {
    let default = if verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default)).try_init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Bench { family, n, output } => {
            init_logging(false);
            let text = generate(*family, *n);
            match output {
                Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let zero = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<InferenceError>(),
                    Some(InferenceError::ZeroEvidence(_))
                )
            });
            ExitCode::from(if zero { 2 } else { 1 })
        }
    }
}
