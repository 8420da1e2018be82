//! The `mahaney` command line: decide, verify, corpus, apt and experiment.
//!
//! Exit codes are 0 for accept or valid, 1 for reject or invalid, and 2 for
//! usage, parse and I/O errors.

pub mod experiment;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mahaney_core::apt::{apt_report, demo_decider, fast_decider, AptError, AptReport};
use mahaney_core::engine::{decide, trace_to_dot, EngineConfig, Mode};
use mahaney_core::formula::{count_formulas, enumerate_formulas, parse, Formula};
use mahaney_core::oracles::{builtin_names, by_name, verify_reduction, ReductionOracle};

use experiment::{run_experiment, write_csv, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest corpus the enumerating subcommands will build.
pub const MAX_CORPUS: u128 = 2_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "mahaney",
    version,
    about = "Decide SAT and TAUT through reductions to sparse sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the pruning engine on one formula.
    Decide(DecideArgs),
    /// Check a reduction against truth tables over an enumerated corpus.
    Verify(VerifyArgs),
    /// List the enumerated corpus, one formula per line.
    Corpus(CorpusArgs),
    /// Build the slow-set reduction for a clocked decider and check it.
    Apt(AptArgs),
    /// Sweep census scales and write one CSV row per run.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Mahaney,
    Fortune,
    Onett,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Mahaney => Mode::Mahaney,
            ModeArg::Fortune => Mode::Fortune,
            ModeArg::Onett => Mode::OneTt,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["formula", "file"])))]
struct DecideArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    oracle: String,
    #[arg(long)]
    formula: Option<String>,
    /// File holding one formula; surrounding whitespace is ignored.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Write the trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the trace as a Graphviz graph.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Bounds {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_vars: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=48))]
    max_nodes: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    oracle: String,
    #[command(flatten)]
    bounds: Bounds,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeciderArg {
    Demo,
    Fast,
}

#[derive(Debug, Args)]
struct AptArgs {
    #[arg(long, value_enum)]
    decider: DeciderArg,
    #[command(flatten)]
    bounds: Bounds,
    /// Also print one row per corpus formula.
    #[arg(long)]
    rows: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, default_value = "tally")]
    oracle: String,
    /// Inclusive range of variable counts, `lo..hi`.
    #[arg(long, value_parser = parse_range)]
    vars: RangeInclusive<u32>,
    /// Comma-separated multipliers for the census bound.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..), default_value = "1,2,4")]
    census_scale: Vec<u64>,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Formulas per variable count.
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..=48))]
    max_nodes: u64,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))?;
    let lo: u32 = lo.parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u32 = hi.parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= lo <= hi, got {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing to `out` and `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Decide(a) => cmd_decide(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Corpus(a) => cmd_corpus(a, out),
        Command::Apt(a) => cmd_apt(a, out),
        Command::Experiment(a) => cmd_experiment(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure(i32, String);

fn usage(message: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, message.into())
}

fn io(e: std::io::Error) -> Failure {
    usage(format!("output: {e}"))
}

fn oracle_named(name: &str) -> Result<ReductionOracle, Failure> {
    by_name(name).ok_or_else(|| {
        usage(format!(
            "unknown oracle {name:?}; known: {}",
            builtin_names().join(", ")
        ))
    })
}

fn corpus_for(bounds: &Bounds) -> Result<Vec<Formula>, Failure> {
    let nodes = bounds.max_nodes as usize;
    let size = count_formulas(bounds.max_vars, nodes);
    if size > MAX_CORPUS {
        return Err(usage(format!(
            "corpus of {size} formulas exceeds the limit of {MAX_CORPUS}"
        )));
    }
    Ok(enumerate_formulas(bounds.max_vars, nodes))
}

fn cmd_decide(args: DecideArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let oracle = oracle_named(&args.oracle)?;
    let text = match (&args.formula, &args.file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?
            .trim()
            .to_owned(),
        (None, None) => unreachable!("clap requires one input"),
    };
    let formula = parse(&text).map_err(|e| usage(format!("{text:?}: {e}")))?;
    let mode = Mode::from(args.mode);
    let (accepted, trace) = decide(&formula, &oracle, mode, EngineConfig::default())
        .map_err(|e| usage(e.to_string()))?;
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_json() + "\n")
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.dot {
        fs::write(path, trace_to_dot(&trace))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let verdict = match (mode, accepted) {
        (Mode::Fortune, true) => "TAUT",
        (Mode::Fortune, false) => "NOT-TAUT",
        (_, true) => "SAT",
        (_, false) => "UNSAT",
    };
    writeln!(out, "{verdict}").map_err(io)?;
    Ok(if accepted { EXIT_OK } else { EXIT_NO })
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let oracle = oracle_named(&args.oracle)?;
    let corpus = corpus_for(&args.bounds)?;
    let report = verify_reduction(&oracle, &corpus);
    if args.json {
        writeln!(out, "{}", report.to_json()).map_err(io)?;
    } else {
        write!(out, "{report}").map_err(io)?;
    }
    Ok(if report.valid { EXIT_OK } else { EXIT_NO })
}

fn cmd_corpus(args: CorpusArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let corpus = corpus_for(&args.bounds)?;
    let mut buffered = std::io::BufWriter::new(out);
    for f in &corpus {
        writeln!(buffered, "{f}").map_err(io)?;
    }
    buffered.flush().map_err(io)?;
    Ok(EXIT_OK)
}

fn print_apt(report: &AptReport, rows: bool, out: &mut dyn Write) -> std::io::Result<()> {
    let show = |f: &Option<Formula>| {
        f.as_ref()
            .map(Formula::serialize)
            .unwrap_or_else(|| "-".to_owned())
    };
    writeln!(out, "decider: {}", report.decider)?;
    writeln!(out, "branch: {}", report.branch)?;
    writeln!(out, "x_yes: {}", show(&report.x_yes))?;
    writeln!(out, "x_no: {}", show(&report.x_no))?;
    writeln!(
        out,
        "slow: {}",
        report
            .slow
            .iter()
            .map(Formula::serialize)
            .collect::<Vec<_>>()
            .join(" ")
    )?;
    writeln!(out, "slow_sat: {}", report.slow_sat.len())?;
    writeln!(out, "corpus: {}", report.rows.len())?;
    if rows {
        writeln!(out, "formula\tsteps\tresult\tsat\timage\tanswer\tagrees")?;
        for r in &report.rows {
            let result = match r.run.verdict() {
                Some(v) => format!("{v:?}").to_uppercase(),
                None => "TIMEOUT".to_owned(),
            };
            writeln!(
                out,
                "{}\t{}\t{result}\t{}\t{}\t{}\t{}",
                r.formula,
                r.run.steps(),
                r.sat,
                show(&r.image),
                r.answer,
                r.agrees
            )?;
        }
    }
    writeln!(out, "valid: {}", report.valid)?;
    writeln!(out, "{}", report.summary())
}

fn cmd_apt(args: AptArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let corpus = corpus_for(&args.bounds)?;
    let report = match args.decider {
        DeciderArg::Demo => apt_report(&demo_decider(), &corpus),
        DeciderArg::Fast => apt_report(&fast_decider(), &corpus),
    };
    let report = match report {
        Ok(report) => report,
        Err(e @ AptError::WrongDecider { .. }) => {
            writeln!(out, "{e}").map_err(io)?;
            return Ok(EXIT_NO);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    if args.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )
        .map_err(io)?;
    } else {
        print_apt(&report, args.rows, out).map_err(io)?;
    }
    Ok(if report.valid { EXIT_OK } else { EXIT_NO })
}

fn cmd_experiment(args: ExperimentArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let oracle = oracle_named(&args.oracle)?;
    if oracle.has_label() {
        return Err(usage(format!(
            "oracle {} is one-query; the sweep runs many-one reductions",
            oracle.name
        )));
    }
    let config = ExperimentConfig {
        oracle,
        vars: args.vars,
        scales: args.census_scale,
        runs: args.runs,
        max_nodes: args.max_nodes as usize,
        seed: args.seed,
    };
    let file =
        fs::File::create(&args.csv).map_err(|e| usage(format!("{}: {e}", args.csv.display())))?;
    let rows = run_experiment(&config).map_err(|e| usage(e.to_string()))?;
    write_csv(&rows, std::io::BufWriter::new(file)).map_err(|e| usage(e.to_string()))?;
    let disagreements = rows.iter().filter(|r| !r.agrees_with_brute_force).count();
    writeln!(out, "{} rows written to {}", rows.len(), args.csv.display()).map_err(io)?;
    if disagreements > 0 {
        writeln!(out, "{disagreements} runs disagree with brute force").map_err(io)?;
        return Ok(EXIT_NO);
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..6"), Ok(2..=6));
        assert_eq!(parse_range("3..3"), Ok(3..=3));
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("2-6").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["mahaney", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("experiment"));
    }
}
