//! `headdrive`: run head-driven recognizers, transform grammars, compare
//! algorithms and list small languages from the command line.

mod load;
mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use headdrive::engine::{format_table, RunOptions, Verdict};
use headdrive::grammar::{
    detect_head_recursion, parse_hg, write_hg, AugmentedGrammar, HeadGrammar,
};
use headdrive::oracle::{enumerate, recognize};
use headdrive::random::{all_inputs, head_corpus, Params};
use headdrive::recognizers::{build, build_generalized, Algorithm, Recognizer};
use headdrive::transform::{tau_head, tau_two};

use load::Loaded;

// Stdout writes that stop quietly when the reader goes away.
macro_rules! out {
    ($m:ident, $($t:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = $m!(std::io::stdout().lock(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            return Err(CliError::Io(format!("stdout: {e}")));
        }
    }};
}
use report::{exit_code, verdict_name, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Grammar(String),
    #[error("{0}")]
    Io(String),
    #[error("verdicts disagree: {0}")]
    Disagreement(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Grammar(_) => 4,
            CliError::Io(_) => 5,
            CliError::Disagreement(_) => 6,
            CliError::Internal(_) => 7,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "headdrive",
    version,
    about = "Head-driven recognizers for head grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one recognizer; exits 0 on accept, 1 on reject, 2 at a resource limit.
    Recognize(RecognizeArgs),
    /// Print the head transform of a .ghg grammar or the two normal form of a grammar.
    Transform(TransformArgs),
    /// Run several recognizers on one input, or a random batch against the oracle.
    Compare(CompareArgs),
    /// List the strings of the language up to a length, one per line.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct Limits {
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
    /// Defaults to 16·(n+2)·(rules + nonterminals).
    #[arg(long)]
    max_depth: Option<usize>,
}

impl Limits {
    fn options(&self) -> RunOptions {
        RunOptions {
            max_steps: self.max_steps,
            max_depth: self.max_depth,
            ..RunOptions::default()
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Whitespace-separated tokens.
    #[arg(long, default_value = "")]
    input: String,
    /// Split the input into single characters instead.
    #[arg(long)]
    chars: bool,
}

#[derive(Args)]
struct RecognizeArgs {
    #[arg(long)]
    grammar: PathBuf,
    #[arg(long)]
    algorithm: Algorithm,
    #[command(flatten)]
    input: InputArgs,
    /// Allow ghi on a plain .hg grammar by embedding it.
    #[arg(long)]
    embed: bool,
    /// Print the accepting trace as a table.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransformKind {
    #[arg(long, value_name = "PATH")]
    tau_head: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    tau_two: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    kind: TransformKind,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, required_unless_present = "random")]
    grammar: Option<PathBuf>,
    /// Comma-separated; defaults to every applicable algorithm.
    #[arg(long, value_delimiter = ',')]
    algorithm: Vec<Algorithm>,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    embed: bool,
    /// Explore every reachable configuration instead of stopping at the first accept.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    json: bool,
    /// Check this many random grammars against the oracle instead.
    #[arg(long, conflicts_with = "grammar")]
    random: Option<usize>,
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    grammar: PathBuf,
    #[arg(long, default_value_t = 4)]
    max_len: usize,
}

fn recognizer(
    loaded: &Loaded,
    alg: Algorithm,
    embed: bool,
) -> Result<Box<dyn Recognizer>, CliError> {
    match (loaded, alg) {
        (Loaded::Plain(_), Algorithm::Ghi) if !embed => Err(CliError::Usage(
            "ghi needs a .ghg grammar, or --embed for a .hg grammar".into(),
        )),
        (Loaded::Plain(g), a) => Ok(build(a, g)),
        (Loaded::Generalized(g), Algorithm::Ghi) => Ok(build_generalized(g)),
        (Loaded::Generalized(g), a) => Ok(build(a, &tau_head(g))),
    }
}

fn recognize_cmd(args: &RecognizeArgs) -> Result<u8, CliError> {
    let loaded = load::grammar(&args.grammar)?;
    let rec = recognizer(&loaded, args.algorithm, args.embed)?;
    let tokens = load::tokens(&args.input.input, args.input.chars);
    let outcome = rec
        .run_checked(&tokens, &args.limits.options())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    if args.json {
        let report = RunReport {
            grammar: load::id(&args.grammar),
            algorithm: args.algorithm,
            input: tokens,
            verdict: outcome.verdict,
            stats: outcome.stats,
            trace: if args.trace { outcome.trace } else { None },
        };
        out!(
            writeln,
            "{}",
            serde_json::to_string_pretty(&report).expect("reports serialize")
        );
        return Ok(exit_code(report.verdict));
    }
    out!(writeln, "{}", verdict_name(outcome.verdict));
    let s = &outcome.stats;
    out!(
        writeln,
        "{} configurations, {} clause applications, max stack depth {}",
        s.configurations_explored,
        s.clause_applications,
        s.max_stack_depth
    );
    if args.trace {
        match &outcome.rows {
            Some(rows) => out!(write, "{}", format_table(rows)),
            None => eprintln!("no accepting trace"),
        }
    }
    Ok(exit_code(outcome.verdict))
}

fn transform_cmd(args: &TransformArgs) -> Result<u8, CliError> {
    let out = match (&args.kind.tau_head, &args.kind.tau_two) {
        (Some(path), _) => match load::grammar(path)? {
            Loaded::Generalized(g) => tau_head(&g),
            Loaded::Plain(_) => {
                return Err(CliError::Usage("--tau-head needs a .ghg grammar".into()))
            }
        },
        (_, Some(path)) => match load::grammar(path)? {
            Loaded::Plain(g) => tau_two(&g.to_cfg()),
            Loaded::Generalized(g) => tau_two(&g.flatten()),
        },
        (None, None) => unreachable!("clap requires one transform"),
    };
    let text = write_hg(&out);
    let again = parse_hg(&text)
        .map_err(|e| CliError::Grammar(format!("transformed grammar does not parse: {e}")))?;
    if write_hg(&again) != text {
        return Err(CliError::Grammar(
            "transformed grammar does not print back identically".into(),
        ));
    }
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out!(write, "{text}"),
    }
    Ok(0)
}

fn default_algorithms(loaded: &Loaded, embed: bool) -> Vec<Algorithm> {
    match loaded {
        Loaded::Plain(_) if !embed => Algorithm::PLAIN.to_vec(),
        _ => Algorithm::ALL.to_vec(),
    }
}

fn compare_cmd(args: &CompareArgs) -> Result<u8, CliError> {
    if let Some(count) = args.random {
        return compare_random(count, args);
    }
    let path = args.grammar.as_deref().expect("clap requires a grammar");
    let loaded = load::grammar(path)?;
    let algs = if args.algorithm.is_empty() {
        default_algorithms(&loaded, args.embed)
    } else {
        args.algorithm.clone()
    };
    let tokens = load::tokens(&args.input.input, args.input.chars);
    let opts = RunOptions {
        stop_at_accept: !args.exhaustive,
        ..args.limits.options()
    };
    let mut reports = Vec::new();
    for &alg in &algs {
        let o = recognizer(&loaded, alg, args.embed)?.run_tokens(&tokens, &opts);
        reports.push(RunReport {
            grammar: load::id(path),
            algorithm: alg,
            input: tokens.clone(),
            verdict: o.verdict,
            stats: o.stats,
            trace: None,
        });
    }
    if args.json {
        out!(
            writeln,
            "{}",
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        );
    } else {
        out!(write, "{}", compare_table(&reports));
    }
    let decided: Vec<&RunReport> = reports
        .iter()
        .filter(|r| r.verdict != Verdict::ResourceLimit)
        .collect();
    match decided.first() {
        None => Ok(exit_code(Verdict::ResourceLimit)),
        Some(first) if decided.iter().all(|r| r.verdict == first.verdict) => {
            Ok(exit_code(first.verdict))
        }
        Some(_) => {
            let which: Vec<String> = decided
                .iter()
                .map(|r| format!("{} {}", r.algorithm, verdict_name(r.verdict)))
                .collect();
            Err(CliError::Disagreement(which.join(", ")))
        }
    }
}

fn compare_table(reports: &[RunReport]) -> String {
    let mut out = format!(
        "{:<9} {:<15} {:>14} {:>19} {:>15}\n",
        "algorithm", "verdict", "configurations", "clause applications", "max stack depth"
    );
    for r in reports {
        let s = &r.stats;
        let _ = writeln!(
            out,
            "{:<9} {:<15} {:>14} {:>19} {:>15}",
            r.algorithm.name(),
            verdict_name(r.verdict),
            s.configurations_explored,
            s.clause_applications,
            s.max_stack_depth
        );
    }
    out
}

fn compare_random(count: usize, args: &CompareArgs) -> Result<u8, CliError> {
    let p = Params::default();
    out!(writeln, "seed {}", args.seed);
    let inputs = all_inputs(&p.alphabet, args.max_len);
    let algs = if args.algorithm.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        args.algorithm.clone()
    };
    let opts = args.limits.options();
    let mut disagreements = Vec::new();
    let (mut runs, mut limits, mut skipped) = (0, 0, 0);
    for (gi, g) in head_corpus(args.seed, count, &p).iter().enumerate() {
        let recs: Vec<Box<dyn Recognizer>> = algs
            .iter()
            .filter(|&&a| {
                let skip = a == Algorithm::Td && head_recursive(g);
                skipped += usize::from(skip);
                !skip
            })
            .map(|&a| build(a, g))
            .collect();
        for w in &inputs {
            let want = recognize(g, w);
            for rec in &recs {
                runs += 1;
                let v = rec.run_tokens(w, &opts).verdict;
                if v == Verdict::ResourceLimit {
                    limits += 1;
                } else if (v == Verdict::Accept) != want {
                    disagreements.push(format!(
                        "grammar {gi} ({}), {}, input {:?}: {}, oracle {}",
                        one_line(g),
                        rec.algorithm(),
                        w.join(" "),
                        verdict_name(v),
                        if want { "accept" } else { "reject" }
                    ));
                }
            }
        }
    }
    for d in &disagreements {
        out!(writeln, "{d}");
    }
    out!(writeln,
        "{count} grammars, {runs} runs, {} disagreements, {limits} resource limits, td skipped on {skipped} head-recursive grammars",
        disagreements.len()
    );
    if disagreements.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Disagreement(format!(
            "{} runs differ from the oracle",
            disagreements.len()
        )))
    }
}

fn head_recursive(g: &HeadGrammar) -> bool {
    detect_head_recursion(&AugmentedGrammar::new(g)).is_some()
}

fn one_line(g: &HeadGrammar) -> String {
    write_hg(g)
        .lines()
        .filter(|l| !l.starts_with("start"))
        .collect::<Vec<_>>()
        .join("; ")
}

fn enumerate_cmd(args: &EnumerateArgs) -> Result<u8, CliError> {
    let strings = match load::grammar(&args.grammar)? {
        Loaded::Plain(g) => enumerate(&g, args.max_len),
        Loaded::Generalized(g) => enumerate(&g.flatten(), args.max_len),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    for s in strings {
        out!(writeln, "{}", s.join(" "));
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Recognize(a) => recognize_cmd(a),
        Command::Transform(a) => transform_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Enumerate(a) => enumerate_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("headdrive: {e}");
            ExitCode::from(e.code())
        }
    }
}
