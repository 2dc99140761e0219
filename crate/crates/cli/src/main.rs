//! Batch front end: every subcommand reads a system (a file path or a
//! built-in name), performs one operation and prints the result to stdout,
//! as text or JSON. Validation problems go to stderr, one `LEVEL n: ...`
//! line each, with exit status 1; usage problems exit 2.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gencayley_core::dyadic::Dyadic;
use gencayley_core::error::Error;
use gencayley_core::graph::InverseSystem;
use gencayley_core::group::{self, GroupElement};
use gencayley_core::sequence::{self, SequenceKind, WordSequence};
use gencayley_core::word::{self, Word};
use gencayley_core::{json as render, metric, spaces, suites};

#[derive(Parser)]
#[command(
    name = "gencayley",
    about = "Word-sequence calculus over inverse systems of finite graphs",
    version
)]
struct Cli {
    /// System definition file, or a built-in name (interval, hawaiian,
    /// ladder, fig2)
    #[arg(long, global = true)]
    system: Option<String>,

    /// Depth for built-in systems
    #[arg(long, global = true, default_value_t = 6)]
    depth: u32,

    /// Subdivision factor for the built-in interval
    #[arg(long, global = true, default_value_t = 2)]
    subdiv: u32,

    /// Stabilization lookback window
    #[arg(long, global = true, default_value_t = 2)]
    window: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the randomized invariant suites
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Node budget for tree enumeration
    #[arg(long, global = true, default_value_t = metric::DEFAULT_NODE_BUDGET)]
    node_budget: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Load a system and report validation problems
    Validate,
    /// Built-in space generators
    Space {
        #[command(subcommand)]
        command: SpaceCommand,
    },
    /// Project a word one level down
    Project {
        /// Level of the input word
        #[arg(long)]
        level: u32,
        /// The word, e.g. "A B C B / A"
        word: String,
    },
    /// Reduce a word to its normal form
    Reduce {
        #[arg(long)]
        level: u32,
        word: String,
    },
    /// Stabilize a reduced sequence
    Stabilize {
        /// Sequence file (`n: <word>` lines, reduced coherence)
        file: PathBuf,
    },
    /// Complete a coherent sequence
    Complete { file: PathBuf },
    /// Stable initial match of two sequences
    Match { a: PathBuf, b: PathBuf },
    /// Length bound of a sequence
    Length { file: PathBuf },
    /// Radial distance between two stabilized sequences
    Distance {
        a: PathBuf,
        b: PathBuf,
        /// Treat the inputs as already completed
        #[arg(long)]
        completed: bool,
    },
    /// Product of two stabilized returning sequences
    Multiply { a: PathBuf, b: PathBuf },
    /// Inverse of a stabilized returning sequence
    Invert { file: PathBuf },
    /// Completed difference word of two elements
    Difference { a: PathBuf, b: PathBuf },
    /// Act with a returning sequence on a based one
    Act { element: PathBuf, point: PathBuf },
    /// Essential multiplicity of a vertex
    Multiplicity {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        upto: u32,
    },
    /// Tree neighborhoods of the basepoint
    Tree {
        #[command(subcommand)]
        command: TreeCommand,
    },
    /// Run the invariant suites
    Check,
}

#[derive(Subcommand)]
enum SpaceCommand {
    /// Print the definition file of a built-in space
    Gen {
        /// interval, hawaiian, ladder or fig2
        name: String,
    },
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Enumerate the tree around the basepoint word of one level
    Export {
        #[arg(long)]
        level: u32,
        /// Radial cutoff, e.g. "3/2^4"
        #[arg(long)]
        max_len: Option<String>,
    },
}

fn main() -> ExitCode {
    // Die quietly when stdout is a closed pipe (e.g. `gencayley ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            match err {
                Error::Precondition(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_system(cli: &Cli) -> Result<InverseSystem, Error> {
    let name = cli
        .system
        .as_deref()
        .ok_or_else(|| Error::Precondition("missing --system <file-or-builtin>".to_string()))?;
    if matches!(
        name,
        "interval" | "hawaiian" | "ladder" | "fig2" | "figure2"
    ) {
        return spaces::by_name(name, cli.depth, cli.subdiv);
    }
    let text = fs::read_to_string(name)
        .map_err(|e| Error::Precondition(format!("cannot read system file `{name}`: {e}")))?;
    InverseSystem::parse(&text)
}

fn load_sequence(
    sys: &InverseSystem,
    path: &PathBuf,
    kind: SequenceKind,
) -> Result<WordSequence, Error> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Precondition(format!(
            "cannot read sequence file `{}`: {e}",
            path.display()
        ))
    })?;
    WordSequence::parse_in(sys, kind, &text)
}

fn load_element(sys: &InverseSystem, path: &PathBuf, window: u32) -> Result<GroupElement, Error> {
    let seq = load_sequence(sys, path, SequenceKind::CoherentW)?;
    GroupElement::from_sequence(sys, seq, window)
}

fn print_word(cli: &Cli, sys: &InverseSystem, w: &Word) {
    match cli.format {
        Format::Json => println!("{}", render::word(sys, w)),
        _ => println!("{}", w.display(sys)),
    }
}

fn print_sequence_with(
    cli: &Cli,
    sys: &InverseSystem,
    seq: &WordSequence,
    extra: Option<serde_json::Value>,
    extra_text: &str,
) {
    match cli.format {
        Format::Json => {
            let mut value = json!({ "sequence": render::sequence(sys, seq) });
            if let Some(extra) = extra {
                value["report"] = extra;
            }
            println!("{value}");
        }
        _ => {
            println!("{}", seq.display(sys));
            if !extra_text.is_empty() {
                println!("{extra_text}");
            }
        }
    }
}

fn verdict_line(verdict: &gencayley_core::sequence::StabilityVerdict) -> String {
    match verdict.first_unstable {
        None => format!("verdict: stable (window {})", verdict.window),
        Some(level) => format!(
            "verdict: unknown, first unstable level {level} (window {})",
            verdict.window
        ),
    }
}

fn completion_line(report: &gencayley_core::sequence::CompletionReport) -> String {
    let trusted: Vec<String> = report
        .trusted
        .iter()
        .enumerate()
        .map(|(i, &t)| format!("{}:{}", i + 1, if t { "confirmed" } else { "unconfirmed" }))
        .collect();
    format!("trust: {}", trusted.join(" "))
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Validate => {
            let sys = load_system(cli)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "system": sys.name(),
                        "depth": sys.depth(),
                        "valid": true,
                    })
                ),
                _ => println!(
                    "ok: system {} with {} levels validates",
                    sys.name(),
                    sys.depth()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Space { command } => match command {
            SpaceCommand::Gen { name } => {
                let sys = spaces::by_name(name, cli.depth, cli.subdiv)?;
                print!("{}", sys.serialize());
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Project { level, word } => {
            let sys = load_system(cli)?;
            let input = Word::parse_in(&sys, *level, word)?;
            let projected = word::phi(&sys, &input)?;
            print_word(cli, &sys, &projected);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { level, word } => {
            let sys = load_system(cli)?;
            let input = Word::parse_in(&sys, *level, word)?;
            print_word(cli, &sys, &word::reduce(&input));
            Ok(ExitCode::SUCCESS)
        }
        Command::Stabilize { file } => {
            let sys = load_system(cli)?;
            let seq = load_sequence(&sys, file, SequenceKind::ReducedR)?;
            let (stab, verdict) = sequence::stabilize(&sys, &seq, cli.window)?;
            print_sequence_with(
                cli,
                &sys,
                &stab,
                Some(render::verdict(&verdict)),
                &verdict_line(&verdict),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Complete { file } => {
            let sys = load_system(cli)?;
            let seq = load_sequence(&sys, file, SequenceKind::CoherentW)?;
            let (completed, report) = sequence::complete(&sys, &seq)?;
            print_sequence_with(
                cli,
                &sys,
                &completed,
                Some(render::completion_report(&report)),
                &completion_line(&report),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Match { a, b } => {
            let sys = load_system(cli)?;
            let sa = load_sequence(&sys, a, SequenceKind::CoherentW)?;
            let sb = load_sequence(&sys, b, SequenceKind::CoherentW)?;
            let cap = sequence::stable_initial_match(&sys, &sa, &sb)?;
            print_sequence_with(cli, &sys, &cap, None, "");
            Ok(ExitCode::SUCCESS)
        }
        Command::Length { file } => {
            let sys = load_system(cli)?;
            let seq = load_sequence(&sys, file, SequenceKind::CoherentW)?;
            let bound = metric::sequence_length(&sys, &seq)?;
            match cli.format {
                Format::Json => println!("{}", render::length_bound(&bound)),
                _ => println!("{bound}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance { a, b, completed } => {
            let sys = load_system(cli)?;
            let sa = load_sequence(&sys, a, SequenceKind::CoherentW)?;
            let sb = load_sequence(&sys, b, SequenceKind::CoherentW)?;
            let result = metric::rho(&sys, &sa, &sb, *completed)?;
            match cli.format {
                Format::Json => println!("{}", render::rho(&result)),
                _ => println!(
                    "[{}, {}) at depth {} ({})",
                    result.lo, result.hi, result.depth, result.verdict
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Multiply { a, b } => {
            let sys = load_system(cli)?;
            let ga = load_element(&sys, a, cli.window)?;
            let gb = load_element(&sys, b, cli.window)?;
            let product = group::multiply(&sys, &ga, &gb, cli.window)?;
            print_element(cli, &sys, &product);
            Ok(ExitCode::SUCCESS)
        }
        Command::Invert { file } => {
            let sys = load_system(cli)?;
            let g = load_element(&sys, file, cli.window)?;
            let inverted = group::inverse(&sys, &g)?;
            print_element(cli, &sys, &inverted);
            Ok(ExitCode::SUCCESS)
        }
        Command::Difference { a, b } => {
            let sys = load_system(cli)?;
            let ga = load_element(&sys, a, cli.window)?;
            let gb = load_element(&sys, b, cli.window)?;
            let (diff, report) = group::difference_word(&sys, &ga, &gb, cli.window)?;
            print_sequence_with(
                cli,
                &sys,
                &diff,
                Some(render::completion_report(&report)),
                &completion_line(&report),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Act { element, point } => {
            let sys = load_system(cli)?;
            let g = load_element(&sys, element, cli.window)?;
            let p = load_sequence(&sys, point, SequenceKind::CoherentW)?;
            let (moved, verdict) = group::act(&sys, &g, &p, cli.window)?;
            print_sequence_with(
                cli,
                &sys,
                &moved,
                Some(render::verdict(&verdict)),
                &verdict_line(&verdict),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Multiplicity {
            level,
            vertex,
            upto,
        } => {
            let sys = load_system(cli)?;
            let report = group::essential_multiplicity(&sys, *level, vertex, *upto)?;
            match cli.format {
                Format::Json => println!("{}", render::multiplicity(&report)),
                _ => {
                    for (i, count) in report.counts.iter().enumerate() {
                        println!("c_{}({}) = {}", report.level + 1 + i as u32, vertex, count);
                    }
                    println!(
                        "monotone: {}, plateau length: {}",
                        report.monotone, report.plateau
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tree { command } => match command {
            TreeCommand::Export { level, max_len } => {
                let sys = load_system(cli)?;
                let cap = match max_len {
                    Some(text) => Some(text.parse::<Dyadic>().map_err(Error::Precondition)?),
                    None => None,
                };
                let ball = metric::tree_ball(&sys, *level, cap.as_ref(), cli.node_budget)?;
                match cli.format {
                    Format::Dot => print!("{}", ball.to_dot(&sys)),
                    Format::Json => println!("{}", render::tree(&sys, &ball)),
                    Format::Text => {
                        for node in &ball.nodes {
                            println!("{}  @ {}", node.word.display(&sys), node.radial);
                        }
                        if ball.budget_exhausted {
                            println!("(node budget exhausted; tree truncated)");
                        }
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Check => {
            let systems: Vec<InverseSystem> = match &cli.system {
                Some(_) => vec![load_system(cli)?],
                None => vec![
                    spaces::interval(cli.depth, cli.subdiv)?,
                    spaces::hawaiian(cli.depth.min(6))?,
                    spaces::ladder(cli.depth.min(6))?,
                    spaces::figure2_fixture()?,
                ],
            };
            let mut all_passed = true;
            let mut reports = Vec::new();
            for sys in &systems {
                let outcomes = suites::standard_battery(sys, cli.seed)?;
                for outcome in outcomes {
                    let passed = outcome.passed();
                    all_passed &= passed;
                    match cli.format {
                        Format::Json => reports.push(json!({
                            "system": sys.name(),
                            "suite": render::suite(&outcome),
                        })),
                        _ => {
                            println!(
                                "{}: {} ({} checks) {}",
                                sys.name(),
                                outcome.name,
                                outcome.checks,
                                if passed { "PASS" } else { "FAIL" }
                            );
                            for failure in &outcome.failures {
                                eprintln!("  {failure}");
                            }
                        }
                    }
                }
            }
            if cli.format == Format::Json {
                println!("{}", json!({ "passed": all_passed, "suites": reports }));
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn print_element(cli: &Cli, sys: &InverseSystem, g: &GroupElement) {
    match cli.format {
        Format::Json => println!("{}", render::element(sys, g)),
        _ => {
            println!("{}", g.sequence().display(sys));
            println!("{}", verdict_line(g.verdict()));
        }
    }
}
