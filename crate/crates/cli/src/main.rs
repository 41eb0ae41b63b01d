//! `dfvs-reduce`: reduce, solve and probe digraphs from the command line.
//!
//! Exit codes: 0 success (or confluent), 1 usage, 2 parse error, 3 resource
//! cap or truncation without a verdict, 4 negative verdict.

use std::collections::BTreeSet;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dfvs_reduce::confluence::{self, DEFAULT_STATE_CAP};
use dfvs_reduce::format::{emit_digraph, format_normal_form_report, format_trace, parse_digraph};
use dfvs_reduce::generate::random_digraph;
use dfvs_reduce::mfvs::DEFAULT_VERTEX_CAP;
use dfvs_reduce::{is_fvs, normalize, solve, Digraph, Error, KindSet, Strategy, VertexId};

const USAGE: u8 = 1;
const PARSE: u8 = 2;
const CAP: u8 = 3;
const NEGATIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "dfvs-reduce", version, about = "Digraph reductions for minimum feedback vertex set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a digraph and print the kernel, forced vertices and trace.
    Reduce {
        /// Digraph document; `-` or omitted reads stdin.
        file: Option<PathBuf>,
        /// `all`, `confluent`, or a comma list of kinds.
        #[arg(long, default_value = "all")]
        rules: KindSet,
        #[arg(long, value_enum, default_value_t = Pick::Priority)]
        strategy: Pick,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Kernelize, brute-force the kernel and print a minimum FVS.
    Solve {
        file: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        rules: KindSet,
        /// Largest kernel (in vertices) handed to the brute-force oracle.
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Enumerate normal forms, exhaustively or by random sampling.
    Confluence {
        file: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        rules: KindSet,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Sampled mode: number of random normalizations.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive mode: maximum number of distinct states.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
    },
    /// Print a built-in counterexample digraph.
    Counterexample {
        #[arg(value_enum)]
        which: Which,
    },
    /// Exit 0 if the given vertices form a feedback vertex set, 4 otherwise.
    Check {
        file: Option<PathBuf>,
        /// Comma-separated vertex labels.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        fvs: Vec<String>,
    },
    /// Print a seeded random digraph on vertices v0..v(n-1).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        loops: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pick {
    Priority,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Two DOME steps whose order decides the normal form.
    Dome,
}

/// A failed run: exit code and message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => PARSE,
            Error::CapExceeded { .. } => CAP,
            _ => USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<Digraph, Failure> {
    let mut text = String::new();
    match file {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure(USAGE, format!("stdin: {e}")))?;
        }
    }
    Ok(parse_digraph(&text)?)
}

fn labels(set: &BTreeSet<VertexId>) -> String {
    set.iter().map(VertexId::as_str).collect::<Vec<_>>().join(",")
}

fn field(name: &str, value: &str) -> String {
    if value.is_empty() {
        format!("{name}:\n")
    } else {
        format!("{name}: {value}\n")
    }
}

fn run(cli: Cli, out: &mut String) -> Result<u8, Failure> {
    match cli.command {
        Command::Reduce {
            file,
            rules,
            strategy,
            seed,
        } => {
            let g = read_input(&file)?;
            let strategy = match strategy {
                Pick::Priority => Strategy::Priority,
                Pick::Random => Strategy::Random { seed },
            };
            let run = normalize(&g, rules, strategy);
            out.push_str("# kernel\n");
            out.push_str(&emit_digraph(&run.kernel));
            out.push_str(&field("forced", &labels(&run.forced)));
            out.push_str(&format_trace(&run.trace));
            Ok(0)
        }
        Command::Solve { file, rules, cap } => {
            let g = read_input(&file)?;
            let s = solve(&g, rules, Strategy::Priority, cap)?;
            out.push_str(&field("mfvs", &labels(&s.mfvs)));
            out.push_str(&format!("size: {}\n", s.mfvs.len()));
            Ok(0)
        }
        Command::Confluence {
            file,
            rules,
            mode,
            trials,
            seed,
            cap,
        } => {
            let g = read_input(&file)?;
            if matches!(mode, Mode::Sampled) && trials == 0 {
                return Err(Failure(USAGE, "--trials must be at least 1".into()));
            }
            let report = match mode {
                Mode::Exhaustive => confluence::all_normal_forms(&g, rules, cap),
                Mode::Sampled => confluence::sampled_normal_forms(&g, rules, trials, seed),
            };
            out.push_str(&format_normal_form_report(&report));
            Ok(match report.verdict() {
                Some(true) => 0,
                Some(false) => NEGATIVE,
                None => CAP,
            })
        }
        Command::Counterexample { which: Which::Dome } => {
            out.push_str(&emit_digraph(&confluence::dome_counterexample()));
            Ok(0)
        }
        Command::Check { file, fvs } => {
            let g = read_input(&file)?;
            let set: BTreeSet<VertexId> = fvs
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(VertexId::from)
                .collect();
            let ok = is_fvs(&g, &set)?;
            out.push_str(&format!("fvs: {ok}\n"));
            Ok(if ok { 0 } else { NEGATIVE })
        }
        Command::Gen { n, p, seed, loops } => {
            out.push_str(&emit_digraph(&random_digraph(n, p, loops, seed)?));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            code
        }
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(USAGE);
    }
    ExitCode::from(code)
}
