use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tfsm::format::parse_tfsm_unvalidated;
use tfsm::{
    abstract_fsm, equivalent, export_dot_fsm, export_dot_tfsm, export_timed_automaton, minimize, parse_document,
    refine_with, run, serialize_fsm, serialize_tfsm, tfsm_equivalent, tfsm_intersect, validate_tfsm, Equivalence,
    MachineDocument, MealyMachine, RefineOptions, RunResult, TimedEquivalence, TimedMachine, TimedWord,
};

/// Timed FSM toolkit: validation, simulation, untiming, refinement,
/// equivalence and intersection.
#[derive(Parser, Debug)]
#[command(name = "tfsm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a machine file; violations go to stderr.
    Validate { file: PathBuf },
    /// Run a timed machine on a timed input word.
    Simulate {
        file: PathBuf,
        /// Space-separated SYMBOL@TIME items with absolute times, e.g. "i@0.5 i@3/2".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Write the tick abstraction of a timed machine.
    Abstract {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep unreachable abstract states.
        #[arg(long)]
        full: bool,
    },
    /// Rebuild a timed machine from a time-progressive FSM.
    Refine {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep one transition per clock interval.
        #[arg(long)]
        no_merge: bool,
    },
    /// Minimize an FSM.
    Minimize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the intersection of two timed machines.
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide equivalence of two machines of the same kind.
    Equiv { first: PathBuf, second: PathBuf },
    /// Graphviz rendering of a machine.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Timed-automaton rendering of a timed machine.
    ExportTa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Reported on stderr; always exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MachineDocument, Failure> {
    parse_document(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_tfsm(path: &Path) -> Result<TimedMachine, Failure> {
    match load(path)? {
        MachineDocument::Tfsm(m) => Ok(m),
        MachineDocument::Fsm(_) => Err(Failure(format!("{}: expected a tfsm file", path.display()))),
    }
}

fn load_fsm(path: &Path) -> Result<MealyMachine, Failure> {
    match load(path)? {
        MachineDocument::Fsm(m) => Ok(m),
        MachineDocument::Tfsm(_) => Err(Failure(format!("{}: expected an fsm file", path.display()))),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(path: &Path) -> Result<ExitCode, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if !first.starts_with("tfsm") {
        let doc = load(path)?;
        println!("{}: valid {}", path.display(), doc.name());
        return Ok(ExitCode::SUCCESS);
    }
    let m = parse_tfsm_unvalidated(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let violations = validate_tfsm(&m);
    if violations.is_empty() {
        println!("{}: valid {}", path.display(), m.name());
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        eprintln!("{}: {v}", path.display());
    }
    Ok(ExitCode::from(2))
}

fn execute(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Simulate { file, word } => {
            let m = load_tfsm(&file)?;
            let w: TimedWord = word.parse()?;
            match run(&m, &w) {
                RunResult::Accepted { output, .. } => {
                    println!("{output}");
                    Ok(ExitCode::SUCCESS)
                }
                RunResult::Rejected { index } => {
                    println!("rejected at input {} ({})", index + 1, w.as_slice()[index].0);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Abstract { file, output, full } => {
            let m = load_tfsm(&file)?;
            emit(&serialize_fsm(&abstract_fsm(&m, full)), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Refine { file, output, no_merge } => {
            let fsm = load_fsm(&file)?;
            let t = refine_with(&fsm, RefineOptions { merge: !no_merge })?;
            emit(&serialize_tfsm(&t), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Minimize { file, output } => {
            let fsm = load_fsm(&file)?;
            emit(&serialize_fsm(&minimize(&fsm)), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect { first, second, output } => {
            let t = tfsm_intersect(&load_tfsm(&first)?, &load_tfsm(&second)?)?;
            emit(&serialize_tfsm(&t), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { first, second } => match (load(&first)?, load(&second)?) {
            (MachineDocument::Tfsm(a), MachineDocument::Tfsm(b)) => match tfsm_equivalent(&a, &b)? {
                TimedEquivalence::Equivalent => {
                    println!("equivalent");
                    Ok(ExitCode::SUCCESS)
                }
                TimedEquivalence::Distinguished(c) => {
                    println!("not equivalent");
                    println!("{c}");
                    Ok(ExitCode::from(1))
                }
            },
            (MachineDocument::Fsm(a), MachineDocument::Fsm(b)) => match equivalent(&a, &b) {
                Equivalence::Equivalent => {
                    println!("equivalent");
                    Ok(ExitCode::SUCCESS)
                }
                Equivalence::Distinguished(c) => {
                    println!("not equivalent");
                    println!("{c}");
                    Ok(ExitCode::from(1))
                }
            },
            _ => Err(Failure("equiv needs two files of the same kind".into())),
        },
        Command::ExportDot { file, output } => {
            let text = match load(&file)? {
                MachineDocument::Tfsm(m) => export_dot_tfsm(&m),
                MachineDocument::Fsm(m) => export_dot_fsm(&m),
            };
            emit(&text, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportTa { file, output } => {
            let m = load_tfsm(&file)?;
            emit(&export_timed_automaton(&m), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
