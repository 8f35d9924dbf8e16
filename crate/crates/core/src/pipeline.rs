//! Decision procedures on timed machines, via their tick abstractions.

use std::fmt;

use crate::abstraction::abstract_fsm;
use crate::algebra::{check_same_alphabets, equivalent, product, AlphabetMismatch, Counterexample, Equivalence};
use crate::machine::TimedMachine;
use crate::rational::Rational;
use crate::refinement::{refine, RefineError};
use crate::semantics::{run, RunResult};
use crate::symbol::Letter;
use crate::validate::{validate_tfsm, Violation};
use crate::word::TimedWord;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{which} machine `{name}` is invalid: {}", violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid {
        which: &'static str,
        name: String,
        violations: Vec<Violation>,
    },
    #[error(transparent)]
    Alphabet(#[from] AlphabetMismatch),
    #[error(transparent)]
    Refine(#[from] RefineError),
    /// The decoded witness did not separate the machines when replayed.
    /// Signals a bug rather than bad input.
    #[error("counterexample {word} was not confirmed by simulation")]
    Unconfirmed { word: TimedWord },
}

/// A timed input word on which two machines behave differently, with both
/// runs on it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TimedCounterexample {
    pub word: TimedWord,
    pub untimed: Counterexample,
    pub left: RunResult,
    pub right: RunResult,
}

fn describe_run(r: &RunResult) -> String {
    match r {
        RunResult::Accepted { output, .. } => format!("outputs {output}"),
        RunResult::Rejected { index } => format!("rejects input {}", index + 1),
    }
}

impl fmt::Display for TimedCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input:  {}", self.word)?;
        writeln!(f, "first:  {}", describe_run(&self.left))?;
        write!(f, "second: {}", describe_run(&self.right))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TimedEquivalence {
    Equivalent,
    Distinguished(TimedCounterexample),
}

impl TimedEquivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, TimedEquivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&TimedCounterexample> {
        match self {
            TimedEquivalence::Equivalent => None,
            TimedEquivalence::Distinguished(c) => Some(c),
        }
    }
}

fn check_valid(which: &'static str, m: &TimedMachine) -> Result<(), PipelineError> {
    let violations = validate_tfsm(m);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(PipelineError::Invalid {
            which,
            name: m.name().to_string(),
            violations,
        })
    }
}

fn check_pair(a: &TimedMachine, b: &TimedMachine) -> Result<(), PipelineError> {
    check_valid("first", a)?;
    check_valid("second", b)?;
    check_same_alphabets("input", a.inputs(), b.inputs())?;
    check_same_alphabets("output", a.outputs(), b.outputs())?;
    Ok(())
}

/// Decides whether two valid machines produce the same output on every
/// timed input word. A returned counterexample has been replayed on both
/// machines.
pub fn tfsm_equivalent(a: &TimedMachine, b: &TimedMachine) -> Result<TimedEquivalence, PipelineError> {
    check_pair(a, b)?;
    let verdict = equivalent(&abstract_fsm(a, false), &abstract_fsm(b, false));
    let Equivalence::Distinguished(untimed) = verdict else {
        return Ok(TimedEquivalence::Equivalent);
    };
    let word = decode_tick_word(&untimed.word);
    let left = run(a, &word);
    let right = run(b, &word);
    let differ = match (&left, &right) {
        (RunResult::Accepted { output: x, .. }, RunResult::Accepted { output: y, .. }) => x != y,
        (RunResult::Rejected { .. }, RunResult::Rejected { .. }) => false,
        _ => true,
    };
    if !differ {
        return Err(PipelineError::Unconfirmed { word });
    }
    Ok(TimedEquivalence::Distinguished(TimedCounterexample {
        word,
        untimed,
        left,
        right,
    }))
}

/// A machine whose behavior is the common part of `a` and `b`: it answers a
/// timed word with `w` exactly when both machines do. May be partial even if
/// both inputs are complete.
pub fn tfsm_intersect(a: &TimedMachine, b: &TimedMachine) -> Result<TimedMachine, PipelineError> {
    check_pair(a, b)?;
    let p = product(&abstract_fsm(a, false), &abstract_fsm(b, false))?;
    Ok(refine(&p.renumbered())?)
}

/// Inverse of the tick encoding: a block of `2n` ticks becomes delay `n`,
/// `2n+1` ticks become `n + 1/2`. Ticks after the last symbol carry no
/// symbol and are dropped.
pub fn decode_tick_word(word: &[Letter]) -> TimedWord {
    let mut ticks: i64 = 0;
    let mut items = Vec::new();
    for letter in word {
        match letter {
            Letter::Tick => ticks += 1,
            Letter::Sym(s) => {
                items.push((s.clone(), Rational::new(ticks, 2)));
                ticks = 0;
            }
        }
    }
    TimedWord::from_delays(items)
}
