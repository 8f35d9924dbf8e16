//! Executable semantics of timed and untimed machines, and the tick encoding
//! of delays and timed words.

use crate::machine::{StateId, TimedMachine, Timeout};
use crate::mealy::MealyMachine;
use crate::rational::Rational;
use crate::symbol::{Letter, Symbol};
use crate::word::{TimedState, TimedWord};

/// Outcome of running a timed machine on a timed input word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RunResult {
    /// Every input was accepted. `output` carries the input timestamps.
    Accepted { output: TimedWord, last: TimedState },
    /// The input at `index` found no enabled transition.
    Rejected { index: usize },
}

impl RunResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RunResult::Accepted { .. })
    }

    pub fn output(&self) -> Option<&TimedWord> {
        match self {
            RunResult::Accepted { output, .. } => Some(output),
            RunResult::Rejected { .. } => None,
        }
    }
}

/// The untimed run hit a missing transition at this position of the word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UndefinedAt(pub usize);

/// Lets `delay` time units elapse from `from`, firing timeouts whenever the
/// clock reaches a finite bound. The result always has its clock strictly
/// below the timeout of its state.
pub fn advance(machine: &TimedMachine, from: TimedState, delay: Rational) -> TimedState {
    assert!(!delay.is_negative(), "negative delay {delay}");
    let TimedState { mut state, mut clock } = from;
    let mut remaining = delay;
    loop {
        match machine.timeout(state) {
            Timeout::Infinite => return TimedState::new(state, clock + remaining),
            Timeout::After { bound, target } => {
                assert!(bound > 0, "timeout bound 0 at `{}`", machine.state_name(state));
                let left = Rational::from(bound) - clock;
                if remaining < left {
                    return TimedState::new(state, clock + remaining);
                }
                remaining = remaining - left;
                state = target;
                clock = Rational::ZERO;
            }
        }
    }
}

/// Fires the unique transition enabled on `input` at `from`, if any.
pub fn step(machine: &TimedMachine, from: TimedState, input: &Symbol) -> Option<(Symbol, TimedState)> {
    machine
        .transitions_from(from.state)
        .find(|t| &t.input == input && t.guard.contains(from.clock))
        .map(|t| (t.output.clone(), TimedState::at_zero(t.target)))
}

/// Runs `word` from the initial state at clock 0.
pub fn run(machine: &TimedMachine, word: &TimedWord) -> RunResult {
    run_from(machine, machine.initial(), word)
}

/// Runs `word` from `start` at clock 0; timestamps are relative to the start.
pub fn run_from(machine: &TimedMachine, start: StateId, word: &TimedWord) -> RunResult {
    let mut current = TimedState::at_zero(start);
    let mut output = Vec::with_capacity(word.len());
    for (index, ((input, time), delay)) in word.iter().zip(word.delays()).enumerate() {
        let waited = advance(machine, current, delay);
        match step(machine, waited, input) {
            Some((out, next)) => {
                output.push((out, *time));
                current = next;
            }
            None => return RunResult::Rejected { index },
        }
    }
    RunResult::Accepted {
        output: TimedWord::new(output).expect("timestamps copied from a valid word"),
        last: current,
    }
}

/// Standard Mealy execution from the initial state.
pub fn mealy_run(machine: &MealyMachine, word: &[Letter]) -> Result<Vec<Letter>, UndefinedAt> {
    mealy_run_from(machine, machine.initial(), word).map(|(out, _)| out)
}

/// Mealy execution from `start`, also returning the state reached.
pub fn mealy_run_from(
    machine: &MealyMachine,
    start: StateId,
    word: &[Letter],
) -> Result<(Vec<Letter>, StateId), UndefinedAt> {
    let mut state = start;
    let mut out = Vec::with_capacity(word.len());
    for (k, letter) in word.iter().enumerate() {
        let (o, next) = machine.step(state, letter).ok_or(UndefinedAt(k))?;
        out.push(o.clone());
        state = *next;
    }
    Ok((out, state))
}

/// Number of ticks encoding a delay: `2t` for an integer `t`, `2⌊t⌋+1`
/// otherwise.
pub fn tick_encode_delay(t: Rational) -> u64 {
    assert!(!t.is_negative(), "negative delay {t}");
    let whole = u64::try_from(t.floor()).expect("delay fits in u64");
    if t.is_integer() {
        2 * whole
    } else {
        2 * whole + 1
    }
}

/// Tick encoding of a timed word: each symbol preceded by the ticks of its
/// delay.
pub fn tick_encode_word(word: &TimedWord) -> Vec<Letter> {
    let mut out = Vec::new();
    for ((sym, _), delay) in word.iter().zip(word.delays()) {
        let ticks = tick_encode_delay(delay);
        out.extend(std::iter::repeat_n(Letter::Tick, ticks as usize));
        out.push(Letter::Sym(sym.clone()));
    }
    out
}
