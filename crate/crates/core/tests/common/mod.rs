//! Seeded random machines and words, plus a brute-force equivalence oracle
//! that only uses `run`.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use tfsm::{run, Guard, Letter, MealyMachine, Rational, RunResult, Symbol, TimedMachine, TimedWord};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct TfsmShape {
    pub max_states: usize,
    pub max_inputs: usize,
    pub max_constant: u32,
    /// Chance that a guard piece carries a transition.
    pub density: f64,
}

impl Default for TfsmShape {
    fn default() -> Self {
        TfsmShape {
            max_states: 5,
            max_inputs: 2,
            max_constant: 4,
            density: 0.7,
        }
    }
}

pub const INPUTS: [&str; 2] = ["a", "b"];
pub const OUTPUTS: [&str; 2] = ["x", "y"];

/// Cuts the half-unit range `0..=last` (or `0..` when `last` is `None`) into
/// consecutive guards.
fn partition(rng: &mut TestRng, last: Option<u64>, cap: u64) -> Vec<Guard> {
    let end = last.unwrap_or(cap);
    let mut pieces = Vec::new();
    let mut lo = 0;
    while lo <= end {
        let hi = if rng.gen_bool(0.4) {
            end
        } else {
            rng.gen_range(lo..=end)
        };
        if hi == end && last.is_none() {
            pieces.push(Guard::from_half_units(lo, None));
            return pieces;
        }
        pieces.push(Guard::from_half_units(lo, Some(hi)));
        lo = hi + 1;
    }
    pieces
}

/// A random valid timed machine. Guards on each (state, input) tile the
/// clock values below the timeout; each tile is kept with probability
/// `shape.density`.
pub fn random_tfsm(rng: &mut TestRng, shape: TfsmShape) -> TimedMachine {
    let n = rng.gen_range(1..=shape.max_states);
    let k = rng.gen_range(1..=shape.max_inputs.min(INPUTS.len()));
    let names: Vec<String> = (0..n).map(|s| format!("s{s}")).collect();
    let inputs = &INPUTS[..k];
    let mut b = TimedMachine::builder("rand")
        .states(&names)
        .inputs(inputs)
        .outputs(OUTPUTS)
        .initial("s0");
    let cap = 2 * u64::from(shape.max_constant);
    for s in &names {
        let bound = if rng.gen_bool(0.3) {
            None
        } else {
            Some(rng.gen_range(1..=shape.max_constant))
        };
        if let Some(bound) = bound {
            b = b.timeout(s, bound, names.choose(rng).unwrap());
        }
        for i in inputs {
            for g in partition(rng, bound.map(|b| 2 * u64::from(b) - 1), cap) {
                if rng.gen_bool(shape.density) {
                    b = b.transition(s, i, g, OUTPUTS.choose(rng).unwrap(), names.choose(rng).unwrap());
                }
            }
        }
    }
    b.build().expect("generated machine builds")
}

/// A random time-progressive untimed machine with up to `max_states` states.
pub fn random_progressive_fsm(rng: &mut TestRng, max_states: usize) -> MealyMachine {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=INPUTS.len());
    let names: Vec<String> = (0..n).map(|s| format!("u{s}")).collect();
    let mut b = MealyMachine::builder("rand")
        .states(&names)
        .inputs(&INPUTS[..k])
        .outputs(OUTPUTS)
        .initial("u0");
    for s in &names {
        b = b.tick(s, names.choose(rng).unwrap());
        for i in &INPUTS[..k] {
            if rng.gen_bool(0.6) {
                b = b.io(s, i, OUTPUTS.choose(rng).unwrap(), names.choose(rng).unwrap());
            }
        }
    }
    b.build().expect("generated machine builds")
}

/// A random delay `p/q` with `q <= 3`, biased towards integers so that
/// timeout boundaries are hit.
pub fn random_delay(rng: &mut TestRng, max_units: i64) -> Rational {
    let q = *[1, 1, 2, 3].choose(rng).unwrap();
    Rational::new(rng.gen_range(0..=max_units * q), q)
}

pub fn random_word(rng: &mut TestRng, inputs: &[Symbol], max_len: usize, max_units: i64) -> TimedWord {
    let len = rng.gen_range(0..=max_len);
    TimedWord::from_delays((0..len).map(|_| (inputs.choose(rng).unwrap().clone(), random_delay(rng, max_units))))
}

/// One local change to a valid machine, keeping it valid.
pub fn mutate(rng: &mut TestRng, m: &TimedMachine) -> TimedMachine {
    let text = tfsm::serialize_tfsm(m);
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let trans: Vec<usize> = (0..lines.len()).filter(|&k| lines[k].starts_with("trans ")).collect();
    let timeouts: Vec<usize> = (0..lines.len())
        .filter(|&k| lines[k].starts_with("timeout ") && lines[k].contains("->"))
        .collect();
    match rng.gen_range(0..4) {
        0 if !trans.is_empty() => {
            // flip the output
            let k = *trans.choose(rng).unwrap();
            let l = &lines[k];
            lines[k] = if l.contains("/ x ") {
                l.replace("/ x ", "/ y ")
            } else {
                l.replace("/ y ", "/ x ")
            };
        }
        1 if !trans.is_empty() => {
            // drop a transition
            lines.remove(*trans.choose(rng).unwrap());
        }
        2 if !trans.is_empty() => {
            // retarget a transition
            let k = *trans.choose(rng).unwrap();
            let (head, _) = lines[k].rsplit_once("-> ").unwrap();
            lines[k] = format!("{head}-> {}", m.states().choose(rng).unwrap());
        }
        _ if !timeouts.is_empty() => {
            // retarget a timeout
            let k = *timeouts.choose(rng).unwrap();
            let (head, _) = lines[k].rsplit_once("-> ").unwrap();
            lines[k] = format!("{head}-> {}", m.states().choose(rng).unwrap());
        }
        _ => {}
    }
    tfsm::parse_tfsm(&(lines.join("\n") + "\n")).expect("mutation keeps the machine valid")
}

/// The answer of a run as a partial map: the output word or nothing.
pub fn behavior(m: &TimedMachine, w: &TimedWord) -> Option<TimedWord> {
    match run(m, w) {
        RunResult::Accepted { output, .. } => Some(output),
        RunResult::Rejected { .. } => None,
    }
}

/// Delays `0, 1/2, 1, ..., n + 3/2`.
pub fn delay_grid(n: u32) -> Vec<Rational> {
    (0..=2 * i64::from(n) + 3).map(|h| Rational::new(h, 2)).collect()
}

/// Searches all timed words up to `max_len` symbols with delays from `grid`
/// for one on which the machines behave differently.
pub fn brute_force_difference(
    a: &TimedMachine,
    b: &TimedMachine,
    grid: &[Rational],
    max_len: usize,
) -> Option<TimedWord> {
    let inputs = a.inputs();
    let mut frontier: Vec<Vec<(Symbol, Rational)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for i in inputs {
                for d in grid {
                    let mut w = prefix.clone();
                    w.push((i.clone(), *d));
                    let word = TimedWord::from_delays(w.clone());
                    let (x, y) = (behavior(a, &word), behavior(b, &word));
                    if x != y {
                        return Some(word);
                    }
                    // an undefined prefix keeps both undefined
                    if x.is_some() {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

/// Tick encoding of a run result: outputs interleaved with the ticks of the
/// input delays, cut off at a rejected input.
pub fn encoded_outcome(word: &TimedWord, result: &RunResult) -> Result<Vec<Letter>, usize> {
    let enc = tfsm::tick_encode_word(word);
    match result {
        RunResult::Accepted { output, .. } => Ok(tfsm::tick_encode_word(output)),
        RunResult::Rejected { index } => {
            let pos = enc
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.is_tick())
                .nth(*index)
                .map(|(p, _)| p)
                .unwrap();
            Err(pos)
        }
    }
}
