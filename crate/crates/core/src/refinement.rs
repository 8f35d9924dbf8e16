//! Rebuilding a timed machine from a time-progressive untimed machine.
//!
//! Every untimed state becomes a timed state entered with clock 0. Following
//! tick transitions from it walks through clock intervals `[0,0]`, `(0,1)`,
//! `[1,1]`, ... until a state repeats; the inputs defined along the way become
//! guarded transitions and the repetition point becomes the timeout.

use std::fmt;

use crate::abstraction::{BisimRelation, ClockInterval, RelatedPair};
use crate::guard::Guard;
use crate::machine::{StateId, TimedMachine, Timeout, Transition};
use crate::mealy::MealyMachine;
use crate::symbol::Letter;

/// Why a machine is not time-progressive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProgressViolation {
    /// The state has no transition on the tick.
    MissingTick { state: String },
    /// The tick produces a user output.
    TickWithOutput { state: String, output: String },
    /// A user input produces the tick.
    TickOnInput { state: String, input: String },
}

impl fmt::Display for ProgressViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgressViolation::MissingTick { state } => {
                write!(f, "state `{state}` has no @t/@t transition")
            }
            ProgressViolation::TickWithOutput { state, output } => {
                write!(f, "state `{state}` answers @t with `{output}`")
            }
            ProgressViolation::TickOnInput { state, input } => {
                write!(f, "state `{state}` answers `{input}` with @t")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum RefineError {
    #[error("machine is not time-progressive: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotTimeProgressive(Vec<ProgressViolation>),
}

/// All reasons why `fsm` is not time-progressive; empty if it is.
pub fn time_progress_violations(fsm: &MealyMachine) -> Vec<ProgressViolation> {
    let mut out = Vec::new();
    for s in fsm.state_ids() {
        let state = fsm.state_name(s).to_string();
        match fsm.tick_successor(s) {
            None => out.push(ProgressViolation::MissingTick { state: state.clone() }),
            Some((Letter::Sym(o), _)) => out.push(ProgressViolation::TickWithOutput {
                state: state.clone(),
                output: o.to_string(),
            }),
            Some((Letter::Tick, _)) => {}
        }
        for (input, (output, _)) in fsm.row(s) {
            if let (Letter::Sym(i), Letter::Tick) = (input, output) {
                out.push(ProgressViolation::TickOnInput {
                    state: state.clone(),
                    input: i.to_string(),
                });
            }
        }
    }
    out
}

/// Every state has a tick transition with tick output and no user input
/// produces the tick.
pub fn is_time_progressive(fsm: &MealyMachine) -> bool {
    time_progress_violations(fsm).is_empty()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RefineOptions {
    /// Coalesce adjacent guards with the same input, output and target.
    pub merge: bool,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { merge: true }
    }
}

/// Builds a timed machine whose tick abstraction is bisimilar to `fsm`.
/// States keep the names of `fsm`; only those reachable from the initial
/// state are kept.
pub fn refine(fsm: &MealyMachine) -> Result<TimedMachine, RefineError> {
    refine_with(fsm, RefineOptions::default())
}

pub fn refine_with(fsm: &MealyMachine, options: RefineOptions) -> Result<TimedMachine, RefineError> {
    let violations = time_progress_violations(fsm);
    if !violations.is_empty() {
        return Err(RefineError::NotTimeProgressive(violations));
    }
    let tick = |r: StateId| fsm.tick_successor(r).expect("time-progressive").1;

    let mut transitions = Vec::new();
    let mut timeouts = Vec::with_capacity(fsm.num_states());
    let mut marked = vec![false; fsm.num_states()];
    let mut touched = Vec::new();
    for s in fsm.state_ids() {
        for r in touched.drain(..) {
            marked[r] = false;
        }
        let add_inputs = |r: StateId, guard: Guard, out: &mut Vec<Transition>| {
            for (input, (output, target)) in fsm.row(r) {
                if let (Letter::Sym(i), Letter::Sym(o)) = (input, output) {
                    out.push(Transition {
                        source: s,
                        input: i.clone(),
                        guard,
                        output: o.clone(),
                        target: *target,
                    });
                }
            }
        };
        let mut r = s;
        let mut ticks: u64 = 0;
        while !marked[r.index()] {
            marked[r.index()] = true;
            touched.push(r.index());
            add_inputs(r, interval_guard(ticks), &mut transitions);
            r = tick(r);
            ticks += 1;
        }
        let n = u32::try_from(ticks / 2).expect("timeout overflow");
        let timeout = if ticks.is_multiple_of(2) {
            Timeout::After { bound: n, target: r }
        } else {
            // the cycle closes inside (n,n+1): keep that interval, time out at n+1
            add_inputs(r, Guard::unit(n), &mut transitions);
            Timeout::After {
                bound: n + 1,
                target: tick(r),
            }
        };
        timeouts.push(timeout);
    }
    if options.merge {
        transitions = merge_guards(transitions);
    }
    let machine = TimedMachine::from_parts(
        fsm.name().to_string(),
        fsm.states().to_vec(),
        fsm.inputs().to_vec(),
        fsm.outputs().to_vec(),
        fsm.initial(),
        transitions,
        timeouts,
    );
    Ok(machine.reachable())
}

fn interval_guard(ticks: u64) -> Guard {
    ClockInterval::from_ticks(ticks).to_guard()
}

/// Coalesces transitions with the same source, input, output and target
/// whose guards are adjacent or overlapping. Guards that stay separate are
/// left as they are.
pub fn merge_guards(mut transitions: Vec<Transition>) -> Vec<Transition> {
    transitions.sort_by(|a, b| {
        (a.source, &a.input, a.guard, &a.output, a.target).cmp(&(b.source, &b.input, b.guard, &b.output, b.target))
    });
    let mut out: Vec<Transition> = Vec::with_capacity(transitions.len());
    for t in transitions {
        if let Some(last) = out.last_mut() {
            if last.source == t.source && last.input == t.input && last.output == t.output && last.target == t.target {
                if let Some(u) = last.guard.union(&t.guard) {
                    last.guard = u;
                    continue;
                }
            }
        }
        out.push(t);
    }
    out
}

/// The relation between a refined machine and the untimed machine it came
/// from: timed state `(s, x)` is related to the state reached from `s` by the
/// ticks encoding `x`. One pair per interval below the timeout of `s`.
pub fn refinement_relation(fsm: &MealyMachine, refined: &TimedMachine) -> BisimRelation {
    let mut pairs = Vec::new();
    for s in refined.state_ids() {
        let Some(mut r) = fsm.state_id(refined.state_name(s)) else {
            continue;
        };
        let Some(bound) = refined.timeout(s).bound() else {
            continue;
        };
        for k in 0..2 * u64::from(bound) {
            pairs.push(RelatedPair {
                timed: s,
                interval: ClockInterval::from_ticks(k),
                untimed: r,
            });
            match fsm.tick_successor(r) {
                Some((_, next)) => r = *next,
                None => break,
            }
        }
    }
    BisimRelation { pairs }
}
