//! Untiming: the tick-abstract Mealy machine of a timed machine, and a
//! checker for tick-bisimulations between timed and untimed machines.
//!
//! Clock values are discretized into point intervals `[n,n]`, open unit
//! intervals `(n,n+1)` and a tail `(N,inf)`, where `N` is the largest finite
//! constant of the machine. A deterministic machine cannot tell two clock
//! values of the same interval apart, so one abstract state per
//! (state, interval) pair is enough. Each tick letter stands for a delay that
//! moves the clock into the next interval.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::guard::Guard;
use crate::machine::{StateId, TimedMachine, Timeout};
use crate::mealy::{Edge, MealyMachine};
use crate::rational::Rational;
use crate::semantics::{advance, step};
use crate::symbol::Letter;
use crate::word::TimedState;

/// One cell of the clock discretization.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ClockInterval {
    /// `[n,n]`
    Point(u32),
    /// `(n,n+1)`
    Open(u32),
    /// `(n,inf)`
    Tail(u32),
}

impl ClockInterval {
    /// The interval that `k` ticks from clock 0 land in, ignoring any tail.
    pub fn from_ticks(k: u64) -> ClockInterval {
        let n = u32::try_from(k / 2).expect("tick count overflow");
        if k.is_multiple_of(2) {
            ClockInterval::Point(n)
        } else {
            ClockInterval::Open(n)
        }
    }

    /// Lowest half-unit of the interval (see [`Guard::half_units`]).
    pub fn half_unit(&self) -> u64 {
        match *self {
            ClockInterval::Point(n) => 2 * u64::from(n),
            ClockInterval::Open(n) | ClockInterval::Tail(n) => 2 * u64::from(n) + 1,
        }
    }

    pub fn contains(&self, x: Rational) -> bool {
        match *self {
            ClockInterval::Point(n) => x == Rational::from(n),
            ClockInterval::Open(n) => x > Rational::from(n) && x < Rational::from(n + 1),
            ClockInterval::Tail(n) => x > Rational::from(n),
        }
    }

    /// Clock value used to stand for the whole interval: the point itself,
    /// or the point half a unit above the lower end.
    pub fn representative(&self) -> Rational {
        match *self {
            ClockInterval::Point(n) => Rational::from(n),
            ClockInterval::Open(n) | ClockInterval::Tail(n) => Rational::from(n) + Rational::new(1, 2),
        }
    }

    pub fn is_subset_of(&self, g: &Guard) -> bool {
        let (lo, hi) = g.half_units();
        let k = self.half_unit();
        match (self, hi) {
            (ClockInterval::Tail(_), hi) => hi.is_none() && lo <= k,
            (_, None) => lo <= k,
            (_, Some(hi)) => lo <= k && k <= hi,
        }
    }

    /// The guard with exactly the clock values of this interval.
    pub fn to_guard(&self) -> Guard {
        match *self {
            ClockInterval::Point(n) => Guard::point(n),
            ClockInterval::Open(n) => Guard::unit(n),
            ClockInterval::Tail(n) => Guard::greater_than(n),
        }
    }

    /// The interval following this one as time passes (the tail is its own
    /// successor).
    pub fn next(&self) -> ClockInterval {
        match *self {
            ClockInterval::Point(n) => ClockInterval::Open(n),
            ClockInterval::Open(n) => ClockInterval::Point(n + 1),
            ClockInterval::Tail(n) => ClockInterval::Tail(n),
        }
    }
}

impl PartialOrd for ClockInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClockInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |c: &ClockInterval| (c.half_unit(), matches!(c, ClockInterval::Tail(_)));
        rank(self).cmp(&rank(other))
    }
}

impl fmt::Display for ClockInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClockInterval::Point(n) => write!(f, "[{n},{n}]"),
            ClockInterval::Open(n) => write!(f, "({n},{})", n + 1),
            ClockInterval::Tail(n) => write!(f, "({n},inf)"),
        }
    }
}

/// Largest finite constant among the timeouts and guard endpoints; 0 if
/// there is none.
pub fn max_constant(machine: &TimedMachine) -> u32 {
    let timeouts = machine.timeouts().iter().filter_map(Timeout::bound);
    let guards = machine
        .transitions()
        .iter()
        .flat_map(|t| std::iter::once(t.guard.lower()).chain(t.guard.upper()));
    timeouts.chain(guards).max().unwrap_or(0)
}

/// The `2N+2` intervals for constant `N`, in increasing order.
pub fn interval_set(n: u32) -> Vec<ClockInterval> {
    let mut out = Vec::with_capacity(2 * n as usize + 2);
    for k in 0..n {
        out.push(ClockInterval::Point(k));
        out.push(ClockInterval::Open(k));
    }
    out.push(ClockInterval::Point(n));
    out.push(ClockInterval::Tail(n));
    out
}

/// Display name of the abstract state `(state, interval)`.
pub fn abstract_state_name(state: &str, interval: ClockInterval) -> String {
    format!("{state},{interval}")
}

/// Builds the tick-abstract FSM. With `keep_unreachable` the result has one
/// state per (state, interval) pair; otherwise only the part reachable from
/// `(initial, [0,0])` is kept, in (state, interval) order.
pub fn abstract_fsm(machine: &TimedMachine, keep_unreachable: bool) -> MealyMachine {
    let n = max_constant(machine);
    let intervals = interval_set(n);
    let width = intervals.len();
    let id = |s: StateId, k: usize| StateId(s.index() * width + k);
    let position = |iv: ClockInterval| intervals.iter().position(|&x| x == iv).expect("interval in the set");

    let mut names = Vec::with_capacity(machine.num_states() * width);
    let mut rows: Vec<BTreeMap<Letter, Edge>> = Vec::with_capacity(names.capacity());
    for s in machine.state_ids() {
        let timeout = machine.timeout(s);
        for (k, &iv) in intervals.iter().enumerate() {
            names.push(abstract_state_name(machine.state_name(s), iv));
            let mut row = BTreeMap::new();
            if let Some(target) = tick_target(timeout, iv, n) {
                let (ts, tiv) = match target {
                    TickTarget::Same(next) => (s, next),
                    TickTarget::Reset(t) => (t, ClockInterval::Point(0)),
                };
                row.insert(Letter::Tick, (Letter::Tick, id(ts, position(tiv))));
            }
            for t in machine.transitions_from(s) {
                if iv.is_subset_of(&t.guard) {
                    row.entry(Letter::Sym(t.input.clone()))
                        .or_insert((Letter::Sym(t.output.clone()), id(t.target, 0)));
                }
            }
            debug_assert_eq!(id(s, k).index(), rows.len());
            rows.push(row);
        }
    }
    let full = MealyMachine::from_parts(
        machine.name().to_string(),
        names,
        machine.inputs().to_vec(),
        machine.outputs().to_vec(),
        id(machine.initial(), 0),
        rows,
    );
    if keep_unreachable {
        return full;
    }
    let mut keep = full.bfs_order();
    keep.sort();
    full.restricted(&keep)
}

enum TickTarget {
    Same(ClockInterval),
    Reset(StateId),
}

fn tick_target(timeout: Timeout, iv: ClockInterval, n: u32) -> Option<TickTarget> {
    let bound = timeout.bound();
    match iv {
        ClockInterval::Point(k) if k < n => match bound {
            Some(b) if k + 1 > b => None,
            _ => Some(TickTarget::Same(ClockInterval::Open(k))),
        },
        ClockInterval::Point(_) => bound.is_none().then_some(TickTarget::Same(ClockInterval::Tail(n))),
        ClockInterval::Open(k) => match timeout {
            Timeout::Infinite => Some(TickTarget::Same(ClockInterval::Point(k + 1))),
            Timeout::After { bound, .. } if k + 1 < bound => Some(TickTarget::Same(ClockInterval::Point(k + 1))),
            Timeout::After { bound, target } if k + 1 == bound => Some(TickTarget::Reset(target)),
            Timeout::After { .. } => None,
        },
        ClockInterval::Tail(_) => bound.is_none().then_some(TickTarget::Same(ClockInterval::Tail(n))),
    }
}

/// A set of timed states `{(state, x) | x in interval}` related to one
/// untimed state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RelatedPair {
    pub timed: StateId,
    pub interval: ClockInterval,
    pub untimed: StateId,
}

/// A finite relation between timed and untimed states, each timed side
/// given per clock interval.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BisimRelation {
    pub pairs: Vec<RelatedPair>,
}

impl BisimRelation {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn index(&self) -> HashMap<(StateId, StateId), Vec<ClockInterval>> {
        let mut map: HashMap<(StateId, StateId), Vec<ClockInterval>> = HashMap::new();
        for p in &self.pairs {
            map.entry((p.timed, p.untimed)).or_default().push(p.interval);
        }
        map
    }
}

/// Relates each abstract state `(s, iv)` with the timed states of `s` whose
/// clock lies in `iv`. Abstract states are matched by name.
pub fn canonical_bisimulation(machine: &TimedMachine, abstract_machine: &MealyMachine) -> BisimRelation {
    let intervals = interval_set(max_constant(machine));
    let mut by_name = HashMap::new();
    for s in machine.state_ids() {
        for &iv in &intervals {
            by_name.insert(abstract_state_name(machine.state_name(s), iv), (s, iv));
        }
    }
    let pairs = abstract_machine
        .state_ids()
        .filter_map(|r| {
            by_name
                .get(abstract_machine.state_name(r))
                .map(|&(timed, interval)| RelatedPair {
                    timed,
                    interval,
                    untimed: r,
                })
        })
        .collect();
    BisimRelation { pairs }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BisimCondition {
    /// The initial timed state `(s0, 0)` is not related to the initial
    /// untimed state.
    Initial,
    /// A short delay has no matching tick step.
    DelayForth,
    /// A tick step has no matching delay.
    DelayBack,
    /// An input/output step has no matching untimed step.
    IoForth,
    /// An untimed input/output step has no matching timed step.
    IoBack,
}

impl BisimCondition {
    /// 0 for the initial-pair requirement, 1-4 for the transfer conditions.
    pub fn number(&self) -> u8 {
        match self {
            BisimCondition::Initial => 0,
            BisimCondition::DelayForth => 1,
            BisimCondition::DelayBack => 2,
            BisimCondition::IoForth => 3,
            BisimCondition::IoBack => 4,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("condition {} violated{}: {detail}", condition.number(), pair.map(|p| format!(" at ({}, {}) ~ {}", p.timed.index(), p.interval, p.untimed.index())).unwrap_or_default())]
pub struct BisimFailure {
    pub condition: BisimCondition,
    pub pair: Option<RelatedPair>,
    pub detail: String,
}

/// Checks that `rel` is a tick-bisimulation between `machine` and `fsm`
/// containing the initial pair.
///
/// Each interval is checked at its representative clock value with one
/// delay witness: half a unit from an integer clock, otherwise the delay to
/// the next integer. Pairs whose interval holds no valid timed state (clock
/// at or beyond the timeout) relate nothing and are skipped.
pub fn check_bisimulation(machine: &TimedMachine, fsm: &MealyMachine, rel: &BisimRelation) -> Result<(), BisimFailure> {
    let index = rel.index();
    let related = |ts: TimedState, r: StateId| {
        index
            .get(&(ts.state, r))
            .is_some_and(|ivs| ivs.iter().any(|iv| iv.contains(ts.clock)))
    };

    if !related(TimedState::at_zero(machine.initial()), fsm.initial()) {
        return Err(BisimFailure {
            condition: BisimCondition::Initial,
            pair: None,
            detail: "initial states are not related".into(),
        });
    }

    for &pair in &rel.pairs {
        let x = pair.interval.representative();
        if let Some(bound) = machine.timeout(pair.timed).bound() {
            if x >= Rational::from(bound) {
                continue;
            }
        }
        let fail = |condition, detail: String| {
            Err(BisimFailure {
                condition,
                pair: Some(pair),
                detail,
            })
        };
        let here = TimedState::new(pair.timed, x);
        let r = pair.untimed;

        let delay = if x.is_integer() {
            Rational::new(1, 2)
        } else {
            Rational::from_integer(x.ceil()) - x
        };
        let later = advance(machine, here, delay);
        match fsm.tick_successor(r) {
            Some((Letter::Tick, next)) => {
                if !related(later, *next) {
                    return fail(
                        BisimCondition::DelayForth,
                        format!(
                            "after delay {delay} the timed machine is in ({}, {}) which is not related to tick successor {}",
                            machine.state_name(later.state),
                            later.clock,
                            fsm.state_name(*next)
                        ),
                    );
                }
            }
            Some((other, _)) => {
                return fail(
                    BisimCondition::DelayBack,
                    format!("tick produces `{other}` at {}", fsm.state_name(r)),
                )
            }
            None => {
                return fail(
                    BisimCondition::DelayForth,
                    format!("no tick transition at {}", fsm.state_name(r)),
                )
            }
        }

        for input in machine.inputs() {
            if let Some((out, next)) = step(machine, here, input) {
                let ok = matches!(
                    fsm.step(r, &Letter::Sym(input.clone())),
                    Some((Letter::Sym(o), r2)) if *o == out && related(next, *r2)
                );
                if !ok {
                    return fail(
                        BisimCondition::IoForth,
                        format!("timed step {input}/{out} has no related untimed step"),
                    );
                }
            }
        }

        for (letter, (out, r2)) in fsm.row(r) {
            let Letter::Sym(input) = letter else { continue };
            let ok = match (step(machine, here, input), out) {
                (Some((o, next)), Letter::Sym(o2)) => o == *o2 && related(next, *r2),
                _ => false,
            };
            if !ok {
                return fail(
                    BisimCondition::IoBack,
                    format!("untimed step {input}/{out} has no related timed step"),
                );
            }
        }
    }
    Ok(())
}
