//! Deterministic timed finite state machines.

use std::collections::HashMap;
use std::fmt;

use crate::guard::Guard;
use crate::symbol::{is_valid_state_name, is_valid_symbol, Symbol};

/// Index of a state within its machine.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Per-state timeout: how long the machine waits for an input before moving
/// on its own.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Timeout {
    Infinite,
    After { bound: u32, target: StateId },
}

impl Timeout {
    pub fn bound(&self) -> Option<u32> {
        match self {
            Timeout::Infinite => None,
            Timeout::After { bound, .. } => Some(*bound),
        }
    }

    pub fn target(&self) -> Option<StateId> {
        match self {
            Timeout::Infinite => None,
            Timeout::After { target, .. } => Some(*target),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Transition {
    pub source: StateId,
    pub input: Symbol,
    pub guard: Guard,
    pub output: Symbol,
    pub target: StateId,
}

/// Structural errors that prevent a machine from being represented at all.
/// Semantic constraints (determinism, guard/timeout consistency, ...) are
/// reported by [`crate::validate::validate_tfsm`] instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbol(String),
    #[error("`{0}` is not a valid state name")]
    InvalidStateName(String),
    #[error("no initial state")]
    NoInitial,
    #[error("timeout of state `{0}` given twice")]
    DuplicateTimeout(String),
    #[error("state `{state}` has two transitions on `{input}`")]
    Nondeterministic { state: String, input: String },
}

/// A deterministic timed FSM with timed guards and timeouts.
///
/// Transitions are kept sorted by source, input (in alphabet order) and guard,
/// so two machines built from the same data compare equal regardless of
/// insertion order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TimedMachine {
    name: String,
    states: Vec<String>,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    initial: StateId,
    transitions: Vec<Transition>,
    timeouts: Vec<Timeout>,
}

impl TimedMachine {
    pub fn builder(name: &str) -> TimedMachineBuilder {
        TimedMachineBuilder::new(name)
    }

    /// Assembles a machine from already-resolved parts.
    pub(crate) fn from_parts(
        name: String,
        states: Vec<String>,
        inputs: Vec<Symbol>,
        outputs: Vec<Symbol>,
        initial: StateId,
        mut transitions: Vec<Transition>,
        timeouts: Vec<Timeout>,
    ) -> TimedMachine {
        debug_assert_eq!(states.len(), timeouts.len());
        let rank: HashMap<&Symbol, usize> = inputs.iter().enumerate().map(|(k, s)| (s, k)).collect();
        transitions.sort_by(|a, b| {
            let ra = rank.get(&a.input).copied().unwrap_or(usize::MAX);
            let rb = rank.get(&b.input).copied().unwrap_or(usize::MAX);
            (a.source, ra, &a.input, a.guard, &a.output, a.target)
                .cmp(&(b.source, rb, &b.input, b.guard, &b.output, b.target))
        });
        transitions.dedup();
        TimedMachine {
            name,
            states,
            inputs,
            outputs,
            initial,
            transitions,
            timeouts,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> TimedMachine {
        self.name = name.to_string();
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn inputs(&self) -> &[Symbol] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Symbol] {
        &self.outputs
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transitions_from(&self, state: StateId) -> impl Iterator<Item = &Transition> {
        // sorted by source, so the slice for `state` is contiguous
        let start = self.transitions.partition_point(|t| t.source < state);
        self.transitions[start..].iter().take_while(move |t| t.source == state)
    }

    pub fn timeout(&self, state: StateId) -> Timeout {
        self.timeouts[state.0]
    }

    pub fn timeouts(&self) -> &[Timeout] {
        &self.timeouts
    }

    /// Restriction to the states reachable from the initial state through
    /// transitions and timeouts. State order is preserved.
    pub fn reachable(&self) -> TimedMachine {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.initial];
        seen[self.initial.0] = true;
        while let Some(s) = stack.pop() {
            let succ = self
                .transitions_from(s)
                .map(|t| t.target)
                .chain(self.timeout(s).target());
            for t in succ {
                if !seen[t.0] {
                    seen[t.0] = true;
                    stack.push(t);
                }
            }
        }
        if seen.iter().all(|&b| b) {
            return self.clone();
        }
        let mut remap = vec![None; self.states.len()];
        let mut states = Vec::new();
        for (k, name) in self.states.iter().enumerate() {
            if seen[k] {
                remap[k] = Some(StateId(states.len()));
                states.push(name.clone());
            }
        }
        let map = |s: StateId| remap[s.0].expect("reachable state");
        let transitions = self
            .transitions
            .iter()
            .filter(|t| seen[t.source.0])
            .map(|t| Transition {
                source: map(t.source),
                target: map(t.target),
                ..t.clone()
            })
            .collect();
        let timeouts = self
            .timeouts
            .iter()
            .enumerate()
            .filter(|(k, _)| seen[*k])
            .map(|(_, t)| match *t {
                Timeout::Infinite => Timeout::Infinite,
                Timeout::After { bound, target } => Timeout::After {
                    bound,
                    target: map(target),
                },
            })
            .collect();
        TimedMachine::from_parts(
            self.name.clone(),
            states,
            self.inputs.clone(),
            self.outputs.clone(),
            map(self.initial),
            transitions,
            timeouts,
        )
    }

    /// Structural isomorphism up to state naming, restricted to reachable
    /// states. Both machines must have identical transition lists per
    /// matched state (same inputs, guards and outputs).
    pub fn is_isomorphic(&self, other: &TimedMachine) -> bool {
        let a = self.reachable();
        let b = other.reachable();
        if a.num_states() != b.num_states() || a.transitions.len() != b.transitions.len() {
            return false;
        }
        let mut fwd: Vec<Option<StateId>> = vec![None; a.num_states()];
        let mut bwd: Vec<Option<StateId>> = vec![None; b.num_states()];
        let mut stack = vec![(a.initial, b.initial)];
        fwd[a.initial.0] = Some(b.initial);
        bwd[b.initial.0] = Some(a.initial);
        let mut bind = |x: StateId, y: StateId, stack: &mut Vec<(StateId, StateId)>| -> bool {
            match (fwd[x.0], bwd[y.0]) {
                (None, None) => {
                    fwd[x.0] = Some(y);
                    bwd[y.0] = Some(x);
                    stack.push((x, y));
                    true
                }
                (Some(y2), Some(x2)) => y2 == y && x2 == x,
                _ => false,
            }
        };
        while let Some((x, y)) = stack.pop() {
            let mut tx: Vec<_> = a.transitions_from(x).collect();
            let mut ty: Vec<_> = b.transitions_from(y).collect();
            if tx.len() != ty.len() {
                return false;
            }
            tx.sort_by(|p, q| (&p.input, p.guard).cmp(&(&q.input, q.guard)));
            ty.sort_by(|p, q| (&p.input, p.guard).cmp(&(&q.input, q.guard)));
            for (p, q) in tx.iter().zip(&ty) {
                if p.input != q.input || p.guard != q.guard || p.output != q.output {
                    return false;
                }
                if !bind(p.target, q.target, &mut stack) {
                    return false;
                }
            }
            match (a.timeout(x), b.timeout(y)) {
                (Timeout::Infinite, Timeout::Infinite) => {}
                (Timeout::After { bound: b1, target: t1 }, Timeout::After { bound: b2, target: t2 }) if b1 == b2 => {
                    if !bind(t1, t2, &mut stack) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    pub(crate) fn describe(&self, t: &Transition) -> String {
        format!(
            "{} {} {} / {} -> {}",
            self.state_name(t.source),
            t.input,
            t.guard,
            t.output,
            self.state_name(t.target)
        )
    }
}

impl fmt::Display for TimedMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize_tfsm(self))
    }
}

/// Incremental construction of a [`TimedMachine`] by state and symbol name.
#[derive(Debug, Clone)]
pub struct TimedMachineBuilder {
    name: String,
    states: Vec<String>,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    initial: Option<String>,
    transitions: Vec<(String, String, Guard, String, String)>,
    timeouts: Vec<(String, Option<(u32, String)>)>,
}

impl TimedMachineBuilder {
    pub fn new(name: &str) -> Self {
        TimedMachineBuilder {
            name: name.to_string(),
            states: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            initial: None,
            transitions: Vec::new(),
            timeouts: Vec::new(),
        }
    }

    pub fn states<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.states.extend(names.into_iter().map(|s| s.as_ref().to_string()));
        self
    }

    pub fn inputs<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.inputs.extend(names.into_iter().map(|s| Symbol::new(s.as_ref())));
        self
    }

    pub fn outputs<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.outputs.extend(names.into_iter().map(|s| Symbol::new(s.as_ref())));
        self
    }

    pub fn initial(mut self, state: &str) -> Self {
        self.initial = Some(state.to_string());
        self
    }

    pub fn timeout(mut self, state: &str, bound: u32, target: &str) -> Self {
        self.timeouts
            .push((state.to_string(), Some((bound, target.to_string()))));
        self
    }

    pub fn no_timeout(mut self, state: &str) -> Self {
        self.timeouts.push((state.to_string(), None));
        self
    }

    pub fn transition(mut self, source: &str, input: &str, guard: Guard, output: &str, target: &str) -> Self {
        self.transitions.push((
            source.to_string(),
            input.to_string(),
            guard,
            output.to_string(),
            target.to_string(),
        ));
        self
    }

    /// Resolves names. Timeouts not given default to infinite.
    pub fn build(self) -> Result<TimedMachine, ModelError> {
        let mut index: HashMap<&str, StateId> = HashMap::new();
        for (k, s) in self.states.iter().enumerate() {
            if !is_valid_state_name(s) {
                return Err(ModelError::InvalidStateName(s.clone()));
            }
            if index.insert(s.as_str(), StateId(k)).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        check_alphabet(&self.inputs)?;
        check_alphabet(&self.outputs)?;
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| ModelError::UnknownState(s.to_string()))
        };
        let initial = lookup(self.initial.as_deref().ok_or(ModelError::NoInitial)?)?;
        let mut timeouts: Vec<Option<Timeout>> = vec![None; self.states.len()];
        for (state, spec) in &self.timeouts {
            let id = lookup(state)?;
            let timeout = match spec {
                None => Timeout::Infinite,
                Some((bound, target)) => Timeout::After {
                    bound: *bound,
                    target: lookup(target)?,
                },
            };
            if timeouts[id.0].replace(timeout).is_some() {
                return Err(ModelError::DuplicateTimeout(state.clone()));
            }
        }
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (src, input, guard, output, tgt) in &self.transitions {
            for sym in [input, output] {
                if !is_valid_symbol(sym) {
                    return Err(ModelError::InvalidSymbol(sym.clone()));
                }
            }
            transitions.push(Transition {
                source: lookup(src)?,
                input: Symbol::new(input),
                guard: *guard,
                output: Symbol::new(output),
                target: lookup(tgt)?,
            });
        }
        Ok(TimedMachine::from_parts(
            self.name,
            self.states,
            self.inputs,
            self.outputs,
            initial,
            transitions,
            timeouts.into_iter().map(|t| t.unwrap_or(Timeout::Infinite)).collect(),
        ))
    }
}

pub(crate) fn check_alphabet(symbols: &[Symbol]) -> Result<(), ModelError> {
    for (k, s) in symbols.iter().enumerate() {
        if !is_valid_symbol(s.as_str()) {
            return Err(ModelError::InvalidSymbol(s.to_string()));
        }
        if symbols[..k].contains(s) {
            return Err(ModelError::DuplicateSymbol(s.to_string()));
        }
    }
    Ok(())
}
