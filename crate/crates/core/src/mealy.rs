//! Partial deterministic Mealy machines over alphabets extended with the tick
//! letter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::machine::{check_alphabet, ModelError, StateId};
use crate::symbol::{is_valid_state_name, Letter, Symbol};

/// Successor of a defined transition: the output letter and target state.
pub type Edge = (Letter, StateId);

/// Untimed deterministic machine. The tick letter is implicitly part of both
/// alphabets; `inputs` and `outputs` list the user symbols only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MealyMachine {
    name: String,
    states: Vec<String>,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    initial: StateId,
    rows: Vec<BTreeMap<Letter, Edge>>,
}

impl MealyMachine {
    pub fn builder(name: &str) -> MealyMachineBuilder {
        MealyMachineBuilder::new(name)
    }

    pub(crate) fn from_parts(
        name: String,
        states: Vec<String>,
        inputs: Vec<Symbol>,
        outputs: Vec<Symbol>,
        initial: StateId,
        rows: Vec<BTreeMap<Letter, Edge>>,
    ) -> MealyMachine {
        debug_assert_eq!(states.len(), rows.len());
        MealyMachine {
            name,
            states,
            inputs,
            outputs,
            initial,
            rows,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> MealyMachine {
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

    /// Input letters: the tick followed by the user inputs.
    pub fn input_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        std::iter::once(Letter::Tick).chain(self.inputs.iter().cloned().map(Letter::Sym))
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn row(&self, state: StateId) -> &BTreeMap<Letter, Edge> {
        &self.rows[state.0]
    }

    pub fn step(&self, state: StateId, input: &Letter) -> Option<&Edge> {
        self.rows[state.0].get(input)
    }

    pub fn tick_successor(&self, state: StateId) -> Option<&Edge> {
        self.step(state, &Letter::Tick)
    }

    pub fn num_transitions(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// All transitions as `(source, input, output, target)`, by source.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Letter, &Letter, StateId)> {
        self.rows.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .map(move |(input, (output, target))| (StateId(k), input, output, *target))
        })
    }

    /// Same machine with new state names, given in state order.
    pub fn relabeled(&self, names: Vec<String>) -> MealyMachine {
        assert_eq!(names.len(), self.states.len());
        MealyMachine {
            states: names,
            ..self.clone()
        }
    }

    /// States renamed `0..n` in breadth-first order from the initial state,
    /// exploring letters in row order. Unreachable states are dropped.
    pub fn renumbered(&self) -> MealyMachine {
        let order = self.bfs_order();
        let mut remap = vec![None; self.states.len()];
        for (k, s) in order.iter().enumerate() {
            remap[s.0] = Some(StateId(k));
        }
        let rows = order
            .iter()
            .map(|s| {
                self.rows[s.0]
                    .iter()
                    .map(|(i, (o, t))| (i.clone(), (o.clone(), remap[t.0].expect("reachable"))))
                    .collect()
            })
            .collect();
        MealyMachine {
            name: self.name.clone(),
            states: (0..order.len()).map(|k| k.to_string()).collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            initial: StateId(0),
            rows,
        }
    }

    /// Reachable states in breadth-first discovery order.
    pub fn bfs_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut order = vec![self.initial];
        seen[self.initial.0] = true;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for (_, t) in self.rows[s.0].values() {
                if !seen[t.0] {
                    seen[t.0] = true;
                    order.push(*t);
                }
            }
        }
        order
    }

    /// Restriction to `keep` (in the given order); transitions leaving the
    /// kept set are dropped.
    pub(crate) fn restricted(&self, keep: &[StateId]) -> MealyMachine {
        let mut remap = vec![None; self.states.len()];
        for (k, s) in keep.iter().enumerate() {
            remap[s.0] = Some(StateId(k));
        }
        let rows = keep
            .iter()
            .map(|s| {
                self.rows[s.0]
                    .iter()
                    .filter_map(|(i, (o, t))| remap[t.0].map(|t| (i.clone(), (o.clone(), t))))
                    .collect()
            })
            .collect();
        MealyMachine {
            name: self.name.clone(),
            states: keep.iter().map(|s| self.states[s.0].clone()).collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            initial: remap[self.initial.0].expect("initial state kept"),
            rows,
        }
    }
}

impl fmt::Display for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize_fsm(self))
    }
}

#[derive(Debug, Clone)]
pub struct MealyMachineBuilder {
    name: String,
    states: Vec<String>,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    initial: Option<String>,
    transitions: Vec<(String, Letter, Letter, String)>,
}

impl MealyMachineBuilder {
    pub fn new(name: &str) -> Self {
        MealyMachineBuilder {
            name: name.to_string(),
            states: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            initial: None,
            transitions: Vec::new(),
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

    pub fn transition(mut self, source: &str, input: Letter, output: Letter, target: &str) -> Self {
        self.transitions
            .push((source.to_string(), input, output, target.to_string()));
        self
    }

    /// `source --@t/@t--> target`
    pub fn tick(self, source: &str, target: &str) -> Self {
        self.transition(source, Letter::Tick, Letter::Tick, target)
    }

    /// `source --input/output--> target`
    pub fn io(self, source: &str, input: &str, output: &str, target: &str) -> Self {
        self.transition(source, Letter::sym(input), Letter::sym(output), target)
    }

    pub fn build(self) -> Result<MealyMachine, ModelError> {
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
        let mut rows: Vec<BTreeMap<Letter, Edge>> = vec![BTreeMap::new(); self.states.len()];
        for (src, input, output, tgt) in self.transitions {
            if let Letter::Sym(s) = &input {
                if !self.inputs.contains(s) {
                    return Err(ModelError::UnknownSymbol(s.to_string()));
                }
            }
            if let Letter::Sym(s) = &output {
                if !self.outputs.contains(s) {
                    return Err(ModelError::UnknownSymbol(s.to_string()));
                }
            }
            let source = lookup(&src)?;
            let target = lookup(&tgt)?;
            if rows[source.0].contains_key(&input) {
                return Err(ModelError::Nondeterministic {
                    state: src,
                    input: input.to_string(),
                });
            }
            rows[source.0].insert(input, (output, target));
        }
        Ok(MealyMachine {
            name: self.name,
            states: self.states,
            inputs: self.inputs,
            outputs: self.outputs,
            initial,
            rows,
        })
    }
}
