//! Product, reachability, equivalence and minimization of partial
//! deterministic Mealy machines.
//!
//! Partiality is observable: a machine that is undefined on an input word
//! differs from one that answers it. Equivalence and minimization both use
//! this exact reading.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::machine::StateId;
use crate::mealy::{Edge, MealyMachine};
use crate::symbol::{format_letters, Letter, Symbol};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("{which} alphabets differ: {{{}}} vs {{{}}}", join(left), join(right))]
pub struct AlphabetMismatch {
    pub which: &'static str,
    pub left: Vec<Symbol>,
    pub right: Vec<Symbol>,
}

fn join(symbols: &[Symbol]) -> String {
    symbols.iter().map(Symbol::as_str).collect::<Vec<_>>().join(", ")
}

fn same_set(a: &[Symbol], b: &[Symbol]) -> bool {
    a.len() == b.len() && a.iter().all(|s| b.contains(s))
}

/// Errors unless both lists hold the same symbols (order is ignored).
pub fn check_same_alphabets(which: &'static str, left: &[Symbol], right: &[Symbol]) -> Result<(), AlphabetMismatch> {
    if same_set(left, right) {
        Ok(())
    } else {
        Err(AlphabetMismatch {
            which,
            left: left.to_vec(),
            right: right.to_vec(),
        })
    }
}

/// Synchronous product over reachable state pairs. A transition exists
/// exactly when both machines define it with the same output. States are
/// named `left|right` and listed in breadth-first order.
pub fn product(a: &MealyMachine, b: &MealyMachine) -> Result<MealyMachine, AlphabetMismatch> {
    check_same_alphabets("input", a.inputs(), b.inputs())?;
    check_same_alphabets("output", a.outputs(), b.outputs())?;
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    index.insert(pairs[0], StateId(0));
    let mut rows: Vec<BTreeMap<Letter, Edge>> = Vec::new();
    let mut head = 0;
    while head < pairs.len() {
        let (x, y) = pairs[head];
        head += 1;
        let mut row = BTreeMap::new();
        for letter in a.input_letters() {
            let (Some((o1, x2)), Some((o2, y2))) = (a.step(x, &letter), b.step(y, &letter)) else {
                continue;
            };
            if o1 != o2 {
                continue;
            }
            let next = *index.entry((*x2, *y2)).or_insert_with(|| {
                pairs.push((*x2, *y2));
                StateId(pairs.len() - 1)
            });
            row.insert(letter, (o1.clone(), next));
        }
        rows.push(row);
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("{}|{}", a.state_name(x), b.state_name(y)))
        .collect();
    Ok(MealyMachine::from_parts(
        format!("{}_{}", a.name(), b.name()),
        names,
        a.inputs().to_vec(),
        a.outputs().to_vec(),
        StateId(0),
        rows,
    ))
}

/// Restriction to the states reachable from the initial state, in their
/// original order.
pub fn reachable(m: &MealyMachine) -> MealyMachine {
    let mut keep = m.bfs_order();
    keep.sort();
    m.restricted(&keep)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MismatchKind {
    /// Both machines answer the last letter, with different outputs.
    OutputMismatch,
    /// Exactly one machine answers the last letter.
    DefinednessMismatch,
}

/// A shortest input word on which two machines disagree. Both agree on every
/// proper prefix; `left` and `right` are their answers to the last letter
/// (`None` when undefined).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub word: Vec<Letter>,
    pub kind: MismatchKind,
    pub left: Option<Letter>,
    pub right: Option<Letter>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: &Option<Letter>| o.as_ref().map_or("undefined".to_string(), ToString::to_string);
        write!(
            f,
            "{}: {} vs {}",
            format_letters(&self.word),
            show(&self.left),
            show(&self.right)
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Equivalent,
    Distinguished(Counterexample),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Distinguished(c) => Some(c),
        }
    }
}

type Pair = (StateId, StateId);

/// Decides equality of the partial behaviors of `a` and `b` by a
/// breadth-first walk of the pair graph, so a counterexample is shortest.
/// Letters are tried tick first, then in the input order of `a`, then any
/// inputs only `b` declares.
pub fn equivalent(a: &MealyMachine, b: &MealyMachine) -> Equivalence {
    let mut letters: Vec<Letter> = a.input_letters().collect();
    for s in b.inputs() {
        if !a.inputs().contains(s) {
            letters.push(Letter::Sym(s.clone()));
        }
    }
    let start = (a.initial(), b.initial());
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair @ (x, y)) = queue.pop_front() {
        for (k, letter) in letters.iter().enumerate() {
            let kind = match (a.step(x, letter), b.step(y, letter)) {
                (None, None) => continue,
                (Some((o1, x2)), Some((o2, y2))) if o1 == o2 => {
                    let next = (*x2, *y2);
                    if let Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some((pair, k)));
                        queue.push_back(next);
                    }
                    continue;
                }
                (Some(_), Some(_)) => MismatchKind::OutputMismatch,
                _ => MismatchKind::DefinednessMismatch,
            };
            let mut word = vec![letter.clone()];
            let mut at = pair;
            while let Some((prev, j)) = parent[&at] {
                word.push(letters[j].clone());
                at = prev;
            }
            word.reverse();
            return Equivalence::Distinguished(Counterexample {
                word,
                kind,
                left: a.step(x, letter).map(|e| e.0.clone()),
                right: b.step(y, letter).map(|e| e.0.clone()),
            });
        }
    }
    Equivalence::Equivalent
}

/// Merges behaviorally equivalent states of the reachable part.
///
/// Per letter: the output and the block of the successor.
type Signature = Vec<Option<(Letter, usize)>>;

/// Moore-style partition refinement: two states stay together while, for
/// every input letter, both are undefined or both give the same output and
/// move into the same block. Each block is named after its first member.
pub fn minimize(m: &MealyMachine) -> MealyMachine {
    let m = reachable(m);
    let letters: Vec<Letter> = m.input_letters().collect();
    let n = m.num_states();
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Signature), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for s in m.state_ids() {
            let signature: Vec<_> = letters
                .iter()
                .map(|l| m.step(s, l).map(|(o, t)| (o.clone(), block[t.index()])))
                .collect();
            let fresh = ids.len();
            next[s.index()] = *ids.entry((block[s.index()], signature)).or_insert(fresh);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // blocks numbered by first member, so state order follows the input
    let mut first: Vec<Option<StateId>> = vec![None; count];
    for s in m.state_ids() {
        first[block[s.index()]].get_or_insert(s);
    }
    let reps: Vec<StateId> = first.into_iter().map(|s| s.expect("non-empty block")).collect();
    let rows = reps
        .iter()
        .map(|&s| {
            m.row(s)
                .iter()
                .map(|(i, (o, t))| (i.clone(), (o.clone(), StateId(block[t.index()]))))
                .collect()
        })
        .collect();
    MealyMachine::from_parts(
        m.name().to_string(),
        reps.iter().map(|&s| m.state_name(s).to_string()).collect(),
        m.inputs().to_vec(),
        m.outputs().to_vec(),
        StateId(block[m.initial().index()]),
        rows,
    )
}

/// Equal up to renaming of the reachable states.
pub fn isomorphic(a: &MealyMachine, b: &MealyMachine) -> bool {
    let a = reachable(a);
    let b = reachable(b);
    if a.num_states() != b.num_states() || a.num_transitions() != b.num_transitions() {
        return false;
    }
    let mut fwd: Vec<Option<StateId>> = vec![None; a.num_states()];
    let mut bwd: Vec<Option<StateId>> = vec![None; b.num_states()];
    fwd[a.initial().index()] = Some(b.initial());
    bwd[b.initial().index()] = Some(a.initial());
    let mut stack = vec![(a.initial(), b.initial())];
    while let Some((x, y)) = stack.pop() {
        let (rx, ry) = (a.row(x), b.row(y));
        if rx.len() != ry.len() {
            return false;
        }
        for (letter, (o1, x2)) in rx {
            let Some((o2, y2)) = ry.get(letter) else { return false };
            if o1 != o2 {
                return false;
            }
            match (fwd[x2.index()], bwd[y2.index()]) {
                (None, None) => {
                    fwd[x2.index()] = Some(*y2);
                    bwd[y2.index()] = Some(*x2);
                    stack.push((*x2, *y2));
                }
                (Some(p), Some(q)) if p == *y2 && q == *x2 => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::abstract_fsm;
    use crate::fixtures;
    use crate::refinement::is_time_progressive;
    use crate::semantics::mealy_run;

    fn two_state(out_b: &str) -> MealyMachine {
        MealyMachine::builder("m")
            .inputs(["i"])
            .outputs(["o", "p"])
            .states(["a", "b"])
            .initial("a")
            .tick("a", "b")
            .tick("b", "a")
            .io("a", "i", "o", "a")
            .io("b", "i", out_b, "a")
            .build()
            .unwrap()
    }

    #[test]
    fn product_of_fixture_abstractions() {
        let p = product(
            &abstract_fsm(&fixtures::m1(), false),
            &abstract_fsm(&fixtures::m2(), false),
        )
        .unwrap();
        assert_eq!(p.num_states(), 13);
        assert!(isomorphic(&p, &fixtures::m1_m2_product()));
        assert!(isomorphic(&p.renumbered(), &fixtures::m1_m2_product()));
        assert!(is_time_progressive(&p));
    }

    #[test]
    fn product_drops_conflicting_outputs() {
        let p = product(&two_state("o"), &two_state("p")).unwrap();
        assert_eq!(p.num_states(), 2);
        let b = p.state_id("b|b").unwrap();
        assert_eq!(p.step(b, &Letter::sym("i")), None);
        assert!(p.step(p.initial(), &Letter::sym("i")).is_some());
    }

    #[test]
    fn product_rejects_alphabet_mismatch() {
        let other = MealyMachine::builder("x")
            .inputs(["j"])
            .outputs(["o", "p"])
            .states(["a"])
            .initial("a")
            .build()
            .unwrap();
        let err = product(&two_state("o"), &other).unwrap_err();
        assert_eq!(err.which, "input");
    }

    #[test]
    fn diagonal_product_is_equivalent() {
        let m = fixtures::basic_abstract();
        let p = product(&m, &m).unwrap();
        assert_eq!(p.num_states(), m.num_states());
        assert!(equivalent(&p, &m).is_equivalent());
    }

    #[test]
    fn minimizing_the_refined_abstraction() {
        let a = fixtures::basic_refined_abstract();
        assert_eq!(a.num_states(), 12);
        let min = minimize(&a);
        assert_eq!(min.num_states(), 6);
        assert!(isomorphic(&min, &fixtures::basic_abstract()));
        assert!(equivalent(&min, &a).is_equivalent());
        assert!(equivalent(&fixtures::basic_abstract(), &min).is_equivalent());
    }

    #[test]
    fn minimal_machine_is_unchanged() {
        let m = fixtures::basic_abstract();
        assert!(isomorphic(&minimize(&m), &m));
        assert_eq!(minimize(&m).states(), m.states());
    }

    #[test]
    fn identical_rows_merge() {
        let m = two_state("o");
        let min = minimize(&m);
        assert_eq!(min.num_states(), 1);
        assert!(equivalent(&min, &m).is_equivalent());
    }

    #[test]
    fn undefinedness_distinguishes_states() {
        let m = MealyMachine::builder("m")
            .inputs(["i"])
            .outputs(["o"])
            .states(["a", "b"])
            .initial("a")
            .tick("a", "b")
            .tick("b", "a")
            .io("a", "i", "o", "a")
            .build()
            .unwrap();
        assert_eq!(minimize(&m).num_states(), 2);
    }

    #[test]
    fn altered_output_gives_shortest_counterexample() {
        let base = fixtures::basic_abstract();
        let text = crate::fixtures::BASIC_ABSTRACT
            .replace("trans s1,[0,0] i/o2 -> s1,[0,0]", "trans s1,[0,0] i/o1 -> s1,[0,0]");
        let altered = crate::format::parse_fsm(&text).unwrap();
        let Equivalence::Distinguished(c) = equivalent(&base, &altered) else {
            panic!("expected a counterexample")
        };
        assert_eq!(c.word, vec![Letter::Tick, Letter::Tick, Letter::sym("i")]);
        assert_eq!(c.kind, MismatchKind::OutputMismatch);
        assert_eq!(c.left, Some(Letter::sym("o2")));
        assert_eq!(c.right, Some(Letter::sym("o1")));
        assert_eq!(c.to_string(), "@t @t i: o2 vs o1");
        let l = mealy_run(&base, &c.word).unwrap();
        let r = mealy_run(&altered, &c.word).unwrap();
        assert_ne!(l, r);
        assert_eq!(l[..2], r[..2]);
    }

    #[test]
    fn definedness_mismatch() {
        let full = two_state("o");
        let partial = MealyMachine::builder("m")
            .inputs(["i"])
            .outputs(["o", "p"])
            .states(["a", "b"])
            .initial("a")
            .tick("a", "b")
            .tick("b", "a")
            .io("a", "i", "o", "a")
            .build()
            .unwrap();
        let c = equivalent(&full, &partial).counterexample().cloned().unwrap();
        assert_eq!(c.kind, MismatchKind::DefinednessMismatch);
        assert_eq!(c.word, vec![Letter::Tick, Letter::sym("i")]);
        assert_eq!(c.right, None);
    }

    #[test]
    fn reachable_drops_isolated_state() {
        let text = format!(
            "{}\n",
            crate::fixtures::M1_M2_PRODUCT
                .replace("states 0 1", "states 99 0 1")
                .trim_end()
        ) + "trans 99 @t/@t -> 0\n";
        let with_extra = crate::format::parse_fsm(&text).unwrap();
        assert_eq!(with_extra.num_states(), 14);
        let r = reachable(&with_extra);
        assert_eq!(r.num_states(), 13);
        assert!(isomorphic(&r, &fixtures::m1_m2_product()));
        let p = fixtures::m1_m2_product();
        assert_eq!(reachable(&p), p);
    }

    #[test]
    fn full_abstraction_size() {
        let full = abstract_fsm(&fixtures::basic_refined(), true);
        assert_eq!(full.num_states(), 3 * 8);
        assert_eq!(reachable(&full).num_states(), 12);
        assert!(isomorphic(&reachable(&full), &fixtures::basic_refined_abstract()));
    }
}
