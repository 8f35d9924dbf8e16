//! Well-formedness checks for timed machines.

use std::fmt;

use crate::guard::Guard;
use crate::machine::{TimedMachine, Timeout};
use crate::rational::Rational;

/// One violated machine invariant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    EmptyStates,
    EmptyInputs,
    EmptyOutputs,
    /// A name used in two of the three sets (states, inputs, outputs).
    NotDisjoint {
        name: String,
        first: &'static str,
        second: &'static str,
    },
    UnknownInput {
        transition: String,
    },
    UnknownOutput {
        transition: String,
    },
    ZeroTimeout {
        state: String,
    },
    /// Two transitions on the same state and input whose guards overlap;
    /// `clock` is the smallest shared clock value (or a point inside the
    /// shared open unit interval).
    Nondeterministic {
        state: String,
        input: String,
        first: Guard,
        second: Guard,
        clock: Rational,
    },
    /// A guard admits a clock value at or beyond the state's timeout.
    GuardBeyondTimeout {
        transition: String,
        bound: Option<u32>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStates => write!(f, "the state set is empty"),
            Violation::EmptyInputs => write!(f, "the input alphabet is empty"),
            Violation::EmptyOutputs => write!(f, "the output alphabet is empty"),
            Violation::NotDisjoint { name, first, second } => {
                write!(f, "`{name}` is used both as {first} and as {second}")
            }
            Violation::UnknownInput { transition } => {
                write!(f, "transition `{transition}` reads an undeclared input")
            }
            Violation::UnknownOutput { transition } => {
                write!(f, "transition `{transition}` writes an undeclared output")
            }
            Violation::ZeroTimeout { state } => {
                write!(f, "state `{state}` has timeout 0 (bounds must be at least 1)")
            }
            Violation::Nondeterministic { state, input, first, second, clock } => write!(
                f,
                "state `{state}` is nondeterministic on `{input}`: guards {first} and {second} both hold at clock {clock}"
            ),
            Violation::GuardBeyondTimeout { transition, bound } => match bound {
                Some(b) => write!(f, "guard of `{transition}` is not below the timeout {b}"),
                None => write!(f, "guard of `{transition}` is not below the timeout"),
            },
        }
    }
}

/// Checks every machine invariant and returns all violations found, in a
/// stable order. An empty report means the machine is valid.
pub fn validate_tfsm(m: &TimedMachine) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.states().is_empty() {
        out.push(Violation::EmptyStates);
    }
    if m.inputs().is_empty() {
        out.push(Violation::EmptyInputs);
    }
    if m.outputs().is_empty() {
        out.push(Violation::EmptyOutputs);
    }

    let sets: [(&'static str, Vec<&str>); 3] = [
        ("a state", m.states().iter().map(String::as_str).collect()),
        ("an input", m.inputs().iter().map(|s| s.as_str()).collect()),
        ("an output", m.outputs().iter().map(|s| s.as_str()).collect()),
    ];
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            for name in &sets[a].1 {
                if sets[b].1.contains(name) {
                    out.push(Violation::NotDisjoint {
                        name: name.to_string(),
                        first: sets[a].0,
                        second: sets[b].0,
                    });
                }
            }
        }
    }

    for t in m.transitions() {
        if !m.inputs().contains(&t.input) {
            out.push(Violation::UnknownInput {
                transition: m.describe(t),
            });
        }
        if !m.outputs().contains(&t.output) {
            out.push(Violation::UnknownOutput {
                transition: m.describe(t),
            });
        }
    }

    for s in m.state_ids() {
        let timeout = m.timeout(s);
        if let Timeout::After { bound: 0, .. } = timeout {
            out.push(Violation::ZeroTimeout {
                state: m.state_name(s).to_string(),
            });
        }
        let outgoing: Vec<_> = m.transitions_from(s).collect();
        for (k, t1) in outgoing.iter().enumerate() {
            for t2 in &outgoing[k + 1..] {
                if t1.input != t2.input {
                    continue;
                }
                if let Some(h) = t1.guard.common_half_unit(&t2.guard) {
                    let clock = Rational::new(h as i64, 2);
                    out.push(Violation::Nondeterministic {
                        state: m.state_name(s).to_string(),
                        input: t1.input.to_string(),
                        first: t1.guard,
                        second: t2.guard,
                        clock,
                    });
                }
            }
            if let Some(bound) = timeout.bound() {
                if !t1.guard.below(bound) {
                    out.push(Violation::GuardBeyondTimeout {
                        transition: m.describe(t1),
                        bound: Some(bound),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn g(s: &str) -> Guard {
        s.parse().unwrap()
    }

    fn one_state() -> crate::machine::TimedMachineBuilder {
        TimedMachine::builder("m")
            .inputs(["i"])
            .outputs(["o1", "o2"])
            .states(["s"])
            .initial("s")
    }

    #[test]
    fn fixture_machines_are_valid() {
        for m in [
            fixtures::basic(),
            fixtures::basic_refined(),
            fixtures::m1(),
            fixtures::m2(),
            fixtures::m1_m2_intersection(),
        ] {
            assert_eq!(validate_tfsm(&m), vec![], "{}", m.name());
        }
    }

    #[test]
    fn overlapping_closed_endpoints() {
        let m = one_state()
            .transition("s", "i", g("[0,1]"), "o1", "s")
            .transition("s", "i", g("[1,2]"), "o2", "s")
            .build()
            .unwrap();
        let v = validate_tfsm(&m);
        assert_eq!(v.len(), 1);
        match &v[0] {
            Violation::Nondeterministic { clock, .. } => assert_eq!(*clock, Rational::from_integer(1)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn overlap_inside_open_interval_reports_midpoint() {
        let m = one_state()
            .transition("s", "i", g("(0,2)"), "o1", "s")
            .transition("s", "i", g("(1,3)"), "o2", "s")
            .build()
            .unwrap();
        match &validate_tfsm(&m)[0] {
            Violation::Nondeterministic { clock, .. } => assert_eq!(*clock, Rational::new(3, 2)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn guard_touching_timeout_is_rejected() {
        let m = one_state()
            .timeout("s", 2, "s")
            .transition("s", "i", g("[0,2]"), "o1", "s")
            .build()
            .unwrap();
        assert!(matches!(
            validate_tfsm(&m).as_slice(),
            [Violation::GuardBeyondTimeout { bound: Some(2), .. }]
        ));
        let ok = one_state()
            .timeout("s", 3, "s")
            .transition("s", "i", g("(2,3)"), "o1", "s")
            .build()
            .unwrap();
        assert!(validate_tfsm(&ok).is_empty());
    }

    #[test]
    fn zero_timeout_and_alphabet_problems() {
        let m = TimedMachine::builder("m")
            .inputs(["i"])
            .outputs(["s"])
            .states(["s"])
            .initial("s")
            .timeout("s", 0, "s")
            .transition("s", "j", g("[0,0]"), "x", "s")
            .build()
            .unwrap();
        let v = validate_tfsm(&m);
        assert!(v.iter().any(|x| matches!(x, Violation::ZeroTimeout { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::NotDisjoint { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::UnknownInput { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::UnknownOutput { .. })));
        // [0,0] is not below 0
        assert!(v.iter().any(|x| matches!(x, Violation::GuardBeyondTimeout { .. })));
    }

    #[test]
    fn empty_sets() {
        let m = TimedMachine::builder("m").states(["s"]).initial("s").build().unwrap();
        let v = validate_tfsm(&m);
        assert!(v.contains(&Violation::EmptyInputs));
        assert!(v.contains(&Violation::EmptyOutputs));
    }
}
