//! Graphviz and timed-automaton exports.

use std::fmt::Write as _;

use crate::guard::Guard;
use crate::machine::{TimedMachine, Timeout};
use crate::mealy::MealyMachine;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for a timed machine: one node per state (the initial one drawn
/// with a double circle), one edge per transition labeled `guard:i/o` and a
/// dashed edge `t=n` per finite timeout.
pub fn export_dot_tfsm(m: &TimedMachine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(m.name()));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    for s in m.state_ids() {
        let _ = writeln!(out, "  {}{};", quote(m.state_name(s)), initial_attr(s == m.initial()));
    }
    for t in m.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(t.source)),
            quote(m.state_name(t.target)),
            quote(&format!("{}:{}/{}", t.guard, t.input, t.output))
        );
    }
    for s in m.state_ids() {
        if let Timeout::After { bound, target } = m.timeout(s) {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}, style=dashed];",
                quote(m.state_name(s)),
                quote(m.state_name(target)),
                quote(&format!("t={bound}"))
            );
        }
    }
    out.push_str("}\n");
    out
}

/// DOT text for an untimed machine, edges labeled `i/o`.
pub fn export_dot_fsm(m: &MealyMachine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(m.name()));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    for s in m.state_ids() {
        let _ = writeln!(out, "  {}{};", quote(m.state_name(s)), initial_attr(s == m.initial()));
    }
    for (s, i, o, t) in m.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(s)),
            quote(m.state_name(t)),
            quote(&format!("{i}/{o}"))
        );
    }
    out.push_str("}\n");
    out
}

fn initial_attr(initial: bool) -> &'static str {
    if initial {
        " [shape=doublecircle]"
    } else {
        ""
    }
}

/// The guard as a conjunction of comparisons on clock `x`.
pub fn guard_constraint(g: &Guard) -> String {
    if g.is_point() {
        return format!("x == {}", g.lower());
    }
    let mut parts = Vec::new();
    match (g.lower(), g.lower_closed()) {
        (0, true) => {}
        (n, true) => parts.push(format!("x >= {n}")),
        (n, false) => parts.push(format!("x > {n}")),
    }
    if let Some(u) = g.upper() {
        let op = if g.upper_closed() { "<=" } else { "<" };
        parts.push(format!("x {op} {u}"));
    }
    if parts.is_empty() {
        "true".to_string()
    } else {
        parts.join(" && ")
    }
}

/// Single-clock timed automaton with epsilon edges. Locations are `l0, l1,
/// ...` in state order; a finite timeout `n` becomes the invariant `x <= n`
/// plus an `eps` edge guarded by `x == n`. Every edge resets the clock.
pub fn export_timed_automaton(m: &TimedMachine) -> String {
    let loc = |s: crate::machine::StateId| format!("l{}", s.index());
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", m.name());
    out.push_str("clock x\n");
    let actions: Vec<String> = m
        .inputs()
        .iter()
        .flat_map(|i| m.outputs().iter().map(move |o| format!("({i},{o})")))
        .collect();
    let _ = writeln!(out, "actions {}", actions.join(" "));
    let _ = writeln!(out, "initial {}", loc(m.initial()));
    for s in m.state_ids() {
        let _ = match m.timeout(s).bound() {
            Some(n) => writeln!(out, "location {} {} invariant x <= {n}", loc(s), m.state_name(s)),
            None => writeln!(out, "location {} {}", loc(s), m.state_name(s)),
        };
    }
    for s in m.state_ids() {
        for t in m.transitions_from(s) {
            let _ = writeln!(
                out,
                "edge {} -> {} ({},{}), {}, x := 0",
                loc(s),
                loc(t.target),
                t.input,
                t.output,
                guard_constraint(&t.guard)
            );
        }
        if let Timeout::After { bound, target } = m.timeout(s) {
            let _ = writeln!(out, "edge {} -> {} eps, x == {bound}, x := 0", loc(s), loc(target));
        }
    }
    out
}
