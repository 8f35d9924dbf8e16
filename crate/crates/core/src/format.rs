//! Text formats for timed (`tfsm`) and untimed (`fsm`) machines.
//!
//! Both are line oriented; `#` starts a comment. A timed machine:
//!
//! ```text
//! tfsm basic
//! inputs i
//! outputs o1 o2
//! states s0 s1
//! initial s0
//! timeout s0 1 -> s1
//! timeout s1 inf
//! trans s0 i [0,1) / o1 -> s0
//! ```
//!
//! An untimed machine uses `fsm NAME` and `trans SRC IN/OUT -> DST`, with
//! `@t` standing for the tick on either side. States without a `timeout`
//! line never time out.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::guard::Guard;
use crate::machine::{StateId, TimedMachine, Timeout, Transition};
use crate::mealy::{Edge, MealyMachine};
use crate::symbol::{is_valid_state_name, is_valid_symbol, Letter, Symbol, TICK_TOKEN};
use crate::validate::{validate_tfsm, Violation};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid machine: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Which of the two formats a document is in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DocumentKind {
    Tfsm,
    Fsm,
}

/// A parsed file of either kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MachineDocument {
    Tfsm(TimedMachine),
    Fsm(MealyMachine),
}

impl MachineDocument {
    pub fn kind(&self) -> DocumentKind {
        match self {
            MachineDocument::Tfsm(_) => DocumentKind::Tfsm,
            MachineDocument::Fsm(_) => DocumentKind::Fsm,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            MachineDocument::Tfsm(m) => m.name(),
            MachineDocument::Fsm(m) => m.name(),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            MachineDocument::Tfsm(m) => serialize_tfsm(m),
            MachineDocument::Fsm(m) => serialize_fsm(m),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax {
        line,
        column,
        message: message.into(),
    })
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &content[s..pos],
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: k + 1, tokens })
        })
        .collect()
}

/// Shared header and declaration handling for both formats.
struct Declarations<'a> {
    name: String,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    initial: Option<(StateId, usize)>,
    body: Vec<&'a Line<'a>>,
    end_line: usize,
}

impl<'a> Declarations<'a> {
    fn read(lines: &'a [Line<'a>], keyword: &str) -> Result<Declarations<'a>, FormatError> {
        let Some(first) = lines.first() else {
            return err(1, 1, format!("empty document, expected `{keyword} NAME`"));
        };
        let head = first.tokens[0];
        if head.text != keyword {
            return err(
                first.number,
                head.column,
                format!("expected `{keyword} NAME`, found `{}`", head.text),
            );
        }
        if first.tokens.len() != 2 {
            return err(first.number, head.column, format!("expected `{keyword} NAME`"));
        }
        let mut decl = Declarations {
            name: first.tokens[1].text.to_string(),
            states: Vec::new(),
            state_index: HashMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            initial: None,
            body: Vec::new(),
            end_line: lines.last().map_or(1, |l| l.number),
        };
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut initial_token = None;
        for line in &lines[1..] {
            let kw = line.tokens[0];
            match kw.text {
                "inputs" | "outputs" | "states" | "initial" => {
                    if let Some(prev) = seen.insert(kw.text, line.number) {
                        return err(
                            line.number,
                            kw.column,
                            format!("`{}` already given on line {prev}", kw.text),
                        );
                    }
                }
                _ => {}
            }
            let args = &line.tokens[1..];
            match kw.text {
                "inputs" | "outputs" => {
                    let mut list = Vec::new();
                    for t in args {
                        if t.text == TICK_TOKEN {
                            return err(line.number, t.column, "the tick `@t` cannot be declared as a symbol");
                        }
                        if !is_valid_symbol(t.text) {
                            return err(line.number, t.column, format!("`{}` is not a valid symbol", t.text));
                        }
                        let sym = Symbol::new(t.text);
                        if list.contains(&sym) {
                            return err(line.number, t.column, format!("symbol `{}` declared twice", t.text));
                        }
                        list.push(sym);
                    }
                    if kw.text == "inputs" {
                        decl.inputs = list;
                    } else {
                        decl.outputs = list;
                    }
                }
                "states" => {
                    for t in args {
                        if !is_valid_state_name(t.text) {
                            return err(line.number, t.column, format!("`{}` is not a valid state name", t.text));
                        }
                        let id = StateId(decl.states.len());
                        if decl.state_index.insert(t.text.to_string(), id).is_some() {
                            return err(line.number, t.column, format!("state `{}` declared twice", t.text));
                        }
                        decl.states.push(t.text.to_string());
                    }
                }
                "initial" => {
                    if args.len() != 1 {
                        return err(line.number, kw.column, "expected `initial STATE`");
                    }
                    initial_token = Some((line.number, args[0]));
                }
                _ => decl.body.push(line),
            }
        }
        match initial_token {
            None => return err(decl.end_line, 1, "missing `initial` declaration"),
            Some((number, t)) => {
                let id = decl.state(number, t)?;
                decl.initial = Some((id, number));
            }
        }
        Ok(decl)
    }

    fn state(&self, line: usize, t: Token<'_>) -> Result<StateId, FormatError> {
        match self.state_index.get(t.text) {
            Some(&id) => Ok(id),
            None => err(line, t.column, format!("unknown state `{}`", t.text)),
        }
    }

    fn symbol(&self, line: usize, column: usize, text: &str, output: bool) -> Result<Symbol, FormatError> {
        let (list, what) = if output {
            (&self.outputs, "output")
        } else {
            (&self.inputs, "input")
        };
        if text == TICK_TOKEN {
            return err(line, column, format!("the tick `@t` is not allowed as {what} here"));
        }
        match list.iter().find(|s| s.as_str() == text) {
            Some(s) => Ok(s.clone()),
            None => err(line, column, format!("undeclared {what} `{text}`")),
        }
    }

    fn initial(&self) -> StateId {
        self.initial.expect("checked in read").0
    }
}

/// Parses a timed machine and validates it.
pub fn parse_tfsm(text: &str) -> Result<TimedMachine, FormatError> {
    let m = parse_tfsm_unvalidated(text)?;
    let violations = validate_tfsm(&m);
    if violations.is_empty() {
        Ok(m)
    } else {
        Err(FormatError::Invalid(violations))
    }
}

/// Parses a timed machine, checking syntax and name resolution only.
pub fn parse_tfsm_unvalidated(text: &str) -> Result<TimedMachine, FormatError> {
    let lines = lines(text);
    let decl = Declarations::read(&lines, "tfsm")?;
    let mut timeouts: Vec<Option<(Timeout, usize)>> = vec![None; decl.states.len()];
    let mut transitions = Vec::new();
    for line in &decl.body {
        let kw = line.tokens[0];
        let args = &line.tokens[1..];
        match kw.text {
            "timeout" => {
                let shape_ok =
                    matches!(args.len(), 2) && args[1].text == "inf" || args.len() == 4 && args[2].text == "->";
                if !shape_ok {
                    return err(
                        line.number,
                        kw.column,
                        "expected `timeout STATE inf` or `timeout STATE N -> STATE`",
                    );
                }
                let state = decl.state(line.number, args[0])?;
                let timeout = if args.len() == 2 {
                    Timeout::Infinite
                } else {
                    let Ok(bound) = args[1].text.parse::<u32>() else {
                        return err(
                            line.number,
                            args[1].column,
                            format!("`{}` is not a timeout bound", args[1].text),
                        );
                    };
                    Timeout::After {
                        bound,
                        target: decl.state(line.number, args[3])?,
                    }
                };
                if let Some((_, prev)) = timeouts[state.index()].replace((timeout, line.number)) {
                    return err(
                        line.number,
                        kw.column,
                        format!("timeout of `{}` already given on line {prev}", args[0].text),
                    );
                }
            }
            "trans" => {
                let slash = args.iter().position(|t| t.text == "/");
                let Some(slash) = slash.filter(|&k| k >= 3 && args.len() == k + 4 && args[k + 2].text == "->") else {
                    return err(
                        line.number,
                        kw.column,
                        "expected `trans STATE INPUT GUARD / OUTPUT -> STATE`",
                    );
                };
                let source = decl.state(line.number, args[0])?;
                let input = decl.symbol(line.number, args[1].column, args[1].text, false)?;
                let guard_text: String = args[2..slash].iter().map(|t| t.text).collect();
                let guard = match guard_text.parse::<Guard>() {
                    Ok(g) => g,
                    Err(e) => return err(line.number, args[2].column, format!("bad guard `{guard_text}`: {e}")),
                };
                let output = decl.symbol(line.number, args[slash + 1].column, args[slash + 1].text, true)?;
                let target = decl.state(line.number, args[slash + 3])?;
                transitions.push(Transition {
                    source,
                    input,
                    guard,
                    output,
                    target,
                });
            }
            other => return err(line.number, kw.column, format!("unknown keyword `{other}`")),
        }
    }
    let initial = decl.initial();
    Ok(TimedMachine::from_parts(
        decl.name,
        decl.states,
        decl.inputs,
        decl.outputs,
        initial,
        transitions,
        timeouts
            .into_iter()
            .map(|t| t.map_or(Timeout::Infinite, |(t, _)| t))
            .collect(),
    ))
}

/// Parses an untimed machine. Nothing beyond determinism and declared names
/// is checked; in particular a tick produced by a user input is accepted.
pub fn parse_fsm(text: &str) -> Result<MealyMachine, FormatError> {
    let lines = lines(text);
    let decl = Declarations::read(&lines, "fsm")?;
    let mut rows: Vec<BTreeMap<Letter, Edge>> = vec![BTreeMap::new(); decl.states.len()];
    for line in &decl.body {
        let kw = line.tokens[0];
        if kw.text != "trans" {
            return err(line.number, kw.column, format!("unknown keyword `{}`", kw.text));
        }
        let args = &line.tokens[1..];
        let arrow = args.iter().position(|t| t.text == "->");
        let Some(arrow) = arrow.filter(|&k| k >= 2 && args.len() == k + 2) else {
            return err(line.number, kw.column, "expected `trans STATE INPUT/OUTPUT -> STATE`");
        };
        let source = decl.state(line.number, args[0])?;
        let label: String = args[1..arrow].iter().map(|t| t.text).collect();
        let column = args[1].column;
        let Some((i, o)) = label.split_once('/') else {
            return err(line.number, column, format!("expected INPUT/OUTPUT, found `{label}`"));
        };
        let letter = |text: &str, output: bool| -> Result<Letter, FormatError> {
            if text == TICK_TOKEN {
                Ok(Letter::Tick)
            } else {
                decl.symbol(line.number, column, text, output).map(Letter::Sym)
            }
        };
        let input = letter(i, false)?;
        let output = letter(o, true)?;
        let target = decl.state(line.number, args[arrow + 1])?;
        if rows[source.index()].contains_key(&input) {
            return err(
                line.number,
                column,
                format!("second transition from `{}` on `{input}`", args[0].text),
            );
        }
        rows[source.index()].insert(input, (output, target));
    }
    let initial = decl.initial();
    Ok(MealyMachine::from_parts(
        decl.name,
        decl.states,
        decl.inputs,
        decl.outputs,
        initial,
        rows,
    ))
}

/// Parses either format, dispatching on the first keyword. Timed machines
/// are validated.
pub fn parse_document(text: &str) -> Result<MachineDocument, FormatError> {
    let lines = lines(text);
    match lines.first().map(|l| l.tokens[0].text) {
        Some("tfsm") => parse_tfsm(text).map(MachineDocument::Tfsm),
        Some("fsm") => parse_fsm(text).map(MachineDocument::Fsm),
        Some(other) => {
            let l = &lines[0];
            err(
                l.number,
                l.tokens[0].column,
                format!("expected `tfsm` or `fsm`, found `{other}`"),
            )
        }
        None => err(1, 1, "empty document"),
    }
}

fn header(
    out: &mut String,
    keyword: &str,
    name: &str,
    inputs: &[Symbol],
    outputs: &[Symbol],
    states: &[String],
    initial: &str,
) {
    let join = |it: &mut dyn Iterator<Item = &str>| it.fold(String::new(), |acc, s| acc + " " + s);
    let _ = writeln!(out, "{keyword} {name}");
    let _ = writeln!(out, "inputs{}", join(&mut inputs.iter().map(Symbol::as_str)));
    let _ = writeln!(out, "outputs{}", join(&mut outputs.iter().map(Symbol::as_str)));
    let _ = writeln!(out, "states{}", join(&mut states.iter().map(String::as_str)));
    let _ = writeln!(out, "initial {initial}");
}

/// Canonical text of a timed machine: every state gets a timeout line and
/// transitions are listed by source, input and guard.
pub fn serialize_tfsm(m: &TimedMachine) -> String {
    let mut out = String::new();
    header(
        &mut out,
        "tfsm",
        m.name(),
        m.inputs(),
        m.outputs(),
        m.states(),
        m.state_name(m.initial()),
    );
    for s in m.state_ids() {
        let name = m.state_name(s);
        let _ = match m.timeout(s) {
            Timeout::Infinite => writeln!(out, "timeout {name} inf"),
            Timeout::After { bound, target } => {
                writeln!(out, "timeout {name} {bound} -> {}", m.state_name(target))
            }
        };
    }
    for t in m.transitions() {
        let _ = writeln!(out, "trans {}", m.describe(t));
    }
    out
}

/// Canonical text of an untimed machine: rows by state, the tick first.
pub fn serialize_fsm(m: &MealyMachine) -> String {
    let mut out = String::new();
    header(
        &mut out,
        "fsm",
        m.name(),
        m.inputs(),
        m.outputs(),
        m.states(),
        m.state_name(m.initial()),
    );
    for (s, i, o, t) in m.transitions() {
        let _ = writeln!(out, "trans {} {i}/{o} -> {}", m.state_name(s), m.state_name(t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn basic_fixture_contents() {
        let m = fixtures::basic();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.transitions().len(), 3);
        assert_eq!(
            m.timeout(StateId(0)),
            Timeout::After {
                bound: 1,
                target: StateId(1)
            }
        );
        assert_eq!(m.timeout(StateId(1)), Timeout::Infinite);
    }

    #[test]
    fn round_trips() {
        for text in fixtures::ALL_TFSM {
            let m = parse_tfsm(text).unwrap();
            let s = serialize_tfsm(&m);
            assert_eq!(parse_tfsm(&s).unwrap(), m);
            assert_eq!(serialize_tfsm(&parse_tfsm(&s).unwrap()), s);
        }
        for text in fixtures::ALL_FSM {
            let m = parse_fsm(text).unwrap();
            let s = serialize_fsm(&m);
            assert_eq!(parse_fsm(&s).unwrap(), m);
        }
    }

    #[test]
    fn serialization_is_canonical() {
        let s = serialize_tfsm(&fixtures::basic());
        assert_eq!(
            s,
            "tfsm basic\ninputs i\noutputs o1 o2\nstates s0 s1\ninitial s0\n\
             timeout s0 1 -> s1\ntimeout s1 inf\n\
             trans s0 i [0,1) / o1 -> s0\ntrans s1 i [0,1] / o2 -> s1\ntrans s1 i (1,inf) / o1 -> s0\n"
        );
        // transition order in the file does not matter
        let shuffled = "tfsm basic\ninputs i\noutputs o1 o2\nstates s0 s1\ninitial s0\ntimeout s0 1 -> s1\n\
             trans s1 i (1,inf) / o1 -> s0\ntrans s0 i [0,1) / o1 -> s0\ntrans s1 i [0, 1] / o2 -> s1\n";
        assert_eq!(serialize_tfsm(&parse_tfsm(shuffled).unwrap()), s);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_tfsm("tfsm m\ninputs i\noutputs o\nstates a\ninitial a\ntrans a i [2,1] / o -> a\n").unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::Syntax {
                    line: 6,
                    column: 11,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_tfsm("tfsm m\ninputs i\noutputs o\nstates a b a\ninitial a\n").unwrap_err();
        assert!(
            matches!(&e, FormatError::Syntax { line: 4, column: 12, message } if message.contains("`a`")),
            "{e}"
        );
        let e = parse_tfsm("tfsm m\ninputs i\noutputs o\nstates a\n").unwrap_err();
        assert!(e.to_string().contains("initial"));
        let e = parse_fsm("fsm m\ninputs @t\noutputs o\nstates a\ninitial a\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 2, column: 8, .. }), "{e}");
        let e = parse_tfsm("tfsm m\ninputs i\noutputs o\nstates a\ninitial a\nfoo\n").unwrap_err();
        assert!(e.to_string().contains("unknown keyword"));
    }

    #[test]
    fn invalid_machines_are_reported() {
        let text = "tfsm m\ninputs i\noutputs o\nstates a\ninitial a\ntimeout a 1 -> a\ntrans a i [0,1] / o -> a\n";
        assert!(matches!(parse_tfsm(text), Err(FormatError::Invalid(_))));
        assert!(parse_tfsm_unvalidated(text).is_ok());
    }

    #[test]
    fn fsm_edge_cases() {
        let empty = parse_fsm("fsm m\ninputs i\noutputs o\nstates a\ninitial a\n").unwrap();
        assert_eq!(empty.num_transitions(), 0);
        assert!(!crate::refinement::is_time_progressive(&empty));
        let odd = parse_fsm("fsm m\ninputs i\noutputs o\nstates q0 q1\ninitial q0\ntrans q0 i/@t -> q1\n").unwrap();
        assert_eq!(odd.num_transitions(), 1);
        let dup = parse_fsm("fsm m\ninputs i\noutputs o\nstates a\ninitial a\ntrans a i/o -> a\ntrans a i/o -> a\n");
        assert!(matches!(dup, Err(FormatError::Syntax { line: 7, .. })));
    }

    #[test]
    fn documents_dispatch_on_keyword() {
        assert_eq!(parse_document(fixtures::BASIC).unwrap().kind(), DocumentKind::Tfsm);
        let d = parse_document(fixtures::BASIC_ABSTRACT).unwrap();
        assert_eq!(d.kind(), DocumentKind::Fsm);
        assert_eq!(d.name(), "basic_abstract");
        assert!(parse_document("machine x\n").is_err());
        assert!(parse_document("# nothing\n").is_err());
    }
}
