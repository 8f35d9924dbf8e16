//! Acceptance gate: each criterion prints one PASS/FAIL line with its
//! runtime, and the process fails if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use tfsm::abstraction::{canonical_bisimulation, check_bisimulation, BisimRelation, ClockInterval};
use tfsm::{
    abstract_fsm, export_timed_automaton, fixtures, isomorphic, mealy_run, minimize, parse_fsm, parse_tfsm, product,
    refine, refinement_relation, run, serialize_fsm, serialize_tfsm, tfsm_equivalent, tfsm_intersect, tick_encode_word,
    TimedMachine,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn abstraction_matches_figure() -> Outcome {
    let a = abstract_fsm(&fixtures::basic(), false);
    let ticks = a.transitions().filter(|t| t.1.is_tick()).count();
    let io = a.num_transitions() - ticks;
    ensure(isomorphic(&a, &fixtures::basic_abstract()), || {
        "not isomorphic to the reference FSM".into()
    })?;
    ensure(a.num_states() == 6 && ticks == 6 && io == 6, || {
        format!("{} states, {ticks} tick and {io} i/o transitions", a.num_states())
    })?;
    Ok(format!(
        "{} states, {ticks} tick + {io} i/o transitions",
        a.num_states()
    ))
}

fn refinement_matches_figure() -> Outcome {
    let r = refine(&fixtures::basic_abstract()).map_err(|e| e.to_string())?;
    let expected_text = fixtures::BASIC_REFINED
        .replace("q0", "s0,[0,0]")
        .replace("q2", "s1,[0,0]")
        .replace("q5", "s1,(1,inf)");
    let expected = parse_tfsm(&expected_text).map_err(|e| e.to_string())?;
    let got = r.with_name(expected.name());
    ensure(got == expected, || format!("refined machine differs:\n{got}"))?;
    let timeouts = got.timeouts().iter().filter(|t| t.bound().is_some()).count();
    Ok(format!(
        "{} states, {} merged transitions, {timeouts} timeouts",
        got.num_states(),
        got.transitions().len()
    ))
}

fn minimization_round_trip() -> Outcome {
    let a = abstract_fsm(&fixtures::basic_refined(), false);
    ensure(a.num_states() == 12, || {
        format!("abstraction has {} states", a.num_states())
    })?;
    let min = minimize(&a);
    ensure(isomorphic(&min, &fixtures::basic_abstract()), || {
        format!("minimized machine:\n{min}")
    })?;
    Ok(format!("12 -> {} states, isomorphic", min.num_states()))
}

fn intersection_matches_figures() -> Outcome {
    let (m1, m2) = (fixtures::m1(), fixtures::m2());
    let p = product(&abstract_fsm(&m1, false), &abstract_fsm(&m2, false)).map_err(|e| e.to_string())?;
    ensure(isomorphic(&p, &fixtures::m1_m2_product()), || {
        format!("product differs:\n{}", p.renumbered())
    })?;
    let t = tfsm_intersect(&m1, &m2).map_err(|e| e.to_string())?;
    ensure(t.is_isomorphic(&fixtures::m1_m2_intersection()), || {
        format!("intersection differs:\n{t}")
    })?;
    Ok(format!(
        "product {} states, intersection {} states",
        p.num_states(),
        t.num_states()
    ))
}

fn equivalence_decisions() -> Outcome {
    let same = tfsm_equivalent(&fixtures::basic(), &fixtures::basic_refined()).map_err(|e| e.to_string())?;
    ensure(same.is_equivalent(), || {
        "basic and its refinement reported different".into()
    })?;
    let diff = tfsm_equivalent(&fixtures::basic(), &fixtures::m2()).map_err(|e| e.to_string())?;
    let c = diff.counterexample().ok_or("basic and m2 reported equivalent")?;
    let left = run(&fixtures::basic(), &c.word);
    let right = run(&fixtures::m2(), &c.word);
    ensure(left.output() != right.output(), || {
        "counterexample not confirmed".into()
    })?;
    Ok(format!("equivalent; distinguished by {}", c.word))
}

fn abstraction_preserves_runs() -> Outcome {
    let mut rng = rng(6);
    let (machines, words) = (500, 20);
    for k in 0..machines {
        let m = random_tfsm(&mut rng, TfsmShape::default());
        let a = abstract_fsm(&m, false);
        for _ in 0..words {
            let w = random_word(&mut rng, m.inputs(), 6, 6);
            let timed = encoded_outcome(&w, &run(&m, &w));
            let untimed = mealy_run(&a, &tick_encode_word(&w)).map_err(|u| u.0);
            ensure(timed == untimed, || format!("machine {k}, word {w}:\n{m}"))?;
        }
    }
    Ok(format!("{machines} machines x {words} words"))
}

fn refinement_refines() -> Outcome {
    let mut rng = rng(7);
    let (machines, words) = (200, 20);
    for k in 0..machines {
        let u = random_progressive_fsm(&mut rng, 12);
        let t = refine(&u).map_err(|e| e.to_string())?;
        for _ in 0..words {
            let w = random_word(&mut rng, t.inputs(), 6, 8);
            let timed = encoded_outcome(&w, &run(&t, &w));
            let untimed = mealy_run(&u, &tick_encode_word(&w)).map_err(|e| e.0);
            ensure(timed == untimed, || format!("machine {k}, word {w}:\n{u}"))?;
        }
        check_bisimulation(&t, &u, &refinement_relation(&u, &t)).map_err(|e| format!("machine {k}: {e}"))?;
    }
    Ok(format!("{machines} machines x {words} words, relation checked"))
}

fn random_pair(rng: &mut TestRng, k: usize, shape: TfsmShape) -> (TimedMachine, TimedMachine) {
    let a = random_tfsm(rng, shape);
    let b = match k % 3 {
        0 => mutate(rng, &a),
        1 => refine(&abstract_fsm(&a, false)).expect("abstractions are time-progressive"),
        _ => loop {
            let b = random_tfsm(rng, shape);
            if b.inputs() == a.inputs() {
                break b;
            }
        },
    };
    (a, b)
}

fn intersection_is_conjunction() -> Outcome {
    let mut rng = rng(8);
    let (pairs, words) = (100, 20);
    let mut common = 0;
    for k in 0..pairs {
        let (a, b) = random_pair(&mut rng, k, TfsmShape::default());
        let t = tfsm_intersect(&a, &b).map_err(|e| e.to_string())?;
        for _ in 0..words {
            let w = random_word(&mut rng, a.inputs(), 6, 6);
            let expected = match (behavior(&a, &w), behavior(&b, &w)) {
                (Some(x), Some(y)) if x == y => Some(x),
                _ => None,
            };
            common += usize::from(expected.as_ref().is_some_and(|o| !o.is_empty()));
            ensure(behavior(&t, &w) == expected, || {
                format!("pair {k}, word {w}:\n{a}\n{b}")
            })?;
        }
    }
    Ok(format!(
        "{pairs} pairs x {words} words ({common} non-trivial common answers)"
    ))
}

fn oracle_agreement() -> Outcome {
    let mut rng = rng(9);
    // Words of three symbols only reach differences this shallow; larger
    // machines can need longer witnesses than the enumeration covers.
    let shape = TfsmShape {
        max_states: 2,
        max_inputs: 2,
        max_constant: 2,
        density: 0.7,
    };
    let pairs = 150;
    let mut different = 0;
    for k in 0..pairs {
        let (a, b) = random_pair(&mut rng, k, shape);
        let n = tfsm::max_constant(&a).max(tfsm::max_constant(&b));
        let oracle = brute_force_difference(&a, &b, &delay_grid(n), 3);
        let verdict = tfsm_equivalent(&a, &b).map_err(|e| e.to_string())?;
        ensure(verdict.is_equivalent() == oracle.is_none(), || {
            format!(
                "pair {k}: decision {}, oracle witness {:?}\n{a}\n{b}",
                verdict.is_equivalent(),
                oracle.as_ref().map(|w| w.to_string())
            )
        })?;
        different += usize::from(oracle.is_some());
    }
    Ok(format!("{pairs} pairs, {different} non-equivalent, zero disagreements"))
}

fn perturbations(rel: &BisimRelation, states: usize) -> Vec<BisimRelation> {
    let mut out = Vec::new();
    for k in 0..rel.pairs.len() {
        let mut removed = rel.clone();
        removed.pairs.remove(k);
        out.push(removed);

        if states > 1 {
            let mut redirected = rel.clone();
            let p = &mut redirected.pairs[k];
            p.untimed = tfsm::StateId((p.untimed.index() + 1) % states);
            out.push(redirected);
        }

        let mut shifted = rel.clone();
        let p = &mut shifted.pairs[k];
        p.interval = match p.interval {
            ClockInterval::Tail(n) => ClockInterval::Point(n),
            other => other.next(),
        };
        out.push(shifted);
    }
    out
}

fn bisimulation_checker() -> Outcome {
    let mut rng = rng(6);
    let mut rejected = 0;
    for k in 0..500 {
        let m = random_tfsm(&mut rng, TfsmShape::default());
        let a = abstract_fsm(&m, false);
        let rel = canonical_bisimulation(&m, &a);
        check_bisimulation(&m, &a, &rel).map_err(|e| format!("machine {k}: canonical relation rejected: {e}"))?;
        for p in perturbations(&rel, a.num_states()) {
            ensure(check_bisimulation(&m, &a, &p).is_err(), || {
                format!("machine {k}: perturbation accepted\n{m}")
            })?;
            rejected += 1;
        }
    }
    Ok(format!(
        "500 canonical relations accepted, {rejected} perturbations rejected"
    ))
}

fn format_round_trip() -> Outcome {
    for text in fixtures::ALL_TFSM {
        let m = parse_tfsm(text).map_err(|e| e.to_string())?;
        let s = serialize_tfsm(&m);
        ensure(parse_tfsm(&s).as_ref() == Ok(&m), || {
            format!("round trip changed {}", m.name())
        })?;
        ensure(serialize_tfsm(&parse_tfsm(&s).unwrap()) == s, || {
            "output not canonical".into()
        })?;
    }
    for text in fixtures::ALL_FSM {
        let m = parse_fsm(text).map_err(|e| e.to_string())?;
        let s = serialize_fsm(&m);
        ensure(parse_fsm(&s).as_ref() == Ok(&m), || {
            format!("round trip changed {}", m.name())
        })?;
    }
    let mut rng = rng(11);
    for k in 0..500 {
        let m = random_tfsm(&mut rng, TfsmShape::default());
        let s = serialize_tfsm(&m);
        let back = parse_tfsm(&s).map_err(|e| format!("machine {k}: {e}\n{s}"))?;
        ensure(back == m, || format!("machine {k} changed"))?;
        ensure(serialize_tfsm(&back) == s, || format!("machine {k} not byte-identical"))?;
        let u = random_progressive_fsm(&mut rng, 12);
        let s = serialize_fsm(&u);
        let back = parse_fsm(&s).map_err(|e| format!("fsm {k}: {e}"))?;
        ensure(back == u && serialize_fsm(&back) == s, || format!("fsm {k} changed"))?;
    }
    Ok("8 fixtures and 500 random machines of each kind".into())
}

fn timed_automaton_export() -> Outcome {
    let ta = export_timed_automaton(&fixtures::basic());
    ensure(ta == fixtures::BASIC_TA, || format!("export differs:\n{ta}"))?;
    Ok(format!("{} lines match the golden file", ta.lines().count()))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "abstraction matches reference FSM",
            limit: secs(1),
            check: abstraction_matches_figure,
        },
        Criterion {
            id: 2,
            name: "refinement matches reference TFSM",
            limit: secs(1),
            check: refinement_matches_figure,
        },
        Criterion {
            id: 3,
            name: "minimized abstraction round trip",
            limit: secs(1),
            check: minimization_round_trip,
        },
        Criterion {
            id: 4,
            name: "product and intersection match references",
            limit: secs(1),
            check: intersection_matches_figures,
        },
        Criterion {
            id: 5,
            name: "equivalence decisions",
            limit: secs(1),
            check: equivalence_decisions,
        },
        Criterion {
            id: 6,
            name: "abstraction preserves runs",
            limit: secs(60),
            check: abstraction_preserves_runs,
        },
        Criterion {
            id: 7,
            name: "refinement refines its input",
            limit: secs(60),
            check: refinement_refines,
        },
        Criterion {
            id: 8,
            name: "intersection is the conjunction of runs",
            limit: secs(60),
            check: intersection_is_conjunction,
        },
        Criterion {
            id: 9,
            name: "equivalence agrees with brute force",
            limit: secs(120),
            check: oracle_agreement,
        },
        Criterion {
            id: 10,
            name: "bisimulation checker",
            limit: Duration::MAX,
            check: bisimulation_checker,
        },
        Criterion {
            id: 11,
            name: "format round trip",
            limit: secs(10),
            check: format_round_trip,
        },
        Criterion {
            id: 12,
            name: "timed automaton export",
            limit: Duration::MAX,
            check: timed_automaton_export,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.limit => Err(format!("{detail}; took {took:.2?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {:>2}  {:<44} {:>9.2?}  {detail}", c.id, c.name, took),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {:>2}  {:<44} {:>9.2?}  {why}", c.id, c.name, took);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
