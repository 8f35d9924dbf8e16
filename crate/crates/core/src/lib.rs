//! Deterministic timed FSMs with a single clock, timed guards and timeouts.
//!
//! A [`TimedMachine`] is reduced to an untimed [`MealyMachine`] over an
//! alphabet extended with a tick letter ([`abstract_fsm`]); untimed results
//! are turned back into timed machines with [`refine`]. Equivalence and
//! intersection of timed machines go through this round trip
//! ([`tfsm_equivalent`], [`tfsm_intersect`]).
//!
//! ```
//! use tfsm::{fixtures, run, tfsm_equivalent};
//!
//! let m = fixtures::basic();
//! let out = run(&m, &"i@1.5".parse().unwrap());
//! assert_eq!(out.output().unwrap().to_string(), "(o2, 3/2)");
//! assert!(tfsm_equivalent(&m, &fixtures::basic_refined()).unwrap().is_equivalent());
//! ```

pub mod abstraction;
pub mod algebra;
pub mod export;
pub mod fixtures;
pub mod format;
pub mod guard;
pub mod machine;
pub mod mealy;
pub mod pipeline;
pub mod rational;
pub mod refinement;
pub mod semantics;
pub mod symbol;
pub mod validate;
pub mod word;

pub use abstraction::{
    abstract_fsm, canonical_bisimulation, check_bisimulation, interval_set, max_constant, BisimCondition, BisimFailure,
    BisimRelation, ClockInterval, RelatedPair,
};
pub use algebra::{
    equivalent, isomorphic, minimize, product, reachable, AlphabetMismatch, Counterexample, Equivalence, MismatchKind,
};
pub use export::{export_dot_fsm, export_dot_tfsm, export_timed_automaton};
pub use format::{
    parse_document, parse_fsm, parse_tfsm, serialize_fsm, serialize_tfsm, DocumentKind, FormatError, MachineDocument,
};
pub use guard::Guard;
pub use machine::{ModelError, StateId, TimedMachine, Timeout, Transition};
pub use mealy::MealyMachine;
pub use pipeline::{
    decode_tick_word, tfsm_equivalent, tfsm_intersect, PipelineError, TimedCounterexample, TimedEquivalence,
};
pub use rational::Rational;
pub use refinement::{is_time_progressive, refine, refine_with, refinement_relation, RefineError, RefineOptions};
pub use semantics::{advance, mealy_run, run, step, tick_encode_delay, tick_encode_word, RunResult};
pub use symbol::{Letter, Symbol};
pub use validate::{validate_tfsm, Violation};
pub use word::{TimedState, TimedWord};
