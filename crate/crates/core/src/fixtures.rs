//! Small reference machines shipped with the crate, used by tests, examples
//! and the CLI docs.

use crate::format::{parse_fsm, parse_tfsm};
use crate::machine::TimedMachine;
use crate::mealy::MealyMachine;

/// Two states; `s0` times out into `s1` after one unit.
pub const BASIC: &str = include_str!("../fixtures/basic.tfsm");
/// Tick abstraction of [`BASIC`].
pub const BASIC_ABSTRACT: &str = include_str!("../fixtures/basic_abstract.fsm");
/// Refinement of [`BASIC_ABSTRACT`]; equivalent to [`BASIC`].
pub const BASIC_REFINED: &str = include_str!("../fixtures/basic_refined.tfsm");
/// Tick abstraction of [`BASIC_REFINED`] (12 reachable states).
pub const BASIC_REFINED_ABSTRACT: &str = include_str!("../fixtures/basic_refined_abstract.fsm");
/// Timed-automaton export of [`BASIC`].
pub const BASIC_TA: &str = include_str!("../fixtures/basic.ta");
pub const M1: &str = include_str!("../fixtures/m1.tfsm");
pub const M2: &str = include_str!("../fixtures/m2.tfsm");
/// Product of the abstractions of [`M1`] and [`M2`], renumbered.
pub const M1_M2_PRODUCT: &str = include_str!("../fixtures/m1_m2_product.fsm");
/// Intersection of [`M1`] and [`M2`].
pub const M1_M2_INTERSECTION: &str = include_str!("../fixtures/m1_m2_intersection.tfsm");

pub const ALL_TFSM: [&str; 5] = [BASIC, BASIC_REFINED, M1, M2, M1_M2_INTERSECTION];
pub const ALL_FSM: [&str; 3] = [BASIC_ABSTRACT, BASIC_REFINED_ABSTRACT, M1_M2_PRODUCT];

fn tfsm(text: &str) -> TimedMachine {
    parse_tfsm(text).expect("bundled fixture parses")
}

fn fsm(text: &str) -> MealyMachine {
    parse_fsm(text).expect("bundled fixture parses")
}

pub fn basic() -> TimedMachine {
    tfsm(BASIC)
}

pub fn basic_abstract() -> MealyMachine {
    fsm(BASIC_ABSTRACT)
}

pub fn basic_refined() -> TimedMachine {
    tfsm(BASIC_REFINED)
}

pub fn basic_refined_abstract() -> MealyMachine {
    fsm(BASIC_REFINED_ABSTRACT)
}

pub fn m1() -> TimedMachine {
    tfsm(M1)
}

pub fn m2() -> TimedMachine {
    tfsm(M2)
}

pub fn m1_m2_product() -> MealyMachine {
    fsm(M1_M2_PRODUCT)
}

pub fn m1_m2_intersection() -> TimedMachine {
    tfsm(M1_M2_INTERSECTION)
}
