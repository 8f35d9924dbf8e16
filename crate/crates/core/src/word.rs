//! Timed words and timed states.

use std::fmt;
use std::str::FromStr;

use crate::machine::StateId;
use crate::rational::{ParseRationalError, Rational};
use crate::symbol::Symbol;

/// A finite sequence of symbols stamped with non-decreasing, non-negative
/// absolute times.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TimedWord(Vec<(Symbol, Rational)>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimedWordError {
    #[error("timestamp {time} at position {index} is negative")]
    Negative { index: usize, time: Rational },
    #[error("timestamp {time} at position {index} is earlier than its predecessor")]
    Decreasing { index: usize, time: Rational },
    #[error("malformed timed symbol `{0}` (expected SYMBOL@TIME)")]
    Syntax(String),
    #[error(transparent)]
    Time(#[from] ParseRationalError),
}

impl TimedWord {
    pub fn new(items: Vec<(Symbol, Rational)>) -> Result<TimedWord, TimedWordError> {
        let mut last = Rational::ZERO;
        for (index, (_, time)) in items.iter().enumerate() {
            if time.is_negative() {
                return Err(TimedWordError::Negative { index, time: *time });
            }
            if *time < last {
                return Err(TimedWordError::Decreasing { index, time: *time });
            }
            last = *time;
        }
        Ok(TimedWord(items))
    }

    /// Builds a word from relative delays instead of absolute timestamps.
    ///
    /// Panics on a negative delay.
    pub fn from_delays(items: impl IntoIterator<Item = (Symbol, Rational)>) -> TimedWord {
        let mut now = Rational::ZERO;
        let items = items
            .into_iter()
            .map(|(s, d)| {
                assert!(!d.is_negative(), "negative delay {d}");
                now += d;
                (s, now)
            })
            .collect();
        TimedWord(items)
    }

    pub fn empty() -> TimedWord {
        TimedWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (Symbol, Rational)> {
        self.0.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter().map(|(s, _)| s)
    }

    pub fn timestamps(&self) -> impl Iterator<Item = Rational> + '_ {
        self.0.iter().map(|(_, t)| *t)
    }

    /// Delays between consecutive symbols, the first measured from time 0.
    pub fn delays(&self) -> impl Iterator<Item = Rational> + '_ {
        let mut prev = Rational::ZERO;
        self.0.iter().map(move |(_, t)| {
            let d = *t - prev;
            prev = *t;
            d
        })
    }

    pub fn as_slice(&self) -> &[(Symbol, Rational)] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a TimedWord {
    type Item = &'a (Symbol, Rational);
    type IntoIter = std::slice::Iter<'a, (Symbol, Rational)>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Renders as `(o2, 3/2) (o1, 7/2)`; the empty word renders as nothing.
impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, t)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({s}, {t})")?;
        }
        Ok(())
    }
}

/// Parses whitespace-separated `SYMBOL@TIME` items, e.g. `i@0.5 i@3/2`.
impl FromStr for TimedWord {
    type Err = TimedWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s
            .split_whitespace()
            .map(|item| {
                let (sym, time) = item
                    .rsplit_once('@')
                    .filter(|(sym, _)| !sym.is_empty())
                    .ok_or_else(|| TimedWordError::Syntax(item.to_string()))?;
                Ok((Symbol::new(sym), time.parse::<Rational>()?))
            })
            .collect::<Result<Vec<_>, TimedWordError>>()?;
        TimedWord::new(items)
    }
}

/// A discrete state together with the current clock value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TimedState {
    pub state: StateId,
    pub clock: Rational,
}

impl TimedState {
    pub fn new(state: StateId, clock: Rational) -> TimedState {
        TimedState { state, clock }
    }

    pub fn at_zero(state: StateId) -> TimedState {
        TimedState {
            state,
            clock: Rational::ZERO,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: TimedWord = "i@0.5 i@3/2 j@3/2".parse().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "(i, 1/2) (i, 3/2) (j, 3/2)");
        let delays: Vec<_> = w.delays().collect();
        assert_eq!(
            delays,
            vec![Rational::new(1, 2), Rational::from_integer(1), Rational::ZERO]
        );
    }

    #[test]
    fn rejects_decreasing_and_negative() {
        assert!(matches!(
            "i@2 i@1".parse::<TimedWord>(),
            Err(TimedWordError::Decreasing { index: 1, .. })
        ));
        assert!(matches!(
            "i@-1".parse::<TimedWord>(),
            Err(TimedWordError::Negative { index: 0, .. })
        ));
        assert!(matches!("i".parse::<TimedWord>(), Err(TimedWordError::Syntax(_))));
        assert!(matches!("i@x".parse::<TimedWord>(), Err(TimedWordError::Time(_))));
    }

    #[test]
    fn from_delays_accumulates() {
        let w = TimedWord::from_delays([
            (Symbol::new("a"), Rational::new(1, 2)),
            (Symbol::new("b"), Rational::from_integer(1)),
        ]);
        assert_eq!(w.to_string(), "(a, 1/2) (b, 3/2)");
    }
}
