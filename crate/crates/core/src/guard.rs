//! Timed guards: integer-bounded clock intervals with open or closed ends.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::rational::Rational;

/// Interval of clock values during which a transition may fire.
///
/// Both endpoints are integers; the upper one may be infinite, in which case
/// it is always open.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Guard {
    lower: u32,
    upper: Option<u32>,
    lower_closed: bool,
    upper_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuardError {
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    Inverted { lower: u32, upper: u32 },
    #[error("degenerate interval at {0}: a point guard must be written [{0},{0}]")]
    EmptyPoint(u32),
    #[error("an infinite upper bound must be open")]
    ClosedInfinity,
    #[error("malformed guard `{0}`")]
    Syntax(String),
}

impl Guard {
    pub fn new(lower: u32, lower_closed: bool, upper: Option<u32>, upper_closed: bool) -> Result<Guard, GuardError> {
        match upper {
            None if upper_closed => return Err(GuardError::ClosedInfinity),
            Some(u) if lower > u => return Err(GuardError::Inverted { lower, upper: u }),
            Some(u) if lower == u && !(lower_closed && upper_closed) => return Err(GuardError::EmptyPoint(lower)),
            _ => {}
        }
        Ok(Guard {
            lower,
            upper,
            lower_closed,
            upper_closed,
        })
    }

    /// `[n,n]`
    pub fn point(n: u32) -> Guard {
        Guard {
            lower: n,
            upper: Some(n),
            lower_closed: true,
            upper_closed: true,
        }
    }

    /// `(n,n+1)`
    pub fn unit(n: u32) -> Guard {
        Guard {
            lower: n,
            upper: Some(n + 1),
            lower_closed: false,
            upper_closed: false,
        }
    }

    /// `[n,inf)`
    pub fn at_least(n: u32) -> Guard {
        Guard {
            lower: n,
            upper: None,
            lower_closed: true,
            upper_closed: false,
        }
    }

    /// `(n,inf)`
    pub fn greater_than(n: u32) -> Guard {
        Guard {
            lower: n,
            upper: None,
            lower_closed: false,
            upper_closed: false,
        }
    }

    pub fn lower(&self) -> u32 {
        self.lower
    }

    /// `None` stands for infinity.
    pub fn upper(&self) -> Option<u32> {
        self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_point(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn contains(&self, x: Rational) -> bool {
        let lower = Rational::from(self.lower);
        let above = if self.lower_closed { x >= lower } else { x > lower };
        let below = match self.upper {
            None => true,
            Some(u) if self.upper_closed => x <= Rational::from(u),
            Some(u) => x < Rational::from(u),
        };
        above && below
    }

    /// The guard as an inclusive range of half-units.
    ///
    /// Half-unit `2n` stands for the clock value `n` and `2n+1` for the open
    /// interval `(n,n+1)`. Because endpoints are integers, a guard contains
    /// exactly the clock values whose half-unit lies in this range.
    pub fn half_units(&self) -> (u64, Option<u64>) {
        let lo = 2 * u64::from(self.lower) + u64::from(!self.lower_closed);
        let hi = self.upper.map(|u| 2 * u64::from(u) - u64::from(!self.upper_closed));
        (lo, hi)
    }

    /// Inverse of [`Guard::half_units`].
    ///
    /// Panics if the range is empty.
    pub fn from_half_units(lo: u64, hi: Option<u64>) -> Guard {
        if let Some(hi) = hi {
            assert!(lo <= hi, "empty half-unit range {lo}..={hi}");
        }
        let lower = u32::try_from(lo / 2).expect("guard bound overflow");
        let upper = hi.map(|h| u32::try_from(h.div_ceil(2)).expect("guard bound overflow"));
        Guard {
            lower,
            upper,
            lower_closed: lo.is_multiple_of(2),
            upper_closed: hi.is_some_and(|h| h % 2 == 0),
        }
    }

    pub fn is_disjoint(&self, other: &Guard) -> bool {
        self.common_half_unit(other).is_none()
    }

    /// Smallest half-unit shared by both guards, if any.
    pub(crate) fn common_half_unit(&self, other: &Guard) -> Option<u64> {
        let (lo1, hi1) = self.half_units();
        let (lo2, hi2) = other.half_units();
        let lo = lo1.max(lo2);
        let hi = match (hi1, hi2) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match hi {
            Some(hi) if lo > hi => None,
            _ => Some(lo),
        }
    }

    /// Union of two guards when it is again a single interval.
    pub fn union(&self, other: &Guard) -> Option<Guard> {
        let (lo1, hi1) = self.half_units();
        let (lo2, hi2) = other.half_units();
        let (first_hi, second_lo) = if lo1 <= lo2 { (hi1, lo2) } else { (hi2, lo1) };
        if let Some(h) = first_hi {
            if second_lo > h + 1 {
                return None;
            }
        }
        let hi = match (hi1, hi2) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Some(Guard::from_half_units(lo1.min(lo2), hi))
    }

    /// True when every clock value of the guard is strictly below `bound`.
    pub fn below(&self, bound: u32) -> bool {
        match self.half_units().1 {
            None => false,
            Some(hi) => hi < 2 * u64::from(bound),
        }
    }
}

/// Membership of a clock value in a guard.
pub fn guard_contains(g: &Guard, x: Rational) -> bool {
    g.contains(x)
}

/// True iff no clock value satisfies both guards.
pub fn guards_disjoint(g1: &Guard, g2: &Guard) -> bool {
    g1.is_disjoint(g2)
}

impl PartialOrd for Guard {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by half-unit range: lower end first, then upper end.
impl Ord for Guard {
    fn cmp(&self, other: &Self) -> Ordering {
        let (lo1, hi1) = self.half_units();
        let (lo2, hi2) = other.half_units();
        lo1.cmp(&lo2)
            .then_with(|| hi1.unwrap_or(u64::MAX).cmp(&hi2.unwrap_or(u64::MAX)))
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        match self.upper {
            None => write!(f, "{open}{},inf)", self.lower),
            Some(u) => {
                let close = if self.upper_closed { ']' } else { ')' };
                write!(f, "{open}{},{u}{close}", self.lower)
            }
        }
    }
}

impl fmt::Debug for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Guard {
    type Err = GuardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || GuardError::Syntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = compact.chars();
        let lower_closed = match chars.next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(syntax()),
        };
        let upper_closed = match chars.next_back() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(syntax()),
        };
        let body = chars.as_str();
        let (lo, hi) = body.split_once(',').ok_or_else(syntax)?;
        let lower: u32 = lo.parse().map_err(|_| syntax())?;
        let upper = match hi {
            "inf" | "∞" => None,
            _ => Some(hi.parse::<u32>().map_err(|_| syntax())?),
        };
        Guard::new(lower, lower_closed, upper, upper_closed)
    }
}
