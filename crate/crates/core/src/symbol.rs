use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// Spelling of the tick letter in files and diagnostics.
pub const TICK_TOKEN: &str = "@t";

/// An input or output symbol of a machine.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A letter of an untimed machine: a user symbol or the reserved tick that
/// encodes the passage of time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Tick,
    Sym(Symbol),
}

impl Letter {
    pub fn sym(name: &str) -> Letter {
        Letter::Sym(Symbol::new(name))
    }

    pub fn is_tick(&self) -> bool {
        matches!(self, Letter::Tick)
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Letter::Tick => None,
            Letter::Sym(s) => Some(s),
        }
    }
}

impl From<Symbol> for Letter {
    fn from(s: Symbol) -> Self {
        Letter::Sym(s)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Tick => f.write_str(TICK_TOKEN),
            Letter::Sym(s) => fmt::Display::fmt(s, f),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders a letter sequence separated by single spaces.
pub fn format_letters(word: &[Letter]) -> String {
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Characters that cannot appear in a user symbol.
pub(crate) fn is_valid_symbol(name: &str) -> bool {
    !name.is_empty()
        && name != TICK_TOKEN
        && !name.starts_with('@')
        && !name.chars().any(|c| c.is_whitespace() || "/#[](),".contains(c))
}

pub(crate) fn is_valid_state_name(name: &str) -> bool {
    !name.is_empty() && name != "->" && !name.chars().any(|c| c.is_whitespace() || c == '#' || c == '/')
}
