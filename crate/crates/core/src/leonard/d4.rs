//! The dihedral group of order 8 acting on Leonard systems.
//!
//! Words are applied left to right: `*↓` means "take the dual, then reverse
//! the dual idempotents".

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum D4Gen {
    /// Swap the roles of `A` and `A*`.
    Star,
    /// Reverse the order of the dual idempotents.
    Down,
    /// Reverse the order of the idempotents.
    DoubleDown,
}

impl D4Gen {
    pub fn symbol(self) -> char {
        match self {
            D4Gen::Star => '*',
            D4Gen::Down => '↓',
            D4Gen::DoubleDown => '⇓',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct D4Word(Vec<D4Gen>);

impl D4Word {
    pub fn new(gens: Vec<D4Gen>) -> Self {
        D4Word(gens)
    }

    pub fn identity() -> Self {
        D4Word(Vec::new())
    }

    pub fn gens(&self) -> &[D4Gen] {
        &self.0
    }

    pub fn then(&self, other: &D4Word) -> D4Word {
        D4Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn element(&self) -> D4Element {
        self.0.iter().fold(D4Element::IDENTITY, |e, &g| e.then(g))
    }

    /// The canonical representative of this word's group element.
    pub fn reduced(&self) -> D4Word {
        self.element().word()
    }

    /// Label used as a JSON key; the identity is `"id"`.
    pub fn label(&self) -> String {
        if self.0.is_empty() {
            "id".to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for D4Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.symbol())?;
        }
        Ok(())
    }
}

/// Accepts `*`, `↓`/`d`, `⇓`/`D`; `""` and `"id"` are the identity.
impl FromStr for D4Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "id" {
            return Ok(D4Word::identity());
        }
        s.chars()
            .map(|c| match c {
                '*' => Ok(D4Gen::Star),
                '↓' | 'd' => Ok(D4Gen::Down),
                '⇓' | 'D' => Ok(D4Gen::DoubleDown),
                other => Err(Error::Parse(format!("{other:?} is not a D4 generator"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(D4Word)
    }
}

/// A group element, recorded by its effect on `(A; {E_i}; A*; {E*_i})`:
/// whether `A*` now comes first, and whether each idempotent sequence is
/// reversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D4Element {
    pub star: bool,
    pub rev_e: bool,
    pub rev_e_star: bool,
}

impl D4Element {
    pub const IDENTITY: D4Element = D4Element {
        star: false,
        rev_e: false,
        rev_e_star: false,
    };

    pub fn then(self, g: D4Gen) -> D4Element {
        let mut e = self;
        match g {
            D4Gen::Star => e.star = !e.star,
            // second slot holds A* unless starred
            D4Gen::Down if !e.star => e.rev_e_star = !e.rev_e_star,
            D4Gen::Down => e.rev_e = !e.rev_e,
            D4Gen::DoubleDown if !e.star => e.rev_e = !e.rev_e,
            D4Gen::DoubleDown => e.rev_e_star = !e.rev_e_star,
        }
        e
    }

    /// Normal form: optional `*`, then optional `↓`, then optional `⇓`.
    pub fn word(self) -> D4Word {
        let mut gens = Vec::new();
        let (down, double_down) = if self.star {
            gens.push(D4Gen::Star);
            (self.rev_e, self.rev_e_star)
        } else {
            (self.rev_e_star, self.rev_e)
        };
        if down {
            gens.push(D4Gen::Down);
        }
        if double_down {
            gens.push(D4Gen::DoubleDown);
        }
        D4Word(gens)
    }

    pub fn all() -> Vec<D4Element> {
        let mut out = Vec::with_capacity(8);
        for star in [false, true] {
            for rev_e in [false, true] {
                for rev_e_star in [false, true] {
                    out.push(D4Element {
                        star,
                        rev_e,
                        rev_e_star,
                    });
                }
            }
        }
        out
    }
}

/// The eight reduced words, in a fixed order.
pub fn reduced_words() -> Vec<D4Word> {
    ["", "↓", "⇓", "↓⇓", "*", "*↓", "*⇓", "*↓⇓"]
        .iter()
        .map(|s| s.parse().expect("valid word"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> D4Word {
        s.parse().unwrap()
    }

    #[test]
    fn relations_hold_in_the_group() {
        for word in ["**", "↓↓", "⇓⇓"] {
            assert_eq!(w(word).element(), D4Element::IDENTITY, "{word}");
        }
        assert_eq!(w("⇓*").element(), w("*↓").element());
        assert_eq!(w("↓*").element(), w("*⇓").element());
        assert_eq!(w("↓⇓").element(), w("⇓↓").element());
    }

    #[test]
    fn eight_distinct_reduced_words() {
        let words = reduced_words();
        let mut elems: Vec<_> = words.iter().map(D4Word::element).collect();
        elems.sort();
        elems.dedup();
        assert_eq!(elems.len(), 8);
        for word in &words {
            assert_eq!(&word.reduced(), word);
        }
        for e in D4Element::all() {
            assert_eq!(e.word().element(), e);
        }
    }

    #[test]
    fn parse_aliases() {
        assert_eq!(w("*dD"), w("*↓⇓"));
        assert_eq!(w("id"), D4Word::identity());
        assert_eq!(D4Word::identity().label(), "id");
        assert!("x".parse::<D4Word>().is_err());
    }
}
