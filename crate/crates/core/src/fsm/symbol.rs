//! Alphabet of the tagging transducers.
//!
//! Classes and tags are interned ids. Marked classes and marked tags (the
//! extension position of a middle subsequence) are separate alphabet
//! members rather than prefixed names, and a pair atom packs a whole
//! `upper:lower` label into one symbol for 1-level languages.

use std::fmt;

/// Index of a tag in the tag inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagId(pub u32);

/// Index of an ambiguity class in the class inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub u32);

impl TagId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ClassId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A non-pair symbol; the components of a [`Symbol::Pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Epsilon,
    Class(ClassId),
    MarkedClass(ClassId),
    Tag(TagId),
    MarkedTag(TagId),
}

/// A symbol on one side of a transducer arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Epsilon,
    Class(ClassId),
    MarkedClass(ClassId),
    Tag(TagId),
    MarkedTag(TagId),
    /// 1-level form of an `upper:lower` pair. Never nests and never has
    /// epsilon on both sides; build it with [`Symbol::pair`].
    Pair(Atom, Atom),
}

impl Symbol {
    /// Builds a pair atom, or `None` when both components are epsilon.
    pub fn pair(upper: Symbol, lower: Symbol) -> Option<Symbol> {
        let (u, l) = (upper.atom()?, lower.atom()?);
        if u == Atom::Epsilon && l == Atom::Epsilon {
            return None;
        }
        Some(Symbol::Pair(u, l))
    }

    /// The atom form of a non-pair symbol.
    pub fn atom(self) -> Option<Atom> {
        Some(match self {
            Symbol::Epsilon => Atom::Epsilon,
            Symbol::Class(c) => Atom::Class(c),
            Symbol::MarkedClass(c) => Atom::MarkedClass(c),
            Symbol::Tag(t) => Atom::Tag(t),
            Symbol::MarkedTag(t) => Atom::MarkedTag(t),
            Symbol::Pair(..) => return None,
        })
    }

    pub fn is_epsilon(self) -> bool {
        self == Symbol::Epsilon
    }

    pub fn is_pair(self) -> bool {
        matches!(self, Symbol::Pair(..))
    }

    pub fn is_marked(self) -> bool {
        matches!(self, Symbol::MarkedClass(_) | Symbol::MarkedTag(_))
    }

    /// Upper and lower components of a pair atom.
    pub fn split_pair(self) -> Option<(Symbol, Symbol)> {
        match self {
            Symbol::Pair(u, l) => Some((u.into(), l.into())),
            _ => None,
        }
    }
}

impl From<Atom> for Symbol {
    fn from(a: Atom) -> Symbol {
        match a {
            Atom::Epsilon => Symbol::Epsilon,
            Atom::Class(c) => Symbol::Class(c),
            Atom::MarkedClass(c) => Symbol::MarkedClass(c),
            Atom::Tag(t) => Symbol::Tag(t),
            Atom::MarkedTag(t) => Symbol::MarkedTag(t),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Epsilon => write!(f, "_eps_"),
            Atom::Class(c) => write!(f, "c#{}", c.0),
            Atom::MarkedClass(c) => write!(f, "mc#{}", c.0),
            Atom::Tag(t) => write!(f, "t#{}", t.0),
            Atom::MarkedTag(t) => write!(f, "mt#{}", t.0),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atom() {
            Some(a) => a.fmt(f),
            None => {
                let (u, l) = match self {
                    Symbol::Pair(u, l) => (u, l),
                    _ => unreachable!(),
                };
                write!(f, "<{u},{l}>")
            }
        }
    }
}
