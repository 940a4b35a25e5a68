//! Finite alphabets of single-character letters.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A finite, nonempty-or-empty set of letters, iterated in sorted order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from any sequence of characters (duplicates collapse).
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Self {
        let set: BTreeSet<char> = letters.into_iter().collect();
        Alphabet { letters: set.into_iter().collect() }
    }

    /// Parses an alphabet from its letters written side by side, e.g. `"ab"`.
    pub fn from_str_letters(s: &str) -> Self {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.letters.binary_search(&c).is_ok()
    }

    /// Index of a letter in sorted order.
    pub fn index_of(&self, c: char) -> Result<usize> {
        self.letters.binary_search(&c).map_err(|_| Error::UnknownLetter(c))
    }

    pub fn letter(&self, index: usize) -> char {
        self.letters[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.letters.iter().copied()
    }

    pub fn as_slice(&self) -> &[char] {
        &self.letters
    }

    /// All words of length at most `max_len`, in length-then-lexicographic order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut layer: Vec<String> = alloc::vec![String::new()];
        out.push(String::new());
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.letters.len());
            for w in &layer {
                for c in self.iter() {
                    let mut v = w.clone();
                    v.push(c);
                    out.push(v.clone());
                    next.push(v);
                }
            }
            layer = next;
        }
        out
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet(")?;
        for c in &self.letters {
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedupes_and_sorts() {
        let a = Alphabet::from_str_letters("bab");
        assert_eq!(a.as_slice(), &['a', 'b']);
        assert_eq!(a.index_of('b').unwrap(), 1);
        assert!(a.index_of('c').is_err());
    }

    #[test]
    fn word_enumeration_counts() {
        let a = Alphabet::from_str_letters("ab");
        assert_eq!(a.words_up_to(3).len(), 1 + 2 + 4 + 8);
        let b = Alphabet::from_str_letters("abc");
        assert_eq!(b.words_up_to(2).len(), 1 + 3 + 9);
    }
}
