//! Basis automata for subword-pattern languages.
//!
//! For an adjacent-distinct sequence `a₁…a_k` the language
//! `L[a₁…a_k] = Σ*a₁Σ*⋯Σ*a_kΣ*` is recognized by a (k+1)-dimensional
//! measure-only automaton whose per-letter observables split the state space
//! into "up" (averaging) and "down" (difference) components on the index
//! blocks where the letter occurs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qfa::{Label, Meta, MonQfa, Observable};
use crate::scalar::{Rational, RealScalar, Scalar};

/// Result label for the "up" projector of a pattern letter.
pub const UP: Label = Label(0);
/// Result label for the "down" projector of a pattern letter.
pub const DOWN: Label = Label(1);
/// End-marker result label for acceptance.
pub const ACCEPT: Label = Label(0);
/// End-marker result label for rejection.
pub const REJECT: Label = Label(1);

/// A nonempty letter sequence `a₁…a_k` with `aᵢ ≠ aᵢ₊₁`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisSeq {
    letters: Vec<char>,
}

impl BasisSeq {
    pub fn new(letters: Vec<char>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidBasisSeq(String::from("empty sequence")));
        }
        for w in letters.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidBasisSeq(format!("adjacent repeated letter `{}`", w[0])));
            }
        }
        Ok(BasisSeq { letters })
    }

    /// Parses the comma-free form, e.g. `"aba"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.chars().collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// The support set `S = {a₁, …, a_k}`.
    pub fn support(&self) -> BTreeSet<char> {
        self.letters.iter().copied().collect()
    }

    /// True iff the sequence is a scattered subword of `w`.
    pub fn embeds_in(&self, w: &str) -> bool {
        let mut need = self.letters.iter();
        let mut current = need.next();
        for c in w.chars() {
            match current {
                Some(&x) if x == c => current = need.next(),
                _ => {}
            }
            if current.is_none() {
                return true;
            }
        }
        current.is_none()
    }
}

impl fmt::Debug for BasisSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisSeq(")?;
        for c in &self.letters {
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BasisSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

/// All 1-based positions `i` with `aᵢ = letter`, strictly increasing. The
/// adjacency constraint forces consecutive returned indexes to differ by ≥ 2,
/// so the blocks `{jᵢ, jᵢ+1}` are pairwise disjoint.
pub fn j_indexes(seq: &BasisSeq, letter: char) -> Result<Vec<usize>> {
    if !seq.support().contains(&letter) {
        return Err(Error::UnknownLetter(letter));
    }
    Ok(seq
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == letter)
        .map(|(i, _)| i + 1)
        .collect())
}

fn block_of(indexes: &[usize], r: usize) -> Option<usize> {
    indexes.iter().position(|&j| r == j || r == j + 1)
}

/// The "up" projector `P↗(α)` of dimension `(k+1)×(k+1)`: identity outside
/// the blocks `{jᵢ, jᵢ+1}`, the averaging block `[[½,½],[½,½]]` on each.
pub fn up_projector<T: Scalar>(seq: &BasisSeq, letter: char) -> Result<Matrix<T>> {
    let idx = j_indexes(seq, letter)?;
    let n = seq.len() + 1;
    let half = Rational::new(1, 2);
    Ok(Matrix::from_fn(n, n, |i, j| {
        let (r, s) = (i + 1, j + 1);
        match (block_of(&idx, r), block_of(&idx, s)) {
            (Some(bi), Some(bj)) if bi == bj => T::from_ratio(half),
            (None, None) if r == s => T::one(),
            _ => T::zero(),
        }
    }))
}

/// The "down" projector `P↘(α)`: zero outside the blocks, the difference
/// block `[[½,−½],[−½,½]]` on each; `P↗(α) + P↘(α) = I`.
pub fn down_projector<T: Scalar>(seq: &BasisSeq, letter: char) -> Result<Matrix<T>> {
    let idx = j_indexes(seq, letter)?;
    let n = seq.len() + 1;
    let half = Rational::new(1, 2);
    Ok(Matrix::from_fn(n, n, |i, j| {
        let (r, s) = (i + 1, j + 1);
        match (block_of(&idx, r), block_of(&idx, s)) {
            (Some(bi), Some(bj)) if bi == bj => {
                if r == s {
                    T::from_ratio(half)
                } else {
                    T::from_ratio(-half)
                }
            }
            _ => T::zero(),
        }
    }))
}

/// Builds the basis automaton for `seq` over `alphabet`: dimension k+1,
/// initial state `e₁`, up/down observables for pattern letters, identity
/// observables elsewhere, and acceptance on the last coordinate. Declares
/// cut-point `1/2^(2k+1)` with isolation `1/2^(2(k+1))`.
pub fn build_basis_automaton<T: Scalar>(seq: &BasisSeq, alphabet: &Alphabet) -> Result<MonQfa<T>> {
    if let Some(c) = seq.letters().iter().find(|c| !alphabet.contains(**c)) {
        return Err(Error::InvalidBasisSeq(format!("letter `{}` outside the alphabet", c)));
    }
    let k = seq.len();
    let dim = k + 1;
    let support = seq.support();
    let tol = <T::Real as RealScalar>::zero();
    let mut observables = BTreeMap::new();
    for c in alphabet.iter() {
        let obs = if support.contains(&c) {
            Observable::new(
                dim,
                alloc::vec![(UP, up_projector::<T>(seq, c)?), (DOWN, down_projector::<T>(seq, c)?)],
                &tol,
            )?
        } else {
            Observable::identity(dim)
        };
        observables.insert(c, obs);
    }
    let mut acc = Matrix::<T>::zeros(dim, dim);
    acc.set(dim - 1, dim - 1, T::one());
    let rej = Matrix::<T>::identity(dim).sub(&acc)?;
    let end_marker = Observable::new(dim, alloc::vec![(ACCEPT, acc), (REJECT, rej)], &tol)?;
    let meta = Meta {
        cutpoint: Rational::new(1, 1 << (2 * k + 1)),
        isolation: Rational::new(1, 1 << (2 * (k + 1))),
    };
    MonQfa::new(
        alphabet.clone(),
        observables,
        end_marker,
        Matrix::basis_row(dim, 0),
        BTreeSet::from([ACCEPT]),
        Some(meta),
        &tol,
    )
}
