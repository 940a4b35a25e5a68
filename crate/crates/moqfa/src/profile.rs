//! The subword-profile machine: a deterministic automaton whose state after
//! reading `w` is the set of adjacent-distinct sequences of bounded length
//! embeddable in `w` as scattered subwords.
//!
//! Profiles are invariant under contracting repeated adjacent letters, which
//! makes them the right abstraction for decomposing languages recognized by
//! measure-only automata into basis languages.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// A profile: the set of nonempty adjacent-distinct sequences (each of length
/// at most the machine's width) embeddable in the words that reach it.
pub type Profile = BTreeSet<String>;

/// Deterministic machine over profiles; it has no accepting states of its
/// own — acceptance is decided by the automaton it is paired with.
#[derive(Clone, Debug)]
pub struct ProfileMachine {
    alphabet: Alphabet,
    width: usize,
    states: Vec<Profile>,
    delta: Vec<Vec<usize>>,
}

impl ProfileMachine {
    /// Builds the machine for sequences of length at most `width`, erroring
    /// out when more than `state_limit` profiles become reachable.
    pub fn build(alphabet: &Alphabet, width: usize, state_limit: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidDfa(String::from("profile width must be at least 1")));
        }
        let k = alphabet.len();
        let mut index: BTreeMap<Profile, usize> = BTreeMap::new();
        let mut states: Vec<Profile> = alloc::vec![Profile::new()];
        index.insert(Profile::new(), 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < states.len() {
            let current = states[head].clone();
            let mut row = Vec::with_capacity(k);
            for c in alphabet.iter() {
                let next = extend_profile(&current, c, width);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= state_limit {
                            return Err(Error::ProfileLimitExceeded(state_limit));
                        }
                        states.push(next.clone());
                        index.insert(next, states.len() - 1);
                        states.len() - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            head += 1;
        }
        Ok(ProfileMachine { alphabet: alphabet.clone(), width, states, delta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn profile(&self, state: usize) -> &Profile {
        &self.states[state]
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn step_idx(&self, state: usize, letter_idx: usize) -> usize {
        self.delta[state][letter_idx]
    }

    /// Profile state reached on `w`.
    pub fn run(&self, w: &str) -> Result<usize> {
        let mut q = 0;
        for c in w.chars() {
            q = self.delta[q][self.alphabet.index_of(c)?];
        }
        Ok(q)
    }

    /// All adjacent-distinct sequences over the alphabet with length in
    /// `1..=width`, in length-then-lexicographic order.
    pub fn all_sequences(&self) -> Vec<String> {
        all_adjacent_distinct(&self.alphabet, self.width)
    }
}

/// Reading `c` extends every stored sequence not already ending in `c`
/// (and the empty sequence) by `c`, up to the width bound.
fn extend_profile(profile: &Profile, c: char, width: usize) -> Profile {
    let mut next = profile.clone();
    if width >= 1 {
        next.insert(String::from(c));
    }
    for s in profile {
        if s.chars().count() < width && s.chars().last() != Some(c) {
            let mut t = s.clone();
            t.push(c);
            next.insert(t);
        }
    }
    next
}

/// All adjacent-distinct sequences with length in `1..=width`.
pub fn all_adjacent_distinct(alphabet: &Alphabet, width: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer: Vec<String> = alloc::vec![String::new()];
    for _ in 0..width {
        let mut next_layer = Vec::new();
        for s in &layer {
            for c in alphabet.iter() {
                if s.chars().last() != Some(c) {
                    let mut t = s.clone();
                    t.push(c);
                    out.push(t.clone());
                    next_layer.push(t);
                }
            }
        }
        layer = next_layer;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::from_str_letters("ab")
    }

    fn profile_of(m: &ProfileMachine, w: &str) -> Vec<String> {
        m.profile(m.run(w).unwrap()).iter().cloned().collect()
    }

    #[test]
    fn width_one_tracks_occurring_letters() {
        let m = ProfileMachine::build(&sigma(), 1, 1 << 20).unwrap();
        assert_eq!(profile_of(&m, "ab"), alloc::vec!["a", "b"]);
        assert_eq!(profile_of(&m, ""), Vec::<String>::new());
    }

    #[test]
    fn width_two_tracks_patterns() {
        let m = ProfileMachine::build(&sigma(), 2, 1 << 20).unwrap();
        assert_eq!(profile_of(&m, "aab"), alloc::vec!["a", "ab", "b"]);
        assert_eq!(m.run("aab").unwrap(), m.run("ab").unwrap());
    }

    #[test]
    fn profiles_are_scattered_subword_sets() {
        // the stored set equals a direct enumeration of embeddable sequences
        let m = ProfileMachine::build(&sigma(), 3, 1 << 20).unwrap();
        for w in sigma().words_up_to(6) {
            let got = profile_of(&m, &w);
            let expect: Vec<String> = all_adjacent_distinct(&sigma(), 3)
                .into_iter()
                .filter(|s| crate::basis::BasisSeq::parse(s).unwrap().embeds_in(&w))
                .collect();
            let mut expect_sorted = expect;
            expect_sorted.sort();
            let mut got_sorted = got;
            got_sorted.sort();
            assert_eq!(got_sorted, expect_sorted, "word {w:?}");
        }
    }

    #[test]
    fn profiles_ignore_adjacent_duplicates() {
        let m = ProfileMachine::build(&sigma(), 2, 1 << 20).unwrap();
        for w in sigma().words_up_to(6) {
            let mut contracted = String::new();
            for c in w.chars() {
                if contracted.chars().last() != Some(c) {
                    contracted.push(c);
                }
            }
            assert_eq!(m.run(&w).unwrap(), m.run(&contracted).unwrap(), "word {w:?}");
        }
    }

    #[test]
    fn state_limit_is_enforced() {
        assert!(matches!(
            ProfileMachine::build(&Alphabet::from_str_letters("abc"), 4, 10),
            Err(Error::ProfileLimitExceeded(10))
        ));
    }

    #[test]
    fn sequence_enumeration_counts() {
        // over two letters: 2 of length 1, 2 of length 2, 2 of length 3
        assert_eq!(all_adjacent_distinct(&sigma(), 3).len(), 6);
        // over three letters: 3 + 6 + 12
        assert_eq!(all_adjacent_distinct(&Alphabet::from_str_letters("abc"), 3).len(), 21);
    }
}
