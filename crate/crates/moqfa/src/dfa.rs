//! Deterministic finite automata: minimization, boolean algebra, equivalence,
//! component structure, variation, and the basis-language automata.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabet;
use crate::basis::BasisSeq;
use crate::error::{Error, Result};
use crate::graph;

/// A complete DFA over dense state indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    /// `delta[q][i]` is the successor of `q` on the i-th alphabet letter.
    delta: Vec<Vec<usize>>,
    initial: usize,
    finals: BTreeSet<usize>,
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dfa({} states over {}, initial {}, finals {:?})", self.state_count(), self.alphabet, self.initial, self.finals)
    }
}

/// Outcome of the variation computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variation {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Variation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variation::Finite(n) => write!(f, "{}", n),
            Variation::Infinite => write!(f, "infinite"),
        }
    }
}

impl Dfa {
    /// Builds a DFA from a transition list. Missing transitions are completed
    /// with a fresh rejecting sink state.
    pub fn from_transitions(
        alphabet: Alphabet,
        states: usize,
        transitions: &[(usize, char, usize)],
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::InvalidDfa(String::from("a DFA needs at least one state")));
        }
        if initial >= states {
            return Err(Error::InvalidDfa(format!("initial state {} out of range", initial)));
        }
        let k = alphabet.len();
        let mut delta = alloc::vec![alloc::vec![usize::MAX; k]; states];
        for &(q, c, r) in transitions {
            if q >= states || r >= states {
                return Err(Error::InvalidDfa(format!("transition ({q}, {c}, {r}) out of range")));
            }
            let i = alphabet.index_of(c)?;
            if delta[q][i] != usize::MAX && delta[q][i] != r {
                return Err(Error::InvalidDfa(format!("conflicting transitions from state {q} on `{c}`")));
            }
            delta[q][i] = r;
        }
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        if let Some(&q) = finals.iter().find(|&&q| q >= states) {
            return Err(Error::InvalidDfa(format!("final state {} out of range", q)));
        }
        let incomplete = delta.iter().any(|row| row.iter().any(|&r| r == usize::MAX));
        let mut dfa = Dfa { alphabet, delta, initial, finals };
        if incomplete {
            let sink = dfa.delta.len();
            dfa.delta.push(alloc::vec![sink; k]);
            for row in &mut dfa.delta {
                for r in row.iter_mut() {
                    if *r == usize::MAX {
                        *r = sink;
                    }
                }
            }
        }
        Ok(dfa)
    }

    /// Builds a DFA from a complete transition table indexed by letter
    /// position; trusted internal constructor.
    pub(crate) fn from_raw(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        finals: BTreeSet<usize>,
    ) -> Self {
        Dfa { alphabet, delta, initial, finals }
    }

    /// Builds a DFA from a total transition function.
    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        mut f: impl FnMut(usize, char) -> usize,
    ) -> Self {
        let delta = (0..states)
            .map(|q| alphabet.iter().map(|c| f(q, c)).collect())
            .collect();
        Dfa { alphabet, delta, initial, finals: finals.into_iter().collect() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    pub fn step(&self, q: usize, c: char) -> Result<usize> {
        Ok(self.delta[q][self.alphabet.index_of(c)?])
    }

    pub fn step_idx(&self, q: usize, letter_idx: usize) -> usize {
        self.delta[q][letter_idx]
    }

    /// State reached from the initial state on `w`.
    pub fn run(&self, w: &str) -> Result<usize> {
        let mut q = self.initial;
        for c in w.chars() {
            q = self.step(q, c)?;
        }
        Ok(q)
    }

    pub fn accepts(&self, w: &str) -> Result<bool> {
        Ok(self.is_final(self.run(w)?))
    }

    /// Transitions as `(state, letter, state)` triples.
    pub fn transitions(&self) -> Vec<(usize, char, usize)> {
        let mut out = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (i, &r) in row.iter().enumerate() {
                out.push((q, self.alphabet.letter(i), r));
            }
        }
        out
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for &r in &self.delta[q] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// Language-equivalent minimal DFA: unreachable states removed, Nerode
    /// classes merged, states renumbered canonically in breadth-first order
    /// (letters taken in alphabet order).
    pub fn minimize(&self) -> Dfa {
        let reachable = self.reachable();
        let n = self.state_count();
        // Moore partition refinement over reachable states; classes only ever
        // split, so the partition is stable once the class count stops growing
        let mut class = alloc::vec![0usize; n];
        for q in 0..n {
            class[q] = usize::from(self.finals.contains(&q));
        }
        let mut class_count = 2usize;
        loop {
            let mut signature_to_class: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next_class = alloc::vec![0usize; n];
            for q in 0..n {
                if !reachable[q] {
                    continue;
                }
                let sig = (class[q], self.delta[q].iter().map(|&r| class[r]).collect::<Vec<_>>());
                let next_id = signature_to_class.len();
                let id = *signature_to_class.entry(sig).or_insert(next_id);
                next_class[q] = id;
            }
            let next_count = signature_to_class.len();
            class = next_class;
            if next_count == class_count {
                break;
            }
            class_count = next_count;
        }
        // canonical breadth-first renumbering of the classes
        let k = self.alphabet.len();
        let mut id_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut repr_of: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        id_of_class.insert(class[self.initial], 0);
        repr_of.push(self.initial);
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            for i in 0..k {
                let r = self.delta[q][i];
                if !id_of_class.contains_key(&class[r]) {
                    id_of_class.insert(class[r], repr_of.len());
                    repr_of.push(r);
                    queue.push_back(r);
                }
            }
        }
        let delta = repr_of
            .iter()
            .map(|&q| (0..k).map(|i| id_of_class[&class[self.delta[q][i]]]).collect())
            .collect();
        let finals = repr_of
            .iter()
            .enumerate()
            .filter(|(_, &q)| self.finals.contains(&q))
            .map(|(id, _)| id)
            .collect();
        Dfa { alphabet: self.alphabet.clone(), delta, initial: 0, finals }
    }

    /// Product construction over reachable pairs, acceptance combined by `op`.
    fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let start = (self.initial, other.initial);
        index.insert(start, 0);
        pairs.push(start);
        let mut head = 0;
        while head < pairs.len() {
            let (qa, qb) = pairs[head];
            let mut row = Vec::with_capacity(k);
            for i in 0..k {
                let next = (self.delta[qa][i], other.delta[qb][i]);
                let next_id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                row.push(next_id);
            }
            delta.push(row);
            head += 1;
        }
        let finals = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(qa, qb))| op(self.finals.contains(&qa), other.finals.contains(&qb)))
            .map(|(id, _)| id)
            .collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), delta, initial: 0, finals })
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    /// Set difference `L(self) ∖ L(other)`.
    pub fn minus(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Dfa {
        let finals = (0..self.state_count()).filter(|q| !self.finals.contains(q)).collect();
        Dfa { alphabet: self.alphabet.clone(), delta: self.delta.clone(), initial: self.initial, finals }
    }

    /// True when no reachable state is accepting.
    pub fn is_empty_language(&self) -> bool {
        let reachable = self.reachable();
        !self.finals.iter().any(|&q| reachable[q])
    }

    /// Language equivalence via emptiness of the symmetric difference.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.product(other, |a, b| a != b)?.is_empty_language())
    }

    /// A shortest word accepted, when any.
    pub fn shortest_accepted(&self) -> Option<String> {
        let mut seen = alloc::vec![false; self.state_count()];
        let mut queue = VecDeque::from([(self.initial, String::new())]);
        seen[self.initial] = true;
        while let Some((q, w)) = queue.pop_front() {
            if self.is_final(q) {
                return Some(w);
            }
            for (i, &r) in self.delta[q].iter().enumerate() {
                if !seen[r] {
                    seen[r] = true;
                    let mut v = w.clone();
                    v.push(self.alphabet.letter(i));
                    queue.push_back((r, v));
                }
            }
        }
        None
    }

    /// Shortest access word per state (breadth-first, letters in order).
    pub fn access_words(&self) -> Vec<Option<String>> {
        let mut out: Vec<Option<String>> = alloc::vec![None; self.state_count()];
        out[self.initial] = Some(String::new());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for (i, &r) in self.delta[q].iter().enumerate() {
                if out[r].is_none() {
                    let mut w = out[q].clone().expect("queued states have access words");
                    w.push(self.alphabet.letter(i));
                    out[r] = Some(w);
                    queue.push_back(r);
                }
            }
        }
        out
    }

    /// A word separating states `p` and `q` (accepted from exactly one),
    /// when they are distinguishable.
    pub fn distinguishing_suffix(&self, p: usize, q: usize) -> Option<String> {
        let n = self.state_count();
        let mut seen = alloc::vec![false; n * n];
        let mut queue = VecDeque::from([((p, q), String::new())]);
        seen[p * n + q] = true;
        while let Some(((a, b), w)) = queue.pop_front() {
            if self.is_final(a) != self.is_final(b) {
                return Some(w);
            }
            for (i, (&ra, &rb)) in self.delta[a].iter().zip(&self.delta[b]).enumerate() {
                if !seen[ra * n + rb] {
                    seen[ra * n + rb] = true;
                    let mut v = w.clone();
                    v.push(self.alphabet.letter(i));
                    queue.push_back(((ra, rb), v));
                }
            }
        }
        None
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let set: BTreeSet<usize> = row.iter().copied().collect();
                set.into_iter().collect()
            })
            .collect()
    }

    /// True when every strongly connected component of the transition graph
    /// is a single vertex (self-loops ignored).
    pub fn scc_trivial(&self) -> bool {
        graph::sccs_all_trivial(&self.adjacency())
    }

    /// True when the states admit a total order with `q·a ≥ q` for every
    /// state and letter; decided by topologically sorting the self-loop-free
    /// transition graph.
    pub fn topo_order_exists(&self) -> bool {
        graph::topological_order(&self.adjacency()).is_some()
    }

    /// The reversal language's DFA, by determinizing the reversed transition
    /// relation (initial set = finals, accepting sets contain the old
    /// initial); the result is minimized.
    pub fn reverse(&self) -> Dfa {
        let k = self.alphabet.len();
        let n = self.state_count();
        // reversed transitions per letter: rev[i][q] = predecessors of q on letter i
        let mut rev: Vec<Vec<Vec<usize>>> = alloc::vec![alloc::vec![Vec::new(); n]; k];
        for (q, row) in self.delta.iter().enumerate() {
            for (i, &r) in row.iter().enumerate() {
                rev[i][r].push(q);
            }
        }
        let start: BTreeSet<usize> = self.finals.iter().copied().collect();
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut sets = alloc::vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < sets.len() {
            let current = sets[head].clone();
            let mut row = Vec::with_capacity(k);
            for rev_i in rev.iter() {
                let mut next = BTreeSet::new();
                for &q in &current {
                    next.extend(rev_i[q].iter().copied());
                }
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    sets.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            head += 1;
        }
        let finals: BTreeSet<usize> =
            sets.iter().enumerate().filter(|(_, s)| s.contains(&self.initial)).map(|(i, _)| i).collect();
        Dfa::from_raw(self.alphabet.clone(), delta, 0, finals).minimize()
    }

    /// Supremum of the number of state changes over all runs from the initial
    /// state. Finite exactly when all components are trivial, in which case it
    /// is the longest self-loop-free path in the transition DAG. The input
    /// should be minimal for the variation of the language.
    pub fn variation_sup(&self) -> Variation {
        let adj = self.adjacency();
        let Some(order) = graph::topological_order(&adj) else {
            return Variation::Infinite;
        };
        // longest edge-count path from the initial state, states processed in
        // topological order
        let n = self.state_count();
        let mut by_order: Vec<usize> = (0..n).collect();
        by_order.sort_by_key(|&v| order[v]);
        let mut dist = alloc::vec![usize::MAX; n];
        dist[self.initial] = 0;
        let mut best = 0usize;
        for v in by_order {
            if dist[v] == usize::MAX {
                continue;
            }
            best = best.max(dist[v]);
            for &w in &adj[v] {
                if w != v {
                    let cand = dist[v] + 1;
                    if dist[w] == usize::MAX || cand > dist[w] {
                        dist[w] = cand;
                    }
                }
            }
        }
        Variation::Finite(best)
    }
}

/// The chain automaton for `Σ*a₁Σ*⋯Σ*a_kΣ*`: states `0..=k`, advancing on
/// the next pattern letter and looping otherwise; accepts exactly the words
/// embedding the sequence as a scattered subword.
pub fn basis_dfa(seq: &BasisSeq, alphabet: &Alphabet) -> Result<Dfa> {
    if let Some(c) = seq.letters().iter().find(|c| !alphabet.contains(**c)) {
        return Err(Error::InvalidBasisSeq(format!("letter `{}` outside the alphabet", c)));
    }
    let k = seq.len();
    Ok(Dfa::from_fn(alphabet.clone(), k + 1, 0, [k], |q, c| {
        if q < k && seq.letters()[q] == c {
            q + 1
        } else {
            q
        }
    }))
}

/// The single-state DFA for `Σ*` or `∅`.
pub fn trivial_dfa(alphabet: &Alphabet, accept_all: bool) -> Dfa {
    Dfa::from_fn(alphabet.clone(), 1, 0, if accept_all { alloc::vec![0] } else { alloc::vec![] }, |q, _| q)
}
