//! Finite monoids: transition/syntactic monoids of DFAs, Green's relations,
//! block groups, and literal idempotency.
//!
//! Green's equivalences are computed as mutual-reachability classes of the
//! one-sided and two-sided Cayley graphs: `a` and `b` generate the same right
//! ideal exactly when each is reachable from the other by right
//! multiplications, and likewise for left and two-sided ideals. This decides
//! triviality in time linear in `|M|·|Σ|`, which keeps transition monoids with
//! tens of thousands of elements tractable; the explicit principal-ideal sets
//! serve as the reference oracle in the test suite.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::graph;

/// One of Green's equivalence relations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GreenRel {
    /// Left ideals `S¹a`.
    L,
    /// Right ideals `aS¹`.
    R,
    /// Two-sided ideals `S¹aS¹`.
    J,
}

impl fmt::Display for GreenRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreenRel::L => write!(f, "L"),
            GreenRel::R => write!(f, "R"),
            GreenRel::J => write!(f, "J"),
        }
    }
}

enum Backing {
    /// Explicit multiplication table, row-major.
    Table(Vec<u32>),
    /// State transformations with an index for product lookup.
    Transforms { maps: Vec<Vec<u16>>, index: BTreeMap<Vec<u16>, u32> },
}

/// A finite monoid with distinguished generators and shortest representative
/// words (ties broken lexicographically in alphabet order).
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    gens: Vec<(char, usize)>,
    reps: Vec<String>,
    backing: Backing,
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMonoid({} elements, {} generators)", self.size, self.gens.len())
    }
}

impl FiniteMonoid {
    /// Builds a monoid from an explicit multiplication table. Validates the
    /// identity laws, full associativity, and that every element is a product
    /// of generator images; computes representative words by breadth-first
    /// closure from the identity.
    pub fn from_table(table: &[Vec<usize>], identity: usize, gens: Vec<(char, usize)>) -> Result<Self> {
        let n = table.len();
        if n == 0 || identity >= n {
            return Err(Error::InvalidAutomaton(String::from("empty table or identity out of range")));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidAutomaton(String::from("multiplication table is not square over 0..n")));
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::InvalidAutomaton(format!("identity laws fail at element {}", a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidAutomaton(format!("associativity fails at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let mut m = FiniteMonoid {
            size: n,
            identity,
            gens,
            reps: Vec::new(),
            backing: Backing::Table(flat),
        };
        m.reps = m.representative_words();
        let reachable = m.reachable_count();
        if reachable != n {
            return Err(Error::InvalidAutomaton(format!(
                "only {} of {} elements are products of the generators",
                reachable, n
            )));
        }
        Ok(m)
    }

    fn reachable_count(&self) -> usize {
        let mut seen = alloc::vec![false; self.size];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(_, g) in &self.gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    fn representative_words(&self) -> Vec<String> {
        let mut reps: Vec<Option<String>> = alloc::vec![None; self.size];
        reps[self.identity] = Some(String::new());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let base = reps[x].clone().expect("queued elements have representatives");
            for &(c, g) in &self.gens {
                let y = self.mul(x, g);
                if reps[y].is_none() {
                    let mut w = base.clone();
                    w.push(c);
                    reps[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        reps.into_iter().map(Option::unwrap_or_default).collect()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[(char, usize)] {
        &self.gens
    }

    pub fn generator(&self, letter: char) -> Option<usize> {
        self.gens.iter().find(|(c, _)| *c == letter).map(|(_, g)| *g)
    }

    /// Shortest representative word of an element.
    pub fn rep(&self, element: usize) -> &str {
        &self.reps[element]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.backing {
            Backing::Table(t) => t[a * self.size + b] as usize,
            Backing::Transforms { maps, index } => {
                let composed: Vec<u16> = maps[a].iter().map(|&q| maps[b][q as usize]).collect();
                index[&composed] as usize
            }
        }
    }

    /// Evaluates a word to its monoid element.
    pub fn eval_word(&self, w: &str) -> Result<usize> {
        let mut x = self.identity;
        for c in w.chars() {
            let g = self.generator(c).ok_or(Error::UnknownLetter(c))?;
            x = self.mul(x, g);
        }
        Ok(x)
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.mul(x, x) == x).collect()
    }

    fn cayley_adjacency(&self, rel: GreenRel) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.size];
        for x in 0..self.size {
            for &(_, g) in &self.gens {
                match rel {
                    GreenRel::R => adj[x].push(self.mul(x, g)),
                    GreenRel::L => adj[x].push(self.mul(g, x)),
                    GreenRel::J => {
                        adj[x].push(self.mul(x, g));
                        adj[x].push(self.mul(g, x));
                    }
                }
            }
        }
        adj
    }

    /// Class id per element under the given Green relation.
    pub fn green_classes(&self, rel: GreenRel) -> Vec<usize> {
        graph::scc(&self.cayley_adjacency(rel))
    }

    /// Classes as sorted element lists.
    pub fn green_partition(&self, rel: GreenRel) -> Vec<Vec<usize>> {
        let classes = self.green_classes(rel);
        let count = classes.iter().copied().max().map_or(0, |m| m + 1);
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); count];
        for (x, &c) in classes.iter().enumerate() {
            out[c].push(x);
        }
        out.retain(|class| !class.is_empty());
        out.sort();
        out
    }

    /// True iff every class of the relation is a singleton.
    pub fn green_trivial(&self, rel: GreenRel) -> bool {
        let classes = self.green_classes(rel);
        let mut size = alloc::vec![0usize; self.size];
        for &c in &classes {
            size[c] += 1;
        }
        size.iter().all(|&s| s <= 1)
    }

    /// True iff every R-class and every L-class contains at most one
    /// idempotent element.
    pub fn is_block_group(&self) -> bool {
        let idem: Vec<bool> = (0..self.size).map(|x| self.mul(x, x) == x).collect();
        for rel in [GreenRel::R, GreenRel::L] {
            let classes = self.green_classes(rel);
            let count = classes.iter().copied().max().map_or(0, |m| m + 1);
            let mut idem_in_class = alloc::vec![0usize; count];
            for x in 0..self.size {
                if idem[x] {
                    idem_in_class[classes[x]] += 1;
                    if idem_in_class[classes[x]] > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Two distinct J-equivalent elements with context words certifying the
    /// equivalence: `(a, b, (l₁, r₁), (l₂, r₂))` with `l₁·a·r₁ = b` and
    /// `l₂·b·r₂ = a` as monoid elements. `None` when J-trivial.
    pub fn j_witness(&self) -> Option<JWitness> {
        let classes = self.green_classes(GreenRel::J);
        let count = classes.iter().copied().max().map_or(0, |m| m + 1);
        let mut first: Vec<Option<usize>> = alloc::vec![None; count];
        let mut pair: Option<(usize, usize)> = None;
        for x in 0..self.size {
            match first[classes[x]] {
                None => first[classes[x]] = Some(x),
                Some(y) => {
                    pair = Some((y, x));
                    break;
                }
            }
        }
        let (a, b) = pair?;
        let (l1, r1) = self.context_path(a, b)?;
        let (l2, r2) = self.context_path(b, a)?;
        debug_assert_eq!(self.sandwich(&l1, a, &r1).ok()?, b);
        debug_assert_eq!(self.sandwich(&l2, b, &r2).ok()?, a);
        Some(JWitness {
            element_a: a,
            element_b: b,
            rep_a: self.reps[a].clone(),
            rep_b: self.reps[b].clone(),
            context_ab: (l1, r1),
            context_ba: (l2, r2),
        })
    }

    /// Evaluates `φ(l)·x·φ(r)`.
    pub fn sandwich(&self, l: &str, x: usize, r: &str) -> Result<usize> {
        Ok(self.mul(self.mul(self.eval_word(l)?, x), self.eval_word(r)?))
    }

    /// Breadth-first search in the two-sided Cayley graph from `from` to `to`,
    /// returning words `(l, r)` with `φ(l)·from·φ(r) = to`.
    fn context_path(&self, from: usize, to: usize) -> Option<(String, String)> {
        #[derive(Clone)]
        enum Step {
            Start,
            Left(char, usize),
            Right(char, usize),
        }
        let mut back: Vec<Option<Step>> = alloc::vec![None; self.size];
        back[from] = Some(Step::Start);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &(c, g) in &self.gens {
                let right = self.mul(x, g);
                if back[right].is_none() {
                    back[right] = Some(Step::Right(c, x));
                    queue.push_back(right);
                }
                let left = self.mul(g, x);
                if back[left].is_none() {
                    back[left] = Some(Step::Left(c, x));
                    queue.push_back(left);
                }
            }
        }
        back[to].as_ref()?;
        let mut l = String::new();
        let mut r = String::new();
        let mut x = to;
        loop {
            match back[x].clone()? {
                Step::Start => break,
                Step::Left(c, prev) => {
                    l.push(c);
                    x = prev;
                }
                Step::Right(c, prev) => {
                    r.insert(0, c);
                    x = prev;
                }
            }
        }
        Some((l, r))
    }
}

/// Certificate for a non-trivial J relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JWitness {
    pub element_a: usize,
    pub element_b: usize,
    /// representative words of the two equivalent elements
    pub rep_a: String,
    pub rep_b: String,
    /// words `(l, r)` with `l·a·r = b`
    pub context_ab: (String, String),
    /// words `(l, r)` with `l·b·r = a`
    pub context_ba: (String, String),
}

/// The transition monoid of a DFA: all state transformations `δ_w`, closed by
/// breadth-first right multiplication with the letter transformations. For a
/// minimal DFA this is the syntactic monoid of its language. Errors out past
/// `limit` elements.
pub fn transition_monoid(d: &Dfa, limit: usize) -> Result<FiniteMonoid> {
    let n = d.state_count();
    if n > u16::MAX as usize {
        return Err(Error::MonoidLimitExceeded(limit));
    }
    let identity_map: Vec<u16> = (0..n as u16).collect();
    let mut index: BTreeMap<Vec<u16>, u32> = BTreeMap::new();
    let mut maps: Vec<Vec<u16>> = alloc::vec![identity_map.clone()];
    index.insert(identity_map, 0);

    let letter_maps: Vec<(char, Vec<u16>)> = d
        .alphabet()
        .iter()
        .enumerate()
        .map(|(i, c)| (c, (0..n).map(|q| d.step_idx(q, i) as u16).collect()))
        .collect();

    let mut gens: Vec<(char, usize)> = Vec::new();
    for (c, map) in &letter_maps {
        let id = match index.get(map) {
            Some(&id) => id,
            None => {
                maps.push(map.clone());
                index.insert(map.clone(), (maps.len() - 1) as u32);
                (maps.len() - 1) as u32
            }
        };
        gens.push((*c, id as usize));
    }

    let mut head = 0;
    while head < maps.len() {
        let current = maps[head].clone();
        for (_, gmap) in &letter_maps {
            let composed: Vec<u16> = current.iter().map(|&q| gmap[q as usize]).collect();
            if !index.contains_key(&composed) {
                if maps.len() >= limit {
                    return Err(Error::MonoidLimitExceeded(limit));
                }
                maps.push(composed.clone());
                index.insert(composed, (maps.len() - 1) as u32);
            }
        }
        head += 1;
    }

    let mut m = FiniteMonoid {
        size: maps.len(),
        identity: 0,
        gens,
        reps: Vec::new(),
        backing: Backing::Transforms { maps, index },
    };
    m.reps = m.representative_words();
    Ok(m)
}

/// True iff `δ(δ(q,a),a) = δ(q,a)` for every reachable state and letter. On a
/// minimal DFA this is equivalent to the language condition
/// `xa²y ∈ L ⟺ xay ∈ L` and to every generator image being idempotent in the
/// transition monoid.
pub fn is_literally_idempotent(d: &Dfa) -> bool {
    literal_idempotency_witness(d).is_none()
}

/// The first `(state, letter)` with `δ(δ(q,a),a) ≠ δ(q,a)` over reachable
/// states (breadth-first order), when one exists.
pub fn literal_idempotency_witness(d: &Dfa) -> Option<(usize, char)> {
    let mut seen = alloc::vec![false; d.state_count()];
    let mut queue = VecDeque::from([d.initial()]);
    seen[d.initial()] = true;
    while let Some(q) = queue.pop_front() {
        for (i, c) in d.alphabet().iter().enumerate() {
            let r = d.step_idx(q, i);
            if d.step_idx(r, i) != r {
                return Some((q, c));
            }
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::basis::BasisSeq;
    use crate::dfa::basis_dfa;
    use alloc::collections::BTreeSet;

    fn sigma() -> Alphabet {
        Alphabet::from_str_letters("ab")
    }

    fn contains_a() -> Dfa {
        basis_dfa(&BasisSeq::parse("a").unwrap(), &sigma()).unwrap().minimize()
    }

    fn even_as() -> Dfa {
        let alpha = Alphabet::from_str_letters("a");
        Dfa::from_transitions(alpha, 2, &[(0, 'a', 1), (1, 'a', 0)], 0, [0]).unwrap().minimize()
    }

    /// Reference oracle: explicit principal-ideal sets per Green relation.
    fn ideal(m: &FiniteMonoid, a: usize, rel: GreenRel) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &(_, g) in m.generators() {
                let mut nexts = Vec::new();
                match rel {
                    GreenRel::R => nexts.push(m.mul(x, g)),
                    GreenRel::L => nexts.push(m.mul(g, x)),
                    GreenRel::J => {
                        nexts.push(m.mul(x, g));
                        nexts.push(m.mul(g, x));
                    }
                }
                for y in nexts {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    fn classes_by_ideals(m: &FiniteMonoid, rel: GreenRel) -> Vec<Vec<usize>> {
        let mut by_ideal: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
        for x in 0..m.size() {
            by_ideal.entry(ideal(m, x, rel)).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_ideal.into_values().collect();
        out.sort();
        out
    }

    #[test]
    fn transition_monoid_of_contains_a() {
        let m = transition_monoid(&contains_a(), 1 << 20).unwrap();
        assert_eq!(m.size(), 2);
        let g = m.generator('a').unwrap();
        assert_eq!(m.mul(g, g), g);
        assert_eq!(m.rep(m.identity()), "");
        assert_eq!(m.rep(g), "a");
        assert!(m.green_trivial(GreenRel::J));
        assert!(m.green_trivial(GreenRel::R));
        assert!(m.green_trivial(GreenRel::L));
    }

    #[test]
    fn one_state_dfa_gives_trivial_monoid() {
        let d = crate::dfa::trivial_dfa(&sigma(), true);
        let m = transition_monoid(&d, 16).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.green_trivial(GreenRel::J));
    }

    #[test]
    fn cyclic_group_of_order_two() {
        let m = transition_monoid(&even_as(), 16).unwrap();
        assert_eq!(m.size(), 2);
        let g = m.generator('a').unwrap();
        assert_eq!(m.mul(g, g), m.identity());
        // a group is a single J class
        assert!(!m.green_trivial(GreenRel::J));
        assert!(!m.green_trivial(GreenRel::R));
        // one idempotent in total keeps it a block group
        assert!(m.is_block_group());
        assert_eq!(m.idempotents(), alloc::vec![m.identity()]);
    }

    #[test]
    fn j_witness_certificate_multiplies_out() {
        let m = transition_monoid(&even_as(), 16).unwrap();
        let w = m.j_witness().unwrap();
        assert_ne!(w.element_a, w.element_b);
        let (l1, r1) = &w.context_ab;
        assert_eq!(m.sandwich(l1, w.element_a, r1).unwrap(), w.element_b);
        let (l2, r2) = &w.context_ba;
        assert_eq!(m.sandwich(l2, w.element_b, r2).unwrap(), w.element_a);
    }

    #[test]
    fn subword_language_monoid_is_j_trivial() {
        let d = basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap().minimize();
        let m = transition_monoid(&d, 1 << 20).unwrap();
        assert!(m.green_trivial(GreenRel::J));
        assert!(m.j_witness().is_none());
        assert!(m.is_block_group());
    }

    #[test]
    fn right_zero_semigroup_with_identity_is_not_a_block_group() {
        // constant maps c₀, c₁ with an identity adjoined: x·y = y on {c₀,c₁}
        let table = alloc::vec![
            alloc::vec![0usize, 1, 2],
            alloc::vec![1, 1, 2],
            alloc::vec![2, 1, 2],
        ];
        let m = FiniteMonoid::from_table(&table, 0, alloc::vec![('a', 1), ('b', 2)]).unwrap();
        assert_eq!(m.idempotents().len(), 3);
        assert!(!m.is_block_group());
        // the two constants share a one-sided class with two idempotents
        assert!(!m.green_trivial(GreenRel::J));
    }

    #[test]
    fn from_table_validates_structure() {
        // broken associativity / identity
        let bad = alloc::vec![alloc::vec![0usize, 1], alloc::vec![0, 0]];
        assert!(FiniteMonoid::from_table(&bad, 0, alloc::vec![('a', 1)]).is_err());
        // unreachable element
        let unreachable = alloc::vec![
            alloc::vec![0usize, 1, 2],
            alloc::vec![1, 1, 2],
            alloc::vec![2, 2, 2],
        ];
        assert!(FiniteMonoid::from_table(&unreachable, 0, alloc::vec![('a', 1)]).is_err());
    }

    #[test]
    fn scc_classes_agree_with_explicit_ideals() {
        let cases: Vec<FiniteMonoid> = alloc::vec![
            transition_monoid(&contains_a(), 1 << 20).unwrap(),
            transition_monoid(&even_as(), 1 << 20).unwrap(),
            transition_monoid(&basis_dfa(&BasisSeq::parse("aba").unwrap(), &sigma()).unwrap().minimize(), 1 << 20)
                .unwrap(),
            transition_monoid(
                &crate::regex::compile_regex("(ab|ba)*", Some(&sigma())).unwrap(),
                1 << 20,
            )
            .unwrap(),
        ];
        for m in &cases {
            for rel in [GreenRel::L, GreenRel::R, GreenRel::J] {
                assert_eq!(m.green_partition(rel), classes_by_ideals(m, rel), "{rel} on {m:?}");
            }
        }
    }

    #[test]
    fn literal_idempotency_on_dfas() {
        assert!(is_literally_idempotent(&contains_a()));
        assert!(!is_literally_idempotent(&even_as()));
        // Σ*aaΣ*: "aa" is in, "a" is not
        let aa = crate::regex::compile_regex(".*aa.*", Some(&sigma())).unwrap();
        let w = literal_idempotency_witness(&aa).unwrap();
        assert_eq!(w.1, 'a');
        // agreement with idempotency of generator images
        for d in [&contains_a(), &even_as(), &aa] {
            let m = transition_monoid(d, 1 << 20).unwrap();
            let all_gens_idempotent = m.generators().iter().all(|&(_, g)| m.mul(g, g) == g);
            assert_eq!(is_literally_idempotent(d), all_gens_idempotent);
        }
    }

    #[test]
    fn monoid_limit_is_enforced() {
        let d = basis_dfa(&BasisSeq::parse("aba").unwrap(), &sigma()).unwrap();
        assert!(matches!(transition_monoid(&d, 3), Err(Error::MonoidLimitExceeded(3))));
    }
}
