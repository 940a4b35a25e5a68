//! Deciding recognizability by measure-only automata with isolated cut-point,
//! and the constructive round-trip: decompose a recognizable language into
//! basis languages and synthesize a recognizing event with cut-point 1/2.
//!
//! A regular language is recognizable exactly when its syntactic monoid is
//! J-trivial and every letter acts idempotently — equivalently, when the
//! language is a boolean combination of the subword-pattern languages
//! `Σ*a₁Σ*⋯Σ*a_kΣ*` with adjacent-distinct letters.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::alphabet::Alphabet;
use crate::basis::BasisSeq;
use crate::dfa::{basis_dfa, trivial_dfa, Dfa};
use crate::error::{Error, Result};
use crate::event::Event;
use crate::monoid::{literal_idempotency_witness, transition_monoid, GreenRel, JWitness};
use crate::profile::ProfileMachine;
use crate::qfa::Meta;
use crate::scalar::Rational;

/// Limits for the decision pipeline.
#[derive(Clone, Copy, Debug)]
pub struct DecideConfig {
    /// Cap on transition monoid size.
    pub monoid_limit: usize,
    /// Largest profile width tried during decomposition.
    pub max_profile_width: usize,
    /// Cap on profile machine states.
    pub profile_state_limit: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig { monoid_limit: 1 << 20, max_profile_width: 6, profile_state_limit: 1 << 16 }
    }
}

/// A literal-idempotency violation: reading `letter` twice from `state`
/// differs from reading it once, witnessed by a concrete word pair of which
/// exactly one is in the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralWitness {
    pub state: usize,
    pub letter: char,
    /// `(x·a·y, x·a·a·y)` with exactly one of the two accepted.
    pub word_pair: (String, String),
}

/// Verdict of the membership decision, with witnesses for violated
/// conditions. `member` holds exactly when both witnesses are absent.
#[derive(Clone, Debug)]
pub struct LmoVerdict {
    pub member: bool,
    pub literal_witness: Option<LiteralWitness>,
    pub j_witness: Option<JWitness>,
}

fn build_literal_witness(minimal: &Dfa, state: usize, letter: char) -> LiteralWitness {
    let access = minimal.access_words()[state].clone().unwrap_or_default();
    let p = minimal.step(state, letter).expect("letter comes from the alphabet");
    let r = minimal.step(p, letter).expect("letter comes from the alphabet");
    let suffix = minimal.distinguishing_suffix(p, r).unwrap_or_default();
    let once = format!("{access}{letter}{suffix}");
    let twice = format!("{access}{letter}{letter}{suffix}");
    LiteralWitness { state, letter, word_pair: (once, twice) }
}

/// Decides whether the language of `d` is recognized by some measure-only
/// automaton with isolated cut-point: the minimal DFA must act idempotently
/// letter by letter and have a J-trivial transition monoid.
pub fn is_lmo(d: &Dfa, cfg: &DecideConfig) -> Result<LmoVerdict> {
    let minimal = d.minimize();
    let literal_witness =
        literal_idempotency_witness(&minimal).map(|(q, c)| build_literal_witness(&minimal, q, c));
    let j_witness = match transition_monoid(&minimal, cfg.monoid_limit) {
        Ok(monoid) => monoid.j_witness(),
        // a violated literal condition already decides non-membership
        Err(_) if literal_witness.is_some() => None,
        Err(e) => return Err(e),
    };
    Ok(LmoVerdict { member: literal_witness.is_none() && j_witness.is_none(), literal_witness, j_witness })
}

/// Strategy for the piecewise-testability check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PtStrategy {
    /// J-triviality of the transition monoid; the reference implementation.
    Monoid,
    /// Graph route: trivial components of the minimal DFAs of the language
    /// and of its reversal. R-triviality is equivalent to trivial components,
    /// L-triviality of a monoid is R-triviality of its opposite (the reversal
    /// language's monoid), and in a finite monoid J = R∘L, so J-triviality is
    /// exactly the conjunction.
    Graph,
}

/// Piecewise testability of the language of a minimal DFA.
pub fn is_piecewise_testable(minimal: &Dfa, strategy: PtStrategy, monoid_limit: usize) -> Result<bool> {
    match strategy {
        PtStrategy::Monoid => Ok(transition_monoid(minimal, monoid_limit)?.green_trivial(GreenRel::J)),
        PtStrategy::Graph => Ok(minimal.scc_trivial() && minimal.reverse().scc_trivial()),
    }
}

/// Boolean expression over basis sequences.
#[derive(Clone, PartialEq, Eq)]
pub enum BasisBoolExpr {
    Const(bool),
    Leaf(BasisSeq),
    Not(Box<BasisBoolExpr>),
    And(Box<BasisBoolExpr>, Box<BasisBoolExpr>),
    Or(Box<BasisBoolExpr>, Box<BasisBoolExpr>),
}

impl fmt::Debug for BasisBoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BasisBoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisBoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BasisBoolExpr::Leaf(s) => write!(f, "L[{}]", s),
            BasisBoolExpr::Not(e) => write!(f, "!{}", e),
            BasisBoolExpr::And(l, r) => write!(f, "({} & {})", l, r),
            BasisBoolExpr::Or(l, r) => write!(f, "({} | {})", l, r),
        }
    }
}

impl BasisBoolExpr {
    pub fn and_all(terms: Vec<BasisBoolExpr>) -> BasisBoolExpr {
        terms
            .into_iter()
            .reduce(|l, r| BasisBoolExpr::And(Box::new(l), Box::new(r)))
            .unwrap_or(BasisBoolExpr::Const(true))
    }

    pub fn or_all(terms: Vec<BasisBoolExpr>) -> BasisBoolExpr {
        terms
            .into_iter()
            .reduce(|l, r| BasisBoolExpr::Or(Box::new(l), Box::new(r)))
            .unwrap_or(BasisBoolExpr::Const(false))
    }

    /// Number of basis leaves, counting repeated occurrences.
    pub fn leaf_occurrences(&self) -> usize {
        match self {
            BasisBoolExpr::Const(_) => 0,
            BasisBoolExpr::Leaf(_) => 1,
            BasisBoolExpr::Not(e) => e.leaf_occurrences(),
            BasisBoolExpr::And(l, r) | BasisBoolExpr::Or(l, r) => l.leaf_occurrences() + r.leaf_occurrences(),
        }
    }

    /// The distinct basis sequences appearing as leaves.
    pub fn leaves(&self) -> BTreeSet<BasisSeq> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut BTreeSet<BasisSeq>) {
        match self {
            BasisBoolExpr::Const(_) => {}
            BasisBoolExpr::Leaf(s) => {
                out.insert(s.clone());
            }
            BasisBoolExpr::Not(e) => e.collect_leaves(out),
            BasisBoolExpr::And(l, r) | BasisBoolExpr::Or(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Compiles the expression to a DFA through the basis automata and the
    /// boolean product constructions, minimizing at each step.
    pub fn compile(&self, alphabet: &Alphabet) -> Result<Dfa> {
        Ok(match self {
            BasisBoolExpr::Const(b) => trivial_dfa(alphabet, *b),
            BasisBoolExpr::Leaf(s) => basis_dfa(s, alphabet)?,
            BasisBoolExpr::Not(e) => e.compile(alphabet)?.complement().minimize(),
            BasisBoolExpr::And(l, r) => l.compile(alphabet)?.intersect(&r.compile(alphabet)?)?.minimize(),
            BasisBoolExpr::Or(l, r) => l.compile(alphabet)?.union(&r.compile(alphabet)?)?.minimize(),
        })
    }

    /// Truth value under a leaf assignment.
    pub fn eval(&self, assignment: &dyn Fn(&BasisSeq) -> bool) -> bool {
        match self {
            BasisBoolExpr::Const(b) => *b,
            BasisBoolExpr::Leaf(s) => assignment(s),
            BasisBoolExpr::Not(e) => !e.eval(assignment),
            BasisBoolExpr::And(l, r) => l.eval(assignment) && r.eval(assignment),
            BasisBoolExpr::Or(l, r) => l.eval(assignment) || r.eval(assignment),
        }
    }
}

/// Result of decomposing a recognizable language into basis languages.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub expr: BasisBoolExpr,
    /// Least profile width that separates the language (0 for `Σ*` and `∅`).
    pub profile_width: usize,
}

/// Decomposes the language of `d` into a boolean combination of basis
/// languages: the least profile width whose subword profiles determine
/// membership yields, for each accepting profile, the conjunction asserting
/// exactly that profile. The compiled expression is verified equivalent to
/// `d` before returning. Requires `is_lmo(d)` to hold.
pub fn decompose_liidpt(d: &Dfa, cfg: &DecideConfig) -> Result<Decomposition> {
    let verdict = is_lmo(d, cfg)?;
    if !verdict.member {
        return Err(Error::NotLmoMember);
    }
    decompose_unchecked(d, cfg)
}

fn decompose_unchecked(d: &Dfa, cfg: &DecideConfig) -> Result<Decomposition> {
    let minimal = d.minimize();
    let alphabet = minimal.alphabet().clone();
    if minimal.state_count() == 1 {
        let expr = BasisBoolExpr::Const(minimal.is_final(0));
        return Ok(Decomposition { expr, profile_width: 0 });
    }
    for width in 1..=cfg.max_profile_width {
        let machine = ProfileMachine::build(&alphabet, width, cfg.profile_state_limit)?;
        if let Some(accepting_profiles) = profile_separation(&minimal, &machine) {
            let all_seqs = machine.all_sequences();
            let mut clauses = Vec::new();
            for profile_state in accepting_profiles {
                let profile = machine.profile(profile_state);
                let mut terms = Vec::new();
                for s in &all_seqs {
                    let leaf = BasisBoolExpr::Leaf(BasisSeq::parse(s)?);
                    if profile.contains(s) {
                        terms.push(leaf);
                    } else {
                        terms.push(BasisBoolExpr::Not(Box::new(leaf)));
                    }
                }
                clauses.push(BasisBoolExpr::and_all(terms));
            }
            let expr = BasisBoolExpr::or_all(clauses);
            let compiled = expr.compile(&alphabet)?;
            if !compiled.equivalent(&minimal)? {
                return Err(Error::SynthesisFailed(String::from(
                    "decomposed expression is not equivalent to the input",
                )));
            }
            return Ok(Decomposition { expr, profile_width: width });
        }
    }
    Err(Error::ProfileWidthExceeded(cfg.max_profile_width))
}

/// Runs the product of `d` with the profile machine; when every reachable
/// product state's acceptance depends only on the profile component, returns
/// the accepting profile states.
fn profile_separation(d: &Dfa, machine: &ProfileMachine) -> Option<Vec<usize>> {
    let k = d.alphabet().len();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut verdict: BTreeMap<usize, bool> = BTreeMap::new();
    let start = (d.initial(), machine.initial());
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    while let Some((q, p)) = queue.pop_front() {
        let acc = d.is_final(q);
        match verdict.get(&p) {
            Some(&prev) if prev != acc => return None,
            None => {
                verdict.insert(p, acc);
            }
            _ => {}
        }
        for i in 0..k {
            let next = (d.step_idx(q, i), machine.step_idx(p, i));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Some(verdict.iter().filter(|(_, &acc)| acc).map(|(&p, _)| p).collect())
}

/// Per-atom amplification plan chosen by the synthesis error budget.
#[derive(Clone, Debug)]
pub struct AtomPlan {
    pub seq: BasisSeq,
    /// Tensor copies `N`.
    pub copies: u32,
    /// Amplification threshold, the atom's cut-point.
    pub threshold: Rational,
    /// Declared per-atom error `e^(−2δ²N)`, with `δ` the atom's isolation.
    pub epsilon: f64,
}

/// Synthesis settings.
#[derive(Clone, Copy, Debug)]
pub struct SynthesisConfig {
    pub decide: DecideConfig,
    /// Words up to this length are enumerated for verification.
    pub check_len: usize,
    /// Amplification escalation attempts when verification fails.
    pub max_retries: u32,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig { decide: DecideConfig::default(), check_len: 8, max_retries: 3 }
    }
}

/// A synthesized recognizer: the event, its provenance, and the measured
/// quality of the cut-point 1/2 classification.
#[derive(Debug)]
pub struct Synthesis {
    pub event: Event<crate::scalar::Exact>,
    pub expr: BasisBoolExpr,
    pub profile_width: usize,
    pub cutpoint: Rational,
    pub declared_isolation: Rational,
    /// Smallest observed `|value − 1/2|` over all checked words.
    pub measured_isolation: f64,
    pub check_len: usize,
    pub atoms: Vec<AtomPlan>,
}

/// Synthesizes an event recognizing the language of `d` with cut-point 1/2.
///
/// Each basis leaf is amplified until its value is within `ε = 1/(8T)` of the
/// language's characteristic function (`T` = leaf occurrences), so the boolean
/// combination — products for conjunction, `1−x` for negation, De Morgan for
/// union — stays within 1/8 of {0,1} and the cut-point 1/2 is isolated by at
/// least the declared 1/4. The event is verified against `d` on every word up
/// to the configured length; amplification is doubled and retried if the
/// budget is ever violated.
pub fn synthesize(d: &Dfa, cfg: &SynthesisConfig) -> Result<Synthesis> {
    let verdict = is_lmo(d, &cfg.decide)?;
    if !verdict.member {
        return Err(Error::NotLmoMember);
    }
    let minimal = d.minimize();
    let alphabet = minimal.alphabet().clone();
    let decomposition = decompose_unchecked(&minimal, &cfg.decide)?;
    let expr = &decomposition.expr;

    let leaf_occurrences = expr.leaf_occurrences();
    if leaf_occurrences == 0 {
        // constant language: the constant event has isolation 1/2
        let value = expr.eval(&|_| false);
        let mut event = Event::constant(&alphabet, value);
        event.set_meta(Some(Meta { cutpoint: Rational::new(1, 2), isolation: Rational::new(1, 2) }));
        return Ok(Synthesis {
            event,
            expr: expr.clone(),
            profile_width: decomposition.profile_width,
            cutpoint: Rational::new(1, 2),
            declared_isolation: Rational::new(1, 2),
            measured_isolation: 0.5,
            check_len: cfg.check_len,
            atoms: Vec::new(),
        });
    }

    let eps_target = 1.0 / (8.0 * leaf_occurrences as f64);
    let mut escalation = 1u32;
    let mut last_error = String::new();
    for _attempt in 0..=cfg.max_retries {
        let mut plans: BTreeMap<BasisSeq, AtomPlan> = BTreeMap::new();
        for seq in expr.leaves() {
            let k = seq.len() as u32;
            let threshold = Rational::new(1, 1 << (2 * k + 1));
            let isolation = 1.0 / Float::powi(2.0, 2 * (k as i32 + 1));
            let copies_f = Float::ln(1.0 / eps_target) / (2.0 * isolation * isolation);
            let copies = (Float::ceil(copies_f) as u32).max(1) * escalation;
            let epsilon = Float::exp(-2.0 * isolation * isolation * f64::from(copies));
            plans.insert(seq.clone(), AtomPlan { seq, copies, threshold, epsilon });
        }

        let (event, _) = build_event(expr, &alphabet, &plans)?;

        // per-word atom values shared across leaf occurrences; the numeric
        // combination below performs exactly the operations of the event tree
        let mut amplified: BTreeMap<BasisSeq, BTreeMap<String, f64>> = BTreeMap::new();
        for (seq, plan) in &plans {
            let atom = crate::basis::build_basis_automaton::<crate::scalar::Exact>(seq, &alphabet)?;
            let probs = atom.accept_probs_up_to(cfg.check_len)?;
            let mut tail_cache: BTreeMap<Rational, f64> = BTreeMap::new();
            let mut values = BTreeMap::new();
            for (w, p) in probs {
                let p = p.as_ratio().ok_or(Error::ExactUnsupported("irrational basis probability"))?;
                let tail = *tail_cache.entry(p).or_insert_with(|| {
                    crate::closure::binomial_tail_f64(
                        p.to_f64_lossy(),
                        plan.copies,
                        &plan.threshold,
                    )
                });
                values.insert(w, tail);
            }
            amplified.insert(seq.clone(), values);
        }

        let mut measured: f64 = 0.5;
        let mut ok = true;
        let mut failure = String::new();
        for w in alphabet.words_up_to(cfg.check_len) {
            let value = eval_expr_numeric(expr, &|s| amplified[s][&w]);
            let expected = minimal.accepts(&w)?;
            let classified = value > 0.5;
            let gap = Float::abs(value - 0.5);
            if classified != expected || gap < 0.25 {
                ok = false;
                failure = format!("word {w:?}: value {value}, expected member {expected}");
                break;
            }
            measured = measured.min(gap);
        }
        if ok {
            let mut event = event;
            event.set_meta(Some(Meta { cutpoint: Rational::new(1, 2), isolation: Rational::new(1, 4) }));
            return Ok(Synthesis {
                event,
                expr: expr.clone(),
                profile_width: decomposition.profile_width,
                cutpoint: Rational::new(1, 2),
                declared_isolation: Rational::new(1, 4),
                measured_isolation: measured,
                check_len: cfg.check_len,
                atoms: plans.into_values().collect(),
            });
        }
        last_error = failure;
        escalation *= 2;
    }
    Err(Error::SynthesisFailed(last_error))
}

/// Maps the boolean expression to an event: conjunction as Hadamard product,
/// negation as f-complement, union by De Morgan.
fn build_event(
    expr: &BasisBoolExpr,
    alphabet: &Alphabet,
    plans: &BTreeMap<BasisSeq, AtomPlan>,
) -> Result<(Event<crate::scalar::Exact>, usize)> {
    Ok(match expr {
        BasisBoolExpr::Const(b) => (Event::constant(alphabet, *b), 0),
        BasisBoolExpr::Leaf(seq) => {
            let plan = &plans[seq];
            let atom = Event::basis(seq, alphabet)?;
            (Event::amplify(atom, plan.copies, plan.threshold)?, 1)
        }
        BasisBoolExpr::Not(e) => {
            let (inner, n) = build_event(e, alphabet, plans)?;
            (Event::f_complement(inner)?, n)
        }
        BasisBoolExpr::And(l, r) => {
            let (le, nl) = build_event(l, alphabet, plans)?;
            let (re, nr) = build_event(r, alphabet, plans)?;
            (Event::hadamard(le, re)?, nl + nr)
        }
        BasisBoolExpr::Or(l, r) => {
            let (le, nl) = build_event(l, alphabet, plans)?;
            let (re, nr) = build_event(r, alphabet, plans)?;
            let not_l = Event::f_complement(le)?;
            let not_r = Event::f_complement(re)?;
            (Event::f_complement(Event::hadamard(not_l, not_r)?)?, nl + nr)
        }
    })
}

/// Numeric evaluation matching [`build_event`] operation for operation.
fn eval_expr_numeric(expr: &BasisBoolExpr, leaf: &dyn Fn(&BasisSeq) -> f64) -> f64 {
    match expr {
        BasisBoolExpr::Const(b) => f64::from(u8::from(*b)),
        BasisBoolExpr::Leaf(s) => leaf(s),
        BasisBoolExpr::Not(e) => 1.0 - eval_expr_numeric(e, leaf),
        BasisBoolExpr::And(l, r) => eval_expr_numeric(l, leaf) * eval_expr_numeric(r, leaf),
        BasisBoolExpr::Or(l, r) => {
            1.0 - (1.0 - eval_expr_numeric(l, leaf)) * (1.0 - eval_expr_numeric(r, leaf))
        }
    }
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for Rational {
    fn to_f64_lossy(&self) -> f64 {
        crate::scalar::ExactReal::from_ratio(*self).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::compile_regex;

    fn sigma() -> Alphabet {
        Alphabet::from_str_letters("ab")
    }

    fn cfg() -> DecideConfig {
        DecideConfig::default()
    }

    #[test]
    fn basis_language_is_member() {
        let d = basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap();
        let v = is_lmo(&d, &cfg()).unwrap();
        assert!(v.member);
        assert!(v.literal_witness.is_none());
        assert!(v.j_witness.is_none());
    }

    #[test]
    fn even_length_blocks_on_literal_idempotency() {
        let d = compile_regex("(aa)*", None).unwrap();
        let v = is_lmo(&d, &cfg()).unwrap();
        assert!(!v.member);
        let w = v.literal_witness.unwrap();
        assert_eq!(w.letter, 'a');
        // the word pair is a concrete counterexample
        let (once, twice) = &w.word_pair;
        assert_ne!(d.accepts(once).unwrap(), d.accepts(twice).unwrap());
    }

    #[test]
    fn double_letter_factor_blocks_on_literal_idempotency() {
        let d = compile_regex(".*aa.*", Some(&sigma())).unwrap();
        let v = is_lmo(&d, &cfg()).unwrap();
        assert!(!v.member);
        let w = v.literal_witness.unwrap();
        let (once, twice) = &w.word_pair;
        assert_ne!(d.accepts(once).unwrap(), d.accepts(twice).unwrap());
    }

    #[test]
    fn ends_with_a_blocks_on_j_triviality() {
        // ε ∪ Σ*a: letters act idempotently but the monoid has a nontrivial
        // J class (two right-zero constants)
        let d = Dfa::from_transitions(sigma(), 2, &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 0), (1, 'b', 1)], 0, [0])
            .unwrap();
        let v = is_lmo(&d, &cfg()).unwrap();
        assert!(!v.member);
        assert!(v.literal_witness.is_none());
        let w = v.j_witness.unwrap();
        assert_ne!(w.element_a, w.element_b);
    }

    #[test]
    fn pt_strategies_agree() {
        let cases = [
            compile_regex("(aa)*", None).unwrap(),
            compile_regex("(ab)*", Some(&sigma())).unwrap(),
            basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap(),
            compile_regex(".*aa.*", Some(&sigma())).unwrap(),
            compile_regex("a*b*", Some(&sigma())).unwrap(),
        ];
        for d in &cases {
            let m = d.minimize();
            let via_monoid = is_piecewise_testable(&m, PtStrategy::Monoid, 1 << 20).unwrap();
            let via_graph = is_piecewise_testable(&m, PtStrategy::Graph, 1 << 20).unwrap();
            assert_eq!(via_monoid, via_graph, "{m:?}");
        }
        let ab = basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap().minimize();
        assert!(is_piecewise_testable(&ab, PtStrategy::Monoid, 1 << 20).unwrap());
        let even = compile_regex("(aa)*", None).unwrap();
        assert!(!is_piecewise_testable(&even, PtStrategy::Monoid, 1 << 20).unwrap());
        let abstar = compile_regex("(ab)*", Some(&sigma())).unwrap();
        assert!(!is_piecewise_testable(&abstar, PtStrategy::Monoid, 1 << 20).unwrap());
    }

    #[test]
    fn decompose_round_trips_simple_languages() {
        let a = basis_dfa(&BasisSeq::parse("a").unwrap(), &sigma()).unwrap();
        let d = decompose_liidpt(&a, &cfg()).unwrap();
        assert_eq!(d.profile_width, 1);
        assert!(d.expr.compile(&sigma()).unwrap().equivalent(&a).unwrap());

        let not_a = a.complement();
        let d = decompose_liidpt(&not_a, &cfg()).unwrap();
        assert!(d.expr.compile(&sigma()).unwrap().equivalent(&not_a).unwrap());

        let ab = basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap();
        let ba = basis_dfa(&BasisSeq::parse("ba").unwrap(), &sigma()).unwrap();
        let mix = ab.minus(&ba).unwrap();
        let d = decompose_liidpt(&mix, &cfg()).unwrap();
        assert!(d.expr.compile(&sigma()).unwrap().equivalent(&mix).unwrap());
    }

    #[test]
    fn decompose_constant_languages_need_no_profiles() {
        let all = trivial_dfa(&sigma(), true);
        let d = decompose_liidpt(&all, &cfg()).unwrap();
        assert_eq!(d.profile_width, 0);
        assert_eq!(d.expr, BasisBoolExpr::Const(true));
        let none = trivial_dfa(&sigma(), false);
        let d = decompose_liidpt(&none, &cfg()).unwrap();
        assert_eq!(d.expr, BasisBoolExpr::Const(false));
    }

    #[test]
    fn decompose_rejects_non_members() {
        let d = compile_regex("(aa)*", None).unwrap();
        assert!(matches!(decompose_liidpt(&d, &cfg()), Err(Error::NotLmoMember)));
    }

    #[test]
    fn synthesize_basis_language() {
        let a = basis_dfa(&BasisSeq::parse("a").unwrap(), &sigma()).unwrap();
        let s = synthesize(&a, &SynthesisConfig { check_len: 8, ..Default::default() }).unwrap();
        assert_eq!(s.cutpoint, Rational::new(1, 2));
        assert!(s.measured_isolation >= 0.25);
        // the returned event object itself classifies correctly
        for w in sigma().words_up_to(8) {
            let v = s.event.value_f64(&w).unwrap();
            assert_eq!(v > 0.5, a.accepts(&w).unwrap(), "word {w:?} value {v}");
            assert!(Float::abs(v - 0.5) + 1e-12 >= s.measured_isolation);
        }
        // Hoeffding accounting: declared ε per atom is within budget
        let t = s.expr.leaf_occurrences() as f64;
        for plan in &s.atoms {
            assert!(plan.epsilon <= 1.0 / (8.0 * t) + 1e-15);
        }
    }

    #[test]
    fn synthesize_constant_language() {
        let all = trivial_dfa(&sigma(), true);
        let s = synthesize(&all, &SynthesisConfig::default()).unwrap();
        assert_eq!(s.declared_isolation, Rational::new(1, 2));
        assert_eq!(s.event.value("abab").unwrap(), crate::scalar::ExactReal::one());
    }

    #[test]
    fn synthesize_union_language() {
        let ab = basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma()).unwrap();
        let ba = basis_dfa(&BasisSeq::parse("ba").unwrap(), &sigma()).unwrap();
        let union = ab.union(&ba).unwrap();
        let s = synthesize(&union, &SynthesisConfig { check_len: 6, ..Default::default() }).unwrap();
        assert!(s.measured_isolation >= 0.25);
        for w in ["", "a", "ab", "ba", "bab", "aabb"] {
            assert_eq!(s.event.value_f64(w).unwrap() > 0.5, union.accepts(w).unwrap(), "word {w:?}");
        }
    }

    #[test]
    fn synthesize_rejects_non_members() {
        let d = compile_regex("(ab)*", Some(&sigma())).unwrap();
        assert!(matches!(synthesize(&d, &SynthesisConfig::default()), Err(Error::NotLmoMember)));
    }
}
