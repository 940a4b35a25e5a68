//! Seeded random generators and fixed language corpora backing the
//! randomized invariant checks (`check-invariants` in the CLI) and the
//! verification suites.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::basis::BasisSeq;
use crate::dfa::{basis_dfa, trivial_dfa, Dfa, Variation};
use crate::matrix::Matrix;
use crate::monoid::{is_literally_idempotent, transition_monoid, GreenRel};
use crate::qfa::{Label, MonQfa, Observable};
use crate::regex::compile_regex;
use crate::scalar::{ratio, Exact, ExactReal, Rational, Scalar};

/// Deterministic RNG for all corpus generation.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// A random total DFA, minimized (so at most `max_states` states remain).
pub fn random_minimal_dfa(rng: &mut ChaCha8Rng, max_states: usize, alphabet: &Alphabet) -> Dfa {
    let n = 2 + uniform(rng, max_states.saturating_sub(1).max(1));
    let n = n.min(max_states);
    let mut transitions = Vec::new();
    for q in 0..n {
        for c in alphabet.iter() {
            transitions.push((q, c, uniform(rng, n)));
        }
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.next_u64() % 2 == 0).collect();
    Dfa::from_transitions(alphabet.clone(), n, &transitions, 0, finals)
        .expect("generated transitions are in range")
        .minimize()
}

/// A random exact complex matrix with small rational entries.
pub fn random_exact_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Exact> {
    Matrix::from_fn(rows, cols, |_, _| {
        let num = uniform(rng, 9) as i128 - 4;
        let den = 1 + uniform(rng, 4) as i128;
        let imn = uniform(rng, 9) as i128 - 4;
        Exact::from_ratios(ratio(num, den), ratio(imn, den))
    })
}

/// Pythagorean plane rotations: exactly unitary with rational entries.
const ROTATIONS: [(i128, i128, i128); 2] = [(3, 4, 5), (5, 12, 13)];

fn rotation_matrix(dim: usize, i: usize, j: usize, which: usize) -> Matrix<Exact> {
    let (a, b, h) = ROTATIONS[which % ROTATIONS.len()];
    let mut m = Matrix::<Exact>::identity(dim);
    m.set_ratio(i, i, ratio(a, h));
    m.set_ratio(i, j, ratio(b, h));
    m.set_ratio(j, i, ratio(-b, h));
    m.set_ratio(j, j, ratio(a, h));
    m
}

/// A random real rational unitary: a single Pythagorean rotation (kept to one
/// factor so that exact densities stay well inside the i128 range).
fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<Exact> {
    if dim < 2 {
        return Matrix::identity(dim);
    }
    let i = uniform(rng, dim);
    let mut j = uniform(rng, dim);
    while j == i {
        j = uniform(rng, dim);
    }
    rotation_matrix(dim, i.min(j), i.max(j), uniform(rng, ROTATIONS.len()))
}

/// A random observable: a partition of the basis indices into diagonal
/// projectors, conjugated by a random rotation.
fn random_observable(rng: &mut ChaCha8Rng, dim: usize) -> Observable<Exact> {
    let groups = 1 + uniform(rng, dim);
    let mut assignment: Vec<usize> = (0..dim).map(|_| uniform(rng, groups)).collect();
    // compact group ids
    let used: BTreeSet<usize> = assignment.iter().copied().collect();
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    for a in &mut assignment {
        *a = remap[a];
    }
    let count = used.len();
    let u = random_rotation(rng, dim);
    let ut = u.adjoint();
    let results: Vec<(Label, Matrix<Exact>)> = (0..count)
        .map(|g| {
            let mut p = Matrix::<Exact>::zeros(dim, dim);
            for (i, &gi) in assignment.iter().enumerate() {
                if gi == g {
                    p.set(i, i, Exact::from_int(1));
                }
            }
            let conjugated = ut.mul(&p).expect("square").mul(&u).expect("square");
            (Label(g as u32), conjugated)
        })
        .collect();
    Observable::new(dim, results, &ExactReal::zero()).expect("conjugated partitions are valid observables")
}

/// A random exact measure-only automaton of the given dimension. The initial
/// state mixes a rotation with a complex unit phase so complex conjugation is
/// exercised end to end.
pub fn random_exact_qfa(rng: &mut ChaCha8Rng, dim: usize, alphabet: &Alphabet) -> MonQfa<Exact> {
    let mut observables = BTreeMap::new();
    for c in alphabet.iter() {
        observables.insert(c, random_observable(rng, dim));
    }
    let end = random_observable(rng, dim);
    let accepting: BTreeSet<Label> = end.labels().filter(|_| rng.next_u64() % 2 == 0).collect();
    let rotation = random_rotation(rng, dim);
    let mut initial = Matrix::<Exact>::basis_row(dim, uniform(rng, dim)).mul(&rotation).expect("row times square");
    // unit complex phase (3+4i)/5 on one coordinate
    let phase_at = uniform(rng, dim);
    let phase = Exact::from_ratios(ratio(3, 5), ratio(4, 5));
    let scaled = initial.at(0, phase_at).mul(&phase);
    initial.set(0, phase_at, scaled);
    MonQfa::new(alphabet.clone(), observables, end, initial, accepting, None, &ExactReal::zero())
        .expect("generated automata are valid")
}

/// A random word of length at most `max_len`.
pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> String {
    let len = uniform(rng, max_len + 1);
    (0..len).map(|_| alphabet.letter(uniform(rng, alphabet.len()))).collect()
}

/// A named language with its expected recognizability verdict.
#[derive(Clone, Debug)]
pub struct CorpusLanguage {
    pub name: String,
    pub dfa: Dfa,
    pub member: bool,
}

fn entry(name: &str, dfa: Dfa, member: bool) -> CorpusLanguage {
    CorpusLanguage { name: String::from(name), dfa, member }
}

/// A fixed corpus of small regular languages with hand-assigned verdicts:
/// basis languages and their boolean combinations are recognizable; languages
/// that distinguish a letter from its square, or whose monoid has a
/// non-trivial J class, are not.
pub fn language_corpus() -> Vec<CorpusLanguage> {
    let ab = Alphabet::from_str_letters("ab");
    let abc = Alphabet::from_str_letters("abc");
    let a_only = Alphabet::from_str_letters("a");
    let seq = |s: &str| BasisSeq::parse(s).expect("valid sequence");
    let basis = |s: &str, sigma: &Alphabet| basis_dfa(&seq(s), sigma).expect("valid basis language");
    let rx = |p: &str, sigma: &Alphabet| compile_regex(p, Some(sigma)).expect("valid pattern");

    let mut out = Vec::new();

    // members over {a, b}
    out.push(entry("L[a]", basis("a", &ab), true));
    out.push(entry("L[b]", basis("b", &ab), true));
    out.push(entry("L[ab]", basis("ab", &ab), true));
    out.push(entry("L[ba]", basis("ba", &ab), true));
    out.push(entry("L[aba]", basis("aba", &ab), true));
    out.push(entry("full", trivial_dfa(&ab, true), true));
    out.push(entry("empty", trivial_dfa(&ab, false), true));
    out.push(entry("!L[a]", basis("a", &ab).complement(), true));
    out.push(entry("a-star", rx("a*", &ab), true));
    out.push(entry("L[a]&L[b]", basis("a", &ab).intersect(&basis("b", &ab)).expect("same alphabet"), true));
    out.push(entry("L[a]|L[b]", basis("a", &ab).union(&basis("b", &ab)).expect("same alphabet"), true));
    out.push(entry("L[ab]-L[ba]", basis("ab", &ab).minus(&basis("ba", &ab)).expect("same alphabet"), true));
    out.push(entry(
        "(L[a]&!L[ab])|L[ba]",
        basis("a", &ab)
            .intersect(&basis("ab", &ab).complement())
            .expect("same alphabet")
            .union(&basis("ba", &ab))
            .expect("same alphabet"),
        true,
    ));
    out.push(entry("a-star-b-star", rx("a*b*", &ab), true));
    out.push(entry("b-star-a-star", rx("b*a*", &ab), true));
    out.push(entry("factor-ab", rx(".*ab.*", &ab), true));
    out.push(entry("L[ab]|L[ba]", basis("ab", &ab).union(&basis("ba", &ab)).expect("same alphabet"), true));
    out.push(entry("L[aba]&!L[bab]", basis("aba", &ab).minus(&basis("bab", &ab)).expect("same alphabet"), true));
    out.push(entry("a-plus", rx("aa*", &a_only), true));

    // members over {a, b, c}
    out.push(entry("L[a]/abc", basis("a", &abc), true));
    out.push(entry("L[ac]/abc", basis("ac", &abc), true));
    out.push(entry("L[cb]/abc", basis("cb", &abc), true));
    out.push(entry("full/abc", trivial_dfa(&abc, true), true));
    out.push(entry("!L[b]/abc", basis("b", &abc).complement(), true));
    out.push(entry(
        "L[a]&L[b]&L[c]/abc",
        basis("a", &abc)
            .intersect(&basis("b", &abc))
            .expect("same alphabet")
            .intersect(&basis("c", &abc))
            .expect("same alphabet"),
        true,
    ));

    // non-members: literal idempotency failures
    out.push(entry("even-a-run", rx("(aa)*", &a_only), false));
    out.push(entry("even-a-run/ab", rx("(aa)*", &ab), false));
    out.push(entry("factor-aa", rx(".*aa.*", &ab), false));
    out.push(entry("factor-bb", rx(".*bb.*", &ab), false));
    out.push(entry("alternating-ab", rx("(ab)*", &ab), false));
    out.push(entry("alternating-ba", rx("(ba)*", &ab), false));
    out.push(entry("a-alternating", rx("a(ba)*", &ab), false));
    out.push(entry("even-length", rx("((a|b)(a|b))*", &ab), false));
    out.push(entry("even-a-count", rx("(b*ab*a)*b*", &ab), false));
    out.push(entry("alternating-abc", rx("(abc)*", &abc), false));

    // non-members: J-triviality failures with idempotent letters
    let ends_a = Dfa::from_transitions(
        ab.clone(),
        2,
        &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 0), (1, 'b', 1)],
        0,
        [0],
    )
    .expect("valid transitions");
    out.push(entry("ends-with-a-or-empty", ends_a, false));
    let ends_b = Dfa::from_transitions(
        ab.clone(),
        2,
        &[(0, 'a', 1), (0, 'b', 0), (1, 'a', 1), (1, 'b', 0)],
        0,
        [0],
    )
    .expect("valid transitions");
    out.push(entry("ends-with-b-or-empty", ends_b, false));

    out
}

/// One named randomized check: how many cases ran and which failed.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome of the randomized invariant suite.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckOutcome>,
}

impl InvariantReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

fn push_failure(failures: &mut Vec<String>, message: String) {
    if failures.len() < 8 {
        failures.push(message);
    }
}

/// Runs the randomized property corpus with a fixed seed: matrix algebra
/// identities, projector contraction, quantum evolution invariants, and the
/// finite-variation/Green's-relation equivalences on random minimal DFAs.
pub fn run_invariants(seed: u64, samples: usize) -> InvariantReport {
    let mut checks = Vec::new();
    let ab = Alphabet::from_str_letters("ab");

    // matrix algebra identities on random exact matrices
    {
        let mut rng = rng_from_seed(seed ^ 0x11);
        let mut failures = Vec::new();
        for case in 0..samples {
            let m = random_exact_matrix(&mut rng, 3, 3);
            let n = random_exact_matrix(&mut rng, 3, 3);
            if m.adjoint().adjoint() != m {
                push_failure(&mut failures, format!("case {case}: (M†)† ≠ M"));
            }
            let mn = m.mul(&n).expect("square");
            if mn.adjoint() != n.adjoint().mul(&m.adjoint()).expect("square") {
                push_failure(&mut failures, format!("case {case}: (MN)† ≠ N†M†"));
            }
            let t1 = m.tensor(&n).trace().expect("square");
            let t2 = m.trace().expect("square").mul(&n.trace().expect("square"));
            if t1 != t2 {
                push_failure(&mut failures, format!("case {case}: Tr(M⊗N) ≠ Tr(M)·Tr(N)"));
            }
            let s1 = m.direct_sum(&n).trace().expect("square");
            let s2 = m.trace().expect("square").add(&n.trace().expect("square"));
            if s1 != s2 {
                push_failure(&mut failures, format!("case {case}: Tr(M⊕N) ≠ Tr(M)+Tr(N)"));
            }
        }
        checks.push(CheckOutcome { name: String::from("matrix adjoint/tensor/trace identities"), cases: samples, failures });
    }

    // projectors only shrink vectors
    {
        let mut rng = rng_from_seed(seed ^ 0x22);
        let mut failures = Vec::new();
        for case in 0..samples {
            let obs = random_observable(&mut rng, 3);
            let v = random_exact_matrix(&mut rng, 1, 3);
            for (label, p) in obs.results() {
                let projected = v.mul(p).expect("dims");
                if !(projected.norm_sq() <= v.norm_sq()) {
                    push_failure(&mut failures, format!("case {case}: ‖vP‖ > ‖v‖ for label {label}"));
                }
            }
        }
        checks.push(CheckOutcome { name: String::from("projector contraction ‖vP‖ ≤ ‖v‖"), cases: samples, failures });
    }

    // quantum evolution invariants on random exact automata
    {
        let mut rng = rng_from_seed(seed ^ 0x33);
        let mut failures = Vec::new();
        for case in 0..samples {
            let qfa = random_exact_qfa(&mut rng, 3, &ab);
            let w = random_word(&mut rng, &ab, 5);
            let density = qfa.density_evolve(&w).expect("known letters");
            if density.0.trace().expect("square").re() != ExactReal::one() {
                push_failure(&mut failures, format!("case {case}: trace not preserved on {w:?}"));
            }
            let p = qfa.accept_prob(&w).expect("known letters");
            let pb = qfa.accept_prob_branches(&w, 1 << 20).expect("within limit");
            if p != pb {
                push_failure(&mut failures, format!("case {case}: density and branch routes differ on {w:?}"));
            }
            if !(p >= ExactReal::zero() && p <= ExactReal::one()) {
                push_failure(&mut failures, format!("case {case}: probability outside [0,1] on {w:?}"));
            }
            // reading a letter twice equals reading it once
            let c = ab.letter(uniform(&mut rng, ab.len()));
            let once = format!("{w}{c}");
            let twice = format!("{w}{c}{c}");
            if qfa.density_evolve(&once).expect("known letters").0
                != qfa.density_evolve(&twice).expect("known letters").0
            {
                push_failure(&mut failures, format!("case {case}: letter repetition changed the state on {w:?}"));
            }
        }
        checks.push(CheckOutcome { name: String::from("density evolution invariants"), cases: samples, failures });
    }

    // finite variation, component structure, state order, and R-triviality
    // agree on random minimal DFAs; block-group ∧ R-trivial ⇒ J-trivial;
    // J-trivial ⇒ R-trivial ∧ L-trivial; literal idempotency matches
    // idempotent generators
    {
        let mut rng = rng_from_seed(seed ^ 0x44);
        let mut failures = Vec::new();
        let abc = Alphabet::from_str_letters("abc");
        for case in 0..samples {
            let sigma = if case % 2 == 0 { &ab } else { &abc };
            let d = random_minimal_dfa(&mut rng, 6, sigma);
            let finite = matches!(d.variation_sup(), Variation::Finite(_));
            let trivial = d.scc_trivial();
            let ordered = d.topo_order_exists();
            let monoid = match transition_monoid(&d, 1 << 20) {
                Ok(m) => m,
                Err(e) => {
                    push_failure(&mut failures, format!("case {case}: monoid overflow: {e}"));
                    continue;
                }
            };
            let r_trivial = monoid.green_trivial(GreenRel::R);
            if !(finite == trivial && trivial == ordered && ordered == r_trivial) {
                push_failure(
                    &mut failures,
                    format!("case {case}: variation/components/order/R-triviality disagree ({finite},{trivial},{ordered},{r_trivial})"),
                );
            }
            let j_trivial = monoid.green_trivial(GreenRel::J);
            if monoid.is_block_group() && r_trivial && !j_trivial {
                push_failure(&mut failures, format!("case {case}: R-trivial block group is not J-trivial"));
            }
            if j_trivial && !(r_trivial && monoid.green_trivial(GreenRel::L)) {
                push_failure(&mut failures, format!("case {case}: J-trivial but one-sided relation non-trivial"));
            }
            let li = is_literally_idempotent(&d);
            let gens_idempotent =
                monoid.generators().iter().all(|&(_, g)| monoid.mul(g, g) == g);
            if li != gens_idempotent {
                push_failure(&mut failures, format!("case {case}: literal idempotency mismatch"));
            }
        }
        checks.push(CheckOutcome {
            name: String::from("variation/Green's relation equivalences on random minimal DFAs"),
            cases: samples,
            failures,
        });
    }

    InvariantReport { seed, samples, checks }
}

/// Convenience: the rational `p/q` as an exact probability.
pub fn exact_prob(p: i128, q: i128) -> Rational {
    ratio(p, q)
}
