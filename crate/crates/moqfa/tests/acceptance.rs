//! Acceptance suite: one test per criterion, each printing a pass line with
//! the quantities it verified. Run with
//! `cargo test -p moqfa --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;

use moqfa::alphabet::Alphabet;
use moqfa::basis::{build_basis_automaton, BasisSeq};
use moqfa::closure::{
    amplify_tensor, binomial_tail_exact, binomial_tail_f64, complement, convex_sum, linear_representation,
    normalize_cutpoint, tensor_product, to_lqfa,
};
use moqfa::corpus::{language_corpus, random_exact_qfa, random_minimal_dfa, rng_from_seed};
use moqfa::decide::{
    decompose_liidpt, is_lmo, is_piecewise_testable, synthesize, DecideConfig, PtStrategy, SynthesisConfig,
};
use moqfa::dfa::{basis_dfa, Variation};
use moqfa::logic::{compile_fo, compile_ltl, model_check_ltl, parse_formula, Formula, LogicExpr};
use moqfa::monoid::{is_literally_idempotent, transition_monoid, GreenRel};
use moqfa::profile::all_adjacent_distinct;
use moqfa::qfa::MonQfa;
use moqfa::regex::compile_regex;
use moqfa::scalar::{ratio, Exact, ExactReal, Rational};

fn abc() -> Alphabet {
    Alphabet::from_str_letters("abc")
}

fn ab() -> Alphabet {
    Alphabet::from_str_letters("ab")
}

/// All adjacency-valid sequences with 1 ≤ k ≤ 3 over {a,b,c}.
fn basis_sequences() -> Vec<BasisSeq> {
    all_adjacent_distinct(&abc(), 3).into_iter().map(|s| BasisSeq::parse(&s).unwrap()).collect()
}

fn rational(p: &ExactReal) -> Rational {
    p.as_ratio().expect("probability is rational")
}

#[test]
fn criterion_01_basis_automata_recognize_with_claimed_cutpoint() {
    let sigma = abc();
    let seqs = basis_sequences();
    assert_eq!(seqs.len(), 21);
    let mut words_checked = 0usize;
    for seq in &seqs {
        let k = seq.len() as u32;
        let qfa: MonQfa<Exact> = build_basis_automaton(seq, &sigma).unwrap();
        let meta = qfa.meta().unwrap();
        assert_eq!(meta.cutpoint, Rational::new(1, 1 << (2 * k + 1)));
        assert_eq!(meta.isolation, Rational::new(1, 1 << (2 * (k + 1))));
        let bound = Rational::new(1, 1 << (2 * k));
        let probs = qfa.accept_probs_up_to(7).unwrap();
        for (w, p) in probs {
            let p = rational(&p);
            if seq.embeds_in(&w) {
                assert!(p >= bound, "{seq} on {w:?}: p = {p} < 2^-2k");
                // isolated above the cut-point by at least the declared radius
                assert!(p - meta.cutpoint >= meta.isolation, "{seq} on {w:?}");
            } else {
                assert_eq!(p, Rational::new(0, 1), "{seq} on {w:?}: p ≠ 0 off the language");
                assert!(meta.cutpoint - p >= meta.isolation, "{seq} on {w:?}");
            }
            words_checked += 1;
        }
    }
    println!(
        "criterion 01 PASS: {} sequences over abc, {} word evaluations, exact zero/2^-2k split with declared isolation",
        seqs.len(),
        words_checked
    );
}

#[test]
fn criterion_02_branch_sum_equals_density_route() {
    let sigma = abc();
    let mut checked = 0usize;
    for seq in basis_sequences() {
        let qfa: MonQfa<Exact> = build_basis_automaton(&seq, &sigma).unwrap();
        for w in sigma.words_up_to(5) {
            assert_eq!(
                qfa.accept_prob(&w).unwrap(),
                qfa.accept_prob_branches(&w, 1 << 20).unwrap(),
                "{seq} on {w:?}"
            );
            checked += 1;
        }
    }
    let two = ab();
    let mut rng = rng_from_seed(0x71);
    for _ in 0..100 {
        let qfa = random_exact_qfa(&mut rng, 3, &two);
        for w in two.words_up_to(5) {
            assert_eq!(qfa.accept_prob(&w).unwrap(), qfa.accept_prob_branches(&w, 1 << 20).unwrap(), "{w:?}");
            checked += 1;
        }
    }
    println!("criterion 02 PASS: density route = branch sum exactly on {checked} (automaton, word) pairs");
}

#[test]
fn criterion_03_convex_sum_is_affine_exactly() {
    let sigma = ab();
    let a: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse("a").unwrap(), &sigma).unwrap();
    let b: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse("b").unwrap(), &sigma).unwrap();
    let ab_ = build_basis_automaton(&BasisSeq::parse("ab").unwrap(), &sigma).unwrap();
    let mut rng = rng_from_seed(0x72);
    let r1 = random_exact_qfa(&mut rng, 3, &sigma);
    let r2 = random_exact_qfa(&mut rng, 2, &sigma);
    let pairs: Vec<(&MonQfa<Exact>, &MonQfa<Exact>)> = vec![(&a, &b), (&a, &ab_), (&r1, &r2)];
    let weights = [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(1, 1)];
    let mut checked = 0usize;
    for (left, right) in pairs {
        for alpha in weights {
            let beta = ratio(1, 1) - alpha;
            let sum = convex_sum(alpha, left, right).unwrap();
            for w in sigma.words_up_to(5) {
                let lhs = rational(&sum.accept_prob(&w).unwrap());
                let rhs = alpha * rational(&left.accept_prob(&w).unwrap())
                    + beta * rational(&right.accept_prob(&w).unwrap());
                assert_eq!(lhs, rhs, "α={alpha} on {w:?}");
                checked += 1;
            }
        }
    }
    println!("criterion 03 PASS: direct-sum automaton realizes α·p_A + β·p_B exactly ({checked} checks, α ∈ {{0,1/4,1/2,1}})");
}

#[test]
fn criterion_04_tensor_and_complement_materializations() {
    let sigma = ab();
    let a: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse("a").unwrap(), &sigma).unwrap();
    let b: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse("b").unwrap(), &sigma).unwrap();
    let ba = build_basis_automaton(&BasisSeq::parse("ba").unwrap(), &sigma).unwrap();
    let mut rng = rng_from_seed(0x73);
    let r1 = random_exact_qfa(&mut rng, 2, &sigma);
    let r2 = random_exact_qfa(&mut rng, 3, &sigma);
    let mut checked = 0usize;
    for (left, right) in [(&a, &b), (&a, &ba), (&r1, &r2)] {
        let tensor = tensor_product(left, right).unwrap();
        for w in sigma.words_up_to(5) {
            let lhs = tensor.accept_prob(&w).unwrap();
            let rhs = left.accept_prob(&w).unwrap().mul(&right.accept_prob(&w).unwrap());
            assert_eq!(lhs, rhs, "tensor on {w:?}");
            checked += 1;
        }
    }
    for qfa in [&a, &ba, &r2] {
        let comp = complement(qfa).unwrap();
        for w in sigma.words_up_to(5) {
            let lhs = comp.accept_prob(&w).unwrap();
            let rhs = ExactReal::one().sub(&qfa.accept_prob(&w).unwrap());
            assert_eq!(lhs, rhs, "complement on {w:?}");
            checked += 1;
        }
    }
    println!("criterion 04 PASS: tensor = pointwise product and complement = 1 − value, exactly ({checked} checks)");
}

#[test]
fn criterion_05_linear_representation() {
    let sigma = abc();
    let mut automata: Vec<MonQfa<Exact>> =
        basis_sequences().iter().map(|s| build_basis_automaton(s, &sigma).unwrap()).collect();
    let two = ab();
    let mut rng = rng_from_seed(0x74);
    for _ in 0..20 {
        automata.push(random_exact_qfa(&mut rng, 3, &two));
    }
    let mut checked = 0usize;
    for qfa in &automata {
        let rep = linear_representation(qfa).unwrap();
        let m = qfa.dim() as i128;
        assert_eq!(rep.xi.norm_sq(), ExactReal::one(), "‖ξ‖ = 1");
        for (c, p) in &rep.letters {
            assert!(p.is_projector(&ExactReal::zero()).unwrap(), "P({c}) projector");
        }
        assert!(rep.eta.norm_sq() <= ExactReal::from_ratio(ratio(m, 1)), "‖η‖ ≤ √m");
        for w in qfa.alphabet().words_up_to(4) {
            assert_eq!(rep.psi(&w).unwrap(), qfa.accept_prob(&w).unwrap(), "ψ on {w:?}");
            checked += 1;
        }
    }
    println!(
        "criterion 05 PASS: ψ = acceptance probability exactly on {} automata ({checked} words); ‖ξ‖=1, P(c) projectors, ‖η‖ ≤ √m",
        automata.len()
    );
}

#[test]
fn criterion_06_amplification_tail_and_hoeffding() {
    let sigma = ab();
    let a: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse("a").unwrap(), &sigma).unwrap();
    let ab_ = build_basis_automaton(&BasisSeq::parse("ab").unwrap(), &sigma).unwrap();
    let mut exact_checks = 0usize;
    for qfa in [&a, &ab_] {
        let meta = *qfa.meta().unwrap();
        for n in 1..=3u32 {
            let amplified = amplify_tensor(qfa, n, &meta.cutpoint).unwrap();
            for w in sigma.words_up_to(4) {
                let p = rational(&qfa.accept_prob(&w).unwrap());
                let expected = binomial_tail_exact(&p, n, &meta.cutpoint).unwrap();
                assert_eq!(rational(&amplified.accept_prob(&w).unwrap()), expected, "N={n} on {w:?}");
                exact_checks += 1;
            }
        }
    }
    // Hoeffding bound for words below the cut-point gap, on the explicit
    // automata and on wide formula-route amplification
    let mut hoeffding_checks = 0usize;
    for qfa in [&a, &ab_] {
        let meta = *qfa.meta().unwrap();
        let delta = ExactReal::from_ratio(meta.isolation).to_f64();
        for n in [1u32, 2, 3, 50, 200] {
            let bound = (-2.0 * delta * delta * f64::from(n)).exp() + 1e-12;
            for w in sigma.words_up_to(4) {
                let p = rational(&qfa.accept_prob(&w).unwrap());
                if p <= meta.cutpoint - meta.isolation {
                    let amplified = if n <= 3 {
                        ExactReal::from_ratio(
                            rational(&amplify_tensor(qfa, n, &meta.cutpoint).unwrap().accept_prob(&w).unwrap()),
                        )
                        .to_f64()
                    } else {
                        binomial_tail_f64(ExactReal::from_ratio(p).to_f64(), n, &meta.cutpoint)
                    };
                    assert!(amplified <= bound, "N={n} on {w:?}: {amplified} > {bound}");
                    hoeffding_checks += 1;
                }
            }
        }
    }
    println!(
        "criterion 06 PASS: explicit N ≤ 3 amplification = binomial tail exactly ({exact_checks} checks); Hoeffding bound holds ({hoeffding_checks} checks)"
    );
}

#[test]
fn criterion_07_cutpoint_normalization() {
    let sigma = ab();
    let mut checked = 0usize;
    for text in ["a", "ab", "aba"] {
        let qfa: MonQfa<Exact> = build_basis_automaton(&BasisSeq::parse(text).unwrap(), &sigma).unwrap();
        let meta = *qfa.meta().unwrap();
        let normalized = normalize_cutpoint(&qfa).unwrap();
        let new_meta = *normalized.meta().unwrap();
        assert_eq!(new_meta.cutpoint, ratio(1, 2));
        let m = core::cmp::max(meta.cutpoint, ratio(1, 1) - meta.cutpoint);
        let expected_isolation = meta.isolation / (ratio(2, 1) * m);
        assert_eq!(new_meta.isolation, expected_isolation);
        let mut measured: Option<Rational> = None;
        for w in sigma.words_up_to(6) {
            let before = qfa.classify(&meta.cutpoint, &w).unwrap();
            let after = normalized.classify(&ratio(1, 2), &w).unwrap();
            assert_eq!(before, after, "{text} on {w:?}");
            let signed_gap = rational(&normalized.accept_prob(&w).unwrap()) - ratio(1, 2);
            let gap = if signed_gap < ratio(0, 1) { -signed_gap } else { signed_gap };
            measured = Some(measured.map_or(gap, |g| g.min(gap)));
            checked += 1;
        }
        // measured isolation meets the declared radius (exact, so a fortiori
        // within the 1e-12 float slack)
        assert!(measured.unwrap() >= expected_isolation, "{text}: measured {measured:?}");
    }
    println!("criterion 07 PASS: classification preserved and measured isolation ≥ δ/(2·max{{λ,1−λ}}) on {checked} words");
}

#[test]
fn criterion_08_lqfa_embedding_agrees_exactly() {
    let sigma = ab();
    let mut automata: Vec<MonQfa<Exact>> = ["a", "ab", "aba"]
        .iter()
        .map(|t| build_basis_automaton(&BasisSeq::parse(t).unwrap(), &sigma).unwrap())
        .collect();
    let mut rng = rng_from_seed(0x75);
    for _ in 0..5 {
        automata.push(random_exact_qfa(&mut rng, 3, &sigma));
    }
    let mut checked = 0usize;
    for qfa in &automata {
        let lqfa = to_lqfa(qfa);
        for w in sigma.words_up_to(6) {
            assert_eq!(lqfa.accept_prob(&w).unwrap(), qfa.accept_prob(&w).unwrap(), "{w:?}");
            checked += 1;
        }
    }
    println!(
        "criterion 08 PASS: identity-unitary embedding agrees exactly on {} automata × words ≤ 6 ({checked} checks)",
        automata.len()
    );
}

#[test]
fn criterion_09_variation_and_greens_relations_agree() {
    let mut rng = rng_from_seed(0x1905);
    let two = ab();
    let three = abc();
    let mut r_trivial_count = 0usize;
    for case in 0..500 {
        let sigma = if case % 2 == 0 { &two } else { &three };
        let d = random_minimal_dfa(&mut rng, 6, sigma);
        let finite = matches!(d.variation_sup(), Variation::Finite(_));
        let trivial = d.scc_trivial();
        let ordered = d.topo_order_exists();
        let monoid = transition_monoid(&d, 1 << 20).unwrap();
        let r_trivial = monoid.green_trivial(GreenRel::R);
        assert_eq!(finite, trivial, "case {case}: variation vs components");
        assert_eq!(trivial, ordered, "case {case}: components vs state order");
        assert_eq!(ordered, r_trivial, "case {case}: state order vs R-triviality");
        if monoid.is_block_group() && r_trivial {
            assert!(monoid.green_trivial(GreenRel::J), "case {case}: R-trivial block group not J-trivial");
        }
        if monoid.green_trivial(GreenRel::J) {
            assert!(r_trivial && monoid.green_trivial(GreenRel::L), "case {case}: J-trivial but one-sided class non-trivial");
        }
        if r_trivial {
            r_trivial_count += 1;
        }
    }
    println!(
        "criterion 09 PASS: 500 random minimal DFAs, four-way equivalence and block-group implication with zero disagreements ({r_trivial_count} R-trivial instances)"
    );
}

#[test]
fn criterion_10_variation_bound_from_isolation() {
    let sigma = abc();
    for seq in basis_sequences() {
        let k = seq.len() as i128;
        let qfa: MonQfa<Exact> = build_basis_automaton(&seq, &sigma).unwrap();
        let meta = qfa.meta().unwrap();
        let m = ratio(k + 1, 1);
        let bound = m / (meta.isolation * meta.isolation);
        let variation = match basis_dfa(&seq, &sigma).unwrap().minimize().variation_sup() {
            Variation::Finite(v) => ratio(v as i128, 1),
            Variation::Infinite => panic!("{seq}: basis language has finite variation"),
        };
        assert!(variation <= bound, "{seq}: var {variation} > m/δ² = {bound}");
    }
    println!("criterion 10 PASS: sup variation ≤ m/δ² for all 21 basis automata");
}

#[test]
fn criterion_11_decision_corpus_and_synthesis_round_trip() {
    let corpus = language_corpus();
    assert!(corpus.len() >= 30);
    let decide_cfg = DecideConfig::default();
    let mut members = 0usize;
    let mut non_members = 0usize;
    for lang in &corpus {
        let verdict = is_lmo(&lang.dfa, &decide_cfg).unwrap();
        assert_eq!(verdict.member, lang.member, "{}: verdict mismatch", lang.name);

        // pairwise agreement with the direct characterization
        let minimal = lang.dfa.minimize();
        let pt = is_piecewise_testable(&minimal, PtStrategy::Monoid, decide_cfg.monoid_limit).unwrap();
        let pt_graph = is_piecewise_testable(&minimal, PtStrategy::Graph, decide_cfg.monoid_limit).unwrap();
        assert_eq!(pt, pt_graph, "{}: piecewise-testability strategies disagree", lang.name);
        let li = is_literally_idempotent(&minimal);
        assert_eq!(verdict.member, pt && li, "{}: characterization mismatch", lang.name);

        if lang.member {
            members += 1;
            let decomposition = decompose_liidpt(&lang.dfa, &decide_cfg).unwrap();
            let compiled = decomposition.expr.compile(lang.dfa.alphabet()).unwrap();
            assert!(compiled.equivalent(&lang.dfa).unwrap(), "{}: decomposition round trip", lang.name);

            let synthesis = synthesize(&lang.dfa, &SynthesisConfig::default()).unwrap();
            assert!(
                synthesis.measured_isolation >= ExactReal::from_ratio(synthesis.declared_isolation).to_f64(),
                "{}: measured isolation {} below declared",
                lang.name,
                synthesis.measured_isolation
            );
            // the synthesized event object agrees with the language on a word
            // sample (full agreement up to length 8 is verified by synthesize)
            for w in lang.dfa.alphabet().words_up_to(3) {
                let value = synthesis.event.value_f64(&w).unwrap();
                assert_eq!(value > 0.5, lang.dfa.accepts(&w).unwrap(), "{} on {w:?}", lang.name);
            }
            // amplification accounting: declared per-atom error within budget
            let occurrences = synthesis.expr.leaf_occurrences();
            for plan in &synthesis.atoms {
                assert!(
                    plan.epsilon <= 1.0 / (4.0 * occurrences as f64),
                    "{}: ε = {} exceeds 1/(4T)",
                    lang.name,
                    plan.epsilon
                );
            }
        } else {
            non_members += 1;
            assert!(decompose_liidpt(&lang.dfa, &decide_cfg).is_err(), "{}: decompose must reject", lang.name);
            // the verdict's witness reproduces a concrete counterexample
            if let Some(w) = &verdict.literal_witness {
                let (once, twice) = &w.word_pair;
                assert_ne!(
                    lang.dfa.accepts(once).unwrap(),
                    lang.dfa.accepts(twice).unwrap(),
                    "{}: witness words do not separate",
                    lang.name
                );
            } else {
                let witness = verdict.j_witness.as_ref().expect("non-member needs a witness");
                let monoid = transition_monoid(&minimal, decide_cfg.monoid_limit).unwrap();
                let (l1, r1) = &witness.context_ab;
                let (l2, r2) = &witness.context_ba;
                assert_eq!(
                    monoid.sandwich(l1, witness.element_a, r1).unwrap(),
                    witness.element_b,
                    "{}: certificate does not multiply out",
                    lang.name
                );
                assert_eq!(
                    monoid.sandwich(l2, witness.element_b, r2).unwrap(),
                    witness.element_a,
                    "{}: certificate does not multiply out",
                    lang.name
                );
            }
        }
    }
    println!(
        "criterion 11 PASS: {} corpus languages ({members} members round-tripped through synthesis at isolation ≥ 1/4, {non_members} rejected with witnesses)",
        corpus.len()
    );
}

#[test]
fn criterion_12_logic_compilers() {
    let mut fo_checks = 0usize;
    for sigma in [ab(), abc()] {
        for text in all_adjacent_distinct(&sigma, 3) {
            let seq = BasisSeq::parse(&text).unwrap();
            let formula = format!("fo({})", text.chars().map(String::from).collect::<Vec<_>>().join(","));
            let expr = match parse_formula(&formula).unwrap() {
                Formula::Fo(e) => e,
                _ => unreachable!(),
            };
            let compiled = compile_fo(&expr, &sigma).unwrap();
            assert!(compiled.equivalent(&basis_dfa(&seq, &sigma).unwrap()).unwrap(), "fo({text})");
            fo_checks += 1;
        }
    }

    let mut ltl_checks = 0usize;
    let mut model_checks = 0usize;
    for sigma in [ab(), abc()] {
        // all nonempty letter subsets
        let letters: Vec<char> = sigma.iter().collect();
        let mut subsets: Vec<BTreeSet<char>> = Vec::new();
        for mask in 1u32..(1 << letters.len()) {
            subsets.push(
                letters.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect(),
            );
        }
        let words = sigma.words_up_to(8);
        for k in 1..=3usize {
            let mut chains: Vec<Vec<BTreeSet<char>>> = vec![vec![]];
            for _ in 0..k {
                chains = chains
                    .into_iter()
                    .flat_map(|c| {
                        subsets.iter().map(move |s| {
                            let mut v = c.clone();
                            v.push(s.clone());
                            v
                        })
                    })
                    .collect();
            }
            for chain in chains {
                let leaf = moqfa::logic::EasyLtl::new(chain.clone()).unwrap();
                let expr = LogicExpr::Leaf(leaf.clone());
                let compiled = compile_ltl(&expr, &sigma).unwrap();
                // regex oracle: Γ₁*⋯Γ_k*
                let pattern: String = chain
                    .iter()
                    .map(|set| {
                        let letters: Vec<String> = set.iter().map(|c| c.to_string()).collect();
                        format!("({})*", letters.join("|"))
                    })
                    .collect();
                let oracle = compile_regex(&pattern, Some(&sigma)).unwrap();
                assert!(compiled.equivalent(&oracle).unwrap(), "ltl chain {pattern}");
                ltl_checks += 1;
                for w in &words {
                    assert_eq!(
                        model_check_ltl(&leaf, w),
                        compiled.accepts(w).unwrap(),
                        "chain {pattern} on {w:?}"
                    );
                    model_checks += 1;
                }
            }
        }
    }
    println!(
        "criterion 12 PASS: {fo_checks} first-order leaves ≡ basis DFAs; {ltl_checks} until-chains ≡ regex oracle with {model_checks} model-check agreements"
    );
}

#[test]
fn criterion_13_out_of_scope_items_are_substituted() {
    // The quadratic-time bound of the decision procedure relies on an
    // algorithm published elsewhere and is not reproduced; correctness is
    // covered by the monoid/graph strategy agreement in criterion 11. The
    // non-constructive finiteness argument behind regularity is exercised
    // only through its testable consequences: the variation bound
    // (criterion 10) and the equivalences on random DFAs (criterion 09).
    println!("criterion 13 PASS: runtime bound and non-constructive arguments substituted by criteria 09–11");
}
