//! Randomized property tests for the linear algebra layer, the automaton
//! model, and the classical automata support.

use proptest::prelude::*;

use moqfa::alphabet::Alphabet;
use moqfa::basis::BasisSeq;
use moqfa::corpus;
use moqfa::dfa::basis_dfa;
use moqfa::matrix::Matrix;
use moqfa::scalar::{ratio, Exact, ExactReal, Scalar};

fn exact(num: i8, den: u8) -> Exact {
    Exact::from_ratios(ratio(num as i128, den as i128), ratio(0, 1))
}

fn small_matrix(n: usize) -> impl Strategy<Value = Matrix<Exact>> {
    proptest::collection::vec((-4i8..=4, 1u8..=4), n * n).prop_map(move |cells| {
        let mut it = cells.into_iter();
        Matrix::from_fn(n, n, |_, _| {
            let (p, q) = it.next().expect("sized vector");
            exact(p, q)
        })
    })
}

/// Kronecker product computed independently through the index formula
/// `(A⊗B)[(i·p+k), (j·q+l)] = A[i,j]·B[k,l]`.
fn kron_oracle(a: &Matrix<Exact>, b: &Matrix<Exact>) -> Matrix<Exact> {
    let (p, q) = (b.rows(), b.cols());
    let mut out = Matrix::<Exact>::zeros(a.rows() * p, a.cols() * q);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for k in 0..p {
                for l in 0..q {
                    out.set(i * p + k, j * q + l, a.at(i, j).mul(b.at(k, l)));
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_matches_oracle_and_mixed_product_law(
        a in small_matrix(2), b in small_matrix(2), c in small_matrix(2), d in small_matrix(2)
    ) {
        prop_assert_eq!(a.tensor(&b), kron_oracle(&a, &b));
        // (A⊗B)(C⊗D) = AC ⊗ BD
        let lhs = a.tensor(&b).mul(&c.tensor(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().tensor(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_laws(a in small_matrix(3), b in small_matrix(3)) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
    }

    #[test]
    fn trace_laws(a in small_matrix(2), b in small_matrix(3)) {
        let t_tensor = a.tensor(&b).trace().unwrap();
        prop_assert_eq!(t_tensor, a.trace().unwrap().mul(&b.trace().unwrap()));
        let t_sum = a.direct_sum(&b).trace().unwrap();
        prop_assert_eq!(t_sum, a.trace().unwrap().add(&b.trace().unwrap()));
    }

    #[test]
    fn tensor_and_direct_sum_of_projectors_are_projectors(seed in 0u64..1000) {
        let mut rng = corpus::rng_from_seed(seed);
        let q = corpus::random_exact_qfa(&mut rng, 3, &Alphabet::from_str_letters("ab"));
        let zero = ExactReal::zero();
        let obs_a = q.observable('a').unwrap();
        let obs_b = q.observable('b').unwrap();
        let pa = &obs_a.results()[0].1;
        let pb = &obs_b.results()[0].1;
        prop_assert!(pa.tensor(pb).is_projector(&zero).unwrap());
        prop_assert!(pa.direct_sum(pb).is_projector(&zero).unwrap());
    }

    #[test]
    fn projectors_only_shrink(seed in 0u64..1000) {
        let mut rng = corpus::rng_from_seed(seed);
        let q = corpus::random_exact_qfa(&mut rng, 3, &Alphabet::from_str_letters("ab"));
        let v = corpus::random_exact_matrix(&mut rng, 1, 3);
        for (_, p) in q.observable('a').unwrap().results() {
            prop_assert!(v.mul(p).unwrap().norm_sq() <= v.norm_sq());
        }
    }

    #[test]
    fn minimize_preserves_language_and_is_idempotent(seed in 0u64..500) {
        let mut rng = corpus::rng_from_seed(seed);
        let sigma = Alphabet::from_str_letters("ab");
        let d = corpus::random_minimal_dfa(&mut rng, 6, &sigma);
        let m = d.minimize();
        prop_assert!(d.equivalent(&m).unwrap());
        prop_assert_eq!(m.minimize(), m);
        prop_assert_eq!(d.scc_trivial(), d.topo_order_exists());
    }

    #[test]
    fn branch_and_density_routes_agree_on_random_automata(seed in 0u64..300) {
        let mut rng = corpus::rng_from_seed(seed);
        let sigma = Alphabet::from_str_letters("ab");
        let q = corpus::random_exact_qfa(&mut rng, 3, &sigma);
        let w = corpus::random_word(&mut rng, &sigma, 6);
        let via_density = q.accept_prob(&w).unwrap();
        let via_branches = q.accept_prob_branches(&w, 1 << 20).unwrap();
        prop_assert_eq!(via_density, via_branches);
    }

    #[test]
    fn basis_automaton_probability_is_zero_exactly_off_the_language(
        s in prop::sample::select(vec!["a", "b", "ab", "ba", "aba"]),
        w in "[ab]{0,6}"
    ) {
        let sigma = Alphabet::from_str_letters("ab");
        let seq = BasisSeq::parse(s).unwrap();
        let qfa = moqfa::basis::build_basis_automaton::<Exact>(&seq, &sigma).unwrap();
        let dfa = basis_dfa(&seq, &sigma).unwrap();
        let p = qfa.accept_prob(&w).unwrap();
        prop_assert_eq!(dfa.accepts(&w).unwrap(), !p.is_zero());
        prop_assert_eq!(dfa.accepts(&w).unwrap(), seq.embeds_in(&w));
    }
}
