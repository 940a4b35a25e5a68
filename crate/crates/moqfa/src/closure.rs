//! Closure constructions on measure-only automata: tensor products
//! (pointwise event products), acceptance complements, convex combinations,
//! majority amplification, the flattened linear representation, cut-point
//! normalization, and the embedding into Latvian automata.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_traits::{CheckedAdd, CheckedMul, Float, Signed, Zero};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qfa::{Label, Lqfa, Meta, MonQfa, Observable, Prob};
use crate::scalar::{Rational, Scalar};

fn check_same_alphabet<T: Scalar>(a: &MonQfa<T>, b: &MonQfa<T>) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Tensors two observables; labels become pair positions `i·k_b + j`.
fn tensor_observable<T: Scalar>(a: &Observable<T>, b: &Observable<T>) -> Result<Observable<T>> {
    let dim = a.dim() * b.dim();
    let kb = b.result_count() as u32;
    let mut results = Vec::with_capacity(a.result_count() * b.result_count());
    for (i, (_, p)) in a.results().iter().enumerate() {
        for (j, (_, q)) in b.results().iter().enumerate() {
            results.push((Label(i as u32 * kb + j as u32), p.tensor(q)));
        }
    }
    Observable::new(dim, results, &T::default_tol())
}

/// Tensor product automaton: observables `O_c ⊗ O'_c`, initial `π ⊗ π'`,
/// accepting pairs `F × F'`. Its acceptance probability is the product of the
/// factors' probabilities.
pub fn tensor_product<T: Scalar>(a: &MonQfa<T>, b: &MonQfa<T>) -> Result<MonQfa<T>> {
    check_same_alphabet(a, b)?;
    let mut observables = BTreeMap::new();
    for c in a.alphabet().iter() {
        observables.insert(c, tensor_observable(a.observable(c)?, b.observable(c)?)?);
    }
    let end = tensor_observable(a.end_marker(), b.end_marker())?;
    let kb = b.end_marker().result_count() as u32;
    let mut accepting = BTreeSet::new();
    for (i, (la, _)) in a.end_marker().results().iter().enumerate() {
        for (j, (lb, _)) in b.end_marker().results().iter().enumerate() {
            if a.accepting().contains(la) && b.accepting().contains(lb) {
                accepting.insert(Label(i as u32 * kb + j as u32));
            }
        }
    }
    let initial = a.initial().tensor(b.initial());
    MonQfa::new(a.alphabet().clone(), observables, end, initial, accepting, None, &T::default_tol())
}

/// Complement automaton: identical parts, accepting set flipped to
/// `V(O_#) ∖ F`; its acceptance probability is `1 − p_A`.
pub fn complement<T: Scalar>(a: &MonQfa<T>) -> Result<MonQfa<T>> {
    let accepting: BTreeSet<Label> = a.end_marker().labels().filter(|l| !a.accepting().contains(l)).collect();
    MonQfa::new(
        a.alphabet().clone(),
        a.observables().clone(),
        a.end_marker().clone(),
        a.initial().clone(),
        accepting,
        None,
        &T::default_tol(),
    )
}

/// Block-sums two observables; left labels keep their position, right labels
/// are offset past them, so the two spectra stay disjoint.
fn direct_sum_observable<T: Scalar>(a: &Observable<T>, b: &Observable<T>) -> Result<Observable<T>> {
    let dim = a.dim() + b.dim();
    let zero_a = Matrix::<T>::zeros(a.dim(), a.dim());
    let zero_b = Matrix::<T>::zeros(b.dim(), b.dim());
    let mut results = Vec::with_capacity(a.result_count() + b.result_count());
    for (i, (_, p)) in a.results().iter().enumerate() {
        results.push((Label(i as u32), p.direct_sum(&zero_b)));
    }
    let offset = a.result_count() as u32;
    for (j, (_, q)) in b.results().iter().enumerate() {
        results.push((Label(offset + j as u32), zero_a.direct_sum(q)));
    }
    Observable::new(dim, results, &T::default_tol())
}

/// Convex combination `A ⊕ B` with weights `α` and `β = 1−α`: block-sum
/// observables, initial `(√α·π^A) ⊕ (√β·π^B)`, accepting labels the disjoint
/// union of both sides. Satisfies `p_{A⊕B} = α·p_A + β·p_B` pointwise.
pub fn convex_sum<T: Scalar>(alpha: Rational, a: &MonQfa<T>, b: &MonQfa<T>) -> Result<MonQfa<T>> {
    check_same_alphabet(a, b)?;
    if alpha < Rational::zero() || alpha > Rational::new(1, 1) {
        return Err(Error::WeightOutOfRange(format!("{}", alpha)));
    }
    let beta = Rational::new(1, 1) - alpha;
    let mut observables = BTreeMap::new();
    for c in a.alphabet().iter() {
        observables.insert(c, direct_sum_observable(a.observable(c)?, b.observable(c)?)?);
    }
    let end = direct_sum_observable(a.end_marker(), b.end_marker())?;
    let mut accepting = BTreeSet::new();
    for (i, (la, _)) in a.end_marker().results().iter().enumerate() {
        if a.accepting().contains(la) {
            accepting.insert(Label(i as u32));
        }
    }
    let offset = a.end_marker().result_count() as u32;
    for (j, (lb, _)) in b.end_marker().results().iter().enumerate() {
        if b.accepting().contains(lb) {
            accepting.insert(Label(offset + j as u32));
        }
    }
    let sa = T::sqrt_ratio(alpha)?;
    let sb = T::sqrt_ratio(beta)?;
    let initial = Matrix::row_vector(
        (0..a.dim() + b.dim())
            .map(|j| {
                if j < a.dim() {
                    a.initial().at(0, j).mul(&sa)
                } else {
                    b.initial().at(0, j - a.dim()).mul(&sb)
                }
            })
            .collect(),
    );
    MonQfa::new(a.alphabet().clone(), observables, end, initial, accepting, None, &T::default_tol())
}

/// The constant automaton over `alphabet`: one dimension, identity
/// observables, acceptance probability exactly 1 or 0 on every word.
pub fn constant<T: Scalar>(alphabet: &Alphabet, value: bool) -> MonQfa<T> {
    let mut observables = BTreeMap::new();
    for c in alphabet.iter() {
        observables.insert(c, Observable::identity(1));
    }
    let accepting = if value { BTreeSet::from([Label(0)]) } else { BTreeSet::new() };
    MonQfa::new(
        alphabet.clone(),
        observables,
        Observable::identity(1),
        Matrix::basis_row(1, 0),
        accepting,
        Some(Meta { cutpoint: Rational::new(1, 2), isolation: Rational::new(1, 2) }),
        &T::default_tol(),
    )
    .expect("constant automaton is always valid")
}

/// Smallest integer `k` with `k ≥ threshold·n`; ties (integral `threshold·n`)
/// are included in the accepting tail.
pub fn majority_count(threshold: &Rational, n: u32) -> u64 {
    let t = *threshold * Rational::from_integer(n as i128);
    let c = t.ceil().to_integer();
    if c < 0 {
        0
    } else {
        c as u64
    }
}

/// `N`-fold tensor power with majority acceptance: a result tuple accepts when
/// at least `⌈threshold·N⌉` components accept. Its acceptance probability is
/// the binomial tail `Σ_{k ≥ threshold·N} C(N,k) p^k (1−p)^{N−k}`.
pub fn amplify_tensor<T: Scalar>(a: &MonQfa<T>, n: u32, threshold: &Rational) -> Result<MonQfa<T>> {
    if n < 1 {
        return Err(Error::InvalidAutomaton(alloc::string::String::from("amplification needs at least one copy")));
    }
    let need = majority_count(threshold, n);
    let base_end = a.end_marker().result_count() as u64;
    let accepting_positions: Vec<bool> =
        a.end_marker().results().iter().map(|(l, _)| a.accepting().contains(l)).collect();

    // fold the tensor power, tracking how many accepting components each
    // end-marker label tuple contains (labels are mixed-radix positions)
    let mut out = a.clone();
    let mut accept_count: Vec<u64> = accepting_positions.iter().map(|&b| u64::from(b)).collect();
    for _ in 1..n {
        out = tensor_product(&out, a)?;
        let mut next_counts = Vec::with_capacity(accept_count.len() * base_end as usize);
        for &prev in &accept_count {
            for &b in &accepting_positions {
                next_counts.push(prev + u64::from(b));
            }
        }
        accept_count = next_counts;
    }
    let accepting: BTreeSet<Label> = accept_count
        .iter()
        .enumerate()
        .filter(|(_, &cnt)| cnt >= need)
        .map(|(i, _)| Label(i as u32))
        .collect();
    MonQfa::new(
        out.alphabet().clone(),
        out.observables().clone(),
        out.end_marker().clone(),
        out.initial().clone(),
        accepting,
        None,
        &T::default_tol(),
    )
}

fn checked_pow(base: &Rational, mut exp: u64) -> Result<Rational> {
    let mut acc = Rational::new(1, 1);
    let mut b = *base;
    loop {
        if exp & 1 == 1 {
            acc = acc.checked_mul(&b).ok_or(Error::ExactLimit { what: "binomial tail", limit: 0 })?;
        }
        exp >>= 1;
        if exp == 0 {
            return Ok(acc);
        }
        b = b.checked_mul(&b).ok_or(Error::ExactLimit { what: "binomial tail", limit: 0 })?;
    }
}

/// Exact binomial tail `Σ_{k ≥ threshold·n} C(n,k) p^k (1−p)^{n−k}`.
/// Errors out when the rationals exceed the i128 range; use
/// [`binomial_tail_f64`] for large `n`.
pub fn binomial_tail_exact(p: &Rational, n: u32, threshold: &Rational) -> Result<Rational> {
    let kmin = majority_count(threshold, n);
    if kmin > n as u64 {
        return Ok(Rational::zero());
    }
    let q = Rational::new(1, 1) - *p;
    let overflow = || Error::ExactLimit { what: "binomial tail", limit: 0 };
    let mut total = Rational::zero();
    let mut binom = Rational::new(1, 1);
    for k in 0..=n as u64 {
        if k >= kmin {
            let pk = checked_pow(p, k)?;
            let qk = checked_pow(&q, n as u64 - k)?;
            let term = binom
                .checked_mul(&pk)
                .and_then(|t| t.checked_mul(&qk))
                .ok_or_else(overflow)?;
            total = total.checked_add(&term).ok_or_else(overflow)?;
        }
        if k < n as u64 {
            // C(n,k+1) = C(n,k)·(n−k)/(k+1)
            binom = binom
                .checked_mul(&Rational::new((n as u64 - k) as i128, (k + 1) as i128))
                .ok_or_else(overflow)?;
        }
    }
    Ok(total)
}

/// Floating-point binomial tail, numerically stable for large `n`: sums the
/// complementary head `Pr[X < ⌈threshold·n⌉]` in log space and returns one
/// minus it.
pub fn binomial_tail_f64(p: f64, n: u32, threshold: &Rational) -> f64 {
    let kmin = majority_count(threshold, n);
    if kmin > n as u64 {
        return 0.0;
    }
    if kmin == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let ln_p = Float::ln(p);
    let ln_q = Float::ln(1.0 - p);
    // ln C(n,k) built incrementally over k = 0..kmin-1
    let mut ln_terms: Vec<f64> = Vec::with_capacity(kmin as usize);
    let mut ln_binom = 0.0f64;
    for k in 0..kmin {
        ln_terms.push(ln_binom + k as f64 * ln_p + (n as u64 - k) as f64 * ln_q);
        ln_binom += Float::ln((n as u64 - k) as f64) - Float::ln((k + 1) as f64);
    }
    let max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 1.0;
    }
    let head: f64 = ln_terms.iter().map(|&t| Float::exp(t - max)).sum::<f64>() * Float::exp(max);
    (1.0 - head).clamp(0.0, 1.0)
}

/// Flattened linear representation of an automaton's acceptance series:
/// `ξ = π₀ ⊗ π₀*`, `P(c) = Σⱼ Pⱼ(c) ⊗ Pⱼ(c)*`, and
/// `η = φ(I)·Σ_{r∈F} P_r(#) ⊗ P_r(#)*` with `φ` the row-flattening map.
#[derive(Clone, Debug)]
pub struct LinearRep<T: Scalar> {
    pub xi: Matrix<T>,
    pub letters: BTreeMap<char, Matrix<T>>,
    pub eta: Matrix<T>,
    dim: usize,
}

impl<T: Scalar> LinearRep<T> {
    /// Dimension `m` of the source automaton (the representation acts on m²).
    pub fn source_dim(&self) -> usize {
        self.dim
    }

    /// `ψ(w) = ξ·P(w₁)⋯P(w_n)·ηᵀ`; equals the acceptance probability.
    pub fn psi(&self, w: &str) -> Result<Prob<T>> {
        let mut v = self.xi.clone();
        for c in w.chars() {
            let p = self.letters.get(&c).ok_or(Error::UnknownLetter(c))?;
            v = v.mul(p)?;
        }
        Ok(v.mul(&self.eta.transpose())?.at(0, 0).re())
    }
}

/// Builds the linear representation of `a`.
pub fn linear_representation<T: Scalar>(a: &MonQfa<T>) -> Result<LinearRep<T>> {
    let xi = a.initial().tensor(&a.initial().conj());
    let mut letters = BTreeMap::new();
    for c in a.alphabet().iter() {
        let obs = a.observable(c)?;
        let mut p = Matrix::zeros(a.dim() * a.dim(), a.dim() * a.dim());
        for (_, proj) in obs.results() {
            p = p.add(&proj.tensor(&proj.conj()))?;
        }
        letters.insert(c, p);
    }
    let mut acc = Matrix::zeros(a.dim() * a.dim(), a.dim() * a.dim());
    for (label, proj) in a.end_marker().results() {
        if a.accepting().contains(label) {
            acc = acc.add(&proj.tensor(&proj.conj()))?;
        }
    }
    let eta = Matrix::<T>::identity(a.dim()).flatten_rows().mul(&acc)?;
    Ok(LinearRep { xi, letters, eta, dim: a.dim() })
}

/// Embeds a measure-only automaton into the Latvian model by taking every
/// unitary to be the identity; acceptance probabilities agree on every word.
pub fn to_lqfa<T: Scalar>(a: &MonQfa<T>) -> Lqfa<T> {
    let id = Matrix::<T>::identity(a.dim());
    let unitaries: BTreeMap<char, Matrix<T>> = a.alphabet().iter().map(|c| (c, id.clone())).collect();
    Lqfa::new(a.clone(), unitaries, id, &T::default_tol()).expect("identity unitaries are always valid")
}

/// Moves a declared cut-point `λ ≠ 1/2` to `1/2` by convex combination with a
/// constant automaton, preserving the recognized language. The new isolation
/// is `δ / (2·max{λ, 1−λ})`; pointwise,
/// `p' = 1/2 + (p − λ)/(2·max{λ, 1−λ})`.
pub fn normalize_cutpoint<T: Scalar>(a: &MonQfa<T>) -> Result<MonQfa<T>> {
    let meta = *a.meta().ok_or(Error::MissingMeta)?;
    let half = Rational::new(1, 2);
    let one = Rational::new(1, 1);
    if meta.cutpoint <= Rational::zero() || meta.cutpoint >= one || meta.cutpoint == half {
        return Err(Error::BadCutpoint(format!("{}", meta.cutpoint)));
    }
    if !meta.isolation.is_positive() {
        return Err(Error::BadCutpoint(format!("declared isolation {} is not positive", meta.isolation)));
    }
    let m = if meta.cutpoint > half { meta.cutpoint } else { one - meta.cutpoint };
    // p' = αp + (1−α)·konst with α = 1/(2m); konst = 1 exactly when λ < 1/2
    let alpha = (Rational::from_integer(2) * m).recip();
    let konst = meta.cutpoint < half;
    let mut out = convex_sum(alpha, a, &constant(a.alphabet(), konst))?;
    out.set_meta(Some(Meta { cutpoint: half, isolation: meta.isolation / (Rational::from_integer(2) * m) }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis_automaton, BasisSeq};
    use crate::scalar::{ratio, Exact, ExactReal};

    fn a_of(s: &str, sigma: &str) -> MonQfa<Exact> {
        build_basis_automaton(&BasisSeq::parse(s).unwrap(), &Alphabet::from_str_letters(sigma)).unwrap()
    }

    fn rat(p: i128, q: i128) -> ExactReal {
        ExactReal::from_ratio(ratio(p, q))
    }

    fn words(sigma: &str, n: usize) -> Vec<alloc::string::String> {
        Alphabet::from_str_letters(sigma).words_up_to(n)
    }

    #[test]
    fn tensor_value_is_pointwise_product() {
        let a = a_of("a", "ab");
        let b = a_of("b", "ab");
        let t = tensor_product(&a, &b).unwrap();
        assert_eq!(t.accept_prob("ab").unwrap(), rat(1, 4));
        for w in words("ab", 5) {
            let lhs = t.accept_prob(&w).unwrap();
            let rhs = a.accept_prob(&w).unwrap().mul(&b.accept_prob(&w).unwrap());
            assert_eq!(lhs, rhs, "word {w:?}");
        }
    }

    #[test]
    fn complement_value_is_one_minus() {
        let a = a_of("a", "ab");
        let c = complement(&a).unwrap();
        for w in words("ab", 6) {
            let lhs = c.accept_prob(&w).unwrap();
            let rhs = ExactReal::one().sub(&a.accept_prob(&w).unwrap());
            assert_eq!(lhs, rhs, "word {w:?}");
        }
    }

    #[test]
    fn convex_sum_is_affine_combination() {
        let a = a_of("a", "ab");
        let b = a_of("b", "ab");
        for alpha in [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(1, 1)] {
            let s = convex_sum(alpha, &a, &b).unwrap();
            for w in words("ab", 5) {
                let lhs = s.accept_prob(&w).unwrap();
                let rhs = a
                    .accept_prob(&w)
                    .unwrap()
                    .mul(&rat(*alpha.numer(), *alpha.denom()))
                    .add(&b.accept_prob(&w).unwrap().mul(&rat(*(ratio(1, 1) - alpha).numer(), *(ratio(1, 1) - alpha).denom())));
                assert_eq!(lhs, rhs, "α={alpha} word {w:?}");
            }
        }
        // α = 1/2 over A[a], A[b] on "a": 1/2·1/2 + 1/2·0 = 1/4
        let s = convex_sum(ratio(1, 2), &a, &b).unwrap();
        assert_eq!(s.accept_prob("a").unwrap(), rat(1, 4));
        assert!(convex_sum(ratio(3, 2), &a, &b).is_err());
    }

    #[test]
    fn constant_automata_hit_exact_endpoints() {
        let sigma = Alphabet::from_str_letters("ab");
        let one: MonQfa<Exact> = constant(&sigma, true);
        let zero: MonQfa<Exact> = constant(&sigma, false);
        for w in ["", "a", "ab", "bbb"] {
            assert_eq!(one.accept_prob(w).unwrap(), ExactReal::one());
            assert_eq!(zero.accept_prob(w).unwrap(), ExactReal::zero());
        }
    }

    #[test]
    fn majority_count_includes_ties() {
        assert_eq!(majority_count(&ratio(1, 2), 2), 1);
        assert_eq!(majority_count(&ratio(1, 2), 4), 2);
        assert_eq!(majority_count(&ratio(1, 3), 3), 1);
        assert_eq!(majority_count(&ratio(2, 3), 4), 3);
    }

    #[test]
    fn binomial_tail_frozen_value() {
        // p = 1/2, N = 2, λ = 1/2: C(2,1)/4 + C(2,2)/4 = 3/4
        let p = ratio(1, 2);
        assert_eq!(binomial_tail_exact(&p, 2, &ratio(1, 2)).unwrap(), ratio(3, 4));
        // N = 1, λ = 1/2: tail is the single k=1 term, i.e. p itself
        assert_eq!(binomial_tail_exact(&p, 1, &ratio(1, 2)).unwrap(), ratio(1, 2));
        let f = binomial_tail_f64(0.5, 2, &ratio(1, 2));
        assert!((f - 0.75).abs() < 1e-12);
    }

    #[test]
    fn amplified_tensor_matches_binomial_tail() {
        let a = a_of("a", "ab");
        for n in [1u32, 2, 3] {
            let amp = amplify_tensor(&a, n, &ratio(1, 8)).unwrap();
            for w in words("ab", 4) {
                let p = a.accept_prob(&w).unwrap().as_ratio().unwrap();
                let expect = binomial_tail_exact(&p, n, &ratio(1, 8)).unwrap();
                let got = amp.accept_prob(&w).unwrap().as_ratio().unwrap();
                assert_eq!(got, expect, "N={n} word {w:?}");
            }
        }
    }

    #[test]
    fn linear_representation_agrees_with_acceptance() {
        let a = a_of("a", "ab");
        let rep = linear_representation(&a).unwrap();
        assert_eq!(rep.psi("a").unwrap(), rat(1, 2));
        assert_eq!(rep.psi("").unwrap(), ExactReal::zero());
        // ‖ξ‖ = 1, every P(c) is a projector, ‖η‖ ≤ √m
        assert_eq!(rep.xi.norm_sq(), ExactReal::one());
        for p in rep.letters.values() {
            assert!(p.is_projector(&ExactReal::zero()).unwrap());
        }
        assert!(rep.eta.norm_sq() <= rat(2, 1));
        for w in words("ab", 5) {
            assert_eq!(rep.psi(&w).unwrap(), a.accept_prob(&w).unwrap(), "word {w:?}");
        }
    }

    #[test]
    fn lqfa_embedding_preserves_values() {
        let a = a_of("ab", "ab");
        let l = to_lqfa(&a);
        for w in words("ab", 6) {
            assert_eq!(l.accept_prob(&w).unwrap(), a.accept_prob(&w).unwrap(), "word {w:?}");
        }
    }

    #[test]
    fn cutpoint_normalization_frozen_values() {
        let a = a_of("a", "ab");
        let n = normalize_cutpoint(&a).unwrap();
        let meta = n.meta().unwrap();
        assert_eq!(meta.cutpoint, ratio(1, 2));
        // δ' = (1/16)/(2·7/8) = 1/28
        assert_eq!(meta.isolation, ratio(1, 28));
        assert_eq!(n.accept_prob("a").unwrap(), rat(5, 7));
        assert_eq!(n.accept_prob("").unwrap(), rat(3, 7));
        // language preserved on all words of length ≤ 6
        for w in words("ab", 6) {
            let before = a.classify(&ratio(1, 8), &w).unwrap();
            let after = n.classify(&ratio(1, 2), &w).unwrap();
            assert_eq!(before, after, "word {w:?}");
        }
    }

    #[test]
    fn normalization_then_embedding_gives_bounded_error() {
        // the composed pipeline recognizes with two-sided error around 1/2:
        // members sit at ≥ 1/2 + δ', non-members at ≤ 1/2 − δ'
        let a = a_of("a", "ab");
        let normalized = normalize_cutpoint(&a).unwrap();
        let lq = to_lqfa(&normalized);
        let meta = lq.base().meta().unwrap();
        assert_eq!(meta.cutpoint, ratio(1, 2));
        assert_eq!(meta.isolation, ratio(1, 28));
        let half = rat(1, 2);
        let delta = ExactReal::from_ratio(meta.isolation);
        for w in words("ab", 4) {
            let p = lq.accept_prob(&w).unwrap();
            if a.classify(&ratio(1, 8), &w).unwrap() {
                assert!(p >= half.add(&delta), "member {w:?} at {p}");
            } else {
                assert!(p <= half.sub(&delta), "non-member {w:?} at {p}");
            }
        }
    }

    #[test]
    fn cutpoint_normalization_rejects_half() {
        let mut a = a_of("a", "ab");
        a.set_meta(Some(Meta { cutpoint: ratio(1, 2), isolation: ratio(1, 4) }));
        assert!(matches!(normalize_cutpoint(&a), Err(Error::BadCutpoint(_))));
        a.set_meta(None);
        assert!(matches!(normalize_cutpoint(&a), Err(Error::MissingMeta)));
    }
}
