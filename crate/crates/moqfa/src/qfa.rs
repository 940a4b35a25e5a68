//! Measure-only and Latvian one-way quantum finite automata.
//!
//! A measure-only automaton carries one observable per letter plus an
//! end-marker observable. Reading a letter applies the corresponding
//! projective measurement to the current mixed state; after the last letter
//! the end marker is measured and the word is accepted when the result lands
//! in the accepting label set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Rational, RealScalar, Scalar};

/// Opaque measurement-result label. Only membership in the accepting set
/// matters for acceptance; numeric eigenvalues are never used.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A quantum observable as a labeled family of orthogonal projectors summing
/// to the identity.
#[derive(Clone, PartialEq, Debug)]
pub struct Observable<T: Scalar> {
    dim: usize,
    results: Vec<(Label, Matrix<T>)>,
}

impl<T: Scalar> Observable<T> {
    /// Validates and builds an observable. Checks, within `tol` (zero for the
    /// exact backend): distinct labels, each matrix a projector, pairwise
    /// orthogonality `PᵢPⱼ = 0`, and completeness `Σᵢ Pᵢ = I`.
    pub fn new(dim: usize, results: Vec<(Label, Matrix<T>)>, tol: &T::Real) -> Result<Self> {
        if results.is_empty() {
            return Err(Error::InvalidObservable(String::from("no measurement results")));
        }
        let mut seen = BTreeSet::new();
        for (label, p) in &results {
            if !seen.insert(*label) {
                return Err(Error::InvalidObservable(format!("duplicate result label {}", label)));
            }
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::InvalidObservable(format!(
                    "projector for label {} has shape {}x{}, expected {}x{}",
                    label,
                    p.rows(),
                    p.cols(),
                    dim,
                    dim
                )));
            }
            if !p.is_projector(tol)? {
                return Err(Error::InvalidObservable(format!("matrix for label {} is not a projector", label)));
            }
        }
        let zero = Matrix::<T>::zeros(dim, dim);
        for i in 0..results.len() {
            for j in (i + 1)..results.len() {
                if !results[i].1.mul(&results[j].1)?.approx_eq(&zero, tol) {
                    return Err(Error::InvalidObservable(format!(
                        "projectors for labels {} and {} are not orthogonal",
                        results[i].0, results[j].0
                    )));
                }
            }
        }
        let mut sum = zero;
        for (_, p) in &results {
            sum = sum.add(p)?;
        }
        if !sum.approx_eq(&Matrix::identity(dim), tol) {
            return Err(Error::InvalidObservable(String::from("projector family does not sum to the identity")));
        }
        Ok(Observable { dim, results })
    }

    /// The trivial observable: a single result measuring the identity.
    pub fn identity(dim: usize) -> Self {
        Observable { dim, results: alloc::vec![(Label(0), Matrix::identity(dim))] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of results, `k(c)` in branch-counting terms.
    pub fn result_count(&self) -> usize {
        self.results.len()
    }

    pub fn results(&self) -> &[(Label, Matrix<T>)] {
        &self.results
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.results.iter().map(|(l, _)| *l)
    }

    pub fn projector_for(&self, label: Label) -> Option<&Matrix<T>> {
        self.results.iter().find(|(l, _)| *l == label).map(|(_, p)| p)
    }
}

/// Declared cut-point and isolation radius. These are always rational: every
/// construction in this crate produces rational cut-point data.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Meta {
    pub cutpoint: Rational,
    pub isolation: Rational,
}

/// A probability together with its backend representation.
pub type Prob<T> = <T as Scalar>::Real;

/// Measure-only one-way quantum finite automaton.
#[derive(Clone, PartialEq, Debug)]
pub struct MonQfa<T: Scalar> {
    alphabet: Alphabet,
    dim: usize,
    observables: BTreeMap<char, Observable<T>>,
    end_marker: Observable<T>,
    initial: Matrix<T>,
    accepting: BTreeSet<Label>,
    meta: Option<Meta>,
}

impl<T: Scalar> MonQfa<T> {
    /// Validates and builds an automaton: the initial row vector must be a
    /// unit vector (within `tol` on its squared norm), every alphabet letter
    /// must carry an observable of the right dimension, and the accepting
    /// labels must name end-marker results.
    pub fn new(
        alphabet: Alphabet,
        observables: BTreeMap<char, Observable<T>>,
        end_marker: Observable<T>,
        initial: Matrix<T>,
        accepting: BTreeSet<Label>,
        meta: Option<Meta>,
        tol: &T::Real,
    ) -> Result<Self> {
        let dim = end_marker.dim();
        if initial.rows() != 1 || initial.cols() != dim {
            return Err(Error::InvalidAutomaton(format!(
                "initial state has shape {}x{}, expected 1x{}",
                initial.rows(),
                initial.cols(),
                dim
            )));
        }
        let norm_gap = initial.norm_sq().sub(&T::Real::one()).abs();
        if norm_gap.partial_cmp(tol) == Some(core::cmp::Ordering::Greater) {
            return Err(Error::InvalidAutomaton(format!("initial state has squared norm {}", initial.norm_sq())));
        }
        for c in alphabet.iter() {
            match observables.get(&c) {
                None => return Err(Error::InvalidAutomaton(format!("letter `{}` has no observable", c))),
                Some(o) if o.dim() != dim => {
                    return Err(Error::InvalidAutomaton(format!(
                        "observable for `{}` has dimension {}, expected {}",
                        c,
                        o.dim(),
                        dim
                    )))
                }
                _ => {}
            }
        }
        if let Some(c) = observables.keys().find(|c| !alphabet.contains(**c)) {
            return Err(Error::InvalidAutomaton(format!("observable for `{}` outside the alphabet", c)));
        }
        let end_labels: BTreeSet<Label> = end_marker.labels().collect();
        if let Some(l) = accepting.iter().find(|l| !end_labels.contains(l)) {
            return Err(Error::InvalidAutomaton(format!("accepting label {} is not an end-marker result", l)));
        }
        Ok(MonQfa { alphabet, dim, observables, end_marker, initial, accepting, meta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn initial(&self) -> &Matrix<T> {
        &self.initial
    }

    pub fn observable(&self, c: char) -> Result<&Observable<T>> {
        self.observables.get(&c).ok_or(Error::UnknownLetter(c))
    }

    pub fn observables(&self) -> &BTreeMap<char, Observable<T>> {
        &self.observables
    }

    pub fn end_marker(&self) -> &Observable<T> {
        &self.end_marker
    }

    pub fn accepting(&self) -> &BTreeSet<Label> {
        &self.accepting
    }

    pub fn meta(&self) -> Option<&Meta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: Option<Meta>) {
        self.meta = meta;
    }

    /// The mixed state after reading `w`, starting from `σ(ε) = π₀†π₀` and
    /// conjugating with each letter's projector family in reading order:
    /// `σ ← Σⱼ Pⱼ(c) σ Pⱼ(c)`.
    pub fn density_evolve(&self, w: &str) -> Result<Density<T>> {
        let mut sigma = self.initial.adjoint().mul(&self.initial)?;
        for c in w.chars() {
            let obs = self.observable(c)?;
            let mut next = Matrix::zeros(self.dim, self.dim);
            for (_, p) in obs.results() {
                next = next.add(&p.mul(&sigma)?.mul(p)?)?;
            }
            sigma = next;
        }
        Ok(Density(sigma))
    }

    /// Acceptance probability `Tr(Σ_{r∈F} P_r(#) σ(w) P_r(#))`.
    pub fn accept_prob(&self, w: &str) -> Result<Prob<T>> {
        let sigma = self.density_evolve(w)?.0;
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (label, p) in self.end_marker.results() {
            if self.accepting.contains(label) {
                acc = acc.add(&p.mul(&sigma)?.mul(p)?)?;
            }
        }
        Ok(acc.trace()?.re())
    }

    /// Acceptance probability as the sum over all measurement branches:
    /// `Σ_{r∈F} Σ_{j₁…j_n} ‖π₀ · Π Pⱼᵢ(wᵢ) · P_r(#)‖²`. Exponential in the
    /// word length; errors out when `Π k(wᵢ)` exceeds `limit`.
    pub fn accept_prob_branches(&self, w: &str, limit: u64) -> Result<Prob<T>> {
        let letters: Vec<char> = w.chars().collect();
        let mut count: u128 = 1;
        for &c in &letters {
            count = count.saturating_mul(self.observable(c)?.result_count() as u128);
            if count > limit as u128 {
                return Err(Error::BranchLimitExceeded { count, limit });
            }
        }
        let accepting_projectors: Vec<&Matrix<T>> = self
            .end_marker
            .results()
            .iter()
            .filter(|(l, _)| self.accepting.contains(l))
            .map(|(_, p)| p)
            .collect();
        let mut total = T::Real::zero();
        let mut choice = alloc::vec![0usize; letters.len()];
        loop {
            let mut v = self.initial.clone();
            for (i, &c) in letters.iter().enumerate() {
                let obs = self.observable(c)?;
                v = v.mul(&obs.results()[choice[i]].1)?;
            }
            for p in &accepting_projectors {
                total = total.add(&v.mul(p)?.norm_sq());
            }
            // odometer over branch choices
            let mut pos = letters.len();
            loop {
                if pos == 0 {
                    return Ok(total);
                }
                pos -= 1;
                let k = self.observable(letters[pos])?.result_count();
                choice[pos] += 1;
                if choice[pos] < k {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    /// Cut-point classification: accepted iff `p_A(w) > λ` strictly.
    pub fn classify(&self, cutpoint: &Rational, w: &str) -> Result<bool> {
        let p = self.accept_prob(w)?;
        let lambda = T::Real::from_ratio(*cutpoint);
        Ok(p.partial_cmp(&lambda) == Some(core::cmp::Ordering::Greater))
    }

    /// Acceptance probabilities for every word of length at most `max_len`,
    /// sharing density evolutions across common prefixes. Measurements with a
    /// single result are the identity and leave the state untouched.
    pub fn accept_probs_up_to(&self, max_len: usize) -> Result<BTreeMap<String, Prob<T>>> {
        let mut out = BTreeMap::new();
        let sigma0 = Density(self.initial.adjoint().mul(&self.initial)?);
        let mut stack: Vec<(String, Density<T>)> = alloc::vec![(String::new(), sigma0)];
        while let Some((w, density)) = stack.pop() {
            out.insert(w.clone(), self.measure_acceptance(&density)?);
            if w.chars().count() < max_len {
                for c in self.alphabet.iter() {
                    let obs = self.observable(c)?;
                    let next = if obs.result_count() == 1 {
                        density.clone()
                    } else {
                        let mut sigma = Matrix::zeros(self.dim, self.dim);
                        for (_, p) in obs.results() {
                            sigma = sigma.add(&p.mul(&density.0)?.mul(p)?)?;
                        }
                        Density(sigma)
                    };
                    let mut v = w.clone();
                    v.push(c);
                    stack.push((v, next));
                }
            }
        }
        Ok(out)
    }

    fn measure_acceptance(&self, density: &Density<T>) -> Result<Prob<T>> {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (label, p) in self.end_marker.results() {
            if self.accepting.contains(label) {
                acc = acc.add(&p.mul(&density.0)?.mul(p)?)?;
            }
        }
        Ok(acc.trace()?.re())
    }
}

/// A density matrix: Hermitian, unit-trace, positive semidefinite.
#[derive(Clone, PartialEq, Debug)]
pub struct Density<T: Scalar>(pub Matrix<T>);

impl<T: Scalar> Density<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    /// Checks the density-matrix invariants within `tol`: Hermitian, trace 1,
    /// and `Tr((vM)v†) ≥ −tol` for each supplied probe vector (a desk-scale
    /// stand-in for positive semidefiniteness).
    pub fn validate(&self, probes: &[Matrix<T>], tol: &T::Real) -> Result<()> {
        let m = &self.0;
        if !m.approx_eq(&m.adjoint(), tol) {
            return Err(Error::InvalidAutomaton(String::from("density matrix is not Hermitian")));
        }
        let gap = m.trace()?.re().sub(&T::Real::one()).abs();
        if gap.partial_cmp(tol) == Some(core::cmp::Ordering::Greater) {
            return Err(Error::InvalidAutomaton(format!("density matrix has trace {}", m.trace()?)));
        }
        let neg_tol = T::Real::zero().sub(tol);
        for v in probes {
            let q = v.mul(m)?.mul(&v.adjoint())?.at(0, 0).re();
            if q.partial_cmp(&neg_tol) == Some(core::cmp::Ordering::Less) {
                return Err(Error::InvalidAutomaton(format!("density matrix fails ⟨v|M|v⟩ ≥ 0: got {}", q)));
            }
        }
        Ok(())
    }
}

/// Latvian automaton: per letter a unitary followed by a measurement.
#[derive(Clone, PartialEq, Debug)]
pub struct Lqfa<T: Scalar> {
    base: MonQfa<T>,
    unitaries: BTreeMap<char, Matrix<T>>,
    end_unitary: Matrix<T>,
}

impl<T: Scalar> Lqfa<T> {
    /// Validates `U·U† = I` for every unitary (within `tol`).
    pub fn new(
        base: MonQfa<T>,
        unitaries: BTreeMap<char, Matrix<T>>,
        end_unitary: Matrix<T>,
        tol: &T::Real,
    ) -> Result<Self> {
        let dim = base.dim();
        let id = Matrix::<T>::identity(dim);
        for (c, u) in unitaries.iter().chain(core::iter::once((&'#', &end_unitary))) {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::InvalidAutomaton(format!("unitary for `{}` has wrong shape", c)));
            }
            if !u.mul(&u.adjoint())?.approx_eq(&id, tol) {
                return Err(Error::InvalidAutomaton(format!("matrix for `{}` is not unitary", c)));
            }
        }
        for c in base.alphabet().iter() {
            if !unitaries.contains_key(&c) {
                return Err(Error::InvalidAutomaton(format!("letter `{}` has no unitary", c)));
            }
        }
        Ok(Lqfa { base, unitaries, end_unitary })
    }

    pub fn base(&self) -> &MonQfa<T> {
        &self.base
    }

    pub fn unitaries(&self) -> &BTreeMap<char, Matrix<T>> {
        &self.unitaries
    }

    pub fn end_unitary(&self) -> &Matrix<T> {
        &self.end_unitary
    }

    /// Acceptance probability: per letter `σ ← Σⱼ Pⱼ(c) U_c† σ U_c Pⱼ(c)`,
    /// then the end-marker unitary and measurement.
    pub fn accept_prob(&self, w: &str) -> Result<Prob<T>> {
        let dim = self.base.dim();
        let mut sigma = self.base.initial().adjoint().mul(self.base.initial())?;
        for c in w.chars() {
            let obs = self.base.observable(c)?;
            let u = self.unitaries.get(&c).ok_or(Error::UnknownLetter(c))?;
            let evolved = u.adjoint().mul(&sigma)?.mul(u)?;
            let mut next = Matrix::zeros(dim, dim);
            for (_, p) in obs.results() {
                next = next.add(&p.mul(&evolved)?.mul(p)?)?;
            }
            sigma = next;
        }
        let sigma = self.end_unitary.adjoint().mul(&sigma)?.mul(&self.end_unitary)?;
        let mut acc = Matrix::zeros(dim, dim);
        for (label, p) in self.base.end_marker().results() {
            if self.base.accepting().contains(label) {
                acc = acc.add(&p.mul(&sigma)?.mul(p)?)?;
            }
        }
        Ok(acc.trace()?.re())
    }
}
