//! JSON interchange formats for automata.
//!
//! Complex entries are `[re, im]` pairs; in exact documents the components
//! are rationals written `"p/q"` (or integers), in floating documents plain
//! numbers. A loader first tries the exact reading and falls back to doubles
//! unless exact mode is forced.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use moqfa::qfa::{Label, Meta, MonQfa, Observable};
use moqfa::scalar::{parse_rational, Rational, RealScalar, Scalar, C64};
use moqfa::{Alphabet, Exact, Matrix};

/// One component of a complex entry: a number or a rational string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    fn as_rational(&self) -> Result<Rational> {
        match self {
            NumOrText::Text(s) => Ok(parse_rational(s)?),
            NumOrText::Num(n) => {
                if n.fract() == 0.0 && n.abs() < 9e18 {
                    Ok(Rational::from_integer(*n as i128))
                } else {
                    bail!("`{n}` is not an exact rational; write it as \"p/q\"")
                }
            }
        }
    }

    fn as_f64(&self) -> Result<f64> {
        match self {
            NumOrText::Num(n) => Ok(*n),
            NumOrText::Text(s) => {
                let r = parse_rational(s)?;
                Ok(moqfa::ExactReal::from_ratio(r).to_f64())
            }
        }
    }
}

pub type ComplexEntry = (NumOrText, NumOrText);
pub type MatrixDoc = Vec<Vec<ComplexEntry>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultDoc {
    pub label: u32,
    pub projector: MatrixDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetaDoc {
    pub cutpoint: NumOrText,
    pub isolation: NumOrText,
}

/// Interchange document for a measure-only automaton. The end-marker
/// observable sits in `observables` under the key `"#"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QfaDoc {
    pub alphabet: Vec<String>,
    pub dim: usize,
    pub observables: BTreeMap<String, Vec<ResultDoc>>,
    pub initial: Vec<ComplexEntry>,
    pub accepting: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaDoc>,
}

/// Interchange document for a DFA.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DfaDoc {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub transitions: Vec<(usize, String, usize)>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

/// An automaton in whichever backend the document supports.
pub enum LoadedQfa {
    Exact(MonQfa<Exact>),
    Float(MonQfa<C64>),
}

fn single_char(s: &str, what: &str) -> Result<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => bail!("{what} `{s}` must be a single character"),
    }
}

fn alphabet_of(doc: &[String]) -> Result<Alphabet> {
    let letters: Vec<char> =
        doc.iter().map(|s| single_char(s, "alphabet letter")).collect::<Result<_>>()?;
    Ok(Alphabet::new(letters))
}

fn matrix_from_doc<T: Scalar>(
    doc: &MatrixDoc,
    entry: &dyn Fn(&ComplexEntry) -> Result<T>,
) -> Result<Matrix<T>> {
    let rows: Vec<Vec<T>> =
        doc.iter().map(|row| row.iter().map(entry).collect::<Result<Vec<T>>>()).collect::<Result<_>>()?;
    Matrix::from_rows(rows).map_err(|e| anyhow!("{e}"))
}

fn qfa_from_doc<T: Scalar>(
    doc: &QfaDoc,
    entry: &dyn Fn(&ComplexEntry) -> Result<T>,
    tol: &T::Real,
) -> Result<MonQfa<T>> {
    let alphabet = alphabet_of(&doc.alphabet)?;
    let mut observables = BTreeMap::new();
    let mut end_marker = None;
    for (key, results) in &doc.observables {
        let parsed: Vec<(Label, Matrix<T>)> = results
            .iter()
            .map(|r| Ok((Label(r.label), matrix_from_doc(&r.projector, entry)?)))
            .collect::<Result<_>>()?;
        let observable = Observable::new(doc.dim, parsed, tol)
            .with_context(|| format!("observable for `{key}`"))?;
        if key == "#" {
            end_marker = Some(observable);
        } else {
            observables.insert(single_char(key, "observable letter")?, observable);
        }
    }
    let end_marker = end_marker.ok_or_else(|| anyhow!("missing end-marker observable under key \"#\""))?;
    let initial = Matrix::row_vector(doc.initial.iter().map(entry).collect::<Result<Vec<T>>>()?);
    let accepting: BTreeSet<Label> = doc.accepting.iter().map(|&l| Label(l)).collect();
    let meta = match &doc.meta {
        None => None,
        Some(m) => Some(Meta { cutpoint: m.cutpoint.as_rational()?, isolation: m.isolation.as_rational()? }),
    };
    MonQfa::new(alphabet, observables, end_marker, initial, accepting, meta, tol).map_err(|e| anyhow!("{e}"))
}

/// Loads an automaton document: exact when every entry is rational, doubles
/// otherwise. `force_exact` turns non-rational entries into a hard error.
pub fn load_qfa(doc: &QfaDoc, force_exact: bool, float_tol: f64) -> Result<LoadedQfa> {
    let exact_entry = |e: &ComplexEntry| -> Result<Exact> {
        Ok(Exact::from_ratios(e.0.as_rational()?, e.1.as_rational()?))
    };
    match qfa_from_doc::<Exact>(doc, &exact_entry, &moqfa::ExactReal::zero()) {
        Ok(qfa) => Ok(LoadedQfa::Exact(qfa)),
        Err(e) if force_exact => Err(e.context("exact mode requires rational entries")),
        Err(_) => {
            let float_entry =
                |e: &ComplexEntry| -> Result<C64> { Ok(C64::new(e.0.as_f64()?, e.1.as_f64()?)) };
            Ok(LoadedQfa::Float(qfa_from_doc::<C64>(doc, &float_entry, &float_tol)?))
        }
    }
}

fn rational_text(r: &Rational) -> NumOrText {
    NumOrText::Text(format!("{r}"))
}

fn exact_entry_doc(z: &Exact) -> Result<ComplexEntry> {
    let (re, im) = z
        .as_rational_pair()
        .ok_or_else(|| anyhow!("cannot serialize an irrational amplitude exactly"))?;
    Ok((rational_text(&re), rational_text(&im)))
}

fn exact_matrix_doc(m: &Matrix<Exact>) -> Result<MatrixDoc> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| exact_entry_doc(m.at(i, j))).collect())
        .collect()
}

/// Serializes an exact automaton; every amplitude must be rational.
pub fn qfa_to_doc(qfa: &MonQfa<Exact>) -> Result<QfaDoc> {
    let mut observables = BTreeMap::new();
    for (c, obs) in qfa.observables() {
        let results: Vec<ResultDoc> = obs
            .results()
            .iter()
            .map(|(l, p)| Ok(ResultDoc { label: l.0, projector: exact_matrix_doc(p)? }))
            .collect::<Result<_>>()?;
        observables.insert(c.to_string(), results);
    }
    let end: Vec<ResultDoc> = qfa
        .end_marker()
        .results()
        .iter()
        .map(|(l, p)| Ok(ResultDoc { label: l.0, projector: exact_matrix_doc(p)? }))
        .collect::<Result<_>>()?;
    observables.insert("#".to_string(), end);
    Ok(QfaDoc {
        alphabet: qfa.alphabet().iter().map(|c| c.to_string()).collect(),
        dim: qfa.dim(),
        observables,
        initial: (0..qfa.dim()).map(|j| exact_entry_doc(qfa.initial().at(0, j))).collect::<Result<_>>()?,
        accepting: qfa.accepting().iter().map(|l| l.0).collect(),
        meta: qfa.meta().map(|m| MetaDoc {
            cutpoint: rational_text(&m.cutpoint),
            isolation: rational_text(&m.isolation),
        }),
    })
}

pub fn dfa_from_doc(doc: &DfaDoc) -> Result<moqfa::dfa::Dfa> {
    let alphabet = alphabet_of(&doc.alphabet)?;
    let transitions: Vec<(usize, char, usize)> = doc
        .transitions
        .iter()
        .map(|(q, c, r)| Ok((*q, single_char(c, "transition letter")?, *r)))
        .collect::<Result<_>>()?;
    moqfa::dfa::Dfa::from_transitions(alphabet, doc.states, &transitions, doc.initial, doc.finals.iter().copied())
        .map_err(|e| anyhow!("{e}"))
}

pub fn dfa_to_doc(dfa: &moqfa::dfa::Dfa) -> DfaDoc {
    DfaDoc {
        alphabet: dfa.alphabet().iter().map(|c| c.to_string()).collect(),
        states: dfa.state_count(),
        transitions: dfa.transitions().into_iter().map(|(q, c, r)| (q, c.to_string(), r)).collect(),
        initial: dfa.initial(),
        finals: dfa.finals().iter().copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use moqfa::basis::{build_basis_automaton, BasisSeq};

    #[test]
    fn qfa_document_round_trip_is_identity() {
        let sigma = Alphabet::from_str_letters("ab");
        let qfa: MonQfa<Exact> =
            build_basis_automaton(&BasisSeq::parse("ab").unwrap(), &sigma).unwrap();
        let doc = qfa_to_doc(&qfa).unwrap();
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: QfaDoc = serde_json::from_str(&json).unwrap();
        match load_qfa(&parsed, true, 1e-9).unwrap() {
            LoadedQfa::Exact(again) => assert_eq!(again, qfa),
            LoadedQfa::Float(_) => panic!("expected exact load"),
        }
    }

    #[test]
    fn float_documents_fall_back_and_exact_mode_rejects_them() {
        let sigma = Alphabet::from_str_letters("a");
        let qfa: MonQfa<Exact> =
            build_basis_automaton(&BasisSeq::parse("a").unwrap(), &sigma).unwrap();
        let mut doc = qfa_to_doc(&qfa).unwrap();
        // replace one rational with a plain double
        doc.observables.get_mut("a").unwrap()[0].projector[0][0].0 = NumOrText::Num(0.5);
        assert!(load_qfa(&doc, true, 1e-9).is_err());
        match load_qfa(&doc, false, 1e-9).unwrap() {
            LoadedQfa::Float(f) => {
                let p = f.accept_prob("a").unwrap();
                assert!((p - 0.5).abs() < 1e-9);
            }
            LoadedQfa::Exact(_) => panic!("expected float fallback"),
        }
    }

    #[test]
    fn dfa_document_round_trip_is_identity() {
        let sigma = Alphabet::from_str_letters("ab");
        let d = moqfa::dfa::basis_dfa(&BasisSeq::parse("ab").unwrap(), &sigma).unwrap();
        let doc = dfa_to_doc(&d);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: DfaDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(dfa_from_doc(&parsed).unwrap(), d);
    }
}
