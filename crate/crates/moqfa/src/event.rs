//! Probabilistic events as lazy expression trees.
//!
//! An event assigns each word a value in the unit interval. Atoms are concrete
//! automata; the combinators are the Hadamard (pointwise) product, the f-complement
//! `w ↦ 1 − φ(w)`, convex combinations, and binomial majority amplification.
//! Combinators evaluate lazily; when the operands are atoms the corresponding
//! product automaton is also materialized so the two routes can be checked
//! against each other (tensor and direct-sum dimensions grow multiplicatively,
//! so materialization stays optional).
//!
//! The textual form is prefix s-expressions:
//! `(basis "aba")`, `(had E1 E2)`, `(fc E)`, `(cvx 1/4 E1 E2)`,
//! `(amp 12 1/8 E)`, `(const 1)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::alphabet::Alphabet;
use crate::basis::{build_basis_automaton, BasisSeq};
use crate::closure::{
    amplify_tensor, binomial_tail_exact, binomial_tail_f64, complement, constant, convex_sum, tensor_product,
};
use crate::error::{Error, Result};
use crate::qfa::{Meta, MonQfa, Prob};
use crate::scalar::{Rational, RealScalar, Scalar};

/// Amplification widths up to which a concrete tensor-power automaton is
/// materialized alongside the formula route.
pub const AMPLIFY_MATERIALIZE_LIMIT: u32 = 3;

/// Node of an event expression.
#[derive(Clone, Debug)]
pub enum EventKind<T: Scalar> {
    Atom(MonQfa<T>),
    Hadamard(Box<Event<T>>, Box<Event<T>>),
    FComplement(Box<Event<T>>),
    Convex { weight: Rational, left: Box<Event<T>>, right: Box<Event<T>> },
    Amplified { copies: u32, threshold: Rational, inner: Box<Event<T>> },
}

/// An event expression with its alphabet, optional declared cut-point
/// metadata, and (for atom-level combinations) the materialized automaton.
#[derive(Clone, Debug)]
pub struct Event<T: Scalar> {
    kind: EventKind<T>,
    alphabet: Alphabet,
    meta: Option<Meta>,
    materialized: Option<MonQfa<T>>,
    atom_text: Option<String>,
}

impl<T: Scalar> Event<T> {
    pub fn atom(a: MonQfa<T>) -> Self {
        let alphabet = a.alphabet().clone();
        let meta = a.meta().copied();
        Event { kind: EventKind::Atom(a), alphabet, meta, materialized: None, atom_text: None }
    }

    /// The basis-language atom for `seq` over `alphabet`.
    pub fn basis(seq: &BasisSeq, alphabet: &Alphabet) -> Result<Self> {
        let mut e = Self::atom(build_basis_automaton(seq, alphabet)?);
        e.atom_text = Some(format!("(basis \"{}\")", seq));
        Ok(e)
    }

    /// The constant event with value exactly 1 or 0.
    pub fn constant(alphabet: &Alphabet, value: bool) -> Self {
        let mut e = Self::atom(constant(alphabet, value));
        e.atom_text = Some(format!("(const {})", u8::from(value)));
        e
    }

    /// Pointwise product. When both operands are atoms the tensor automaton
    /// is materialized as well.
    pub fn hadamard(left: Event<T>, right: Event<T>) -> Result<Self> {
        if left.alphabet != right.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let materialized = match (left.as_atom(), right.as_atom()) {
            (Some(a), Some(b)) => Some(tensor_product(a, b)?),
            _ => None,
        };
        let alphabet = left.alphabet.clone();
        Ok(Event {
            kind: EventKind::Hadamard(Box::new(left), Box::new(right)),
            alphabet,
            meta: None,
            materialized,
            atom_text: None,
        })
    }

    /// Pointwise `1 − value`. An atom's complement automaton is materialized
    /// by flipping the accepting result set.
    pub fn f_complement(inner: Event<T>) -> Result<Self> {
        let materialized = match inner.as_atom() {
            Some(a) => Some(complement(a)?),
            None => None,
        };
        let alphabet = inner.alphabet.clone();
        let meta = inner.meta.map(|m| Meta { cutpoint: Rational::new(1, 1) - m.cutpoint, isolation: m.isolation });
        Ok(Event { kind: EventKind::FComplement(Box::new(inner)), alphabet, meta, materialized, atom_text: None })
    }

    /// Pointwise `α·left + (1−α)·right`. When both operands are atoms the
    /// direct-sum automaton is materialized as well.
    pub fn convex(weight: Rational, left: Event<T>, right: Event<T>) -> Result<Self> {
        if left.alphabet != right.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if weight < Rational::zero() || weight > Rational::new(1, 1) {
            return Err(Error::WeightOutOfRange(format!("{}", weight)));
        }
        let materialized = match (left.as_atom(), right.as_atom()) {
            (Some(a), Some(b)) => Some(convex_sum(weight, a, b)?),
            _ => None,
        };
        let alphabet = left.alphabet.clone();
        Ok(Event {
            kind: EventKind::Convex { weight, left: Box::new(left), right: Box::new(right) },
            alphabet,
            meta: None,
            materialized,
            atom_text: None,
        })
    }

    /// Binomial majority amplification over `copies` independent runs with
    /// acceptance threshold `threshold`. For atoms with few copies the
    /// explicit tensor-power automaton is materialized as well.
    pub fn amplify(inner: Event<T>, copies: u32, threshold: Rational) -> Result<Self> {
        if copies < 1 {
            return Err(Error::InvalidAutomaton(String::from("amplification needs at least one copy")));
        }
        let materialized = match inner.as_atom() {
            Some(a) if copies <= AMPLIFY_MATERIALIZE_LIMIT => Some(amplify_tensor(a, copies, &threshold)?),
            _ => None,
        };
        let alphabet = inner.alphabet.clone();
        Ok(Event {
            kind: EventKind::Amplified { copies, threshold, inner: Box::new(inner) },
            alphabet,
            meta: None,
            materialized,
            atom_text: None,
        })
    }

    pub fn kind(&self) -> &EventKind<T> {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn meta(&self) -> Option<&Meta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: Option<Meta>) {
        self.meta = meta;
    }

    /// The concrete automaton realizing this node, when one was materialized.
    pub fn materialized(&self) -> Option<&MonQfa<T>> {
        self.materialized.as_ref()
    }

    pub fn as_atom(&self) -> Option<&MonQfa<T>> {
        match &self.kind {
            EventKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Number of atom leaves (shared subtrees counted per occurrence).
    pub fn leaf_count(&self) -> usize {
        match &self.kind {
            EventKind::Atom(_) => 1,
            EventKind::Hadamard(l, r) => l.leaf_count() + r.leaf_count(),
            EventKind::FComplement(e) => e.leaf_count(),
            EventKind::Convex { left, right, .. } => left.leaf_count() + right.leaf_count(),
            EventKind::Amplified { inner, .. } => inner.leaf_count(),
        }
    }

    /// Evaluates the event in the same backend as its atoms. Exact backends
    /// keep every step exact; amplification is evaluated through the binomial
    /// tail and errors out when the exact rationals overflow.
    pub fn value(&self, w: &str) -> Result<Prob<T>> {
        match &self.kind {
            EventKind::Atom(a) => a.accept_prob(w),
            EventKind::Hadamard(l, r) => Ok(l.value(w)?.mul(&r.value(w)?)),
            EventKind::FComplement(e) => Ok(T::Real::one().sub(&e.value(w)?)),
            EventKind::Convex { weight, left, right } => {
                let a = T::Real::from_ratio(*weight);
                let b = T::Real::from_ratio(Rational::new(1, 1) - *weight);
                Ok(left.value(w)?.mul(&a).add(&right.value(w)?.mul(&b)))
            }
            EventKind::Amplified { copies, threshold, inner } => {
                let p = inner.value(w)?;
                if T::EXACT {
                    let p = p.as_ratio().ok_or(Error::ExactUnsupported("irrational amplification base"))?;
                    Ok(T::Real::from_ratio(binomial_tail_exact(&p, *copies, threshold)?))
                } else {
                    T::Real::from_f64(binomial_tail_f64(p.to_f64(), *copies, threshold))
                }
            }
        }
    }

    /// Evaluates the event in double precision regardless of backend; the
    /// only route available for wide amplification over exact atoms.
    pub fn value_f64(&self, w: &str) -> Result<f64> {
        match &self.kind {
            EventKind::Atom(a) => Ok(a.accept_prob(w)?.to_f64()),
            EventKind::Hadamard(l, r) => Ok(l.value_f64(w)? * r.value_f64(w)?),
            EventKind::FComplement(e) => Ok(1.0 - e.value_f64(w)?),
            EventKind::Convex { weight, left, right } => {
                let a = f64::from_ratio(*weight);
                Ok(a * left.value_f64(w)? + (1.0 - a) * right.value_f64(w)?)
            }
            EventKind::Amplified { copies, threshold, inner } => {
                Ok(binomial_tail_f64(inner.value_f64(w)?, *copies, threshold))
            }
        }
    }

    /// Prefix textual form; custom atoms print as `<atom>`.
    pub fn to_text(&self) -> String {
        match &self.kind {
            EventKind::Atom(_) => self.atom_text.clone().unwrap_or_else(|| String::from("<atom>")),
            EventKind::Hadamard(l, r) => format!("(had {} {})", l.to_text(), r.to_text()),
            EventKind::FComplement(e) => format!("(fc {})", e.to_text()),
            EventKind::Convex { weight, left, right } => {
                format!("(cvx {} {} {})", weight, left.to_text(), right.to_text())
            }
            EventKind::Amplified { copies, threshold, inner } => {
                format!("(amp {} {} {})", copies, threshold, inner.to_text())
            }
        }
    }
}

/// Parses the prefix textual form of an event over `alphabet`.
///
/// Grammar: `(basis "aba")`, `(had E1 E2)`, `(fc E)`, `(cvx α E1 E2)`,
/// `(amp N λ E)`, `(const 0|1)`; weights and thresholds are rationals
/// written `p/q` or integers.
pub fn parse_event<T: Scalar>(text: &str, alphabet: &Alphabet) -> Result<Event<T>> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let event = parse_expr(&tokens, &mut pos, alphabet)?;
    if pos != tokens.len() {
        return Err(Error::Parse { what: "event", message: format!("trailing input at token {}", pos) });
    }
    Ok(event)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => {
                            return Err(Error::Parse { what: "event", message: String::from("unterminated string") })
                        }
                    }
                }
                tokens.push(Token::Str(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                tokens.push(Token::Word(s));
            }
        }
    }
    Ok(tokens)
}

fn expect_close(tokens: &[Token], pos: &mut usize) -> Result<()> {
    match tokens.get(*pos) {
        Some(Token::Close) => {
            *pos += 1;
            Ok(())
        }
        _ => Err(Error::Parse { what: "event", message: format!("expected `)` at token {}", pos) }),
    }
}

fn next_word(tokens: &[Token], pos: &mut usize, what: &str) -> Result<String> {
    match tokens.get(*pos) {
        Some(Token::Word(w)) => {
            *pos += 1;
            Ok(w.clone())
        }
        _ => Err(Error::Parse { what: "event", message: format!("expected {} at token {}", what, pos) }),
    }
}

fn parse_expr<T: Scalar>(tokens: &[Token], pos: &mut usize, alphabet: &Alphabet) -> Result<Event<T>> {
    match tokens.get(*pos) {
        Some(Token::Open) => {
            *pos += 1;
        }
        _ => return Err(Error::Parse { what: "event", message: format!("expected `(` at token {}", pos) }),
    }
    let head = next_word(tokens, pos, "an operator")?;
    let event = match head.as_str() {
        "basis" => {
            let letters = match tokens.get(*pos) {
                Some(Token::Str(s)) => {
                    *pos += 1;
                    s.clone()
                }
                Some(Token::Word(s)) => {
                    *pos += 1;
                    s.clone()
                }
                _ => {
                    return Err(Error::Parse {
                        what: "event",
                        message: format!("expected a letter sequence at token {}", pos),
                    })
                }
            };
            Event::basis(&BasisSeq::parse(&letters)?, alphabet)?
        }
        "const" => {
            let v = next_word(tokens, pos, "0 or 1")?;
            match v.as_str() {
                "0" => Event::constant(alphabet, false),
                "1" => Event::constant(alphabet, true),
                _ => return Err(Error::Parse { what: "event", message: format!("expected 0 or 1, got `{}`", v) }),
            }
        }
        "had" => {
            let l = parse_expr(tokens, pos, alphabet)?;
            let r = parse_expr(tokens, pos, alphabet)?;
            Event::hadamard(l, r)?
        }
        "fc" => {
            let e = parse_expr(tokens, pos, alphabet)?;
            Event::f_complement(e)?
        }
        "cvx" => {
            let w = crate::scalar::parse_rational(&next_word(tokens, pos, "a weight")?)?;
            let l = parse_expr(tokens, pos, alphabet)?;
            let r = parse_expr(tokens, pos, alphabet)?;
            Event::convex(w, l, r)?
        }
        "amp" => {
            let n: u32 = next_word(tokens, pos, "a copy count")?
                .parse()
                .map_err(|_| Error::Parse { what: "event", message: String::from("invalid copy count") })?;
            let t = crate::scalar::parse_rational(&next_word(tokens, pos, "a threshold")?)?;
            let e = parse_expr(tokens, pos, alphabet)?;
            Event::amplify(e, n, t)?
        }
        other => {
            return Err(Error::Parse { what: "event", message: format!("unknown operator `{}`", other) });
        }
    };
    expect_close(tokens, pos)?;
    Ok(event)
}
