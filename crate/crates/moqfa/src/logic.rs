//! Easy logical formulas and their compilation to DFAs.
//!
//! Two leaf kinds are supported, each closed under boolean combinations:
//!
//! - existential first-order leaves `fo(a₁,…,a_k)`: an ordered, adjacent-
//!   distinct letter pattern; the defined language is the basis language
//!   `Σ*a₁Σ*⋯Σ*a_kΣ*`;
//! - until-chain temporal leaves `ltl(Γ₁,…,Γ_k)` over letter sets, read as
//!   `φ_Γ₁ U (φ_Γ₂ U (⋯ U φ_ε))` with `φ_Γ` true on a suffix whose first
//!   letter is in `Γ` and `φ_ε` true on the empty suffix; the defined
//!   language is `Γ₁*⋯Γ_k*`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabet;
use crate::basis::BasisSeq;
use crate::dfa::{basis_dfa, Dfa};
use crate::error::{Error, Result};

/// Existential first-order leaf: an adjacent-distinct letter pattern.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EasyFo(pub BasisSeq);

/// Until-chain temporal leaf: a sequence of nonempty letter sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EasyLtl(pub Vec<BTreeSet<char>>);

impl EasyLtl {
    pub fn new(sets: Vec<BTreeSet<char>>) -> Result<Self> {
        if sets.iter().any(BTreeSet::is_empty) {
            return Err(Error::Parse { what: "formula", message: String::from("empty letter set in ltl leaf") });
        }
        Ok(EasyLtl(sets))
    }
}

/// Boolean tree over homogeneous leaves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogicExpr<L> {
    Leaf(L),
    Not(Box<LogicExpr<L>>),
    And(Box<LogicExpr<L>>, Box<LogicExpr<L>>),
    Or(Box<LogicExpr<L>>, Box<LogicExpr<L>>),
}

impl<L> LogicExpr<L> {
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            LogicExpr::Leaf(l) => out.push(l),
            LogicExpr::Not(e) => e.collect(out),
            LogicExpr::And(l, r) | LogicExpr::Or(l, r) => {
                l.collect(out);
                r.collect(out);
            }
        }
    }

    fn compile_with(&self, alphabet: &Alphabet, leaf: &dyn Fn(&L) -> Result<Dfa>) -> Result<Dfa> {
        Ok(match self {
            LogicExpr::Leaf(l) => leaf(l)?,
            LogicExpr::Not(e) => e.compile_with(alphabet, leaf)?.complement().minimize(),
            LogicExpr::And(l, r) => {
                l.compile_with(alphabet, leaf)?.intersect(&r.compile_with(alphabet, leaf)?)?.minimize()
            }
            LogicExpr::Or(l, r) => {
                l.compile_with(alphabet, leaf)?.union(&r.compile_with(alphabet, leaf)?)?.minimize()
            }
        })
    }
}

/// A parsed formula: first-order or temporal, never mixed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Fo(LogicExpr<EasyFo>),
    Ltl(LogicExpr<EasyLtl>),
}

impl Formula {
    /// Compiles over `alphabet` through the appropriate leaf compiler.
    pub fn compile(&self, alphabet: &Alphabet) -> Result<Dfa> {
        match self {
            Formula::Fo(e) => compile_fo(e, alphabet),
            Formula::Ltl(e) => compile_ltl(e, alphabet),
        }
    }
}

/// Compiles a first-order expression: each leaf defines its basis language.
pub fn compile_fo(expr: &LogicExpr<EasyFo>, alphabet: &Alphabet) -> Result<Dfa> {
    expr.compile_with(alphabet, &|EasyFo(seq)| basis_dfa(seq, alphabet))
}

/// Compiles a temporal expression: each leaf defines `Γ₁*⋯Γ_k*`, built as a
/// layered automaton that tracks the least layer the word can currently sit
/// in, falling through to later layers as letters force progress.
pub fn compile_ltl(expr: &LogicExpr<EasyLtl>, alphabet: &Alphabet) -> Result<Dfa> {
    expr.compile_with(alphabet, &|leaf| compile_ltl_leaf(leaf, alphabet))
}

fn compile_ltl_leaf(leaf: &EasyLtl, alphabet: &Alphabet) -> Result<Dfa> {
    let sets = &leaf.0;
    for set in sets {
        if let Some(c) = set.iter().find(|c| !alphabet.contains(**c)) {
            return Err(Error::Parse {
                what: "formula",
                message: format!("letter `{}` is not in the alphabet `{}`", c, alphabet),
            });
        }
    }
    let k = sets.len();
    // states 0..=k hold the least admissible layer; k+1 is the dead sink
    let sink = k + 1;
    Ok(Dfa::from_fn(alphabet.clone(), k + 2, 0, 0..=k, |q, c| {
        if q == sink {
            return sink;
        }
        (q.max(1)..=k).find(|&j| sets[j - 1].contains(&c)).unwrap_or(sink)
    })
    .minimize())
}

/// Direct recursive model check of an until-chain leaf against a word:
/// `[Γ₁,…,Γ_k]` holds on `w` when some suffix satisfies `[Γ₂,…,Γ_k]` and
/// every earlier position carries a letter from `Γ₁`; the empty chain holds
/// exactly on the empty suffix.
pub fn model_check_ltl(leaf: &EasyLtl, w: &str) -> bool {
    let letters: Vec<char> = w.chars().collect();
    check_chain(&leaf.0, &letters)
}

fn check_chain(sets: &[BTreeSet<char>], suffix: &[char]) -> bool {
    match sets.split_first() {
        None => suffix.is_empty(),
        Some((first, rest)) => (0..=suffix.len()).any(|i| {
            suffix[..i].iter().all(|c| first.contains(c)) && check_chain(rest, &suffix[i..])
        }),
    }
}

/// Parses the formula grammar: leaves `fo(a,b,a)` / `ltl({a,b},{c})`,
/// operators `!`, `&`, `|` (in decreasing precedence), and parentheses.
/// Leaf kinds must not be mixed within one formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut parser = FormulaParser { chars: text.chars().collect(), pos: 0 };
    let expr = parser.or_expr()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    match expr {
        Raw::Fo(e) => Ok(Formula::Fo(e)),
        Raw::Ltl(e) => Ok(Formula::Ltl(e)),
    }
}

enum Raw {
    Fo(LogicExpr<EasyFo>),
    Ltl(LogicExpr<EasyLtl>),
}

struct FormulaParser {
    chars: Vec<char>,
    pos: usize,
}

impl FormulaParser {
    fn error(&self, message: &str) -> Error {
        Error::Parse { what: "formula", message: format!("{} at position {}", message, self.pos) }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, expected: char) -> Result<()> {
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", expected)))
        }
    }

    fn or_expr(&mut self) -> Result<Raw> {
        let mut left = self.and_expr()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let right = self.and_expr()?;
            left = combine(left, right, |l, r| LogicExpr::Or(Box::new(l), Box::new(r)), |l, r| {
                LogicExpr::Or(Box::new(l), Box::new(r))
            })?;
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Raw> {
        let mut left = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let right = self.unary()?;
            left = combine(left, right, |l, r| LogicExpr::And(Box::new(l), Box::new(r)), |l, r| {
                LogicExpr::And(Box::new(l), Box::new(r))
            })?;
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Raw> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(match self.unary()? {
                    Raw::Fo(e) => Raw::Fo(LogicExpr::Not(Box::new(e))),
                    Raw::Ltl(e) => Raw::Ltl(LogicExpr::Not(Box::new(e))),
                })
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.or_expr()?;
                self.eat(')')?;
                Ok(inner)
            }
            _ => self.leaf(),
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_alphanumeric() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn leaf(&mut self) -> Result<Raw> {
        self.skip_ws();
        let name = self.ident();
        match name.as_str() {
            "fo" => {
                self.eat('(')?;
                let mut letters = Vec::new();
                loop {
                    self.skip_ws();
                    let ident = self.ident();
                    let mut cs: Vec<char> = ident.chars().collect();
                    if cs.len() != 1 {
                        return Err(self.error("expected a single letter"));
                    }
                    letters.push(cs.pop().expect("length checked"));
                    match self.peek() {
                        Some(',') => {
                            self.pos += 1;
                        }
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected `,` or `)`")),
                    }
                }
                Ok(Raw::Fo(LogicExpr::Leaf(EasyFo(BasisSeq::new(letters)?))))
            }
            "ltl" => {
                self.eat('(')?;
                let mut sets = Vec::new();
                loop {
                    self.eat('{')?;
                    let mut set = BTreeSet::new();
                    loop {
                        self.skip_ws();
                        let ident = self.ident();
                        let mut cs: Vec<char> = ident.chars().collect();
                        if cs.len() != 1 {
                            return Err(self.error("expected a single letter"));
                        }
                        set.insert(cs.pop().expect("length checked"));
                        match self.peek() {
                            Some(',') => {
                                self.pos += 1;
                            }
                            Some('}') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `}`")),
                        }
                    }
                    sets.push(set);
                    match self.peek() {
                        Some(',') => {
                            self.pos += 1;
                        }
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected `,` or `)`")),
                    }
                }
                Ok(Raw::Ltl(LogicExpr::Leaf(EasyLtl::new(sets)?)))
            }
            other => Err(self.error(&format!("expected `fo` or `ltl`, got `{}`", other))),
        }
    }
}

fn combine(
    left: Raw,
    right: Raw,
    fo: impl Fn(LogicExpr<EasyFo>, LogicExpr<EasyFo>) -> LogicExpr<EasyFo>,
    ltl: impl Fn(LogicExpr<EasyLtl>, LogicExpr<EasyLtl>) -> LogicExpr<EasyLtl>,
) -> Result<Raw> {
    match (left, right) {
        (Raw::Fo(l), Raw::Fo(r)) => Ok(Raw::Fo(fo(l, r))),
        (Raw::Ltl(l), Raw::Ltl(r)) => Ok(Raw::Ltl(ltl(l, r))),
        _ => Err(Error::Parse { what: "formula", message: String::from("fo and ltl leaves cannot be mixed") }),
    }
}

impl fmt::Display for EasyFo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fo(")?;
        for (i, c) in self.0.letters().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for EasyLtl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ltl(")?;
        for (i, set) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, c) in set.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", c)?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}
