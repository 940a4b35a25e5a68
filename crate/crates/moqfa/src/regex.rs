//! A small regex subset compiled to DFAs, used as a convenient way to write
//! test languages and CLI inputs.
//!
//! Grammar: literals, concatenation, union `|`, star `*`, parentheses, and
//! `.` as a shorthand for any alphabet letter. Empty alternation branches are
//! allowed and match the empty word, so `(|a)` is `ε|a`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Empty,
    Lit(char),
    Dot,
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(alloc::boxed::Box<Ast>),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { what: "regex", message: format!("{} at position {} in `{}`", message, self.pos, self.text) }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<Ast> {
        let mut branches = alloc::vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Ast::Alt(branches) })
    }

    fn concat(&mut self) -> Result<Ast> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.repeat()?);
        }
        Ok(match parts.len() {
            0 => Ast::Empty,
            1 => parts.pop().unwrap(),
            _ => Ast::Concat(parts),
        })
    }

    fn repeat(&mut self) -> Result<Ast> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            node = Ast::Star(alloc::boxed::Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('.') => {
                self.pos += 1;
                Ok(Ast::Dot)
            }
            Some('*') => Err(self.error("`*` needs something to repeat")),
            Some(c) => {
                self.pos += 1;
                Ok(Ast::Lit(c))
            }
            None => Err(self.error("unexpected end of pattern")),
        }
    }
}

fn literals(ast: &Ast, out: &mut BTreeSet<char>) {
    match ast {
        Ast::Lit(c) => {
            out.insert(*c);
        }
        Ast::Concat(parts) | Ast::Alt(parts) => parts.iter().for_each(|p| literals(p, out)),
        Ast::Star(inner) => literals(inner, out),
        Ast::Empty | Ast::Dot => {}
    }
}

fn uses_dot(ast: &Ast) -> bool {
    match ast {
        Ast::Dot => true,
        Ast::Concat(parts) | Ast::Alt(parts) => parts.iter().any(uses_dot),
        Ast::Star(inner) => uses_dot(inner),
        Ast::Empty | Ast::Lit(_) => false,
    }
}

/// Thompson NFA fragment with a single entry and a single exit.
struct Nfa {
    eps: Vec<Vec<usize>>,
    steps: Vec<Vec<(char, usize)>>,
}

impl Nfa {
    fn new() -> Self {
        Nfa { eps: Vec::new(), steps: Vec::new() }
    }

    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.steps.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, ast: &Ast, alphabet: &Alphabet) -> (usize, usize) {
        match ast {
            Ast::Empty => {
                let s = self.state();
                let t = self.state();
                self.eps[s].push(t);
                (s, t)
            }
            Ast::Lit(c) => {
                let s = self.state();
                let t = self.state();
                self.steps[s].push((*c, t));
                (s, t)
            }
            Ast::Dot => {
                let s = self.state();
                let t = self.state();
                for c in alphabet.iter() {
                    self.steps[s].push((c, t));
                }
                (s, t)
            }
            Ast::Concat(parts) => {
                let mut entry: Option<usize> = None;
                let mut exit: Option<usize> = None;
                for p in parts {
                    let (s, t) = self.build(p, alphabet);
                    match exit {
                        Some(prev) => self.eps[prev].push(s),
                        None => entry = Some(s),
                    }
                    exit = Some(t);
                }
                (entry.expect("concat is non-empty"), exit.expect("concat is non-empty"))
            }
            Ast::Alt(parts) => {
                let s = self.state();
                let t = self.state();
                for p in parts {
                    let (ps, pt) = self.build(p, alphabet);
                    self.eps[s].push(ps);
                    self.eps[pt].push(t);
                }
                (s, t)
            }
            Ast::Star(inner) => {
                let s = self.state();
                let t = self.state();
                let (is, it) = self.build(inner, alphabet);
                self.eps[s].push(is);
                self.eps[s].push(t);
                self.eps[it].push(is);
                self.eps[it].push(t);
                (s, t)
            }
        }
    }

    fn eps_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    }
}

/// Compiles a pattern over an explicit alphabet, or over the set of literal
/// letters occurring in it. The result is determinized and minimized.
pub fn compile_regex(pattern: &str, alphabet: Option<&Alphabet>) -> Result<Dfa> {
    let mut parser = Parser { chars: pattern.chars().collect(), pos: 0, text: pattern };
    let ast = parser.alternation()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let mut lits = BTreeSet::new();
    literals(&ast, &mut lits);
    let alphabet = match alphabet {
        Some(a) => {
            if let Some(c) = lits.iter().find(|c| !a.contains(**c)) {
                return Err(Error::Parse {
                    what: "regex",
                    message: format!("literal `{}` is not in the alphabet `{}`", c, a),
                });
            }
            a.clone()
        }
        None => {
            if lits.is_empty() && uses_dot(&ast) {
                return Err(Error::Parse {
                    what: "regex",
                    message: String::from("`.` needs an explicit alphabet when no literals occur"),
                });
            }
            Alphabet::new(lits.iter().copied())
        }
    };
    if alphabet.is_empty() {
        return Err(Error::Parse { what: "regex", message: String::from("empty alphabet") });
    }
    let mut nfa = Nfa::new();
    let (start, accept) = nfa.build(&ast, &alphabet);

    // subset construction
    let start_set = nfa.eps_closure(&BTreeSet::from([start]));
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut sets: Vec<BTreeSet<usize>> = alloc::vec![start_set.clone()];
    index.insert(start_set, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < sets.len() {
        let current = sets[head].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for c in alphabet.iter() {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &(lc, t) in &nfa.steps[s] {
                    if lc == c {
                        next.insert(t);
                    }
                }
            }
            let next = nfa.eps_closure(&next);
            let id = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        head += 1;
    }
    let finals: BTreeSet<usize> =
        sets.iter().enumerate().filter(|(_, s)| s.contains(&accept)).map(|(i, _)| i).collect();
    Ok(Dfa::from_raw(alphabet, delta, 0, finals).minimize())
}
