//! Measure-only one-way quantum finite automata (MOn-1QFA).
//!
//! A MOn-1QFA reads its input one letter at a time and, instead of applying a
//! unitary evolution, performs a projective measurement per letter. This crate
//! provides the full toolbox around that model:
//!
//! - [`scalar`] / [`matrix`]: small dense complex linear algebra with two
//!   interchangeable backends, exact (rationals extended by square roots) and
//!   `f64`. Exact inputs give exact probabilities, so cut-point claims can be
//!   checked as equalities rather than within a tolerance.
//! - [`qfa`]: the automaton model itself (observables as projector families,
//!   density-matrix evolution, acceptance probabilities, branch enumeration,
//!   cut-point classification) plus the Latvian variant with unitaries.
//! - [`basis`]: the two-projector "up/down" observables and the basis automata
//!   recognizing subword-pattern languages `Σ*a₁Σ*⋯Σ*a_kΣ*` with isolated
//!   cut-point.
//! - [`closure`] / [`event`]: combinators on acceptance events — Hadamard
//!   product, f-complement, convex combination, majority amplification — both
//!   as lazy expression trees and as concrete product automata.
//! - [`dfa`], [`regex`], [`profile`]: classical automata support (minimization,
//!   boolean algebra, equivalence, SCC structure, variation, a small regex
//!   compiler, and the subword-profile machine used for decomposition).
//! - [`monoid`]: transition/syntactic monoids, Green's relations, block groups,
//!   literal idempotency.
//! - [`decide`]: the decision procedure for recognizability by a MOn-1QFA with
//!   isolated cut-point, together with the constructive round-trip that
//!   decomposes such a language into basis languages and synthesizes a
//!   recognizing event with cut-point 1/2.
//! - [`logic`]: compilers from easy existential first-order formulas and easy
//!   until-chain temporal formulas to DFAs.
//! - [`corpus`]: seeded random generators and the randomized invariant suite
//!   shared by tests and the CLI.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command-line
//! interface live in the companion `moqfa-cli` crate.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod alphabet;
pub mod basis;
pub mod closure;
pub mod corpus;
pub mod decide;
pub mod dfa;
pub mod event;
mod graph;
pub mod logic;
pub mod matrix;
pub mod monoid;
pub mod profile;
pub mod qfa;
pub mod regex;
pub mod scalar;

mod error;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use qfa::{Label, MonQfa, Observable};
pub use scalar::{Exact, ExactReal, Rational, RealScalar, Scalar, C64};
