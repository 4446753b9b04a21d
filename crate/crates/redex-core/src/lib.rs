//! Rewriting engine for a higher-order pattern calculus and a small
//! first-order calculus with a parallel disjunction rule.
//!
//! The engine works with *positioned steps*: a step is a source term plus the
//! position of a contractible redex inside it. On top of single steps it
//! provides
//!
//! - residuals: what is left of one step after contracting another,
//! - the embedding (tree-prefix) and gripping (binder-capture) relations,
//! - simultaneous contraction of step sets and their developments,
//! - reduction sequences of step sets, together with the depth measure used
//!   to compare them,
//! - checkers for the axioms an abstract rewriting system with residuals is
//!   expected to satisfy, run over exhaustively enumerated term corpora,
//! - a normalizing strategy that contracts, at each round, a set of steps
//!   that is necessary and grips nothing, plus bounded oracles that verify
//!   those two properties independently.
//!
//! The pattern calculus lives in [`term`], [`matching`], [`reduction`],
//! [`multistep`] and [`strategy`]; the disjunction calculus in [`por`]; the
//! axiom harness in [`ars`] with term corpora from [`corpus`]; the surface
//! syntax shared by the CLI and the C API in [`syntax`].

pub mod ars;
pub mod corpus;
pub mod matching;
pub mod multistep;
pub mod por;
pub mod reduction;
pub mod strategy;
pub mod syntax;
pub mod term;

pub use ars::{ArsInstance, AxiomName, AxiomReport, PpcArs};
pub use matching::{Match, MatchError};
pub use multistep::{Multireduction, Multistep};
pub use por::{PorArs, PorStep, PorTerm};
pub use reduction::Step;
pub use strategy::{NormalizeOutcome, NormalizeTrace, Selection};
pub use term::{Position, Substitution, Symbol, Term};
