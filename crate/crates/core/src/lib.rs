//! Solver for epistemic specifications: answer-set programs extended with
//! subjective literals such as `K l` and `-K l`.
//!
//! The pipeline is parse → ground → rewrite to core form (`K`/`-K` only)
//! → preprocess with partial models → enumerate assignments of the
//! epistemic literals and test each candidate against the answer sets of
//! the reduced program.

pub mod asp;
pub mod encodings;
pub mod engine;
pub mod frontend;
pub mod lang;
pub mod transform;

pub use lang::{
    complement, program_literals, Atom, BeliefSet, ChoiceHead, Head, Modality, ObjectiveLiteral, Program, Rule,
    SubjectiveLiteral, Symbol, Term, WorldView,
};
