//! Axiomatisations of weak failures and weak impossible futures semantics
//! for basic CCS with the silent action.

pub mod axioms;
pub mod cli;
pub mod decide_wf;
pub mod error;
pub mod family;
pub mod lts;
pub mod negative;
pub mod normal;
pub mod parse;
pub mod proof;
pub mod random;
pub mod scripts;
pub mod soundness;
pub mod term;
pub mod wif;

pub use error::{Error, ProofError, Result};
pub use parse::{parse_term, parse_terms};
pub use term::{Action, Alphabet, CanonicalTerm, Label, Substitution, Term, Var};
