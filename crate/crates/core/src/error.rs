use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lexical error at offset {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("`{0}` is used both as an action and as a variable")]
    NameClash(String),
    #[error("expected a closed term, found variables in `{0}`")]
    OpenTerm(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("proof error: {0}")]
    Proof(#[from] ProofError),
    #[error("format error: {0}")]
    Format(String),
    #[error("saturation over {found} symbols exceeds the cap of {cap}")]
    SymbolCap { found: usize, cap: usize },
    #[error("m = {m} is too small: the proviso needs m {relation} {bound}")]
    MTooSmall { m: usize, relation: &'static str, bound: usize },
    #[error("axiom `{axiom}` is not sound for {relation}: {detail}")]
    UnsoundAxiom { axiom: String, relation: String, detail: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Reasons a derivation fails to check.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("axiom `{axiom}` under the given substitution does not yield `{conclusion}`")]
    SubstitutionMismatch { axiom: String, conclusion: String },
    #[error("inequation used right-to-left: {0}")]
    ReversedInequation(String),
    #[error("congruence shape mismatch: {0}")]
    CongruenceShape(String),
    #[error("transitivity chain broken: {0}")]
    Chain(String),
    #[error("node claims an equation but only derives an inequation: {0}")]
    KindMismatch(String),
    #[error("malformed node: {0}")]
    Malformed(String),
}
