//! Terms of BCCS(A), alphabets, substitutions and canonical forms modulo A1-4.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name reserved for the silent action.
pub const TAU: &str = "tau";

/// Prefix of the internal action names that stand in for variables when an
/// open term is observed "as if each variable x were a subterm x.0".
pub(crate) const VAR_MARKER: char = '$';

/// A visible action name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    pub fn new(name: &str) -> Self {
        Action(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn var_marker(x: &Var) -> Self {
        Action(Arc::from(format!("{VAR_MARKER}{}", x.as_str())))
    }

    /// The variable encoded by a marker action, if this is one.
    pub(crate) fn as_var_marker(&self) -> Option<Var> {
        self.0.strip_prefix(VAR_MARKER).map(Var::new)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A process variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A transition label: the silent action or a visible one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    Tau,
    Act(Action),
}

impl Label {
    pub fn act(name: &str) -> Self {
        Label::Act(Action::new(name))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Tau => None,
            Label::Act(a) => Some(a),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str(TAU),
            Label::Act(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphabetMode {
    Finite,
    Countable,
}

/// The set A of visible actions.
///
/// In finite mode the alphabet is an explicit nonempty list. In countable mode
/// every well-formed action name is a member and fresh actions `#0, #1, ...`
/// can be minted on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    mode: AlphabetMode,
    names: Vec<Action>,
}

impl Alphabet {
    pub fn finite<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Config("a finite alphabet must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for n in names {
            let n = n.as_ref().trim();
            if n == TAU {
                return Err(Error::Config("`tau` is reserved and cannot be an action".into()));
            }
            if !is_action_name(n) {
                return Err(Error::Config(format!("invalid action name `{n}`")));
            }
            if seen.insert(n.to_string()) {
                out.push(Action::new(n));
            }
        }
        Ok(Alphabet { mode: AlphabetMode::Finite, names: out })
    }

    pub fn countable() -> Self {
        Alphabet { mode: AlphabetMode::Countable, names: Vec::new() }
    }

    /// Parses `a,b,c` or `countable`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let spec = spec.strip_prefix("alphabet:").map(str::trim).unwrap_or(spec);
        if spec == "countable" {
            return Ok(Self::countable());
        }
        let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::finite(&names)
    }

    pub fn mode(&self) -> &AlphabetMode {
        &self.mode
    }

    pub fn is_finite(&self) -> bool {
        self.mode == AlphabetMode::Finite
    }

    /// Declared actions (all of A in finite mode; empty in countable mode).
    pub fn actions(&self) -> &[Action] {
        &self.names
    }

    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.names.len())
    }

    pub fn contains(&self, a: &Action) -> bool {
        match self.mode {
            AlphabetMode::Finite => self.names.contains(a),
            AlphabetMode::Countable => a.as_str() != TAU && is_action_name(a.as_str()),
        }
    }

    /// First `#k` not in `avoid`.
    pub fn fresh_action(&self, avoid: &BTreeSet<Action>) -> Action {
        (0..)
            .map(|k| Action::new(&format!("#{k}")))
            .find(|a| !avoid.contains(a) && !self.names.contains(a))
            .expect("unbounded search")
    }

    /// Rejects terms mentioning actions outside the alphabet.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        for a in t.actions() {
            if !self.contains(&a) {
                return Err(Error::UnknownAction(a.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            AlphabetMode::Countable => f.write_str("countable"),
            AlphabetMode::Finite => {
                let names: Vec<&str> = self.names.iter().map(Action::as_str).collect();
                f.write_str(&names.join(","))
            }
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_action_name(s: &str) -> bool {
    if let Some(digits) = s.strip_prefix('#') {
        return !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit());
    }
    is_ident(s) && s != TAU
}

/// Abstract syntax of BCCS(A) terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Nil,
    Prefix(Label, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Var(Var),
}

impl Term {
    pub fn prefix(label: Label, body: Term) -> Term {
        Term::Prefix(label, Box::new(body))
    }

    pub fn act(a: &str, body: Term) -> Term {
        Term::prefix(Label::act(a), body)
    }

    pub fn tau(body: Term) -> Term {
        Term::prefix(Label::Tau, body)
    }

    pub fn var(x: &str) -> Term {
        Term::Var(Var::new(x))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(Box::new(l), Box::new(r))
    }

    /// Left-nested sum of the given terms; the empty sum is `0`.
    pub fn sum_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms.into_iter().reduce(Term::sum).unwrap_or(Term::Nil)
    }

    /// `a^n.body`.
    pub fn repeat(a: &Action, n: usize, body: Term) -> Term {
        (0..n).fold(body, |acc, _| Term::prefix(Label::Act(a.clone()), acc))
    }

    /// Top-level summands with sums flattened and `0` summands dropped.
    pub fn summands(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            match t {
                Term::Nil => {}
                Term::Sum(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Nil | Term::Var(_) => 0,
            Term::Prefix(Label::Tau, t) => t.depth(),
            Term::Prefix(Label::Act(_), t) => 1 + t.depth(),
            Term::Sum(l, r) => l.depth().max(r.depth()),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Nil => {}
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Prefix(_, t) => t.collect_vars(out),
            Term::Sum(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn actions(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<Action>) {
            match t {
                Term::Nil | Term::Var(_) => {}
                Term::Prefix(l, b) => {
                    if let Label::Act(a) = l {
                        out.insert(a.clone());
                    }
                    go(b, out);
                }
                Term::Sum(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Nil => true,
            Term::Var(_) => false,
            Term::Prefix(_, t) => t.is_closed(),
            Term::Sum(l, r) => l.is_closed() && r.is_closed(),
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Nil => Term::Nil,
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Prefix(l, t) => Term::prefix(l.clone(), t.apply(sigma)),
            Term::Sum(l, r) => Term::sum(l.apply(sigma), r.apply(sigma)),
        }
    }

    /// Replaces every variable occurrence `x` by `$x.0`.
    pub(crate) fn encode_vars(&self) -> Term {
        match self {
            Term::Nil => Term::Nil,
            Term::Var(x) => Term::prefix(Label::Act(Action::var_marker(x)), Term::Nil),
            Term::Prefix(l, t) => Term::prefix(l.clone(), t.encode_vars()),
            Term::Sum(l, r) => Term::sum(l.encode_vars(), r.encode_vars()),
        }
    }
}

/// A substitution; variables outside its domain are mapped to themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Term)>>(pairs: I) -> Self {
        Substitution { map: pairs.into_iter().collect() }
    }

    pub fn insert(&mut self, x: Var, t: Term) {
        self.map.insert(x, t);
    }

    pub fn with(mut self, x: &str, t: Term) -> Self {
        self.insert(Var::new(x), t);
        self
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Every image is variable-free.
    pub fn is_closed(&self) -> bool {
        self.map.values().all(Term::is_closed)
    }

    /// Closes `t` under this substitution, sending unmapped variables to `0`.
    pub fn close(&self, t: &Term) -> Term {
        let mut full = self.clone();
        for x in t.vars() {
            full.map.entry(x).or_insert(Term::Nil);
        }
        t.apply(&full)
    }

    /// `self` after `inner`: maps x to self(inner(x)) on the domain of `inner`.
    pub fn compose_after(&self, inner: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (x, t) in &inner.map {
            out.insert(x.clone(), t.apply(self));
        }
        out
    }

    pub fn map_images(&self, f: impl Fn(&Term) -> Term) -> Substitution {
        Substitution { map: self.map.iter().map(|(x, t)| (x.clone(), f(t))).collect() }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{x} := {t}")?;
        }
        Ok(())
    }
}

/// One summand of a canonical term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Summand {
    Prefix(Label, CanonicalTerm),
    Var(Var),
}

/// A term flattened into an ordered collection of summands.
///
/// Built by [`canonicalize`] the collection is duplicate-free, and two terms
/// get the same value iff they are equal modulo A1-4. Built by [`ac_form`]
/// duplicates are kept, which gives equality modulo A1, A2 and A4 only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTerm(Arc<Vec<Summand>>);

impl fmt::Debug for CanonicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Display for CanonicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl CanonicalTerm {
    pub fn nil() -> Self {
        CanonicalTerm(Arc::new(Vec::new()))
    }

    pub(crate) fn from_summands(mut items: Vec<Summand>, dedup: bool) -> Self {
        items.sort();
        if dedup {
            items.dedup();
        }
        CanonicalTerm(Arc::new(items))
    }

    pub fn summands(&self) -> &[Summand] {
        &self.0
    }

    pub fn is_nil(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_term(&self) -> Term {
        Term::sum_all(self.0.iter().map(|s| match s {
            Summand::Var(x) => Term::Var(x.clone()),
            Summand::Prefix(l, b) => Term::prefix(l.clone(), b.to_term()),
        }))
    }

    pub fn depth(&self) -> usize {
        self.0
            .iter()
            .map(|s| match s {
                Summand::Var(_) => 0,
                Summand::Prefix(Label::Tau, b) => b.depth(),
                Summand::Prefix(Label::Act(_), b) => 1 + b.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_closed(&self) -> bool {
        self.0.iter().all(|s| match s {
            Summand::Var(_) => false,
            Summand::Prefix(_, b) => b.is_closed(),
        })
    }
}

fn flatten(t: &Term, dedup: bool) -> CanonicalTerm {
    let mut items = Vec::new();
    for s in t.summands() {
        match s {
            Term::Var(x) => items.push(Summand::Var(x.clone())),
            Term::Prefix(l, b) => items.push(Summand::Prefix(l.clone(), flatten(b, dedup))),
            Term::Nil | Term::Sum(..) => unreachable!("summands are prefixes or variables"),
        }
    }
    CanonicalTerm::from_summands(items, dedup)
}

/// The representative of `t` modulo A1-4.
pub fn canonicalize(t: &Term) -> CanonicalTerm {
    flatten(t, false).dedup_deep()
}

impl CanonicalTerm {
    fn dedup_deep(&self) -> CanonicalTerm {
        let items = self
            .0
            .iter()
            .map(|s| match s {
                Summand::Var(x) => Summand::Var(x.clone()),
                Summand::Prefix(l, b) => Summand::Prefix(l.clone(), b.dedup_deep()),
            })
            .collect();
        CanonicalTerm::from_summands(items, true)
    }
}

/// The representative of `t` modulo A1, A2 and A4 (sums as multisets).
pub fn ac_form(t: &Term) -> CanonicalTerm {
    flatten(t, false)
}

/// Equality modulo A1, A2, A4.
pub fn ac_equal(t: &Term, u: &Term) -> bool {
    ac_form(t) == ac_form(u)
}

/// Equality modulo A1-4.
pub fn bisim_equal(t: &Term, u: &Term) -> bool {
    canonicalize(t) == canonicalize(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s, &Alphabet::countable()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&p("x + 0")), canonicalize(&p("x")));
        assert_eq!(canonicalize(&p("a.0 + a.0")), canonicalize(&p("a.0")));
        assert_eq!(canonicalize(&p("(x + y) + z")), canonicalize(&p("x + (y + z)")));
        assert_ne!(ac_form(&p("a.0 + a.0")), ac_form(&p("a.0")));
        assert_eq!(ac_form(&p("(x + 0) + y")), ac_form(&p("y + x")));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(p("0").depth(), 0);
        assert_eq!(p("tau.a.0").depth(), 1);
        assert_eq!(p("a.b.0 + c.0").depth(), 2);
        assert_eq!(p("x").depth(), 0);
    }

    #[test]
    fn substitution_examples() {
        let s = Substitution::new().with("x", p("a.0"));
        assert_eq!(p("x + b.0").apply(&s), p("a.0 + b.0"));
        assert_eq!(p("a.x + y").apply(&Substitution::new()), p("a.x + y"));
        assert_eq!(p("tau.x").apply(&s), p("tau.a.0"));
    }

    #[test]
    fn fresh_actions_avoid_existing() {
        let alpha = Alphabet::countable();
        let mut avoid = BTreeSet::new();
        avoid.insert(Action::new("#0"));
        assert_eq!(alpha.fresh_action(&avoid).as_str(), "#1");
    }

    #[test]
    fn finite_alphabet_rejects_tau_and_empty() {
        assert!(Alphabet::finite::<&str>(&[]).is_err());
        assert!(Alphabet::finite(&["tau"]).is_err());
        assert_eq!(Alphabet::parse("alphabet: a, b").unwrap().actions().len(), 2);
    }
}
