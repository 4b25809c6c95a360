//! Operational semantics and exact semantic checks on finite processes.
//!
//! Everything here works on [`CanonicalTerm`]s, whose summands are exactly the
//! outgoing transitions. Open terms are observed by encoding each variable
//! `x` as a fresh visible action followed by `0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{canonicalize, Action, CanonicalTerm, Label, Substitution, Summand, Term, Var};

pub type Trace = Vec<Action>;

pub fn transitions(t: &CanonicalTerm) -> Vec<(Label, CanonicalTerm)> {
    t.summands()
        .iter()
        .filter_map(|s| match s {
            Summand::Prefix(l, b) => Some((l.clone(), b.clone())),
            Summand::Var(_) => None,
        })
        .collect()
}

pub fn tau_successors(t: &CanonicalTerm) -> impl Iterator<Item = &CanonicalTerm> {
    t.summands().iter().filter_map(|s| match s {
        Summand::Prefix(Label::Tau, b) => Some(b),
        _ => None,
    })
}

pub fn has_tau(t: &CanonicalTerm) -> bool {
    tau_successors(t).next().is_some()
}

/// `{u | t => u}`.
pub fn tau_closure(t: &CanonicalTerm) -> BTreeSet<CanonicalTerm> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![t.clone()];
    while let Some(s) = stack.pop() {
        if seen.insert(s.clone()) {
            stack.extend(tau_successors(&s).cloned());
        }
    }
    seen
}

/// Argument of [`weak_step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakLabel {
    Epsilon,
    Tau,
    Act(Action),
}

/// `t => u` for ε, `t => -a-> => u` for an action, `t => -τ-> u` for τ.
pub fn weak_step(t: &CanonicalTerm, label: &WeakLabel) -> BTreeSet<CanonicalTerm> {
    let closure = tau_closure(t);
    match label {
        WeakLabel::Epsilon => closure,
        WeakLabel::Tau => closure.iter().flat_map(|s| tau_successors(s).cloned().collect::<Vec<_>>()).collect(),
        WeakLabel::Act(a) => {
            let mut out = BTreeSet::new();
            for s in &closure {
                for (l, b) in transitions(s) {
                    if l.action() == Some(a) {
                        out.extend(tau_closure(&b));
                    }
                }
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialsKind {
    /// `I(t) = {a ∈ A | t => -a->}`.
    Weak,
    /// `{α ∈ A_τ | t -α->}`.
    Strong,
    /// `{α ∈ A_τ | t => -α->}`.
    WeakWithTau,
}

pub fn initials(t: &CanonicalTerm, kind: InitialsKind) -> BTreeSet<Label> {
    match kind {
        InitialsKind::Strong => transitions(t).into_iter().map(|(l, _)| l).collect(),
        InitialsKind::Weak | InitialsKind::WeakWithTau => {
            let mut out = BTreeSet::new();
            for s in tau_closure(t) {
                for (l, _) in transitions(&s) {
                    if kind == InitialsKind::WeakWithTau || !l.is_tau() {
                        out.insert(l);
                    }
                }
            }
            out
        }
    }
}

/// `I(t)` as a set of actions.
pub fn weak_initials(t: &CanonicalTerm) -> BTreeSet<Action> {
    let mut out = BTreeSet::new();
    for s in tau_closure(t) {
        for (l, _) in transitions(&s) {
            if let Label::Act(a) = l {
                out.insert(a);
            }
        }
    }
    out
}

/// Every weak path `t => -a1-> => ... -ak-> => p` grouped by its trace.
pub fn weak_paths(t: &CanonicalTerm) -> BTreeMap<Trace, BTreeSet<CanonicalTerm>> {
    let mut out: BTreeMap<Trace, BTreeSet<CanonicalTerm>> = BTreeMap::new();
    let mut frontier = vec![(Vec::new(), tau_closure(t))];
    while let Some((trace, states)) = frontier.pop() {
        let mut next: BTreeMap<Action, BTreeSet<CanonicalTerm>> = BTreeMap::new();
        for s in &states {
            for (l, b) in transitions(s) {
                if let Label::Act(a) = l {
                    next.entry(a).or_default().extend(tau_closure(&b));
                }
            }
        }
        for (a, succ) in next {
            let mut tr = trace.clone();
            tr.push(a);
            frontier.push((tr, succ));
        }
        out.entry(trace).or_default().extend(states);
    }
    out
}

/// The trace set `T(t)`.
pub fn traces(t: &CanonicalTerm) -> BTreeSet<Trace> {
    weak_paths(t).into_keys().collect()
}

/// An observable symbol of an open term: an action or a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    Act(Action),
    Var(Var),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Act(a) => write!(f, "{a}"),
            Sym::Var(x) => write!(f, "{x}"),
        }
    }
}

fn decode(a: &Action) -> Sym {
    match a.as_var_marker() {
        Some(x) => Sym::Var(x),
        None => Sym::Act(a.clone()),
    }
}

/// Trace-based observations of a term, with variables observed as `x.0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObservationSet {
    /// Traces over `A` (the set `T_A`, including ε).
    pub traces: BTreeSet<Trace>,
    /// Completed traces over `A`.
    pub completed: BTreeSet<Trace>,
    /// Traces ending in a variable (`T_V`); each is also completed.
    pub var_traces: BTreeSet<(Trace, Var)>,
    /// `(σ, I(p))` for every weak path `t =σ=> p`.
    pub failures: BTreeSet<(Trace, BTreeSet<Sym>)>,
}

impl ObservationSet {
    /// Length of the shortest completed trace over `A`.
    pub fn norm(&self) -> Option<usize> {
        self.completed.iter().map(Vec::len).min()
    }

    /// Whether `(σ, B)` is a weak failure pair.
    pub fn is_failure_pair(&self, trace: &[Action], refusal: &BTreeSet<Action>) -> bool {
        self.failures.iter().any(|(s, x)| {
            s.as_slice() == trace && x.iter().all(|sym| !matches!(sym, Sym::Act(a) if refusal.contains(a)))
        })
    }

    /// Completed traces including the variable-terminated ones, as symbol strings.
    pub fn completed_symbols(&self) -> BTreeSet<Vec<Sym>> {
        let mut out: BTreeSet<Vec<Sym>> =
            self.completed.iter().map(|t| t.iter().cloned().map(Sym::Act).collect()).collect();
        for (t, x) in &self.var_traces {
            let mut v: Vec<Sym> = t.iter().cloned().map(Sym::Act).collect();
            v.push(Sym::Var(x.clone()));
            out.insert(v);
        }
        out
    }
}

pub fn observations(t: &Term) -> ObservationSet {
    let encoded = canonicalize(&t.encode_vars());
    let mut obs = ObservationSet::default();
    for (trace, states) in weak_paths(&encoded) {
        let syms: Vec<Sym> = trace.iter().map(decode).collect();
        match syms.last() {
            Some(Sym::Var(x)) => {
                obs.var_traces.insert((trace[..trace.len() - 1].to_vec(), x.clone()));
                continue;
            }
            _ => {}
        }
        obs.traces.insert(trace.clone());
        for s in states {
            let init: BTreeSet<Sym> = weak_initials(&s).iter().map(decode).collect();
            if init.is_empty() {
                obs.completed.insert(trace.clone());
            }
            obs.failures.insert((trace.clone(), init));
        }
    }
    obs
}

/// Observations of a term that must be closed.
pub fn closed_observations(t: &Term) -> Result<ObservationSet> {
    require_closed(t)?;
    Ok(observations(t))
}

pub(crate) fn require_closed(t: &Term) -> Result<()> {
    if t.is_closed() {
        Ok(())
    } else {
        Err(Error::OpenTerm(t.to_string()))
    }
}

/// The `chop_m` construction over refusal set `b`.
pub fn chop(m: usize, refusal: &BTreeSet<Action>, p: &Term) -> Result<Term> {
    require_closed(p)?;
    Ok(chop_unchecked(m, refusal, p))
}

fn chop_unchecked(m: usize, refusal: &BTreeSet<Action>, p: &Term) -> Term {
    match p {
        Term::Nil | Term::Var(_) => p.clone(),
        Term::Sum(l, r) => Term::sum(chop_unchecked(m, refusal, l), chop_unchecked(m, refusal, r)),
        Term::Prefix(Label::Tau, body) => Term::tau(chop_unchecked(m, refusal, body)),
        Term::Prefix(Label::Act(b), body) => {
            if m == 0 {
                if refusal.contains(b) {
                    Term::repeat(b, 2, Term::Nil)
                } else {
                    Term::Nil
                }
            } else {
                Term::prefix(Label::Act(b.clone()), chop_unchecked(m - 1, refusal, body))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    LeqWf,
    PreorderWf,
    EquivWf,
    PreorderWif,
    EquivWif,
    TraceEq,
    CompletedTraceInclusion,
}

impl Relation {
    pub fn is_equivalence(self) -> bool {
        matches!(self, Relation::EquivWf | Relation::EquivWif | Relation::TraceEq)
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::LeqWf => "leq-wf",
            Relation::PreorderWf => "wf",
            Relation::EquivWf => "wf-eq",
            Relation::PreorderWif => "wif",
            Relation::EquivWif => "wif-eq",
            Relation::TraceEq => "trace-eq",
            Relation::CompletedTraceInclusion => "ct-incl",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        [
            Relation::LeqWf,
            Relation::PreorderWf,
            Relation::EquivWf,
            Relation::PreorderWif,
            Relation::EquivWif,
            Relation::TraceEq,
            Relation::CompletedTraceInclusion,
        ]
        .into_iter()
        .find(|r| r.name() == s)
    }

    /// The preorder whose kernel this equivalence is.
    pub fn preorder(self) -> Relation {
        match self {
            Relation::EquivWf => Relation::PreorderWf,
            Relation::EquivWif => Relation::PreorderWif,
            other => other,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a relation fails between two processes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A weak failure pair of the left process that the right one lacks.
    FailurePair { trace: Trace, refusal: BTreeSet<Action> },
    /// A weak impossible future of the left process that the right one lacks.
    ImpossibleFuture { trace: Trace, futures: BTreeSet<Trace> },
    /// A trace of exactly one side.
    TraceMismatch { trace: Trace, in_left: bool },
    /// A completed trace of the left process that the right one lacks.
    CompletedTrace { trace: Trace },
    /// The left process has an initial τ and the right one does not.
    TauCondition,
    /// The witness refutes the converse direction of an equivalence.
    Converse(Box<Witness>),
    /// The witness applies to the closed instances under `subst`.
    Instance { subst: Substitution, inner: Box<Witness> },
}

pub(crate) fn fmt_trace(t: &[Action]) -> String {
    if t.is_empty() {
        "ε".to_string()
    } else {
        t.iter().map(Action::as_str).collect::<Vec<_>>().join(".")
    }
}

fn fmt_set<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::FailurePair { trace, refusal } => {
                write!(f, "failure pair ({}; {})", fmt_trace(trace), fmt_set(refusal))
            }
            Witness::ImpossibleFuture { trace, futures } => {
                write!(f, "impossible future ({}; {})", fmt_trace(trace), fmt_set(futures.iter().map(|t| fmt_trace(t))))
            }
            Witness::TraceMismatch { trace, in_left } => {
                let side = if *in_left { "left" } else { "right" };
                write!(f, "trace {} only on the {side}", fmt_trace(trace))
            }
            Witness::CompletedTrace { trace } => write!(f, "completed trace {} only on the left", fmt_trace(trace)),
            Witness::TauCondition => f.write_str("tau condition: left has an initial tau, right does not"),
            Witness::Converse(w) => write!(f, "converse: {w}"),
            Witness::Instance { subst, inner } => {
                writeln!(f, "under")?;
                for line in subst.to_string().lines() {
                    writeln!(f, "  {line}")?;
                }
                write!(f, "{inner}")
            }
        }
    }
}

/// Outcome of [`compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Comparison {
    fn ok() -> Self {
        Comparison { holds: true, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Comparison { holds: false, witness: Some(w) }
    }
}

/// Per-process cache of weak paths and per-state observations.
struct Explorer {
    paths: BTreeMap<Trace, BTreeSet<CanonicalTerm>>,
}

#[derive(Default)]
struct StateCache {
    initials: HashMap<CanonicalTerm, BTreeSet<Action>>,
    traces: HashMap<CanonicalTerm, BTreeSet<Trace>>,
}

impl StateCache {
    fn initials(&mut self, s: &CanonicalTerm) -> &BTreeSet<Action> {
        self.initials.entry(s.clone()).or_insert_with(|| weak_initials(s))
    }

    fn traces(&mut self, s: &CanonicalTerm) -> &BTreeSet<Trace> {
        self.traces.entry(s.clone()).or_insert_with(|| traces(s))
    }
}

impl Explorer {
    fn new(t: &CanonicalTerm) -> Self {
        Explorer { paths: weak_paths(t) }
    }
}

fn wf_inclusion(p: &Explorer, q: &Explorer, universe: &BTreeSet<Action>, cache: &mut StateCache) -> Option<Witness> {
    for (trace, states) in &p.paths {
        let q_states = q.paths.get(trace);
        for s in states {
            let ip = cache.initials(s).clone();
            let matched = q_states.is_some_and(|qs| qs.iter().any(|r| cache.initials(r).is_subset(&ip)));
            if !matched {
                let refusal = universe.difference(&ip).cloned().collect();
                return Some(Witness::FailurePair { trace: trace.clone(), refusal });
            }
        }
    }
    None
}

fn wif_inclusion(p: &Explorer, q: &Explorer, cache: &mut StateCache) -> Option<Witness> {
    for (trace, states) in &p.paths {
        let q_states = q.paths.get(trace);
        for s in states {
            let tp = cache.traces(s).clone();
            let matched = q_states.is_some_and(|qs| qs.iter().any(|r| cache.traces(r).is_subset(&tp)));
            if !matched {
                let mut futures = BTreeSet::new();
                for r in q_states.into_iter().flatten() {
                    futures.extend(cache.traces(r).difference(&tp).cloned());
                }
                return Some(Witness::ImpossibleFuture { trace: trace.clone(), futures });
            }
        }
    }
    None
}

fn trace_difference(p: &Explorer, q: &Explorer) -> Option<Witness> {
    if let Some(t) = p.paths.keys().find(|t| !q.paths.contains_key(*t)) {
        return Some(Witness::TraceMismatch { trace: t.clone(), in_left: true });
    }
    q.paths
        .keys()
        .find(|t| !p.paths.contains_key(*t))
        .map(|t| Witness::TraceMismatch { trace: t.clone(), in_left: false })
}

fn compare_canonical(p: &CanonicalTerm, q: &CanonicalTerm, rel: Relation) -> Comparison {
    let ep = Explorer::new(p);
    let eq = Explorer::new(q);
    let mut cache = StateCache::default();
    let mut universe = p.to_term().actions();
    universe.extend(q.to_term().actions());
    let tau_cond = || has_tau(p) && !has_tau(q);
    let verdict = match rel {
        Relation::LeqWf => wf_inclusion(&ep, &eq, &universe, &mut cache),
        Relation::PreorderWf => {
            wf_inclusion(&ep, &eq, &universe, &mut cache).or_else(|| tau_cond().then_some(Witness::TauCondition))
        }
        Relation::PreorderWif => trace_difference(&ep, &eq)
            .or_else(|| wif_inclusion(&ep, &eq, &mut cache))
            .or_else(|| tau_cond().then_some(Witness::TauCondition)),
        Relation::TraceEq => trace_difference(&ep, &eq),
        Relation::CompletedTraceInclusion => {
            let mut found = None;
            'outer: for (trace, states) in &ep.paths {
                if states.iter().any(|s| cache.initials(s).is_empty()) {
                    let in_q = eq
                        .paths
                        .get(trace)
                        .is_some_and(|qs| qs.iter().any(|s| cache.initials(s).is_empty()));
                    if !in_q {
                        found = Some(Witness::CompletedTrace { trace: trace.clone() });
                        break 'outer;
                    }
                }
            }
            found
        }
        Relation::EquivWf | Relation::EquivWif => {
            let forward = compare_canonical(p, q, rel.preorder());
            if !forward.holds {
                return forward;
            }
            let back = compare_canonical(q, p, rel.preorder());
            return match back.witness {
                None => Comparison::ok(),
                Some(w) => Comparison::fail(Witness::Converse(Box::new(w))),
            };
        }
    };
    match verdict {
        None => Comparison::ok(),
        Some(w) => Comparison::fail(w),
    }
}

/// Decides `rel` between closed terms exactly.
pub fn compare(p: &Term, q: &Term, rel: Relation) -> Result<Comparison> {
    require_closed(p)?;
    require_closed(q)?;
    Ok(compare_canonical(&canonicalize(p), &canonicalize(q), rel))
}

/// Evaluates `rel` on every closed instance from `family`; returns the first
/// falsifying instance. Variables missing from a substitution go to `0`.
pub fn compare_open(t: &Term, u: &Term, rel: Relation, family: &[Substitution]) -> Comparison {
    for sigma in family {
        let ct = canonicalize(&sigma.close(t));
        let cu = canonicalize(&sigma.close(u));
        let c = compare_canonical(&ct, &cu, rel);
        if let Some(w) = c.witness {
            return Comparison::fail(Witness::Instance { subst: sigma.clone(), inner: Box::new(w) });
        }
    }
    Comparison::ok()
}
