//! The counterexample families behind the non-axiomatizability results for
//! weak impossible futures, their invariants, and separation certificates
//! relative to a given finite axiomatization.

use std::collections::BTreeSet;
use std::fmt;

use crate::axioms::{AxiomSet, Kind, Statement};
use crate::error::{Error, Result};
use crate::family::canonical_family;
use crate::lts::{compare, compare_open, observations, tau_closure, tau_successors, Relation};
use crate::term::{canonicalize, Action, Alphabet, CanonicalTerm, Label, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// `τ.a^{2m}.0 + τ.(a^m.0 + a^{2m}.0) ≈ τ.(a^m.0 + a^{2m}.0)`.
    Equation,
    /// `τ.a^m.x + Φ_m ≼ Φ_m`, for `1 < |A| < ∞`.
    Multiaction,
    /// `a^m.x ≼ a^m.x + x`, for `|A| = 1`.
    Singleton,
}

impl FamilyId {
    pub fn parse(s: &str) -> Option<FamilyId> {
        match s {
            "eq" | "equation" => Some(FamilyId::Equation),
            "phi" | "multiaction" => Some(FamilyId::Multiaction),
            "single" | "singleton" => Some(FamilyId::Singleton),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Equation => "eq",
            FamilyId::Multiaction => "phi",
            FamilyId::Singleton => "single",
        }
    }

    /// The relation the family is sound for.
    pub fn relation(self) -> Relation {
        match self {
            FamilyId::Equation => Relation::EquivWif,
            _ => Relation::PreorderWif,
        }
    }

    fn check_alphabet(self, alphabet: &Alphabet) -> Result<()> {
        let ok = match self {
            FamilyId::Equation => true,
            FamilyId::Multiaction => matches!(alphabet.len(), Some(n) if n > 1),
            FamilyId::Singleton => alphabet.len() == Some(1),
        };
        if ok {
            Ok(())
        } else {
            let need = match self {
                FamilyId::Equation => "a nonempty alphabet",
                FamilyId::Multiaction => "a finite alphabet with at least two actions",
                FamilyId::Singleton => "a single-action alphabet",
            };
            Err(Error::Config(format!("family `{}` needs {need}", self.name())))
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn first_action(alphabet: &Alphabet) -> Action {
    alphabet.actions().first().cloned().unwrap_or_else(|| Action::new("a"))
}

const X: &str = "x";

/// The family member at `m`.
pub fn generate_family(id: FamilyId, m: usize, alphabet: &Alphabet) -> Result<Statement> {
    id.check_alphabet(alphabet)?;
    let a = first_action(alphabet);
    let x = Term::var(X);
    let am = |body: Term| Term::repeat(&a, m, body);
    Ok(match id {
        FamilyId::Equation => {
            let long = Term::repeat(&a, 2 * m, Term::Nil);
            let both = Term::tau(Term::sum(am(Term::Nil), long.clone()));
            Statement::eq(Term::sum(Term::tau(long), both.clone()), both)
        }
        FamilyId::Multiaction => {
            let phi = phi(m, alphabet);
            Statement::leq(Term::sum(Term::tau(am(x)), phi.clone()), phi)
        }
        FamilyId::Singleton => Statement::leq(am(x.clone()), Term::sum(am(x.clone()), x)),
    })
}

/// `Φ_m = τ.(a^m.x + x) + Σ_b τ.(a^m.x + a^m.b.0)`.
pub fn phi(m: usize, alphabet: &Alphabet) -> Term {
    let a = first_action(alphabet);
    let amx = Term::repeat(&a, m, Term::var(X));
    let mut parts = vec![Term::tau(Term::sum(amx.clone(), Term::var(X)))];
    for b in alphabet.actions() {
        let amb = Term::repeat(&a, m, Term::prefix(Label::Act(b.clone()), Term::Nil));
        parts.push(Term::tau(Term::sum(amx.clone(), amb)));
    }
    Term::sum_all(parts)
}

/// States reachable by at least one τ-step after any number of τ-steps.
fn tau_derivatives(t: &Term) -> BTreeSet<CanonicalTerm> {
    let mut out = BTreeSet::new();
    for s in tau_closure(&canonicalize(t)) {
        for n in tau_successors(&s) {
            out.extend(tau_closure(n));
        }
    }
    out
}

/// The structural invariant of `id` evaluated on `t`.
///
/// * equation: some `t ⇒→τ t'` has completed traces exactly `{a^{2m}}`;
/// * multiaction: some `t ⇒→τ t̂` has neither a bare variable trace nor a
///   trace `a^m b` for any `b ∈ A`;
/// * singleton: `x ∈ T_V(t)` and `a^k x ∉ T_V(t)` for `1 ≤ k < m`.
pub fn invariant_check(id: FamilyId, t: &Term, a: &Action, m: usize, alphabet: &Alphabet) -> bool {
    match id {
        FamilyId::Equation => {
            let want: BTreeSet<Vec<Action>> = [vec![a.clone(); 2 * m]].into_iter().collect();
            tau_derivatives(t).iter().any(|p| {
                let o = observations(&p.to_term());
                o.var_traces.is_empty() && o.completed == want
            })
        }
        FamilyId::Multiaction => tau_derivatives(t).iter().any(|p| {
            let o = observations(&p.to_term());
            let bare = o.var_traces.iter().any(|(tr, _)| tr.is_empty());
            let long = alphabet.actions().iter().any(|b| {
                let mut tr = vec![a.clone(); m];
                tr.push(b.clone());
                o.traces.contains(&tr)
            });
            !bare && !long
        }),
        FamilyId::Singleton => {
            let x = Var::new(X);
            let o = observations(t);
            o.var_traces.contains(&(Vec::new(), x.clone()))
                && (1..m).all(|k| !o.var_traces.contains(&(vec![a.clone(); k], x.clone())))
        }
    }
}

/// How soundness of a family member was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attestation {
    /// Decided exactly on closed terms.
    Exact,
    /// Checked on every member of the canonical substitution family.
    Sampled { instances: usize },
}

impl fmt::Display for Attestation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attestation::Exact => f.write_str("exact"),
            Attestation::Sampled { instances } => write!(f, "sampled ({instances} instances of the canonical family)"),
        }
    }
}

/// The record of a non-derivability argument at one `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub family: FamilyId,
    pub m: usize,
    pub axiom_set: String,
    pub relation: Relation,
    pub statement: Statement,
    /// Members of `E` set aside because the argument runs in the
    /// equational fragment.
    pub dropped: Vec<String>,
    pub depth_bound: usize,
    /// `>` or `≥`, depending on the lemma.
    pub depth_relation: &'static str,
    pub axioms_checked: usize,
    /// The invariant on the side it is assumed on (lhs for the equation and
    /// multiaction families, rhs for the singleton family).
    pub source_invariant: bool,
    /// The invariant on the side it would be transferred to.
    pub target_invariant: bool,
    pub soundness: Attestation,
}

impl SeparationCertificate {
    pub fn is_valid(&self) -> bool {
        let depth_ok = match self.depth_relation {
            ">" => self.m > self.depth_bound,
            _ => self.m >= self.depth_bound,
        };
        depth_ok && self.source_invariant && !self.target_invariant
    }

    /// Line-oriented `key: value` records.
    pub fn to_report(&self) -> String {
        let (src, dst) = match self.family {
            FamilyId::Singleton => ("rhs", "lhs"),
            _ => ("lhs", "rhs"),
        };
        let mut lines = vec![
            format!("family: {}", self.family),
            format!("m: {}", self.m),
            format!("axioms: {}", self.axiom_set),
            format!("relation: {}", self.relation),
            format!("statement: {}", self.statement),
        ];
        if !self.dropped.is_empty() {
            lines.push(format!("dropped: {}", self.dropped.join(", ")));
        }
        lines.extend([
            format!("depth-bound: {}", self.depth_bound),
            format!("depth-check: {} {} {}", self.m, self.depth_relation, self.depth_bound),
            format!("axioms-fuzzed: {}", self.axioms_checked),
            format!("invariant-{src}: {}", self.source_invariant),
            format!("invariant-{dst}: {}", self.target_invariant),
            format!("soundness: {}", self.soundness),
            format!("valid: {}", self.is_valid()),
        ]);
        lines.join("\n") + "\n"
    }
}

/// Checks every instance of `E`'s members on the canonical family: equations
/// against `rel`'s equivalence, inequations against its preorder.
fn fuzz_axioms(e: &AxiomSet, rel: Relation, hint: &[Action]) -> Result<usize> {
    let instances = e.session_instances(hint, &[1, 2]);
    for (name, st) in &instances {
        let r = match st.kind {
            Kind::Eq => equivalence_of(rel),
            Kind::Leq => rel.preorder(),
        };
        let family = canonical_family(&st.lhs, &st.rhs, e.alphabet());
        let c = compare_open(&st.lhs, &st.rhs, r, &family);
        if let Some(w) = c.witness {
            return Err(Error::UnsoundAxiom { axiom: name.clone(), relation: r.to_string(), detail: w.to_string() });
        }
    }
    Ok(instances.len())
}

fn equivalence_of(rel: Relation) -> Relation {
    match rel.preorder() {
        Relation::PreorderWif => Relation::EquivWif,
        Relation::PreorderWf => Relation::EquivWf,
        other => other,
    }
}

/// Depth bound of the statements a lemma's induction ranges over: all
/// sides of equations, and right-hand sides of inequations unless
/// `equations_only`.
fn depth_bound(e: &AxiomSet, hint: &[Action], equations_only: bool) -> usize {
    e.session_instances(hint, &[2])
        .iter()
        .filter_map(|(_, st)| match st.kind {
            Kind::Eq => Some(st.depth()),
            Kind::Leq if !equations_only => Some(st.rhs.depth()),
            Kind::Leq => None,
        })
        .max()
        .unwrap_or(0)
}

/// Assembles the certificate for the family member at `m` against `E`.
///
/// Fails with [`Error::UnsoundAxiom`] if fuzzing refutes a member of `E`,
/// with [`Error::MTooSmall`] if `m` violates the depth proviso, and with
/// [`Error::Internal`] if the invariant does not separate the two sides.
pub fn certify_nonderivability(id: FamilyId, m: usize, e: &AxiomSet, rel: Relation) -> Result<SeparationCertificate> {
    let alphabet = e.alphabet();
    let statement = generate_family(id, m, alphabet)?;
    let a = first_action(alphabet);
    let hint: Vec<Action> = statement.lhs.actions().union(&statement.rhs.actions()).cloned().collect();
    let hint = if hint.is_empty() { vec![a.clone()] } else { hint };

    let axioms_checked = fuzz_axioms(e, rel, &hint)?;

    let (kernel, dropped) = match id {
        FamilyId::Equation => e.equations_kernel(),
        _ => (e.clone(), Vec::new()),
    };
    let (bound, depth_relation) = match id {
        FamilyId::Equation => (depth_bound(&kernel, &hint, true), ">"),
        FamilyId::Multiaction => (depth_bound(e, &hint, false), "≥"),
        FamilyId::Singleton => (depth_bound(e, &hint, false), ">"),
    };
    let depth_ok = if depth_relation == ">" { m > bound } else { m >= bound };
    if !depth_ok {
        return Err(Error::MTooSmall { m, relation: depth_relation, bound });
    }

    let soundness = if statement.lhs.is_closed() && statement.rhs.is_closed() {
        let c = compare(&statement.lhs, &statement.rhs, id.relation())?;
        if let Some(w) = c.witness {
            return Err(Error::Internal(format!("family member `{statement}` is not sound: {w}")));
        }
        Attestation::Exact
    } else {
        let family = canonical_family(&statement.lhs, &statement.rhs, alphabet);
        let c = compare_open(&statement.lhs, &statement.rhs, id.relation(), &family);
        if let Some(w) = c.witness {
            return Err(Error::Internal(format!("family member `{statement}` is not sound: {w}")));
        }
        Attestation::Sampled { instances: family.len() }
    };

    let (src, dst) = match id {
        FamilyId::Singleton => (&statement.rhs, &statement.lhs),
        _ => (&statement.lhs, &statement.rhs),
    };
    let cert = SeparationCertificate {
        family: id,
        m,
        axiom_set: kernel.name().to_string(),
        relation: rel,
        statement: statement.clone(),
        dropped,
        depth_bound: bound,
        depth_relation,
        axioms_checked,
        source_invariant: invariant_check(id, src, &a, m, alphabet),
        target_invariant: invariant_check(id, dst, &a, m, alphabet),
        soundness,
    };
    if !cert.is_valid() {
        return Err(Error::Internal(format!("the invariant does not separate `{statement}` at m = {m}")));
    }
    Ok(cert)
}
