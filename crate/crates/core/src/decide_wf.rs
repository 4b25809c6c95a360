//! Axiomatic decision procedure for the weak failures preorder: either a
//! derivation from A1-4 + WF1-3 (+ WF_A) or a closed counterexample.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::family::{canonical_family, family_actions, vars_in_order};
use crate::lts::{chop, compare, Relation, Witness};
use crate::normal::{finish_at, normalize_with, tau_wrap, LSet, NormalForm, NormalizeOptions};
use crate::proof::{dedup_top, prefix, refl, sum, sym, trans, Chain, Derivation, Prover};
use crate::term::{Action, Alphabet, Label, Substitution, Term, Var};

/// Outcome of an axiomatic decision.
#[derive(Clone, Debug)]
pub enum Verdict {
    Derivable(Derivation),
    NotDerivable { subst: Substitution, witness: Witness },
}

impl Verdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Verdict::Derivable(_))
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            Verdict::Derivable(d) => Some(d),
            Verdict::NotDerivable { .. } => None,
        }
    }
}

/// The axiom base WF derivations are checked against: WF_A joins in when
/// the alphabet is finite.
pub fn wf_base(alphabet: &Alphabet) -> &'static str {
    if alphabet.is_finite() {
        "A1-4+WF1-3+WF_A+D1-9"
    } else {
        "A1-4+WF1-3+D1-9"
    }
}

pub fn decide_preorder_wf(t: &Term, u: &Term, alphabet: &Alphabet) -> Result<Verdict> {
    decide_preorder_wf_with(t, u, alphabet, NormalizeOptions::default())
}

pub fn decide_preorder_wf_with(t: &Term, u: &Term, alphabet: &Alphabet, opts: NormalizeOptions) -> Result<Verdict> {
    alphabet.check_term(t)?;
    alphabet.check_term(u)?;
    let (nt, dt) = normalize_with(t, alphabet, opts)?;
    let (nu, du) = normalize_with(u, alphabet, opts)?;
    let dec = Decider { p: Prover::new(alphabet), alphabet: alphabet.clone() };
    if let Some(core) = dec.core(&nt, &nu)? {
        let mut d = trans(vec![dt, core, sym(du)]);
        d.conclusion.lhs = t.clone();
        d.conclusion.rhs = u.clone();
        return Ok(Verdict::Derivable(d));
    }
    match dec.find_witness(t, u, &nt, &nu)? {
        Some((subst, witness)) => Ok(Verdict::NotDerivable { subst, witness }),
        None => Err(Error::Internal(format!(
            "no derivation of `{t} <= {u}` and no counterexample among the tested substitutions"
        ))),
    }
}

/// Both directions.
pub fn decide_equiv_wf(t: &Term, u: &Term, alphabet: &Alphabet) -> Result<(Verdict, Verdict)> {
    Ok((decide_preorder_wf(t, u, alphabet)?, decide_preorder_wf(u, t, alphabet)?))
}

struct Decider {
    p: Prover,
    alphabet: Alphabet,
}

fn subst(pairs: &[(&str, Term)]) -> Substitution {
    pairs.iter().fold(Substitution::new(), |s, (x, t)| s.with(x, t.clone()))
}

fn var_sum(vars: &BTreeSet<Var>) -> Term {
    Term::sum_all(vars.iter().map(|x| Term::Var(x.clone())))
}

fn act(a: &Action, t: Term) -> Term {
    Term::prefix(Label::Act(a.clone()), t)
}

impl Decider {
    fn covers_alphabet(&self, l: &LSet) -> bool {
        self.alphabet.is_finite() && self.alphabet.actions().iter().all(|a| l.actions.contains(a))
    }

    /// `render(t) ≼ render(u)`, or `None` when the structural conditions fail.
    fn core(&self, t: &NormalForm, u: &NormalForm) -> Result<Option<Derivation>> {
        let (lt, lu) = (t.lset(), u.lset());
        if !lt.is_subset(&lu) {
            return Ok(None);
        }
        let full = self.covers_alphabet(&lt);
        match (t, u) {
            (NormalForm::Tau { .. }, NormalForm::Action { .. }) => Ok(None),
            (NormalForm::Action { .. }, NormalForm::Tau { .. }) => {
                let (tt, _) = tau_wrap(t, &self.alphabet)?;
                let Some(rest) = self.core(&tt, u)? else {
                    return Ok(None);
                };
                let mut le = self.p.ax("WF3", subst(&[("x", t.render()), ("y", Term::Nil)]))?;
                le.conclusion.rhs = tt.render();
                Ok(Some(trans(vec![le, rest])))
            }
            (NormalForm::Action { .. }, NormalForm::Action { .. }) if full => self.both_action_full(t, u),
            (NormalForm::Action { .. }, NormalForm::Action { .. }) => {
                if lt != lu {
                    return Ok(None);
                }
                let Some(kids) = self.children(t, u, &lt.actions)? else {
                    return Ok(None);
                };
                let mut parts: Vec<Derivation> = kids.into_values().collect();
                parts.push(refl(var_sum(&lt.vars)));
                let mut d = sum(parts);
                d.conclusion.lhs = t.render();
                d.conclusion.rhs = u.render();
                Ok(Some(d))
            }
            (NormalForm::Tau { .. }, NormalForm::Tau { .. }) if full => self.both_tau_full(t, u),
            (NormalForm::Tau { family: lf, .. }, NormalForm::Tau { family: mf, .. }) => {
                if !lf.members().iter().all(|l| mf.contains(l)) {
                    return Ok(None);
                }
                let Some(kids) = self.children(t, u, &lt.actions)? else {
                    return Ok(None);
                };
                let mut c = Chain::new(t.render());
                for l in lf.members() {
                    c.apply(self.lift_body(t, u, l, &kids))?;
                }
                let extra: Vec<Term> =
                    mf.members().iter().filter(|m| !lf.contains(m)).map(|m| Term::tau(u.body(m))).collect();
                if !extra.is_empty() {
                    let l0 = lf.members().iter().next().expect("nonempty family");
                    c.apply(self.p.ax("D4", subst(&[("x", u.body(l0)), ("y", Term::sum_all(extra))]))?)?;
                }
                Ok(Some(finish_at(c, u.render())?))
            }
        }
    }

    /// `τ(body_t(L)) ≼ τ(body_u(L))` from the child inequations.
    fn lift_body(&self, t: &NormalForm, u: &NormalForm, l: &LSet, kids: &BTreeMap<Action, Derivation>) -> Derivation {
        let mut parts: Vec<Derivation> = l.actions.iter().map(|a| kids[a].clone()).collect();
        parts.push(refl(var_sum(&l.vars)));
        let mut inner = sum(parts);
        inner.conclusion.lhs = t.body(l);
        inner.conclusion.rhs = u.body(l);
        prefix(Label::Tau, inner)
    }

    /// `a.t_a ≼ a.u_a` for each listed action.
    fn children(
        &self,
        t: &NormalForm,
        u: &NormalForm,
        actions: &BTreeSet<Action>,
    ) -> Result<Option<BTreeMap<Action, Derivation>>> {
        let mut out = BTreeMap::new();
        for a in actions {
            let (Some(ta), Some(ua)) = (t.child(a), u.child(a)) else {
                return Ok(None);
            };
            let (tu, d2) = tau_wrap(ua, &self.alphabet)?;
            let Some(inner) = self.core(ta, &tu)? else {
                return Ok(None);
            };
            let le = trans(vec![inner, sym(d2)]);
            let back = sym(self.p.ax(&format!("D5[{a},1]"), subst(&[("x1", ua.render())]))?);
            let mut d = trans(vec![prefix(Label::Act(a.clone()), le), back]);
            d.conclusion.lhs = act(a, ta.render());
            d.conclusion.rhs = act(a, ua.render());
            out.insert(a.clone(), d);
        }
        Ok(Some(out))
    }

    /// `Σ_{a∈A} a.t_a ≼ Σ_{a∈A} a.t_a + y` instantiated with `y ↦ extra`.
    fn wf_a(&self, nf: &NormalForm, extra: Term) -> Result<Derivation> {
        let mut sigma = Substitution::new();
        for a in self.alphabet.actions() {
            let name = format!("x_{}", a.as_str().replace('#', "h"));
            sigma.insert(Var::new(&name), nf.child(a).map(NormalForm::render).unwrap_or(Term::Nil));
        }
        sigma.insert(Var::new("y"), extra);
        self.p.ax("WF_A", sigma)
    }

    fn alphabet_sum(&self, nf: &NormalForm) -> Term {
        Term::sum_all(self.alphabet.actions().iter().map(|a| act(a, nf.child(a).map(NormalForm::render).unwrap_or(Term::Nil))))
    }

    fn both_action_full(&self, t: &NormalForm, u: &NormalForm) -> Result<Option<Derivation>> {
        let all: BTreeSet<Action> = self.alphabet.actions().iter().cloned().collect();
        let Some(kids) = self.children(t, u, &all)? else {
            return Ok(None);
        };
        let mut c = Chain::new(t.render());
        c.apply(self.wf_a(t, u.render())?)?;
        for d in kids.into_values() {
            c.apply(d)?;
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;
        Ok(Some(finish_at(c, u.render())?))
    }

    fn both_tau_full(&self, t: &NormalForm, u: &NormalForm) -> Result<Option<Derivation>> {
        let (NormalForm::Tau { family: lf, .. }, NormalForm::Tau { family: mf, .. }) = (t, u) else {
            unreachable!("both tau normal forms")
        };
        let (lt, lu) = (t.lset(), u.lset());
        for l in lf.members() {
            if !mf.contains(l) && !self.covers_alphabet(l) {
                return Ok(None);
            }
        }
        let all: BTreeSet<Action> = self.alphabet.actions().iter().cloned().collect();
        let Some(kids) = self.children(t, u, &all)? else {
            return Ok(None);
        };
        let (st, su) = (self.alphabet_sum(t), self.alphabet_sum(u));
        let mut c = Chain::new(t.render());
        c.apply(self.p.ax_back("D1", subst(&[("x", st), ("y", var_sum(&lt.vars))]))?)?;
        c.apply(self.wf_a(t, u.render())?)?;
        for l in lf.members() {
            c.apply(self.lift_body(t, u, l, &kids))?;
        }
        for d in kids.values() {
            c.apply(d.clone())?;
        }
        c.apply(self.p.ax("D1", subst(&[("x", su.clone()), ("y", var_sum(&lu.vars))]))?)?;
        let top_u = Term::tau(u.body(&lu));
        for l in lf.members() {
            let here = Term::tau(u.body(l));
            if !mf.contains(l) {
                let missing = var_sum(&lu.vars.difference(&l.vars).cloned().collect());
                let mut grow = sum(vec![self.wf_a(u, missing)?, refl(var_sum(&l.vars))]);
                grow.conclusion.lhs = u.body(l);
                grow.conclusion.rhs = u.body(&lu);
                c.apply(prefix(Label::Tau, grow))?;
                c.apply(self.p.ax("A3", subst(&[("x", top_u.clone())]))?)?;
            } else {
                c.apply(self.p.ax("A3", subst(&[("x", here)]))?)?;
            }
        }
        Ok(Some(finish_at(c, u.render())?))
    }

    /// Searches for a closed substitution refuting `t ⊑WF u`.
    fn find_witness(
        &self,
        t: &Term,
        u: &Term,
        nt: &NormalForm,
        nu: &NormalForm,
    ) -> Result<Option<(Substitution, Witness)>> {
        let vars = vars_in_order(&[t, u]);
        let mut tried = BTreeSet::new();
        let d = t.depth().max(u.depth()).max(nt.render().depth()).max(nu.render().depth()) + 1;
        let mut cands = self.proof_substitutions(&vars, &[t, u], nt, d);
        cands.extend(canonical_family(t, u, &self.alphabet));
        for sigma in cands {
            if let Some(w) = refutes(&sigma, t, u, &mut tried)? {
                return Ok(Some((sigma, w)));
            }
        }
        // chopped variants of the child counterexamples
        for sigma in self.child_substitutions(&vars, &[t, u], nt, nu, d, 3)? {
            if let Some(w) = refutes(&sigma, t, u, &mut tried)? {
                return Ok(Some((sigma, w)));
            }
        }
        Ok(None)
    }

    /// `σ0`, the `b.0` substitutions for each member of `L`, and `a^d.0`.
    fn proof_substitutions(&self, vars: &[Var], terms: &[&Term], nt: &NormalForm, d: usize) -> Vec<Substitution> {
        let acts = family_actions(terms, &self.alphabet);
        let zero = Substitution::from_pairs(vars.iter().map(|x| (x.clone(), Term::Nil)));
        let mut out = vec![zero.clone()];
        let members: Vec<LSet> = match nt {
            NormalForm::Tau { family, .. } => family.members().iter().cloned().collect(),
            NormalForm::Action { lset, .. } => vec![lset.clone()],
        };
        for l in &members {
            if let Some(b) = acts.iter().find(|b| !l.actions.contains(b)) {
                let bz = act(b, Term::Nil);
                out.push(Substitution::from_pairs(
                    vars.iter().map(|x| (x.clone(), if l.vars.contains(x) { Term::Nil } else { bz.clone() })),
                ));
            }
        }
        for x in vars {
            let mut s = zero.clone();
            s.insert(x.clone(), Term::repeat(&acts[0], d, Term::Nil));
            out.push(s);
        }
        out
    }

    /// Counterexamples for the child pairs `(t_a, τ.u_a)`, cut down with
    /// `chop` so that variables cannot supply the parent's failure pair.
    fn child_substitutions(
        &self,
        vars: &[Var],
        terms: &[&Term],
        nt: &NormalForm,
        nu: &NormalForm,
        d: usize,
        fuel: usize,
    ) -> Result<Vec<Substitution>> {
        if fuel == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (a, ta) in nt.children() {
            let Some(ua) = nu.child(a) else { continue };
            let (tu, _) = tau_wrap(ua, &self.alphabet)?;
            let (ct, cu) = (ta.render(), tu.render());
            let mut local = self.proof_substitutions(vars, terms, ta, d);
            local.extend(canonical_family(&ct, &cu, &self.alphabet).into_iter().map(|s| extend_zero(s, vars)));
            local.extend(self.child_substitutions(vars, terms, ta, &tu, d, fuel - 1)?);
            for rho in local {
                let c = compare(&rho.close(&ct), &rho.close(&cu), Relation::LeqWf)?;
                out.push(rho.clone());
                if let Some(Witness::FailurePair { trace, refusal }) = c.witness {
                    let mut chopped = Substitution::new();
                    for (x, p) in rho.iter() {
                        chopped.insert(x.clone(), chop(trace.len(), &refusal, p)?);
                    }
                    out.push(chopped);
                }
            }
        }
        Ok(out)
    }
}

fn extend_zero(s: Substitution, vars: &[Var]) -> Substitution {
    let mut out = s;
    for x in vars {
        if out.get(x).is_none() {
            out.insert(x.clone(), Term::Nil);
        }
    }
    out
}

fn refutes(
    sigma: &Substitution,
    t: &Term,
    u: &Term,
    tried: &mut BTreeSet<(crate::term::CanonicalTerm, crate::term::CanonicalTerm)>,
) -> Result<Option<Witness>> {
    let (ct, cu) = (sigma.close(t), sigma.close(u));
    if !tried.insert((crate::term::canonicalize(&ct), crate::term::canonicalize(&cu))) {
        return Ok(None);
    }
    let c = compare(&ct, &cu, Relation::PreorderWf)?;
    Ok(c.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::AxiomSet;
    use crate::parse::parse_terms;
    use crate::proof::check_derivation;
    use crate::scripts::{expand_lemma_uses, ScriptBase};
    use crate::term::ac_equal;

    fn decide(t: &str, u: &str, alphabet: &Alphabet) -> Verdict {
        let ts = parse_terms(&[t, u], alphabet).unwrap();
        let v = decide_preorder_wf(&ts[0], &ts[1], alphabet).unwrap();
        if let Verdict::Derivable(d) = &v {
            let base = AxiomSet::builtin(wf_base(alphabet), alphabet).unwrap();
            let st = check_derivation(d, &base).unwrap_or_else(|e| panic!("{t} <= {u}: {e}"));
            assert!(ac_equal(&st.lhs, &ts[0]) && ac_equal(&st.rhs, &ts[1]));
            let bare = if alphabet.is_finite() { "A1-4+WF1-3+WF_A" } else { "A1-4+WF1-3" };
            let bare = AxiomSet::builtin(bare, alphabet).unwrap();
            check_derivation(&expand_lemma_uses(d, ScriptBase::Wf, alphabet), &bare).unwrap();
        }
        v
    }

    #[test]
    fn examples() {
        let ab = Alphabet::finite(&["a", "b"]).unwrap();
        assert!(decide("x", "tau.x + y", &ab).is_derivable());
        assert!(decide("a.x", "a.(tau.x + tau.y)", &ab).is_derivable());
        match decide("tau.0 + a.0", "0 + a.0", &ab) {
            Verdict::NotDerivable { witness, .. } => assert!(matches!(witness, Witness::TauCondition | Witness::FailurePair { .. })),
            Verdict::Derivable(_) => panic!("unsound"),
        }
        assert!(!decide("tau.x + y", "tau.(x + y)", &ab).is_derivable());
        assert!(decide("tau.(x + y)", "tau.x + y", &ab).is_derivable());
        assert!(decide("a.x + a.y", "a.(tau.x + tau.y)", &ab).is_derivable());
        assert!(decide("a.(tau.x + tau.y)", "a.x + a.y", &ab).is_derivable());
    }

    #[test]
    fn full_alphabet_cases() {
        let ab = Alphabet::finite(&["a", "b"]).unwrap();
        assert!(decide("a.x + b.y", "a.x + b.y + z", &ab).is_derivable());
        assert!(decide("tau.(a.0 + b.0)", "tau.(a.0 + b.0 + x)", &ab).is_derivable());
        assert!(decide("a.0 + b.0", "tau.(a.0 + b.0 + x) + tau.a.0", &ab).is_derivable());
        let c = Alphabet::countable();
        assert!(!decide("a.x + b.y", "a.x + b.y + z", &c).is_derivable());
    }

    #[test]
    fn countable_examples() {
        let c = Alphabet::countable();
        assert!(decide("x", "tau.x + y", &c).is_derivable());
        assert!(!decide("x", "tau.y", &c).is_derivable());
        assert!(decide("tau.a.0 + tau.b.0", "tau.a.0 + tau.b.0 + tau.(a.0 + b.0)", &c).is_derivable());
    }
}
