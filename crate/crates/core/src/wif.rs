//! Ground derivations for the weak impossible futures preorder from
//! A1-4 + WF1 + WF2 + WIF3, and falsification of open inequations.

use std::collections::BTreeMap;

use crate::decide_wf::Verdict;
use crate::error::{Error, Result};
use crate::family::canonical_family;
use crate::lts::{compare, compare_open, traces, Relation, Witness};
use crate::normal::finish_at;
use crate::proof::{dedup_top, duplicate, prefix, sum, sym, trans, Chain, Derivation, Prover};
use crate::term::{ac_equal, canonicalize, Action, Alphabet, Label, Substitution, Term, Var};

/// Axioms and laws a ground WIF derivation may cite.
pub const WIF_BASE: &str = "A1-4+WF1-2+WIF3+D1+D2+D5";

/// `p ≼ q` for closed terms, derived exactly when `p ⊑WIF q`.
pub fn derive_ground_wif(p: &Term, q: &Term, alphabet: &Alphabet) -> Result<Verdict> {
    alphabet.check_term(p)?;
    alphabet.check_term(q)?;
    let c = compare(p, q, Relation::PreorderWif)?;
    if let Some(witness) = c.witness {
        return Ok(Verdict::NotDerivable { subst: Substitution::new(), witness });
    }
    let w = WifProver { p: Prover::new(alphabet) };
    let mut d = w.prove(p, q)?;
    d.conclusion.lhs = p.clone();
    d.conclusion.rhs = q.clone();
    Ok(Verdict::Derivable(d))
}

/// A closed instance from the canonical family on which `t ⊑WIF u` fails.
pub fn falsify_open_wif(t: &Term, u: &Term, alphabet: &Alphabet) -> Option<(Substitution, Witness)> {
    let family = canonical_family(t, u, alphabet);
    match compare_open(t, u, Relation::PreorderWif, &family).witness {
        Some(Witness::Instance { subst, inner }) => Some((subst, *inner)),
        Some(other) => Some((Substitution::new(), other)),
        None => None,
    }
}

struct WifProver {
    p: Prover,
}

fn subst(pairs: &[(&str, Term)]) -> Substitution {
    pairs.iter().fold(Substitution::new(), |s, (x, t)| s.with(x, t.clone()))
}

fn is_tau(t: &Term) -> bool {
    matches!(t, Term::Prefix(Label::Tau, _))
}

fn body(t: &Term) -> Term {
    match t {
        Term::Prefix(_, b) => (**b).clone(),
        other => other.clone(),
    }
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

impl WifProver {
    fn prove(&self, p: &Term, q: &Term) -> Result<Derivation> {
        if q.summands().iter().any(|s| is_tau(s)) {
            self.prove_tau(p, q)
        } else {
            self.prove_stable(p, q)
        }
    }

    /// Groups `t` by action with D5: `t ≈ Σ_a a(Σ τ t_i)`.
    fn group(&self, t: &Term) -> Result<(Derivation, BTreeMap<Action, Term>)> {
        let mut by_action: BTreeMap<Action, Vec<Term>> = BTreeMap::new();
        for s in t.summands() {
            match s {
                Term::Prefix(Label::Act(a), b) => by_action.entry(a.clone()).or_default().push((**b).clone()),
                other => return Err(internal(format!("`{other}` is not an action summand"))),
            }
        }
        let mut c = Chain::new(t.clone());
        let mut out = BTreeMap::new();
        for (a, bodies) in by_action {
            let sigma = Substitution::from_pairs(
                bodies.iter().enumerate().map(|(k, b)| (Var::new(&format!("x{}", k + 1)), b.clone())),
            );
            c.apply(self.p.ax(&format!("D5[{a},{}]", bodies.len()), sigma)?)?;
            out.insert(a, Term::sum_all(bodies.into_iter().map(Term::tau)));
        }
        Ok((c.finish(), out))
    }

    /// Both sides without initial τ.
    fn prove_stable(&self, p: &Term, q: &Term) -> Result<Derivation> {
        let (dp, gp) = self.group(p)?;
        let (dq, gq) = self.group(q)?;
        if gp.keys().ne(gq.keys()) {
            return Err(internal(format!("initial actions of `{p}` and `{q}` differ")));
        }
        let mut parts = Vec::new();
        for (a, pa) in &gp {
            let inner = self.prove(pa, &gq[a])?;
            parts.push(prefix(Label::Act(a.clone()), inner));
        }
        let mid = sum(parts);
        let mut d = trans(vec![dp, mid, sym(dq)]);
        d.conclusion.lhs = p.clone();
        d.conclusion.rhs = q.clone();
        Ok(d)
    }

    /// Lifts nested τ-summands with D2, then copies the summands of every
    /// τ-body to the top with D1, then removes duplicates.
    fn flatten(&self, t: &Term) -> Result<Chain> {
        let mut c = Chain::new(t.clone());
        loop {
            let summands: Vec<Term> = c.cur().summands().into_iter().cloned().collect();
            let hit = summands.iter().find_map(|s| match s {
                Term::Prefix(Label::Tau, b) => {
                    let inner = b.summands();
                    let k = inner.iter().position(|i| is_tau(i))?;
                    let rest = Term::sum_all(inner.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, s)| (*s).clone()));
                    Some((body(inner[k]), rest))
                }
                _ => None,
            });
            match hit {
                Some((w, rest)) => c.apply(self.p.ax("D2", subst(&[("x", w), ("y", rest)]))?)?,
                None => break,
            }
        }
        let taus: Vec<Term> = c.cur().summands().into_iter().filter(|s| is_tau(s)).cloned().collect();
        for t in taus {
            let b = body(&t);
            if b.summands().is_empty() {
                continue;
            }
            c.apply(self.p.ax_back("D1", subst(&[("x", b), ("y", Term::Nil)]))?)?;
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;
        Ok(c)
    }

    fn prove_tau(&self, p: &Term, q: &Term) -> Result<Derivation> {
        let mut c = self.flatten(p)?;
        let qc = self.flatten(q)?;
        let q_flat = qc.cur().clone();
        let q_taus: Vec<Term> = q_flat.summands().into_iter().filter(|s| is_tau(s)).map(body).collect();
        let q_acts: Vec<Term> = q_flat.summands().into_iter().filter(|s| !is_tau(s)).cloned().collect();
        let q_traces: Vec<_> = q_taus.iter().map(|b| traces(&canonicalize(b))).collect();

        // replace each τ.p_i by p_i + τ.q_j with T(q_j) ⊆ T(p_i)
        let p_taus: Vec<Term> = c.cur().summands().into_iter().filter(|s| is_tau(s)).map(body).collect();
        let mut chosen = Vec::new();
        for pi in &p_taus {
            let tp = traces(&canonicalize(pi));
            let j = (0..q_taus.len())
                .filter(|&j| q_traces[j].is_subset(&tp))
                .min_by(|&i, &j| {
                    (q_traces[i].len(), canonicalize(&q_taus[i])).cmp(&(q_traces[j].len(), canonicalize(&q_taus[j])))
                })
                .ok_or_else(|| internal(format!("no τ-derivative of `{q}` has traces within those of `{pi}`")))?;
            let qj = &q_taus[j];
            let inner = self.prove(pi, &Term::sum(pi.clone(), qj.clone()))?;
            let step = trans(vec![
                prefix(Label::Tau, inner),
                self.p.ax("WF2", subst(&[("x", qj.clone()), ("y", pi.clone())]))?,
            ]);
            c.apply(step)?;
            chosen.push(j);
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;

        // the visible part
        let p_acts: Vec<Term> = c.cur().summands().into_iter().filter(|s| !is_tau(s)).cloned().collect();
        if !p_acts.is_empty() || !q_acts.is_empty() {
            let acts = self.prove_stable(&Term::sum_all(p_acts), &Term::sum_all(q_acts))?;
            c.apply(acts)?;
        }

        // add the τ-summands of q not yet present
        for (j, qj) in q_taus.iter().enumerate() {
            if chosen.contains(&j) || c.cur().summands().iter().any(|s| ac_equal(s, &Term::tau(qj.clone()))) {
                continue;
            }
            let x = c.cur().clone();
            let mut grow = Chain::new(x.clone());
            for s in qj.summands() {
                let dup = duplicate(&self.p, grow.cur(), s)?;
                grow.then(dup)?;
            }
            let widened = grow.cur().clone();
            grow.then(self.p.ax("WIF3", subst(&[("x", widened)]))?)?;
            grow.then(self.p.ax("WF2", subst(&[("x", qj.clone()), ("y", x)]))?)?;
            let step = grow.finish();
            c.then(step)?;
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;
        let up = finish_at(c, q_flat)?;
        Ok(trans(vec![up, sym(qc.finish())]))
    }
}
