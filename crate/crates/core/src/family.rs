//! Closed substitutions used to test open (in)equations, and the
//! fresh-action substitution that can be undone syntactically.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::term::{canonicalize, Action, Alphabet, CanonicalTerm, Label, Substitution, Term, Var};

/// Above this many full assignments the family falls back to varying one
/// variable at a time.
const FULL_PRODUCT_LIMIT: usize = 4096;

/// Variables of `terms` in order of first occurrence.
pub fn vars_in_order(terms: &[&Term]) -> Vec<Var> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in terms {
        for x in t.vars() {
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
    }
    out
}

/// The actions a family draws on: the whole finite alphabet, or in
/// countable mode the actions of the terms plus one fresh action.
pub fn family_actions(terms: &[&Term], alphabet: &Alphabet) -> Vec<Action> {
    if alphabet.is_finite() {
        return alphabet.actions().to_vec();
    }
    let mut acts: BTreeSet<Action> = terms.iter().flat_map(|t| t.actions()).collect();
    let fresh = alphabet.fresh_action(&acts);
    acts.insert(fresh);
    acts.into_iter().collect()
}

/// The canonical substitution family for the pair `(t, u)`.
///
/// Every variable ranges over `0`, `τ.0`, `b.0` for each available `b`,
/// and `a^d.0` with `d` above `|t| + |u|`. On top of that comes the
/// depth coding `x_k ↦ a^{k·m}.b.0` with `m = max(|t|,|u|) + 1`.
pub fn canonical_family(t: &Term, u: &Term, alphabet: &Alphabet) -> Vec<Substitution> {
    let vars = vars_in_order(&[t, u]);
    if vars.is_empty() {
        return vec![Substitution::new()];
    }
    let acts = family_actions(&[t, u], alphabet);
    let a0 = acts[0].clone();
    let d = t.depth() + u.depth() + 1;
    let mut pool = vec![Term::Nil, Term::tau(Term::Nil)];
    pool.extend(acts.iter().map(|b| Term::prefix(Label::Act(b.clone()), Term::Nil)));
    pool.push(Term::repeat(&a0, d, Term::Nil));

    let mut out = Vec::new();
    let full = pool.len().checked_pow(vars.len() as u32).filter(|n| *n <= FULL_PRODUCT_LIMIT);
    if let Some(n) = full {
        for mut code in 0..n {
            let mut s = Substitution::new();
            for x in &vars {
                s.insert(x.clone(), pool[code % pool.len()].clone());
                code /= pool.len();
            }
            out.push(s);
        }
    } else {
        for filler in [Term::Nil, Term::tau(Term::Nil)] {
            for x in &vars {
                for p in &pool {
                    let mut s = Substitution::from_pairs(vars.iter().map(|y| (y.clone(), filler.clone())));
                    s.insert(x.clone(), p.clone());
                    out.push(s);
                }
            }
        }
    }
    out.push(depth_coding(&vars, &acts, t.depth().max(u.depth()) + 1));
    dedup(out)
}

/// `x_k ↦ a^{k·m}.b.0` (or `a^{k·m}.0` over a single action), `k` counting
/// variables from 1 in the given order.
pub fn depth_coding(vars: &[Var], acts: &[Action], m: usize) -> Substitution {
    let a = &acts[0];
    let tail = match acts.get(1) {
        Some(b) => Term::prefix(Label::Act(b.clone()), Term::Nil),
        None => Term::Nil,
    };
    Substitution::from_pairs(
        vars.iter().enumerate().map(|(i, x)| (x.clone(), Term::repeat(a, (i + 1) * m, tail.clone()))),
    )
}

fn dedup(family: Vec<Substitution>) -> Vec<Substitution> {
    let mut seen: BTreeSet<Vec<(Var, CanonicalTerm)>> = BTreeSet::new();
    family
        .into_iter()
        .filter(|s| seen.insert(s.iter().map(|(x, t)| (x.clone(), canonicalize(t))).collect()))
        .collect()
}

/// A substitution sending each variable to its own fresh action, together
/// with the inverse map from those actions back to variables.
#[derive(Clone, Debug)]
pub struct Inverting {
    pub subst: Substitution,
    pub actions: BTreeMap<Action, Var>,
}

/// Builds `ρ(x) = c_x.0` with distinct `c_x` not occurring in `avoid`.
/// Only a countable alphabet has room for the fresh actions.
pub fn inverting_substitution(vars: &[Var], avoid: &BTreeSet<Action>, alphabet: &Alphabet) -> Result<Inverting> {
    if alphabet.is_finite() {
        return Err(Error::Config("inverting substitutions need a countable alphabet".into()));
    }
    let mut used = avoid.clone();
    let mut subst = Substitution::new();
    let mut actions = BTreeMap::new();
    for x in vars {
        let c = alphabet.fresh_action(&used);
        used.insert(c.clone());
        subst.insert(x.clone(), Term::prefix(Label::Act(c.clone()), Term::Nil));
        actions.insert(c, x.clone());
    }
    Ok(Inverting { subst, actions })
}

impl Inverting {
    /// Replaces every subterm `c_x.p` by `x`.
    pub fn invert(&self, p: &Term) -> Term {
        match p {
            Term::Prefix(Label::Act(c), body) => match self.actions.get(c) {
                Some(x) => Term::Var(x.clone()),
                None => Term::prefix(Label::Act(c.clone()), self.invert(body)),
            },
            Term::Prefix(l, body) => Term::prefix(l.clone(), self.invert(body)),
            Term::Sum(l, r) => Term::sum(self.invert(l), self.invert(r)),
            other => other.clone(),
        }
    }
}
