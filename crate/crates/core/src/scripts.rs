//! Proof scripts for the derived laws D1-D9 and for the ready-simulation
//! style equations generated from the weak failures preorder.

use std::collections::BTreeMap;

use crate::axioms::{builtin_statement, split_name, AxiomSet, Statement};
use crate::error::{Error, Result};
use crate::proof::{
    antisym, dedup_top, duplicate, expand_lemmas, prefix, refl, sum, sym, trans, Chain, Derivation, ProofFile, Prover,
};
use crate::term::{Alphabet, Label, Substitution, Term, TAU};

/// The axiom base a script is written against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScriptBase {
    /// A1-4 + WF1-3
    Wf,
    /// A1-4 + WF1 + WF2 + WIF3
    Wif,
    /// A1-4 + WF1 + WFE2 + WFE3 (+ WFE_A)
    Wfe,
}

impl ScriptBase {
    pub fn spec(self) -> &'static str {
        match self {
            ScriptBase::Wf => "A1-4+WF1-3",
            ScriptBase::Wif => "A1-4+WF1-2+WIF3",
            ScriptBase::Wfe => "A1-4+WFE",
        }
    }

    /// The derived laws scripted for this base.
    pub fn lemmas(self) -> &'static [&'static str] {
        match self {
            ScriptBase::Wf => &["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"],
            ScriptBase::Wif => &["D1", "D2", "D5"],
            ScriptBase::Wfe => &[],
        }
    }

    /// The base plus its derived laws, as an axiom set specification.
    pub fn spec_with_lemmas(self) -> String {
        let mut s = self.spec().to_string();
        for l in self.lemmas() {
            s.push('+');
            s.push_str(l);
        }
        s
    }
}

fn var(x: &str) -> Term {
    Term::var(x)
}

fn subst(pairs: &[(&str, Term)]) -> Substitution {
    let mut s = Substitution::new();
    for (x, t) in pairs {
        s = s.with(x, t.clone());
    }
    s
}

fn tau(t: Term) -> Term {
    Term::tau(t)
}

fn plus(l: Term, r: Term) -> Term {
    Term::sum(l, r)
}

/// Replaces the conclusion sides by terms equal modulo A1, A2, A4.
fn restate(mut d: Derivation, lhs: Term, rhs: Term) -> Derivation {
    debug_assert!(crate::term::ac_equal(d.lhs(), &lhs) && crate::term::ac_equal(d.rhs(), &rhs));
    d.conclusion.lhs = lhs;
    d.conclusion.rhs = rhs;
    d
}

struct Scripts {
    p: Prover,
    base: ScriptBase,
}

impl Scripts {
    /// `x ≼ τx`.
    fn le_tau(&self, x: &Term) -> Result<Derivation> {
        let d = match self.base {
            ScriptBase::Wif => self.p.ax("WIF3", subst(&[("x", x.clone())]))?,
            _ => self.p.ax("WF3", subst(&[("x", x.clone()), ("y", Term::Nil)]))?,
        };
        Ok(restate(d, x.clone(), tau(x.clone())))
    }

    /// `τx + x ≈ τx`.
    fn t2(&self, x: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        if self.base == ScriptBase::Wfe {
            let mut c = Chain::new(plus(tx.clone(), x.clone()));
            c.apply(self.p.ax_back("WFE2", subst(&[("x", x.clone()), ("y", x.clone())]))?)?;
            c.at(&[tau(plus(x.clone(), x.clone()))], self.p.ax("A3", subst(&[("x", x.clone())]))?)?;
            c.apply(self.p.ax("A3", subst(&[("x", tx.clone())]))?)?;
            return Ok(c.finish());
        }
        let mut up = Chain::new(plus(tx.clone(), x.clone()));
        up.apply(self.le_tau(x)?)?;
        up.apply(self.p.ax("A3", subst(&[("x", tx.clone())]))?)?;
        let mut down = Chain::new(tx.clone());
        down.then(prefix(Label::Tau, self.p.ax_back("A3", subst(&[("x", x.clone())]))?))?;
        down.then(self.p.ax("WF2", subst(&[("x", x.clone()), ("y", x.clone())]))?)?;
        Ok(antisym(up.finish(), down.finish()))
    }

    /// `τ(x+y) + x ≈ τ(x+y)`.
    fn d1(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let xy = plus(x.clone(), y.clone());
        let mut c = Chain::new(plus(tau(xy.clone()), x.clone()));
        c.apply(sym(self.t2(&xy)?))?;
        c.apply(self.p.ax("A3", subst(&[("x", x.clone())]))?)?;
        c.apply(self.t2(&xy)?)?;
        Ok(c.finish())
    }

    /// `ττx ≼ τx`, using D1.
    fn tt_le(&self, x: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        let mut c = Chain::new(tau(tx.clone()));
        c.at(&[tau(tx.clone())], self.p.ax_back("D1", subst(&[("x", x.clone()), ("y", Term::Nil)]))?)?;
        c.then(self.p.ax("WF2", subst(&[("x", x.clone()), ("y", tx.clone())]))?)?;
        c.apply(self.p.ax("A3", subst(&[("x", tx)]))?)?;
        Ok(c.finish())
    }

    /// `τ(τx+y) ≈ τx + y`.
    fn d2(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        let body = plus(tx.clone(), y.clone());
        let mut up = Chain::new(tau(body.clone()));
        up.then(self.p.ax("WF2", subst(&[("x", tx.clone()), ("y", y.clone())]))?)?;
        up.apply(self.tt_le(x)?)?;
        let down = self.le_tau(&body)?;
        Ok(antisym(up.finish(), down))
    }

    /// `ax + τ(ay+z) ≈ τ(ax+ay+z)`.
    fn d3(&self, a: &str, x: &Term, y: &Term, z: &Term) -> Result<Derivation> {
        let wf1 = format!("WF1[{a}]");
        let ax = Term::act(a, x.clone());
        let ay = Term::act(a, y.clone());
        let step = self.p.ax("WF3", subst(&[("x", y.clone()), ("y", tau(x.clone()))]))?;
        let e1 = trans(vec![
            prefix(Label::act(a), step),
            self.p.ax_back(&wf1, subst(&[("x", x.clone()), ("y", y.clone())]))?,
        ]);
        let e2 = prefix(Label::Tau, sum(vec![e1, refl(z.clone())]));
        let mut up = Chain::new(plus(ax.clone(), tau(plus(ay.clone(), z.clone()))));
        up.apply(e2)?;
        up.apply(self.p.ax("D1", subst(&[("x", ax.clone()), ("y", plus(ay.clone(), z.clone()))]))?)?;
        let down = self.p.ax("WF2", subst(&[("x", plus(ay, z.clone())), ("y", ax)]))?;
        Ok(antisym(up.finish(), down))
    }

    /// `τx ≼ τx + y`.
    fn d4(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let mut c = Chain::new(tau(x.clone()));
        c.then(self.p.ax("WF3", subst(&[("x", tau(x.clone())), ("y", y.clone())]))?)?;
        c.apply(self.p.ax("D2", subst(&[("x", x.clone()), ("y", Term::Nil)]))?)?;
        Ok(c.finish())
    }

    /// `a x1 + ... + a xn ≈ a(τx1 + ... + τxn)`.
    fn d5(&self, a: &str, xs: &[Term]) -> Result<Derivation> {
        let wf1 = format!("WF1[{a}]");
        let n = xs.len();
        let lhs = Term::sum_all(xs.iter().map(|x| Term::act(a, x.clone())));
        let mut c = Chain::new(lhs);
        if n == 1 {
            let x = &xs[0];
            c.then(self.p.ax_back("A3", subst(&[("x", Term::act(a, x.clone()))]))?)?;
            c.then(self.p.ax(&wf1, subst(&[("x", x.clone()), ("y", x.clone())]))?)?;
            let inner = self.p.ax("A3", subst(&[("x", tau(x.clone()))]))?;
            c.at(&[c.cur().clone()], inner)?;
            return Ok(c.finish());
        }
        let head = &xs[..n - 1];
        let last = &xs[n - 1];
        let hsub = Substitution::from_pairs(
            head.iter().enumerate().map(|(i, x)| (crate::term::Var::new(&format!("x{}", i + 1)), x.clone())),
        );
        c.apply(self.p.ax(&format!("D5[{a},{}]", n - 1), hsub)?)?;
        let taus = Term::sum_all(head.iter().map(|x| tau(x.clone())));
        c.then(self.p.ax(&wf1, subst(&[("x", taus.clone()), ("y", last.clone())]))?)?;
        let rest = Term::sum_all(head[1..].iter().map(|x| tau(x.clone())));
        let d2 = self.p.ax("D2", subst(&[("x", head[0].clone()), ("y", rest)]))?;
        let here = c.cur().clone();
        c.at(&[here], d2)?;
        Ok(c.finish())
    }

    /// `τx + y ≈ τx + τ(x+y)`.
    fn d6(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        let xy = plus(x.clone(), y.clone());
        let mut up = Chain::new(plus(tx.clone(), y.clone()));
        up.apply(self.p.ax("D4", subst(&[("x", x.clone()), ("y", tau(xy.clone()))]))?)?;
        up.apply(self.p.ax("D1", subst(&[("x", y.clone()), ("y", x.clone())]))?)?;
        let mut down = Chain::new(plus(tx.clone(), tau(xy)));
        down.apply(self.p.ax("WF2", subst(&[("x", x.clone()), ("y", y.clone())]))?)?;
        down.apply(self.p.ax("A3", subst(&[("x", tx)]))?)?;
        Ok(antisym(up.finish(), down.finish()))
    }

    /// `τx + τy ≈ τx + τ(x+y) + τy`.
    fn d7(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let mut c = Chain::new(plus(tau(x.clone()), tau(y.clone())));
        c.apply(self.p.ax_back("D1", subst(&[("x", y.clone()), ("y", Term::Nil)]))?)?;
        c.apply(self.p.ax("D6", subst(&[("x", x.clone()), ("y", y.clone())]))?)?;
        Ok(c.finish())
    }

    /// `τx + τ(x+y+z) ≈ τx + τ(x+y) + τ(x+y+z)`.
    fn d8(&self, x: &Term, y: &Term, z: &Term) -> Result<Derivation> {
        let xyz = plus(plus(x.clone(), y.clone()), z.clone());
        let rhs = Term::sum_all([tau(x.clone()), tau(plus(x.clone(), y.clone())), tau(xyz)]);
        let mut c = Chain::new(rhs);
        c.apply(self.p.ax_back("D6", subst(&[("x", x.clone()), ("y", y.clone())]))?)?;
        c.apply(self.p.ax("D1", subst(&[("x", y.clone()), ("y", plus(x.clone(), z.clone()))]))?)?;
        Ok(sym(c.finish()))
    }

    /// `Σ τ(a t_i + y_i) ≈ Σ τ(a t + y_i)` with `t = Σ τ t_i`.
    fn d9(&self, a: &str, ts: &[Term], ys: &[Term]) -> Result<Derivation> {
        let n = ts.len();
        let at: Vec<Term> = ts.iter().map(|t| Term::act(a, t.clone())).collect();
        // bodies[i] lists the summands of the i-th τ body after a_t_i
        let mut extra: Vec<Vec<Term>> = ys.iter().map(|y| vec![y.clone()]).collect();
        let body = |i: usize, extra: &Vec<Vec<Term>>| {
            Term::sum_all(std::iter::once(at[i].clone()).chain(extra[i].iter().cloned()))
        };
        let lhs = Term::sum_all((0..n).map(|i| tau(body(i, &extra))));
        let mut c = Chain::new(lhs);
        if n > 1 {
            for i in 0..n {
                let rest = Term::sum_all(extra[i].iter().cloned());
                c.apply(self.p.ax_back("D1", subst(&[("x", at[i].clone()), ("y", rest)]))?)?;
            }
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let dup = duplicate(&self.p, c.cur(), &at[j])?;
                    c.then(dup)?;
                    let z = Term::sum_all(extra[i].iter().cloned());
                    let d3 = self.p.ax(
                        &format!("D3[{a}]"),
                        subst(&[("x", ts[j].clone()), ("y", ts[i].clone()), ("z", z)]),
                    )?;
                    c.apply(d3)?;
                    extra[i].insert(0, at[j].clone());
                }
            }
            for j in 0..n {
                let b0 = body(0, &extra);
                let rest: Vec<Term> = {
                    let mut v: Vec<Term> = b0.summands().into_iter().cloned().collect();
                    let k = v.iter().position(|s| s == &at[j]).expect("absorbed summand");
                    v.remove(k);
                    v
                };
                c.apply(self.p.ax("D1", subst(&[("x", at[j].clone()), ("y", Term::sum_all(rest))]))?)?;
            }
        }
        let d5_sub = Substitution::from_pairs(
            ts.iter().enumerate().map(|(k, t)| (crate::term::Var::new(&format!("x{}", k + 1)), t.clone())),
        );
        for i in 0..n {
            let d5 = self.p.ax(&format!("D5[{a},{n}]"), d5_sub.clone())?;
            c.at(&[tau(body(i, &extra))], d5)?;
        }
        Ok(c.finish())
    }

    fn lemma(&self, name: &str) -> Result<Option<Derivation>> {
        let (base, args) = split_name(name);
        if !self.base.lemmas().contains(&base) {
            return Ok(None);
        }
        let (x, y, z) = (var("x"), var("y"), var("z"));
        let d = match base {
            "D1" => self.d1(&x, &y)?,
            "D2" => self.d2(&x, &y)?,
            "D3" => self.d3(args[0], &x, &y, &z)?,
            "D4" => self.d4(&x, &y)?,
            "D5" => {
                let n = args[1].parse::<usize>().map_err(|_| Error::UnknownAxiom(name.into()))?;
                let xs: Vec<Term> = (1..=n).map(|i| var(&format!("x{i}"))).collect();
                self.d5(args[0], &xs)?
            }
            "D6" => self.d6(&x, &y)?,
            "D7" => self.d7(&x, &y)?,
            "D8" => self.d8(&x, &y, &z)?,
            "D9" => {
                let n = args[1].parse::<usize>().map_err(|_| Error::UnknownAxiom(name.into()))?;
                let ts: Vec<Term> = (1..=n).map(|i| var(&format!("t{i}"))).collect();
                let ys: Vec<Term> = (1..=n).map(|i| var(&format!("y{i}"))).collect();
                self.d9(args[0], &ts, &ys)?
            }
            _ => return Ok(None),
        };
        let target = builtin_statement(name, self.p.alphabet())?;
        Ok(Some(restate(d, target.lhs, target.rhs)))
    }

    // Scripts over A1-4 + WF1 + WFE2 + WFE3 (+ WFE_A).

    /// `ττx ≈ τx`.
    fn tt_eq(&self, x: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        let ttx = tau(tx.clone());
        let mut c = Chain::new(ttx.clone());
        c.then(sym(self.t2(&tx)?))?;
        c.at(&[ttx], sym(self.t2(x)?))?;
        c.apply(self.p.ax("WFE2", subst(&[("x", x.clone()), ("y", tx.clone())]))?)?;
        c.apply(self.p.ax("A3", subst(&[("x", tx)]))?)?;
        Ok(c.finish())
    }

    /// `τ(τx+y) ≈ τx + y` from WFE2.
    fn d2e(&self, x: &Term, y: &Term) -> Result<Derivation> {
        let tx = tau(x.clone());
        let mut c = Chain::new(tau(plus(tx.clone(), y.clone())));
        c.then(sym(self.d1(&tx, y)?))?;
        c.apply(sym(self.tt_eq(x)?))?;
        c.apply(self.p.ax("WFE2", subst(&[("x", tx), ("y", y.clone())]))?)?;
        c.apply(self.tt_eq(x)?)?;
        Ok(c.finish())
    }

    /// `a x ≈ a τx`.
    fn d5_single(&self, a: &str, x: &Term) -> Result<Derivation> {
        // the n = 1 case cites no other law
        self.d5(a, std::slice::from_ref(x))
    }

    /// From `τP + τQ ≈ τQ` derive `aP + aQ ≈ aQ`.
    fn lift_to_action(&self, a: &str, pq: &Term, qq: &Term, tau_case: Derivation) -> Result<Derivation> {
        let mut c = Chain::new(plus(Term::act(a, pq.clone()), Term::act(a, qq.clone())));
        c.then(self.p.ax(&format!("WF1[{a}]"), subst(&[("x", pq.clone()), ("y", qq.clone())]))?)?;
        c.then(prefix(Label::act(a), tau_case))?;
        c.then(sym(self.d5_single(a, qq)?))?;
        Ok(c.finish())
    }

    fn alphabet_sum(&self) -> Term {
        Term::sum_all(self.p.alphabet().actions().iter().map(|a| {
            Term::act(a.as_str(), var(&format!("x_{}", a.as_str().replace('#', "h"))))
        }))
    }

    /// A generated equation with `β = τ`, as `(P, Q, proof of τP + τQ ≈ τQ)`.
    fn tau_instance(&self, base: &str, alpha: Option<&str>) -> Result<(Term, Term, Derivation)> {
        let (x, y, z) = (var("x"), var("y"), var("z"));
        let tx = tau(x.clone());
        match base {
            "WF2^b" => {
                let pq = plus(tau(plus(x.clone(), y.clone())), z.clone());
                let qq = Term::sum_all([tx.clone(), y.clone(), z.clone()]);
                let mut c = Chain::new(plus(tau(pq.clone()), tau(qq.clone())));
                c.apply(self.d2e(&plus(x.clone(), y.clone()), &z)?)?;
                c.apply(self.d2e(&x, &plus(y.clone(), z.clone()))?)?;
                c.apply(self.p.ax("A3", subst(&[("x", z.clone())]))?)?;
                c.apply(self.p.ax("WFE2", subst(&[("x", x.clone()), ("y", y.clone())]))?)?;
                c.apply(self.p.ax("A3", subst(&[("x", y.clone())]))?)?;
                c.apply(sym(self.d2e(&x, &plus(y.clone(), z.clone()))?))?;
                Ok((pq, qq, c.finish()))
            }
            "WF3^b" => {
                let pq = plus(x.clone(), z.clone());
                let qq = Term::sum_all([tx.clone(), y.clone(), z.clone()]);
                let mut c = Chain::new(plus(tau(pq.clone()), tau(qq.clone())));
                c.apply(self.d2e(&x, &plus(y.clone(), z.clone()))?)?;
                c.apply(self.p.ax("WFE2", subst(&[("x", x.clone()), ("y", z.clone())]))?)?;
                c.apply(self.p.ax("A3", subst(&[("x", z.clone())]))?)?;
                c.apply(sym(self.d2e(&x, &plus(y.clone(), z.clone()))?))?;
                Ok((pq, qq, c.finish()))
            }
            "RS" => {
                let alpha = alpha.expect("RS has an inner label");
                let label = if alpha == TAU { Label::Tau } else { Label::act(alpha) };
                let ax = Term::prefix(label.clone(), x.clone());
                let ay = Term::prefix(label.clone(), y.clone());
                let pq = plus(ax.clone(), z.clone());
                let qq = Term::sum_all([ax.clone(), ay.clone(), z.clone()]);
                let mut c = Chain::new(plus(tau(pq.clone()), tau(qq.clone())));
                if alpha == TAU {
                    c.apply(self.d2e(&x, &z)?)?;
                    c.apply(self.d2e(&x, &plus(ay.clone(), z.clone()))?)?;
                    c.apply(self.p.ax("A3", subst(&[("x", ax.clone())]))?)?;
                    c.apply(self.p.ax("A3", subst(&[("x", z.clone())]))?)?;
                    c.apply(sym(self.d2e(&x, &plus(ay, z.clone()))?))?;
                } else {
                    c.apply(self.p.ax("WFE2", subst(&[("x", pq.clone()), ("y", ay.clone())]))?)?;
                    let wfe3 = format!("WFE3[{alpha}]");
                    c.apply(self.p.ax(&wfe3, subst(&[("x", y.clone()), ("y", x.clone()), ("z", z.clone())]))?)?;
                }
                Ok((pq, qq, c.finish()))
            }
            "WF_A^b" => {
                let s = self.alphabet_sum();
                let pq = plus(s.clone(), z.clone());
                let qq = Term::sum_all([s, y.clone(), z.clone()]);
                Ok((pq, qq, self.p.ax("WFE_A", Substitution::new())?))
            }
            other => Err(Error::Internal(format!("no tau instance for {other}"))),
        }
    }

    /// Proof of a generated equation from A1-4 + WF1 + WFE2 + WFE3 (+ WFE_A).
    fn generated(&self, name: &str) -> Result<Option<Derivation>> {
        let (base, args) = split_name(name);
        let (x, y) = (var("x"), var("y"));
        let tx = tau(x.clone());
        let d = match base {
            "WF1" => self.p.ax(name, Substitution::new())?,
            "WF2^a" => {
                let mut c = Chain::new(Term::sum_all([tau(plus(x.clone(), y.clone())), tx.clone(), y.clone()]));
                c.apply(self.p.ax("WFE2", Substitution::new())?)?;
                c.apply(self.p.ax("A3", subst(&[("x", y.clone())]))?)?;
                c.finish()
            }
            "WF3^a" => {
                let mut c = Chain::new(Term::sum_all([x.clone(), tx.clone(), y.clone()]));
                c.apply(self.t2(&x)?)?;
                c.finish()
            }
            "WF_A^a" => {
                let s = self.alphabet_sum();
                dedup_top(&self.p, &Term::sum_all([s.clone(), s, y.clone()]))?
            }
            "WF2^b" | "WF3^b" | "WF_A^b" => {
                let label = args[0];
                let (pq, qq, d) = self.tau_instance(base, None)?;
                if label == TAU {
                    d
                } else {
                    self.lift_to_action(label, &pq, &qq, d)?
                }
            }
            "RS" => {
                let (beta, alpha) = (args[0], args[1]);
                let (pq, qq, d) = self.tau_instance("RS", Some(alpha))?;
                if beta == TAU {
                    d
                } else {
                    self.lift_to_action(beta, &pq, &qq, d)?
                }
            }
            _ => return Ok(None),
        };
        let target = builtin_statement(name, self.p.alphabet())?;
        Ok(Some(restate(d, target.lhs, target.rhs)))
    }
}

/// The script for a derived law (`D1`, `D3[a]`, `D9[a,2]`, ...) over `base`,
/// possibly citing earlier laws; `None` if the law is not scripted there.
pub fn lemma_script(name: &str, base: ScriptBase, alphabet: &Alphabet) -> Result<Option<Derivation>> {
    Scripts { p: Prover::new(alphabet), base }.lemma(name)
}

/// The script with every cited law inlined, so that it checks against the
/// bare base.
pub fn expanded_lemma_script(name: &str, base: ScriptBase, alphabet: &Alphabet) -> Result<Option<Derivation>> {
    let Some(d) = lemma_script(name, base, alphabet)? else {
        return Ok(None);
    };
    Ok(Some(expand_lemma_uses(&d, base, alphabet)))
}

/// Inlines every use of a scripted law in `d`.
pub fn expand_lemma_uses(d: &Derivation, base: ScriptBase, alphabet: &Alphabet) -> Derivation {
    let cache = std::cell::RefCell::new(BTreeMap::<String, Option<Derivation>>::new());
    let lookup = |name: &str| -> Option<Derivation> {
        if let Some(hit) = cache.borrow().get(name) {
            return hit.clone();
        }
        let got = lemma_script(name, base, alphabet).ok().flatten();
        cache.borrow_mut().insert(name.to_string(), got.clone());
        got
    };
    expand_lemmas(d, &lookup)
}

/// Proof of a generated equation (named as in the table of generated
/// axioms) from A1-4 + WF1 + WFE2 + WFE3 (+ WFE_A).
pub fn generated_axiom_script(name: &str, alphabet: &Alphabet) -> Result<Option<Derivation>> {
    Scripts { p: Prover::new(alphabet), base: ScriptBase::Wfe }.generated(name)
}

/// Names of the lemma instances shipped as script files for `alphabet`.
pub fn shipped_lemma_names(alphabet: &Alphabet) -> Vec<String> {
    let a = alphabet.actions().first().map(|a| a.to_string()).unwrap_or_else(|| "a".into());
    vec![
        "D1".into(),
        "D2".into(),
        format!("D3[{a}]"),
        "D4".into(),
        format!("D5[{a},1]"),
        format!("D5[{a},2]"),
        format!("D5[{a},3]"),
        "D6".into(),
        "D7".into(),
        "D8".into(),
        format!("D9[{a},1]"),
        format!("D9[{a},2]"),
        format!("D9[{a},3]"),
    ]
}

/// The shipped script files: `(file name, contents)`.
pub fn shipped_script_files() -> Result<Vec<(String, String)>> {
    let alphabet = Alphabet::finite(&["a", "b"])?;
    let mut out = Vec::new();
    let file_name = |prefix: &str, name: &str| {
        let clean: String = name
            .chars()
            .map(|c| match c {
                '[' | ',' => '_',
                ']' => '\0',
                '^' => '-',
                other => other,
            })
            .filter(|c| *c != '\0')
            .collect();
        format!("{prefix}{clean}.json")
    };
    for (base, prefix) in [(ScriptBase::Wf, "wf/"), (ScriptBase::Wif, "wif/")] {
        for name in shipped_lemma_names(&alphabet) {
            if let Some(d) = lemma_script(&name, base, &alphabet)? {
                let file = ProofFile { alphabet: alphabet.clone(), base: base.spec_with_lemmas(), proof: d };
                out.push((file_name(prefix, &name), file.to_text()));
            }
        }
    }
    let tab = AxiomSet::builtin("TAB-AUX", &alphabet)?;
    for (name, _) in tab.instances(alphabet.actions(), &[2]) {
        if let Some(d) = generated_axiom_script(&name, &alphabet)? {
            let file = ProofFile { alphabet: alphabet.clone(), base: ScriptBase::Wfe.spec().into(), proof: d };
            out.push((file_name("wfe/", &name), file.to_text()));
        }
    }
    Ok(out)
}

/// Checks that `d` concludes `target` modulo A1, A2, A4.
pub fn concludes(d: &Derivation, target: &Statement) -> bool {
    d.conclusion.ac_matches(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_derivation;

    fn ab() -> Alphabet {
        Alphabet::finite(&["a", "b"]).unwrap()
    }

    #[test]
    fn every_lemma_checks_in_the_wf_base() {
        let alpha = ab();
        let bare = AxiomSet::builtin(ScriptBase::Wf.spec(), &alpha).unwrap();
        for name in shipped_lemma_names(&alpha) {
            let d = expanded_lemma_script(&name, ScriptBase::Wf, &alpha).unwrap().unwrap();
            let st = check_derivation(&d, &bare).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(st.ac_matches(&builtin_statement(&name, &alpha).unwrap()), "{name}");
        }
    }

    #[test]
    fn wif_base_scripts_d1_d2_d5() {
        let alpha = ab();
        let bare = AxiomSet::builtin(ScriptBase::Wif.spec(), &alpha).unwrap();
        for name in ["D1", "D2", "D5[a,1]", "D5[b,3]"] {
            let d = expanded_lemma_script(name, ScriptBase::Wif, &alpha).unwrap().unwrap();
            check_derivation(&d, &bare).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(lemma_script("D4", ScriptBase::Wif, &alpha).unwrap().is_none());
    }

    #[test]
    fn generated_axioms_follow_from_the_equational_base() {
        let alpha = ab();
        let base = AxiomSet::builtin(ScriptBase::Wfe.spec(), &alpha).unwrap();
        let tab = AxiomSet::builtin("TAB-AUX", &alpha).unwrap();
        for (name, st) in tab.instances(alpha.actions(), &[2]) {
            let d = generated_axiom_script(&name, &alpha).unwrap().unwrap();
            let got = check_derivation(&d, &base).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(got.ac_matches(&st), "{name}");
        }
    }
}
