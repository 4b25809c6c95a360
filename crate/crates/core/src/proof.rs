//! Derivations in (in)equational logic: proof trees, the checker, builders
//! for assembling proofs, and the on-disk proof format.
//!
//! Terms are compared modulo A1, A2 and A4 throughout; A3 is an ordinary
//! axiom that proofs must invoke explicitly.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::axioms::{builtin_statement, parse_statement, split_name, AxiomSet, Kind, Statement};
use crate::error::{Error, ProofError, Result};
use crate::parse::parse_term;
use crate::term::{ac_equal, Alphabet, Label, Substitution, Term, Var, TAU};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// An instance of a named axiom; `backward` uses an equation right to left.
    Axiom { name: String, subst: Substitution, backward: bool },
    Reflexivity,
    /// Only for equations.
    Symmetry,
    Transitivity,
    /// `t ≼ u` and `u ≼ t` give `t ≈ u`.
    Antisymmetry,
    /// n-ary closure under `+`.
    Sum,
    Prefix(Label),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub children: Vec<Derivation>,
    pub conclusion: Statement,
}

impl Derivation {
    pub fn lhs(&self) -> &Term {
        &self.conclusion.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.conclusion.rhs
    }

    pub fn kind(&self) -> Kind {
        self.conclusion.kind
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    /// Names of all axioms used, with multiplicity collapsed.
    pub fn axioms_used(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.walk(&mut |d| {
            if let Rule::Axiom { name, .. } = &d.rule {
                out.insert(name.clone());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

fn describe(st: &Statement) -> String {
    st.to_string()
}

/// Checks `d` against `allowed` and returns its conclusion.
pub fn check_derivation(d: &Derivation, allowed: &AxiomSet) -> std::result::Result<Statement, ProofError> {
    for c in &d.children {
        check_derivation(c, allowed)?;
    }
    let c = &d.conclusion;
    let weakest = d.children.iter().map(Derivation::kind).min().unwrap_or(Kind::Eq);
    match &d.rule {
        Rule::Axiom { name, subst, backward } => {
            if !d.children.is_empty() {
                return Err(ProofError::Malformed(format!("axiom node `{name}` has children")));
            }
            let st = allowed.lookup(name)?;
            if *backward && st.kind == Kind::Leq {
                return Err(ProofError::ReversedInequation(format!("{name}: {st}")));
            }
            let (l, r) = (st.lhs.apply(subst), st.rhs.apply(subst));
            let (l, r) = if *backward { (r, l) } else { (l, r) };
            if c.kind > st.kind {
                return Err(ProofError::KindMismatch(describe(c)));
            }
            if !ac_equal(&l, &c.lhs) || !ac_equal(&r, &c.rhs) {
                return Err(ProofError::SubstitutionMismatch { axiom: name.clone(), conclusion: describe(c) });
            }
        }
        Rule::Reflexivity => {
            if !d.children.is_empty() || !ac_equal(&c.lhs, &c.rhs) {
                return Err(ProofError::Malformed(format!("reflexivity: {}", describe(c))));
            }
        }
        Rule::Symmetry => {
            let [child] = d.children.as_slice() else {
                return Err(ProofError::Malformed("symmetry needs one premise".into()));
            };
            if child.kind() != Kind::Eq {
                return Err(ProofError::ReversedInequation(describe(&child.conclusion)));
            }
            if !ac_equal(&c.lhs, child.rhs()) || !ac_equal(&c.rhs, child.lhs()) {
                return Err(ProofError::Malformed(format!("symmetry: {}", describe(c))));
            }
        }
        Rule::Transitivity => {
            let (Some(first), Some(last)) = (d.children.first(), d.children.last()) else {
                return Err(ProofError::Malformed("transitivity needs premises".into()));
            };
            for w in d.children.windows(2) {
                if !ac_equal(w[0].rhs(), w[1].lhs()) {
                    return Err(ProofError::Chain(format!("`{}` then `{}`", w[0].rhs(), w[1].lhs())));
                }
            }
            if !ac_equal(&c.lhs, first.lhs()) || !ac_equal(&c.rhs, last.rhs()) {
                return Err(ProofError::Chain(format!("endpoints of {}", describe(c))));
            }
            if c.kind > weakest {
                return Err(ProofError::KindMismatch(describe(c)));
            }
        }
        Rule::Antisymmetry => {
            let [up, down] = d.children.as_slice() else {
                return Err(ProofError::Malformed("antisymmetry needs two premises".into()));
            };
            let ok = ac_equal(up.lhs(), &c.lhs)
                && ac_equal(up.rhs(), &c.rhs)
                && ac_equal(down.lhs(), &c.rhs)
                && ac_equal(down.rhs(), &c.lhs);
            if !ok {
                return Err(ProofError::Malformed(format!("antisymmetry: {}", describe(c))));
            }
        }
        Rule::Sum => {
            if d.children.is_empty() {
                return Err(ProofError::CongruenceShape("empty sum".into()));
            }
            let l = Term::sum_all(d.children.iter().map(|x| x.lhs().clone()));
            let r = Term::sum_all(d.children.iter().map(|x| x.rhs().clone()));
            if !ac_equal(&l, &c.lhs) || !ac_equal(&r, &c.rhs) {
                return Err(ProofError::CongruenceShape(describe(c)));
            }
            if c.kind > weakest {
                return Err(ProofError::KindMismatch(describe(c)));
            }
        }
        Rule::Prefix(label) => {
            let [child] = d.children.as_slice() else {
                return Err(ProofError::CongruenceShape("prefix needs one premise".into()));
            };
            let l = Term::prefix(label.clone(), child.lhs().clone());
            let r = Term::prefix(label.clone(), child.rhs().clone());
            if !ac_equal(&l, &c.lhs) || !ac_equal(&r, &c.rhs) {
                return Err(ProofError::CongruenceShape(describe(c)));
            }
            if c.kind > weakest {
                return Err(ProofError::KindMismatch(describe(c)));
            }
        }
    }
    Ok(c.clone())
}

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

pub fn refl(t: Term) -> Derivation {
    Derivation { rule: Rule::Reflexivity, children: Vec::new(), conclusion: Statement::eq(t.clone(), t) }
}

pub fn sym(d: Derivation) -> Derivation {
    debug_assert_eq!(d.kind(), Kind::Eq, "symmetry on an inequation");
    match d.rule {
        Rule::Reflexivity => d,
        Rule::Symmetry => d.children.into_iter().next().expect("one premise"),
        _ => {
            let conclusion = Statement::eq(d.rhs().clone(), d.lhs().clone());
            Derivation { rule: Rule::Symmetry, children: vec![d], conclusion }
        }
    }
}

/// Transitive composition; nested chains are flattened and reflexive links dropped.
pub fn trans(steps: Vec<Derivation>) -> Derivation {
    let start = steps.first().map(|d| d.lhs().clone());
    let mut flat = Vec::new();
    for s in steps {
        match s.rule {
            Rule::Transitivity => flat.extend(s.children),
            Rule::Reflexivity => {}
            _ => flat.push(s),
        }
    }
    match flat.len() {
        0 => refl(start.unwrap_or(Term::Nil)),
        1 => flat.pop().expect("one step"),
        _ => {
            let kind = flat.iter().map(Derivation::kind).min().expect("nonempty");
            let lhs = flat[0].lhs().clone();
            let rhs = flat[flat.len() - 1].rhs().clone();
            Derivation { rule: Rule::Transitivity, children: flat, conclusion: Statement { kind, lhs, rhs } }
        }
    }
}

pub fn antisym(up: Derivation, down: Derivation) -> Derivation {
    let conclusion = Statement::eq(up.lhs().clone(), up.rhs().clone());
    Derivation { rule: Rule::Antisymmetry, children: vec![up, down], conclusion }
}

pub fn sum(children: Vec<Derivation>) -> Derivation {
    let mut children: Vec<Derivation> = children;
    if children.len() == 1 {
        return children.pop().expect("one child");
    }
    if children.iter().all(|c| c.rule == Rule::Reflexivity) {
        return refl(Term::sum_all(children.into_iter().map(|c| c.conclusion.lhs)));
    }
    let kind = children.iter().map(Derivation::kind).min().unwrap_or(Kind::Eq);
    let lhs = Term::sum_all(children.iter().map(|c| c.lhs().clone()));
    let rhs = Term::sum_all(children.iter().map(|c| c.rhs().clone()));
    Derivation { rule: Rule::Sum, children, conclusion: Statement { kind, lhs, rhs } }
}

pub fn prefix(label: Label, d: Derivation) -> Derivation {
    if d.rule == Rule::Reflexivity {
        return refl(Term::prefix(label, d.conclusion.lhs));
    }
    let conclusion = Statement {
        kind: d.kind(),
        lhs: Term::prefix(label.clone(), d.lhs().clone()),
        rhs: Term::prefix(label.clone(), d.rhs().clone()),
    };
    Derivation { rule: Rule::Prefix(label), children: vec![d], conclusion }
}

/// Builds axiom instances against a session alphabet.
#[derive(Clone, Debug)]
pub struct Prover {
    alphabet: Alphabet,
}

impl Prover {
    pub fn new(alphabet: &Alphabet) -> Self {
        Prover { alphabet: alphabet.clone() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Instance of a built-in axiom or law; the substitution is made total
    /// on the statement's variables.
    pub fn ax(&self, name: &str, subst: Substitution) -> Result<Derivation> {
        self.instance(name, subst, false)
    }

    /// An equation used right to left.
    pub fn ax_back(&self, name: &str, subst: Substitution) -> Result<Derivation> {
        self.instance(name, subst, true)
    }

    fn instance(&self, name: &str, mut subst: Substitution, backward: bool) -> Result<Derivation> {
        let st = builtin_statement(name, &self.alphabet)?;
        if backward && st.kind == Kind::Leq {
            return Err(internal(format!("{name} is an inequation")));
        }
        for x in st.vars() {
            if subst.get(&x).is_none() {
                subst.insert(x.clone(), Term::Var(x));
            }
        }
        let (l, r) = (st.lhs.apply(&subst), st.rhs.apply(&subst));
        let (lhs, rhs) = if backward { (r, l) } else { (l, r) };
        Ok(Derivation {
            rule: Rule::Axiom { name: name.to_string(), subst, backward },
            children: Vec::new(),
            conclusion: Statement { kind: st.kind, lhs, rhs },
        })
    }
}

/// Splits the summands of `t` into those matching `wanted` (as a multiset,
/// modulo A1, A2, A4) and the rest.
fn take_summands(t: &Term, wanted: &Term) -> Option<Vec<Term>> {
    let mut rest: Vec<Term> = t.summands().into_iter().cloned().collect();
    for w in wanted.summands() {
        let i = rest.iter().position(|s| ac_equal(s, w))?;
        rest.remove(i);
    }
    Some(rest)
}

/// Applies `d` inside `cur`: `path` selects nested prefix summands (each
/// given as a term equal modulo A1, A2, A4 to the summand), and at the end
/// `d.lhs` must be a sub-multiset of the summands there.
pub fn in_context(cur: &Term, path: &[Term], d: Derivation) -> Result<Derivation> {
    match path.split_first() {
        None => {
            let rest = take_summands(cur, d.lhs())
                .ok_or_else(|| internal(format!("`{}` is not part of `{cur}`", d.lhs())))?;
            if rest.is_empty() {
                return Ok(d);
            }
            Ok(sum(vec![d, refl(Term::sum_all(rest))]))
        }
        Some((head, tail)) => {
            let mut rest: Vec<Term> = cur.summands().into_iter().cloned().collect();
            let i = rest
                .iter()
                .position(|s| ac_equal(s, head))
                .ok_or_else(|| internal(format!("no summand `{head}` in `{cur}`")))?;
            let Term::Prefix(label, body) = rest.remove(i) else {
                return Err(internal(format!("`{head}` is not a prefix")));
            };
            let inner = in_context(&body, tail, d)?;
            let here = prefix(label, inner);
            if rest.is_empty() {
                return Ok(here);
            }
            Ok(sum(vec![here, refl(Term::sum_all(rest))]))
        }
    }
}

/// A transitivity chain under construction.
#[derive(Clone, Debug)]
pub struct Chain {
    start: Term,
    cur: Term,
    steps: Vec<Derivation>,
}

impl Chain {
    pub fn new(t: Term) -> Self {
        Chain { start: t.clone(), cur: t, steps: Vec::new() }
    }

    pub fn cur(&self) -> &Term {
        &self.cur
    }

    /// Appends a step whose left side is the current term.
    pub fn then(&mut self, d: Derivation) -> Result<()> {
        if !ac_equal(d.lhs(), &self.cur) {
            return Err(internal(format!("chain expects `{}`, step starts at `{}`", self.cur, d.lhs())));
        }
        if d.rule != Rule::Reflexivity {
            self.cur = d.rhs().clone();
            self.steps.push(d);
        }
        Ok(())
    }

    /// Applies `d` at `path` inside the current term.
    pub fn at(&mut self, path: &[Term], d: Derivation) -> Result<()> {
        let step = in_context(&self.cur, path, d)?;
        self.then(step)
    }

    /// Applies `d` to some summands of the current term.
    pub fn apply(&mut self, d: Derivation) -> Result<()> {
        self.at(&[], d)
    }

    pub fn finish(self) -> Derivation {
        if self.steps.is_empty() {
            return refl(self.start);
        }
        trans(self.steps)
    }
}

/// `t ≈ t'` where `t'` drops duplicate top-level summands, via A3.
pub fn dedup_top(p: &Prover, t: &Term) -> Result<Derivation> {
    let mut chain = Chain::new(t.clone());
    loop {
        let summands: Vec<Term> = chain.cur().summands().into_iter().cloned().collect();
        let dup = summands
            .iter()
            .enumerate()
            .find(|(i, s)| summands[i + 1..].iter().any(|o| ac_equal(o, s)))
            .map(|(_, s)| s.clone());
        match dup {
            Some(s) => chain.apply(p.ax("A3", Substitution::new().with("x", s))?)?,
            None => return Ok(chain.finish()),
        }
    }
}

/// `t ≈ t'` with duplicates removed at every level, via A3.
pub fn dedup_deep(p: &Prover, t: &Term) -> Result<Derivation> {
    let mut chain = Chain::new(t.clone());
    let summands: Vec<Term> = t.summands().into_iter().cloned().collect();
    for s in summands {
        if let Term::Prefix(_, body) = &s {
            let inner = dedup_deep(p, body)?;
            if inner.rule != Rule::Reflexivity {
                chain.at(&[s.clone()], inner)?;
            }
        }
    }
    let top = dedup_top(p, chain.cur())?;
    chain.then(top)?;
    Ok(chain.finish())
}

/// `t ≈ t + s` for a summand `s` of `t`, via A3.
pub fn duplicate(p: &Prover, t: &Term, s: &Term) -> Result<Derivation> {
    in_context(t, &[], p.ax_back("A3", Substitution::new().with("x", s.clone()))?)
}

/// Applies `sigma` to every conclusion and composes it into axiom instances.
pub fn instantiate(d: &Derivation, sigma: &Substitution) -> Derivation {
    let rule = match &d.rule {
        Rule::Axiom { name, subst, backward } => {
            Rule::Axiom { name: name.clone(), subst: sigma.compose_after(subst), backward: *backward }
        }
        other => other.clone(),
    };
    Derivation {
        rule,
        children: d.children.iter().map(|c| instantiate(c, sigma)).collect(),
        conclusion: Statement {
            kind: d.kind(),
            lhs: d.lhs().apply(sigma),
            rhs: d.rhs().apply(sigma),
        },
    }
}

/// Replaces every use of a law for which `script` returns a derivation by
/// the correspondingly instantiated derivation, recursively.
pub fn expand_lemmas(d: &Derivation, script: &dyn Fn(&str) -> Option<Derivation>) -> Derivation {
    if let Rule::Axiom { name, subst, backward } = &d.rule {
        if let Some(s) = script(name) {
            let expanded = instantiate(&expand_lemmas(&s, script), subst);
            return if *backward { sym(expanded) } else { expanded };
        }
        return d.clone();
    }
    Derivation {
        rule: d.rule.clone(),
        children: d.children.iter().map(|c| expand_lemmas(c, script)).collect(),
        conclusion: d.conclusion.clone(),
    }
}

/// Base name of an axiom instance name, e.g. `D5` for `D5[a,2]`.
pub fn base_name(name: &str) -> &str {
    split_name(name).0
}

fn rule_name(r: &Rule) -> &'static str {
    match r {
        Rule::Axiom { .. } => "axiom",
        Rule::Reflexivity => "reflexivity",
        Rule::Symmetry => "symmetry",
        Rule::Transitivity => "transitivity",
        Rule::Antisymmetry => "antisymmetry",
        Rule::Sum => "sum",
        Rule::Prefix(_) => "prefix",
    }
}

pub fn derivation_to_json(d: &Derivation) -> Value {
    let mut m = Map::new();
    m.insert("rule".into(), json!(rule_name(&d.rule)));
    match &d.rule {
        Rule::Axiom { name, subst, backward } => {
            m.insert("axiom".into(), json!(name));
            m.insert("direction".into(), json!(if *backward { "backward" } else { "forward" }));
            let s: Map<String, Value> = subst.iter().map(|(x, t)| (x.to_string(), json!(t.to_string()))).collect();
            m.insert("subst".into(), Value::Object(s));
        }
        Rule::Prefix(l) => {
            m.insert("label".into(), json!(l.to_string()));
        }
        _ => {}
    }
    if !d.children.is_empty() {
        m.insert("children".into(), Value::Array(d.children.iter().map(derivation_to_json).collect()));
    }
    m.insert("conclusion".into(), json!(d.conclusion.to_string()));
    Value::Object(m)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    m.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Format(format!("missing string field `{key}`")))
}

pub fn derivation_from_json(v: &Value, alphabet: &Alphabet) -> Result<Derivation> {
    let m = v.as_object().ok_or_else(|| Error::Format("a proof node must be an object".into()))?;
    let conclusion = parse_statement(field(m, "conclusion")?, alphabet)?;
    let children = match m.get("children") {
        None => Vec::new(),
        Some(Value::Array(items)) => {
            items.iter().map(|c| derivation_from_json(c, alphabet)).collect::<Result<Vec<_>>>()?
        }
        Some(_) => return Err(Error::Format("`children` must be an array".into())),
    };
    let rule = match field(m, "rule")? {
        "axiom" => {
            let name = field(m, "axiom")?.to_string();
            let backward = match m.get("direction").and_then(Value::as_str).unwrap_or("forward") {
                "forward" => false,
                "backward" => true,
                other => return Err(Error::Format(format!("unknown direction `{other}`"))),
            };
            let mut subst = Substitution::new();
            if let Some(s) = m.get("subst") {
                let s = s.as_object().ok_or_else(|| Error::Format("`subst` must be an object".into()))?;
                for (x, t) in s {
                    let text = t.as_str().ok_or_else(|| Error::Format("substitution images are strings".into()))?;
                    subst.insert(Var::new(x), parse_term(text, alphabet)?);
                }
            }
            Rule::Axiom { name, subst, backward }
        }
        "reflexivity" => Rule::Reflexivity,
        "symmetry" => Rule::Symmetry,
        "transitivity" => Rule::Transitivity,
        "antisymmetry" => Rule::Antisymmetry,
        "sum" => Rule::Sum,
        "prefix" => {
            let l = field(m, "label")?;
            Rule::Prefix(if l == TAU { Label::Tau } else { Label::act(l) })
        }
        other => return Err(Error::Format(format!("unknown rule `{other}`"))),
    };
    Ok(Derivation { rule, children, conclusion })
}

/// A derivation together with the session it is meant to be checked in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub alphabet: Alphabet,
    /// Specification of the axiom base, e.g. `A1-4+WF1-3+D1-9`.
    pub base: String,
    pub proof: Derivation,
}

impl ProofFile {
    pub fn to_text(&self) -> String {
        let mut m = Map::new();
        m.insert("alphabet".into(), json!(self.alphabet.to_string()));
        m.insert("base".into(), json!(self.base));
        m.insert("proof".into(), derivation_to_json(&self.proof));
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let m = v.as_object().ok_or_else(|| Error::Format("a proof file is an object".into()))?;
        let alphabet = Alphabet::parse(field(m, "alphabet")?)?;
        let base = field(m, "base")?.to_string();
        let proof = derivation_from_json(m.get("proof").ok_or_else(|| Error::Format("missing `proof`".into()))?, &alphabet)?;
        Ok(ProofFile { alphabet, base, proof })
    }

    /// Checks the proof against its declared base.
    pub fn check(&self) -> Result<Statement> {
        let set = AxiomSet::builtin(&self.base, &self.alphabet)?;
        Ok(check_derivation(&self.proof, &set)?)
    }
}

/// Counts how often each axiom base name occurs in `d`.
pub fn axiom_histogram(d: &Derivation) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    d.walk(&mut |n| {
        if let Rule::Axiom { name, .. } = &n.rule {
            *out.entry(base_name(name).to_string()).or_insert(0) += 1;
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::finite(&["a", "b"]).unwrap()
    }

    fn t(s: &str) -> Term {
        parse_term(s, &ab()).unwrap()
    }

    fn wf() -> AxiomSet {
        AxiomSet::builtin("A1-4+WF1-3+D4", &ab()).unwrap()
    }

    #[test]
    fn wf3_instance_modulo_a4() {
        let s = Substitution::new().with("x", Term::Nil).with("y", Term::Nil);
        let d = Derivation {
            rule: Rule::Axiom { name: "WF3".into(), subst: s, backward: false },
            children: vec![],
            conclusion: Statement::leq(t("0"), t("tau.0")),
        };
        assert!(check_derivation(&d, &wf()).is_ok());
    }

    #[test]
    fn chain_through_d4() {
        let p = Prover::new(&ab());
        let first = p.ax("WF3", Substitution::new().with("x", Term::Nil).with("y", Term::Nil)).unwrap();
        let second = p.ax("D4", Substitution::new().with("x", Term::Nil).with("y", t("a.0"))).unwrap();
        let d = trans(vec![first, second]);
        let st = check_derivation(&d, &wf()).unwrap();
        assert!(st.ac_matches(&Statement::leq(t("0"), t("tau.0 + a.0"))));
    }

    #[test]
    fn reversed_inequation_rejected() {
        let d = Derivation {
            rule: Rule::Axiom { name: "WF2".into(), subst: Substitution::new(), backward: true },
            children: vec![],
            conclusion: Statement::leq(t("tau.x + y"), t("tau.(x + y)")),
        };
        assert!(matches!(check_derivation(&d, &wf()), Err(ProofError::ReversedInequation(_))));
        let inner = Prover::new(&ab()).ax("WF2", Substitution::new()).unwrap();
        let flipped = Derivation {
            rule: Rule::Symmetry,
            conclusion: Statement::leq(inner.rhs().clone(), inner.lhs().clone()),
            children: vec![inner],
        };
        assert!(matches!(check_derivation(&flipped, &wf()), Err(ProofError::ReversedInequation(_))));
    }

    #[test]
    fn equation_cannot_be_claimed_from_inequation() {
        let mut d = Prover::new(&ab()).ax("WF2", Substitution::new()).unwrap();
        d.conclusion.kind = Kind::Eq;
        assert!(matches!(check_derivation(&d, &wf()), Err(ProofError::KindMismatch(_))));
    }

    #[test]
    fn wrong_instance_rejected() {
        let mut d = Prover::new(&ab()).ax("WF3", Substitution::new()).unwrap();
        d.conclusion.rhs = t("tau.y + x");
        assert!(matches!(check_derivation(&d, &wf()), Err(ProofError::SubstitutionMismatch { .. })));
    }

    #[test]
    fn dedup_uses_a3() {
        let p = Prover::new(&ab());
        let d = dedup_deep(&p, &t("a.(x + x) + a.x + y")).unwrap();
        let st = check_derivation(&d, &wf()).unwrap();
        assert!(ac_equal(&st.rhs, &t("a.x + y")));
        assert_eq!(st.kind, Kind::Eq);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let p = Prover::new(&ab());
        let d = dedup_deep(&p, &t("a.(x + x) + a.x + tau.y")).unwrap();
        let file = ProofFile { alphabet: ab(), base: "A1-4".into(), proof: d };
        let text = file.to_text();
        let back = ProofFile::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert!(back.check().is_ok());
    }

    #[test]
    fn instantiation_keeps_proofs_valid() {
        let p = Prover::new(&ab());
        let d = dedup_deep(&p, &t("a.(x + x) + y + y")).unwrap();
        let sigma = Substitution::new().with("x", t("tau.b.0")).with("y", t("a.x"));
        let inst = instantiate(&d, &sigma);
        assert!(check_derivation(&inst, &wf()).is_ok());
    }
}
