//! Saturated normal forms modulo weak failures, and the proof-producing
//! normalization into them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::proof::{dedup_top, Chain, Derivation, Prover};
use crate::term::{ac_equal, Action, Alphabet, Label, Substitution, Term, Var};

/// The axioms and laws a normalization derivation may cite.
pub const NORMALIZE_BASE: &str = "A1-4+WF1-3+D1-9";

pub const DEFAULT_MAX_SYMBOLS: usize = 12;

/// A set of actions and variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LSet {
    pub actions: BTreeSet<Action>,
    pub vars: BTreeSet<Var>,
}

impl LSet {
    pub fn new(actions: impl IntoIterator<Item = Action>, vars: impl IntoIterator<Item = Var>) -> Self {
        LSet { actions: actions.into_iter().collect(), vars: vars.into_iter().collect() }
    }

    /// Reads `{a, b, x}`-style listings; names in `actions` are actions.
    pub fn from_symbols<S: AsRef<str>>(symbols: &[S], actions: &BTreeSet<Action>) -> Self {
        let mut l = LSet::default();
        for s in symbols {
            let a = Action::new(s.as_ref());
            if actions.contains(&a) {
                l.actions.insert(a);
            } else {
                l.vars.insert(Var::new(s.as_ref()));
            }
        }
        l
    }

    pub fn len(&self) -> usize {
        self.actions.len() + self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &LSet) -> bool {
        self.actions.is_subset(&other.actions) && self.vars.is_subset(&other.vars)
    }

    pub fn union(&self, other: &LSet) -> LSet {
        LSet {
            actions: self.actions.union(&other.actions).cloned().collect(),
            vars: self.vars.union(&other.vars).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &LSet) -> LSet {
        LSet {
            actions: self.actions.difference(&other.actions).cloned().collect(),
            vars: self.vars.difference(&other.vars).cloned().collect(),
        }
    }

    /// All symbols, sorted by name.
    pub fn symbols(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .actions
            .iter()
            .map(|a| a.to_string())
            .chain(self.vars.iter().map(|x| x.to_string()))
            .collect();
        v.sort();
        v
    }

    /// Every subset of `self` that contains `base`.
    fn supersets_of_within(&self, base: &LSet) -> Vec<LSet> {
        let free = self.difference(base);
        let acts: Vec<Action> = free.actions.into_iter().collect();
        let vars: Vec<Var> = free.vars.into_iter().collect();
        let n = acts.len() + vars.len();
        (0u64..(1u64 << n))
            .map(|mask| {
                let mut l = base.clone();
                for (i, a) in acts.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        l.actions.insert(a.clone());
                    }
                }
                for (j, x) in vars.iter().enumerate() {
                    if mask & (1 << (acts.len() + j)) != 0 {
                        l.vars.insert(x.clone());
                    }
                }
                l
            })
            .collect()
    }
}

impl Ord for LSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.symbols().cmp(&other.symbols())
    }
}

impl PartialOrd for LSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols().join(","))
    }
}

/// A nonempty family of sets closed under union and under filling in
/// intervals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SaturatedFamily {
    members: BTreeSet<LSet>,
}

impl SaturatedFamily {
    pub fn members(&self) -> &BTreeSet<LSet> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, l: &LSet) -> bool {
        self.members.contains(l)
    }

    /// The union of all members, itself a member.
    pub fn top(&self) -> LSet {
        self.members.iter().fold(LSet::default(), |acc, l| acc.union(l))
    }

    pub fn singleton(l: LSet) -> Self {
        SaturatedFamily { members: BTreeSet::from([l]) }
    }
}

impl fmt::Display for SaturatedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn is_saturated(family: &BTreeSet<LSet>) -> bool {
    if family.is_empty() {
        return false;
    }
    for l1 in family {
        for l2 in family {
            if !family.contains(&l1.union(l2)) {
                return false;
            }
        }
    }
    let top = family.iter().fold(LSet::default(), |acc, l| acc.union(l));
    family.iter().all(|l1| top.supersets_of_within(l1).iter().all(|l3| family.contains(l3)))
}

fn union_closure(f: &BTreeSet<LSet>) -> BTreeSet<LSet> {
    let mut out = f.clone();
    loop {
        let mut added = Vec::new();
        for l1 in &out {
            for l2 in &out {
                let u = l1.union(l2);
                if !out.contains(&u) {
                    added.push(u);
                }
            }
        }
        if added.is_empty() {
            return out;
        }
        out.extend(added);
    }
}

/// The least saturated family containing `f`.
pub fn saturate(f: &[LSet]) -> Result<SaturatedFamily> {
    if f.is_empty() {
        return Err(Error::Config("cannot saturate an empty family".into()));
    }
    let closed = union_closure(&f.iter().cloned().collect());
    let top = closed.iter().fold(LSet::default(), |acc, l| acc.union(l));
    let mut members = BTreeSet::new();
    for l1 in &closed {
        members.extend(top.supersets_of_within(l1));
    }
    Ok(SaturatedFamily { members })
}

/// A term in normal form, kept structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    Tau { family: SaturatedFamily, children: BTreeMap<Action, NormalForm> },
    Action { lset: LSet, children: BTreeMap<Action, NormalForm> },
}

impl NormalForm {
    pub fn nil() -> Self {
        NormalForm::Action { lset: LSet::default(), children: BTreeMap::new() }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, NormalForm::Tau { .. })
    }

    /// `L(t)`.
    pub fn lset(&self) -> LSet {
        match self {
            NormalForm::Tau { family, .. } => family.top(),
            NormalForm::Action { lset, .. } => lset.clone(),
        }
    }

    pub fn children(&self) -> &BTreeMap<Action, NormalForm> {
        match self {
            NormalForm::Tau { children, .. } | NormalForm::Action { children, .. } => children,
        }
    }

    pub fn child(&self, a: &Action) -> Option<&NormalForm> {
        self.children().get(a)
    }

    /// `Σ_{a∈A_L} a.t_a + V_L` with this form's children.
    pub fn body(&self, l: &LSet) -> Term {
        render_body(l, self.children())
    }

    pub fn render(&self) -> Term {
        match self {
            NormalForm::Tau { family, children } => {
                Term::sum_all(family.members().iter().map(|l| Term::tau(render_body(l, children))))
            }
            NormalForm::Action { lset, children } => render_body(lset, children),
        }
    }
}

fn render_body(l: &LSet, children: &BTreeMap<Action, NormalForm>) -> Term {
    let acts = l.actions.iter().map(|a| {
        let child = children.get(a).map(NormalForm::render).unwrap_or(Term::Nil);
        Term::prefix(Label::Act(a.clone()), child)
    });
    Term::sum_all(acts.chain(l.vars.iter().map(|x| Term::Var(x.clone()))))
}

/// Reads `t` as a normal form if it has exactly the required shape.
pub fn recognize(t: &Term) -> Option<NormalForm> {
    let summands = t.summands();
    if summands.iter().any(|s| matches!(s, Term::Prefix(Label::Tau, _))) {
        let mut members = BTreeSet::new();
        let mut children: BTreeMap<Action, Term> = BTreeMap::new();
        for s in summands {
            let Term::Prefix(Label::Tau, body) = s else {
                return None;
            };
            let (l, kids) = recognize_action_shape(body)?;
            for (a, k) in kids {
                match children.get(&a) {
                    Some(prev) if !ac_equal(prev, &k) => return None,
                    Some(_) => {}
                    None => {
                        children.insert(a, k);
                    }
                }
            }
            if !members.insert(l) {
                return None;
            }
        }
        if !is_saturated(&members) {
            return None;
        }
        let children = recognize_children(children)?;
        Some(NormalForm::Tau { family: SaturatedFamily { members }, children })
    } else {
        let (lset, kids) = recognize_action_shape(t)?;
        let children = recognize_children(kids.into_iter().collect())?;
        Some(NormalForm::Action { lset, children })
    }
}

fn recognize_children(kids: BTreeMap<Action, Term>) -> Option<BTreeMap<Action, NormalForm>> {
    kids.into_iter().map(|(a, k)| recognize(&k).map(|nf| (a, nf))).collect()
}

fn recognize_action_shape(t: &Term) -> Option<(LSet, Vec<(Action, Term)>)> {
    let mut l = LSet::default();
    let mut kids = Vec::new();
    for s in t.summands() {
        match s {
            Term::Prefix(Label::Act(a), body) => {
                if !l.actions.insert(a.clone()) {
                    return None;
                }
                kids.push((a.clone(), (**body).clone()));
            }
            Term::Var(x) => {
                if !l.vars.insert(x.clone()) {
                    return None;
                }
            }
            _ => return None,
        }
    }
    Some((l, kids))
}

pub fn is_normal_form(t: &Term) -> bool {
    recognize(t).is_some()
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    /// Largest `|L(t)|` at which a family may be saturated.
    pub max_symbols: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { max_symbols: DEFAULT_MAX_SYMBOLS }
    }
}

/// Normalizes `t`; the derivation proves `t ≈ render(nf)` from
/// [`NORMALIZE_BASE`].
pub fn normalize(t: &Term, alphabet: &Alphabet) -> Result<(NormalForm, Derivation)> {
    normalize_with(t, alphabet, NormalizeOptions::default())
}

pub fn normalize_with(t: &Term, alphabet: &Alphabet, opts: NormalizeOptions) -> Result<(NormalForm, Derivation)> {
    let n = Normalizer { p: Prover::new(alphabet), opts };
    n.norm(t)
}

/// Both `τ.render(nf)` in normal form and a proof of the equation.
pub fn tau_wrap(nf: &NormalForm, alphabet: &Alphabet) -> Result<(NormalForm, Derivation)> {
    let p = Prover::new(alphabet);
    let wrapped = Term::tau(nf.render());
    match nf {
        NormalForm::Action { lset, children } => {
            let out = NormalForm::Tau { family: SaturatedFamily::singleton(lset.clone()), children: children.clone() };
            Ok((out, crate::proof::refl(wrapped)))
        }
        NormalForm::Tau { family, .. } => {
            let mut bodies = family.members().iter().map(|l| nf.body(l));
            let first = bodies.next().expect("nonempty family");
            let rest = Term::sum_all(bodies.map(Term::tau));
            let d2 = p.ax("D2", Substitution::new().with("x", first).with("y", rest))?;
            let mut c = Chain::new(wrapped);
            c.then(d2)?;
            Ok((nf.clone(), finish_at(c, nf.render())?))
        }
    }
}

/// Closes `c`, stating the conclusion with `target` on the right.
pub(crate) fn finish_at(c: Chain, target: Term) -> Result<Derivation> {
    if !ac_equal(c.cur(), &target) {
        return Err(Error::Internal(format!("derivation ends at `{}`, expected `{target}`", c.cur())));
    }
    let mut d = c.finish();
    d.conclusion.rhs = target;
    Ok(d)
}

struct Normalizer {
    p: Prover,
    opts: NormalizeOptions,
}

/// A τ-summand body during normalization: one child per action plus
/// variables.
#[derive(Clone, Debug)]
struct Body {
    acts: BTreeMap<Action, Term>,
    vars: BTreeSet<Var>,
}

impl Body {
    fn term(&self) -> Term {
        let acts = self.acts.iter().map(|(a, t)| Term::prefix(Label::Act(a.clone()), t.clone()));
        Term::sum_all(acts.chain(self.vars.iter().map(|x| Term::Var(x.clone()))))
    }

    fn lset(&self) -> LSet {
        LSet::new(self.acts.keys().cloned(), self.vars.iter().cloned())
    }
}

/// `t` with the summands of `lhs` replaced by those of `rhs`.
fn replace_summands(t: &Term, lhs: &Term, rhs: &Term) -> Term {
    let mut rest: Vec<Term> = t.summands().into_iter().cloned().collect();
    for w in lhs.summands() {
        if let Some(i) = rest.iter().position(|s| ac_equal(s, w)) {
            rest.remove(i);
        }
    }
    rest.extend(rhs.summands().into_iter().cloned());
    Term::sum_all(rest)
}

fn subst(pairs: &[(&str, Term)]) -> Substitution {
    pairs.iter().fold(Substitution::new(), |s, (x, t)| s.with(x, t.clone()))
}

impl Normalizer {
    fn norm(&self, t: &Term) -> Result<(NormalForm, Derivation)> {
        if t.summands().iter().any(|s| matches!(s, Term::Prefix(Label::Tau, _))) {
            self.tau_case(t)
        } else {
            self.action_case(t)
        }
    }

    /// Groups equal actions with D5 and merges duplicate variables with A3,
    /// at `path` inside the chain. Returns the resulting body.
    fn group(&self, c: &mut Chain, under_tau: bool, t: &Term) -> Result<Body> {
        let mut current = t.clone();
        let mut step = |c: &mut Chain, d: Derivation| -> Result<()> {
            let next = replace_summands(&current, d.lhs(), d.rhs());
            if under_tau {
                c.at(&[Term::tau(current.clone())], d)?;
            } else {
                c.apply(d)?;
            }
            current = next;
            Ok(())
        };
        let mut by_action: BTreeMap<Action, Vec<Term>> = BTreeMap::new();
        let mut var_count: BTreeMap<Var, usize> = BTreeMap::new();
        for s in t.summands() {
            match s {
                Term::Prefix(Label::Act(a), body) => by_action.entry(a.clone()).or_default().push((**body).clone()),
                Term::Var(x) => *var_count.entry(x.clone()).or_default() += 1,
                other => return Err(Error::Internal(format!("unexpected summand `{other}` in grouping"))),
            }
        }
        let mut acts = BTreeMap::new();
        for (a, bodies) in by_action {
            let name = format!("D5[{a},{}]", bodies.len());
            let sigma = Substitution::from_pairs(
                bodies.iter().enumerate().map(|(k, b)| (Var::new(&format!("x{}", k + 1)), b.clone())),
            );
            step(c, self.p.ax(&name, sigma)?)?;
            acts.insert(a, Term::sum_all(bodies.into_iter().map(Term::tau)));
        }
        for (x, n) in &var_count {
            for _ in 1..*n {
                step(c, self.p.ax("A3", subst(&[("x", Term::Var(x.clone()))]))?)?;
            }
        }
        Ok(Body { acts, vars: var_count.into_keys().collect() })
    }

    fn action_case(&self, t: &Term) -> Result<(NormalForm, Derivation)> {
        let mut c = Chain::new(t.clone());
        let body = self.group(&mut c, false, t)?;
        let mut children = BTreeMap::new();
        for (a, u) in &body.acts {
            let (nf, d) = self.norm(u)?;
            c.at(&[Term::prefix(Label::Act(a.clone()), u.clone())], d)?;
            children.insert(a.clone(), nf);
        }
        let nf = NormalForm::Action { lset: body.lset(), children };
        let target = nf.render();
        Ok((nf, finish_at(c, target)?))
    }

    fn tau_case(&self, t: &Term) -> Result<(NormalForm, Derivation)> {
        let mut c = Chain::new(t.clone());

        // lift nested τ-summands out of τ-bodies with D2
        loop {
            let summands: Vec<Term> = c.cur().summands().into_iter().cloned().collect();
            let hit = summands.iter().find_map(|s| match s {
                Term::Prefix(Label::Tau, body) => {
                    let inner: Vec<&Term> = body.summands();
                    let k = inner.iter().position(|i| matches!(i, Term::Prefix(Label::Tau, _)))?;
                    let Term::Prefix(_, w) = inner[k] else { unreachable!() };
                    let rest = Term::sum_all(inner.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, s)| (*s).clone()));
                    Some(((**w).clone(), rest))
                }
                _ => None,
            });
            match hit {
                Some((w, rest)) => c.apply(self.p.ax("D2", subst(&[("x", w), ("y", rest)]))?)?,
                None => break,
            }
        }

        // move the remaining non-τ summands under the first τ with D6
        let summands: Vec<Term> = c.cur().summands().into_iter().cloned().collect();
        let (taus, rest): (Vec<Term>, Vec<Term>) =
            summands.into_iter().partition(|s| matches!(s, Term::Prefix(Label::Tau, _)));
        if !rest.is_empty() {
            let Term::Prefix(_, first) = &taus[0] else { unreachable!() };
            c.apply(self.p.ax("D6", subst(&[("x", (**first).clone()), ("y", Term::sum_all(rest))]))?)?;
        }

        // group actions inside every τ-body
        let summands: Vec<Term> = c.cur().summands().into_iter().cloned().collect();
        let mut bodies = Vec::new();
        for s in &summands {
            let Term::Prefix(Label::Tau, b) = s else {
                return Err(Error::Internal(format!("`{s}` left at top level")));
            };
            bodies.push(self.group(&mut c, true, b)?);
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;
        let mut seen = Vec::<Term>::new();
        bodies.retain(|b| {
            let t = b.term();
            if seen.iter().any(|s| ac_equal(s, &t)) {
                false
            } else {
                seen.push(t);
                true
            }
        });

        // give every action one shared derivative with D9
        let actions: BTreeSet<Action> = bodies.iter().flat_map(|b| b.acts.keys().cloned()).collect();
        let mut shared: BTreeMap<Action, Term> = BTreeMap::new();
        for a in &actions {
            let idx: Vec<usize> = (0..bodies.len()).filter(|&i| bodies[i].acts.contains_key(a)).collect();
            if idx.len() == 1 {
                shared.insert(a.clone(), bodies[idx[0]].acts[a].clone());
                continue;
            }
            let mut sigma = Substitution::new();
            for (k, &i) in idx.iter().enumerate() {
                let mut others = bodies[i].clone();
                let w = others.acts.remove(a).expect("action present");
                sigma.insert(Var::new(&format!("t{}", k + 1)), w);
                sigma.insert(Var::new(&format!("y{}", k + 1)), others.term());
            }
            c.apply(self.p.ax(&format!("D9[{a},{}]", idx.len()), sigma)?)?;
            let u = Term::sum_all(idx.iter().map(|&i| Term::tau(bodies[i].acts[a].clone())));
            for &i in &idx {
                bodies[i].acts.insert(a.clone(), u.clone());
            }
            shared.insert(a.clone(), u);
        }

        // normalize the shared derivatives
        let mut children = BTreeMap::new();
        for (a, u) in &shared {
            let (nf, d) = self.norm(u)?;
            let prefixed = Term::prefix(Label::Act(a.clone()), u.clone());
            for b in bodies.iter_mut() {
                if b.acts.contains_key(a) {
                    c.at(&[Term::tau(b.term()), prefixed.clone()], d.clone())?;
                    b.acts.insert(a.clone(), nf.render());
                }
            }
            children.insert(a.clone(), nf);
        }
        let dd = dedup_top(&self.p, c.cur())?;
        c.then(dd)?;

        let mut members: Vec<LSet> = Vec::new();
        for b in &bodies {
            let l = b.lset();
            if !members.contains(&l) {
                members.push(l);
            }
        }
        let top = members.iter().fold(LSet::default(), |acc, l| acc.union(l));
        if top.len() > self.opts.max_symbols {
            return Err(Error::SymbolCap { found: top.len(), cap: self.opts.max_symbols });
        }
        let family = self.saturate_in(&mut c, members, &children)?;
        let nf = NormalForm::Tau { family, children };
        let target = nf.render();
        Ok((nf, finish_at(c, target)?))
    }

    /// Saturates the family of the τ-sum in `c` with D7 and D8.
    fn saturate_in(
        &self,
        c: &mut Chain,
        mut members: Vec<LSet>,
        children: &BTreeMap<Action, NormalForm>,
    ) -> Result<SaturatedFamily> {
        let body = |l: &LSet| render_body(l, children);
        loop {
            let pair = members.iter().enumerate().find_map(|(i, l1)| {
                members[i + 1..].iter().find(|l2| !members.contains(&l1.union(l2))).map(|l2| (l1.clone(), l2.clone()))
            });
            let Some((l1, l2)) = pair else { break };
            c.apply(self.p.ax("D7", subst(&[("x", body(&l1)), ("y", body(&l2))]))?)?;
            let merged = Term::sum(body(&l1), body(&l2));
            let dd = dedup_top(&self.p, &merged)?;
            c.at(&[Term::tau(merged)], dd)?;
            members.push(l1.union(&l2));
        }
        let top = members.iter().fold(LSet::default(), |acc, l| acc.union(l));
        let base: Vec<LSet> = members.clone();
        for l1 in &base {
            for l3 in top.supersets_of_within(l1) {
                if members.contains(&l3) {
                    continue;
                }
                let d8 = self.p.ax(
                    "D8",
                    subst(&[
                        ("x", body(l1)),
                        ("y", body(&l3.difference(l1))),
                        ("z", body(&top.difference(&l3))),
                    ]),
                )?;
                c.apply(d8)?;
                members.push(l3);
            }
        }
        Ok(SaturatedFamily { members: members.into_iter().collect() })
    }
}
