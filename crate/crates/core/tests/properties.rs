mod common;

use std::collections::{BTreeSet, VecDeque};

use bccs::lts::{closed_observations, compare, transitions, Relation};
use bccs::normal::{is_saturated, saturate, LSet};
use bccs::random::{GenConfig, TermGen};
use bccs::term::{canonicalize, CanonicalTerm};
use bccs::{parse_term, Action, Label, Substitution, Term, Var};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![Just(Label::act("a")), Just(Label::act("b")), Just(Label::Tau)]
}

fn term(depth: u32, leaves: Vec<Term>) -> BoxedStrategy<Term> {
    let leaf = proptest::sample::select(leaves);
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            (label(), inner.clone()).prop_map(|(l, t)| Term::prefix(l, t)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::sum(l, r)),
        ]
    })
    .boxed()
}

fn open_term(depth: u32) -> BoxedStrategy<Term> {
    term(depth, vec![Term::Nil, Term::var("x"), Term::var("y")])
}

fn closed_term(depth: u32) -> BoxedStrategy<Term> {
    term(depth, vec![Term::Nil])
}

fn size(t: &Term) -> usize {
    match t {
        Term::Nil | Term::Var(_) => 1,
        Term::Prefix(_, b) => 1 + size(b),
        Term::Sum(l, r) => 1 + size(l) + size(r),
    }
}

/// Every term one A1-4 rewrite step away from `t`, in either direction.
fn neighbours(t: &Term) -> Vec<Term> {
    let mut out = vec![Term::sum(t.clone(), t.clone()), Term::sum(t.clone(), Term::Nil)];
    match t {
        Term::Sum(l, r) => {
            out.push(Term::sum((**r).clone(), (**l).clone()));
            if l == r {
                out.push((**l).clone());
            }
            if **r == Term::Nil {
                out.push((**l).clone());
            }
            if let Term::Sum(x, y) = &**l {
                out.push(Term::sum((**x).clone(), Term::sum((**y).clone(), (**r).clone())));
            }
            if let Term::Sum(y, z) = &**r {
                out.push(Term::sum(Term::sum((**l).clone(), (**y).clone()), (**z).clone()));
            }
            for n in neighbours(l) {
                out.push(Term::sum(n, (**r).clone()));
            }
            for n in neighbours(r) {
                out.push(Term::sum((**l).clone(), n));
            }
        }
        Term::Prefix(a, b) => out.extend(neighbours(b).into_iter().map(|n| Term::prefix(a.clone(), n))),
        Term::Nil | Term::Var(_) => {}
    }
    out
}

/// Breadth-first A1-4 rewrite search from `t` to `u` through terms no larger
/// than either.
fn rewrites_to(t: &Term, u: &Term) -> bool {
    let bound = size(t).max(size(u));
    let mut seen = BTreeSet::from([t.clone()]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(s) = queue.pop_front() {
        if &s == u {
            return true;
        }
        for n in neighbours(&s) {
            if size(&n) <= bound && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    false
}

/// A random A1-4 variant of `t`.
fn shuffle(t: &Term, gen: &mut TermGen) -> Term {
    use rand::Rng;
    match t {
        Term::Sum(l, r) => {
            let (l, r) = (shuffle(l, gen), shuffle(r, gen));
            if gen.rng().gen_bool(0.5) {
                Term::sum(r, l)
            } else {
                Term::sum(l, r)
            }
        }
        Term::Prefix(a, b) => {
            let b = shuffle(b, gen);
            let b = if gen.rng().gen_bool(0.3) { Term::sum(b.clone(), b) } else { b };
            Term::prefix(a.clone(), b)
        }
        other => other.clone(),
    }
}

/// States reached from `t` by `σ` through the single-step transition
/// relation, with τ-steps anywhere.
fn reach(t: &Term, trace: &[Action]) -> BTreeSet<CanonicalTerm> {
    let mut frontier = BTreeSet::from([canonicalize(t)]);
    let close = |set: BTreeSet<CanonicalTerm>| {
        let mut all = set.clone();
        let mut todo: Vec<_> = set.into_iter().collect();
        while let Some(s) = todo.pop() {
            for (l, n) in transitions(&s) {
                if l.is_tau() && all.insert(n.clone()) {
                    todo.push(n);
                }
            }
        }
        all
    };
    frontier = close(frontier);
    for a in trace {
        let next = frontier
            .iter()
            .flat_map(|s| transitions(s).into_iter().filter(|(l, _)| l.action() == Some(a)).map(|(_, n)| n))
            .collect();
        frontier = close(next);
    }
    frontier
}

fn direct_failure_pair(t: &Term, trace: &[Action], refusal: &BTreeSet<Action>) -> bool {
    reach(t, trace).iter().any(|s| {
        transitions(s).iter().all(|(l, _)| !l.is_tau() && !l.action().is_some_and(|a| refusal.contains(a)))
    })
}

fn lset(bits: u8) -> LSet {
    let acts = ["a", "b", "c"].iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, a)| Action::new(a));
    let vars = ["x", "y"].iter().enumerate().filter(|(i, _)| bits >> (i + 3) & 1 == 1).map(|(_, x)| Var::new(x));
    LSet::new(acts, vars)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_round_trips(t in open_term(5)) {
        let back = parse_term(&t.to_string(), &common::ab()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(canonicalize(&back), canonicalize(&t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonicalization_is_idempotent(t in open_term(5)) {
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c.to_term()), c);
    }

    #[test]
    fn substitution_depth_bound(t in open_term(4), sx in closed_term(3), sy in closed_term(3)) {
        let sigma = Substitution::new().with("x", sx.clone()).with("y", sy.clone());
        let used: Vec<Var> = t.vars();
        let extra = used.iter().map(|v| sigma.get(v).map_or(0, Term::depth)).max().unwrap_or(0);
        prop_assert!(sigma.close(&t).depth() <= t.depth() + extra);
    }

    #[test]
    fn failure_pairs_match_path_enumeration(t in closed_term(4)) {
        let actions = [Action::new("a"), Action::new("b")];
        let obs = closed_observations(&t).unwrap();
        for trace in common::traces_up_to(&actions, t.depth()) {
            for b in common::subsets(&actions) {
                prop_assert_eq!(obs.is_failure_pair(&trace, &b), direct_failure_pair(&t, &trace, &b));
            }
        }
    }

    #[test]
    fn preorders_are_reflexive(t in closed_term(3)) {
        for rel in [Relation::LeqWf, Relation::PreorderWf, Relation::PreorderWif] {
            prop_assert!(compare(&t, &t, rel).unwrap().holds);
        }
    }

    #[test]
    fn saturation_is_bounded_and_idempotent(bits in proptest::collection::vec(0u8..32, 1..5)) {
        let f: Vec<LSet> = bits.into_iter().map(lset).collect();
        let s = saturate(&f).unwrap();
        let k = s.top().len();
        prop_assert!(s.len() <= 1 << k);
        prop_assert!(is_saturated(s.members()));
        prop_assert!(f.iter().all(|l| s.contains(l)));
        let members: Vec<LSet> = s.members().iter().cloned().collect();
        let again = saturate(&members).unwrap();
        prop_assert_eq!(again.members(), s.members());
    }
}

#[test]
fn canonical_equality_matches_rewrite_search() {
    let cfg = GenConfig::open(&common::ab(), &["x"], 2);
    let mut gen = TermGen::new(5, cfg);
    let (mut equal, mut total) = (0, 0);
    while total < 300 {
        let t = gen.term();
        let u = if total % 2 == 0 { shuffle(&t, &mut gen) } else { gen.term() };
        if size(&t).max(size(&u)) > 9 {
            continue;
        }
        total += 1;
        let same = canonicalize(&t) == canonicalize(&u);
        equal += same as usize;
        assert_eq!(same, rewrites_to(&t, &u), "{t} vs {u}");
    }
    assert!(equal >= 100, "only {equal} equal pairs");
}

#[test]
fn preorders_are_transitive() {
    let mut gen = TermGen::new(17, GenConfig::closed(&common::ab(), 3));
    for (rel, pairs) in [
        (Relation::PreorderWf, common::wf_pairs(&mut gen, 500)),
        (Relation::PreorderWif, common::wif_pairs(&mut gen, 500)),
    ] {
        let mut chains = 0;
        for (i, (p, q)) in pairs.iter().enumerate() {
            let r = match i % 3 {
                0 => Term::tau(q.clone()),
                1 => Term::sum(q.clone(), Term::tau(gen.term_of_depth(1))),
                _ => gen.term(),
            };
            let pq = compare(p, q, rel).unwrap().holds;
            let qr = compare(q, &r, rel).unwrap().holds;
            if pq && qr {
                chains += 1;
                assert!(compare(p, &r, rel).unwrap().holds, "{rel}: {p} / {q} / {r}");
            }
        }
        assert!(chains >= 50, "{rel}: only {chains} chains");
    }
}

#[test]
fn preorders_are_precongruences() {
    let mut gen = TermGen::new(23, GenConfig::closed(&common::ab(), 3));
    for (rel, pairs) in [
        (Relation::PreorderWf, common::wf_pairs(&mut gen, 400)),
        (Relation::PreorderWif, common::wif_pairs(&mut gen, 400)),
    ] {
        let related: Vec<_> = pairs.into_iter().filter(|(p, q)| compare(p, q, rel).unwrap().holds).collect();
        assert!(related.len() >= 100, "{rel}: only {} related pairs", related.len());
        for w in related.windows(2) {
            let ((p1, q1), (p2, q2)) = (&w[0], &w[1]);
            let (ps, qs) = (Term::sum(p1.clone(), p2.clone()), Term::sum(q1.clone(), q2.clone()));
            assert!(compare(&ps, &qs, rel).unwrap().holds, "{rel}: {ps} / {qs}");
            for l in [Label::act("a"), Label::act("b"), Label::Tau] {
                let (pp, qp) = (Term::prefix(l.clone(), p1.clone()), Term::prefix(l, q1.clone()));
                assert!(compare(&pp, &qp, rel).unwrap().holds, "{rel}: {pp} / {qp}");
            }
        }
    }
}

#[test]
fn wif_preserves_completed_traces() {
    let mut gen = TermGen::new(29, GenConfig::closed(&common::ab(), 3));
    let mut related = 0;
    for (p, q) in common::wif_pairs(&mut gen, 500) {
        if compare(&p, &q, Relation::PreorderWif).unwrap().holds {
            related += 1;
            let (cp, cq) = (closed_observations(&p).unwrap().completed, closed_observations(&q).unwrap().completed);
            assert!(cp.is_subset(&cq), "{p} / {q}");
        }
    }
    assert!(related >= 100);
}
