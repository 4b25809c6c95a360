//! Checks shared by the acceptance report and the focused integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;

use bccs::axioms::{builtin_statement, generate_equivalence_axioms, AxiomSet};
use bccs::decide_wf::{decide_preorder_wf, wf_base, Verdict};
use bccs::family::canonical_family;
use bccs::lts::{chop, compare, compare_open, observations, Relation};
use bccs::negative::{certify_nonderivability, generate_family, invariant_check, FamilyId};
use bccs::normal::{normalize, LSet, NormalForm, NORMALIZE_BASE};
use bccs::proof::check_derivation;
use bccs::random::{GenConfig, TermGen};
use bccs::scripts::{concludes, expanded_lemma_script, generated_axiom_script, ScriptBase};
use bccs::soundness::{fuzz_soundness, FuzzConfig};
use bccs::term::{ac_equal, Action, Alphabet, Substitution, Term};
use bccs::wif::{derive_ground_wif, WIF_BASE};
use bccs::{parse_term, Error, Error::MTooSmall};

/// Result of one acceptance criterion.
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

pub fn ab() -> Alphabet {
    Alphabet::finite(&["a", "b"]).unwrap()
}

pub fn traces_up_to(actions: &[Action], len: usize) -> Vec<Vec<Action>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|t: &Vec<Action>| {
                actions.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn subsets(actions: &[Action]) -> Vec<BTreeSet<Action>> {
    (0..1usize << actions.len())
        .map(|bits| actions.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, a)| a.clone()).collect())
        .collect()
}

/// Random pairs; three quarters are built so the left side tends to sit
/// below the right one. Right sides stay within depth 3.
pub fn wf_pairs(gen: &mut TermGen, n: usize) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    for i in 0..n {
        let t = gen.term();
        let u = match i % 4 {
            0 => gen.term(),
            1 => Term::sum(t.clone(), gen.term_of_depth(2)),
            2 => Term::tau(Term::sum(t.clone(), gen.term_of_depth(1))),
            _ => {
                if gen.rng().gen_bool(0.5) {
                    Term::sum(Term::tau(t.clone()), gen.term_of_depth(2))
                } else {
                    gen.term()
                }
            }
        };
        let u = if u.depth() <= 3 { u } else { gen.term() };
        out.push((t, u));
    }
    out
}

pub fn wif_pairs(gen: &mut TermGen, n: usize) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    for i in 0..n {
        let t = gen.term();
        let u = match i % 4 {
            0 => gen.term(),
            1 => Term::sum(t.clone(), Term::tau(gen.term_of_depth(1))),
            2 => Term::tau(t.clone()),
            _ => {
                if gen.rng().gen_bool(0.5) {
                    Term::sum(Term::tau(t.clone()), Term::tau(gen.term_of_depth(2)))
                } else {
                    Term::sum(t.clone(), Term::tau(t.clone()))
                }
            }
        };
        out.push((t, u));
    }
    out
}

/// 1. Soundness of the shipped axioms on random closed instances.
pub fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = FuzzConfig { samples: 1000, seed: 1, image_depth: 3, sizes: vec![1, 2, 3] };
    let sets = [
        ("A1-4+WF1-3+WF_A+D1-9", Relation::PreorderWf),
        ("A1-4+WF1-2+WIF3", Relation::PreorderWif),
        ("A1-4+WFE+TAB-AUX", Relation::EquivWf),
    ];
    let mut details = Vec::new();
    let mut violations = 0;
    for (spec, rel) in sets {
        let e = AxiomSet::builtin(spec, &ab()).unwrap();
        let r = fuzz_soundness(&e, rel, &cfg).unwrap();
        violations += r.violations();
        details.push(format!("{spec} vs {rel}: {} instances, {} violations", r.axioms.len(), r.violations()));
        for a in r.axioms.iter().filter(|a| !a.violations.is_empty()) {
            details.push(format!("violated: {}", a.name));
        }
    }
    let elapsed = start.elapsed();
    details.push(format!("{:.1}s (limit 60s)", elapsed.as_secs_f64()));
    Outcome::new(violations == 0 && elapsed < Duration::from_secs(60), details.join("; "))
}

pub fn worked_example_family() -> BTreeSet<LSet> {
    let acts: BTreeSet<Action> = ["a", "b", "c"].iter().map(|a| Action::new(a)).collect();
    let sets: [&[&str]; 10] = [
        &["a", "b", "c", "x"],
        &["a", "x", "y"],
        &["a", "b", "c", "x", "y", "z"],
        &["a", "b", "c", "x", "y"],
        &["a", "b", "c", "x", "z"],
        &["a", "b", "x", "y"],
        &["a", "c", "x", "y"],
        &["a", "x", "y", "z"],
        &["a", "b", "x", "y", "z"],
        &["a", "c", "x", "y", "z"],
    ];
    sets.iter().map(|s| LSet::from_symbols(s, &acts)).collect()
}

pub const WORKED_LITERAL: &str = "tau.(a.0 + tau.(b.0 + c.0) + x) + tau.(a.0 + tau.x + tau.y) + z";
pub const WORKED_LIFTED: &str = "tau.(a.0 + b.0 + c.0 + x) + tau.(a.0 + x + y) + z";

/// Normalizes `text` over {a,b,c}; returns the family and whether the
/// derivation checks and concludes the rendered normal form.
pub fn normalize_family(text: &str) -> (BTreeSet<LSet>, bool) {
    let abc = Alphabet::finite(&["a", "b", "c"]).unwrap();
    let t = parse_term(text, &abc).unwrap();
    let (nf, d) = normalize(&t, &abc).unwrap();
    let base = AxiomSet::builtin(NORMALIZE_BASE, &abc).unwrap();
    let checks = check_derivation(&d, &base).is_ok_and(|st| ac_equal(&st.lhs, &t) && ac_equal(&st.rhs, &nf.render()));
    let family = match &nf {
        NormalForm::Tau { family, .. } => family.members().clone(),
        NormalForm::Action { .. } => BTreeSet::new(),
    };
    (family, checks)
}

/// The normal form printed for the worked example, with every `t_i = 0`.
pub fn printed_normal_form() -> Term {
    let abc = Alphabet::finite(&["a", "b", "c"]).unwrap();
    let body = |l: &LSet| {
        let parts: Vec<String> = l.symbols().iter().map(|s| if s.len() == 1 && "abc".contains(s.as_str()) { format!("{s}.0") } else { s.clone() }).collect();
        format!("tau.({})", parts.join(" + "))
    };
    let text: Vec<String> = worked_example_family().iter().map(body).collect();
    parse_term(&text.join(" + "), &abc).unwrap()
}

/// Whether some closed instance separates the literal worked-example input
/// from the printed normal form under ≡WF.
pub fn literal_input_refuted() -> Option<String> {
    let abc = Alphabet::finite(&["a", "b", "c"]).unwrap();
    let t = parse_term(WORKED_LITERAL, &abc).unwrap();
    let nf = printed_normal_form();
    let c = compare_open(&t, &nf, Relation::EquivWf, &canonical_family(&t, &nf, &abc));
    c.witness.map(|w| w.to_string().split_whitespace().collect::<Vec<_>>().join(" "))
}

/// 2. The worked example reproduces the printed family.
pub fn criterion_2() -> Outcome {
    let want = worked_example_family();
    let (lit, lit_checks) = normalize_family(WORKED_LITERAL);
    let (lifted, lifted_checks) = normalize_family(WORKED_LIFTED);
    let refuted = literal_input_refuted();
    let detail = format!(
        "literal input: {} members, exact match {}, derivation checks {}; \
         literal input vs printed normal form: {}; \
         input with the nested tau lifted: exact match {}, derivation checks {}",
        lit.len(),
        lit == want,
        lit_checks,
        refuted.as_deref().map(|w| format!("not ≡WF ({w})")).unwrap_or_else(|| "≡WF".into()),
        lifted == want,
        lifted_checks,
    );
    Outcome::new(lit == want && lit_checks, detail)
}

fn check_wf_verdict(t: &Term, u: &Term, v: &Verdict, base: &AxiomSet) -> Result<(), String> {
    match v {
        Verdict::Derivable(d) => {
            let st = check_derivation(d, base).map_err(|e| format!("`{t}` <= `{u}`: {e}"))?;
            if !(ac_equal(&st.lhs, t) && ac_equal(&st.rhs, u)) {
                return Err(format!("`{t}` <= `{u}`: wrong conclusion"));
            }
        }
        Verdict::NotDerivable { subst, .. } => {
            let c = compare(&subst.close(t), &subst.close(u), Relation::PreorderWf).map_err(|e| e.to_string())?;
            if c.holds {
                return Err(format!("witness for `{t}` <= `{u}` does not refute"));
            }
        }
    }
    Ok(())
}

/// 3. Ground completeness of the WF decider.
pub fn criterion_3() -> Outcome {
    let ab = ab();
    let base = AxiomSet::builtin(wf_base(&ab), &ab).unwrap();
    let mut gen = TermGen::new(11, GenConfig::closed(&ab, 3));
    let (mut agree, mut derivable, mut errors) = (0, 0, Vec::new());
    let pairs = wf_pairs(&mut gen, 500);
    for (t, u) in &pairs {
        match decide_preorder_wf(t, u, &ab) {
            Ok(v) => {
                let oracle = compare(t, u, Relation::PreorderWf).unwrap().holds;
                if v.is_derivable() == oracle {
                    agree += 1;
                } else {
                    errors.push(format!("disagreement on `{t}` <= `{u}`"));
                }
                derivable += v.is_derivable() as usize;
                if let Err(e) = check_wf_verdict(t, u, &v, &base) {
                    errors.push(e);
                }
            }
            Err(e) => errors.push(format!("`{t}` <= `{u}`: {e}")),
        }
    }
    let detail = format!("{agree}/{} agree, {derivable} derivable, {} problems{}", pairs.len(), errors.len(), first(&errors));
    Outcome::new(errors.is_empty() && agree == pairs.len(), detail)
}

fn first(errors: &[String]) -> String {
    errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
}

/// 4. Open pairs are consistent with the canonical family.
pub fn criterion_4() -> Outcome {
    let mut errors = Vec::new();
    let mut total = 0;
    for alphabet in [ab(), Alphabet::countable()] {
        let base = AxiomSet::builtin(wf_base(&alphabet), &alphabet).unwrap();
        let cfg = GenConfig { actions: vec![Action::new("a"), Action::new("b")], ..GenConfig::open(&alphabet, &["x", "y"], 3) };
        let mut gen = TermGen::new(23, cfg);
        for (t, u) in wf_pairs(&mut gen, 300) {
            total += 1;
            let v = match decide_preorder_wf(&t, &u, &alphabet) {
                Ok(v) => v,
                Err(e) => {
                    errors.push(format!("`{t}` <= `{u}`: {e}"));
                    continue;
                }
            };
            let open = compare_open(&t, &u, Relation::PreorderWf, &canonical_family(&t, &u, &alphabet));
            if v.is_derivable() && !open.holds {
                errors.push(format!("derivable but falsified: `{t}` <= `{u}`"));
            }
            if let Err(e) = check_wf_verdict(&t, &u, &v, &base) {
                errors.push(e);
            }
        }
    }
    let detail = format!("{total} pairs over {{a,b}} and the countable alphabet, {} problems{}", errors.len(), first(&errors));
    Outcome::new(errors.is_empty(), detail)
}

/// 5. Ground completeness of the WIF prover.
pub fn criterion_5() -> Outcome {
    let ab = ab();
    let base = AxiomSet::builtin(WIF_BASE, &ab).unwrap();
    let mut gen = TermGen::new(31, GenConfig::closed(&ab, 3));
    let (mut agree, mut derivable, mut errors) = (0, 0, Vec::new());
    let pairs = wif_pairs(&mut gen, 500);
    for (t, u) in &pairs {
        match derive_ground_wif(t, u, &ab) {
            Ok(v) => {
                let oracle = compare(t, u, Relation::PreorderWif).unwrap().holds;
                if v.is_derivable() == oracle {
                    agree += 1;
                } else {
                    errors.push(format!("disagreement on `{t}` <= `{u}`"));
                }
                if let Verdict::Derivable(d) = &v {
                    derivable += 1;
                    match check_derivation(d, &base) {
                        Ok(st) if ac_equal(&st.lhs, t) && ac_equal(&st.rhs, u) => {}
                        Ok(_) => errors.push(format!("`{t}` <= `{u}`: wrong conclusion")),
                        Err(e) => errors.push(format!("`{t}` <= `{u}`: {e}")),
                    }
                }
            }
            Err(e) => errors.push(format!("`{t}` <= `{u}`: {e}")),
        }
    }
    let detail = format!("{agree}/{} agree, {derivable} derivable, {} problems{}", pairs.len(), errors.len(), first(&errors));
    Outcome::new(errors.is_empty() && agree == pairs.len(), detail)
}

/// 6. A(E) reproduces the auxiliary table, and each entry is derived from
/// A1-4 and the equational base.
pub fn criterion_6() -> Outcome {
    let ab = ab();
    let e = AxiomSet::builtin("A1-4+WF1-3+WF_A", &ab).unwrap();
    let generated = generate_equivalence_axioms(&e).unwrap();
    let table = AxiomSet::builtin("A1-4+TAB-AUX", &ab).unwrap().instances(ab.actions(), &[2]);
    let missing: Vec<&String> =
        table.iter().filter(|(_, st)| !generated.iter().any(|(_, g)| g.canonically_equal(st))).map(|(n, _)| n).collect();
    let extra: Vec<&String> =
        generated.iter().filter(|(_, g)| !table.iter().any(|(_, st)| st.canonically_equal(g))).map(|(n, _)| n).collect();
    let wfe = AxiomSet::builtin(ScriptBase::Wfe.spec(), &ab).unwrap();
    let mut underived = Vec::new();
    let mut derived = 0;
    for (name, st) in table.iter().filter(|(n, _)| !["A1", "A2", "A3", "A4"].contains(&n.as_str())) {
        match generated_axiom_script(name, &ab) {
            Ok(Some(d)) if check_derivation(&d, &wfe).is_ok() && concludes(&d, st) => derived += 1,
            _ => underived.push(name.clone()),
        }
    }
    let detail = format!(
        "{} generated, {} in the table, missing {:?}, extra {:?}; {derived} entries derived from {}, underived {:?}",
        generated.len(),
        table.len(),
        missing,
        extra,
        ScriptBase::Wfe.spec(),
        underived
    );
    Outcome::new(missing.is_empty() && extra.is_empty() && underived.is_empty(), detail)
}

/// The certificate matrix of criterion 7 with the depth proviso of each
/// case: `Ok(valid)` or the error.
pub fn certificate_matrix() -> Vec<(FamilyId, usize, Result<bool, Error>)> {
    let ab = ab();
    let one = Alphabet::finite(&["a"]).unwrap();
    let mut out = Vec::new();
    for (id, alphabet) in [(FamilyId::Equation, &ab), (FamilyId::Multiaction, &ab), (FamilyId::Singleton, &one)] {
        let e = AxiomSet::builtin("A1-4+WF1-2+WIF3", alphabet).unwrap();
        for m in 1..=3 {
            out.push((id, m, certify_nonderivability(id, m, &e, id.relation()).map(|c| c.is_valid())));
        }
    }
    out
}

/// Family soundness and invariant separation, independent of the depth
/// proviso.
pub fn family_subchecks(id: FamilyId, m: usize, alphabet: &Alphabet) -> Result<(), String> {
    let st = generate_family(id, m, alphabet).map_err(|e| e.to_string())?;
    let fam = canonical_family(&st.lhs, &st.rhs, alphabet);
    if !compare_open(&st.lhs, &st.rhs, id.relation(), &fam).holds {
        return Err(format!("{id} at m = {m} is not sound"));
    }
    let a = Action::new("a");
    let (src, dst) = if id == FamilyId::Singleton { (&st.rhs, &st.lhs) } else { (&st.lhs, &st.rhs) };
    if !invariant_check(id, src, &a, m, alphabet) || invariant_check(id, dst, &a, m, alphabet) {
        return Err(format!("{id} at m = {m} is not separated"));
    }
    Ok(())
}

/// 7. Non-derivability certificates for m ∈ {1,2,3}.
pub fn criterion_7() -> Outcome {
    let start = Instant::now();
    let matrix = certificate_matrix();
    let one = Alphabet::finite(&["a"]).unwrap();
    let mut sub = Vec::new();
    for m in 1..=3 {
        for (id, alphabet) in [(FamilyId::Equation, ab()), (FamilyId::Multiaction, ab()), (FamilyId::Singleton, one.clone())] {
            if let Err(e) = family_subchecks(id, m, &alphabet) {
                sub.push(e);
            }
        }
    }
    let elapsed = start.elapsed();
    let cells: Vec<String> = matrix
        .iter()
        .map(|(id, m, r)| match r {
            Ok(true) => format!("{id}/m={m}: valid"),
            Ok(false) => format!("{id}/m={m}: invalid"),
            Err(MTooSmall { relation, bound, .. }) => format!("{id}/m={m}: proviso needs m {relation} {bound}"),
            Err(e) => format!("{id}/m={m}: {e}"),
        })
        .collect();
    let all_valid = matrix.iter().all(|(_, _, r)| matches!(r, Ok(true)));
    let detail = format!(
        "{}; soundness and separation sub-checks: {}; {:.1}s (limit 120s)",
        cells.join(", "),
        if sub.is_empty() { "all pass".to_string() } else { sub.join(", ") },
        elapsed.as_secs_f64()
    );
    Outcome::new(all_valid && sub.is_empty() && elapsed < Duration::from_secs(120), detail)
}

/// Claim A for one instance: `ρ(v)` and the chopped `ρ'(v)` agree on weak
/// failure pairs `(c_1⋯c_ℓ, B)` with `ℓ ≤ k`.
pub fn chop_claim_a(v: &Term, rho: &Substitution, k: usize, b: &BTreeSet<Action>, actions: &[Action]) -> bool {
    let chopped = rho.map_images(|p| chop(k, b, p).unwrap());
    let o1 = observations(&rho.close(v));
    let o2 = observations(&chopped.close(v));
    traces_up_to(actions, k).iter().all(|tr| o1.is_failure_pair(tr, b) == o2.is_failure_pair(tr, b))
}

/// Claim B for one instance: `chop_k(p)` has no weak failure pair
/// `(c_0⋯c_k, B)`.
pub fn chop_claim_b(p: &Term, k: usize, b: &BTreeSet<Action>, actions: &[Action]) -> bool {
    let o = observations(&chop(k, b, p).unwrap());
    traces_up_to(actions, k + 1).iter().filter(|tr| tr.len() == k + 1).all(|tr| !o.is_failure_pair(tr, b))
}

/// 8. The chop construction, on 200 random instances with every `B ⊆ A`.
pub fn criterion_8() -> Outcome {
    let ab = ab();
    let actions = ab.actions().to_vec();
    let mut gen = TermGen::new(41, GenConfig::open(&ab, &["x", "y"], 3));
    let mut closed = TermGen::new(43, GenConfig::closed(&ab, 3));
    let mut failures = Vec::new();
    for i in 0..200 {
        let k = i % 3;
        let v = gen.term();
        let vars = v.vars();
        let rho = gen.closed_substitution(&vars, 3);
        let p = closed.term();
        for b in subsets(&actions) {
            if !chop_claim_a(&v, &rho, k, &b, &actions) {
                failures.push(format!("A: v = `{v}`, k = {k}, B = {b:?}"));
            }
            if !chop_claim_b(&p, k, &b, &actions) {
                failures.push(format!("B: p = `{p}`, k = {k}, B = {b:?}"));
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("200 instances x 4 refusal sets, {} failures{}", failures.len(), first(&failures)))
}

/// 9. The D-law scripts check against the bare base and conclude the laws.
pub fn criterion_9() -> Outcome {
    let ab = ab();
    let base = AxiomSet::builtin(ScriptBase::Wf.spec(), &ab).unwrap();
    let names = ["D1", "D2", "D3[a]", "D4", "D5[a,1]", "D5[a,2]", "D5[a,3]", "D6", "D7", "D8", "D9[a,1]", "D9[a,2]", "D9[a,3]"];
    let mut bad = Vec::new();
    for name in names {
        let ok = match expanded_lemma_script(name, ScriptBase::Wf, &ab) {
            Ok(Some(d)) => check_derivation(&d, &base).is_ok() && concludes(&d, &builtin_statement(name, &ab).unwrap()),
            _ => false,
        };
        if !ok {
            bad.push(name);
        }
    }
    Outcome::new(bad.is_empty(), format!("{} scripts checked against {}, failing {:?}", names.len(), ScriptBase::Wf.spec(), bad))
}
