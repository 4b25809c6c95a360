use bccs::axioms::{AxiomSet, Kind};
use bccs::decide_wf::Verdict;
use bccs::family::canonical_family;
use bccs::lts::{compare, compare_open, Relation};
use bccs::negative::{certify_nonderivability, generate_family, invariant_check, Attestation, FamilyId};
use bccs::random::{GenConfig, TermGen};
use bccs::wif::derive_ground_wif;
use bccs::{parse_terms, Action, Alphabet, Error};

fn ab() -> Alphabet {
    Alphabet::finite(&["a", "b"]).unwrap()
}

fn one() -> Alphabet {
    Alphabet::finite(&["a"]).unwrap()
}

fn cases() -> Vec<(FamilyId, Alphabet)> {
    vec![(FamilyId::Equation, ab()), (FamilyId::Multiaction, ab()), (FamilyId::Singleton, one())]
}

fn base(alphabet: &Alphabet) -> AxiomSet {
    AxiomSet::builtin("A1-4+WF1-2+WIF3", alphabet).unwrap()
}

#[test]
fn members_are_sound() {
    for (id, alphabet) in cases() {
        for m in 0..=4 {
            let st = generate_family(id, m, &alphabet).unwrap();
            assert_eq!(st.kind == Kind::Eq, id == FamilyId::Equation);
            if st.lhs.is_closed() && st.rhs.is_closed() {
                let c = compare(&st.lhs, &st.rhs, id.relation()).unwrap();
                assert!(c.holds, "{id}/m={m}: {:?}", c.witness);
                continue;
            }
            let family = canonical_family(&st.lhs, &st.rhs, &alphabet);
            let c = compare_open(&st.lhs, &st.rhs, id.relation(), &family);
            assert!(c.holds, "{id}/m={m}: {:?}", c.witness);
            let mut gen = TermGen::new(m as u64, GenConfig::closed(&alphabet, 3));
            for _ in 0..200 {
                let sigma = gen.closed_substitution(&st.vars(), 3);
                let c = compare(&sigma.close(&st.lhs), &sigma.close(&st.rhs), id.relation()).unwrap();
                assert!(c.holds, "{id}/m={m} under {sigma}: {:?}", c.witness);
            }
        }
    }
}

#[test]
fn invariants_separate_members() {
    let a = Action::new("a");
    for (id, alphabet) in cases() {
        for m in 1..=4 {
            let st = generate_family(id, m, &alphabet).unwrap();
            let on_lhs = invariant_check(id, &st.lhs, &a, m, &alphabet);
            let on_rhs = invariant_check(id, &st.rhs, &a, m, &alphabet);
            match id {
                FamilyId::Singleton => assert!(on_rhs && !on_lhs, "{id}/m={m}"),
                _ => assert!(on_lhs && !on_rhs, "{id}/m={m}"),
            }
        }
    }
}

#[test]
fn certificates_are_valid_above_the_depth_bound_and_monotone() {
    for (id, alphabet) in cases() {
        let e = base(&alphabet);
        let mut previous = false;
        for m in 1..=4 {
            let valid = match certify_nonderivability(id, m, &e, id.relation()) {
                Ok(cert) => {
                    assert_eq!(cert.depth_bound, 1);
                    let closed = id == FamilyId::Equation;
                    assert_eq!(cert.soundness == Attestation::Exact, closed, "{id}/m={m}");
                    assert!(cert.to_report().contains("valid: true"));
                    cert.is_valid()
                }
                Err(Error::MTooSmall { bound, .. }) => {
                    assert_eq!((m, bound), (1, 1), "{id}");
                    assert_ne!(id, FamilyId::Multiaction);
                    false
                }
                Err(e) => panic!("{id}/m={m}: {e}"),
            };
            assert!(!previous || valid, "{id}: valid at m={} but not at m={m}", m - 1);
            assert_eq!(valid, m >= 2 || id == FamilyId::Multiaction, "{id}/m={m}");
            previous = valid;
        }
    }
}

#[test]
fn equation_member_at_one_is_derivable() {
    let alphabet = ab();
    let st = generate_family(FamilyId::Equation, 1, &alphabet).unwrap();
    assert!(derive_ground_wif(&st.lhs, &st.rhs, &alphabet).unwrap().is_derivable());
    assert!(derive_ground_wif(&st.rhs, &st.lhs, &alphabet).unwrap().is_derivable());
}

#[test]
fn prefixed_variants_are_sound_and_derivable() {
    let alphabet = one();
    for (m, l, r) in [
        (1, "a.a.a.0 + a.(a.0 + a.a.0)", "a.(a.0 + a.a.0)"),
        (2, "a.a.a.a.a.0 + a.(a.a.0 + a.a.a.a.0)", "a.(a.a.0 + a.a.a.a.0)"),
    ] {
        let ts = parse_terms(&[l, r], &alphabet).unwrap();
        assert!(compare(&ts[0], &ts[1], Relation::EquivWif).unwrap().holds, "m={m}");
        for (p, q) in [(&ts[0], &ts[1]), (&ts[1], &ts[0])] {
            match derive_ground_wif(p, q, &alphabet).unwrap() {
                Verdict::Derivable(_) => {}
                Verdict::NotDerivable { witness, .. } => panic!("m={m}: {p} <= {q}: {witness}"),
            }
        }
    }
}

#[test]
fn unsound_axiom_sets_are_rejected() {
    let alphabet = ab();
    let e = AxiomSet::builtin("A1-4+WF1-3", &alphabet).unwrap();
    for id in [FamilyId::Equation, FamilyId::Multiaction] {
        match certify_nonderivability(id, 2, &e, id.relation()) {
            Err(Error::UnsoundAxiom { axiom, .. }) => assert_eq!(axiom, "WF3"),
            other => panic!("{id}: {other:?}"),
        }
    }
}

#[test]
fn alphabet_requirements() {
    assert!(matches!(generate_family(FamilyId::Singleton, 2, &ab()), Err(Error::Config(_))));
    assert!(matches!(generate_family(FamilyId::Multiaction, 2, &one()), Err(Error::Config(_))));
    assert!(matches!(generate_family(FamilyId::Equation, 2, &Alphabet::countable()), Ok(_)));
}
