use bccs::axioms::AxiomSet;
use bccs::decide_wf::Verdict;
use bccs::lts::{compare, Relation};
use bccs::proof::check_derivation;
use bccs::random::{GenConfig, TermGen};
use bccs::term::{ac_equal, Alphabet, Term};
use bccs::wif::{derive_ground_wif, WIF_BASE};

#[test]
fn closed_pairs_agree_with_the_oracle() {
    use rand::Rng;
    let ab = Alphabet::finite(&["a", "b"]).unwrap();
    let base = AxiomSet::builtin(WIF_BASE, &ab).unwrap();
    let mut gen = TermGen::new(31, GenConfig::closed(&ab, 3));
    let mut derivable = 0;
    for i in 0..500 {
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
        let v = derive_ground_wif(&t, &u, &ab).unwrap_or_else(|e| panic!("`{t}` <= `{u}`: {e}"));
        let oracle = compare(&t, &u, Relation::PreorderWif).unwrap().holds;
        assert_eq!(v.is_derivable(), oracle, "`{t}` <= `{u}`");
        if let Verdict::Derivable(d) = &v {
            let st = check_derivation(d, &base).unwrap_or_else(|e| panic!("`{t}` <= `{u}`: {e}"));
            assert!(ac_equal(&st.lhs, &t) && ac_equal(&st.rhs, &u));
            derivable += 1;
        }
    }
    assert!(derivable > 50, "only {derivable} derivable pairs");
}
