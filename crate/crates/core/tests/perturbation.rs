mod common;

use common::*;
use proptest::prelude::*;
use serde_json::Value;
use zerosum::perturbation::{perturb, upsilon_class, verify_perturbation_with_basis, Lemma, UpsilonTag};
use zerosum::Report;

fn achieved_sizes(r: &Report) -> Vec<(String, usize)> {
    let items = r.details["items"].as_object().unwrap();
    items.iter().map(|(k, v)| (k.clone(), v["achieved"].as_array().unwrap().len())).collect()
}

fn achieved_in_basis(r: &Report) -> Vec<(String, Value)> {
    let items = r.details["items"].as_object().unwrap();
    items.iter().map(|(k, v)| (k.clone(), v["achieved_in_basis"].clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn suites_are_basis_independent(
        (m, alpha, lemma) in (4u32..=5).prop_flat_map(|m| (Just(m), automorphism(m), prop::sample::select(vec![Lemma::I, Lemma::II, Lemma::III])))
    ) {
        let g = grp(m);
        let standard = verify_perturbation_with_basis(m, lemma, (g.e1(), g.e2())).unwrap();
        let moved = verify_perturbation_with_basis(m, lemma, (alpha.apply(g.e1()), alpha.apply(g.e2()))).unwrap();
        prop_assert_eq!(standard.passed(), moved.passed());
        prop_assert!(standard.passed());
        prop_assert_eq!(&standard.counts, &moved.counts);
        prop_assert_eq!(achieved_sizes(&standard), achieved_sizes(&moved));
        prop_assert_eq!(achieved_in_basis(&standard), achieved_in_basis(&moved));
    }

    #[test]
    fn perturbation_keeps_the_sum((s, g) in (4u32..=6).prop_flat_map(|n| (sequence(n, 8), element(n)))) {
        prop_assume!(s.len() >= 2);
        let grp = s.group();
        let terms: Vec<_> = s.expanded().take(2).collect();
        let removed = zerosum::Sequence::from_terms(grp, terms.clone()).unwrap();
        let added = zerosum::Sequence::from_terms(grp, [grp.add(terms[0], g), grp.sub(terms[1], g)]).unwrap();
        let s2 = perturb(&s, &removed, &added).unwrap();
        prop_assert_eq!(s2.sigma(), s.sigma());
        prop_assert_eq!(s2.len(), s.len());
    }

    #[test]
    fn upsilon_membership_is_aut_invariant((m, xs, alpha) in (4u32..=7).prop_flat_map(|m| (Just(m), eq1_xs(m), automorphism(m)))) {
        let s = eq1(m, &xs);
        let c = upsilon_class(&s);
        prop_assert_ne!(c.tag, UpsilonTag::NotInUpsilon);
        prop_assert_eq!(upsilon_class(&s.apply_hom(&alpha)).tag, c.tag);
    }
}

#[test]
fn all_items_pass_for_small_m() {
    for m in 4..=6u32 {
        let g = grp(m);
        for lemma in [Lemma::I, Lemma::II, Lemma::III] {
            let r = verify_perturbation_with_basis(m, lemma, (g.e1(), g.e2())).unwrap();
            assert!(r.passed(), "m={m} lemma {lemma}");
            let items = r.details["items"].as_object().unwrap();
            assert_eq!(items.len(), if lemma == Lemma::I { 3 } else { 5 });
            for (label, _) in items {
                assert_eq!(r.counts[&format!("{label}.violations")], 0);
            }
        }
    }
}
