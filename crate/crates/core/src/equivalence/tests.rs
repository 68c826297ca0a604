use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::algebra::{Model, Signature, VarSet};
use crate::category::KnowledgeBase;
use crate::config::{Bounds, Exec};
use crate::error::Error;
use crate::fixtures;
use crate::formula::Formula;
use crate::lattice::generate_definable_algebra;
use crate::semantics::{enumerate_points, val};

fn arc(m: Model) -> Arc<Model> {
    Arc::new(m)
}

fn bounds() -> Bounds {
    Bounds::default()
}

fn cyclic3(p: &[&str]) -> Model {
    let sig = Signature::from_strs(&[("succ", 1)], &[("P", 1)], true).unwrap();
    let mut b = Model::builder(sig, &["0", "1", "2"]);
    for (a, s) in [("0", "1"), ("1", "2"), ("2", "0")] {
        b.op_row("succ", &[a], s).unwrap();
    }
    for e in p {
        b.rel_row("P", &[e]).unwrap();
    }
    b.build().unwrap()
}

fn lattice_size(m: &Arc<Model>, n: usize) -> u128 {
    generate_definable_algebra(m, &VarSet::canonical(n), &bounds())
        .unwrap()
        .size()
        .unwrap()
}

#[test]
fn phi_parse_display_and_inverse() {
    assert_eq!(PhiAutomorphism::parse("identity").unwrap(), PhiAutomorphism::identity());
    let pq = PhiAutomorphism::parse("swaprel P Q").unwrap();
    assert_eq!(pq.to_string(), "swap P Q");
    assert_eq!(pq.rel("P"), "Q");
    assert_eq!(pq.rel("R"), "R");
    assert_eq!(pq.inverse(), pq);
    let r = PhiAutomorphism::parse("renamevars x1:x2,x2:x3,x3:x1").unwrap();
    assert_eq!(r.to_string(), "rename x1:x2,x2:x3,x3:x1");
    assert_eq!(r.inverse().var(&r.var("x2")), "x2");
    assert_eq!(r.object(&VarSet::canonical(2)), VarSet::parse_list("x2,x3").unwrap());
    let cyc = PhiAutomorphism::swaps(&[("P", "Q"), ("Q", "R")]).unwrap();
    assert_eq!(cyc.to_string(), "cycle P Q R");
    for bad in ["renamevars x1:x2", "swaprel P", "rotate", "renamevars x1"] {
        assert!(
            matches!(PhiAutomorphism::parse(bad), Err(Error::InvalidPhi(_))),
            "{bad}"
        );
    }
    let sig = Signature::from_strs(&[], &[("P", 1), ("R", 2)], true).unwrap();
    assert!(PhiAutomorphism::parse("swaprel P R").unwrap().check(&sig).is_err());
    assert!(PhiAutomorphism::parse("swaprel P Z").unwrap().check(&sig).is_err());
}

#[test]
fn enumeration_order() {
    let sig = fixtures::m_pq1().signature().clone();
    let phis: Vec<String> = enumerate_phis(&sig, 2, PHI_LIMIT)
        .iter()
        .map(|p| p.to_string())
        .collect();
    assert_eq!(phis, ["identity", "swap P Q", "rename x1:x2,x2:x1"]);
    assert_eq!(enumerate_phis(&sig, 3, 4).len(), 4);
    let sig = fixtures::m_p().signature().clone();
    assert_eq!(enumerate_phis(&sig, 1, PHI_LIMIT).len(), 1);
}

#[test]
fn phi_transports_semantics_between_pq_models() {
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let phi = PhiAutomorphism::parse("swaprel P Q").unwrap();
    let vars = VarSet::canonical(2);
    let (s1, s2) = (
        enumerate_points(&m1, &vars, &bounds()).unwrap(),
        enumerate_points(&m2, &vars, &bounds()).unwrap(),
    );
    for f in fixtures::formula_corpus(m1.signature(), &vars, 2, 40) {
        assert_eq!(val(&f, &s1).unwrap(), val(&phi.formula(&f), &s2).unwrap(), "{f}");
    }
}

#[test]
fn find_functor_iso_examples() {
    let mp = arc(fixtures::m_p());
    let id = PhiAutomorphism::identity();
    let iso = find_functor_iso(&mp, &mp, &id, 2, 1, &bounds()).unwrap().unwrap();
    for n in 1..=2 {
        assert!(iso.alpha(n).iter().enumerate().all(|(i, &j)| i == j));
    }

    // the two models define the same point sets, so the P/Q swap fixes every member
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let swap = PhiAutomorphism::parse("swaprel P Q").unwrap();
    let iso = find_functor_iso(&m1, &m2, &swap, 2, 1, &bounds()).unwrap().unwrap();
    assert_eq!(iso.method(), IsoMethod::Coherent);
    for n in 1..=2 {
        let l = iso.left(n).lattice();
        assert_eq!(l.members(), iso.right(n).lattice().members());
        assert!(iso.alpha(n).iter().enumerate().all(|(i, &j)| i == j));
    }

    let p0 = arc(fixtures::m_p0());
    assert!(find_functor_iso(&mp, &p0, &id, 1, 1, &bounds()).unwrap().is_none());
    assert!(matches!(
        find_functor_iso(&mp, &m1, &id, 1, 1, &bounds()),
        Err(Error::SignatureMismatch(_))
    ));
}

#[test]
fn search_finds_alpha_when_phi_does_not_match_symbols() {
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let iso = find_functor_iso(&m1, &m2, &PhiAutomorphism::identity(), 2, 1, &bounds())
        .unwrap()
        .unwrap();
    assert_eq!(iso.method(), IsoMethod::Search);
    assert!(build_description_iso(&iso).unwrap().passed());
}

#[test]
fn search_respects_budget() {
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let tight = Bounds {
        search_budget: 1,
        ..bounds()
    };
    assert!(find_functor_iso(&m1, &m2, &PhiAutomorphism::identity(), 2, 1, &tight)
        .unwrap()
        .is_none());
}

#[test]
fn admissibility_transfer_examples() {
    let mp = arc(fixtures::m_p());
    let id = PhiAutomorphism::identity();
    let iso = find_functor_iso(&mp, &mp, &id, 1, 1, &bounds()).unwrap().unwrap();
    let r = verify_admissibility_transfer(&iso, 1, 1).unwrap();
    assert!(r.passed());
    // four filters and one depth-1 substitution
    assert_eq!(r.checked, 16);

    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let swap = PhiAutomorphism::parse("swaprel P Q").unwrap();
    let iso = find_functor_iso(&m1, &m2, &swap, 2, 1, &bounds()).unwrap().unwrap();
    assert!(verify_admissibility_transfer(&iso, 1, 1).unwrap().passed());
    assert!(verify_admissibility_transfer(&iso, 2, 1).unwrap().passed());
    assert!(verify_admissibility_transfer(&iso, 3, 1).is_err());

    let l = iso.left(1).lattice();
    let bottom = l.index_of(l.bottom().points()).unwrap();
    let top = l.index_of(l.top().points()).unwrap();
    let bad = iso.corrupted(1, bottom, top);
    let r = verify_admissibility_transfer(&bad, 1, 1).unwrap();
    assert!(r.failure_count >= 1);
    assert!(!r.failures.is_empty());
}

#[test]
fn description_iso_examples() {
    let mp = arc(fixtures::m_p());
    let id = PhiAutomorphism::identity();
    let iso = find_functor_iso(&mp, &mp, &id, 2, 1, &bounds()).unwrap().unwrap();
    assert!(build_description_iso(&iso).unwrap().passed());

    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let swap = PhiAutomorphism::parse("swaprel P Q").unwrap();
    let iso = find_functor_iso(&m1, &m2, &swap, 2, 1, &bounds()).unwrap().unwrap();
    let r = build_description_iso(&iso).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    let l = iso.left(1).lattice();
    let mentions = |f: &Formula, rel: &str| f.to_string().contains(&format!("{rel}("));
    let with_p = (0..l.len())
        .map(|i| l.filter(i))
        .find(|t| mentions(t.witness(), "P"))
        .unwrap();
    let image = swap.formula(with_p.witness());
    assert!(mentions(&image, "Q") && !mentions(&image, "P"));

    let neg = arc(fixtures::m_neg());
    let iso = find_functor_iso(&neg, &neg, &id, 2, 2, &bounds()).unwrap().unwrap();
    let r = build_description_iso(&iso).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.checked > 1000);

    let bad = iso.corrupted(1, 0, 1);
    assert!(!build_description_iso(&bad).unwrap().passed());
}

#[test]
fn every_witness_satisfies_the_functor_laws() {
    let models = fixtures::all();
    for (n1, a) in &models {
        for (n2, b) in &models {
            if a.signature() != b.signature() {
                continue;
            }
            let (a, b) = (arc(a.clone()), arc(b.clone()));
            for phi in enumerate_phis(a.signature(), 2, PHI_LIMIT) {
                if let Some(iso) = find_functor_iso(&a, &b, &phi, 2, 1, &bounds()).unwrap() {
                    let r = build_description_iso(&iso).unwrap();
                    assert!(r.passed(), "{n1} {n2} {phi}: {:?}", r.failures);
                    assert!(verify_admissibility_transfer(&iso, 2, 1).unwrap().passed());
                }
            }
        }
    }
}

#[test]
fn check_isomorphic_examples() {
    let mp = arc(fixtures::m_p());
    let r = check_isomorphic(&mp, &mp).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    assert_eq!(r.witness.unwrap().model_map.unwrap(), "0->0,1->1");
    let r = check_isomorphic(&mp, &arc(fixtures::m_p_relabeled())).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    let r = check_isomorphic(&arc(fixtures::m_pq1()), &arc(fixtures::m_pq2())).unwrap();
    assert_eq!(r.verdict, Verdict::Inequivalent);
    assert!(check_isomorphic(&mp, &arc(fixtures::m_neg())).is_err());
}

#[test]
fn informational_equivalence_examples() {
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let r = check_informational_equivalence(&m1, &m2, 2, 1, &bounds()).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    let w = r.witness.unwrap();
    assert_eq!(w.phi.as_deref(), Some("swap P Q"));
    assert_eq!(w.kind, "functor isomorphism");
    assert!(w.laws_checked > 0);

    let (mp, p0) = (arc(fixtures::m_p()), arc(fixtures::m_p0()));
    let r = check_informational_equivalence(&mp, &p0, 1, 1, &bounds()).unwrap();
    assert_eq!(r.verdict, Verdict::Inequivalent);
    let refutation = r.refutation.unwrap();
    assert_eq!(refutation.to_string(), "lattice size 4 vs 2 at X={x1} (|X|=1)");
    assert_eq!(
        (lattice_size(&mp, 1), lattice_size(&p0, 1)),
        (refutation.left.parse().unwrap(), refutation.right.parse().unwrap())
    );

    let r = check_informational_equivalence(&mp, &mp, 2, 2, &bounds()).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    assert_eq!(r.witness.unwrap().phi.as_deref(), Some("identity"));

    let rel = arc(fixtures::m_p_relabeled());
    let r = check_informational_equivalence(&mp, &rel, 2, 1, &bounds()).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    let w = r.witness.unwrap();
    assert_eq!(w.kind, "model isomorphism");
    assert_eq!(w.phi.as_deref(), Some("identity"));
    assert_eq!(r.iso.unwrap().method(), IsoMethod::ModelIsomorphism);
}

#[test]
fn isomorphism_transports_to_a_functor_iso() {
    let mp = arc(fixtures::m_p());
    let rel = arc(fixtures::m_p_relabeled());
    let r = check_informational_equivalence(&mp, &rel, 2, 1, &bounds()).unwrap();
    let iso = r.iso.unwrap();
    // {(1)} over M_P is {(a)} over the copy
    let l = iso.left(1).lattice();
    let rl = iso.right(1).lattice();
    for (i, &j) in iso.alpha(1).iter().enumerate() {
        let left: Vec<String> = l.members()[i].iter().map(|p| mp.label(p).to_string()).collect();
        let right: Vec<String> = rl.members()[j].iter().map(|p| rel.label(p).to_string()).collect();
        let mapped: Vec<String> = left
            .iter()
            .map(|e| if e == "1" { "a" } else { "b" }.to_string())
            .collect();
        let (mut mapped, mut right) = (mapped, right);
        mapped.sort();
        right.sort();
        assert_eq!(mapped, right);
    }
}

#[test]
fn refutations_are_sound() {
    let models = fixtures::all();
    for (_, a) in &models {
        for (_, b) in &models {
            if a.signature() != b.signature() {
                continue;
            }
            let (a, b) = (arc(a.clone()), arc(b.clone()));
            let r = check_informational_equivalence(&a, &b, 2, 1, &bounds()).unwrap();
            if let Some(refutation) = &r.refutation {
                let n = refutation.vars.split(',').count();
                let (k1, k2) = (
                    KnowledgeBase::build(&a, n, &bounds()).unwrap(),
                    KnowledgeBase::build(&b, n, &bounds()).unwrap(),
                );
                assert!(k1.exact() && k2.exact());
                let (l1, l2) = (k1.object(n).lattice(), k2.object(n).lattice());
                assert!(l1.len() != l2.len() || l1.invariants() != l2.invariants());
            }
            assert_ne!(r.verdict, Verdict::Unknown);
        }
    }
}

#[test]
fn negative_controls() {
    let (mp, p0) = (arc(fixtures::m_p()), arc(fixtures::m_p0()));
    for n in 1..=2 {
        let r = check_informational_equivalence(&mp, &p0, n, 1, &bounds()).unwrap();
        assert_eq!(r.verdict, Verdict::Inequivalent);
        let r = check_automorphic_equivalence(&mp, &p0, &PhiAutomorphism::identity(), n, 1, &bounds()).unwrap();
        assert_ne!(r.verdict, Verdict::EquivalentWitnessed);
    }
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let r = check_automorphic_equivalence(&m1, &m2, &PhiAutomorphism::identity(), 2, 1, &bounds()).unwrap();
    assert_ne!(r.verdict, Verdict::Inequivalent);
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let (m1, m2) = (arc(fixtures::m_pq1()), arc(fixtures::m_pq2()));
    let seq = check_informational_equivalence(&m1, &m2, 2, 1, &bounds().with_exec(Exec::Sequential)).unwrap();
    let par = check_informational_equivalence(&m1, &m2, 2, 1, &bounds()).unwrap();
    assert_eq!(seq.verdict, par.verdict);
    assert_eq!(seq.witness, par.witness);
    assert_eq!(seq.notes, par.notes);
}

#[test]
fn three_element_models() {
    let a = arc(cyclic3(&["0"]));
    let b = arc(cyclic3(&["2"]));
    let c = arc(cyclic3(&["0", "1"]));
    let r = check_informational_equivalence(&a, &b, 1, 1, &bounds()).unwrap();
    assert_eq!(r.verdict, Verdict::EquivalentWitnessed);
    assert_eq!(r.witness.unwrap().kind, "model isomorphism");
    let r = check_informational_equivalence(&a, &c, 2, 1, &bounds()).unwrap();
    assert_ne!(r.verdict, Verdict::Inequivalent);
    assert_eq!(lattice_size(&a, 1), lattice_size(&c, 1));
}

fn relabel(m: &Model, order: &[usize]) -> Model {
    let labels: Vec<String> = (0..m.size()).map(|i| format!("e{i}")).collect();
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    m.relabeled(&labels, order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn verdicts_survive_carrier_relabeling(i in 0usize..6, j in 0usize..6, flip in any::<bool>()) {
        let models = fixtures::all();
        let (a, b) = (&models[i].1, &models[j].1);
        prop_assume!(a.signature() == b.signature());
        let order: &[usize] = if flip { &[1, 0] } else { &[0, 1] };
        let base = check_informational_equivalence(&arc(a.clone()), &arc(b.clone()), 2, 1, &bounds()).unwrap();
        let moved = check_informational_equivalence(&arc(relabel(a, order)), &arc(b.clone()), 2, 1, &bounds()).unwrap();
        let moved_right = check_informational_equivalence(&arc(a.clone()), &arc(relabel(b, order)), 2, 1, &bounds()).unwrap();
        prop_assert_eq!(base.verdict, moved.verdict);
        prop_assert_eq!(base.verdict, moved_right.verdict);
        prop_assert_eq!(base.refutation, moved.refutation);
    }
}
