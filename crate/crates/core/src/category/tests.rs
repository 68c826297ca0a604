use std::sync::Arc;

use super::*;
use crate::algebra::{Model, Substitution, Term, VarSet};
use crate::config::{Bounds, Exec};
use crate::fixtures;
use crate::lattice::FilterLattice;

struct Pair {
    x: DescriptionObject,
    y: DescriptionObject,
    s: Substitution,
}

// M_P over {x} and {x,y} with s: x ↦ y.
fn x_to_y() -> Pair {
    let m = Arc::new(fixtures::m_p());
    let x = DescriptionObject::generate(&m, &VarSet::parse_list("x").unwrap(), &Bounds::default()).unwrap();
    let y = DescriptionObject::generate(&m, &VarSet::parse_list("x,y").unwrap(), &Bounds::default()).unwrap();
    let s = Substitution::from_pairs(x.vars().clone(), y.vars().clone(), &[("x", Term::var("y"))]).unwrap();
    Pair { x, y, s }
}

fn filter(o: &DescriptionObject, points: &str) -> crate::lattice::ClosedFilter {
    o.lattice().filter_of(&o.space().parse_set(points).unwrap()).unwrap()
}

#[test]
fn admissible_desc_examples() {
    let p = x_to_y();
    let t1 = filter(&p.x, "{(1)}");
    let (xs, ys) = (p.x.space(), p.y.space());
    assert!(is_admissible_desc(&p.s, &t1, &filter(&p.y, "{(0,1),(1,1)}"), xs, ys).unwrap());
    assert!(!is_admissible_desc(&p.s, &t1, &p.y.lattice().bottom(), xs, ys).unwrap());
    for i in 0..p.x.lattice().len() {
        assert!(is_admissible_desc(&p.s, &p.x.lattice().filter(i), &p.y.lattice().top(), xs, ys).unwrap());
    }
}

#[test]
fn admissible_cont_examples() {
    let p = x_to_y();
    let (xs, ys) = (p.x.space(), p.y.space());
    let a1 = filter(&p.x, "{(0)}").dual().clone();
    let a2 = p.y.lattice().algebra().closure(&ys.parse_set("{(1,0)}").unwrap());
    // {(1,0)} alone is definable in M_P with equality
    assert_eq!(a2.points().count(), 1);
    assert!(is_admissible_cont(&p.s, &a2, &a1, xs, ys).unwrap());
    let full = p.y.lattice().bottom().dual().clone();
    let one = filter(&p.x, "{(1)}").dual().clone();
    assert!(!is_admissible_cont(&p.s, &full, &one, xs, ys).unwrap());
    let empty = p.y.lattice().top().dual().clone();
    assert!(is_admissible_cont(&p.s, &empty, &one, xs, ys).unwrap());
}

#[test]
fn ct_object_examples() {
    let p = x_to_y();
    let content = ct_object(&p.x);
    let one = filter(&p.x, "{(1)}");
    assert_eq!(ct_element(&one).points(), one.points());
    assert!(ct_element(&p.x.lattice().bottom()).points().is_full());
    assert!(ct_element(&p.x.lattice().top()).points().is_empty());
    assert_eq!(content.len(), 4);
    for i in 0..content.len() {
        assert_eq!(content.filter_of(&content.member(i)).unwrap(), p.x.lattice().filter(i));
    }
}

#[test]
fn ct_morphism_examples() {
    let p = x_to_y();
    let id = AdmissibleDescMorphism::identity(Arc::clone(p.x.lattice()));
    let cid = ct_morphism(&id).unwrap();
    assert!(cid.pairs().iter().all(|(a, b)| a == b));
    assert_eq!(cid.pairs().len(), p.x.lattice().len());

    let lx = p.x.lattice();
    let ly = p.y.lattice();
    let i1 = lx.index_of(&p.x.space().parse_set("{(1)}").unwrap()).unwrap();
    let j1 = ly.index_of(&p.y.space().parse_set("{(0,1),(1,1)}").unwrap()).unwrap();
    let least = AdmissibleDescMorphism::least(p.s.clone(), Arc::clone(lx), Arc::clone(ly)).unwrap();
    assert_eq!(least.assignment()[i1], j1);
    assert!(ct_morphism(&least).unwrap().pairs().contains(&(j1, i1)));

    let mut bad = least.assignment().to_vec();
    bad[i1] = ly.index_of(&p.y.space().full()).unwrap();
    assert!(AdmissibleDescMorphism::new(p.s.clone(), Arc::clone(lx), Arc::clone(ly), bad).is_err());
}

#[test]
fn composite_morphisms_stay_admissible() {
    let p = x_to_y();
    let back = Substitution::from_pairs(
        p.y.vars().clone(),
        p.x.vars().clone(),
        &[("x", Term::var("x")), ("y", Term::var("x"))],
    )
    .unwrap();
    let m1 = AdmissibleDescMorphism::least(p.s.clone(), Arc::clone(p.x.lattice()), Arc::clone(p.y.lattice())).unwrap();
    let m2 = AdmissibleDescMorphism::least(back, Arc::clone(p.y.lattice()), Arc::clone(p.x.lattice())).unwrap();
    let c = m1.then(&m2).unwrap();
    let (c1, c2, cc) = (
        ct_morphism(&m1).unwrap(),
        ct_morphism(&m2).unwrap(),
        ct_morphism(&c).unwrap(),
    );
    for &(k, i) in cc.pairs() {
        assert!(c2
            .pairs()
            .iter()
            .any(|&(k2, j)| k2 == k && c1.pairs().contains(&(j, i))));
    }
}

#[test]
fn cl_morphism_examples() {
    let p = x_to_y();
    let (lx, ly) = (p.x.lattice(), p.y.lattice());
    let image = cl_morphism(&p.s, &filter(&p.x, "{(1)}"), lx, ly).unwrap();
    assert_eq!(p.y.space().format_set(image.points()), "{(0,1),(1,1)}");
    assert!(cl_morphism(&p.s, &lx.top(), lx, ly).unwrap().is_improper());
    let id = Substitution::identity(p.x.vars());
    for i in 0..lx.len() {
        assert_eq!(cl_morphism(&id, &lx.filter(i), lx, lx).unwrap(), lx.filter(i));
    }
    assert!(cl_morphism(&p.s, &lx.bottom(), lx, ly).unwrap().points().is_full());
}

#[test]
fn duality_examples() {
    let cases: [(Model, usize, &[&str]); 3] = [
        (fixtures::m_p(), 2, &["4", "16"]),
        (fixtures::m_eq(), 2, &["2", "4"]),
        (fixtures::m_eq().with_equality(false), 1, &["2"]),
    ];
    for (m, n, sizes) in cases {
        let r = check_duality(&Arc::new(m), n, &Bounds::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.sizes, sizes);
        assert!(r.checked > 0);
    }
}

#[test]
fn functoriality_examples() {
    let r = verify_cl_functoriality(&Arc::new(fixtures::m_p()), 1, 2, &Bounds::default()).unwrap();
    assert!(r.passed() && r.checked > 0, "{:?}", r.failures);
    let r = verify_cl_functoriality(&Arc::new(fixtures::m_neg()), 2, 2, &Bounds::default()).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.checked >= 100);
    let r = verify_cl_functoriality(&Arc::new(fixtures::m_eq()), 0, 1, &Bounds::default()).unwrap();
    assert!(r.passed() && r.checked > 0);
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let m = Arc::new(fixtures::m_neg());
    let par = verify_cl_functoriality(&m, 1, 2, &Bounds::default()).unwrap();
    let seq = verify_cl_functoriality(&m, 1, 2, &Bounds::default().with_exec(Exec::Sequential)).unwrap();
    assert_eq!(par, seq);
}

#[test]
fn knowledge_base_objects() {
    let kb = KnowledgeBase::build(&Arc::new(fixtures::m_p()), 2, &Bounds::default()).unwrap();
    assert_eq!(kb.n_max(), 2);
    assert!(kb.exact());
    let sizes: Vec<usize> = kb.content().iter().map(|c| c.len()).collect();
    assert_eq!(sizes, vec![4, 16]);
    let lat: &FilterLattice = kb.object(2).lattice();
    assert_eq!(lat.len(), 16);
}
