use std::collections::BTreeSet;
use std::sync::Arc;

use super::*;
use crate::algebra::{substitutions_up_to_depth, term_functions, Model, Substitution, Term, VarSet};
use crate::config::Bounds;
use crate::fixtures;
use crate::formula::Formula;
use crate::semantics::{cylindrify, s_star_points, val, PointSet};

fn algebra(m: Model, vars: &str) -> DefinableAlgebra {
    generate_definable_algebra(&Arc::new(m), &VarSet::parse_list(vars).unwrap(), &Bounds::default()).unwrap()
}

fn lattice(m: Model, vars: &str) -> FilterLattice {
    FilterLattice::new(Arc::new(algebra(m, vars))).unwrap()
}

// Worklist closure of the generator sets under complement, binary union and
// intersection and every cylindrification.
fn worklist_oracle(alg: &DefinableAlgebra) -> BTreeSet<PointSet> {
    let space = alg.space();
    let m = space.model();
    let clone = term_functions(m, space.vars(), &Bounds::default()).unwrap();
    let fns = &clone.functions;
    let mut family: BTreeSet<PointSet> = BTreeSet::new();
    family.insert(space.empty());
    family.insert(space.full());
    for (r, sym) in m.signature().rels().iter().enumerate() {
        let mut tuple = vec![0; sym.arity];
        loop {
            family.insert(PointSet::from_fn(space.len(), |p| {
                let vals: Vec<usize> = tuple.iter().map(|&f| fns[f].table[p]).collect();
                m.holds(r, &vals)
            }));
            let mut i = 0;
            while i < sym.arity && tuple[i] + 1 == fns.len() {
                tuple[i] = 0;
                i += 1;
            }
            if i == sym.arity {
                break;
            }
            tuple[i] += 1;
        }
    }
    if m.signature().with_equality() {
        for f in fns {
            for g in fns {
                family.insert(PointSet::from_fn(space.len(), |p| f.table[p] == g.table[p]));
            }
        }
    }
    loop {
        let current: Vec<PointSet> = family.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            let mut fresh = vec![a.complement()];
            for x in space.vars().iter() {
                fresh.push(cylindrify(space, x, a).unwrap());
            }
            for b in &current {
                fresh.push(a.union(b));
                fresh.push(a.intersection(b));
            }
            for f in fresh {
                grew |= family.insert(f);
            }
        }
        if !grew {
            return family;
        }
    }
}

#[test]
fn generation_examples() {
    assert_eq!(algebra(fixtures::m_eq(), "x").size(), Some(2));
    let eq2 = algebra(fixtures::m_eq(), "x,y");
    let sp = eq2.space().clone();
    let members: Vec<String> = eq2.members().unwrap().iter().map(|m| sp.format_set(m)).collect();
    assert_eq!(
        members,
        vec!["{}", "{(0,1),(1,0)}", "{(0,0),(1,1)}", "{(0,0),(0,1),(1,0),(1,1)}"]
    );
    assert_eq!(algebra(fixtures::m_p(), "x,y").size(), Some(16));
    assert_eq!(algebra(fixtures::m_eq().with_equality(false), "x").size(), Some(2));
    assert_eq!(algebra(fixtures::m_p(), "x").size(), Some(4));
    assert!(algebra(fixtures::m_neg(), "x,y").saturated());
}

#[test]
fn generation_matches_worklist_oracle() {
    for (name, m) in fixtures::all() {
        for vars in ["x", "x,y"] {
            let alg = algebra(m.clone(), vars);
            let got: BTreeSet<PointSet> = alg.members().unwrap().into_iter().collect();
            assert_eq!(got, worklist_oracle(&alg), "{name} over {vars}");
        }
        let alg = algebra(m.with_equality(false), "x,y");
        let got: BTreeSet<PointSet> = alg.members().unwrap().into_iter().collect();
        assert_eq!(got, worklist_oracle(&alg), "{name} without equality");
    }
}

#[test]
fn witnesses_define_their_sets() {
    for (_, m) in fixtures::all() {
        let alg = algebra(m, "x,y");
        for a in alg.members().unwrap() {
            let d = alg.definable(&a).unwrap();
            assert_eq!(&val(d.witness(), alg.space()).unwrap(), d.points());
            assert!(DefinableSet::new(a.clone(), d.witness().clone(), alg.space()).is_ok());
        }
        for atom in alg.atoms() {
            assert_eq!(&val(atom.witness(), alg.space()).unwrap(), atom.points());
        }
    }
    let alg = algebra(fixtures::m_p(), "x");
    let bogus = DefinableSet::new(alg.space().full(), Formula::False, alg.space());
    assert!(bogus.is_err());
}

#[test]
fn generated_formulas_land_in_the_algebra() {
    for (_, m) in fixtures::all() {
        let alg = algebra(m, "x,y");
        let sig = alg.model().signature().clone();
        for f in fixtures::formula_corpus(&sig, alg.vars(), 3, 400) {
            assert!(alg.contains(&val(&f, alg.space()).unwrap()), "{f}");
        }
    }
}

#[test]
fn closure_examples() {
    let alg = algebra(fixtures::m_eq(), "x");
    let sp = alg.space().clone();
    let zero = sp.parse_set("{(0)}").unwrap();
    assert!(closure(&zero, &alg).unwrap().points().is_full());
    let diag = algebra(fixtures::m_eq(), "x,y");
    let d = diag.space().parse_set("{(0,0),(1,1)}").unwrap();
    assert_eq!(closure(&d, &diag).unwrap().points(), &d);
    assert!(closure(&sp.empty(), &alg).unwrap().points().is_empty());
    assert!(closure(&PointSet::empty(3), &alg).is_err());
}

#[test]
fn closure_operator_laws_exhaustive() {
    for (_, m) in fixtures::all() {
        let alg = algebra(m, "x,y");
        let n = alg.space().len();
        let all: Vec<PointSet> = (0u64..1 << n).map(|mask| PointSet::from_mask(n, mask)).collect();
        for a in &all {
            let ca = alg.closure(a);
            assert!(a.is_subset(ca.points()));
            assert_eq!(alg.closure(ca.points()).points(), ca.points());
            assert_eq!(alg.contains(a), ca.points() == a);
            for b in &all {
                if a.is_subset(b) {
                    assert!(ca.points().is_subset(alg.closure(b).points()));
                }
            }
        }
    }
}

#[test]
fn preimages_of_definable_sets_are_definable() {
    for m in [fixtures::m_p(), fixtures::m_neg(), fixtures::m_pq1()] {
        let m = Arc::new(m);
        let vsets = ["x", "x,y"].map(|v| VarSet::parse_list(v).unwrap());
        for x in &vsets {
            for y in &vsets {
                let ax = generate_definable_algebra(&m, x, &Bounds::default()).unwrap();
                let ay = generate_definable_algebra(&m, y, &Bounds::default()).unwrap();
                for s in substitutions_up_to_depth(m.signature(), x, y, 2) {
                    for a in ax.members().unwrap() {
                        let pre = s_star_points(&s, &a, ax.space(), ay.space()).unwrap();
                        assert!(ay.contains(&pre));
                    }
                }
            }
        }
    }
}

#[test]
fn filter_lattice_operations() {
    let l = lattice(fixtures::m_p(), "x,y");
    let sp = l.algebra().space().clone();
    let f = |t: &str| l.filter_of(&sp.parse_set(t).unwrap()).unwrap();
    let met = l.meet(&f("{(1,1)}"), &f("{(1,0)}")).unwrap();
    assert_eq!(sp.format_set(met.points()), "{(1,0),(1,1)}");
    let px = val(&Formula::atom("P", vec![Term::var("x")]), &sp).unwrap();
    assert_eq!(met.points(), &px);
    assert_eq!(&val(met.witness(), &sp).unwrap(), met.points());
    let t = f("{(0,1)}");
    assert_eq!(l.meet(&t, &t).unwrap(), t);
    assert_eq!(l.meet(&t, &l.bottom()).unwrap().points(), l.bottom().points());
    let joined = l.join(&f("{(1,0),(1,1)}"), &f("{(0,1),(1,1)}")).unwrap();
    assert_eq!(sp.format_set(joined.points()), "{(1,1)}");
    assert_eq!(&val(joined.witness(), &sp).unwrap(), joined.points());
    assert_eq!(l.join(&t, &l.bottom()).unwrap().points(), t.points());

    let l1 = lattice(fixtures::m_p(), "x");
    let sp1 = l1.algebra().space().clone();
    let one = l1.filter_of(&sp1.parse_set("{(1)}").unwrap()).unwrap();
    let zero = l1.filter_of(&sp1.parse_set("{(0)}").unwrap()).unwrap();
    assert!(l1.join(&one, &zero).unwrap().is_improper());
    assert!(l1.meet(&one, &t).is_err());

    assert!(l.bottom().points().is_full());
    assert!(l.top().is_improper());
    assert!(l.bottom().le(&l.top()));
}

#[test]
fn lattice_laws_exhaustive() {
    for (_, m) in fixtures::all() {
        let l = lattice(m, "x,y");
        let fs: Vec<ClosedFilter> = (0..l.len()).map(|i| l.filter(i)).collect();
        for a in &fs {
            for b in &fs {
                let (mab, jab) = (l.meet(a, b).unwrap(), l.join(a, b).unwrap());
                assert_eq!(mab.points(), l.meet(b, a).unwrap().points());
                assert_eq!(jab.points(), l.join(b, a).unwrap().points());
                assert_eq!(l.meet(a, &jab).unwrap().points(), a.points());
                assert_eq!(l.join(a, &mab).unwrap().points(), a.points());
                assert!(mab.le(a) && a.le(&jab));
                assert!(l.index_of(mab.points()).is_some() && l.index_of(jab.points()).is_some());
                for c in fs.iter().step_by(3) {
                    assert_eq!(
                        l.meet(&mab, c).unwrap().points(),
                        l.meet(a, &l.meet(b, c).unwrap()).unwrap().points()
                    );
                    assert_eq!(
                        l.join(&jab, c).unwrap().points(),
                        l.join(a, &l.join(b, c).unwrap()).unwrap().points()
                    );
                }
            }
        }
    }
}

// Hasse diagram and longest chain computed from the order alone.
fn generic_invariants(l: &FilterLattice) -> (Vec<(usize, u128)>, usize) {
    let n = l.len();
    let lt = |i: usize, j: usize| i != j && l.le(i, j);
    let covers = |i: usize, j: usize| lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j));
    let mut degrees = std::collections::BTreeMap::new();
    for i in 0..n {
        let d = (0..n).filter(|&j| covers(i, j) || covers(j, i)).count();
        *degrees.entry(d).or_insert(0u128) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(l.members()[i].count()));
    let mut longest = vec![0usize; n];
    for &j in &order {
        for &i in &order {
            if covers(i, j) {
                longest[j] = longest[j].max(longest[i] + 1);
            }
        }
    }
    (degrees.into_iter().collect(), longest.into_iter().max().unwrap())
}

#[test]
fn invariants_match_order_computation() {
    for (_, m) in fixtures::all() {
        for vars in ["x", "x,y"] {
            let l = lattice(m.clone(), vars);
            let inv = l.invariants();
            let (degrees, height) = generic_invariants(&l);
            assert_eq!(inv.hasse_degrees, degrees);
            assert_eq!(inv.height, height);
            assert_eq!(1usize << inv.atoms, l.len());
        }
    }
}

#[test]
fn s_tilde_filter_examples() {
    let lx = lattice(fixtures::m_p(), "x");
    let lxy = FilterLattice::new(Arc::new(
        generate_definable_algebra(
            lx.algebra().model(),
            &VarSet::parse_list("x,y").unwrap(),
            &Bounds::default(),
        )
        .unwrap(),
    ))
    .unwrap();
    let s = Substitution::from_pairs(
        lx.algebra().vars().clone(),
        lxy.algebra().vars().clone(),
        &[("x", Term::var("y"))],
    )
    .unwrap();
    let t = lxy
        .filter_of(&lxy.algebra().space().parse_set("{(1,0)}").unwrap())
        .unwrap();
    let got = s_tilde_filter(&s, &t, &lx, &lxy).unwrap();
    assert_eq!(lx.algebra().space().format_set(got.points()), "{(0)}");
    assert!(s_tilde_filter(&s, &lxy.top(), &lx, &lxy).unwrap().is_improper());
    let id = Substitution::identity(lx.algebra().vars());
    for i in 0..lx.len() {
        assert_eq!(s_tilde_filter(&id, &lx.filter(i), &lx, &lx).unwrap(), lx.filter(i));
    }
    for s in substitutions_up_to_depth(
        lx.algebra().model().signature(),
        lx.algebra().vars(),
        lxy.algebra().vars(),
        1,
    ) {
        for i in 0..lxy.len() {
            let image = s_tilde_filter(&s, &lxy.filter(i), &lx, &lxy).unwrap();
            assert!(lx.index_of(image.points()).is_some());
        }
    }
}

#[test]
fn capped_clone_marks_algebra_unsaturated() {
    let sig = crate::algebra::Signature::from_strs(&[("s", 1)], &[("P", 1)], true).unwrap();
    let mut b = Model::builder(sig, &["0", "1", "2"]);
    for (i, o) in [("0", "1"), ("1", "2"), ("2", "0")] {
        b.op_row("s", &[i], o).unwrap();
    }
    b.rel_row("P", &["0"]).unwrap();
    let m = Arc::new(b.build().unwrap());
    let capped = Bounds {
        max_term_depth: Some(1),
        ..Bounds::default()
    };
    let vars = VarSet::parse_list("x").unwrap();
    let partial = generate_definable_algebra(&m, &vars, &capped).unwrap();
    assert!(!partial.saturated());
    let full = generate_definable_algebra(&m, &vars, &Bounds::default()).unwrap();
    assert!(full.saturated());
    for a in partial.members().unwrap() {
        assert!(full.contains(&a));
    }
}
