//! The small models used throughout the test suites.

use itertools::Itertools;

use crate::algebra::{terms_up_to_depth, Model, Signature, VarSet};
use crate::formula::Formula;

fn two_element(ops: &[(&str, usize)], rels: &[(&str, usize)]) -> (Signature, [&'static str; 2]) {
    (Signature::from_strs(ops, rels, true).unwrap(), ["0", "1"])
}

/// `({0,1})`, no operations, no relations.
pub fn m_eq() -> Model {
    let (sig, c) = two_element(&[], &[]);
    Model::builder(sig, &c).build().unwrap()
}

/// `({0,1}, P={1})`.
pub fn m_p() -> Model {
    let (sig, c) = two_element(&[], &[("P", 1)]);
    let mut b = Model::builder(sig, &c);
    b.rel_row("P", &["1"]).unwrap();
    b.build().unwrap()
}

/// `({0,1}, P=∅)`.
pub fn m_p0() -> Model {
    let (sig, c) = two_element(&[], &[("P", 1)]);
    Model::builder(sig, &c).build().unwrap()
}

/// `({0,1}, P={1}, Q=∅)`.
pub fn m_pq1() -> Model {
    let (sig, c) = two_element(&[], &[("P", 1), ("Q", 1)]);
    let mut b = Model::builder(sig, &c);
    b.rel_row("P", &["1"]).unwrap();
    b.build().unwrap()
}

/// `({0,1}, P=∅, Q={1})`.
pub fn m_pq2() -> Model {
    let (sig, c) = two_element(&[], &[("P", 1), ("Q", 1)]);
    let mut b = Model::builder(sig, &c);
    b.rel_row("Q", &["1"]).unwrap();
    b.build().unwrap()
}

/// `({0,1}, neg: 0↦1, 1↦0, P={1})`.
pub fn m_neg() -> Model {
    let (sig, c) = two_element(&[("neg", 1)], &[("P", 1)]);
    let mut b = Model::builder(sig, &c);
    b.op_row("neg", &["0"], "1").unwrap();
    b.op_row("neg", &["1"], "0").unwrap();
    b.rel_row("P", &["1"]).unwrap();
    b.build().unwrap()
}

/// `M_P` over the carrier `{a, b}` with `P={a}`, listed in the order `a, b`.
pub fn m_p_relabeled() -> Model {
    m_p().relabeled(&["b", "a"], &[1, 0]).unwrap()
}

/// Every fixture with its conventional name.
pub fn all() -> Vec<(&'static str, Model)> {
    vec![
        ("M_EQ", m_eq()),
        ("M_P", m_p()),
        ("M_P0", m_p0()),
        ("M_PQ1", m_pq1()),
        ("M_PQ2", m_pq2()),
        ("M_NEG", m_neg()),
    ]
}

/// A deterministic family of formulas over `vars` of depth at most `depth`.
///
/// Level 0 holds `true`, `false`, every relation atom over terms of depth
/// at most 1 and (when enabled) every equation between such terms. Level `k`
/// applies every connective and quantifier to formulas of level `k-1`, paired
/// with formulas of any lower level for binary connectives. Each level is
/// thinned to at most `per_level` formulas by taking an evenly spaced sample.
pub fn formula_corpus(sig: &Signature, vars: &VarSet, depth: usize, per_level: usize) -> Vec<Formula> {
    let terms = terms_up_to_depth(sig, vars, 1);
    let mut base = vec![Formula::True, Formula::False];
    for rel in sig.rels() {
        for args in (0..rel.arity).map(|_| terms.iter().cloned()).multi_cartesian_product() {
            base.push(Formula::Atom(rel.name.clone(), args));
        }
    }
    if sig.with_equality() {
        for a in &terms {
            for b in &terms {
                base.push(Formula::Equal(a.clone(), b.clone()));
            }
        }
    }
    let mut levels = vec![thin(base, per_level)];
    for _ in 0..depth {
        let prev = levels.last().unwrap();
        let lower: Vec<&Formula> = levels.iter().flatten().collect();
        let step = (prev.len() * lower.len()).div_ceil(4 * per_level).max(1);
        let lower: Vec<&Formula> = lower.into_iter().step_by(step).collect();
        let mut next = Vec::new();
        for f in prev {
            next.push(Formula::not(f.clone()));
            for x in vars.iter() {
                next.push(Formula::exists(x, f.clone()));
                next.push(Formula::forall(x, f.clone()));
            }
            for g in &lower {
                next.push(Formula::and(f.clone(), (*g).clone()));
                next.push(Formula::or((*g).clone(), f.clone()));
                next.push(Formula::implies(f.clone(), (*g).clone()));
            }
        }
        levels.push(thin(next, per_level));
    }
    levels.into_iter().flatten().collect()
}

fn thin(items: Vec<Formula>, limit: usize) -> Vec<Formula> {
    if items.len() <= limit {
        return items;
    }
    let n = items.len();
    (0..limit).map(|i| items[i * n / limit].clone()).collect()
}
