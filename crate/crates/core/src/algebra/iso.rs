use itertools::Itertools;

use crate::algebra::model::{tuple_at, tuple_index, Model};
use crate::error::{Error, Result};

/// A carrier bijection between two models preserving every table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelMap {
    /// `mapping[a]` is the image of source element `a`.
    pub mapping: Vec<usize>,
}

impl ModelMap {
    pub fn identity(n: usize) -> Self {
        ModelMap {
            mapping: (0..n).collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.mapping[a]
    }

    pub fn inverse(&self) -> ModelMap {
        let mut inv = vec![0; self.mapping.len()];
        for (a, &b) in self.mapping.iter().enumerate() {
            inv[b] = a;
        }
        ModelMap { mapping: inv }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModelMap) -> ModelMap {
        ModelMap {
            mapping: self.mapping.iter().map(|&b| other.mapping[b]).collect(),
        }
    }

    /// Human-readable `a->b` pairs using carrier labels.
    pub fn describe(&self, source: &Model, target: &Model) -> String {
        self.mapping
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", source.label(a), target.label(b)))
            .join(",")
    }
}

pub(crate) fn same_signature(m1: &Model, m2: &Model) -> Result<()> {
    if m1.signature() != m2.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            m1.signature(),
            m2.signature()
        )));
    }
    Ok(())
}

fn preserves(m1: &Model, m2: &Model, h: &[usize]) -> bool {
    let n = m1.size();
    let sig = m1.signature();
    for (op, sym) in sig.ops().iter().enumerate() {
        let t1 = m1.op_table(op);
        let t2 = m2.op_table(op);
        for (i, &out) in t1.iter().enumerate() {
            let args: Vec<usize> = tuple_at(i, sym.arity, n).iter().map(|&a| h[a]).collect();
            if t2[tuple_index(&args, n)] != h[out] {
                return false;
            }
        }
    }
    for (rel, sym) in sig.rels().iter().enumerate() {
        let t1 = m1.rel_table(rel);
        let t2 = m2.rel_table(rel);
        // bijective h: equal membership on every tuple covers both directions
        for (i, &b) in t1.iter().enumerate() {
            let args: Vec<usize> = tuple_at(i, sym.arity, n).iter().map(|&a| h[a]).collect();
            if t2[tuple_index(&args, n)] != b {
                return false;
            }
        }
    }
    true
}

/// Every isomorphism `m1 → m2`, in lexicographic order of the image tuple.
pub fn model_isomorphisms(m1: &Model, m2: &Model) -> Result<Vec<ModelMap>> {
    same_signature(m1, m2)?;
    if m1.size() != m2.size() {
        return Ok(Vec::new());
    }
    let n = m1.size();
    Ok((0..n)
        .permutations(n)
        .filter(|h| preserves(m1, m2, h))
        .map(|mapping| ModelMap { mapping })
        .collect())
}
