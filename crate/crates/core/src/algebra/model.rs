use std::collections::HashMap;

use crate::algebra::signature::Signature;
use crate::algebra::term::{Term, VarSet};
use crate::error::{Error, Result};

/// A finite model `(H, Ψ, f)`: carrier, operation tables and relation tables.
///
/// Elements are indices into the carrier; labels only matter for I/O.
/// Tables are stored flat, indexed by the argument tuple read as a base-`|H|`
/// number with the first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    sig: Signature,
    carrier: Vec<String>,
    op_tables: Vec<Vec<usize>>,
    rel_tables: Vec<Vec<bool>>,
}

pub(crate) fn tuple_index(args: &[usize], base: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * base + a)
}

pub(crate) fn tuple_at(mut index: usize, arity: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

impl Model {
    /// Builds a model from raw tables.
    pub fn new(
        sig: Signature,
        carrier: Vec<String>,
        op_tables: Vec<Vec<usize>>,
        rel_tables: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidModel("carrier must be nonempty".into()));
        }
        let mut seen = HashMap::new();
        for (i, c) in carrier.iter().enumerate() {
            if seen.insert(c.as_str(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate carrier element `{c}`")));
            }
        }
        if op_tables.len() != sig.ops().len() || rel_tables.len() != sig.rels().len() {
            return Err(Error::InvalidModel("table count does not match signature".into()));
        }
        for (sym, table) in sig.ops().iter().zip(&op_tables) {
            if table.len() != n.pow(sym.arity as u32) {
                return Err(Error::InvalidModel(format!("op {} not total", sym.name)));
            }
            if table.iter().any(|&v| v >= n) {
                return Err(Error::InvalidModel(format!("op {} leaves the carrier", sym.name)));
            }
        }
        for (sym, table) in sig.rels().iter().zip(&rel_tables) {
            if table.len() != n.pow(sym.arity as u32) {
                return Err(Error::InvalidModel(format!(
                    "rel {} has the wrong table size",
                    sym.name
                )));
            }
        }
        Ok(Model {
            sig,
            carrier,
            op_tables,
            rel_tables,
        })
    }

    pub fn builder(sig: Signature, carrier: &[&str]) -> ModelBuilder {
        ModelBuilder::new(sig, carrier.iter().map(|s| s.to_string()).collect())
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == label)
    }

    pub fn label(&self, e: usize) -> &str {
        &self.carrier[e]
    }

    pub fn op_table(&self, op: usize) -> &[usize] {
        &self.op_tables[op]
    }

    pub fn rel_table(&self, rel: usize) -> &[bool] {
        &self.rel_tables[rel]
    }

    pub fn apply_op(&self, op: usize, args: &[usize]) -> usize {
        self.op_tables[op][tuple_index(args, self.size())]
    }

    pub fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.rel_tables[rel][tuple_index(args, self.size())]
    }

    /// Member tuples of a relation in lexicographic order.
    pub fn rel_tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let arity = self.sig.rels()[rel].arity;
        self.rel_tables[rel]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| tuple_at(i, arity, self.size()))
            .collect()
    }

    /// Same model with equality switched on or off.
    pub fn with_equality(&self, on: bool) -> Model {
        let mut m = self.clone();
        m.sig.set_equality(on);
        m
    }

    /// Same structure with carrier elements renamed by `labels` (indexed by
    /// old element) and reordered by `order` (new position → old element).
    pub fn relabeled(&self, labels: &[&str], order: &[usize]) -> Result<Model> {
        let n = self.size();
        if labels.len() != n || order.len() != n {
            return Err(Error::InvalidModel("relabeling has the wrong size".into()));
        }
        let mut new_of_old = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old >= n || new_of_old[old] != usize::MAX {
                return Err(Error::InvalidModel("relabeling is not a permutation".into()));
            }
            new_of_old[old] = new;
        }
        let carrier = order.iter().map(|&old| labels[old].to_string()).collect();
        let op_tables = self
            .sig
            .ops()
            .iter()
            .zip(&self.op_tables)
            .map(|(sym, table)| {
                let mut out = vec![0; table.len()];
                for (i, &v) in table.iter().enumerate() {
                    let args: Vec<usize> = tuple_at(i, sym.arity, n).iter().map(|&a| new_of_old[a]).collect();
                    out[tuple_index(&args, n)] = new_of_old[v];
                }
                out
            })
            .collect();
        let rel_tables = self
            .sig
            .rels()
            .iter()
            .zip(&self.rel_tables)
            .map(|(sym, table)| {
                let mut out = vec![false; table.len()];
                for (i, &b) in table.iter().enumerate() {
                    let args: Vec<usize> = tuple_at(i, sym.arity, n).iter().map(|&a| new_of_old[a]).collect();
                    out[tuple_index(&args, n)] = b;
                }
                out
            })
            .collect();
        Model::new(self.sig.clone(), carrier, op_tables, rel_tables)
    }
}

/// Incremental construction from labelled rows, as read from model files.
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    sig: Signature,
    carrier: Vec<String>,
    ops: Vec<Vec<Option<usize>>>,
    rels: Vec<Vec<bool>>,
}

impl ModelBuilder {
    pub fn new(sig: Signature, carrier: Vec<String>) -> Self {
        let n = carrier.len();
        let ops = sig.ops().iter().map(|s| vec![None; n.pow(s.arity as u32)]).collect();
        let rels = sig.rels().iter().map(|s| vec![false; n.pow(s.arity as u32)]).collect();
        ModelBuilder {
            sig,
            carrier,
            ops,
            rels,
        }
    }

    fn elements(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| {
                self.carrier
                    .iter()
                    .position(|c| c == l)
                    .ok_or_else(|| Error::InvalidModel(format!("`{l}` is not a carrier element")))
            })
            .collect()
    }

    pub fn op_row(&mut self, op: &str, inputs: &[&str], output: &str) -> Result<&mut Self> {
        let idx = self
            .sig
            .op_index(op)
            .ok_or_else(|| Error::InvalidModel(format!("unknown op {op}")))?;
        let arity = self.sig.ops()[idx].arity;
        if inputs.len() != arity {
            return Err(Error::InvalidModel(format!(
                "op {op} expects {arity} inputs, got {}",
                inputs.len()
            )));
        }
        let args = self.elements(inputs)?;
        let out = self.elements(&[output])?[0];
        let slot = &mut self.ops[idx][tuple_index(&args, self.carrier.len())];
        if slot.is_some_and(|v| v != out) {
            return Err(Error::InvalidModel(format!(
                "op {op} defined twice on ({})",
                inputs.join(",")
            )));
        }
        *slot = Some(out);
        Ok(self)
    }

    pub fn rel_row(&mut self, rel: &str, tuple: &[&str]) -> Result<&mut Self> {
        let idx = self
            .sig
            .rel_index(rel)
            .ok_or_else(|| Error::InvalidModel(format!("unknown rel {rel}")))?;
        let arity = self.sig.rels()[idx].arity;
        if tuple.len() != arity {
            return Err(Error::InvalidModel(format!(
                "rel {rel} expects {arity} components, got {}",
                tuple.len()
            )));
        }
        let args = self.elements(tuple)?;
        let n = self.carrier.len();
        self.rels[idx][tuple_index(&args, n)] = true;
        Ok(self)
    }

    pub fn build(&self) -> Result<Model> {
        let mut op_tables = Vec::with_capacity(self.ops.len());
        for (sym, table) in self.sig.ops().iter().zip(&self.ops) {
            let full: Option<Vec<usize>> = table.iter().copied().collect();
            op_tables.push(full.ok_or_else(|| Error::InvalidModel(format!("op {} not total", sym.name)))?);
        }
        Model::new(self.sig.clone(), self.carrier.clone(), op_tables, self.rels.clone())
    }
}

/// Evaluates a term at a point `μ` given as values aligned with `vars`.
pub fn eval_term(term: &Term, point: &[usize], vars: &VarSet, model: &Model) -> Result<usize> {
    match term {
        Term::Var(v) => {
            let i = vars.index_of(v).ok_or_else(|| Error::VarNotInScope(v.clone()))?;
            point
                .get(i)
                .copied()
                .ok_or_else(|| Error::VarSetMismatch("point shorter than variable set".into()))
        }
        Term::App(op, args) => {
            let idx = model
                .signature()
                .op_index(op)
                .ok_or_else(|| Error::UnknownSymbol(op.clone()))?;
            let vals = args
                .iter()
                .map(|a| eval_term(a, point, vars, model))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != model.signature().ops()[idx].arity {
                return Err(Error::ArityMismatch {
                    name: op.clone(),
                    expected: model.signature().ops()[idx].arity,
                    got: vals.len(),
                });
            }
            Ok(model.apply_op(idx, &vals))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn evaluates_by_table_lookup() {
        let m = fixtures::m_neg();
        let x = VarSet::new(["x"]).unwrap();
        assert_eq!(eval_term(&Term::var("x"), &[1], &x, &m).unwrap(), 1);
        let neg_x = Term::app("neg", vec![Term::var("x")]);
        assert_eq!(eval_term(&neg_x, &[0], &x, &m).unwrap(), 1);
        let negneg = Term::app("neg", vec![neg_x]);
        assert_eq!(eval_term(&negneg, &[1], &x, &m).unwrap(), 1);
    }

    #[test]
    fn builder_validates() {
        let sig = Signature::from_strs(&[("neg", 1)], &[("P", 1)], true).unwrap();
        let mut b = Model::builder(sig, &["0", "1"]);
        b.op_row("neg", &["0"], "1").unwrap();
        let err = b.build().unwrap_err();
        assert_eq!(err, Error::InvalidModel("op neg not total".into()));
        assert!(b.rel_row("P", &["2"]).is_err());
        assert!(b.op_row("neg", &["0"], "0").is_err());
    }

    #[test]
    fn relabeling_keeps_structure() {
        let m = fixtures::m_neg();
        let r = m.relabeled(&["a", "b"], &[1, 0]).unwrap();
        assert_eq!(r.carrier(), &["b".to_string(), "a".to_string()]);
        // P = {1} becomes P = {b}, which is now element 0
        assert_eq!(r.rel_tuples(0), vec![vec![0]]);
        assert_eq!(r.apply_op(0, &[0]), 1);
    }
}
