use std::collections::HashMap;

use itertools::Itertools;

use crate::algebra::model::Model;
use crate::algebra::term::{Term, VarSet};
use crate::config::Bounds;
use crate::error::{Error, Result};

/// A function `H^X → H` realized by a term, tabulated over the points of the
/// affine space in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermFunction {
    pub table: Vec<usize>,
    pub witness: Term,
}

/// The finite clone of term functions over one variable set.
#[derive(Debug, Clone)]
pub struct TermClone {
    pub functions: Vec<TermFunction>,
    /// False when a depth or size cap stopped the closure early.
    pub saturated: bool,
}

/// Number of points `|H|^|X|`, or an error when above `bounds.max_points`.
pub fn space_size(model: &Model, vars: &VarSet, bounds: &Bounds) -> Result<usize> {
    let n = model.size();
    let mut size: usize = 1;
    for _ in 0..vars.len() {
        size = size.checked_mul(n).filter(|&s| s <= bounds.max_points).ok_or_else(|| {
            Error::BoundExceeded(format!(
                "{}^{} points exceeds the bound {}",
                n,
                vars.len(),
                bounds.max_points
            ))
        })?;
    }
    Ok(size)
}

/// Coordinate `i` of every point, in point order.
pub fn projection(model: &Model, arity: usize, i: usize, len: usize) -> Vec<usize> {
    let stride = model.size().pow((arity - 1 - i) as u32);
    (0..len).map(|p| (p / stride) % model.size()).collect()
}

/// Least set of functions containing the projections and closed under every
/// operation table, each with one generating term.
pub fn term_functions(model: &Model, vars: &VarSet, bounds: &Bounds) -> Result<TermClone> {
    let len = space_size(model, vars, bounds)?;
    let mut functions: Vec<TermFunction> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        let table = projection(model, vars.len(), i, len);
        if !index.contains_key(&table) {
            index.insert(table.clone(), functions.len());
            functions.push(TermFunction {
                table,
                witness: Term::var(v),
            });
        }
    }
    let sig = model.signature();
    let mut frontier = 0;
    let mut depth = 0;
    loop {
        let capped = bounds.max_term_depth.is_some_and(|d| depth >= d);
        let known = functions.len();
        let mut fresh: Vec<TermFunction> = Vec::new();
        for (op, sym) in sig.ops().iter().enumerate() {
            let tuples: Box<dyn Iterator<Item = Vec<usize>>> = if sym.arity == 0 {
                if depth > 0 {
                    continue;
                }
                Box::new(std::iter::once(Vec::new()))
            } else {
                Box::new((0..sym.arity).map(|_| 0..known).multi_cartesian_product())
            };
            for args in tuples {
                if sym.arity > 0 && args.iter().all(|&a| a < frontier) {
                    continue;
                }
                let table: Vec<usize> = (0..len)
                    .map(|p| {
                        let vals: Vec<usize> = args.iter().map(|&a| functions[a].table[p]).collect();
                        model.apply_op(op, &vals)
                    })
                    .collect();
                if index.contains_key(&table) || fresh.iter().any(|f| f.table == table) {
                    continue;
                }
                if capped {
                    // one more closure step would still add functions
                    return Ok(TermClone {
                        functions,
                        saturated: false,
                    });
                }
                let witness = Term::App(
                    sym.name.clone(),
                    args.iter().map(|&a| functions[a].witness.clone()).collect(),
                );
                fresh.push(TermFunction { table, witness });
                if known + fresh.len() > bounds.max_term_functions {
                    break;
                }
            }
        }
        if fresh.is_empty() {
            return Ok(TermClone {
                functions,
                saturated: true,
            });
        }
        frontier = known;
        for f in fresh {
            index.insert(f.table.clone(), functions.len());
            functions.push(f);
        }
        if functions.len() > bounds.max_term_functions {
            functions.truncate(bounds.max_term_functions);
            return Ok(TermClone {
                functions,
                saturated: false,
            });
        }
        depth += 1;
    }
}
