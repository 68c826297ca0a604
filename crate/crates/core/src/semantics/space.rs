use std::fmt;
use std::sync::Arc;

use crate::algebra::clone::space_size;
use crate::algebra::{Model, Term, VarSet};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::semantics::PointSet;

/// A point `μ: X → H`, stored as carrier indices in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<usize>);

/// The affine space `Hom(W(X), H) ≅ H^X`.
///
/// Points are indexed lexicographically, the first variable most significant.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    model: Arc<Model>,
    vars: VarSet,
    len: usize,
    max_points: usize,
}

/// Builds the affine space of `vars` over `model`, failing when it has more
/// than `bounds.max_points` points.
pub fn enumerate_points(model: &Arc<Model>, vars: &VarSet, bounds: &Bounds) -> Result<AffineSpace> {
    let len = space_size(model, vars, bounds)?;
    Ok(AffineSpace {
        model: Arc::clone(model),
        vars: vars.clone(),
        len,
        max_points: bounds.max_points,
    })
}

impl AffineSpace {
    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The space over another variable set of the same model, under the same point bound.
    pub fn sibling(&self, vars: &VarSet) -> Result<AffineSpace> {
        let bounds = Bounds {
            max_points: self.max_points,
            ..Bounds::default()
        };
        enumerate_points(&self.model, vars, &bounds)
    }

    pub fn same_as(&self, other: &AffineSpace) -> bool {
        self.vars == other.vars && (Arc::ptr_eq(&self.model, &other.model) || self.model == other.model)
    }

    pub(crate) fn stride(&self, coord: usize) -> usize {
        self.model.size().pow((self.vars.len() - 1 - coord) as u32)
    }

    pub fn point(&self, index: usize) -> Point {
        let n = self.model.size();
        Point((0..self.vars.len()).map(|c| (index / self.stride(c)) % n).collect())
    }

    pub fn index_of(&self, point: &[usize]) -> usize {
        point.iter().fold(0, |acc, &v| acc * self.model.size() + v)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.len)
    }

    pub fn empty(&self) -> PointSet {
        PointSet::empty(self.len)
    }

    /// Value of coordinate `coord` at every point.
    pub fn coordinate(&self, coord: usize) -> Vec<usize> {
        let (n, stride) = (self.model.size(), self.stride(coord));
        (0..self.len).map(|p| (p / stride) % n).collect()
    }

    /// The term function of `t`, tabulated over all points.
    pub fn term_column(&self, t: &Term) -> Result<Vec<usize>> {
        match t {
            Term::Var(v) => {
                let c = self.vars.index_of(v).ok_or_else(|| Error::VarNotInScope(v.clone()))?;
                Ok(self.coordinate(c))
            }
            Term::App(op, args) => {
                let sig = self.model.signature();
                let idx = sig.op_index(op).ok_or_else(|| Error::UnknownSymbol(op.clone()))?;
                let arity = sig.ops()[idx].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: op.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                let cols = args.iter().map(|a| self.term_column(a)).collect::<Result<Vec<_>>>()?;
                let mut vals = vec![0; arity];
                Ok((0..self.len)
                    .map(|p| {
                        for (v, c) in vals.iter_mut().zip(&cols) {
                            *v = c[p];
                        }
                        self.model.apply_op(idx, &vals)
                    })
                    .collect())
            }
        }
    }

    pub fn format_point(&self, index: usize) -> String {
        let labels: Vec<&str> = self.point(index).0.iter().map(|&e| self.model.label(e)).collect();
        format!("({})", labels.join(","))
    }

    /// `{(1,0),(1,1)}`, points in index order.
    pub fn format_set(&self, set: &PointSet) -> String {
        let parts: Vec<String> = set.iter().map(|i| self.format_point(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Reads a point set written as by [`AffineSpace::format_set`]. Whitespace
    /// is ignored and the outer braces are optional.
    pub fn parse_set(&self, text: &str) -> Result<PointSet> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(&compact);
        let mut set = self.empty();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| Error::Syntax {
                pos: body.len() - rest.len(),
                msg: "expected `(`".into(),
            })?;
            let close = inner.find(')').ok_or_else(|| Error::Syntax {
                pos: body.len() - rest.len(),
                msg: "unclosed point".into(),
            })?;
            let labels: Vec<&str> = if inner[..close].is_empty() {
                Vec::new()
            } else {
                inner[..close].split(',').collect()
            };
            if labels.len() != self.vars.len() {
                return Err(Error::VarSetMismatch(format!(
                    "point ({}) has {} coordinates, expected {}",
                    &inner[..close],
                    labels.len(),
                    self.vars.len()
                )));
            }
            let values = labels
                .iter()
                .map(|l| self.model.element(l).ok_or_else(|| Error::UnknownSymbol(l.to_string())))
                .collect::<Result<Vec<_>>>()?;
            set.insert(self.index_of(&values));
            rest = &inner[close + 1..];
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        Ok(set)
    }
}

impl fmt::Display for AffineSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{} ({} points)", self.vars, self.len)
    }
}
