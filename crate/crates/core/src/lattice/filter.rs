use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Substitution;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lattice::{DefinableAlgebra, DefinableSet};
use crate::semantics::{s_tilde_points, PointSet};

/// An `𝓗`-closed filter, held as its Galois-dual definable set.
///
/// The filter consists of the formulas true on every point of the dual set;
/// it is generated by the dual's witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFilter {
    dual: DefinableSet,
}

impl ClosedFilter {
    pub fn from_dual(dual: DefinableSet) -> Self {
        ClosedFilter { dual }
    }

    pub fn dual(&self) -> &DefinableSet {
        &self.dual
    }

    pub fn points(&self) -> &PointSet {
        self.dual.points()
    }

    pub fn witness(&self) -> &Formula {
        self.dual.witness()
    }

    /// `self ≤ other` as filters, i.e. `points(self) ⊇ points(other)`.
    pub fn le(&self, other: &ClosedFilter) -> bool {
        other.points().is_subset(self.points())
    }

    pub fn is_improper(&self) -> bool {
        self.points().is_empty()
    }
}

/// Order invariants of a filter lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub atoms: usize,
    /// `(degree, number of elements)` pairs of the Hasse diagram, by degree.
    pub hasse_degrees: Vec<(usize, u128)>,
    pub height: usize,
}

/// The lattice `F^X(𝓗)` of closed filters, members materialized and
/// indexed in bitset order of their dual sets.
#[derive(Debug, Clone)]
pub struct FilterLattice {
    algebra: Arc<DefinableAlgebra>,
    members: Vec<PointSet>,
    index: HashMap<PointSet, usize>,
}

impl FilterLattice {
    pub fn new(algebra: Arc<DefinableAlgebra>) -> Result<Self> {
        let members = algebra.members()?;
        let index = members.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(FilterLattice {
            algebra,
            members,
            index,
        })
    }

    pub fn algebra(&self) -> &Arc<DefinableAlgebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Dual point sets in index order.
    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn index_of(&self, points: &PointSet) -> Option<usize> {
        self.index.get(points).copied()
    }

    pub(crate) fn require_index(&self, points: &PointSet) -> Result<usize> {
        self.index_of(points).ok_or_else(|| {
            Error::NotInLattice(format!(
                "{} is not a closed set over {}",
                self.algebra.space().format_set(points),
                self.algebra.vars()
            ))
        })
    }

    pub fn filter(&self, i: usize) -> ClosedFilter {
        ClosedFilter::from_dual(self.algebra.closure(&self.members[i]))
    }

    /// The filter dual to `points`, which must be definable.
    pub fn filter_of(&self, points: &PointSet) -> Result<ClosedFilter> {
        self.require_index(points)?;
        Ok(ClosedFilter::from_dual(self.algebra.closure(points)))
    }

    /// Valid formulas: dual to the whole space.
    pub fn bottom(&self) -> ClosedFilter {
        self.filter_of(&self.algebra.space().full())
            .expect("full space is definable")
    }

    /// The improper filter: dual to `∅`.
    pub fn top(&self) -> ClosedFilter {
        self.filter_of(&self.algebra.space().empty())
            .expect("empty set is definable")
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.members[j].is_subset(&self.members[i])
    }

    fn check(&self, t: &ClosedFilter) -> Result<()> {
        if t.points().universe() == self.algebra.space().len() && self.algebra.contains(t.points()) {
            Ok(())
        } else {
            Err(Error::NotInLattice(format!(
                "filter does not belong to the lattice over {}",
                self.algebra.vars()
            )))
        }
    }

    /// `T₁ ∩ T₂`, dual to the union of the point sets.
    pub fn meet(&self, t1: &ClosedFilter, t2: &ClosedFilter) -> Result<ClosedFilter> {
        self.check(t1)?;
        self.check(t2)?;
        let points = t1.points().union(t2.points());
        let witness = match (t1.witness(), t2.witness()) {
            (a, b) if a == b => a.clone(),
            (a, b) => Formula::or_simplified(a.clone(), b.clone()),
        };
        Ok(ClosedFilter::from_dual(DefinableSet::trusted(points, witness)))
    }

    /// `T₁ ∪̄ T₂`, dual to the intersection of the point sets.
    pub fn join(&self, t1: &ClosedFilter, t2: &ClosedFilter) -> Result<ClosedFilter> {
        self.check(t1)?;
        self.check(t2)?;
        let points = t1.points().intersection(t2.points());
        let witness = match (t1.witness(), t2.witness()) {
            (a, b) if a == b => a.clone(),
            (a, b) => Formula::and_simplified(a.clone(), b.clone()),
        };
        Ok(ClosedFilter::from_dual(DefinableSet::trusted(points, witness)))
    }

    /// Cardinality, Hasse degrees and height.
    ///
    /// Closed sets form a boolean algebra on the atoms, so every element of
    /// a lattice with `k` atoms has exactly `k` covers up or down and the
    /// longest chain has `k` steps.
    pub fn invariants(&self) -> LatticeInvariants {
        lattice_invariants(&self.algebra)
    }
}

/// Invariants of the filter lattice of `alg` without materializing it.
pub fn lattice_invariants(alg: &DefinableAlgebra) -> LatticeInvariants {
    let k = alg.atoms().len();
    LatticeInvariants {
        atoms: k,
        hasse_degrees: vec![(k, 1u128.checked_shl(k as u32).unwrap_or(u128::MAX))],
        height: k,
    }
}

/// `s̃T`: the filter over `X` dual to the closure of `s̃(points(T))`.
pub fn s_tilde_filter(
    s: &Substitution,
    t: &ClosedFilter,
    over_x: &FilterLattice,
    over_y: &FilterLattice,
) -> Result<ClosedFilter> {
    over_y.check(t)?;
    let image = s_tilde_points(s, t.points(), over_x.algebra.space(), over_y.algebra.space())?;
    Ok(ClosedFilter::from_dual(over_x.algebra.closure(&image)))
}
