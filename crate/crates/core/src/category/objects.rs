use std::sync::Arc;

use crate::algebra::{compose_subst, Model, Substitution, VarSet};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::lattice::{generate_definable_algebra, ClosedFilter, DefinableAlgebra, DefinableSet, FilterLattice};
use crate::semantics::{AffineSpace, PointMap, PointSet};

/// `F^X(𝓗)`: the lattice of closed filters over one variable set.
#[derive(Debug, Clone)]
pub struct DescriptionObject {
    lattice: Arc<FilterLattice>,
}

/// `D^X(𝓗)`: the lattice of definable sets over one variable set.
#[derive(Debug, Clone)]
pub struct ContentObject {
    lattice: Arc<FilterLattice>,
}

impl DescriptionObject {
    pub fn generate(model: &Arc<Model>, vars: &VarSet, bounds: &Bounds) -> Result<Self> {
        let alg = generate_definable_algebra(model, vars, bounds)?;
        Ok(DescriptionObject {
            lattice: Arc::new(FilterLattice::new(Arc::new(alg))?),
        })
    }

    pub fn from_lattice(lattice: Arc<FilterLattice>) -> Self {
        DescriptionObject { lattice }
    }

    pub fn lattice(&self) -> &Arc<FilterLattice> {
        &self.lattice
    }

    pub fn space(&self) -> &AffineSpace {
        self.lattice.algebra().space()
    }

    pub fn vars(&self) -> &VarSet {
        self.lattice.algebra().vars()
    }
}

impl ContentObject {
    pub fn algebra(&self) -> &Arc<DefinableAlgebra> {
        self.lattice.algebra()
    }

    pub fn space(&self) -> &AffineSpace {
        self.lattice.algebra().space()
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// Definable sets in bitset order.
    pub fn member(&self, i: usize) -> DefinableSet {
        self.lattice.filter(i).dual().clone()
    }

    pub fn index_of(&self, a: &PointSet) -> Option<usize> {
        self.lattice.index_of(a)
    }

    /// Inverse of `Ct` on elements: the filter dual to `a`.
    pub fn filter_of(&self, a: &DefinableSet) -> Result<ClosedFilter> {
        self.lattice.filter_of(a.points())
    }
}

/// `Ct(F^X) = D^X`.
pub fn ct_object(f: &DescriptionObject) -> ContentObject {
    ContentObject {
        lattice: Arc::clone(&f.lattice),
    }
}

/// `Ct` on elements: a filter goes to its Galois-dual definable set.
pub fn ct_element(t: &ClosedFilter) -> DefinableSet {
    t.dual().clone()
}

/// Whether `s₍*₎T₁ ⊆ T₂`, decided on dual sets as `points(T₂) ⊆ s₍*₎ points(T₁)`.
pub fn is_admissible_desc(
    s: &Substitution,
    t1: &ClosedFilter,
    t2: &ClosedFilter,
    over_x: &AffineSpace,
    over_y: &AffineSpace,
) -> Result<bool> {
    let pre = PointMap::new(s, over_x, over_y)?.star(t1.points())?;
    Ok(t2.points().is_subset(&pre))
}

/// Whether `s̃A₂ ⊆ A₁`.
pub fn is_admissible_cont(
    s: &Substitution,
    a2: &DefinableSet,
    a1: &DefinableSet,
    over_x: &AffineSpace,
    over_y: &AffineSpace,
) -> Result<bool> {
    let image = PointMap::new(s, over_x, over_y)?.tilde(a2.points())?;
    Ok(image.is_subset(a1.points()))
}

/// `[s₍*₎]⁰`: the filter over `Y` dual to `s₍*₎ points(T)`.
pub fn cl_morphism(
    s: &Substitution,
    t: &ClosedFilter,
    over_x: &FilterLattice,
    over_y: &FilterLattice,
) -> Result<ClosedFilter> {
    let map = PointMap::new(s, over_x.algebra().space(), over_y.algebra().space())?;
    cl_with_map(&map, t, over_y)
}

pub(crate) fn cl_with_map(map: &PointMap, t: &ClosedFilter, over_y: &FilterLattice) -> Result<ClosedFilter> {
    let pre = map.star(t.points())?;
    over_y.filter_of(&pre).map_err(|_| {
        Error::Verification(format!(
            "preimage {} is not definable over {}",
            over_y.algebra().space().format_set(&pre),
            over_y.algebra().vars()
        ))
    })
}

/// A substitution with a total assignment of target filters, every pair admissible.
#[derive(Debug, Clone)]
pub struct AdmissibleDescMorphism {
    s: Substitution,
    source: Arc<FilterLattice>,
    target: Arc<FilterLattice>,
    assignment: Vec<usize>,
}

impl AdmissibleDescMorphism {
    /// Checks every assigned pair for admissibility.
    pub fn new(
        s: Substitution,
        source: Arc<FilterLattice>,
        target: Arc<FilterLattice>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.len() || assignment.iter().any(|&j| j >= target.len()) {
            return Err(Error::NotInLattice(
                "assignment is not a total map between the lattices".into(),
            ));
        }
        let map = PointMap::new(&s, source.algebra().space(), target.algebra().space())?;
        for (i, &j) in assignment.iter().enumerate() {
            let pre = map.star(&source.members()[i])?;
            if !target.members()[j].is_subset(&pre) {
                return Err(Error::Verification(format!(
                    "assignment {} -> {} is not admissible for {}",
                    source.algebra().space().format_set(&source.members()[i]),
                    target.algebra().space().format_set(&target.members()[j]),
                    s
                )));
            }
        }
        Ok(AdmissibleDescMorphism {
            s,
            source,
            target,
            assignment,
        })
    }

    /// Each filter goes to the least admissible target `(s₍*₎T)ᴸᴸ`.
    pub fn least(s: Substitution, source: Arc<FilterLattice>, target: Arc<FilterLattice>) -> Result<Self> {
        let map = PointMap::new(&s, source.algebra().space(), target.algebra().space())?;
        let assignment = (0..source.len())
            .map(|i| {
                let t = cl_with_map(&map, &source.filter(i), &target)?;
                target.require_index(t.points())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AdmissibleDescMorphism {
            s,
            source,
            target,
            assignment,
        })
    }

    pub fn identity(lattice: Arc<FilterLattice>) -> Self {
        let s = Substitution::identity(lattice.algebra().vars());
        AdmissibleDescMorphism {
            s,
            assignment: (0..lattice.len()).collect(),
            source: Arc::clone(&lattice),
            target: lattice,
        }
    }

    pub fn substitution(&self) -> &Substitution {
        &self.s
    }

    pub fn source(&self) -> &Arc<FilterLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FilterLattice> {
        &self.target
    }

    /// Target index of every source filter.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `self` followed by `next`, with substitution `next.s ∘ self.s`.
    pub fn then(&self, next: &AdmissibleDescMorphism) -> Result<Self> {
        if !Arc::ptr_eq(&self.target, &next.source) && self.target.members() != next.source.members() {
            return Err(Error::VarSetMismatch("morphisms are not composable".into()));
        }
        let s = compose_subst(&self.s, &next.s)?;
        let assignment = self.assignment.iter().map(|&j| next.assignment[j]).collect();
        AdmissibleDescMorphism::new(s, Arc::clone(&self.source), Arc::clone(&next.target), assignment)
    }
}

/// A substitution with admissible pairs `A₂ ↦ A₁` from `D^Y` into `D^X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleContMorphism {
    s: Substitution,
    /// `(index in D^Y, index in D^X)` pairs, sorted.
    pairs: Vec<(usize, usize)>,
}

impl AdmissibleContMorphism {
    pub fn substitution(&self) -> &Substitution {
        &self.s
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// `Ct([s₍*₎]) = [s̃]`, sending `(T₂)ᴸ ↦ (T₁)ᴸ` for each assigned `T₁ ↦ T₂`.
///
/// Every produced pair is checked for admissibility; a failure is reported
/// as a verification error.
pub fn ct_morphism(m: &AdmissibleDescMorphism) -> Result<AdmissibleContMorphism> {
    let (x, y) = (m.source.algebra().space(), m.target.algebra().space());
    let map = PointMap::new(&m.s, x, y)?;
    let mut pairs: Vec<(usize, usize)> = m.assignment.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    pairs.sort_unstable();
    for &(j, i) in &pairs {
        let image = map.tilde(&m.target.members()[j])?;
        if !image.is_subset(&m.source.members()[i]) {
            return Err(Error::Verification(format!(
                "content pair {} -> {} is not admissible for {}",
                y.format_set(&m.target.members()[j]),
                x.format_set(&m.source.members()[i]),
                m.s
            )));
        }
    }
    Ok(AdmissibleContMorphism { s: m.s.clone(), pairs })
}

/// A knowledge base `(F(𝓗), D(𝓗), Ct)` materialized on the canonical
/// variable sets `{x1}, …, {x1..xn}`.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    model: Arc<Model>,
    objects: Vec<DescriptionObject>,
}

impl KnowledgeBase {
    pub fn build(model: &Arc<Model>, n_max: usize, bounds: &Bounds) -> Result<Self> {
        let objects = (1..=n_max)
            .map(|n| DescriptionObject::generate(model, &VarSet::canonical(n), bounds))
            .collect::<Result<Vec<_>>>()?;
        Ok(KnowledgeBase {
            model: Arc::clone(model),
            objects,
        })
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn n_max(&self) -> usize {
        self.objects.len()
    }

    /// Description objects, indexed by `|X| - 1`.
    pub fn description(&self) -> &[DescriptionObject] {
        &self.objects
    }

    pub fn content(&self) -> Vec<ContentObject> {
        self.objects.iter().map(ct_object).collect()
    }

    pub fn object(&self, n: usize) -> &DescriptionObject {
        &self.objects[n - 1]
    }

    /// True unless some clone was capped.
    pub fn exact(&self) -> bool {
        self.objects.iter().all(|o| o.lattice.algebra().saturated())
    }
}
