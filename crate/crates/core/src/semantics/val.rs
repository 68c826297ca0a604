use crate::algebra::model::tuple_index;
use crate::algebra::Substitution;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::semantics::{AffineSpace, Point, PointSet};

/// `Val(f)`: the points of `space` satisfying `f`.
pub fn val(f: &Formula, space: &AffineSpace) -> Result<PointSet> {
    let model = space.model();
    Ok(match f {
        Formula::True => space.full(),
        Formula::False => space.empty(),
        Formula::Atom(rel, args) => {
            let sig = model.signature();
            let r = sig.rel_index(rel).ok_or_else(|| Error::UnknownSymbol(rel.clone()))?;
            let arity = sig.rels()[r].arity;
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    name: rel.clone(),
                    expected: arity,
                    got: args.len(),
                });
            }
            let cols = args.iter().map(|a| space.term_column(a)).collect::<Result<Vec<_>>>()?;
            let table = model.rel_table(r);
            PointSet::from_fn(space.len(), |p| {
                let vals: Vec<usize> = cols.iter().map(|c| c[p]).collect();
                table[tuple_index(&vals, model.size())]
            })
        }
        Formula::Equal(a, b) => {
            if !model.signature().with_equality() {
                return Err(Error::EqualityDisabled);
            }
            let (ca, cb) = (space.term_column(a)?, space.term_column(b)?);
            PointSet::from_fn(space.len(), |p| ca[p] == cb[p])
        }
        Formula::Not(g) => val(g, space)?.complement(),
        Formula::And(g, h) => val(g, space)?.intersection(&val(h, space)?),
        Formula::Or(g, h) => val(g, space)?.union(&val(h, space)?),
        Formula::Implies(g, h) => val(g, space)?.complement().union(&val(h, space)?),
        Formula::Exists(x, g) => cylindrify(space, x, &val(g, space)?)?,
        Formula::Forall(x, g) => cylindrify(space, x, &val(g, space)?.complement())?.complement(),
        Formula::Subst(s, g) => {
            if s.target() != space.vars() {
                return Err(Error::VarSetMismatch(format!(
                    "substitution into {} evaluated over {}",
                    s.target(),
                    space.vars()
                )));
            }
            let source = space.sibling(s.source())?;
            let inner = val(g, &source)?;
            PointMap::new(s, &source, space)?.star(&inner)?
        }
    })
}

/// Semantic `∃x`: a point qualifies when some point agreeing off `x` is in `set`.
pub(crate) fn cylindrify(space: &AffineSpace, x: &str, set: &PointSet) -> Result<PointSet> {
    let c = space
        .vars()
        .index_of(x)
        .ok_or_else(|| Error::VarNotInScope(x.to_string()))?;
    let (n, stride) = (space.model().size(), space.stride(c));
    let base = |p: usize| p - ((p / stride) % n) * stride;
    let mut hit = space.empty();
    for p in set.iter() {
        hit.insert(base(p));
    }
    Ok(PointSet::from_fn(space.len(), |p| hit.contains(base(p))))
}

/// Whether `f` belongs to the logical kernel `LKer(μ)`.
pub fn lker_contains(point: &Point, f: &Formula, space: &AffineSpace) -> Result<bool> {
    if point.0.len() != space.vars().len() || point.0.iter().any(|&v| v >= space.model().size()) {
        return Err(Error::VarSetMismatch(format!(
            "{:?} is not a point of {}",
            point.0, space
        )));
    }
    Ok(val(f, space)?.contains(space.index_of(&point.0)))
}

/// `Tᴸ`: points satisfying every formula of `formulas`.
pub fn points_of_formulas(formulas: &[Formula], space: &AffineSpace) -> Result<PointSet> {
    formulas
        .iter()
        .try_fold(space.full(), |acc, f| Ok(acc.intersection(&val(f, space)?)))
}

/// Membership of `f` in the filter `Aᴸ`: whether `f` holds on all of `set`.
pub fn filter_contains(set: &PointSet, f: &Formula, space: &AffineSpace) -> Result<bool> {
    Ok(set.is_subset(&val(f, space)?))
}

/// The map `μ ↦ μ∘s` from points over `target(s)` to points over `source(s)`.
#[derive(Debug, Clone)]
pub struct PointMap {
    images: Vec<usize>,
    source_len: usize,
}

impl PointMap {
    pub fn new(s: &Substitution, source: &AffineSpace, target: &AffineSpace) -> Result<PointMap> {
        if s.source() != source.vars() || s.target() != target.vars() {
            return Err(Error::VarSetMismatch(format!(
                "substitution {} -> {} used between {} and {}",
                s.source(),
                s.target(),
                source.vars(),
                target.vars()
            )));
        }
        if !(std::sync::Arc::ptr_eq(source.model(), target.model()) || source.model() == target.model()) {
            return Err(Error::ModelMismatch("point map between different models".into()));
        }
        let cols = s
            .images()
            .iter()
            .map(|t| target.term_column(t))
            .collect::<Result<Vec<_>>>()?;
        let n = source.model().size();
        let images = (0..target.len())
            .map(|p| cols.iter().fold(0, |acc, c| acc * n + c[p]))
            .collect();
        Ok(PointMap {
            images,
            source_len: source.len(),
        })
    }

    /// Index of `μ∘s` for the point of index `p`.
    pub fn image(&self, p: usize) -> usize {
        self.images[p]
    }

    /// `s₍*₎A`: full preimage of a set over the source.
    pub fn star(&self, a: &PointSet) -> Result<PointSet> {
        self.check(a, self.source_len)?;
        Ok(PointSet::from_fn(self.images.len(), |p| a.contains(self.images[p])))
    }

    /// `s̃B`: elementwise image of a set over the target.
    pub fn tilde(&self, b: &PointSet) -> Result<PointSet> {
        self.check(b, self.images.len())?;
        Ok(PointSet::from_indices(
            self.source_len,
            b.iter().map(|p| self.images[p]),
        ))
    }

    fn check(&self, set: &PointSet, len: usize) -> Result<()> {
        if set.universe() == len {
            Ok(())
        } else {
            Err(Error::VarSetMismatch(format!(
                "point set over {} points, expected {}",
                set.universe(),
                len
            )))
        }
    }
}

/// `s₍*₎A = {μ : μ∘s ∈ A}` for `A` over `source(s)`.
pub fn s_star_points(s: &Substitution, a: &PointSet, source: &AffineSpace, target: &AffineSpace) -> Result<PointSet> {
    PointMap::new(s, source, target)?.star(a)
}

/// `s̃B = {μ∘s : μ ∈ B}` for `B` over `target(s)`.
pub fn s_tilde_points(s: &Substitution, b: &PointSet, source: &AffineSpace, target: &AffineSpace) -> Result<PointSet> {
    PointMap::new(s, source, target)?.tilde(b)
}
