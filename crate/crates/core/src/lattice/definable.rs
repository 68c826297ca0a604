use std::collections::HashSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::algebra::{term_functions, Model, VarSet};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::par;
use crate::semantics::{cylindrify, enumerate_points, val, AffineSpace, PointSet};

/// A point set together with a formula defining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinableSet {
    points: PointSet,
    witness: Formula,
}

impl DefinableSet {
    /// Fails unless `Val(witness)` is exactly `points`.
    pub fn new(points: PointSet, witness: Formula, space: &AffineSpace) -> Result<Self> {
        let actual = val(&witness, space)?;
        if actual != points {
            return Err(Error::Verification(format!(
                "witness {witness} defines {}, not {}",
                space.format_set(&actual),
                space.format_set(&points)
            )));
        }
        Ok(DefinableSet { points, witness })
    }

    pub(crate) fn trusted(points: PointSet, witness: Formula) -> Self {
        DefinableSet { points, witness }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn witness(&self) -> &Formula {
        &self.witness
    }
}

/// The boolean algebra of definable subsets of one affine space.
///
/// Every member is a union of atoms; the atoms partition the space.
#[derive(Debug, Clone)]
pub struct DefinableAlgebra {
    space: AffineSpace,
    atoms: Vec<DefinableSet>,
    atom_of: Vec<usize>,
    saturated: bool,
    max_members: usize,
}

/// Generates the definable sets of `vars` over `model`: the least family
/// containing every relation atom and equation over term functions, closed
/// under the boolean operations and every `∃x`.
pub fn generate_definable_algebra(model: &Arc<Model>, vars: &VarSet, bounds: &Bounds) -> Result<DefinableAlgebra> {
    let space = enumerate_points(model, vars, bounds)?;
    let clone = term_functions(model, vars, bounds)?;
    let sig = model.signature();
    let fns = &clone.functions;
    let len = space.len();

    let mut jobs: Vec<(usize, Vec<usize>)> = Vec::new();
    for (r, sym) in sig.rels().iter().enumerate() {
        jobs.extend(
            (0..sym.arity)
                .map(|_| 0..fns.len())
                .multi_cartesian_product()
                .map(|t| (r, t)),
        );
    }
    let rel_sets = par::map(bounds.exec, &jobs, |(r, args)| {
        let table = model.rel_table(*r);
        let n = model.size();
        PointSet::from_fn(len, |p| {
            let idx = args.iter().fold(0, |acc, &a| acc * n + fns[a].table[p]);
            table[idx]
        })
    });
    let mut generators: Vec<(PointSet, Formula)> = Vec::new();
    let mut seen: HashSet<PointSet> = HashSet::new();
    for ((r, args), set) in jobs.iter().zip(rel_sets) {
        if seen.insert(set.clone()) {
            let terms = args.iter().map(|&a| fns[a].witness.clone()).collect();
            generators.push((set, Formula::Atom(sig.rels()[*r].name.clone(), terms)));
        }
    }
    if sig.with_equality() {
        for (i, j) in (0..fns.len()).tuple_combinations() {
            let set = PointSet::from_fn(len, |p| fns[i].table[p] == fns[j].table[p]);
            if seen.insert(set.clone()) {
                generators.push((set, Formula::eq(fns[i].witness.clone(), fns[j].witness.clone())));
            }
        }
    }

    let mut blocks = vec![DefinableSet::trusted(space.full(), Formula::True)];
    for (g, w) in &generators {
        blocks = refine(blocks, g, w);
    }
    loop {
        let before = blocks.len();
        let mut cylinders: Vec<(PointSet, Formula)> = Vec::new();
        for b in &blocks {
            for x in vars.iter() {
                let c = cylindrify(&space, x, &b.points)?;
                if seen.insert(c.clone()) {
                    cylinders.push((c, Formula::exists(x, b.witness.clone())));
                }
            }
        }
        for (c, w) in &cylinders {
            blocks = refine(blocks, c, w);
        }
        if blocks.len() == before {
            break;
        }
    }
    blocks.retain(|b| !b.points.is_empty());
    blocks.sort_by_key(|b| b.points.iter().next());

    let mut atom_of = vec![0; len];
    for (i, b) in blocks.iter().enumerate() {
        for p in b.points.iter() {
            atom_of[p] = i;
        }
    }
    Ok(DefinableAlgebra {
        space,
        atoms: blocks,
        atom_of,
        saturated: clone.saturated,
        max_members: bounds.max_members,
    })
}

fn refine(blocks: Vec<DefinableSet>, g: &PointSet, w: &Formula) -> Vec<DefinableSet> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    for b in blocks {
        let inside = b.points.intersection(g);
        if inside.is_empty() || inside == b.points {
            out.push(b);
            continue;
        }
        let outside = b.points.difference(g);
        out.push(DefinableSet::trusted(
            inside,
            Formula::and_simplified(b.witness.clone(), w.clone()),
        ));
        out.push(DefinableSet::trusted(
            outside,
            Formula::and_simplified(b.witness, Formula::not(w.clone())),
        ));
    }
    out
}

impl DefinableAlgebra {
    pub fn space(&self) -> &AffineSpace {
        &self.space
    }

    pub fn vars(&self) -> &VarSet {
        self.space.vars()
    }

    pub fn model(&self) -> &Arc<Model> {
        self.space.model()
    }

    /// False when the term clone was capped, so the family may be too small.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn atoms(&self) -> &[DefinableSet] {
        &self.atoms
    }

    /// Atom containing point `p`.
    pub fn atom_of(&self, p: usize) -> usize {
        self.atom_of[p]
    }

    /// Number of definable sets, `2^atoms`, when it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        1u128.checked_shl(self.atoms.len() as u32)
    }

    /// Human-readable size; large algebras print as a power of two.
    pub fn size_text(&self) -> String {
        match self.size() {
            Some(n) if self.atoms.len() <= 64 => n.to_string(),
            _ => format!("2^{}", self.atoms.len()),
        }
    }

    pub fn max_members(&self) -> usize {
        self.max_members
    }

    fn check_space(&self, a: &PointSet) -> Result<()> {
        if a.universe() == self.space.len() {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!(
                "point set over {} points used in a space of {}",
                a.universe(),
                self.space.len()
            )))
        }
    }

    /// Atoms meeting `a`, in atom order.
    pub fn atoms_meeting(&self, a: &PointSet) -> Vec<usize> {
        a.iter().map(|p| self.atom_of[p]).sorted().dedup().collect()
    }

    pub fn contains(&self, a: &PointSet) -> bool {
        a.universe() == self.space.len() && self.atoms_meeting(a).iter().all(|&i| self.atoms[i].points.is_subset(a))
    }

    /// Union of the given atoms.
    pub fn union_of(&self, atoms: &[usize]) -> PointSet {
        atoms
            .iter()
            .fold(self.space.empty(), |acc, &i| acc.union(&self.atoms[i].points))
    }

    /// Disjunction of atom witnesses: `false` for no atoms, `true` for all.
    pub fn witness_of(&self, atoms: &[usize]) -> Formula {
        if atoms.len() == self.atoms.len() {
            return Formula::True;
        }
        atoms.iter().fold(Formula::False, |acc, &i| {
            Formula::or_simplified(acc, self.atoms[i].witness.clone())
        })
    }

    /// The member equal to `a`, with its witness.
    pub fn definable(&self, a: &PointSet) -> Result<DefinableSet> {
        self.check_space(a)?;
        if !self.contains(a) {
            return Err(Error::NotInLattice(format!(
                "{} is not definable over {}",
                self.space.format_set(a),
                self.vars()
            )));
        }
        Ok(self.closure(a))
    }

    /// Smallest definable superset of `a`: the union of the atoms it meets.
    pub fn closure(&self, a: &PointSet) -> DefinableSet {
        let atoms = self.atoms_meeting(a);
        DefinableSet::trusted(self.union_of(&atoms), self.witness_of(&atoms))
    }

    /// Every member, sorted by bitset value.
    pub fn members(&self) -> Result<Vec<PointSet>> {
        let k = self.atoms.len();
        match self.size() {
            Some(n) if n <= self.max_members as u128 => {
                let mut out: Vec<PointSet> = (0..1u64 << k)
                    .map(|mask| {
                        let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
                        self.union_of(&chosen)
                    })
                    .collect();
                out.sort();
                Ok(out)
            }
            _ => Err(Error::BoundExceeded(format!(
                "{} definable sets over {} exceed the member bound {}",
                self.size_text(),
                self.vars(),
                self.max_members
            ))),
        }
    }
}

/// Smallest member of `alg` containing `a`.
pub fn closure(a: &PointSet, alg: &DefinableAlgebra) -> Result<DefinableSet> {
    alg.check_space(a)?;
    Ok(alg.closure(a))
}
