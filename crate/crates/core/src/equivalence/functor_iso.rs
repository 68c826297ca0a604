use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::iso::same_signature;
use crate::algebra::{substitutions_up_to_depth, Model, ModelMap, Substitution, Term, VarSet};
use crate::category::DescriptionObject;
use crate::config::{Bounds, Exec};
use crate::equivalence::PhiAutomorphism;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lattice::{ClosedFilter, FilterLattice};
use crate::semantics::{cylindrify, PointMap, PointSet};

/// How the bijections of a [`FunctorIso`] were found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoMethod {
    /// Induced by `φ` on formulas: `α(Val₁ u) = Val₂ φ(u)`.
    Coherent,
    /// Found by backtracking over atom bijections.
    Search,
    /// Transported along a model isomorphism.
    ModelIsomorphism,
}

impl IsoMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsoMethod::Coherent => "coherent",
            IsoMethod::Search => "search",
            IsoMethod::ModelIsomorphism => "model isomorphism",
        }
    }
}

/// A functor isomorphism `α_φ : Cl_𝓗₁ → Cl_𝓗₂·φ` on the canonical
/// objects `{x1}, …, {x1..xn}` and their images under `φ`.
#[derive(Debug, Clone)]
pub struct FunctorIso {
    phi: PhiAutomorphism,
    depth: usize,
    method: IsoMethod,
    left: Vec<DescriptionObject>,
    right: Vec<DescriptionObject>,
    alpha: Vec<Vec<usize>>,
    exec: Exec,
}

impl FunctorIso {
    pub fn phi(&self) -> &PhiAutomorphism {
        &self.phi
    }

    /// Substitution depth used when the diagram was verified.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn method(&self) -> IsoMethod {
        self.method
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn n_max(&self) -> usize {
        self.left.len()
    }

    /// `F^X(𝓗₁)` for `|X| = n`.
    pub fn left(&self, n: usize) -> &DescriptionObject {
        &self.left[n - 1]
    }

    /// `F^{X'}(𝓗₂)` for `|X| = n`.
    pub fn right(&self, n: usize) -> &DescriptionObject {
        &self.right[n - 1]
    }

    /// `α` on object `n` as a map of member indices.
    pub fn alpha(&self, n: usize) -> &[usize] {
        &self.alpha[n - 1]
    }

    pub fn alpha_inverse(&self, n: usize) -> Vec<usize> {
        let a = self.alpha(n);
        let mut inv = vec![usize::MAX; a.len()];
        for (i, &j) in a.iter().enumerate() {
            if j < inv.len() {
                inv[j] = i;
            }
        }
        inv
    }

    pub fn apply(&self, n: usize, t: &ClosedFilter) -> Result<ClosedFilter> {
        let i = self.left(n).lattice().require_index(t.points())?;
        Ok(self.right(n).lattice().filter(self.alpha(n)[i]))
    }

    /// A copy with the images of members `i` and `j` of object `n` exchanged.
    pub fn corrupted(&self, n: usize, i: usize, j: usize) -> FunctorIso {
        let mut out = self.clone();
        out.alpha[n - 1].swap(i, j);
        out
    }
}

/// A term function tabulated over both spaces, with its term.
type JointFn = (Vec<usize>, Vec<usize>, Term);

/// Everything the searches share for one `φ`: objects on both sides and the
/// action of every depth-bounded substitution on atoms.
pub(crate) struct Setup {
    phi: PhiAutomorphism,
    depth: usize,
    left: Vec<DescriptionObject>,
    right: Vec<DescriptionObject>,
    /// `subs[i][j]`: substitutions from object `i` to object `j`.
    subs: Vec<Vec<Vec<Substitution>>>,
    /// `rel1[i][j][k][a]`: atoms of object `j` in the preimage of atom `a`
    /// of object `i` under substitution `k`; `rel2` likewise under `φ(s)`.
    rel1: Vec<Vec<Vec<Vec<PointSet>>>>,
    rel2: Vec<Vec<Vec<Vec<PointSet>>>>,
    exec: Exec,
}

pub(crate) fn left_objects(m1: &Arc<Model>, n_max: usize, bounds: &Bounds) -> Result<Vec<DescriptionObject>> {
    (1..=n_max)
        .map(|n| DescriptionObject::generate(m1, &VarSet::canonical(n), bounds))
        .collect()
}

fn atom_relations(
    objects: &[DescriptionObject],
    subs: &[Vec<Vec<Substitution>>],
) -> Result<Vec<Vec<Vec<Vec<PointSet>>>>> {
    let mut out = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        let mut row = Vec::new();
        for (j, y) in objects.iter().enumerate() {
            let (ax, ay) = (x.lattice().algebra(), y.lattice().algebra());
            let mut per_s = Vec::new();
            for s in &subs[i][j] {
                let map = PointMap::new(s, ax.space(), ay.space())?;
                let mut per_atom = Vec::new();
                for atom in ax.atoms() {
                    let pre = map.star(atom.points())?;
                    per_atom.push(PointSet::from_indices(ay.atoms().len(), ay.atoms_meeting(&pre)));
                }
                per_s.push(per_atom);
            }
            row.push(per_s);
        }
        out.push(row);
    }
    Ok(out)
}

impl Setup {
    pub(crate) fn new(
        left: &[DescriptionObject],
        m2: &Arc<Model>,
        phi: &PhiAutomorphism,
        depth: usize,
        bounds: &Bounds,
    ) -> Result<Setup> {
        let m1 = left
            .first()
            .map(|o| Arc::clone(o.space().model()))
            .ok_or_else(|| Error::BoundExceeded("n_max must be at least 1".into()))?;
        same_signature(&m1, m2)?;
        phi.check(m1.signature())?;
        let right = left
            .iter()
            .map(|o| DescriptionObject::generate(m2, &phi.object(o.vars()), bounds))
            .collect::<Result<Vec<_>>>()?;
        let subs: Vec<Vec<Vec<Substitution>>> = left
            .iter()
            .map(|x| {
                left.iter()
                    .map(|y| substitutions_up_to_depth(m1.signature(), x.vars(), y.vars(), depth))
                    .collect()
            })
            .collect();
        let phi_subs: Vec<Vec<Vec<Substitution>>> = subs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|ss| ss.iter().map(|s| phi.morphism(s)).collect())
                    .collect()
            })
            .collect();
        let rel1 = atom_relations(left, &subs)?;
        let rel2 = atom_relations(&right, &phi_subs)?;
        Ok(Setup {
            phi: phi.clone(),
            depth,
            left: left.to_vec(),
            right,
            subs,
            rel1,
            rel2,
            exec: bounds.exec,
        })
    }

    fn atoms_match(&self) -> bool {
        self.left
            .iter()
            .zip(&self.right)
            .all(|(l, r)| l.lattice().algebra().atoms().len() == r.lattice().algebra().atoms().len())
    }

    /// Whether the atom bijections commute with every substitution.
    fn commutes(&self, maps: &[Vec<usize>]) -> bool {
        let n = self.left.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..self.subs[i][j].len() {
                    for (a, pre) in self.rel1[i][j][k].iter().enumerate() {
                        let image = PointSet::from_indices(pre.universe(), pre.iter().map(|c| maps[j][c]));
                        if image != self.rel2[i][j][k][maps[i][a]] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn into_iso(self, maps: Vec<Vec<usize>>, method: IsoMethod) -> Result<FunctorIso> {
        let mut alpha = Vec::new();
        for ((l, r), map) in self.left.iter().zip(&self.right).zip(&maps) {
            let (ll, rl): (&FilterLattice, &FilterLattice) = (l.lattice(), r.lattice());
            let member_map = ll
                .members()
                .iter()
                .map(|m| {
                    let atoms: Vec<usize> = ll.algebra().atoms_meeting(m).iter().map(|&a| map[a]).collect();
                    rl.require_index(&rl.algebra().union_of(&atoms))
                })
                .collect::<Result<Vec<_>>>()?;
            alpha.push(member_map);
        }
        Ok(FunctorIso {
            phi: self.phi,
            depth: self.depth,
            method,
            left: self.left,
            right: self.right,
            alpha,
            exec: self.exec,
        })
    }

    /// `α` induced by `φ` on formulas, found by refining both spaces in
    /// lockstep with generators `u` and `φ(u)`.
    pub(crate) fn coherent(&self, bounds: &Bounds) -> Result<Option<Vec<Vec<usize>>>> {
        if !self.atoms_match() {
            return Ok(None);
        }
        let mut maps = Vec::new();
        for (l, r) in self.left.iter().zip(&self.right) {
            match lockstep_atoms(l, r, &self.phi, bounds)? {
                Some(m) => maps.push(m),
                None => return Ok(None),
            }
        }
        Ok(self.commutes(&maps).then_some(maps))
    }

    /// `α` transported along a model isomorphism; requires `φ` to be the identity.
    pub(crate) fn transported(&self, h: &ModelMap) -> Option<Vec<Vec<usize>>> {
        if !self.phi.is_identity() || !self.atoms_match() {
            return None;
        }
        let mut maps = Vec::new();
        for (l, r) in self.left.iter().zip(&self.right) {
            let (la, ra) = (l.lattice().algebra(), r.lattice().algebra());
            let mut map = Vec::new();
            for atom in la.atoms() {
                let image = PointSet::from_indices(
                    ra.space().len(),
                    atom.points().iter().map(|p| {
                        let pt: Vec<usize> = la.space().point(p).0.iter().map(|&v| h.apply(v)).collect();
                        ra.space().index_of(&pt)
                    }),
                );
                let hit = ra.atoms_meeting(&image);
                if hit.len() != 1 || ra.atoms()[hit[0]].points() != &image {
                    return None;
                }
                map.push(hit[0]);
            }
            maps.push(map);
        }
        self.commutes(&maps).then_some(maps)
    }

    /// Backtracking search for atom bijections commuting with every
    /// substitution, objects in size order and candidates in atom order.
    /// Returns `None` when no bijection exists or the budget runs out.
    pub(crate) fn search(&self, budget: u64) -> Option<Vec<Vec<usize>>> {
        if !self.atoms_match() {
            return None;
        }
        let n = self.left.len();
        let counts: Vec<usize> = self.left.iter().map(|o| o.lattice().algebra().atoms().len()).collect();
        let sig1: Vec<Vec<Vec<usize>>> = (0..n).map(|i| self.signatures(&self.rel1, i, counts[i])).collect();
        let sig2: Vec<Vec<Vec<usize>>> = (0..n).map(|i| self.signatures(&self.rel2, i, counts[i])).collect();
        let vars: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..counts[i]).map(move |a| (i, a))).collect();
        let mut state = SearchState {
            maps: counts.iter().map(|&c| vec![usize::MAX; c]).collect(),
            used: counts.iter().map(|&c| vec![false; c]).collect(),
            nodes: 0,
            budget,
        };
        if self.extend(&vars, 0, &sig1, &sig2, &mut state) {
            Some(state.maps)
        } else {
            None
        }
    }

    fn signatures(&self, rel: &[Vec<Vec<Vec<PointSet>>>], i: usize, count: usize) -> Vec<Vec<usize>> {
        let n = self.left.len();
        (0..count)
            .map(|a| {
                let mut v = Vec::new();
                for j in 0..n {
                    for per_atom in &rel[i][j] {
                        v.push(per_atom[a].count());
                    }
                    for per_atom in &rel[j][i] {
                        v.push(per_atom.iter().filter(|pre| pre.contains(a)).count());
                    }
                }
                v
            })
            .collect()
    }

    fn consistent(&self, i: usize, a: usize, b: usize, maps: &[Vec<usize>]) -> bool {
        for (j, map) in maps.iter().enumerate() {
            for (c, &d) in map.iter().enumerate() {
                let (c, d) = if j == i && c == a { (a, b) } else { (c, d) };
                if d == usize::MAX {
                    continue;
                }
                for k in 0..self.subs[i][j].len() {
                    if self.rel1[i][j][k][a].contains(c) != self.rel2[i][j][k][b].contains(d) {
                        return false;
                    }
                }
                for k in 0..self.subs[j][i].len() {
                    if self.rel1[j][i][k][c].contains(a) != self.rel2[j][i][k][d].contains(b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(
        &self,
        vars: &[(usize, usize)],
        pos: usize,
        sig1: &[Vec<Vec<usize>>],
        sig2: &[Vec<Vec<usize>>],
        st: &mut SearchState,
    ) -> bool {
        let Some(&(i, a)) = vars.get(pos) else {
            return true;
        };
        for b in 0..sig2[i].len() {
            if st.used[i][b] || sig1[i][a] != sig2[i][b] {
                continue;
            }
            st.nodes += 1;
            if st.nodes > st.budget {
                return false;
            }
            if !self.consistent(i, a, b, &st.maps) {
                continue;
            }
            st.maps[i][a] = b;
            st.used[i][b] = true;
            if self.extend(vars, pos + 1, sig1, sig2, st) {
                return true;
            }
            st.maps[i][a] = usize::MAX;
            st.used[i][b] = false;
        }
        false
    }
}

struct SearchState {
    maps: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

/// Term functions realized by the same term in both models, tabulated over
/// each side's space, to saturation of the joint clone.
fn joint_term_functions(l: &DescriptionObject, r: &DescriptionObject, bounds: &Bounds) -> Option<Vec<JointFn>> {
    let (s1, s2) = (l.space(), r.space());
    let (m1, m2) = (s1.model(), s2.model());
    let mut fns: Vec<JointFn> = Vec::new();
    let mut seen: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    for (c, x) in l.vars().iter().enumerate() {
        let key = (s1.coordinate(c), s2.coordinate(c));
        if seen.insert(key.clone()) {
            fns.push((key.0, key.1, Term::var(x)));
        }
    }
    let mut frontier = 0;
    let mut depth = 0;
    loop {
        let known = fns.len();
        let mut fresh = Vec::new();
        for (op, sym) in m1.signature().ops().iter().enumerate() {
            if sym.arity == 0 && depth > 0 {
                continue;
            }
            let tuples: Vec<Vec<usize>> = if sym.arity == 0 {
                vec![Vec::new()]
            } else {
                use itertools::Itertools;
                (0..sym.arity)
                    .map(|_| 0..known)
                    .multi_cartesian_product()
                    .filter(|t| t.iter().any(|&a| a >= frontier))
                    .collect()
            };
            for args in tuples {
                let table = |m: &Model, len: usize, side: fn(&JointFn) -> &Vec<usize>| -> Vec<usize> {
                    (0..len)
                        .map(|p| {
                            let vals: Vec<usize> = args.iter().map(|&a| side(&fns[a])[p]).collect();
                            m.apply_op(op, &vals)
                        })
                        .collect()
                };
                let key = (table(m1, s1.len(), |f| &f.0), table(m2, s2.len(), |f| &f.1));
                if seen.insert(key.clone()) {
                    let term = Term::App(sym.name.clone(), args.iter().map(|&a| fns[a].2.clone()).collect());
                    fresh.push((key.0, key.1, term));
                }
            }
        }
        if fresh.is_empty() {
            return Some(fns);
        }
        if bounds.max_term_depth.is_some_and(|d| depth >= d) || known + fresh.len() > bounds.max_term_functions {
            return None;
        }
        frontier = known;
        fns.extend(fresh);
        depth += 1;
    }
}

struct Block {
    left: PointSet,
    right: PointSet,
    witness: Formula,
}

/// Splits every block pair by `(g1, g2)`; `None` when one side splits and
/// the other does not.
fn refine_pairs(blocks: Vec<Block>, g1: &PointSet, g2: &PointSet, w: &Formula) -> Option<Vec<Block>> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    for b in blocks {
        let (i1, i2) = (b.left.intersection(g1), b.right.intersection(g2));
        let (o1, o2) = (b.left.difference(g1), b.right.difference(g2));
        if i1.is_empty() != i2.is_empty() || o1.is_empty() != o2.is_empty() {
            return None;
        }
        if o1.is_empty() || i1.is_empty() {
            out.push(b);
            continue;
        }
        out.push(Block {
            left: i1,
            right: i2,
            witness: Formula::and_simplified(b.witness.clone(), w.clone()),
        });
        out.push(Block {
            left: o1,
            right: o2,
            witness: Formula::and_simplified(b.witness, Formula::not(w.clone())),
        });
    }
    Some(out)
}

fn lockstep_atoms(
    l: &DescriptionObject,
    r: &DescriptionObject,
    phi: &PhiAutomorphism,
    bounds: &Bounds,
) -> Result<Option<Vec<usize>>> {
    let Some(fns) = joint_term_functions(l, r, bounds) else {
        return Ok(None);
    };
    let (s1, s2) = (l.space(), r.space());
    let (m1, m2) = (s1.model(), s2.model());
    let sig = m1.signature();
    let mut generators: Vec<(PointSet, PointSet, Formula)> = Vec::new();
    for (ri, sym) in sig.rels().iter().enumerate() {
        let rj = sig
            .rel_index(&phi.rel(&sym.name))
            .expect("checked relation permutation");
        use itertools::Itertools;
        for args in (0..sym.arity).map(|_| 0..fns.len()).multi_cartesian_product() {
            let set = |m: &Model, rel: usize, len: usize, side: fn(&JointFn) -> &Vec<usize>| {
                PointSet::from_fn(len, |p| {
                    let vals: Vec<usize> = args.iter().map(|&a| side(&fns[a])[p]).collect();
                    m.holds(rel, &vals)
                })
            };
            let g1 = set(m1, ri, s1.len(), |f| &f.0);
            let g2 = set(m2, rj, s2.len(), |f| &f.1);
            let terms = args.iter().map(|&a| fns[a].2.clone()).collect();
            generators.push((g1, g2, Formula::Atom(sym.name.clone(), terms)));
        }
    }
    if sig.with_equality() {
        for i in 0..fns.len() {
            for j in i + 1..fns.len() {
                let g1 = PointSet::from_fn(s1.len(), |p| fns[i].0[p] == fns[j].0[p]);
                let g2 = PointSet::from_fn(s2.len(), |p| fns[i].1[p] == fns[j].1[p]);
                generators.push((g1, g2, Formula::eq(fns[i].2.clone(), fns[j].2.clone())));
            }
        }
    }
    let mut blocks = vec![Block {
        left: s1.full(),
        right: s2.full(),
        witness: Formula::True,
    }];
    let mut seen: HashSet<(PointSet, PointSet)> = HashSet::new();
    for (g1, g2, w) in &generators {
        if !seen.insert((g1.clone(), g2.clone())) {
            continue;
        }
        match refine_pairs(blocks, g1, g2, w) {
            Some(b) => blocks = b,
            None => return Ok(None),
        }
    }
    loop {
        let before = blocks.len();
        let mut cylinders = Vec::new();
        for b in &blocks {
            for (x, x2) in l.vars().iter().zip(r.vars().iter()) {
                let c1 = cylindrify(s1, x, &b.left)?;
                let c2 = cylindrify(s2, x2, &b.right)?;
                if seen.insert((c1.clone(), c2.clone())) {
                    cylinders.push((c1, c2, Formula::exists(x, b.witness.clone())));
                }
            }
        }
        for (c1, c2, w) in &cylinders {
            match refine_pairs(blocks, c1, c2, w) {
                Some(b) => blocks = b,
                None => return Ok(None),
            }
        }
        if blocks.len() == before {
            break;
        }
    }
    let (la, ra) = (l.lattice().algebra(), r.lattice().algebra());
    let mut map = vec![usize::MAX; la.atoms().len()];
    for b in &blocks {
        let (hl, hr) = (la.atoms_meeting(&b.left), ra.atoms_meeting(&b.right));
        if hl.len() != 1 || hr.len() != 1 {
            return Ok(None);
        }
        map[hl[0]] = hr[0];
    }
    let mut used = map.clone();
    used.sort_unstable();
    used.dedup();
    if map.contains(&usize::MAX) || used.len() != map.len() {
        return Ok(None);
    }
    Ok(Some(map))
}

/// Looks for a functor isomorphism for the given `φ`: first the one induced
/// by `φ` on formulas, then a backtracking search within the node budget.
/// `None` means no witness was found within bounds, not that none exists.
pub fn find_functor_iso(
    m1: &Arc<Model>,
    m2: &Arc<Model>,
    phi: &PhiAutomorphism,
    n_max: usize,
    depth: usize,
    bounds: &Bounds,
) -> Result<Option<FunctorIso>> {
    let left = left_objects(m1, n_max, bounds)?;
    let setup = Setup::new(&left, m2, phi, depth, bounds)?;
    if let Some(maps) = setup.coherent(bounds)? {
        return setup.into_iso(maps, IsoMethod::Coherent).map(Some);
    }
    match setup.search(bounds.search_budget) {
        Some(maps) => setup.into_iso(maps, IsoMethod::Search).map(Some),
        None => Ok(None),
    }
}

pub(crate) fn coherent_iso(setup: Setup, bounds: &Bounds) -> Result<Option<FunctorIso>> {
    match setup.coherent(bounds)? {
        Some(maps) => setup.into_iso(maps, IsoMethod::Coherent).map(Some),
        None => Ok(None),
    }
}

pub(crate) fn searched_iso(setup: Setup, budget: u64) -> Result<Option<FunctorIso>> {
    match setup.search(budget) {
        Some(maps) => setup.into_iso(maps, IsoMethod::Search).map(Some),
        None => Ok(None),
    }
}

pub(crate) fn transported_iso(setup: Setup, h: &ModelMap) -> Result<Option<FunctorIso>> {
    match setup.transported(h) {
        Some(maps) => setup.into_iso(maps, IsoMethod::ModelIsomorphism).map(Some),
        None => Ok(None),
    }
}
