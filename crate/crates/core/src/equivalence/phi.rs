use std::fmt;

use itertools::Itertools;

use crate::algebra::{Signature, Substitution, VarSet};
use crate::error::{Error, Result};
use crate::formula::Formula;

/// An automorphism of the formula category in the supported class: a
/// relation permutation `ρ` together with a variable renaming `β`.
///
/// `β` permutes a finite set of names and fixes all others. On objects it
/// sends `X` to `X' = β(X)` position by position; on a morphism
/// `s : W(X) → W(Y)` it acts as `u_Y ∘ s ∘ u_X⁻¹` with `u` the renaming.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiAutomorphism {
    /// `(from, to)` pairs of the relation permutation; fixed points omitted.
    rels: Vec<(String, String)>,
    /// `(from, to)` pairs of the variable renaming; fixed points omitted.
    vars: Vec<(String, String)>,
}

fn normalize(pairs: Vec<(String, String)>, what: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
    pairs.sort();
    let froms: Vec<&String> = pairs.iter().map(|p| &p.0).collect();
    let mut tos: Vec<&String> = pairs.iter().map(|p| &p.1).collect();
    tos.sort();
    if froms.iter().dedup().count() != froms.len() {
        return Err(Error::InvalidPhi(format!("{what} maps a name twice")));
    }
    if froms != tos {
        return Err(Error::InvalidPhi(format!("{what} must permute the names it mentions")));
    }
    Ok(pairs)
}

impl PhiAutomorphism {
    pub fn identity() -> Self {
        PhiAutomorphism {
            rels: Vec::new(),
            vars: Vec::new(),
        }
    }

    pub fn new(rels: Vec<(String, String)>, vars: Vec<(String, String)>) -> Result<Self> {
        Ok(PhiAutomorphism {
            rels: normalize(rels, "relation permutation")?,
            vars: normalize(vars, "variable renaming")?,
        })
    }

    /// Product of the transpositions `(P Q)(R S)…`, applied right to left.
    pub fn swaps(pairs: &[(&str, &str)]) -> Result<Self> {
        let mut names: Vec<String> = pairs.iter().flat_map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        names.sort();
        names.dedup();
        let image = |n: &str| {
            pairs.iter().rev().fold(n.to_string(), |cur, (a, b)| {
                if cur == *a {
                    b.to_string()
                } else if cur == *b {
                    a.to_string()
                } else {
                    cur
                }
            })
        };
        let rels = names.iter().map(|n| (n.clone(), image(n))).collect();
        PhiAutomorphism::new(rels, Vec::new())
    }

    /// Reads `identity`, `swaprel P Q [R S …]` or `renamevars x:y,…`.
    pub fn parse(spec: &str) -> Result<Self> {
        let words: Vec<&str> = spec.split_whitespace().collect();
        match words.as_slice() {
            ["identity"] => Ok(PhiAutomorphism::identity()),
            ["swaprel", rest @ ..] if !rest.is_empty() && rest.len() % 2 == 0 => {
                let pairs: Vec<(&str, &str)> = rest.chunks(2).map(|c| (c[0], c[1])).collect();
                PhiAutomorphism::swaps(&pairs)
            }
            ["renamevars", rest @ ..] if !rest.is_empty() => {
                let pairs = rest
                    .join("")
                    .split(',')
                    .map(|p| {
                        p.split_once(':')
                            .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                            .map(|(a, b)| (a.to_string(), b.to_string()))
                            .ok_or_else(|| Error::InvalidPhi(format!("bad renaming `{p}`, expected x:y")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PhiAutomorphism::new(Vec::new(), pairs)
            }
            _ => Err(Error::InvalidPhi(format!(
                "`{spec}`: expected `identity`, `swaprel P Q [R S ...]` or `renamevars x:y,...`"
            ))),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rels.is_empty() && self.vars.is_empty()
    }

    /// True when `ρ` is the identity, so `φ` only renames variables.
    pub fn fixes_relations(&self) -> bool {
        self.rels.is_empty()
    }

    /// Checks that `ρ` names relations of `sig` and preserves arities.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        for (a, b) in &self.rels {
            let (ra, rb) = match (sig.rel(a), sig.rel(b)) {
                (Some(ra), Some(rb)) => (ra, rb),
                _ => return Err(Error::InvalidPhi(format!("unknown relation in {a} -> {b}"))),
            };
            if ra.arity != rb.arity {
                return Err(Error::InvalidPhi(format!("{a} and {b} have different arities")));
            }
        }
        Ok(())
    }

    pub fn rel(&self, name: &str) -> String {
        lookup(&self.rels, name)
    }

    pub fn var(&self, name: &str) -> String {
        lookup(&self.vars, name)
    }

    pub fn inverse(&self) -> PhiAutomorphism {
        let flip = |p: &[(String, String)]| p.iter().map(|(a, b)| (b.clone(), a.clone())).sorted().collect();
        PhiAutomorphism {
            rels: flip(&self.rels),
            vars: flip(&self.vars),
        }
    }

    /// `X' = β(X)`.
    pub fn object(&self, x: &VarSet) -> VarSet {
        VarSet::new(x.iter().map(|v| self.var(v))).expect("a renaming keeps names distinct")
    }

    /// `φ(s) = u_Y ∘ s ∘ u_X⁻¹ : W(X') → W(Y')`.
    pub fn morphism(&self, s: &Substitution) -> Substitution {
        let images = s
            .images()
            .iter()
            .map(|t| t.map_vars(&|v| crate::algebra::Term::var(self.var(v))))
            .collect();
        Substitution::new(self.object(s.source()), self.object(s.target()), images)
            .expect("renaming preserves well-formedness")
    }

    /// Renames relations by `ρ` and variables, bound ones included, by `β`.
    pub fn formula(&self, f: &Formula) -> Formula {
        f.rename(&|r| self.rel(r), &|v| self.var(v))
    }
}

fn lookup(pairs: &[(String, String)], name: &str) -> String {
    pairs
        .iter()
        .find(|(a, _)| a == name)
        .map(|(_, b)| b.clone())
        .unwrap_or_else(|| name.to_string())
}

/// Cycles of a permutation given as sorted `(from, to)` pairs.
fn cycles(pairs: &[(String, String)]) -> Vec<Vec<String>> {
    let mut seen: Vec<&String> = Vec::new();
    let mut out = Vec::new();
    for (start, _) in pairs {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start.clone()];
        seen.push(start);
        let mut cur = lookup(pairs, start);
        while &cur != start {
            seen.push(&pairs.iter().find(|(a, _)| *a == cur).unwrap().0);
            cycle.push(cur.clone());
            cur = lookup(pairs, &cur);
        }
        out.push(cycle);
    }
    out
}

impl fmt::Display for PhiAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("identity");
        }
        let mut parts: Vec<String> = cycles(&self.rels)
            .into_iter()
            .map(|c| {
                if c.len() == 2 {
                    format!("swap {} {}", c[0], c[1])
                } else {
                    format!("cycle {}", c.join(" "))
                }
            })
            .collect();
        if !self.vars.is_empty() {
            let map = self.vars.iter().map(|(a, b)| format!("{a}:{b}")).join(",");
            parts.push(format!("rename {map}"));
        }
        f.write_str(&parts.join("; "))
    }
}

/// The supported automorphisms for `sig` and the canonical variables
/// `x1..xn_max`: identity first, then every arity-preserving relation
/// permutation, then every permutation of the variable names, each group in
/// lexicographic order. At most `limit` automorphisms are returned.
pub fn enumerate_phis(sig: &Signature, n_max: usize, limit: usize) -> Vec<PhiAutomorphism> {
    let mut out = vec![PhiAutomorphism::identity()];
    let names: Vec<String> = sig.rels().iter().map(|r| r.name.clone()).collect();
    let groups: Vec<Vec<usize>> = sig
        .rels()
        .iter()
        .map(|r| r.arity)
        .sorted()
        .dedup()
        .map(|a| (0..names.len()).filter(|&i| sig.rels()[i].arity == a).collect())
        .collect();
    let per_group: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect())
        .collect();
    let mut rel_phis: Vec<PhiAutomorphism> = per_group
        .iter()
        .map(|opts| opts.iter())
        .multi_cartesian_product()
        .take(limit)
        .filter_map(|choice| {
            let mut pairs = Vec::new();
            for (g, perm) in groups.iter().zip(choice) {
                for (from, to) in g.iter().zip(perm) {
                    pairs.push((names[*from].clone(), names[*to].clone()));
                }
            }
            PhiAutomorphism::new(pairs, Vec::new()).ok()
        })
        .filter(|p| !p.is_identity())
        .collect();
    rel_phis.sort_by_key(|p| p.to_string());
    out.extend(rel_phis);
    let vars = VarSet::canonical(n_max);
    let var_phis = vars
        .iter()
        .permutations(n_max)
        .map(|perm| {
            let pairs = vars
                .iter()
                .zip(perm)
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            PhiAutomorphism::new(Vec::new(), pairs).expect("a permutation")
        })
        .filter(|p| !p.is_identity());
    out.extend(var_phis);
    out.truncate(limit);
    out
}
