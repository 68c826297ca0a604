use std::fmt;

use itertools::Itertools;

use crate::algebra::signature::Signature;
use crate::algebra::term::{terms_up_to_depth, Term, VarSet};
use crate::error::{Error, Result};

/// A homomorphism `s : W(X) → W(Y)`, given by the image of every `x ∈ X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    source: VarSet,
    target: VarSet,
    images: Vec<Term>,
}

impl Substitution {
    /// `images[i]` is the image of the `i`-th variable of `source`.
    pub fn new(source: VarSet, target: VarSet, images: Vec<Term>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::VarSetMismatch(format!(
                "substitution on {source} needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for t in &images {
            for v in t.vars() {
                if !target.contains(v) {
                    return Err(Error::VarNotInScope(v.to_string()));
                }
            }
        }
        Ok(Substitution { source, target, images })
    }

    /// Builds a substitution from `(variable, image)` pairs; unlisted source
    /// variables must not exist.
    pub fn from_pairs(source: VarSet, target: VarSet, pairs: &[(&str, Term)]) -> Result<Self> {
        let mut images = Vec::with_capacity(source.len());
        for x in source.iter() {
            let img = pairs
                .iter()
                .find(|(v, _)| *v == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| Error::VarSetMismatch(format!("no image for `{x}`")))?;
            images.push(img);
        }
        if pairs.len() != source.len() {
            return Err(Error::VarSetMismatch("image for a variable outside the source".into()));
        }
        Substitution::new(source, target, images)
    }

    pub fn identity(vars: &VarSet) -> Self {
        Substitution {
            source: vars.clone(),
            target: vars.clone(),
            images: vars.iter().map(Term::var).collect(),
        }
    }

    pub fn source(&self) -> &VarSet {
        &self.source
    }

    pub fn target(&self) -> &VarSet {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Option<&Term> {
        self.source.index_of(var).map(|i| &self.images[i])
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .images
                .iter()
                .zip(self.source.iter())
                .all(|(t, x)| matches!(t, Term::Var(v) if v == x))
    }

    /// Applies the homomorphism to a term over the source.
    pub fn apply(&self, term: &Term) -> Result<Term> {
        for v in term.vars() {
            if !self.source.contains(v) {
                return Err(Error::VarNotInScope(v.to_string()));
            }
        }
        Ok(term.map_vars(&|v| self.images[self.source.index_of(v).unwrap()].clone()))
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.images.iter().try_for_each(|t| t.check(sig, &self.target))
    }

    /// Variables of the target that occur in some image.
    pub fn used_targets(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.images {
            for v in t.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Inverse substitution, when `self` is a bijective renaming.
    pub fn inverse(&self) -> Option<Substitution> {
        if self.source.len() != self.target.len() {
            return None;
        }
        let mut images = vec![None; self.target.len()];
        for (x, t) in self.source.iter().zip(&self.images) {
            let Term::Var(y) = t else { return None };
            let j = self.target.index_of(y)?;
            if images[j].is_some() {
                return None;
            }
            images[j] = Some(Term::var(x));
        }
        Some(Substitution {
            source: self.target.clone(),
            target: self.source.clone(),
            images: images.into_iter().collect::<Option<Vec<_>>>()?,
        })
    }
}

/// `s2 ∘ s1`: first `s1 : X → Y`, then `s2 : Y → Z`.
pub fn compose_subst(s1: &Substitution, s2: &Substitution) -> Result<Substitution> {
    if s1.target != s2.source {
        return Err(Error::VarSetMismatch(format!(
            "cannot compose: target {} differs from source {}",
            s1.target, s2.source
        )));
    }
    let images = s1.images.iter().map(|t| s2.apply(t)).collect::<Result<Vec<_>>>()?;
    Ok(Substitution {
        source: s1.source.clone(),
        target: s2.target.clone(),
        images,
    })
}

/// Every substitution `X → Y` whose images have depth at most `depth`, in
/// lexicographic order of the image tuple.
pub fn substitutions_up_to_depth(sig: &Signature, source: &VarSet, target: &VarSet, depth: usize) -> Vec<Substitution> {
    let terms = terms_up_to_depth(sig, target, depth);
    (0..source.len())
        .map(|_| terms.iter().cloned())
        .multi_cartesian_product()
        .map(|images| Substitution {
            source: source.clone(),
            target: target.clone(),
            images,
        })
        .collect()
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.source.iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} := {t}")?;
        }
        f.write_str("}")
    }
}
