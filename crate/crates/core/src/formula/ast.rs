use std::fmt;

use crate::algebra::{compose_subst, Signature, Substitution, Term, VarSet};
use crate::error::{Error, Result};

/// A formula of `Φ(X)`, including the formal substitution node `s₍*₎u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `s₍*₎u`: the body lives over `source(s)`, the node over `target(s)`.
    Subst(Substitution, Box<Formula>),
}

/// Signature plus ambient variable set: the index `X` of `Φ(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaContext {
    pub sig: Signature,
    pub vars: VarSet,
}

impl FormulaContext {
    pub fn new(sig: Signature, vars: VarSet) -> Self {
        FormulaContext { sig, vars }
    }
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(rel.into(), args)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Equal(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(f))
    }

    pub fn forall(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn subst(s: Substitution, f: Formula) -> Formula {
        Formula::Subst(s, Box::new(f))
    }

    /// Conjunction that drops `True` operands.
    pub fn and_simplified(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::True, b) => b,
            (a, Formula::True) => a,
            (a, b) => Formula::and(a, b),
        }
    }

    /// Disjunction that drops `False` operands.
    pub fn or_simplified(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::False, b) => b,
            (a, Formula::False) => a,
            (a, b) => Formula::or(a, b),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Equal(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
            Formula::Subst(_, a) => a.is_quantifier_free(),
        }
    }

    /// Connective nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Equal(..) => 0,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) | Formula::Subst(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Validates the formula as an element of `Φ(ctx.vars)`.
    pub fn check(&self, ctx: &FormulaContext) -> Result<()> {
        self.check_in(&ctx.sig, &ctx.vars)
    }

    fn check_in(&self, sig: &Signature, vars: &VarSet) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(rel, args) => {
                let sym = sig.rel(rel).ok_or_else(|| Error::UnknownSymbol(rel.clone()))?;
                if sym.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: rel.clone(),
                        expected: sym.arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|t| t.check(sig, vars))
            }
            Formula::Equal(a, b) => {
                if !sig.with_equality() {
                    return Err(Error::EqualityDisabled);
                }
                a.check(sig, vars)?;
                b.check(sig, vars)
            }
            Formula::Not(a) => a.check_in(sig, vars),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check_in(sig, vars)?;
                b.check_in(sig, vars)
            }
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                if !vars.contains(x) {
                    return Err(Error::VarNotInScope(x.clone()));
                }
                a.check_in(sig, vars)
            }
            Formula::Subst(s, a) => {
                if s.target() != vars {
                    return Err(Error::VarSetMismatch(format!(
                        "substitution targets {} inside {}",
                        s.target(),
                        vars
                    )));
                }
                s.check(sig)?;
                a.check_in(sig, s.source())
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut push = |v: &str, bound: &Vec<String>| {
            if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => {
                for t in args {
                    t.vars().into_iter().for_each(|v| push(v, bound));
                }
            }
            Formula::Equal(a, b) => {
                a.vars().into_iter().for_each(|v| push(v, bound));
                b.vars().into_iter().for_each(|v| push(v, bound));
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::Subst(s, a) => {
                // the body is closed off from the outer binders
                for v in a.free_vars() {
                    if let Some(t) = s.image_of(&v) {
                        t.vars().into_iter().for_each(|w| push(w, bound));
                    }
                }
            }
        }
    }

    /// Renames relation symbols and variables (bound ones included).
    pub fn rename(&self, rel: &impl Fn(&str) -> String, var: &impl Fn(&str) -> String) -> Formula {
        let term = |t: &Term| t.map_vars(&|v| Term::Var(var(v)));
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(r, args) => Formula::Atom(rel(r), args.iter().map(term).collect()),
            Formula::Equal(a, b) => Formula::Equal(term(a), term(b)),
            Formula::Not(a) => Formula::not(a.rename(rel, var)),
            Formula::And(a, b) => Formula::and(a.rename(rel, var), b.rename(rel, var)),
            Formula::Or(a, b) => Formula::or(a.rename(rel, var), b.rename(rel, var)),
            Formula::Implies(a, b) => Formula::implies(a.rename(rel, var), b.rename(rel, var)),
            Formula::Exists(x, a) => Formula::exists(var(x), a.rename(rel, var)),
            Formula::Forall(x, a) => Formula::forall(var(x), a.rename(rel, var)),
            Formula::Subst(s, a) => {
                let rename_set = |vs: &VarSet| VarSet::new(vs.iter().map(var)).expect("renaming is injective");
                let s2 = Substitution::new(
                    rename_set(s.source()),
                    rename_set(s.target()),
                    s.images().iter().map(term).collect(),
                )
                .expect("renaming preserves well-formedness");
                Formula::subst(s2, a.rename(rel, var))
            }
        }
    }

    fn push_subst(&self, s: &Substitution) -> Result<Formula> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|t| s.apply(t)).collect::<Result<_>>()?),
            Formula::Equal(a, b) => Formula::Equal(s.apply(a)?, s.apply(b)?),
            Formula::Not(a) => Formula::not(a.push_subst(s)?),
            Formula::And(a, b) => Formula::and(a.push_subst(s)?, b.push_subst(s)?),
            Formula::Or(a, b) => Formula::or(a.push_subst(s)?, b.push_subst(s)?),
            Formula::Implies(a, b) => Formula::implies(a.push_subst(s)?, b.push_subst(s)?),
            Formula::Subst(inner, a) => a.push_subst(&compose_subst(inner, s)?)?,
            Formula::Exists(..) | Formula::Forall(..) => unreachable!("only quantifier-free formulas are pushed"),
        })
    }
}

/// `s₍*₎f`: substitutes into atoms when `f` is quantifier-free, otherwise
/// wraps `f` in a formal substitution node.
pub fn apply_subst_formula(s: &Substitution, f: &Formula) -> Result<Formula> {
    for v in f.free_vars() {
        if !s.source().contains(&v) {
            return Err(Error::VarSetMismatch(format!(
                "free variable `{v}` outside the substitution source {}",
                s.source()
            )));
        }
    }
    if s.is_identity() {
        return Ok(f.clone());
    }
    if f.is_quantifier_free() {
        f.push_subst(s)
    } else {
        Ok(Formula::subst(s.clone(), f.clone()))
    }
}

// Precedence levels used by the printer: higher binds tighter.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;

impl Formula {
    fn write(&self, f: &mut fmt::Formatter<'_>, need: u8, rightmost: bool) -> fmt::Result {
        let (own, prefix) = match self {
            Formula::Implies(..) => (IMPLIES, false),
            Formula::Or(..) => (OR, false),
            Formula::And(..) => (AND, false),
            Formula::Not(_) => (NOT, false),
            Formula::Exists(..) | Formula::Forall(..) | Formula::Subst(..) => (0, true),
            _ => (u8::MAX, false),
        };
        let paren = if prefix { !rightmost } else { own < need };
        let right = paren || rightmost;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Atom(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")?;
            }
            Formula::Equal(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write(f, NOT, right)?;
            }
            Formula::And(a, b) => {
                a.write(f, AND, false)?;
                f.write_str(" & ")?;
                b.write(f, NOT, right)?;
            }
            Formula::Or(a, b) => {
                a.write(f, OR, false)?;
                f.write_str(" | ")?;
                b.write(f, AND, right)?;
            }
            Formula::Implies(a, b) => {
                a.write(f, OR, false)?;
                f.write_str(" -> ")?;
                b.write(f, IMPLIES, right)?;
            }
            Formula::Exists(x, a) => {
                write!(f, "exists {x}. ")?;
                a.write(f, IMPLIES, true)?;
            }
            Formula::Forall(x, a) => {
                write!(f, "forall {x}. ")?;
                a.write(f, IMPLIES, true)?;
            }
            Formula::Subst(s, a) => {
                write!(f, "subst {s} ")?;
                a.write(f, IMPLIES, true)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, IMPLIES, true)
    }
}
