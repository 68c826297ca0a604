use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;

use crate::algebra::signature::Signature;
use crate::error::{Error, Result};
use crate::syntax::{is_ident_char, Cursor, Tok};

/// An ordered, duplicate-free set of variable names.
///
/// The order fixes the coordinates of points in the affine space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(Vec<String>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::VarSetMismatch("variable set must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || !n.chars().all(is_ident_char) {
                return Err(Error::VarSetMismatch(format!("bad variable name `{n}`")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::VarSetMismatch(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VarSet(names))
    }

    /// The canonical set `{x1, …, xn}`.
    pub fn canonical(n: usize) -> Self {
        assert!(n > 0, "canonical variable sets are nonempty");
        VarSet((1..=n).map(|i| format!("x{i}")).collect())
    }

    /// Parses a comma-separated list such as `x,y`.
    pub fn parse_list(text: &str) -> Result<Self> {
        VarSet::new(text.split(',').map(|s| s.trim().to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// An element of the absolutely free term algebra `W(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v)
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Checks symbols, arities, and that every variable lies in `vars`.
    pub fn check(&self, sig: &Signature, vars: &VarSet) -> Result<()> {
        match self {
            Term::Var(v) => {
                if vars.contains(v) {
                    Ok(())
                } else {
                    Err(Error::VarNotInScope(v.clone()))
                }
            }
            Term::App(op, args) => {
                let sym = sig.op(op).ok_or_else(|| Error::UnknownSymbol(op.clone()))?;
                if sym.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: op.clone(),
                        expected: sym.arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig, vars))
            }
        }
    }

    /// Replaces every variable by `f(name)`.
    pub fn map_vars(&self, f: &impl Fn(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) if args.is_empty() => f.write_str(op),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses a term: `var | op '(' term (',' term)* ')' | op` (nullary).
pub fn parse_term(text: &str, sig: &Signature, vars: &VarSet) -> Result<Term> {
    let mut cur = Cursor::new(text)?;
    let t = term_from(&mut cur, sig, vars)?;
    cur.finish()?;
    Ok(t)
}

pub(crate) fn term_from(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Term> {
    let name = cur.ident()?;
    if *cur.peek() == Tok::LParen {
        let sym = sig.op(&name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        cur.bump();
        let mut args = vec![term_from(cur, sig, vars)?];
        while *cur.peek() == Tok::Comma {
            cur.bump();
            args.push(term_from(cur, sig, vars)?);
        }
        cur.expect(Tok::RParen)?;
        if sym.arity != args.len() {
            return Err(Error::ArityMismatch {
                name,
                expected: sym.arity,
                got: args.len(),
            });
        }
        return Ok(Term::App(name, args));
    }
    if vars.contains(&name) {
        return Ok(Term::Var(name));
    }
    match sig.op(&name) {
        Some(sym) if sym.arity == 0 => Ok(Term::App(name, Vec::new())),
        Some(sym) => Err(Error::ArityMismatch {
            name,
            expected: sym.arity,
            got: 0,
        }),
        None if sig.rel(&name).is_some() => Err(Error::UnknownSymbol(name)),
        None => Err(Error::VarNotInScope(name)),
    }
}

/// All terms over `vars` of depth at most `depth`, ordered by depth, then by
/// operation order and argument order.
pub fn terms_up_to_depth(sig: &Signature, vars: &VarSet, depth: usize) -> Vec<Term> {
    let mut all: Vec<Term> = vars.iter().map(Term::var).collect();
    // `level_start[d]` is the index of the first term of depth exactly d.
    let mut level_start = vec![0usize];
    for d in 1..=depth {
        level_start.push(all.len());
        let prev_end = all.len();
        let prev_level = level_start[d - 1];
        let mut fresh = Vec::new();
        for sym in sig.ops() {
            if sym.arity == 0 {
                if d == 1 {
                    fresh.push(Term::App(sym.name.clone(), Vec::new()));
                }
                continue;
            }
            for idx in (0..sym.arity).map(|_| 0..prev_end).multi_cartesian_product() {
                // keep tuples with at least one argument of depth d-1
                if idx.iter().any(|&i| i >= prev_level) {
                    fresh.push(Term::App(
                        sym.name.clone(),
                        idx.iter().map(|&i| all[i].clone()).collect(),
                    ));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        all.extend(fresh);
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg_sig() -> Signature {
        Signature::from_strs(&[("neg", 1), ("c", 0), ("f", 2)], &[("P", 1)], true).unwrap()
    }

    #[test]
    fn parses_generator_and_nested() {
        let sig = neg_sig();
        let x = VarSet::new(["x"]).unwrap();
        assert_eq!(parse_term("x", &sig, &x).unwrap(), Term::var("x"));
        let t = parse_term("neg(neg(x))", &sig, &x).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.to_string(), "neg(neg(x))");
        assert_eq!(parse_term("c", &sig, &x).unwrap().depth(), 1);
    }

    #[test]
    fn reports_errors() {
        let sig = neg_sig();
        let xy = VarSet::new(["x", "y"]).unwrap();
        assert!(matches!(
            parse_term("neg(x,y)", &sig, &xy),
            Err(Error::ArityMismatch {
                expected: 1,
                got: 2,
                ..
            })
        ));
        assert!(matches!(parse_term("g(x)", &sig, &xy), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("z", &sig, &xy), Err(Error::VarNotInScope(_))));
        assert!(matches!(
            parse_term("neg(x", &sig, &xy),
            Err(Error::Syntax { pos: 5, .. })
        ));
    }

    #[test]
    fn term_enumeration_counts() {
        let sig = Signature::from_strs(&[("neg", 1)], &[], true).unwrap();
        let xy = VarSet::new(["x", "y"]).unwrap();
        assert_eq!(terms_up_to_depth(&sig, &xy, 0).len(), 2);
        assert_eq!(terms_up_to_depth(&sig, &xy, 2).len(), 6);
        let bin = Signature::from_strs(&[("f", 2)], &[], true).unwrap();
        // depth <= 1: 2 vars + 4 applications; depth 2 adds 6*6 - 2*2
        assert_eq!(terms_up_to_depth(&bin, &xy, 1).len(), 6);
        assert_eq!(terms_up_to_depth(&bin, &xy, 2).len(), 6 + 32);
        let ts = terms_up_to_depth(&bin, &xy, 2);
        assert!(ts.iter().all(|t| t.depth() <= 2));
        let uniq: HashSet<_> = ts.iter().collect();
        assert_eq!(uniq.len(), ts.len());
    }
}
