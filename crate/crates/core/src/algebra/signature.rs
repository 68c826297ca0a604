use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::is_ident_char;

/// Name reserved for the built-in equality atom.
pub const EQUALITY: &str = "≡";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Operation and relation symbols of a finite signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<Symbol>,
    rels: Vec<Symbol>,
    with_equality: bool,
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || !name.chars().all(is_ident_char) {
        return Err(Error::InvalidSignature(format!("bad symbol name `{name}`")));
    }
    if matches!(name, "true" | "false" | "exists" | "forall" | "subst") {
        return Err(Error::InvalidSignature(format!("`{name}` is a keyword")));
    }
    Ok(())
}

impl Signature {
    pub fn new<O, R>(ops: O, rels: R, with_equality: bool) -> Result<Self>
    where
        O: IntoIterator<Item = (String, usize)>,
        R: IntoIterator<Item = (String, usize)>,
    {
        let ops: Vec<Symbol> = ops.into_iter().map(|(name, arity)| Symbol { name, arity }).collect();
        let rels: Vec<Symbol> = rels.into_iter().map(|(name, arity)| Symbol { name, arity }).collect();
        let mut seen = HashSet::new();
        for s in ops.iter().chain(&rels) {
            if s.name == EQUALITY {
                return Err(Error::InvalidSignature(format!("`{EQUALITY}` is reserved")));
            }
            check_name(&s.name)?;
            if !seen.insert(s.name.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        if let Some(r) = rels.iter().find(|r| r.arity == 0) {
            return Err(Error::InvalidSignature(format!(
                "relation `{}` must have arity >= 1",
                r.name
            )));
        }
        Ok(Signature {
            ops,
            rels,
            with_equality,
        })
    }

    /// Shorthand used by fixtures and tests.
    pub fn from_strs(ops: &[(&str, usize)], rels: &[(&str, usize)], with_equality: bool) -> Result<Self> {
        Signature::new(
            ops.iter().map(|(n, a)| (n.to_string(), *a)),
            rels.iter().map(|(n, a)| (n.to_string(), *a)),
            with_equality,
        )
    }

    pub fn ops(&self) -> &[Symbol] {
        &self.ops
    }

    pub fn rels(&self) -> &[Symbol] {
        &self.rels
    }

    pub fn with_equality(&self) -> bool {
        self.with_equality
    }

    pub fn set_equality(&mut self, on: bool) {
        self.with_equality = on;
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|s| s.name == name)
    }

    pub fn rel_index(&self, name: &str) -> Option<usize> {
        self.rels.iter().position(|s| s.name == name)
    }

    pub fn op(&self, name: &str) -> Option<&Symbol> {
        self.ops.iter().find(|s| s.name == name)
    }

    pub fn rel(&self, name: &str) -> Option<&Symbol> {
        self.rels.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops = self.ops.iter().map(|s| format!("{}/{}", s.name, s.arity));
        let rels = self.rels.iter().map(|s| format!("{}/{}", s.name, s.arity));
        write!(
            f,
            "ops[{}] rels[{}] equality={}",
            ops.collect::<Vec<_>>().join(","),
            rels.collect::<Vec<_>>().join(","),
            if self.with_equality { "on" } else { "off" }
        )
    }
}
