use crate::algebra::term::term_from;
use crate::algebra::{Signature, Substitution, Term, VarSet};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, FormulaContext};
use crate::syntax::{Cursor, Tok};

/// Parses a formula over `ctx`.
///
/// Precedence from tightest: `!`, `&`, `|`, `->` (right associative).
/// `exists`, `forall` and `subst` extend as far to the right as possible.
pub fn parse_formula(text: &str, ctx: &FormulaContext) -> Result<Formula> {
    let mut cur = Cursor::new(text)?;
    let f = implies(&mut cur, &ctx.sig, &ctx.vars)?;
    cur.finish()?;
    Ok(f)
}

fn implies(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Formula> {
    let lhs = or(cur, sig, vars)?;
    if *cur.peek() == Tok::Arrow {
        cur.bump();
        let rhs = implies(cur, sig, vars)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn or(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Formula> {
    let mut acc = and(cur, sig, vars)?;
    while *cur.peek() == Tok::Pipe {
        cur.bump();
        acc = Formula::or(acc, and(cur, sig, vars)?);
    }
    Ok(acc)
}

fn and(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Formula> {
    let mut acc = unary(cur, sig, vars)?;
    while *cur.peek() == Tok::Amp {
        cur.bump();
        acc = Formula::and(acc, unary(cur, sig, vars)?);
    }
    Ok(acc)
}

fn keyword(cur: &Cursor) -> Option<&str> {
    match cur.peek() {
        Tok::Ident(s) if matches!(s.as_str(), "true" | "false" | "exists" | "forall" | "subst") => Some(s.as_str()),
        _ => None,
    }
}

fn unary(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Formula> {
    if *cur.peek() == Tok::Bang {
        cur.bump();
        return Ok(Formula::not(unary(cur, sig, vars)?));
    }
    match keyword(cur) {
        Some("exists") | Some("forall") => {
            let universal = keyword(cur) == Some("forall");
            cur.bump();
            let pos = cur.pos();
            let x = cur.ident()?;
            if !vars.contains(&x) {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("quantified variable `{x}` is not in {vars}"),
                });
            }
            cur.expect(Tok::Dot)?;
            let body = implies(cur, sig, vars)?;
            Ok(if universal {
                Formula::forall(x, body)
            } else {
                Formula::exists(x, body)
            })
        }
        Some("subst") => {
            cur.bump();
            cur.expect(Tok::LBrace)?;
            let mut names = Vec::new();
            let mut images = Vec::new();
            loop {
                names.push(cur.ident()?);
                cur.expect(Tok::Assign)?;
                images.push(term_from(cur, sig, vars)?);
                if *cur.peek() == Tok::Comma {
                    cur.bump();
                } else {
                    break;
                }
            }
            cur.expect(Tok::RBrace)?;
            let source = VarSet::new(names)?;
            let s = Substitution::new(source.clone(), vars.clone(), images)?;
            let body = implies(cur, sig, &source)?;
            Ok(Formula::subst(s, body))
        }
        _ => primary(cur, sig, vars),
    }
}

fn primary(cur: &mut Cursor, sig: &Signature, vars: &VarSet) -> Result<Formula> {
    match cur.peek().clone() {
        Tok::LParen => {
            cur.bump();
            let f = implies(cur, sig, vars)?;
            cur.expect(Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(name) if name == "true" => {
            cur.bump();
            Ok(Formula::True)
        }
        Tok::Ident(name) if name == "false" => {
            cur.bump();
            Ok(Formula::False)
        }
        Tok::Ident(name) if sig.rel(&name).is_some() => {
            let arity = sig.rel(&name).unwrap().arity;
            cur.bump();
            cur.expect(Tok::LParen)?;
            let mut args: Vec<Term> = vec![term_from(cur, sig, vars)?];
            while *cur.peek() == Tok::Comma {
                cur.bump();
                args.push(term_from(cur, sig, vars)?);
            }
            cur.expect(Tok::RParen)?;
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    name,
                    expected: arity,
                    got: args.len(),
                });
            }
            Ok(Formula::Atom(name, args))
        }
        Tok::Ident(name) => {
            if *cur.peek2() == Tok::LParen && sig.op(&name).is_none() {
                return Err(Error::UnknownSymbol(name));
            }
            let lhs = term_from(cur, sig, vars)?;
            if *cur.peek() != Tok::Eq {
                return Err(cur.error(format!("expected `=` after term `{lhs}`")));
            }
            if !sig.with_equality() {
                return Err(Error::EqualityDisabled);
            }
            cur.bump();
            let rhs = term_from(cur, sig, vars)?;
            Ok(Formula::Equal(lhs, rhs))
        }
        other => Err(cur.error(format!("expected a formula, found {}", other.describe()))),
    }
}
