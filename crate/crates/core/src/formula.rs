//! Sorted formulas over equalities: AST, parser, printer.
//!
//! Every node carries its sort (a [`VarContext`]). Quantifiers keep the sort
//! of their body; a substitution node `[s]u` has the target context of `s`
//! as its sort while `u` lives over the source context.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};
use crate::terms::{parse_term_at, Signature, Term, TermMap, Var, VarContext};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// Surface-only; removed by [`normalize_universal`].
    Forall(Var, Box<Formula>),
    Subst(TermMap, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    sort: VarContext,
    node: Node,
}

impl Formula {
    pub fn equality(sort: &VarContext, w: Term, w2: Term) -> Result<Formula> {
        for t in [&w, &w2] {
            if !t.is_over(sort) {
                return Err(Error::SortMismatch(format!(
                    "equality term uses variables outside {sort}"
                )));
            }
        }
        Ok(Formula {
            sort: sort.clone(),
            node: Node::Eq(w, w2),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(u: Formula) -> Formula {
        Formula {
            sort: u.sort.clone(),
            node: Node::Not(Box::new(u)),
        }
    }

    pub fn and(u: Formula, v: Formula) -> Result<Formula> {
        Formula::binary(u, v, Node::And)
    }

    pub fn or(u: Formula, v: Formula) -> Result<Formula> {
        Formula::binary(u, v, Node::Or)
    }

    fn binary(u: Formula, v: Formula, f: fn(Box<Formula>, Box<Formula>) -> Node) -> Result<Formula> {
        if u.sort != v.sort {
            return Err(Error::SortMismatch(format!(
                "operands of sorts {} and {}",
                u.sort, v.sort
            )));
        }
        Ok(Formula {
            sort: u.sort.clone(),
            node: f(Box::new(u), Box::new(v)),
        })
    }

    pub fn exists(x: Var, u: Formula) -> Result<Formula> {
        Formula::quantifier(x, u, Node::Exists)
    }

    pub fn forall(x: Var, u: Formula) -> Result<Formula> {
        Formula::quantifier(x, u, Node::Forall)
    }

    fn quantifier(x: Var, u: Formula, f: fn(Var, Box<Formula>) -> Node) -> Result<Formula> {
        if !u.sort.contains(x) {
            return Err(Error::UnboundVariable(format!(
                "{x} (quantified outside sort {})",
                u.sort
            )));
        }
        Ok(Formula {
            sort: u.sort.clone(),
            node: f(x, Box::new(u)),
        })
    }

    pub fn subst(s: TermMap, u: Formula) -> Result<Formula> {
        if &u.sort != s.source() {
            return Err(Error::SortMismatch(format!(
                "substitution source {} differs from body sort {}",
                s.source(),
                u.sort
            )));
        }
        Ok(Formula {
            sort: s.target().clone(),
            node: Node::Subst(s, Box::new(u)),
        })
    }

    pub fn sort(&self) -> &VarContext {
        &self.sort
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        match &self.node {
            Node::Eq(a, b) => {
                let mut s = BTreeSet::new();
                a.collect_vars(&mut s);
                b.collect_vars(&mut s);
                s
            }
            Node::Not(u) => u.free_vars(),
            Node::And(u, v) | Node::Or(u, v) => {
                let mut s = u.free_vars();
                s.extend(v.free_vars());
                s
            }
            Node::Exists(x, u) | Node::Forall(x, u) => {
                let mut s = u.free_vars();
                s.remove(x);
                s
            }
            Node::Subst(map, u) => {
                let mut s = BTreeSet::new();
                for x in u.free_vars() {
                    if let Some(t) = map.image(x) {
                        t.collect_vars(&mut s);
                    }
                }
                s
            }
        }
    }

    /// Variables quantified somewhere in the formula (not looking inside
    /// substitution bodies, whose variables belong to another sort).
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        self.collect_bound(&mut s);
        s
    }

    fn collect_bound(&self, out: &mut BTreeSet<Var>) {
        match &self.node {
            Node::Eq(..) | Node::Subst(..) => {}
            Node::Not(u) => u.collect_bound(out),
            Node::And(u, v) | Node::Or(u, v) => {
                u.collect_bound(out);
                v.collect_bound(out);
            }
            Node::Exists(x, u) | Node::Forall(x, u) => {
                out.insert(*x);
                u.collect_bound(out);
            }
        }
    }

    pub fn has_forall(&self) -> bool {
        match &self.node {
            Node::Eq(..) => false,
            Node::Forall(..) => true,
            Node::Not(u) | Node::Exists(_, u) | Node::Subst(_, u) => u.has_forall(),
            Node::And(u, v) | Node::Or(u, v) => u.has_forall() || v.has_forall(),
        }
    }

    /// Length in the free Halmos algebra (equalities 0, unary +1, binary
    /// `n1 + n2 + 1`) plus the number of operation symbols in its equalities.
    pub fn weight(&self) -> usize {
        match &self.node {
            Node::Eq(a, b) => a.size() + b.size(),
            Node::Not(u) | Node::Exists(_, u) | Node::Forall(_, u) | Node::Subst(_, u) => u.weight() + 1,
            Node::And(u, v) | Node::Or(u, v) => u.weight() + v.weight() + 1,
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }
}

/// Rewrites every `A x . v` into `!E x . !v`.
pub fn normalize_universal(u: &Formula) -> Formula {
    let node = match &u.node {
        Node::Eq(a, b) => Node::Eq(a.clone(), b.clone()),
        Node::Not(v) => Node::Not(Box::new(normalize_universal(v))),
        Node::And(v, w) => Node::And(Box::new(normalize_universal(v)), Box::new(normalize_universal(w))),
        Node::Or(v, w) => Node::Or(Box::new(normalize_universal(v)), Box::new(normalize_universal(w))),
        Node::Exists(x, v) => Node::Exists(*x, Box::new(normalize_universal(v))),
        Node::Subst(s, v) => Node::Subst(s.clone(), Box::new(normalize_universal(v))),
        Node::Forall(x, v) => {
            let inner = Formula::not(normalize_universal(v));
            let ex = Formula {
                sort: u.sort.clone(),
                node: Node::Exists(*x, Box::new(inner)),
            };
            return Formula::not(ex);
        }
    };
    Formula {
        sort: u.sort.clone(),
        node,
    }
}

/// A formula is special for `x` when its free variables all lie in `x` and
/// no variable of `x` is ever quantified.
pub fn is_special(u: &Formula, x: &VarContext) -> bool {
    u.free_vars().iter().all(|&v| x.contains(v)) && u.bound_vars().iter().all(|&v| !x.contains(v))
}

/// A system of formulas of one sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSet {
    sort: VarContext,
    formulas: Vec<Formula>,
}

impl FormulaSet {
    pub fn new(sort: VarContext, formulas: Vec<Formula>) -> Result<FormulaSet> {
        if let Some(bad) = formulas.iter().find(|u| u.sort != sort) {
            return Err(Error::SortMismatch(format!(
                "formula of sort {} in a set of sort {sort}",
                bad.sort
            )));
        }
        Ok(FormulaSet { sort, formulas })
    }

    pub fn sort(&self) -> &VarContext {
        &self.sort
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, u: &Formula) -> bool {
        self.formulas.contains(u)
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn sub<'b>(&'b self, u: &'b Formula) -> FormulaDisplay<'b> {
        FormulaDisplay {
            formula: u,
            sig: self.sig,
        }
    }
}

/// True when the printed form ends in an unparenthesized quantifier body.
fn is_quantifier(u: &Formula) -> bool {
    match &u.node {
        Node::Exists(..) | Node::Forall(..) => true,
        Node::Not(v) => is_quantifier(v),
        _ => false,
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, u: &Formula, wrap: bool| {
            if wrap {
                write!(f, "({})", self.sub(u))
            } else {
                write!(f, "{}", self.sub(u))
            }
        };
        match &self.formula.node {
            Node::Eq(a, b) => write!(f, "{} == {}", a.display(self.sig), b.display(self.sig)),
            Node::Not(u) => {
                f.write_str("!")?;
                paren(
                    f,
                    u,
                    !(matches!(u.node, Node::Not(_) | Node::Subst(..)) || is_quantifier(u)),
                )
            }
            Node::And(u, v) => {
                paren(f, u, matches!(u.node, Node::Or(..)) || is_quantifier(u))?;
                f.write_str(" & ")?;
                paren(f, v, matches!(v.node, Node::And(..) | Node::Or(..)) || is_quantifier(v))
            }
            Node::Or(u, v) => {
                paren(f, u, is_quantifier(u))?;
                f.write_str(" | ")?;
                paren(f, v, matches!(v.node, Node::Or(..)) || is_quantifier(v))
            }
            Node::Exists(x, u) => write!(f, "E {x} . {}", self.sub(u)),
            Node::Forall(x, u) => write!(f, "A {x} . {}", self.sub(u)),
            Node::Subst(s, u) => write!(f, "{}({})", s.display(self.sig), self.sub(u)),
        }
    }
}

/// Shorthand for `u.display(sig).to_string()`.
pub fn format_formula(u: &Formula, sig: &Signature) -> String {
    u.display(sig).to_string()
}

/// Parses a formula of the given sort, desugaring universal quantifiers.
///
/// ```text
/// formula := '(' formula ')' | term '==' term | '!' formula
///          | formula '&' formula | formula '|' formula
///          | 'E' var '.' formula | 'A' var '.' formula
///          | '[' var ':=' term {',' var ':=' term} ']' formula
/// ```
///
/// `!` and substitution prefixes bind tightest, then `&`, then `|`;
/// quantifier bodies extend as far right as possible.
pub fn parse_formula(text: &str, sort: &VarContext, sig: &Signature) -> Result<Formula> {
    Ok(normalize_universal(&parse_formula_surface(text, sort, sig)?))
}

/// Like [`parse_formula`] but keeps `A x .` nodes.
pub fn parse_formula_surface(text: &str, sort: &VarContext, sig: &Signature) -> Result<Formula> {
    let mut p = FormulaParser {
        cur: Cursor::new(text)?,
        sig,
    };
    let u = p.or(sort)?;
    p.cur.expect_end()?;
    Ok(u)
}

struct FormulaParser<'a> {
    cur: Cursor,
    sig: &'a Signature,
}

impl FormulaParser<'_> {
    fn or(&mut self, sort: &VarContext) -> Result<Formula> {
        let mut u = self.and(sort)?;
        while self.cur.eat(&Tok::Pipe) {
            let v = self.and(sort)?;
            u = Formula::or(u, v)?;
        }
        Ok(u)
    }

    fn and(&mut self, sort: &VarContext) -> Result<Formula> {
        let mut u = self.unary(sort)?;
        while self.cur.eat(&Tok::Amp) {
            let v = self.unary(sort)?;
            u = Formula::and(u, v)?;
        }
        Ok(u)
    }

    fn unary(&mut self, sort: &VarContext) -> Result<Formula> {
        match self.cur.peek().clone() {
            Tok::Bang => {
                self.cur.bump();
                Ok(Formula::not(self.unary(sort)?))
            }
            Tok::LParen => {
                self.cur.bump();
                let u = self.or(sort)?;
                self.cur.expect(&Tok::RParen)?;
                Ok(u)
            }
            Tok::LBracket => self.subst(sort),
            Tok::Ident(q) if (q == "E" || q == "A") && matches!(self.cur.peek2(), Tok::Ident(_)) => {
                self.cur.bump();
                let (pos, name) = self.cur.expect_ident()?;
                let x = Var::parse(&name).ok_or_else(|| Error::syntax(pos, format!("`{name}` is not a variable")))?;
                self.cur.expect(&Tok::Dot)?;
                let body = self.or(sort)?;
                if q == "E" {
                    Formula::exists(x, body)
                } else {
                    Formula::forall(x, body)
                }
            }
            _ => {
                let w = parse_term_at(&mut self.cur, Some(sort), self.sig)?;
                self.cur.expect(&Tok::EqEq)?;
                let w2 = parse_term_at(&mut self.cur, Some(sort), self.sig)?;
                Formula::equality(sort, w, w2)
            }
        }
    }

    fn subst(&mut self, sort: &VarContext) -> Result<Formula> {
        self.cur.expect(&Tok::LBracket)?;
        let mut pairs = Vec::new();
        loop {
            let (pos, name) = self.cur.expect_ident()?;
            let v = Var::parse(&name).ok_or_else(|| Error::syntax(pos, format!("`{name}` is not a variable")))?;
            self.cur.expect(&Tok::Assign)?;
            let t = parse_term_at(&mut self.cur, Some(sort), self.sig)?;
            pairs.push((v, t));
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        self.cur.expect(&Tok::RBracket)?;
        let map = TermMap::from_pairs(sort.clone(), pairs)?;
        let body = self.unary(map.source())?;
        Formula::subst(map, body)
    }
}
