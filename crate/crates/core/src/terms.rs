//! Terms of the absolutely free algebra over a variable context, and term
//! maps (homomorphisms between free algebras given on generators).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Point};
use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};

/// A variable `<letter><index>`, e.g. `x1`, `y3`.
///
/// Variables are ordered by letter, then index. The letter `c` is reserved
/// for element constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    family: u8,
    index: u32,
}

impl Var {
    pub fn new(family: char, index: u32) -> Result<Var> {
        if !family.is_ascii_lowercase() || family == 'c' || index == 0 {
            return Err(Error::UnknownSymbol(format!("{family}{index}")));
        }
        Ok(Var {
            family: family as u8,
            index,
        })
    }

    /// Shorthand for `x<index>`.
    pub fn x(index: u32) -> Var {
        Var::new('x', index).expect("x-variables are always valid")
    }

    pub fn y(index: u32) -> Var {
        Var::new('y', index).expect("y-variables are always valid")
    }

    pub fn family(&self) -> char {
        self.family as char
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn parse(s: &str) -> Option<Var> {
        let mut chars = s.chars();
        let family = chars.next()?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return None;
        }
        Var::new(family, digits.parse().ok()?).ok()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family as char, self.index)
    }
}

/// An ordered set of variables: the sort of a formula, the coordinates of
/// a point space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarContext(Arc<[Var]>);

impl VarContext {
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        let set: BTreeSet<Var> = vars.into_iter().collect();
        VarContext(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        VarContext::new([])
    }

    /// `x1..xn`.
    pub fn window(n: u32) -> Self {
        VarContext::new((1..=n).map(Var::x))
    }

    /// Parses `x1,x2,y1`. The empty string and `-` denote the empty context.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "{}" {
            return Ok(VarContext::empty());
        }
        let s = s.trim_start_matches('{').trim_end_matches('}');
        let mut seen = BTreeSet::new();
        for part in s.split(',') {
            let part = part.trim();
            let v = Var::parse(part).ok_or_else(|| Error::UnknownSymbol(part.to_string()))?;
            if !seen.insert(v) {
                return Err(Error::ContextMismatch(format!("duplicate variable {v}")));
            }
        }
        Ok(VarContext::new(seen))
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, v: Var) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.position(v).is_some()
    }

    pub fn is_subset(&self, other: &VarContext) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &VarContext) -> VarContext {
        VarContext::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn without(&self, other: &VarContext) -> VarContext {
        VarContext::new(self.0.iter().copied().filter(|&v| !other.contains(v)))
    }

    /// True when every variable has index at most `n`.
    pub fn fits_window(&self, n: u32) -> bool {
        self.0.iter().all(|v| v.index <= n)
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Operation symbols (arity >= 1), constant symbols, and the defining
/// identities of a variety.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSymbol>,
    consts: Vec<String>,
    identities: Vec<(Term, Term)>,
}

fn valid_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && name != "E"
        && name != "A"
        && Var::parse(name).is_none()
        && !name.as_bytes()[0].is_ascii_digit()
}

impl Signature {
    pub fn new<S: Into<String>>(
        ops: impl IntoIterator<Item = (S, usize)>,
        consts: impl IntoIterator<Item = S>,
    ) -> Result<Signature> {
        let ops: Vec<OpSymbol> = ops
            .into_iter()
            .map(|(name, arity)| OpSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        let consts: Vec<String> = consts.into_iter().map(Into::into).collect();
        let mut names = BTreeSet::new();
        for op in &ops {
            if op.arity == 0 {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` has arity 0; declare it as a constant",
                    op.name
                )));
            }
            if !valid_symbol_name(&op.name) {
                return Err(Error::InvalidAlgebra(format!("invalid operation name `{}`", op.name)));
            }
            if !names.insert(op.name.clone()) {
                return Err(Error::InvalidAlgebra(format!("duplicate symbol `{}`", op.name)));
            }
        }
        for c in &consts {
            if !valid_symbol_name(c) {
                return Err(Error::InvalidAlgebra(format!("invalid constant name `{c}`")));
            }
            if !names.insert(c.clone()) {
                return Err(Error::ConstantCollision(c.clone()));
            }
        }
        Ok(Signature {
            ops,
            consts,
            identities: Vec::new(),
        })
    }

    /// Attaches identities; each side must be well formed over this signature.
    pub fn with_identities(mut self, identities: Vec<(Term, Term)>) -> Result<Signature> {
        for (l, r) in &identities {
            l.check(&self)?;
            r.check(&self)?;
        }
        self.identities = identities;
        Ok(self)
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn consts(&self) -> &[String] {
        &self.consts
    }

    pub fn identities(&self) -> &[(Term, Term)] {
        &self.identities
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.consts.iter().position(|c| c == name)
    }

    pub(crate) fn push_const(&mut self, name: String) -> Result<usize> {
        if self.const_index(&name).is_some() || self.op_index(&name).is_some() {
            return Err(Error::ConstantCollision(name));
        }
        self.consts.push(name);
        Ok(self.consts.len() - 1)
    }

    /// Same operation and constant symbols (identities are not compared).
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.ops == other.ops && self.consts == other.consts
    }

    /// The signature with its constants and identities dropped.
    pub fn constant_free(&self) -> Signature {
        Signature {
            ops: self.ops.clone(),
            consts: Vec::new(),
            identities: Vec::new(),
        }
    }

    pub fn describe_ops(&self) -> String {
        self.ops
            .iter()
            .map(|o| format!("{}/{}", o.name, o.arity))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A term over some variable context. Operation and constant symbols are
/// indices into a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(usize),
    App(usize, Vec<Term>),
}

impl Term {
    /// Number of operation symbols (constants and variables count zero).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> VarContext {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        VarContext::new(s)
    }

    pub fn is_over(&self, ctx: &VarContext) -> bool {
        match self {
            Term::Var(v) => ctx.contains(*v),
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(|a| a.is_over(ctx)),
        }
    }

    /// Checks symbol indices and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Const(c) if *c < sig.consts.len() => Ok(()),
            Term::Const(c) => Err(Error::SignatureMismatch(format!("constant #{c} not in signature"))),
            Term::App(op, args) => {
                let sym = sig
                    .ops
                    .get(*op)
                    .ok_or_else(|| Error::SignatureMismatch(format!("operation #{op} not in signature")))?;
                if sym.arity != args.len() {
                    return Err(Error::Arity {
                        op: sym.name.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Evaluates with an arbitrary variable lookup.
    pub fn eval_with(&self, h: &FiniteAlgebra, lookup: &dyn Fn(Var) -> Option<usize>) -> Result<usize> {
        match self {
            Term::Var(v) => lookup(*v).ok_or_else(|| Error::UnboundVariable(v.to_string())),
            Term::Const(c) => h
                .const_value(*c)
                .ok_or_else(|| Error::SignatureMismatch(format!("constant #{c} not in algebra {}", h.name()))),
            Term::App(op, args) => {
                if *op >= h.signature().ops.len() || h.signature().ops[*op].arity != args.len() {
                    return Err(Error::SignatureMismatch(format!(
                        "operation #{op}/{} not in algebra {}",
                        args.len(),
                        h.name()
                    )));
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(a.eval_with(h, lookup)?);
                }
                Ok(h.apply(*op, &vals))
            }
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::Const(c) => Term::Const(*c),
            Term::App(op, args) => Term::App(*op, args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => match self.sig.consts.get(*c) {
                Some(name) => f.write_str(name),
                None => write!(f, "#const{c}"),
            },
            Term::App(op, args) => {
                match self.sig.ops.get(*op) {
                    Some(sym) => f.write_str(&sym.name)?,
                    None => write!(f, "#op{op}")?,
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", a.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses a term over `ctx`.
///
/// Grammar: `term := var | const | opname '(' term {',' term} ')'`.
pub fn parse_term(text: &str, ctx: &VarContext, sig: &Signature) -> Result<Term> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term_at(&mut cur, Some(ctx), sig)?;
    cur.expect_end()?;
    Ok(t)
}

/// Parses a term without a context; every well-formed variable is accepted.
pub fn parse_term_open(text: &str, sig: &Signature) -> Result<Term> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term_at(&mut cur, None, sig)?;
    cur.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_term_at(cur: &mut Cursor, ctx: Option<&VarContext>, sig: &Signature) -> Result<Term> {
    let (pos, name) = cur.expect_ident()?;
    if cur.peek() == &Tok::LParen {
        let op = match sig.op_index(&name) {
            Some(op) => op,
            None if sig.const_index(&name).is_some() => {
                return Err(Error::Arity {
                    op: name,
                    expected: 0,
                    found: 1,
                })
            }
            None => return Err(Error::UnknownSymbol(name)),
        };
        cur.bump();
        let mut args = vec![parse_term_at(cur, ctx, sig)?];
        while cur.eat(&Tok::Comma) {
            args.push(parse_term_at(cur, ctx, sig)?);
        }
        cur.expect(&Tok::RParen)?;
        let arity = sig.ops[op].arity;
        if args.len() != arity {
            return Err(Error::Arity {
                op: name,
                expected: arity,
                found: args.len(),
            });
        }
        return Ok(Term::App(op, args));
    }
    if let Some(c) = sig.const_index(&name) {
        return Ok(Term::Const(c));
    }
    if let Some(v) = Var::parse(&name) {
        return match ctx {
            Some(ctx) if !ctx.contains(v) => Err(Error::UnboundVariable(name)),
            _ => Ok(Term::Var(v)),
        };
    }
    if let Some(op) = sig.op_index(&name) {
        return Err(Error::Arity {
            op: name,
            expected: sig.ops[op].arity,
            found: 0,
        });
    }
    let _ = pos;
    Err(Error::UnknownSymbol(name))
}

/// Value of `t` under the homomorphism extending `mu`.
pub fn eval_term(t: &Term, mu: &Point, h: &FiniteAlgebra) -> Result<usize> {
    t.eval_with(h, &|v| mu.get(v))
}

/// A homomorphism `W(source) -> W(target)` given on generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermMap {
    source: VarContext,
    target: VarContext,
    images: Vec<Term>,
}

impl TermMap {
    /// `images[i]` is the image of the i-th variable of `source`.
    pub fn new(source: VarContext, target: VarContext, images: Vec<Term>) -> Result<TermMap> {
        if images.len() != source.len() {
            return Err(Error::ContextMismatch(format!(
                "term map needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for (v, t) in source.vars().iter().zip(&images) {
            if !t.is_over(&target) {
                return Err(Error::ContextMismatch(format!(
                    "image of {v} uses variables outside target {target}"
                )));
            }
        }
        Ok(TermMap { source, target, images })
    }

    /// Builds a map from `(var, image)` pairs; the source is the set of
    /// assigned variables.
    pub fn from_pairs(target: VarContext, pairs: impl IntoIterator<Item = (Var, Term)>) -> Result<TermMap> {
        let mut pairs: Vec<(Var, Term)> = pairs.into_iter().collect();
        pairs.sort_by_key(|(v, _)| *v);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::ContextMismatch(format!("variable {} assigned twice", w[0].0)));
            }
        }
        let source = VarContext::new(pairs.iter().map(|(v, _)| *v));
        TermMap::new(source, target, pairs.into_iter().map(|(_, t)| t).collect())
    }

    pub fn identity(ctx: &VarContext) -> TermMap {
        TermMap {
            source: ctx.clone(),
            target: ctx.clone(),
            images: ctx.vars().iter().map(|&v| Term::Var(v)).collect(),
        }
    }

    pub fn source(&self) -> &VarContext {
        &self.source
    }

    pub fn target(&self) -> &VarContext {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image(&self, v: Var) -> Option<&Term> {
        self.source.position(v).map(|i| &self.images[i])
    }

    /// Same as `self` except that `v` is sent to `t`.
    pub fn with_image(&self, v: Var, t: Term) -> Result<TermMap> {
        let i = self
            .source
            .position(v)
            .ok_or_else(|| Error::ContextMismatch(format!("{v} not in source {}", self.source)))?;
        let mut images = self.images.clone();
        images[i] = t;
        TermMap::new(self.source.clone(), self.target.clone(), images)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .source
                .vars()
                .iter()
                .zip(&self.images)
                .all(|(v, t)| *t == Term::Var(*v))
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermMapDisplay<'a> {
        TermMapDisplay { map: self, sig }
    }
}

pub struct TermMapDisplay<'a> {
    map: &'a TermMap,
    sig: &'a Signature,
}

impl fmt::Display for TermMapDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, t)) in self.map.source.vars().iter().zip(&self.map.images).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:={}", t.display(self.sig))?;
        }
        f.write_str("]")
    }
}

/// Applies `s` to a term over its source context.
pub fn apply_term_map(s: &TermMap, t: &Term) -> Result<Term> {
    if !t.is_over(&s.source) {
        return Err(Error::ContextMismatch(format!(
            "term uses variables outside the source {}",
            s.source
        )));
    }
    Ok(t.substitute(&|v| s.image(v).cloned().expect("checked above")))
}

/// `s2 ∘ s1`: first `s1`, then `s2`.
pub fn compose_term_maps(s2: &TermMap, s1: &TermMap) -> Result<TermMap> {
    if s1.target != s2.source {
        return Err(Error::ContextMismatch(format!(
            "cannot compose: target {} vs source {}",
            s1.target, s2.source
        )));
    }
    let images = s1
        .images
        .iter()
        .map(|t| apply_term_map(s2, t))
        .collect::<Result<Vec<_>>>()?;
    TermMap::new(s1.source.clone(), s2.target.clone(), images)
}

/// The map `x ↦ c_{mu(x)}` for `x` in the point's context, identity on the
/// rest of `window`.
pub fn point_substitution_map(mu: &Point, window: &VarContext, h: &FiniteAlgebra) -> Result<TermMap> {
    if !mu.ctx().is_subset(window) {
        return Err(Error::ContextMismatch(format!(
            "point context {} is not within window {window}",
            mu.ctx()
        )));
    }
    let images = window
        .vars()
        .iter()
        .map(|&v| match mu.get(v) {
            Some(a) => h
                .element_const(a)
                .map(Term::Const)
                .ok_or_else(|| Error::ConstantsMissing(h.name().to_string())),
            None => Ok(Term::Var(v)),
        })
        .collect::<Result<Vec<_>>>()?;
    TermMap::new(window.clone(), window.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn ctx(s: &str) -> VarContext {
        VarContext::parse(s).unwrap()
    }

    fn add_sig() -> Signature {
        Signature::new([("add", 2)], Vec::<&str>::new()).unwrap()
    }

    #[test]
    fn var_parsing() {
        assert_eq!(Var::parse("x1"), Some(Var::x(1)));
        assert_eq!(Var::parse("y12"), Some(Var::new('y', 12).unwrap()));
        assert_eq!(Var::parse("c0"), None);
        assert_eq!(Var::parse("x0"), None);
        assert_eq!(Var::parse("x01"), None);
        assert_eq!(Var::parse("add"), None);
        assert!(Var::x(2) < Var::x(10));
        assert!(Var::x(9) < Var::y(1));
    }

    #[test]
    fn context_order_is_canonical() {
        let c = ctx("y1,x2,x1");
        assert_eq!(c.to_string(), "{x1,x2,y1}");
        assert!(VarContext::parse("x1,x1").is_err());
        assert!(ctx("-").is_empty());
    }

    #[test]
    fn parse_examples() {
        let sig = add_sig();
        let c = ctx("x1,x2");
        let t = parse_term("add(x1,x2)", &c, &sig).unwrap();
        assert_eq!(t, Term::App(0, vec![Term::Var(Var::x(1)), Term::Var(Var::x(2))]));
        assert_eq!(parse_term("x1", &c, &sig).unwrap(), Term::Var(Var::x(1)));
        assert!(matches!(
            parse_term("add(x1)", &c, &sig),
            Err(Error::Arity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_term("mul(x1,x2)", &c, &sig),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_term("add(x1,x3)", &c, &sig),
            Err(Error::UnboundVariable(_))
        ));
        assert!(matches!(parse_term("add(x1,", &c, &sig), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("c0", &c, &sig), Err(Error::UnknownSymbol(_))));
        assert!(matches!(
            parse_term("add", &c, &sig),
            Err(Error::Arity { found: 0, .. })
        ));
    }

    #[test]
    fn signature_rejects_bad_names() {
        assert!(Signature::new([("x1", 2)], Vec::<&str>::new()).is_err());
        assert!(Signature::new([("add", 2), ("add", 1)], Vec::<&str>::new()).is_err());
        assert!(Signature::new([("add", 0)], Vec::<&str>::new()).is_err());
        assert!(matches!(
            Signature::new([("add", 2)], vec!["add"]),
            Err(Error::ConstantCollision(_))
        ));
    }

    #[test]
    fn eval_examples() {
        let z2 = builtin::cyclic(2);
        let z3 = builtin::cyclic(3);
        let c = ctx("x1,x2");
        let t = parse_term("add(x1,x2)", &c, z2.signature()).unwrap();
        assert_eq!(eval_term(&t, &Point::new(c.clone(), vec![1, 1]), &z2).unwrap(), 0);
        let t = parse_term("add(x1,x1)", &ctx("x1"), z3.signature()).unwrap();
        // table lookup: row 2, column 2 of the Z3 addition table
        let expected = z3.table(0)[2 * 3 + 2];
        assert_eq!(expected, 1);
        assert_eq!(eval_term(&t, &Point::new(ctx("x1"), vec![2]), &z3).unwrap(), expected);
        let t = Term::Var(Var::x(1));
        for a in 0..3 {
            assert_eq!(eval_term(&t, &Point::new(ctx("x1"), vec![a]), &z3).unwrap(), a);
        }
        let t = parse_term("add(x1,x2)", &c, z3.signature()).unwrap();
        assert!(matches!(
            eval_term(&t, &Point::new(ctx("x1"), vec![0]), &z3),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn apply_examples() {
        let sig = add_sig();
        let xs = ctx("x1,x2");
        let s = TermMap::from_pairs(xs.clone(), [(Var::y(1), parse_term("add(x1,x2)", &xs, &sig).unwrap())]).unwrap();
        let t = parse_term("add(y1,y1)", &ctx("y1"), &sig).unwrap();
        let r = apply_term_map(&s, &t).unwrap();
        assert_eq!(r.display(&sig).to_string(), "add(add(x1,x2),add(x1,x2))");

        let id = TermMap::identity(&xs);
        let t = parse_term("add(x2,add(x1,x2))", &xs, &sig).unwrap();
        assert_eq!(apply_term_map(&id, &t).unwrap(), t);

        let x4 = ctx("x1,x2,x3,x4");
        let s = TermMap::from_pairs(
            x4,
            [(Var::y(1), Term::Var(Var::x(1))), (Var::y(2), Term::Var(Var::x(2)))],
        )
        .unwrap();
        assert_eq!(apply_term_map(&s, &Term::Var(Var::y(1))).unwrap(), Term::Var(Var::x(1)));
        assert!(apply_term_map(&s, &Term::Var(Var::y(3))).is_err());
    }

    #[test]
    fn compose_examples() {
        let sig = add_sig();
        let zs = ctx("z1");
        let s1 = TermMap::from_pairs(ctx("x1"), [(Var::y(1), Term::Var(Var::x(1)))]).unwrap();
        let s2 = TermMap::from_pairs(zs.clone(), [(Var::x(1), parse_term("add(z1,z1)", &zs, &sig).unwrap())]).unwrap();
        let c = compose_term_maps(&s2, &s1).unwrap();
        assert_eq!(c.source(), &ctx("y1"));
        assert_eq!(c.image(Var::y(1)).unwrap().display(&sig).to_string(), "add(z1,z1)");
        assert_eq!(compose_term_maps(&s2, &TermMap::identity(&ctx("x1"))).unwrap(), s2);
        assert_eq!(compose_term_maps(&TermMap::identity(&ctx("x1")), &s1).unwrap(), s1);
        assert!(compose_term_maps(&s1, &s2).is_err());
    }

    #[test]
    fn point_substitution_examples() {
        let z2c = builtin::cyclic(2).adjoin_constants().unwrap();
        let sig = z2c.signature();
        let mu = Point::new(ctx("x1"), vec![1]);
        let s = point_substitution_map(&mu, &ctx("x1,y1"), &z2c).unwrap();
        assert_eq!(s.display(sig).to_string(), "[x1:=c1, y1:=y1]");

        let empty = Point::new(VarContext::empty(), vec![]);
        let w = ctx("x1,y1");
        assert!(point_substitution_map(&empty, &w, &z2c).unwrap().is_identity());

        let mu = Point::new(ctx("x1,x2"), vec![0, 1]);
        let s = point_substitution_map(&mu, &ctx("x1,x2,y1"), &z2c).unwrap();
        assert_eq!(s.display(sig).to_string(), "[x1:=c0, x2:=c1, y1:=y1]");

        assert!(matches!(
            point_substitution_map(&mu, &ctx("x1,x2"), &builtin::cyclic(2)),
            Err(Error::ConstantsMissing(_))
        ));
        assert!(matches!(
            point_substitution_map(&mu, &ctx("x1,y1"), &z2c),
            Err(Error::ContextMismatch(_))
        ));
    }
}
