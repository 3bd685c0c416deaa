//! The value algebra of all subsets of the affine spaces over a finite
//! algebra: value sets, cylindrification, pullback along term maps, the
//! evaluation map, logical kernels and theories.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::algebra::{FiniteAlgebra, Point, PointSpace};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaSet, Node};
use crate::fragment::{FNode, Fragment, FragmentTable};
use crate::terms::{Term, TermMap, Var, VarContext};
use crate::Limits;

/// A subset of one affine space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValueSet {
    space: PointSpace,
    bits: BitSet,
}

impl ValueSet {
    pub fn empty(space: PointSpace) -> ValueSet {
        let bits = BitSet::new(space.len());
        ValueSet { space, bits }
    }

    pub fn full(space: PointSpace) -> ValueSet {
        let bits = BitSet::full(space.len());
        ValueSet { space, bits }
    }

    pub fn from_indices(space: PointSpace, indices: impl IntoIterator<Item = usize>) -> ValueSet {
        let bits = BitSet::from_indices(space.len(), indices);
        ValueSet { space, bits }
    }

    pub fn from_points<'a>(space: PointSpace, points: impl IntoIterator<Item = &'a Point>) -> Result<ValueSet> {
        let mut out = ValueSet::empty(space);
        for p in points {
            let idx = out
                .space
                .index(p)
                .filter(|_| p.values().iter().all(|&a| a < out.space.base()))
                .ok_or_else(|| {
                    Error::ContextMismatch(format!("point {p} is not in the space over {}", out.space.ctx()))
                })?;
            out.bits.insert(idx);
        }
        Ok(out)
    }

    /// Wraps raw bits; their length must equal the space cardinality.
    pub fn from_bits(space: PointSpace, bits: BitSet) -> ValueSet {
        assert_eq!(space.len(), bits.len(), "bit length differs from space size");
        ValueSet { space, bits }
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn ctx(&self) -> &VarContext {
        self.space.ctx()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn into_bits(self) -> BitSet {
        self.bits
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.space.index(p).is_some_and(|i| self.bits.contains(i))
    }

    pub fn insert(&mut self, idx: usize) {
        self.bits.insert(idx);
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.bits.iter().map(|i| self.space.point(i))
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn complement(&self) -> ValueSet {
        ValueSet {
            space: self.space.clone(),
            bits: self.bits.complement(),
        }
    }

    pub fn intersection(&self, other: &ValueSet) -> ValueSet {
        self.same_space(other);
        ValueSet {
            space: self.space.clone(),
            bits: self.bits.intersection(&other.bits),
        }
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        self.same_space(other);
        ValueSet {
            space: self.space.clone(),
            bits: self.bits.union(&other.bits),
        }
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.same_space(other);
        self.bits.is_subset(&other.bits)
    }

    fn same_space(&self, other: &ValueSet) {
        assert_eq!(self.space, other.space, "value sets over different spaces");
    }

    /// Cylindrification along `x`.
    pub fn quantify_exists(&self, x: Var) -> Result<ValueSet> {
        quantify_exists(self, x)
    }

    /// Projection onto a sub-context: existentially quantifies the other
    /// coordinates and reads the result over `sub`.
    pub fn project_onto(&self, sub: &VarContext) -> Result<ValueSet> {
        if !sub.is_subset(self.ctx()) {
            return Err(Error::ContextMismatch(format!("{sub} is not within {}", self.ctx())));
        }
        let mut a = self.clone();
        for &x in self.ctx().vars() {
            if !sub.contains(x) {
                a = quantify_exists(&a, x)?;
            }
        }
        let target = PointSpace::new(sub.clone(), self.space.base())?;
        let pos: Vec<usize> = sub
            .vars()
            .iter()
            .map(|&v| self.ctx().position(v).expect("subset"))
            .collect();
        let mut full = vec![0; self.ctx().len()];
        let bits = BitSet::from_bools((0..target.len()).map(|i| {
            for (k, c) in target.coords(i).into_iter().enumerate() {
                full[pos[k]] = c;
            }
            a.bits.contains(self.space.index_of(&full))
        }));
        Ok(ValueSet { space: target, bits })
    }

    /// Sorted point tuples.
    pub fn to_tuples(&self) -> Vec<Vec<usize>> {
        self.bits.iter().map(|i| self.space.coords(i)).collect()
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.bits.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.space.point(i))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}^{}", self, self.space.base(), self.space.ctx())
    }
}

/// `{ mu | some nu in A agrees with mu off x }`.
pub fn quantify_exists(a: &ValueSet, x: Var) -> Result<ValueSet> {
    let pos = a
        .space
        .ctx()
        .position(x)
        .ok_or_else(|| Error::UnboundVariable(format!("{x} (not in {})", a.space.ctx())))?;
    Ok(ValueSet {
        space: a.space.clone(),
        bits: cylinder(&a.bits, &a.space, pos),
    })
}

fn cylinder(bits: &BitSet, space: &PointSpace, pos: usize) -> BitSet {
    let n = space.base();
    let stride = space.stride(pos);
    let block = stride * n;
    let mut out = BitSet::new(space.len());
    for start in (0..space.len()).step_by(block) {
        for off in 0..stride {
            let base = start + off;
            if (0..n).any(|a| bits.contains(base + a * stride)) {
                for a in 0..n {
                    out.insert(base + a * stride);
                }
            }
        }
    }
    out
}

/// Values of `t` at every point of `space`, in index order.
pub fn term_values(t: &Term, space: &PointSpace, h: &FiniteAlgebra) -> Result<Vec<usize>> {
    match t {
        Term::Var(v) => {
            let pos = space
                .ctx()
                .position(*v)
                .ok_or_else(|| Error::UnboundVariable(format!("{v} (not in {})", space.ctx())))?;
            Ok((0..space.len()).map(|i| space.coord(i, pos)).collect())
        }
        Term::Const(c) => {
            let a = h
                .const_value(*c)
                .ok_or_else(|| Error::SignatureMismatch(format!("constant #{c} not in algebra {}", h.name())))?;
            Ok(vec![a; space.len()])
        }
        Term::App(op, args) => {
            let sym = h.signature().ops().get(*op);
            if sym.map(|s| s.arity) != Some(args.len()) {
                return Err(Error::SignatureMismatch(format!(
                    "operation #{op}/{} not in algebra {}",
                    args.len(),
                    h.name()
                )));
            }
            let cols = args
                .iter()
                .map(|a| term_values(a, space, h))
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(h, *op, &cols, space.len()))
        }
    }
}

fn combine(h: &FiniteAlgebra, op: usize, cols: &[Vec<usize>], len: usize) -> Vec<usize> {
    let n = h.size();
    let table = h.table(op);
    (0..len)
        .map(|i| table[cols.iter().fold(0, |acc, c| acc * n + c[i])])
        .collect()
}

/// For each point `mu` of the target space of `s`, the source-space index of
/// `mu ∘ s`.
pub fn pullback_index_map(s: &TermMap, h: &FiniteAlgebra, limits: &Limits) -> Result<Vec<usize>> {
    let target = PointSpace::with_limit(s.target().clone(), h.size(), limits.max_space)?;
    let source = PointSpace::with_limit(s.source().clone(), h.size(), limits.max_space)?;
    let mut out = vec![0usize; target.len()];
    for (j, t) in s.images().iter().enumerate() {
        let stride = source.stride(j);
        for (o, v) in out.iter_mut().zip(term_values(t, &target, h)?) {
            *o += v * stride;
        }
    }
    Ok(out)
}

/// `s_* A = { mu over target(s) | mu ∘ s ∈ A }` for `A` over `source(s)`.
pub fn pullback_substitution(a: &ValueSet, s: &TermMap, h: &FiniteAlgebra) -> Result<ValueSet> {
    pullback_with(a, s, h, &Limits::default())
}

pub fn pullback_with(a: &ValueSet, s: &TermMap, h: &FiniteAlgebra, limits: &Limits) -> Result<ValueSet> {
    if a.ctx() != s.source() {
        return Err(Error::ContextMismatch(format!(
            "set over {} pulled back along a map with source {}",
            a.ctx(),
            s.source()
        )));
    }
    if a.space.base() != h.size() {
        return Err(Error::ContextMismatch(format!(
            "set over a carrier of size {} used with algebra {}",
            a.space.base(),
            h.name()
        )));
    }
    let map = pullback_index_map(s, h, limits)?;
    let target = PointSpace::with_limit(s.target().clone(), h.size(), limits.max_space)?;
    let bits = BitSet::from_bools(map.iter().map(|&j| a.bits.contains(j)));
    Ok(ValueSet { space: target, bits })
}

fn check_window(ctx: &VarContext, limits: &Limits) -> Result<()> {
    if let Some(v) = ctx.vars().iter().find(|v| v.index() > limits.window) {
        return Err(Error::LimitExceeded {
            what: "variable window",
            size: v.index() as u128,
            limit: limits.window as u128,
        });
    }
    Ok(())
}

/// Set of points of `H^sort(u)` satisfying `u`.
pub fn val(u: &Formula, h: &FiniteAlgebra) -> Result<ValueSet> {
    val_with(u, h, &Limits::default())
}

pub fn val_with(u: &Formula, h: &FiniteAlgebra, limits: &Limits) -> Result<ValueSet> {
    eval_node(u, h, limits, &mut |_| None, &mut |_, _| {})
}

fn eval_node(
    u: &Formula,
    h: &FiniteAlgebra,
    limits: &Limits,
    lookup: &mut dyn FnMut(&Formula) -> Option<ValueSet>,
    store: &mut dyn FnMut(&Formula, &ValueSet),
) -> Result<ValueSet> {
    if let Some(v) = lookup(u) {
        return Ok(v);
    }
    check_window(u.sort(), limits)?;
    let space = PointSpace::with_limit(u.sort().clone(), h.size(), limits.max_space)?;
    let out = match u.node() {
        Node::Eq(a, b) => {
            let va = term_values(a, &space, h)?;
            let vb = term_values(b, &space, h)?;
            let bits = BitSet::from_bools(va.iter().zip(&vb).map(|(x, y)| x == y));
            ValueSet { space, bits }
        }
        Node::Not(v) => eval_node(v, h, limits, lookup, store)?.complement(),
        Node::And(v, w) => {
            let a = eval_node(v, h, limits, lookup, store)?;
            a.intersection(&eval_node(w, h, limits, lookup, store)?)
        }
        Node::Or(v, w) => {
            let a = eval_node(v, h, limits, lookup, store)?;
            a.union(&eval_node(w, h, limits, lookup, store)?)
        }
        Node::Exists(x, v) => quantify_exists(&eval_node(v, h, limits, lookup, store)?, *x)?,
        Node::Forall(x, v) => quantify_exists(&eval_node(v, h, limits, lookup, store)?.complement(), *x)?.complement(),
        Node::Subst(s, v) => {
            check_window(s.source(), limits)?;
            pullback_with(&eval_node(v, h, limits, lookup, store)?, s, h, limits)?
        }
    };
    store(u, &out);
    Ok(out)
}

/// Memoizing evaluator for one algebra. The cache is invisible: results
/// equal those of [`val_with`].
pub struct Evaluator<'a> {
    h: &'a FiniteAlgebra,
    limits: Limits,
    cache: Mutex<HashMap<Formula, ValueSet>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(h: &'a FiniteAlgebra) -> Self {
        Evaluator::with_limits(h, Limits::default())
    }

    pub fn with_limits(h: &'a FiniteAlgebra, limits: Limits) -> Self {
        Evaluator {
            h,
            limits,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.h
    }

    pub fn val(&self, u: &Formula) -> Result<ValueSet> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(u) {
            return Ok(v.clone());
        }
        let mut fresh: Vec<(Formula, ValueSet)> = Vec::new();
        let out = {
            let cache = self.cache.lock().expect("cache lock");
            let mut lookup = |f: &Formula| cache.get(f).cloned();
            let mut store = |f: &Formula, v: &ValueSet| fresh.push((f.clone(), v.clone()));
            eval_node(u, self.h, &self.limits, &mut lookup, &mut store)?
        };
        self.cache.lock().expect("cache lock").extend(fresh);
        Ok(out)
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }
}

/// Is `mu` in `val(u)`?
pub fn lker_contains(mu: &Point, u: &Formula, h: &FiniteAlgebra) -> Result<bool> {
    if mu.ctx() != u.sort() {
        return Err(Error::ContextMismatch(format!(
            "point over {} and formula of sort {}",
            mu.ctx(),
            u.sort()
        )));
    }
    let a = val(u, h)?;
    let idx = a
        .space
        .index(mu)
        .filter(|_| mu.values().iter().all(|&v| v < h.size()))
        .ok_or_else(|| Error::ContextMismatch(format!("point {mu} outside the carrier of {}", h.name())))?;
    Ok(a.contains(idx))
}

/// Is `u` true at every point?
pub fn theory_contains(h: &FiniteAlgebra, u: &Formula) -> Result<bool> {
    Ok(val(u, h)?.is_full())
}

/// Value sets of every formula in a fragment, computed bottom-up.
#[derive(Debug, Clone)]
pub struct FragmentValues {
    fragment: Fragment,
    space: PointSpace,
    bits: Vec<BitSet>,
}

impl FragmentValues {
    pub fn compute(table: &FragmentTable, h: &FiniteAlgebra) -> Result<FragmentValues> {
        FragmentValues::compute_with(table, h, &Limits::default())
    }

    pub fn compute_with(table: &FragmentTable, h: &FiniteAlgebra, limits: &Limits) -> Result<FragmentValues> {
        let frag = table.fragment();
        let fsig = frag.signature();
        if fsig.ops() != h.signature().ops() {
            return Err(Error::SignatureMismatch(format!(
                "fragment operations {} vs algebra {} ({})",
                fsig.describe_ops(),
                h.name(),
                h.signature().describe_ops()
            )));
        }
        if frag.policy() == crate::ConstantPolicy::Include && fsig.consts() != h.signature().consts() {
            return Err(Error::SignatureMismatch(format!(
                "fragment constants {:?} vs algebra {} constants {:?}",
                fsig.consts(),
                h.name(),
                h.signature().consts()
            )));
        }
        check_window(frag.sort(), limits)?;
        let space = PointSpace::with_limit(frag.sort().clone(), h.size(), limits.max_space)?;

        // term columns, built in table order so arguments come first
        let mut cols: Vec<Vec<usize>> = Vec::with_capacity(table.terms().len());
        let mut index: HashMap<&Term, usize> = HashMap::new();
        for t in table.terms() {
            let col = match t {
                Term::App(op, args) => {
                    let args: Vec<Vec<usize>> = args.iter().map(|a| cols[index[a]].clone()).collect();
                    combine(h, *op, &args, space.len())
                }
                _ => term_values(t, &space, h)?,
            };
            index.insert(t, cols.len());
            cols.push(col);
        }

        let mut bits: Vec<BitSet> = Vec::with_capacity(table.len());
        for node in table.nodes() {
            let b = match *node {
                FNode::Eq(a, b) => {
                    let (ca, cb) = (&cols[a as usize], &cols[b as usize]);
                    BitSet::from_bools(ca.iter().zip(cb).map(|(x, y)| x == y))
                }
                FNode::Not(u) => bits[u as usize].complement(),
                FNode::And(u, v) => bits[u as usize].intersection(&bits[v as usize]),
                FNode::Or(u, v) => bits[u as usize].union(&bits[v as usize]),
                FNode::Exists(x, u) => {
                    let pos = space.ctx().position(x).expect("fragment quantifies sort variables");
                    cylinder(&bits[u as usize], &space, pos)
                }
            };
            bits.push(b);
        }
        Ok(FragmentValues {
            fragment: frag.clone(),
            space,
            bits,
        })
    }

    pub fn fragment(&self) -> &Fragment {
        &self.fragment
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    /// Number of formulas.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self, i: usize) -> &BitSet {
        &self.bits[i]
    }

    pub fn value(&self, i: usize) -> ValueSet {
        ValueSet {
            space: self.space.clone(),
            bits: self.bits[i].clone(),
        }
    }

    /// Formulas true at point `idx`, as bits over the fragment.
    pub fn kernel_bits(&self, idx: usize) -> BitSet {
        BitSet::from_bools(self.bits.iter().map(|b| b.contains(idx)))
    }

    /// Formulas true everywhere.
    pub fn theory_bits(&self) -> BitSet {
        BitSet::from_bools(self.bits.iter().map(|b| b.is_full()))
    }

    /// Formulas whose value set contains `a`.
    pub fn closure_bits(&self, a: &BitSet) -> BitSet {
        BitSet::from_bools(self.bits.iter().map(|b| a.is_subset(b)))
    }

    /// Intersection of the value sets of the selected formulas.
    pub fn solution_bits(&self, t: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.space.len());
        for i in t.iter() {
            out.intersect_with(&self.bits[i]);
        }
        out
    }

    /// Indices of formulas with pairwise distinct value sets, first
    /// occurrence kept.
    pub fn distinct(&self) -> Vec<usize> {
        let mut seen: HashMap<&BitSet, ()> = HashMap::new();
        let mut out = Vec::new();
        for (i, b) in self.bits.iter().enumerate() {
            if seen.insert(b, ()).is_none() {
                out.push(i);
            }
        }
        out
    }
}

/// The fragment formulas true at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelView {
    pub point: Point,
    pub fragment: String,
    pub members: BitSet,
}

impl KernelView {
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }
}

fn point_index(mu: &Point, space: &PointSpace) -> Result<usize> {
    if mu.ctx() != space.ctx() {
        return Err(Error::ContextMismatch(format!(
            "point over {} but fragment sort {}",
            mu.ctx(),
            space.ctx()
        )));
    }
    if mu.values().iter().any(|&a| a >= space.base()) {
        return Err(Error::ContextMismatch(format!("point {mu} outside the carrier")));
    }
    Ok(space.index_of(mu.values()))
}

pub fn lker_restrict(mu: &Point, f: &Fragment, h: &FiniteAlgebra) -> Result<KernelView> {
    if mu.ctx() != f.sort() {
        return Err(Error::ContextMismatch(format!(
            "point over {} but fragment sort {}",
            mu.ctx(),
            f.sort()
        )));
    }
    let values = FragmentValues::compute(&f.build()?, h)?;
    lker_from_values(mu, &values)
}

pub fn lker_from_values(mu: &Point, values: &FragmentValues) -> Result<KernelView> {
    let idx = point_index(mu, &values.space)?;
    Ok(KernelView {
        point: mu.clone(),
        fragment: values.fragment.id(),
        members: values.kernel_bits(idx),
    })
}

/// Fragment members true at every point.
pub fn theory_restrict(h: &FiniteAlgebra, f: &Fragment) -> Result<FormulaSet> {
    let table = f.build()?;
    let values = FragmentValues::compute(&table, h)?;
    let formulas = values.theory_bits().iter().map(|i| table.formula(i)).collect();
    FormulaSet::new(f.sort().clone(), formulas)
}
