//! Galois correspondence between formula sets and point sets, elementary
//! sets, point types, and comparison of algebras through their types.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{automorphisms, orbit_closure, FiniteAlgebra, Point, PointSpace};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaSet};
use crate::fragment::{ConstantPolicy, Fragment, FragmentTable};
use crate::semantics::{pullback_index_map, val_with, Evaluator, FragmentValues, ValueSet};
use crate::terms::{point_substitution_map, Term, VarContext};
use crate::Limits;

fn check_set(a: &ValueSet, f: &Fragment, h: &FiniteAlgebra) -> Result<()> {
    if a.ctx() != f.sort() {
        return Err(Error::ContextMismatch(format!(
            "set over {} but fragment sort {}",
            a.ctx(),
            f.sort()
        )));
    }
    if a.space().base() != h.size() {
        return Err(Error::ContextMismatch(format!(
            "set over a carrier of size {} used with {} (size {})",
            a.space().base(),
            h.name(),
            h.size()
        )));
    }
    Ok(())
}

/// `T^L`: points satisfying every formula of `T`.
pub fn solution_set(t: &FormulaSet, h: &FiniteAlgebra) -> Result<ValueSet> {
    solution_set_with(t, h, &Limits::default())
}

pub fn solution_set_with(t: &FormulaSet, h: &FiniteAlgebra, limits: &Limits) -> Result<ValueSet> {
    let space = PointSpace::with_limit(t.sort().clone(), h.size(), limits.max_space)?;
    let ev = Evaluator::with_limits(h, *limits);
    let mut out = ValueSet::full(space);
    for u in t.formulas() {
        out = out.intersection(&ev.val(u)?);
    }
    Ok(out)
}

/// `A^L` within a fragment: members whose value set contains `A`.
pub fn formula_closure(a: &ValueSet, f: &Fragment, h: &FiniteAlgebra) -> Result<FormulaSet> {
    check_set(a, f, h)?;
    let table = f.build()?;
    let values = FragmentValues::compute(&table, h)?;
    let bits = values.closure_bits(a.bits());
    FormulaSet::new(f.sort().clone(), bits.iter().map(|i| table.formula(i)).collect())
}

/// `A^LL` within a fragment.
pub fn double_closure(a: &ValueSet, f: &Fragment, h: &FiniteAlgebra) -> Result<ValueSet> {
    check_set(a, f, h)?;
    let sem = SemanticFragment::compute(f, h, &Limits::default())?;
    Ok(ValueSet::from_bits(
        a.space().clone(),
        sem.double_closure_bits(a.bits()),
    ))
}

/// Orbit closure under `Aut(H)`: what `A^LL` becomes once the fragment
/// separates everything it can.
pub fn elementary_closure_oracle(a: &ValueSet, h: &FiniteAlgebra) -> Result<ValueSet> {
    if a.space().base() != h.size() {
        return Err(Error::ContextMismatch(format!(
            "set over carrier {} vs {}",
            a.space().base(),
            h.size()
        )));
    }
    Ok(orbit_closure(a, h))
}

pub fn is_elementary(a: &ValueSet, f: &Fragment, h: &FiniteAlgebra) -> Result<bool> {
    Ok(&double_closure(a, f, h)? == a)
}

/// The family of value sets of a fragment, enumerated per exact weight
/// without building formulas. Same family as the formula-level enumeration.
#[derive(Debug, Clone)]
pub struct SemanticFragment {
    fragment: Fragment,
    space: PointSpace,
    sets: Vec<BitSet>,
}

impl SemanticFragment {
    pub fn compute(f: &Fragment, h: &FiniteAlgebra, limits: &Limits) -> Result<SemanticFragment> {
        let space = PointSpace::with_limit(f.sort().clone(), h.size(), limits.max_space)?;
        let sig = f.signature();
        if sig.ops() != h.signature().ops() {
            return Err(Error::SignatureMismatch(format!(
                "fragment ops {} vs {}",
                sig.describe_ops(),
                h.name()
            )));
        }
        let too_big = |n: usize| -> Result<()> {
            if n > limits.max_fragment {
                return Err(Error::LimitExceeded {
                    what: "fragment",
                    size: n as u128,
                    limit: limits.max_fragment as u128,
                });
            }
            Ok(())
        };
        let d = f.depth();

        // distinct term functions per exact size
        let mut cols: Vec<Vec<Vec<usize>>> = Vec::with_capacity(d + 1);
        let mut base: Vec<Term> = f.sort().vars().iter().map(|&v| Term::Var(v)).collect();
        if f.policy() == ConstantPolicy::Include {
            if sig.consts() != h.signature().consts() {
                return Err(Error::SignatureMismatch(format!("fragment constants vs {}", h.name())));
            }
            base.extend((0..sig.consts().len()).map(Term::Const));
        }
        let mut level0 = Vec::new();
        let mut seen = HashSet::new();
        for t in &base {
            let c = crate::semantics::term_values(t, &space, h)?;
            if seen.insert(c.clone()) {
                level0.push(c);
            }
        }
        cols.push(level0);
        for s in 1..=d {
            let mut level = Vec::new();
            let mut seen = HashSet::new();
            for (op, sym) in sig.ops().iter().enumerate() {
                for sizes in compositions(s - 1, sym.arity) {
                    let choices: Vec<usize> = sizes.iter().map(|&z| cols[z].len()).collect();
                    for idx in product(&choices) {
                        let args: Vec<&Vec<usize>> = sizes.iter().zip(&idx).map(|(&z, &i)| &cols[z][i]).collect();
                        let table = h.table(op);
                        let col: Vec<usize> = (0..space.len())
                            .map(|p| table[args.iter().fold(0, |acc, c| acc * h.size() + c[p])])
                            .collect();
                        if seen.insert(col.clone()) {
                            level.push(col);
                            too_big(level.len())?;
                        }
                    }
                }
            }
            cols.push(level);
        }

        let mut exact: Vec<Vec<BitSet>> = Vec::with_capacity(d + 1);
        let mut all: Vec<BitSet> = Vec::new();
        let mut all_seen: HashSet<BitSet> = HashSet::new();
        for k in 0..=d {
            let mut level: Vec<BitSet> = Vec::new();
            let mut seen: HashSet<BitSet> = HashSet::new();
            let mut push = |b: BitSet, level: &mut Vec<BitSet>| -> Result<()> {
                if seen.insert(b.clone()) {
                    level.push(b);
                    too_big(level.len())?;
                }
                Ok(())
            };
            for a in 0..=k / 2 {
                let b = k - a;
                for (i, ca) in cols[a].iter().enumerate() {
                    let start = if a == b { i } else { 0 };
                    for cb in &cols[b][start..] {
                        push(BitSet::from_bools(ca.iter().zip(cb).map(|(x, y)| x == y)), &mut level)?;
                    }
                }
            }
            if k > 0 {
                let prev = exact[k - 1].clone();
                for e in &prev {
                    push(e.complement(), &mut level)?;
                }
                for a in 0..=(k - 1) / 2 {
                    let b = k - 1 - a;
                    for (i, ea) in exact[a].iter().enumerate() {
                        let start = if a == b { i } else { 0 };
                        for eb in &exact[b][start..] {
                            push(ea.intersection(eb), &mut level)?;
                            push(ea.union(eb), &mut level)?;
                        }
                    }
                }
                for e in &prev {
                    for pos in 0..space.ctx().len() {
                        push(
                            crate::semantics::quantify_exists(
                                &ValueSet::from_bits(space.clone(), e.clone()),
                                space.ctx().vars()[pos],
                            )?
                            .into_bits(),
                            &mut level,
                        )?;
                    }
                }
            }
            for b in &level {
                if all_seen.insert(b.clone()) {
                    all.push(b.clone());
                }
            }
            exact.push(level);
        }
        Ok(SemanticFragment {
            fragment: f.clone(),
            space,
            sets: all,
        })
    }

    pub fn fragment(&self) -> &Fragment {
        &self.fragment
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    /// Distinct value sets, in order of first appearance.
    pub fn sets(&self) -> &[BitSet] {
        &self.sets
    }

    /// Indices of the sets containing `a`.
    pub fn closure(&self, a: &BitSet) -> BitSet {
        BitSet::from_bools(self.sets.iter().map(|s| a.is_subset(s)))
    }

    pub fn solutions(&self, t: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.space.len());
        for i in t.iter() {
            out.intersect_with(&self.sets[i]);
        }
        out
    }

    pub fn double_closure_bits(&self, a: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.space.len());
        for s in &self.sets {
            if a.is_subset(s) {
                out.intersect_with(s);
            }
        }
        out
    }
}

/// Index tuples `0..choices[0] x 0..choices[1] x ...`, lexicographic.
fn product(choices: &[usize]) -> Vec<Vec<usize>> {
    choices.iter().fold(vec![vec![]], |acc, &n| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

/// All ways to write `total` as an ordered sum of `parts` naturals.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Smallest depth in `0..=max_depth` at which `A^LL` equals the orbit
/// closure for every given subset. Equality persists at larger depths:
/// the orbit closure is a lower bound and `A^LL` shrinks as the fragment
/// grows.
pub fn orbit_saturation_depth(
    h: &FiniteAlgebra,
    sort: &VarContext,
    subsets: &[BitSet],
    max_depth: usize,
    limits: &Limits,
) -> Result<Option<usize>> {
    let space = PointSpace::with_limit(sort.clone(), h.size(), limits.max_space)?;
    let group = automorphisms(h);
    let targets: Vec<BitSet> = subsets
        .iter()
        .map(|a| crate::algebra::orbit_closure_with(&ValueSet::from_bits(space.clone(), a.clone()), &group).into_bits())
        .collect();
    for d in 0..=max_depth {
        let f = Fragment::new(sort.clone(), d, h.signature(), ConstantPolicy::Free);
        let sem = SemanticFragment::compute(&f, h, limits)?;
        if subsets
            .iter()
            .zip(&targets)
            .all(|(a, t)| &sem.double_closure_bits(a) == t)
        {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Membership bits over a canonical fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeFingerprint {
    pub fragment: String,
    pub depth: usize,
    pub bits: BitSet,
}

impl TypeFingerprint {
    pub fn new(f: &Fragment, bits: BitSet) -> TypeFingerprint {
        TypeFingerprint {
            fragment: f.id(),
            depth: f.depth(),
            bits,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "fragment": self.fragment,
            "depth": self.depth,
            "bits": self.bits.to_bit_string(),
        })
    }

    pub fn parse(text: &str) -> Option<TypeFingerprint> {
        let rest = text.strip_prefix("fragment=")?;
        let (fragment, rest) = rest.split_once(" depth=")?;
        let (depth, bits) = rest.split_once(" bits=")?;
        Some(TypeFingerprint {
            fragment: fragment.to_string(),
            depth: depth.parse().ok()?,
            bits: BitSet::parse_bit_string(bits)?,
        })
    }
}

impl fmt::Display for TypeFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fragment={} depth={} bits={}",
            self.fragment,
            self.depth,
            self.bits.to_bit_string()
        )
    }
}

fn require_constants(h: &FiniteAlgebra) -> Result<()> {
    if h.has_element_consts() {
        Ok(())
    } else {
        Err(Error::ConstantsMissing(h.name().to_string()))
    }
}

/// `A_mu`: points of the window space that extend `mu`.
pub fn extension_cylinder(mu: &Point, space: &PointSpace) -> Result<BitSet> {
    let pos: Vec<(usize, usize)> = mu
        .ctx()
        .vars()
        .iter()
        .zip(mu.values())
        .map(|(&v, &a)| {
            space
                .ctx()
                .position(v)
                .map(|p| (p, a))
                .ok_or_else(|| Error::ContextMismatch(format!("{v} is not in window {}", space.ctx())))
        })
        .collect::<Result<_>>()?;
    Ok(BitSet::from_bools(
        (0..space.len()).map(|i| pos.iter().all(|&(p, a)| space.coord(i, p) == a)),
    ))
}

/// Image of the window space under `nu ↦ nu ∘ s^mu`, the reduction of
/// `mu` to constants.
fn reduction_image(mu: &Point, window: &VarContext, h: &FiniteAlgebra, limits: &Limits) -> Result<BitSet> {
    let s = point_substitution_map(mu, window, h)?;
    let map = pullback_index_map(&s, h, limits)?;
    Ok(BitSet::from_indices(map.len(), map))
}

/// Constant-reduction path: `u ∈ T_mu` iff `s^mu_* u` is in the theory.
pub fn mt_type_contains_reduced(mu: &Point, u: &Formula, h: &FiniteAlgebra) -> Result<bool> {
    require_constants(h)?;
    check_mt_window(mu, u.sort())?;
    let s = point_substitution_map(mu, u.sort(), h)?;
    let reduced = Formula::subst(s, u.clone())?;
    Ok(val_with(&reduced, h, &Limits::default())?.is_full())
}

/// Direct path: `u ∈ T_mu` iff every extension of `mu` satisfies `u`.
pub fn mt_type_contains_direct(mu: &Point, u: &Formula, h: &FiniteAlgebra) -> Result<bool> {
    require_constants(h)?;
    check_mt_window(mu, u.sort())?;
    let a = val_with(u, h, &Limits::default())?;
    let cyl = extension_cylinder(mu, a.space())?;
    Ok(cyl.is_subset(a.bits()))
}

fn check_mt_window(mu: &Point, window: &VarContext) -> Result<()> {
    if !mu.ctx().is_subset(window) {
        return Err(Error::ContextMismatch(format!(
            "point context {} is not within the formula sort {window}",
            mu.ctx()
        )));
    }
    Ok(())
}

/// Is `u` in the constant-reduced type of `mu`? Both computation paths run;
/// they are asserted equal in debug builds.
pub fn mt_type_contains(mu: &Point, u: &Formula, h: &FiniteAlgebra) -> Result<bool> {
    let reduced = mt_type_contains_reduced(mu, u, h)?;
    debug_assert_eq!(reduced, mt_type_contains_direct(mu, u, h)?, "type paths disagree");
    Ok(reduced)
}

/// Both paths over a whole fragment, as `(reduced, direct)` bits.
pub fn mt_type_paths(mu: &Point, values: &FragmentValues, h: &FiniteAlgebra) -> Result<(BitSet, BitSet)> {
    require_constants(h)?;
    let window = values.space().ctx().clone();
    check_mt_window(mu, &window)?;
    let image = reduction_image(mu, &window, h, &Limits::default())?;
    let cyl = extension_cylinder(mu, values.space())?;
    let n = values.len();
    let reduced = BitSet::from_bools((0..n).map(|i| image.is_subset(values.bits(i))));
    let direct = BitSet::from_bools((0..n).map(|i| cyl.is_subset(values.bits(i))));
    Ok((reduced, direct))
}

/// Fingerprint of the constant-reduced type of `mu` over a window fragment.
pub fn mt_type_restrict(mu: &Point, f: &Fragment, h: &FiniteAlgebra) -> Result<TypeFingerprint> {
    let values = FragmentValues::compute(&f.build()?, h)?;
    mt_type_from_values(mu, &values, h)
}

pub fn mt_type_from_values(mu: &Point, values: &FragmentValues, h: &FiniteAlgebra) -> Result<TypeFingerprint> {
    let (reduced, direct) = mt_type_paths(mu, values, h)?;
    debug_assert_eq!(reduced, direct, "type paths disagree");
    Ok(TypeFingerprint::new(values.fragment(), reduced))
}

/// Distinct realized types with the points realizing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    pub fingerprint: TypeFingerprint,
    /// Point indices, ascending.
    pub points: Vec<usize>,
}

/// Realized kernel types, ordered by their first realizing point.
pub fn lg_type_classes(values: &FragmentValues) -> Vec<TypeClass> {
    let mut index: HashMap<BitSet, usize> = HashMap::new();
    let mut out: Vec<TypeClass> = Vec::new();
    for p in 0..values.space().len() {
        let bits = values.kernel_bits(p);
        match index.get(&bits) {
            Some(&k) => out[k].points.push(p),
            None => {
                index.insert(bits.clone(), out.len());
                out.push(TypeClass {
                    fingerprint: TypeFingerprint::new(values.fragment(), bits),
                    points: vec![p],
                });
            }
        }
    }
    out
}

/// The realized types of `H` over a fragment.
pub fn lg_type_space(h: &FiniteAlgebra, f: &Fragment) -> Result<BTreeSet<TypeFingerprint>> {
    let values = FragmentValues::compute(&f.build()?, h)?;
    Ok(lg_type_classes(&values).into_iter().map(|c| c.fingerprint).collect())
}

/// Outcome of comparing two algebras by realized types.
#[derive(Debug, Clone)]
pub struct Isotypy {
    pub isotyped: bool,
    /// A fingerprint realized in one algebra only, with the index (1 or 2)
    /// of the algebra realizing it.
    pub fingerprint: Option<(usize, TypeFingerprint)>,
    /// First fragment formula telling the algebras apart.
    pub witness: Option<Formula>,
    /// Index of that formula in the fragment.
    pub witness_index: Option<usize>,
}

fn check_comparable(h1: &FiniteAlgebra, h2: &FiniteAlgebra, f: &Fragment) -> Result<()> {
    let s1 = h1.signature();
    let s2 = h2.signature();
    let consts_ok = f.policy() == ConstantPolicy::Free || s1.consts() == s2.consts();
    if s1.ops() != s2.ops() || !consts_ok {
        return Err(Error::SignatureMismatch(format!(
            "{} and {} have different symbols",
            h1.name(),
            h2.name()
        )));
    }
    Ok(())
}

/// Universal closure over the free variables, innermost last.
pub fn universal_closure(u: &Formula) -> Formula {
    let mut out = u.clone();
    for &x in u.free_vars().iter().rev() {
        out = Formula::forall(x, out).expect("free variables lie in the sort");
    }
    out
}

pub fn lg_isotyped_on_fragment(h1: &FiniteAlgebra, h2: &FiniteAlgebra, f: &Fragment) -> Result<Isotypy> {
    check_comparable(h1, h2, f)?;
    let table = f.build()?;
    let v1 = FragmentValues::compute(&table, h1)?;
    let v2 = FragmentValues::compute(&table, h2)?;
    Ok(isotypy_from_values(&table, &v1, &v2))
}

pub fn isotypy_from_values(table: &FragmentTable, v1: &FragmentValues, v2: &FragmentValues) -> Isotypy {
    let c1 = lg_type_classes(v1);
    let c2 = lg_type_classes(v2);
    let s1: BTreeSet<&BitSet> = c1.iter().map(|c| &c.fingerprint.bits).collect();
    let s2: BTreeSet<&BitSet> = c2.iter().map(|c| &c.fingerprint.bits).collect();
    if s1 == s2 {
        return Isotypy {
            isotyped: true,
            fingerprint: None,
            witness: None,
            witness_index: None,
        };
    }
    let fingerprint = c1
        .iter()
        .find(|c| !s2.contains(&c.fingerprint.bits))
        .map(|c| (1, c.fingerprint.clone()))
        .or_else(|| {
            c2.iter()
                .find(|c| !s1.contains(&c.fingerprint.bits))
                .map(|c| (2, c.fingerprint.clone()))
        });

    let (t1, t2) = (v1.theory_bits(), v2.theory_bits());
    let (witness_index, witness) = if let Some(i) = t1.first_difference(&t2) {
        (Some(i), Some(universal_closure(&table.formula(i))))
    } else {
        // projections of the two type systems onto one formula
        let proj = |s: &BTreeSet<&BitSet>, i: usize| s.iter().map(|b| b.contains(i)).collect::<BTreeSet<bool>>();
        match (0..table.len()).find(|&i| proj(&s1, i) != proj(&s2, i)) {
            Some(i) => (Some(i), Some(table.formula(i))),
            None => (None, None),
        }
    };
    Isotypy {
        isotyped: false,
        fingerprint,
        witness,
        witness_index,
    }
}

/// Outcome of comparing double closures of sampled formula sets.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Number of formula sets compared.
    pub checked: usize,
    /// First sampled set (fragment indices) whose closures differ.
    pub disagreement: Option<Vec<usize>>,
    /// First fragment formula in one closure but not the other.
    pub formula: Option<usize>,
}

/// The sampled formula sets: every singleton, the whole fragment, then
/// `samples` random sets of 1 to 4 members.
pub fn equivalence_samples(len: usize, samples: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..len).map(|i| vec![i]).collect();
    if len == 0 {
        return out;
    }
    out.push((0..len).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let k = rng.gen_range(1..=4usize.min(len));
        let mut t: BTreeSet<usize> = BTreeSet::new();
        while t.len() < k {
            t.insert(rng.gen_range(0..len));
        }
        out.push(t.into_iter().collect());
    }
    out
}

pub fn lg_equivalent_on_fragment(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    f: &Fragment,
    samples: usize,
    seed: u64,
) -> Result<Equivalence> {
    check_comparable(h1, h2, f)?;
    if h1.size() != h2.size() {
        return Err(Error::IncomparableCarriers(h1.size(), h2.size()));
    }
    let table = f.build()?;
    let v1 = FragmentValues::compute(&table, h1)?;
    let v2 = FragmentValues::compute(&table, h2)?;
    Ok(equivalence_from_values(&v1, &v2, samples, seed))
}

pub fn equivalence_from_values(v1: &FragmentValues, v2: &FragmentValues, samples: usize, seed: u64) -> Equivalence {
    let mut cache1: HashMap<BitSet, BitSet> = HashMap::new();
    let mut cache2: HashMap<BitSet, BitSet> = HashMap::new();
    let sets = equivalence_samples(v1.len(), samples, seed);
    let mut checked = 0;
    for t in &sets {
        checked += 1;
        let bits = BitSet::from_indices(v1.len(), t.iter().copied());
        let a1 = v1.solution_bits(&bits);
        let a2 = v2.solution_bits(&bits);
        let c1 = cache1.entry(a1.clone()).or_insert_with(|| v1.closure_bits(&a1)).clone();
        let c2 = cache2.entry(a2.clone()).or_insert_with(|| v2.closure_bits(&a2)).clone();
        if c1 != c2 {
            return Equivalence {
                equivalent: false,
                checked,
                disagreement: Some(t.clone()),
                formula: c1.first_difference(&c2),
            };
        }
    }
    Equivalence {
        equivalent: true,
        checked,
        disagreement: None,
        formula: None,
    }
}

/// Is `[s] : (X, A) -> (Y, B)` a morphism, i.e. does `nu ∘ s` land in `B`
/// for every `nu ∈ A`? Here `s : W(Y) -> W(X)`.
pub fn morphism_check(s: &crate::TermMap, a: &ValueSet, b: &ValueSet, h: &FiniteAlgebra) -> Result<bool> {
    if a.space().base() != h.size() || b.space().base() != h.size() {
        return Err(Error::ContextMismatch(format!(
            "sets are not over the carrier of {}",
            h.name()
        )));
    }
    if a.ctx() != s.target() || b.ctx() != s.source() {
        return Err(Error::ContextMismatch(format!(
            "map {} -> {} does not connect {} and {}",
            s.source(),
            s.target(),
            a.ctx(),
            b.ctx()
        )));
    }
    let pulled = crate::semantics::pullback_substitution(b, s, h)?;
    Ok(a.is_subset(&pulled))
}

/// What was closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisInput {
    Points(ValueSet),
    Formulas(FormulaSet),
}

/// One round trip through the correspondence within a fragment.
#[derive(Debug, Clone)]
pub struct GaloisReport {
    pub fragment: Fragment,
    pub input: GaloisInput,
    /// `A^L` (point input) or `T^LL` (formula input), as fragment bits.
    pub formulas: BitSet,
    /// `A^LL` (point input) or `T^L` (formula input).
    pub points: ValueSet,
    /// Whether the input was already closed.
    pub closed: bool,
}

impl GaloisReport {
    pub fn for_points(a: &ValueSet, f: &Fragment, h: &FiniteAlgebra, limits: &Limits) -> Result<GaloisReport> {
        check_set(a, f, h)?;
        let table = f.build_with(limits)?;
        let values = FragmentValues::compute_with(&table, h, limits)?;
        let formulas = values.closure_bits(a.bits());
        let points = ValueSet::from_bits(a.space().clone(), values.solution_bits(&formulas));
        Ok(GaloisReport {
            fragment: f.clone(),
            closed: &points == a,
            input: GaloisInput::Points(a.clone()),
            formulas,
            points,
        })
    }

    /// Formulas of `t` outside the fragment still constrain `T^L`; only the
    /// fragment members of `T` are compared against `T^LL`.
    pub fn for_formulas(t: &FormulaSet, f: &Fragment, h: &FiniteAlgebra, limits: &Limits) -> Result<GaloisReport> {
        if t.sort() != f.sort() {
            return Err(Error::SortMismatch(format!(
                "formulas of sort {} vs fragment {}",
                t.sort(),
                f.sort()
            )));
        }
        let table = f.build_with(limits)?;
        let values = FragmentValues::compute_with(&table, h, limits)?;
        let points = solution_set_with(t, h, limits)?;
        let formulas = values.closure_bits(points.bits());
        let members = BitSet::from_indices(table.len(), t.formulas().iter().filter_map(|u| table.position(u)));
        Ok(GaloisReport {
            fragment: f.clone(),
            closed: formulas.is_subset(&members),
            input: GaloisInput::Formulas(t.clone()),
            formulas,
            points,
        })
    }

    pub fn to_text(&self, sig: &crate::Signature) -> String {
        let mut out = String::new();
        out.push_str(&format!("fragment: {}\n", self.fragment.id()));
        match &self.input {
            GaloisInput::Points(a) => {
                out.push_str(&format!("input points: {} ({})\n", a, a.len()));
                out.push_str(&format!(
                    "formula closure: {} of {} fragment formulas\n",
                    self.formulas.count(),
                    self.formulas.len()
                ));
                out.push_str(&format!("double closure: {} ({})\n", self.points, self.points.len()));
            }
            GaloisInput::Formulas(t) => {
                out.push_str("input formulas:\n");
                for u in t.formulas() {
                    out.push_str(&format!("  {}\n", u.display(sig)));
                }
                out.push_str(&format!("solution set: {} ({})\n", self.points, self.points.len()));
                out.push_str(&format!(
                    "double closure: {} of {} fragment formulas\n",
                    self.formulas.count(),
                    self.formulas.len()
                ));
            }
        }
        out.push_str(&format!("bits: {}\n", self.formulas.to_bit_string()));
        out.push_str(if self.closed {
            "closed: yes (already elementary)\n"
        } else {
            "closed: no\n"
        });
        out
    }

    pub fn to_json(&self, sig: &crate::Signature) -> serde_json::Value {
        let input = match &self.input {
            GaloisInput::Points(a) => json!({ "points": a.to_tuples() }),
            GaloisInput::Formulas(t) => json!({
                "formulas": t.formulas().iter().map(|u| u.display(sig).to_string()).collect::<Vec<_>>()
            }),
        };
        json!({
            "fragment": self.fragment.id(),
            "depth": self.fragment.depth(),
            "input": input,
            "formula_bits": self.formulas.to_bit_string(),
            "points": self.points.to_tuples(),
            "closed": self.closed,
        })
    }
}
