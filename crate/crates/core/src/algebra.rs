//! Finite algebras given by operation tables, their affine point spaces,
//! automorphism groups and isomorphism search.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semantics::ValueSet;
use crate::terms::{parse_term_open, Signature, Term, Var, VarContext};
use crate::Limits;

/// A finite algebra on the carrier `0..size`.
///
/// `tables[op]` lists the values of an operation of arity `k` for all
/// argument tuples in lexicographic order, first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    sig: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    const_values: Vec<usize>,
    /// Position of `c0` in the constant list when element constants are adjoined.
    element_consts: Option<usize>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
        const_values: Vec<usize>,
    ) -> Result<FiniteAlgebra> {
        let mut h = FiniteAlgebra {
            name: name.into(),
            sig,
            size,
            tables,
            const_values,
            element_consts: None,
        };
        validate_algebra(&h)?;
        h.element_consts = h.detect_element_consts();
        Ok(h)
    }

    fn detect_element_consts(&self) -> Option<usize> {
        let start = self.sig.const_index("c0")?;
        (0..self.size)
            .all(|a| self.sig.consts().get(start + a) == Some(&format!("c{a}")) && self.const_values[start + a] == a)
            .then_some(start)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn const_value(&self, c: usize) -> Option<usize> {
        self.const_values.get(c).copied()
    }

    /// Constant-symbol index of `c_a`, when element constants are adjoined.
    pub fn element_const(&self, a: usize) -> Option<usize> {
        self.element_consts.filter(|_| a < self.size).map(|start| start + a)
    }

    pub fn has_element_consts(&self) -> bool {
        self.element_consts.is_some()
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.tables[op][idx]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the identity list of the signature.
    pub fn with_identities(mut self, identities: Vec<(Term, Term)>) -> Result<Self> {
        self.sig = self.sig.with_identities(identities)?;
        Ok(self)
    }

    /// Adds constants `c0..c(n-1)` interpreted as the elements themselves.
    pub fn adjoin_constants(&self) -> Result<FiniteAlgebra> {
        let mut sig = self.sig.clone();
        let mut const_values = self.const_values.clone();
        let mut start = None;
        for a in 0..self.size {
            let idx = sig.push_const(format!("c{a}"))?;
            start.get_or_insert(idx);
            const_values.push(a);
        }
        Ok(FiniteAlgebra {
            name: format!("{}+c", self.name),
            sig,
            size: self.size,
            tables: self.tables.clone(),
            const_values,
            element_consts: start,
        })
    }

    /// The isomorphic copy obtained by renaming each element `a` to `perm[a]`.
    pub fn relabel(&self, perm: &[usize], name: impl Into<String>) -> Result<FiniteAlgebra> {
        let inv = invert(perm, self.size)?;
        let tables = self
            .sig
            .ops()
            .iter()
            .enumerate()
            .map(|(op, sym)| {
                let count = self.size.pow(sym.arity as u32);
                (0..count)
                    .map(|idx| {
                        let args: Vec<usize> = digits(idx, self.size, sym.arity).into_iter().map(|b| inv[b]).collect();
                        perm[self.apply(op, &args)]
                    })
                    .collect()
            })
            .collect();
        let consts = self.const_values.iter().map(|&c| perm[c]).collect();
        FiniteAlgebra::new(name, self.sig.clone(), self.size, tables, consts)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            name: self.name.clone(),
            size: self.size,
            ops: self
                .sig
                .ops()
                .iter()
                .zip(&self.tables)
                .map(|(o, t)| OpEntry {
                    name: o.name.clone(),
                    arity: o.arity,
                    table: t.clone(),
                })
                .collect(),
            consts: self
                .sig
                .consts()
                .iter()
                .zip(&self.const_values)
                .map(|(n, &v)| ConstEntry {
                    name: n.clone(),
                    value: v,
                })
                .collect(),
            identities: self
                .sig
                .identities()
                .iter()
                .map(|(l, r)| [l.display(&self.sig).to_string(), r.display(&self.sig).to_string()])
                .collect(),
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<FiniteAlgebra> {
        let sig = Signature::new(
            file.ops.iter().map(|o| (o.name.clone(), o.arity)),
            file.consts.iter().map(|c| c.name.clone()),
        )?;
        let identities = file
            .identities
            .iter()
            .map(|[l, r]| Ok((parse_term_open(l, &sig)?, parse_term_open(r, &sig)?)))
            .collect::<Result<Vec<_>>>()?;
        let sig = sig.with_identities(identities)?;
        FiniteAlgebra::new(
            file.name.clone(),
            sig,
            file.size,
            file.ops.iter().map(|o| o.table.clone()).collect(),
            file.consts.iter().map(|c| c.value).collect(),
        )
    }

    /// Parses the TOML algebra format.
    pub fn from_toml(text: &str) -> Result<FiniteAlgebra> {
        let file: AlgebraFile = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        FiniteAlgebra::from_file(&file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("algebra files always serialize")
    }
}

/// On-disk form of a finite algebra.
///
/// ```toml
/// name = "Z3"
/// size = 3
/// identities = [["add(x1,x2)", "add(x2,x1)"]]
///
/// [[ops]]
/// name = "add"
/// arity = 2
/// table = [0, 1, 2, 1, 2, 0, 2, 0, 1]
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub size: usize,
    #[serde(default)]
    pub ops: Vec<OpEntry>,
    #[serde(default)]
    pub consts: Vec<ConstEntry>,
    #[serde(default)]
    pub identities: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpEntry {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstEntry {
    pub name: String,
    pub value: usize,
}

/// Checks table shapes and entry ranges.
pub fn validate_algebra(h: &FiniteAlgebra) -> Result<()> {
    if h.size == 0 {
        return Err(Error::InvalidAlgebra("carrier must be non-empty".into()));
    }
    if h.tables.len() != h.sig.ops().len() {
        return Err(Error::InvalidAlgebra(format!(
            "{} tables for {} operations",
            h.tables.len(),
            h.sig.ops().len()
        )));
    }
    for (sym, table) in h.sig.ops().iter().zip(&h.tables) {
        let expected = (h.size as u128)
            .checked_pow(sym.arity as u32)
            .filter(|&e| e <= (1 << 26))
            .ok_or(Error::LimitExceeded {
                what: "operation table",
                size: u128::MAX,
                limit: 1 << 26,
            })? as usize;
        if table.len() != expected {
            return Err(Error::MalformedTable {
                op: sym.name.clone(),
                index: table.len().min(expected),
                msg: format!("table has length {}, expected {expected}", table.len()),
            });
        }
        if let Some(index) = table.iter().position(|&e| e >= h.size) {
            return Err(Error::MalformedTable {
                op: sym.name.clone(),
                index,
                msg: format!("entry {} outside carrier 0..{}", table[index], h.size),
            });
        }
    }
    if h.const_values.len() != h.sig.consts().len() {
        return Err(Error::InvalidAlgebra(
            "constant values do not match constant symbols".into(),
        ));
    }
    for (name, &v) in h.sig.consts().iter().zip(&h.const_values) {
        if v >= h.size {
            return Err(Error::MalformedTable {
                op: name.clone(),
                index: 0,
                msg: format!("constant value {v} outside carrier 0..{}", h.size),
            });
        }
    }
    Ok(())
}

fn digits(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

fn invert(perm: &[usize], n: usize) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::InvalidAlgebra(format!(
            "permutation of length {} on {n} elements",
            perm.len()
        )));
    }
    let mut inv = vec![usize::MAX; n];
    for (a, &b) in perm.iter().enumerate() {
        if b >= n || inv[b] != usize::MAX {
            return Err(Error::InvalidAlgebra(format!("{perm:?} is not a permutation")));
        }
        inv[b] = a;
    }
    Ok(inv)
}

/// A map from a variable context into the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    ctx: VarContext,
    values: Vec<usize>,
}

impl Point {
    pub fn new(ctx: VarContext, values: Vec<usize>) -> Point {
        assert_eq!(ctx.len(), values.len(), "point arity does not match context {ctx}");
        Point { ctx, values }
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, v: Var) -> Option<usize> {
        self.ctx.position(v).map(|i| self.values[i])
    }

    /// Restriction to a sub-context.
    pub fn restrict(&self, sub: &VarContext) -> Option<Point> {
        let values = sub.vars().iter().map(|&v| self.get(v)).collect::<Option<Vec<_>>>()?;
        Some(Point::new(sub.clone(), values))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// The affine space `H^X`, indexed big-endian over the ordered context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSpace {
    ctx: VarContext,
    n: usize,
    len: usize,
}

impl PointSpace {
    pub fn new(ctx: VarContext, n: usize) -> Result<PointSpace> {
        PointSpace::with_limit(ctx, n, Limits::default().max_space)
    }

    pub fn with_limit(ctx: VarContext, n: usize, max_space: usize) -> Result<PointSpace> {
        let len = (n as u128).checked_pow(ctx.len() as u32).unwrap_or(u128::MAX);
        if len > max_space as u128 {
            return Err(Error::LimitExceeded {
                what: "point space",
                size: len,
                limit: max_space as u128,
            });
        }
        Ok(PointSpace {
            ctx,
            n,
            len: len as usize,
        })
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    /// Carrier size of the algebra.
    pub fn base(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index step of coordinate `pos`.
    pub fn stride(&self, pos: usize) -> usize {
        self.n.pow((self.ctx.len() - 1 - pos) as u32)
    }

    pub fn index_of(&self, values: &[usize]) -> usize {
        debug_assert_eq!(values.len(), self.ctx.len());
        values.iter().fold(0, |acc, &a| acc * self.n + a)
    }

    pub fn index(&self, p: &Point) -> Option<usize> {
        (p.ctx == self.ctx).then(|| self.index_of(&p.values))
    }

    pub fn coords(&self, idx: usize) -> Vec<usize> {
        digits(idx, self.n, self.ctx.len())
    }

    #[inline]
    pub fn coord(&self, idx: usize, pos: usize) -> usize {
        idx / self.stride(pos) % self.n
    }

    pub fn point(&self, idx: usize) -> Point {
        Point::new(self.ctx.clone(), self.coords(idx))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(|i| self.point(i))
    }
}

/// All points of `H^X` in index order.
pub fn enum_points(ctx: &VarContext, h: &FiniteAlgebra) -> Result<impl Iterator<Item = Point>> {
    enum_points_with(ctx, h, &Limits::default())
}

pub fn enum_points_with(ctx: &VarContext, h: &FiniteAlgebra, limits: &Limits) -> Result<impl Iterator<Item = Point>> {
    let space = PointSpace::with_limit(ctx.clone(), h.size, limits.max_space)?;
    Ok((0..space.len).map(move |i| space.point(i)))
}

/// Outcome of checking the signature's identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Index of the first failing identity and the first assignment refuting it.
    pub witness: Option<(usize, Point)>,
}

pub fn check_identities(h: &FiniteAlgebra) -> IdentityCheck {
    for (i, (l, r)) in h.sig.identities().iter().enumerate() {
        let ctx = l.vars().union(&r.vars());
        let space = PointSpace::new(ctx, h.size).expect("identity contexts are small");
        for p in space.points() {
            let lv = l
                .eval_with(h, &|v| p.get(v))
                .expect("identities are checked against the signature");
            let rv = r
                .eval_with(h, &|v| p.get(v))
                .expect("identities are checked against the signature");
            if lv != rv {
                return IdentityCheck {
                    holds: false,
                    witness: Some((i, p)),
                };
            }
        }
    }
    IdentityCheck {
        holds: true,
        witness: None,
    }
}

/// A permutation of the carrier commuting with every operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism(Vec<usize>);

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism((0..n).collect())
    }

    pub fn perm(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.0[a]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism(other.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism(invert(&self.0, self.0.len()).expect("automorphisms are bijections"))
    }
}

/// Backtracking search for structure-preserving bijections `h1 -> h2`,
/// assigning images in carrier order.
fn isomorphism_search(h1: &FiniteAlgebra, h2: &FiniteAlgebra, first_only: bool) -> Vec<Vec<usize>> {
    let n = h1.size;
    let mut out = Vec::new();
    if n != h2.size {
        return out;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(h1, h2, 0, &mut map, &mut used, first_only, &mut out);
    out
}

/// Checks every table constraint whose arguments and result are all among
/// the already-assigned elements `0..=k` and which involves `k`.
fn consistent(h1: &FiniteAlgebra, h2: &FiniteAlgebra, map: &[usize], k: usize) -> bool {
    for (c, &v) in h1.const_values.iter().enumerate() {
        if v <= k && map[v] != h2.const_values[c] {
            return false;
        }
    }
    for (op, sym) in h1.sig.ops().iter().enumerate() {
        let m = k + 1;
        let count = m.pow(sym.arity as u32);
        let mut args = vec![0; sym.arity];
        let mut img = vec![0; sym.arity];
        for idx in 0..count {
            let mut rest = idx;
            let mut has_k = false;
            for slot in (0..sym.arity).rev() {
                args[slot] = rest % m;
                rest /= m;
                has_k |= args[slot] == k;
            }
            let r = h1.apply(op, &args);
            if !has_k && r != k {
                continue;
            }
            if r > k {
                continue;
            }
            for (i, &a) in args.iter().enumerate() {
                img[i] = map[a];
            }
            if map[r] != h2.apply(op, &img) {
                return false;
            }
        }
    }
    true
}

fn search(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    k: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    first_only: bool,
    out: &mut Vec<Vec<usize>>,
) {
    if k == h1.size {
        out.push(map.clone());
        return;
    }
    for b in 0..h2.size {
        if used[b] {
            continue;
        }
        map[k] = b;
        used[b] = true;
        if consistent(h1, h2, map, k) {
            search(h1, h2, k + 1, map, used, first_only, out);
        }
        used[b] = false;
        map[k] = usize::MAX;
        if first_only && !out.is_empty() {
            return;
        }
    }
}

/// The full automorphism group, in lexicographic order of permutations.
pub fn automorphisms(h: &FiniteAlgebra) -> Vec<Automorphism> {
    isomorphism_search(h, h, false).into_iter().map(Automorphism).collect()
}

/// Smallest superset of `a` closed under the coordinatewise action of `Aut(H)`.
pub fn orbit_closure(a: &ValueSet, h: &FiniteAlgebra) -> ValueSet {
    orbit_closure_with(a, &automorphisms(h))
}

pub fn orbit_closure_with(a: &ValueSet, group: &[Automorphism]) -> ValueSet {
    let space = a.space();
    let mut out = a.clone();
    let mut coords = vec![0; space.ctx().len()];
    for idx in a.indices() {
        let base = space.coords(idx);
        for sigma in group {
            for (c, &b) in coords.iter_mut().zip(&base) {
                *c = sigma.apply(b);
            }
            out.insert(space.index_of(&coords));
        }
    }
    out
}

/// Orbits of `Aut(H)` on the point space, each listed by ascending index,
/// ordered by smallest member.
pub fn orbits(space: &PointSpace, group: &[Automorphism]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; space.len()];
    let mut out = Vec::new();
    for idx in 0..space.len() {
        if seen[idx] {
            continue;
        }
        let single = ValueSet::from_indices(space.clone(), [idx]);
        let orbit: Vec<usize> = orbit_closure_with(&single, group).indices().collect();
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit);
    }
    out
}

/// Isomorphism test with an explicit witness bijection.
pub fn is_isomorphic(h1: &FiniteAlgebra, h2: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    if !h1.sig.same_symbols(&h2.sig) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", h1.name, h2.name)));
    }
    Ok(isomorphism_search(h1, h2, true).into_iter().next())
}

/// Standard small algebras.
pub mod builtin {
    use super::*;

    fn add_sig() -> Signature {
        Signature::new([("add", 2)], Vec::<&str>::new()).expect("static signature")
    }

    fn binary(name: String, n: usize, f: impl Fn(usize, usize) -> usize, identities: &[(&str, &str)]) -> FiniteAlgebra {
        let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
        let sig = add_sig();
        let ids = identities
            .iter()
            .map(|(l, r)| (parse_term_open(l, &sig).unwrap(), parse_term_open(r, &sig).unwrap()))
            .collect();
        FiniteAlgebra::new(name, sig.with_identities(ids).unwrap(), n, vec![table], vec![])
            .expect("built-in tables are well formed")
    }

    const GROUP_LAWS: &[(&str, &str)] = &[
        ("add(x1,x2)", "add(x2,x1)"),
        ("add(add(x1,x2),x3)", "add(x1,add(x2,x3))"),
    ];

    /// `Z_n` under addition.
    pub fn cyclic(n: usize) -> FiniteAlgebra {
        binary(format!("Z{n}"), n, |a, b| (a + b) % n, GROUP_LAWS)
    }

    /// The Klein four-group, `add` = bitwise xor on `0..4`.
    pub fn klein4() -> FiniteAlgebra {
        binary("K4".into(), 4, |a, b| a ^ b, GROUP_LAWS)
    }

    /// Left-zero semigroup `add(x,y) = x`, declared with a commutativity law
    /// (which it violates for `n > 1`).
    pub fn left_zero(n: usize) -> FiniteAlgebra {
        binary(format!("LZ{n}"), n, |a, _| a, &[("add(x1,x2)", "add(x2,x1)")])
    }

    /// `Z3` with its carrier renamed by `a ↦ a+1 mod 3`.
    pub fn relabeled_z3() -> FiniteAlgebra {
        cyclic(3).relabel(&[1, 2, 0], "Z3r").expect("valid permutation")
    }

    /// Resolves a built-in name: `Z<n>`, `K4`, `LZ<n>`, `Z3r`.
    pub fn lookup(name: &str) -> Option<FiniteAlgebra> {
        let small = |s: &str| s.parse::<usize>().ok().filter(|&n| (1..=16).contains(&n));
        match name {
            "K4" => Some(klein4()),
            "Z3r" => Some(relabeled_z3()),
            _ => {
                if let Some(n) = name.strip_prefix("LZ").and_then(small) {
                    Some(left_zero(n))
                } else {
                    name.strip_prefix('Z').and_then(small).map(cyclic)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    fn ctx(s: &str) -> VarContext {
        VarContext::parse(s).unwrap()
    }

    #[test]
    fn validation_errors() {
        let sig = Signature::new([("add", 2)], Vec::<&str>::new()).unwrap();
        let bad_len = FiniteAlgebra::new("bad", sig.clone(), 2, vec![vec![0, 1, 1]], vec![]);
        assert!(matches!(bad_len, Err(Error::MalformedTable { ref op, .. }) if op == "add"));
        let bad_entry = FiniteAlgebra::new("bad", sig.clone(), 3, vec![vec![0, 1, 2, 1, 5, 0, 2, 0, 1]], vec![]);
        assert!(matches!(bad_entry, Err(Error::MalformedTable { index: 4, .. })));
        assert!(FiniteAlgebra::new("empty", sig, 0, vec![vec![]], vec![]).is_err());
        assert!(validate_algebra(&cyclic(2)).is_ok());
    }

    #[test]
    fn identity_checks() {
        let z3 = cyclic(3);
        assert!(check_identities(&z3).holds);
        let lz = left_zero(2);
        let r = check_identities(&lz);
        assert!(!r.holds);
        let (i, p) = r.witness.unwrap();
        assert_eq!(i, 0);
        assert_eq!(p.to_string(), "(0,1)");
        let bare = FiniteAlgebra::new(
            "bare",
            z3.signature().constant_free(),
            3,
            vec![z3.table(0).to_vec()],
            vec![],
        )
        .unwrap();
        assert!(check_identities(&bare).holds);
    }

    #[test]
    fn point_enumeration() {
        let z2 = cyclic(2);
        let pts: Vec<String> = enum_points(&ctx("x1"), &z2).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(pts, ["(0)", "(1)"]);
        let pts: Vec<Point> = enum_points(&VarContext::empty(), &cyclic(3)).unwrap().collect();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].values().is_empty());
        let pts: Vec<String> = enum_points(&ctx("x1,x2"), &z2)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(pts, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        let limits = Limits {
            max_space: 16,
            ..Limits::default()
        };
        assert!(matches!(
            enum_points_with(&ctx("x1,x2,x3,x4,x5"), &z2, &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn space_indexing_is_bijective() {
        let s = PointSpace::new(ctx("x1,x2,x3"), 3).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.index(&s.point(i)), Some(i));
            for pos in 0..3 {
                assert_eq!(s.coord(i, pos), s.coords(i)[pos]);
            }
        }
    }

    #[test]
    fn automorphism_group_sizes() {
        assert_eq!(automorphisms(&cyclic(2)).len(), 1);
        let z3 = automorphisms(&cyclic(3));
        assert_eq!(
            z3.iter().map(|a| a.perm().to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 1, 2], vec![0, 2, 1]]
        );
        assert_eq!(automorphisms(&klein4()).len(), 6);
        assert_eq!(automorphisms(&cyclic(4)).len(), 2);
        assert_eq!(automorphisms(&cyclic(5)).len(), 4);
    }

    #[test]
    fn constants_pin_every_element() {
        for h in [cyclic(2), cyclic(3), klein4(), cyclic(4)] {
            let hc = h.adjoin_constants().unwrap();
            assert_eq!(automorphisms(&hc), vec![Automorphism::identity(h.size())]);
            assert_eq!(hc.element_const(1), Some(1));
        }
        let z2c = cyclic(2).adjoin_constants().unwrap();
        assert_eq!(z2c.signature().consts(), ["c0", "c1"]);
        assert!(matches!(z2c.adjoin_constants(), Err(Error::ConstantCollision(_))));
    }

    #[test]
    fn orbit_closure_examples() {
        let z3 = cyclic(3);
        let space = PointSpace::new(ctx("x1,x2"), 3).unwrap();
        let a = ValueSet::from_indices(space.clone(), [space.index_of(&[1, 2])]);
        assert_eq!(orbit_closure(&a, &z3).to_string(), "{(1,2),(2,1)}");
        let inv = orbit_closure(&a, &z3);
        assert_eq!(orbit_closure(&inv, &z3), inv);
        let empty = ValueSet::empty(space);
        assert_eq!(orbit_closure(&empty, &z3), empty);
    }

    #[test]
    fn isomorphism_examples() {
        let z3 = cyclic(3);
        let z3r = relabeled_z3();
        assert_ne!(z3.table(0), z3r.table(0));
        let w = is_isomorphic(&z3, &z3r).unwrap().unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(w[z3.apply(0, &[a, b])], z3r.apply(0, &[w[a], w[b]]));
            }
        }
        assert_eq!(is_isomorphic(&cyclic(4), &klein4()).unwrap(), None);
        assert_eq!(is_isomorphic(&z3, &z3).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(is_isomorphic(&cyclic(2), &cyclic(3)).unwrap(), None);
        let z2c = cyclic(2).adjoin_constants().unwrap();
        assert!(matches!(
            is_isomorphic(&z2c, &cyclic(2)),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let h = klein4().adjoin_constants().unwrap();
        let text = h.to_toml();
        let back = FiniteAlgebra::from_toml(&text).unwrap();
        assert_eq!(back, h);
        assert!(back.has_element_consts());
    }

    #[test]
    fn file_rejects_bad_tables() {
        let text = "name = \"bad\"\nsize = 3\n[[ops]]\nname = \"add\"\narity = 2\ntable = [0,1,2,1,2,0,2,0,5]\n";
        assert!(matches!(
            FiniteAlgebra::from_toml(text),
            Err(Error::MalformedTable { index: 8, .. })
        ));
        assert!(matches!(FiniteAlgebra::from_toml("size = "), Err(Error::Format(_))));
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("Z5").unwrap().size(), 5);
        assert_eq!(lookup("K4").unwrap().name(), "K4");
        assert_eq!(lookup("LZ2").unwrap().table(0), &[0, 0, 1, 1]);
        assert!(lookup("Q8").is_none());
        assert!(lookup("Z0").is_none());
    }
}
