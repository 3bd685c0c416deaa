//! Finite, canonically ordered fragments of the formula algebra of one sort.
//!
//! A fragment of depth `d` holds every formula whose weight is at most `d`,
//! where the weight is the formula length (equalities 0, `!` and `E x` add
//! one, `&` and `|` add the operand weights plus one) plus the number of
//! operation symbols inside its equalities. Substitution nodes are never
//! enumerated.
//!
//! Canonical order, level by level (`k = 0..=d`, all formulas of weight `k`):
//!
//! 1. equalities `w == w'` with `w` not after `w'` in term order and
//!    `size(w) + size(w') = k`, ordered by `(w, w')`;
//! 2. negations of weight `k-1` formulas;
//! 3. conjunctions `u & v`, `u` strictly before `v`, ordered by `(u, v)`;
//! 4. disjunctions, same order;
//! 5. `E x . u` for weight `k-1` formulas `u`, then `x` in sort order.
//!
//! Terms are ordered by size; size 0 is the sort's variables followed by the
//! constants (when the policy includes them), and size `s` terms are
//! `op(args)` for each operation in signature order and argument index
//! tuples in lexicographic order.
//!
//! Depth `d` enumeration is a prefix of depth `d + 1` enumeration.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::terms::{Signature, Term, Var, VarContext};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantPolicy {
    /// Only variables and operations of arity >= 1.
    Free,
    /// Also every constant symbol of the signature.
    Include,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    sort: VarContext,
    depth: usize,
    sig: Signature,
    policy: ConstantPolicy,
}

impl Fragment {
    pub fn new(sort: VarContext, depth: usize, sig: &Signature, policy: ConstantPolicy) -> Fragment {
        Fragment {
            sort,
            depth,
            sig: sig.clone(),
            policy,
        }
    }

    pub fn sort(&self) -> &VarContext {
        &self.sort
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn policy(&self) -> ConstantPolicy {
        self.policy
    }

    /// Same fragment at another depth.
    pub fn with_depth(&self, depth: usize) -> Fragment {
        Fragment { depth, ..self.clone() }
    }

    /// Stable identifier: sort, depth, operations and constant policy.
    pub fn id(&self) -> String {
        let consts = match self.policy {
            ConstantPolicy::Free => "free".to_string(),
            ConstantPolicy::Include if self.sig.consts().is_empty() => "none".to_string(),
            ConstantPolicy::Include => self.sig.consts().join(","),
        };
        format!(
            "sort={};depth={};ops={};consts={}",
            self.sort,
            self.depth,
            self.sig.describe_ops(),
            consts
        )
    }

    pub fn build(&self) -> Result<FragmentTable> {
        self.build_with(&Limits::default())
    }

    pub fn build_with(&self, limits: &Limits) -> Result<FragmentTable> {
        Builder::new(self, limits.max_fragment).run()
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// One enumerated formula; children are indices of earlier formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FNode {
    /// Equality between two entries of the term list.
    Eq(u32, u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Exists(Var, u32),
}

/// The enumerated fragment, stored as a DAG in canonical order.
#[derive(Debug, Clone)]
pub struct FragmentTable {
    fragment: Fragment,
    terms: Vec<Term>,
    term_sizes: Vec<usize>,
    nodes: Vec<FNode>,
    weights: Vec<usize>,
    /// `levels[k]` is the index range of weight `k` formulas.
    levels: Vec<std::ops::Range<usize>>,
}

impl FragmentTable {
    pub fn fragment(&self) -> &Fragment {
        &self.fragment
    }

    pub fn id(&self) -> String {
        self.fragment.id()
    }

    pub fn sort(&self) -> &VarContext {
        &self.fragment.sort
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_size(&self, t: usize) -> usize {
        self.term_sizes[t]
    }

    pub fn nodes(&self) -> &[FNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> FNode {
        self.nodes[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn level(&self, k: usize) -> std::ops::Range<usize> {
        self.levels
            .get(k)
            .cloned()
            .unwrap_or(self.nodes.len()..self.nodes.len())
    }

    /// Materializes formula `i` as an AST.
    pub fn formula(&self, i: usize) -> Formula {
        let sort = &self.fragment.sort;
        match self.nodes[i] {
            FNode::Eq(a, b) => Formula::equality(sort, self.terms[a as usize].clone(), self.terms[b as usize].clone())
                .expect("fragment terms are over the sort"),
            FNode::Not(u) => Formula::not(self.formula(u as usize)),
            FNode::And(u, v) => Formula::and(self.formula(u as usize), self.formula(v as usize)).expect("same sort"),
            FNode::Or(u, v) => Formula::or(self.formula(u as usize), self.formula(v as usize)).expect("same sort"),
            FNode::Exists(x, u) => Formula::exists(x, self.formula(u as usize)).expect("x is in the sort"),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = Formula> + '_ {
        (0..self.len()).map(|i| self.formula(i))
    }

    /// Text of formula `i`.
    pub fn show(&self, i: usize) -> String {
        self.formula(i).display(&self.fragment.sig).to_string()
    }

    /// Index of a formula in the enumeration.
    pub fn position(&self, u: &Formula) -> Option<usize> {
        if u.sort() != self.sort() {
            return None;
        }
        let w = u.weight();
        self.level(w).find(|&i| &self.formula(i) == u)
    }
}

/// The fragment's formulas in canonical order.
pub fn enumerate_fragment(f: &Fragment) -> Result<impl Iterator<Item = Formula>> {
    let table = f.build()?;
    Ok((0..table.len()).map(move |i| table.formula(i)))
}

struct Builder<'a> {
    frag: &'a Fragment,
    limit: usize,
    terms: Vec<Term>,
    term_sizes: Vec<usize>,
    /// `term_levels[s]`: index range of size-`s` terms.
    term_levels: Vec<std::ops::Range<usize>>,
    nodes: Vec<FNode>,
    weights: Vec<usize>,
    levels: Vec<std::ops::Range<usize>>,
}

impl<'a> Builder<'a> {
    fn new(frag: &'a Fragment, limit: usize) -> Self {
        Builder {
            frag,
            limit,
            terms: Vec::new(),
            term_sizes: Vec::new(),
            term_levels: Vec::new(),
            nodes: Vec::new(),
            weights: Vec::new(),
            levels: Vec::new(),
        }
    }

    fn check(&self, n: usize, what: &'static str) -> Result<()> {
        if n > self.limit {
            return Err(Error::LimitExceeded {
                what,
                size: n as u128,
                limit: self.limit as u128,
            });
        }
        Ok(())
    }

    fn push_term(&mut self, t: Term, size: usize) -> Result<()> {
        self.check(self.terms.len() + 1, "fragment term list")?;
        self.terms.push(t);
        self.term_sizes.push(size);
        Ok(())
    }

    fn build_terms(&mut self) -> Result<()> {
        let start = self.terms.len();
        for &v in self.frag.sort.vars() {
            self.push_term(Term::Var(v), 0)?;
        }
        if self.frag.policy == ConstantPolicy::Include {
            for c in 0..self.frag.sig.consts().len() {
                self.push_term(Term::Const(c), 0)?;
            }
        }
        self.term_levels.push(start..self.terms.len());
        for s in 1..=self.frag.depth {
            let start = self.terms.len();
            // size-0 base terms are required for any compound term
            if !self.term_levels[0].is_empty() {
                for (op, sym) in self.frag.sig.ops().iter().enumerate() {
                    let mut args = Vec::with_capacity(sym.arity);
                    self.gen_args(op, sym.arity, s - 1, &mut args)?;
                }
            }
            self.term_levels.push(start..self.terms.len());
        }
        Ok(())
    }

    /// Argument index tuples, lexicographic, total size exactly `remaining`.
    fn gen_args(&mut self, op: usize, arity: usize, remaining: usize, args: &mut Vec<usize>) -> Result<()> {
        if args.len() == arity {
            if remaining == 0 {
                let t = Term::App(op, args.iter().map(|&i| self.terms[i].clone()).collect());
                let size = 1 + args.iter().map(|&i| self.term_sizes[i]).sum::<usize>();
                self.push_term(t, size)?;
            }
            return Ok(());
        }
        let last = args.len() + 1 == arity;
        // terms are sorted by size, so sizes <= remaining form a prefix
        let end = self.term_levels[..=remaining.min(self.term_levels.len() - 1)]
            .last()
            .map_or(0, |r| r.end);
        for i in 0..end {
            let size = self.term_sizes[i];
            if size > remaining || (last && size != remaining) {
                continue;
            }
            args.push(i);
            self.gen_args(op, arity, remaining - size, args)?;
            args.pop();
        }
        Ok(())
    }

    fn push(&mut self, node: FNode, weight: usize) -> Result<()> {
        self.check(self.nodes.len() + 1, "fragment")?;
        self.nodes.push(node);
        self.weights.push(weight);
        Ok(())
    }

    fn run(mut self) -> Result<FragmentTable> {
        self.build_terms()?;
        let sort = self.frag.sort.clone();
        for k in 0..=self.frag.depth {
            let start = self.nodes.len();
            // equalities
            for i in 0..self.terms.len() {
                let si = self.term_sizes[i];
                if si > k {
                    break;
                }
                let range = self.term_levels[k - si].clone();
                for j in range.start.max(i)..range.end {
                    self.push(FNode::Eq(i as u32, j as u32), k)?;
                }
            }
            if k > 0 {
                let prev = self.levels[k - 1].clone();
                for u in prev.clone() {
                    self.push(FNode::Not(u as u32), k)?;
                }
                let pairs = self.pairs(k - 1);
                self.check(self.nodes.len() + 2 * pairs.len(), "fragment")?;
                for &(u, v) in &pairs {
                    self.push(FNode::And(u, v), k)?;
                }
                for &(u, v) in &pairs {
                    self.push(FNode::Or(u, v), k)?;
                }
                for u in prev {
                    for &x in sort.vars() {
                        self.push(FNode::Exists(x, u as u32), k)?;
                    }
                }
            }
            self.levels.push(start..self.nodes.len());
        }
        Ok(FragmentTable {
            fragment: self.frag.clone(),
            terms: self.terms,
            term_sizes: self.term_sizes,
            nodes: self.nodes,
            weights: self.weights,
            levels: self.levels,
        })
    }

    /// Index pairs `u < v` with `weight(u) + weight(v) = total`.
    fn pairs(&self, total: usize) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..=total / 2 {
            let b = total - a;
            let la = self.levels[a].clone();
            let lb = self.levels[b].clone();
            if a == b {
                for u in la.clone() {
                    for v in u + 1..la.end {
                        out.push((u as u32, v as u32));
                    }
                }
            } else {
                for u in la {
                    for v in lb.clone() {
                        out.push((u as u32, v as u32));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
