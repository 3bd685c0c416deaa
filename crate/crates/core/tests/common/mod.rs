//! Shared test helpers: a pointwise satisfaction oracle that shares no code
//! with the library's set-at-a-time evaluator, and the CLI golden cases.

#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeMap;

use lgeom::bits::BitSet;
use lgeom::formula::Node;
use lgeom::{FiniteAlgebra, Formula, Term, Var, VarContext};

pub type Env = BTreeMap<Var, usize>;

pub fn term(t: &Term, env: &Env, h: &FiniteAlgebra) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => h.const_value(*c).expect("constant present"),
        Term::App(op, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term(a, env, h)).collect();
            let n = h.size();
            let idx = vals.iter().fold(0, |acc, &v| acc * n + v);
            h.table(*op)[idx]
        }
    }
}

/// Tarski satisfaction of `u` under `env`.
pub fn sat(u: &Formula, env: &mut Env, h: &FiniteAlgebra) -> bool {
    match u.node() {
        Node::Eq(a, b) => term(a, env, h) == term(b, env, h),
        Node::Not(v) => !sat(v, env, h),
        Node::And(v, w) => sat(v, env, h) && sat(w, env, h),
        Node::Or(v, w) => sat(v, env, h) || sat(w, env, h),
        Node::Exists(x, v) | Node::Forall(x, v) => {
            let universal = matches!(u.node(), Node::Forall(..));
            let saved = env.get(x).copied();
            let mut result = universal;
            for a in 0..h.size() {
                env.insert(*x, a);
                let s = sat(v, env, h);
                if s != universal {
                    result = s;
                    break;
                }
            }
            match saved {
                Some(a) => env.insert(*x, a),
                None => env.remove(x),
            };
            result
        }
        Node::Subst(s, v) => {
            let mut inner: Env = s
                .source()
                .vars()
                .iter()
                .zip(s.images())
                .map(|(&x, t)| (x, term(t, env, h)))
                .collect();
            sat(v, &mut inner, h)
        }
    }
}

/// All assignments of `ctx`, first variable most significant.
pub fn assignments(ctx: &VarContext, n: usize) -> Vec<Env> {
    let vars = ctx.vars();
    let total = n.pow(vars.len() as u32);
    (0..total)
        .map(|mut idx| {
            let mut env = Env::new();
            for &v in vars.iter().rev() {
                env.insert(v, idx % n);
                idx /= n;
            }
            env
        })
        .collect()
}

/// Truth table of `u` over its sort, as bits in assignment order.
pub fn truth_bits(u: &Formula, h: &FiniteAlgebra) -> BitSet {
    BitSet::from_bools(
        assignments(u.sort(), h.size())
            .into_iter()
            .map(|mut env| sat(u, &mut env, h)),
    )
}

/// Index of an assignment in the same order as [`assignments`].
pub fn index_of(env: &Env, ctx: &VarContext, n: usize) -> usize {
    ctx.vars().iter().fold(0, |acc, v| acc * n + env[v])
}
