//! Finite-model engine for logical geometry over varieties of algebras.
//!
//! The crate evaluates first-order formulas with equalities over finite
//! algebras, realizes the semantic Halmos algebra of all subsets of the
//! affine spaces `Hom(W(X), H) ≅ H^X`, computes the Galois correspondence
//! between formula sets and elementary sets, and computes and compares
//! point types (kernel types and constant-reduced types) of finite algebras.
//!
//! Everything infinite in the underlying theory is approximated by finite,
//! deterministic stand-ins: variables live in a bounded window `x1..xN`,
//! and formula sets are bounded [`Fragment`]s enumerated in a canonical
//! order.
//!
//! ```
//! use lgeom::{algebra::builtin, formula::parse_formula, semantics::val, VarContext};
//!
//! let z2 = builtin::cyclic(2).adjoin_constants().unwrap();
//! let sort = VarContext::parse("x1,x2").unwrap();
//! let u = parse_formula("add(x1,x2) == c0", &sort, z2.signature()).unwrap();
//! assert_eq!(val(&u, &z2).unwrap().to_string(), "{(0,0),(1,1)}");
//! ```

pub mod algebra;
pub mod bits;
pub mod cli;
pub mod error;
pub mod formula;
pub mod fragment;
pub mod geometry;
mod lexer;
pub mod semantics;
pub mod terms;

pub use algebra::{FiniteAlgebra, Point, PointSpace};
pub use error::{Error, Result};
pub use formula::{Formula, FormulaSet};
pub use fragment::{ConstantPolicy, Fragment, FragmentTable};
pub use semantics::ValueSet;
pub use terms::{Signature, Term, TermMap, Var, VarContext};

/// Resource bounds shared by every enumerating operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Variables must have index at most this (`x1..xN`).
    pub window: u32,
    /// Maximum number of points in one affine space.
    pub max_space: usize,
    /// Maximum number of formulas in one fragment.
    pub max_fragment: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            window: 8,
            max_space: 1 << 24,
            max_fragment: 1 << 21,
        }
    }
}
