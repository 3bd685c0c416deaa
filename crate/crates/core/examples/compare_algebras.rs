//! Z4 against the Klein group, and Z3 against a relabeled copy.

use lgeom::algebra::{builtin, is_isomorphic};
use lgeom::geometry::{lg_equivalent_on_fragment, lg_isotyped_on_fragment};
use lgeom::{ConstantPolicy, FiniteAlgebra, Fragment, VarContext};

fn compare(a: &FiniteAlgebra, b: &FiniteAlgebra) -> lgeom::Result<()> {
    let f = Fragment::new(VarContext::parse("x1")?, 2, a.signature(), ConstantPolicy::Free);
    let iso = lg_isotyped_on_fragment(a, b, &f)?;
    let eq = lg_equivalent_on_fragment(a, b, &f, 100, 0)?;
    println!("{} vs {}", a.name(), b.name());
    println!("  isotyped:   {}", iso.isotyped);
    if let Some(w) = &iso.witness {
        println!("  witness:    {}", w.display(a.signature()));
    }
    println!("  equivalent: {} ({} sets checked)", eq.equivalent, eq.checked);
    println!("  isomorphic: {:?}", is_isomorphic(a, b)?);
    Ok(())
}

fn main() -> lgeom::Result<()> {
    compare(&builtin::cyclic(4), &builtin::klein4())?;
    compare(&builtin::cyclic(3), &builtin::relabeled_z3())
}
