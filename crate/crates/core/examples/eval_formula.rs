//! Evaluate a few formulas over Z2 with element constants.

use lgeom::algebra::builtin;
use lgeom::formula::parse_formula;
use lgeom::semantics::val;
use lgeom::VarContext;

fn main() -> lgeom::Result<()> {
    let z2 = builtin::cyclic(2).adjoin_constants()?;
    let sort = VarContext::parse("x1,x2")?;
    for text in [
        "add(x1,x2) == c0",
        "E x2 . x1 == add(x2,x2)",
        "A x2 . add(x1,x2) == add(x2,x1)",
        "!(x1 == x2)",
    ] {
        let u = parse_formula(text, &sort, z2.signature())?;
        let set = val(&u, &z2)?;
        println!(
            "{:<36} {} ({} of {})",
            u.display(z2.signature()).to_string(),
            set,
            set.len(),
            set.space().len()
        );
    }
    Ok(())
}
