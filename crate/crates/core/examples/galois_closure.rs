//! Close a point set under the formula/point correspondence and compare
//! with the orbit closure.

use lgeom::algebra::{builtin, Point, PointSpace};
use lgeom::geometry::{double_closure, elementary_closure_oracle, formula_closure, is_elementary};
use lgeom::{ConstantPolicy, Fragment, ValueSet, VarContext};

fn main() -> lgeom::Result<()> {
    let z3 = builtin::cyclic(3);
    let sort = VarContext::parse("x1,x2")?;
    let a = ValueSet::from_points(
        PointSpace::new(sort.clone(), z3.size())?,
        &[Point::new(sort.clone(), vec![1, 2])],
    )?;
    for depth in 1..=3 {
        let f = Fragment::new(sort.clone(), depth, z3.signature(), ConstantPolicy::Free);
        let closed = double_closure(&a, &f, &z3)?;
        println!("depth {depth}: A^LL = {closed}");
    }
    let f = Fragment::new(sort.clone(), 2, z3.signature(), ConstantPolicy::Free);
    let t = formula_closure(&a, &f, &z3)?;
    println!("{} of the depth-2 formulas hold on A", t.len());
    println!("orbit closure: {}", elementary_closure_oracle(&a, &z3)?);
    let closed = double_closure(&a, &f, &z3)?;
    println!("A^LL elementary: {}", is_elementary(&closed, &f, &z3)?);
    Ok(())
}
