//! Realized kernel types of one-variable points.

use lgeom::algebra::builtin;
use lgeom::geometry::lg_type_classes;
use lgeom::semantics::FragmentValues;
use lgeom::{ConstantPolicy, Fragment, VarContext};

fn main() -> lgeom::Result<()> {
    let sort = VarContext::parse("x1")?;
    for h in [builtin::cyclic(4), builtin::klein4(), builtin::left_zero(3)] {
        let f = Fragment::new(sort.clone(), 2, h.signature(), ConstantPolicy::Free);
        let table = f.build()?;
        let values = FragmentValues::compute(&table, &h)?;
        let classes = lg_type_classes(&values);
        println!("{}: {} formulas, {} types", h.name(), table.len(), classes.len());
        for c in &classes {
            let pts: Vec<String> = c.points.iter().map(|&p| values.space().point(p).to_string()).collect();
            println!("  {} <- {}", c.fingerprint.bits.to_bit_string(), pts.join(" "));
        }
    }
    Ok(())
}
