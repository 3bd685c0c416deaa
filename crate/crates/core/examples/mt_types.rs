//! Types over a window: the constant-substitution route and the extension
//! cylinder route side by side.

use lgeom::algebra::{builtin, PointSpace};
use lgeom::geometry::mt_type_paths;
use lgeom::semantics::FragmentValues;
use lgeom::{ConstantPolicy, Fragment, Var, VarContext};

fn main() -> lgeom::Result<()> {
    let h = builtin::cyclic(3).adjoin_constants()?;
    let x = VarContext::parse("x1")?;
    let window = x.union(&VarContext::new([Var::y(1)]));
    let f = Fragment::new(window, 2, h.signature(), ConstantPolicy::Include);
    let table = f.build()?;
    let values = FragmentValues::compute(&table, &h)?;
    for mu in PointSpace::new(x, h.size())?.points() {
        let (reduced, direct) = mt_type_paths(&mu, &values, &h)?;
        println!("{mu}: {} formulas, paths agree: {}", reduced.count(), reduced == direct);
        let sample: Vec<String> = reduced.iter().skip(20).take(3).map(|i| table.show(i)).collect();
        println!("  e.g. {}", sample.join("; "));
    }
    Ok(())
}
