//! Automorphisms of a few small algebras and the orbits they cut out.

use lgeom::algebra::{automorphisms, builtin, orbits, PointSpace};
use lgeom::VarContext;

fn main() -> lgeom::Result<()> {
    let sort = VarContext::parse("x1,x2")?;
    for h in [builtin::cyclic(3), builtin::cyclic(4), builtin::klein4()] {
        let group = automorphisms(&h);
        let space = PointSpace::new(sort.clone(), h.size())?;
        let orbs = orbits(&space, &group);
        println!(
            "{}: {} automorphisms, {} orbits on {}",
            h.name(),
            group.len(),
            orbs.len(),
            sort
        );
        for g in &group {
            println!("  {:?}", g.perm());
        }
    }
    Ok(())
}
