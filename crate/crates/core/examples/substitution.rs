//! Substitution acting on value sets: pulling back along a term map agrees
//! with evaluating the substituted formula.

use lgeom::algebra::builtin;
use lgeom::formula::parse_formula;
use lgeom::semantics::{pullback_substitution, val};
use lgeom::terms::{compose_term_maps, parse_term};
use lgeom::{Formula, TermMap, VarContext};

fn main() -> lgeom::Result<()> {
    let z3 = builtin::cyclic(3);
    let sig = z3.signature();
    let sort = VarContext::parse("x1,x2")?;
    let u = parse_formula("x1 == add(x2,x2)", &sort, sig)?;
    let a = val(&u, &z3)?;
    let s = TermMap::new(
        sort.clone(),
        sort.clone(),
        vec![parse_term("add(x1,x2)", &sort, sig)?, parse_term("x1", &sort, sig)?],
    )?;
    println!("A = val({}) = {a}", u.display(sig));
    println!("s = {}", s.display(sig));
    let pulled = pullback_substitution(&a, &s, &z3)?;
    let direct = val(&Formula::subst(s.clone(), u.clone())?, &z3)?;
    println!("s_* A          = {pulled}");
    println!("val(s u)       = {direct}");
    let twice = compose_term_maps(&s, &s)?;
    println!("(s s)_* A      = {}", pullback_substitution(&a, &twice, &z3)?);
    println!("s_* (s_* A)    = {}", pullback_substitution(&pulled, &s, &z3)?);
    Ok(())
}
