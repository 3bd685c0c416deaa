//! Load an algebra from TOML, validate it and write it back.

use lgeom::algebra::{automorphisms, check_identities, FiniteAlgebra};

const TEXT: &str = r#"
name = "M3"
size = 3
identities = [["mul(x1,x2)", "mul(x2,x1)"], ["mul(x1,one)", "x1"]]

[[ops]]
name = "mul"
arity = 2
table = [0, 0, 0,
         0, 1, 2,
         0, 2, 1]

[[consts]]
name = "one"
value = 1
"#;

fn main() -> lgeom::Result<()> {
    let h = FiniteAlgebra::from_toml(TEXT)?;
    println!(
        "{}: {} elements, ops {}",
        h.name(),
        h.size(),
        h.signature().describe_ops()
    );
    println!("automorphisms: {}", automorphisms(&h).len());
    println!("identities hold: {}", check_identities(&h).holds);
    print!("{}", h.to_toml());
    Ok(())
}
