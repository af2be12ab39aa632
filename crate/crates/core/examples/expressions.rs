//! The expression language shared with the command line: groups, G-sets,
//! maps, bispans, and Burnside elements written as text.
//!
//!     cargo run --example expressions

use tambara::bispan::fiber_polynomials;
use tambara::cli;
use tambara::dsl::{self, Env};
use tambara::poly::VarNames;

fn main() -> tambara::Result<()> {
    let mut env = Env::new();
    env.maps.insert("f".into(), dsl::parse_map("C(3)/<> -> C(3)/<1>")?);
    let e = dsl::parse_bispan("N(f) ; R(C(3)/<1> + C(3)/<1> -> C(3)/<1>)")?;
    println!("parsed: {e}");
    let phi = env.bispan(&e)?;
    for f in fiber_polynomials(&phi) {
        println!("fiber over y{}: {}", f.base, f.poly.display(&VarNames::default()));
    }

    let g = env.group(&dsl::parse_group("D(4)")?)?;
    let b = dsl::eval_burnside(&g, &dsl::parse_burnside("[G/1] - 2*[G/4a] + 3")?)?;
    println!("in A({}): {}", g.name(), b.display(&VarNames::default()));

    if let Err(err) = dsl::parse_group("S(3") {
        println!("S(3 -> {err}");
    }

    // The command line runs the same parser.
    let out = cli::run(["tambara", "witt", "ghost", "C(4)", "(1, 2, 3)"], &mut std::io::empty());
    print!("witt ghost C(4) (1, 2, 3) = {}", out.stdout);
    Ok(())
}
