//! Burnside ring arithmetic through marks, with transfer and norm.
//!
//!     cargo run --example burnside_ring

use tambara::burnside::{burnside_mul, burnside_transfer, marks, norm_from_trivial, unmarks, BurnsideElement};
use tambara::group::Group;
use tambara::poly::{Poly, VarNames};

fn main() -> tambara::Result<()> {
    let g = Group::symmetric(3)?;
    let o = g.poset();
    let names = VarNames::default();

    let a = BurnsideElement::basis(&g, 1);
    let b = BurnsideElement::basis(&g, 2);
    let ab = burnside_mul(&a, &b)?;
    println!("{} * {} = {}", a.display(&names), b.display(&names), ab.display(&names));
    let sq = burnside_mul(&a, &a)?;
    println!("{} squared = {}", a.display(&names), sq.display(&names));

    // The mark homomorphism is injective, so the product is determined by marks.
    let m: Vec<String> = marks(&sq).iter().map(|p| p.display(&names).to_string()).collect();
    println!("marks: {m:?}");
    let back = unmarks(&g, &marks(&sq))?;
    assert_eq!(back, sq);

    // Not every vector of integers is a vector of marks.
    match unmarks(&g, &[Poly::constant(1), Poly::zero(), Poly::zero(), Poly::zero()]) {
        Err(e) => println!("unmarks (1, 0, 0, 0): {e}"),
        Ok(x) => println!("unmarks (1, 0, 0, 0) = {}", x.display(&names)),
    }

    // Transfer from the order 2 subgroup, and the norm of a trivial set of size x.
    let h = o.representative(1).clone();
    let hg = g.subgroup_as_group(&h);
    let two = BurnsideElement::from_ints(&hg, &[0, 2])?;
    println!("transfer of 2*[H/H] = {}", burnside_transfer(&g, &h, &two)?.display(&names));
    let xs = VarNames::new(["x"]);
    let n = norm_from_trivial(&g, &Poly::var(0));
    match n {
        Ok(n) => println!("N(x) = {}", n.display(&xs)),
        Err(e) => println!("N(x): {e}"),
    }
    Ok(())
}
