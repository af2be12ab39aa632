//! G-typical Witt vectors: ghost map, universal polynomials, and the
//! isomorphism with the Burnside ring.
//!
//!     cargo run --example witt_vectors

use tambara::burnside::BurnsideElement;
use tambara::group::Group;
use tambara::witt::{
    generic_names, ghost, teichmuller_tau, teichmuller_tau_scaled, universal_mul, unghost, verify_dress_siebeneicher_iso,
    witt_add, witt_mul, witt_of_burnside, WittVector,
};

fn main() -> tambara::Result<()> {
    let g = Group::cyclic(2);
    let o = g.poset();
    let names = generic_names(&g);
    for (k, p) in universal_mul(&g).iter().enumerate() {
        println!("product component at [{}]: {}", o.label(k), p.display(&names));
    }

    let a = WittVector::from_ints(&g, &[3, 1])?;
    let b = WittVector::from_ints(&g, &[2, 5])?;
    let show = |w: &WittVector| w.components().iter().map(|p| p.as_i64().unwrap()).collect::<Vec<_>>();
    println!("a + b = {:?}, a * b = {:?}", show(&witt_add(&a, &b)?), show(&witt_mul(&a, &b)?));
    let gh = ghost(&a);
    println!("ghost(a) = {:?}", gh.coords().iter().map(|p| p.as_i64().unwrap()).collect::<Vec<_>>());
    assert_eq!(unghost(&gh)?, a);

    // The Teichmüller map sends integral vectors into the Burnside ring, and
    // its inverse recovers the Witt vector.
    let g = Group::symmetric(3)?;
    let names = generic_names(&g);
    let w = WittVector::from_ints(&g, &[2, -1, 0, 4])?;
    let t = teichmuller_tau(&w)?;
    println!("tau(w) over {} = {}", g.name(), t.display(&names));
    assert_eq!(witt_of_burnside(&t)?, w);
    let generic = WittVector::generic(&g, 0);
    let s = teichmuller_tau_scaled(&generic);
    println!("tau of the generic vector = 1/{} * ({})", s.denominator, s.numerator.display(&names));
    let one = BurnsideElement::one(&g);
    println!("witt vector of the unit: {:?}", show(&witt_of_burnside(&one)?));

    let r = verify_dress_siebeneicher_iso(&g);
    for out in &r.results {
        println!("{:?}  {}", out.status, out.relation);
    }
    Ok(())
}
