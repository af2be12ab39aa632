//! Bispans X <- A -> B -> Y: composition of the generators, fiber
//! polynomials, and the canonical factorization.
//!
//!     cargo run --example bispans

use tambara::bispan::{bispan_equivalent, canonical_factorization, compose, fiber_polynomials, gen_n, gen_r, gen_t, recompose};
use tambara::group::Group;
use tambara::gset::{GMap, GSet};
use tambara::poly::VarNames;
use tambara::tamcheck::describe_map;

fn main() -> tambara::Result<()> {
    let g = Group::cyclic(2);
    let free = GSet::regular(&g);
    let pt = GSet::point(&g);
    let two = GSet::disjoint_union(&g, &[pt.clone(), pt.clone()]);
    let proj = GMap::to_point(&free);
    let fold = GMap::fold(&pt);
    let names = VarNames::default();

    // The norm along G/1 -> G/G of a sum of two inputs is (x0 + x1)^2.
    let phi = compose(&gen_n(&proj), &compose(&gen_r(&proj), &gen_t(&fold))?)?;
    println!("A = {}, B = {}", phi.a().size(), phi.b().size());
    for f in fiber_polynomials(&phi) {
        println!("fiber over y{}: {}", f.base, f.poly.display(&names));
    }

    let (p, q, r) = canonical_factorization(&phi);
    println!("p: {}\nq: {}\nr: {}", describe_map(&p), describe_map(&q), describe_map(&r));
    let back = recompose(&p, &q, &r)?;
    println!("T_r . N_q . R_p equivalent to the original: {}", bispan_equivalent(&phi, &back)?);

    let id = GMap::identity(&two);
    let twice = compose(&gen_t(&id), &gen_n(&id))?;
    println!("identity composite equivalent: {}", bispan_equivalent(&twice, &gen_r(&id))?);
    Ok(())
}
