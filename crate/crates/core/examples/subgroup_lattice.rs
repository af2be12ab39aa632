//! Conjugacy classes of subgroups, the table of marks, and orbit counts.
//!
//!     cargo run --example subgroup_lattice

use tambara::burnside::table_of_marks;
use tambara::group::Group;
use tambara::gset::GSet;

fn main() -> tambara::Result<()> {
    for g in [Group::cyclic(6), Group::symmetric(3)?, Group::dihedral(4)] {
        let o = g.poset();
        println!("{} (order {}), {} classes", g.name(), g.order(), o.len());
        for i in 0..o.len() {
            let c = o.class(i);
            let below: Vec<&str> = (0..o.len()).filter(|&j| j != i && o.leq(j, i)).map(|j| o.label(j)).collect();
            println!("  [{}] order {} with {} conjugates, contains {:?}", o.label(i), c.order(), c.members.len(), below);
        }
        println!("  table of marks, rows G/K, columns H:");
        for (k, row) in table_of_marks(&g).iter().enumerate() {
            println!("    G/{:<4}{:?}", o.label(k), row);
        }
    }

    // |X^H| for a G-set X depends only on its orbit decomposition.
    let g = Group::symmetric(3)?;
    let o = g.poset();
    let x = GSet::disjoint_union(&g, &[GSet::regular(&g), GSet::coset_space(&g, o.representative(1))]);
    println!("\nX = G/1 + G/{} over {}: {} points, {} orbits", o.label(1), g.name(), x.size(), x.orbits().len());
    println!("marks of X: {:?}", x.marks());
    Ok(())
}
