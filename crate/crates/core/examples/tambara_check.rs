//! Exhaustive check of the Tambara functor relations on small G-sets, for a
//! fixed-point functor, the effective Burnside functor, and a broken variant
//! whose norm is replaced by transfer.
//!
//!     cargo run --release --example tambara_check

use tambara::group::Group;
use tambara::gset::GSet;
use tambara::tamcheck::{check_tambara_axioms, EffectiveBurnside, InvariantRing, NormAsTransfer};
use tambara::report::Report;

fn show(r: &Report) {
    println!("{} over {}: {}", r.check, r.group, if r.passed() { "all relations hold" } else { "FAILED" });
    for o in r.failures().take(3) {
        println!("  {}: {}", o.relation, o.witness.as_deref().unwrap_or(""));
    }
}

fn main() {
    let budget = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let g = Group::cyclic(2);
    show(&check_tambara_axioms(&InvariantRing::new(GSet::regular(&g)), budget, 1, 7));
    show(&check_tambara_axioms(&EffectiveBurnside::new(&g, 3), budget, 1, 7));
    show(&check_tambara_axioms(&NormAsTransfer(InvariantRing::new(GSet::regular(&g))), budget, 1, 7));
}
