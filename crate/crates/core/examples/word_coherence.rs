//! Words in + and *, their support polynomials, and the canonical bijection
//! between the evaluations of two words with the same support.
//!
//!     cargo run --example word_coherence

use tambara::poly::VarNames;
use tambara::words::{coherence_iso, eval, supp, SetAssignment, Word};

fn main() -> tambara::Result<()> {
    let names = VarNames::new(["x", "y", "z"]);
    let (x, y, z) = (Word::Var(0), Word::Var(1), Word::Var(2));
    let lhs = Word::prod(x.clone(), Word::sum(y.clone(), z.clone()));
    let rhs = Word::sum(Word::prod(x.clone(), y), Word::prod(x, z));
    println!("supp({}) = {}", lhs.display(&names), supp(&lhs).display(&names));
    println!("supp({}) = {}", rhs.display(&names), supp(&rhs).display(&names));

    let sets = SetAssignment::new(vec![
        vec!["a".into(), "b".into()],
        vec!["p".into()],
        vec!["u".into(), "v".into()],
    ])?;
    let src = eval(&lhs, &sets)?;
    let dst = eval(&rhs, &sets)?;
    let beta = coherence_iso(&lhs, &rhs, &sets)?;
    for (i, &j) in beta.iter().enumerate() {
        println!("{:?}  ->  {:?}", src[i].normal_form(), dst[j].normal_form());
    }

    let bad = Word::prod(Word::Var(0), Word::Var(0));
    if let Err(e) = coherence_iso(&bad, &Word::Var(0), &sets) {
        println!("{} vs x: {e}", bad.display(&names));
    }
    Ok(())
}
