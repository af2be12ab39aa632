//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! criteria execute sequentially and their timings are meaningful.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tambara::bispan::{
    bispan_equivalent, canonical_factorization, compose, fiber_polynomials, is_simple, recompose, Bispan,
};
use tambara::burnside::{norm_effective, BurnsideElement};
use tambara::group::{Group, Subgroup};
use tambara::gset::{dependent_product, gmaps, gsets_up_to, iso_over, random_gmap, random_gset, GMap, GSet};
use tambara::poly::{Poly, VarNames};
use tambara::report::Report;
use tambara::tamcheck::{check_tambara_axioms, EffectiveBurnside, InvariantRing, NormAsTransfer};
use tambara::witt::{
    ghost, ghost_is_injective, universal_add, universal_mul, unghost, verify_dress_siebeneicher_iso,
    verify_ghost_factorization, WittVector,
};
use tambara::words::{coherence_iso, enumerate_words, eval, supp, SetAssignment, Word};

type Outcome = Result<String, String>;

fn groups() -> Vec<Arc<Group>> {
    vec![
        Group::trivial(),
        Group::cyclic(2),
        Group::cyclic(3),
        Group::cyclic(4),
        Group::klein_four(),
        Group::cyclic(6),
        Group::symmetric(3).unwrap(),
        Group::dihedral(4),
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_failure(r: &Report) -> Option<String> {
    r.failures().next().map(|f| format!("{} {}: {}: {}", r.check, r.group, f.relation, f.witness.as_deref().unwrap_or("")))
}

fn ghost_factorization() -> Outcome {
    let start = Instant::now();
    for g in groups() {
        if let Some(f) = first_failure(&verify_ghost_factorization(&g, 0, 0)) {
            return Err(f);
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:.2?}, limit 60 s"))?;
    Ok(format!("8 groups, symbolic, {t:.2?} < 60 s"))
}

fn burnside_iso() -> Outcome {
    let mut n = 0;
    for g in groups() {
        let r = verify_dress_siebeneicher_iso(&g);
        if let Some(f) = first_failure(&r) {
            return Err(f);
        }
        n += r.results.len();
    }
    Ok(format!("{n} basis elements round trip"))
}

// Classical 2-typical sum and product polynomials for lengths 2 and 3,
// computed independently from w_k = Σ 2^i a_i^(2^(k-i)) with a computer
// algebra system.
const CLASSICAL_SUM: [&str; 3] = [
    "a0 + b0",
    "-a0*b0 + a1 + b1",
    "-a0^3*b0 - 2*a0^2*b0^2 + a0*a1*b0 - a0*b0^3 + a0*b0*b1 - a1*b1 + a2 + b2",
];
const CLASSICAL_PROD: [&str; 3] = [
    "a0*b0",
    "a0^2*b1 + a1*b0^2 + 2*a1*b1",
    "a0^4*b2 - a0^2*a1*b0^2*b1 - 2*a0^2*a1*b1^2 - 2*a1^2*b0^2*b1 - a1^2*b1^2 + 2*a1^2*b2 + a2*b0^4 + 2*a2*b1^2 + 4*a2*b2",
];

fn classical_witt() -> Outcome {
    for (g, len) in [(Group::cyclic(2), 2usize), (Group::cyclic(4), 3)] {
        // Classical index i sits at the class of index 2^i in C_{2^n},
        // which is poset position len-1-i.
        let mut names = VarNames::default();
        for i in 0..len {
            names.intern(&format!("a{}", len - 1 - i));
        }
        for i in 0..len {
            names.intern(&format!("b{}", len - 1 - i));
        }
        for (label, universal, oracle) in
            [("sum", universal_add(&g), &CLASSICAL_SUM), ("product", universal_mul(&g), &CLASSICAL_PROD)]
        {
            for k in 0..len {
                let want = names.parse(oracle[k], false).map_err(|e| e.to_string())?;
                let got = &universal[len - 1 - k];
                ensure(*got == want, || {
                    format!("{} {label} component {k}: {} != {}", g.name(), got.display(&names), want.display(&names))
                })?;
            }
        }
    }
    Ok("C(2) and C(4) sum and product agree with the 2-typical polynomials".into())
}

/// Subgroups of `s` up to conjugation by `s`.
fn classes_within(g: &Group, s: &Subgroup) -> Vec<Subgroup> {
    let mut reps: Vec<Subgroup> = Vec::new();
    for t in g.all_subgroups().iter().filter(|t| t.is_subset(s)) {
        if !reps.iter().any(|r| s.elements().iter().any(|&x| g.conjugate_subgroup(x, r) == *t)) {
            reps.push(t.clone());
        }
    }
    reps
}

/// Multisets of `S`-orbits `S/T` with total size at most `cap`, as lists of
/// indices into `reps`.
fn fibers_up_to(sizes: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..sizes.len() {
            if sizes[i] <= left {
                cur.push(i);
                go(sizes, i, left - sizes[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(sizes, 0, cap, &mut Vec::new(), &mut out);
    out
}

/// Every `p: A → X` up to isomorphism over X with fibers of size at most `cap`.
/// Over an orbit `G/S` the fiber is an `S`-set, and `⊔ S/T_j` induces to `⊔ G/T_j`.
fn effective_over(x: &GSet, cap: usize) -> Vec<GMap> {
    let g = x.group().clone();
    let orbits = x.orbits();
    let per_orbit: Vec<(u32, Vec<Subgroup>, Vec<Vec<usize>>)> = orbits
        .iter()
        .map(|o| {
            let s = x.stabilizer(o[0]);
            let reps = classes_within(&g, &s);
            let sizes: Vec<usize> = reps.iter().map(|t| s.order() / t.order()).collect();
            let fibers = fibers_up_to(&sizes, cap);
            (o[0], reps, fibers)
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; orbits.len()];
    loop {
        let mut parts = Vec::new();
        let mut table = Vec::new();
        for (k, (base, reps, fibers)) in per_orbit.iter().enumerate() {
            for &j in &fibers[choice[k]] {
                let c = GSet::coset_space(&g, &reps[j]);
                let origin = c.points().find(|&a| c.stabilizer(a) == reps[j]).expect("coset space has a base point");
                let mut t = vec![u32::MAX; c.size()];
                for e in g.elements() {
                    t[c.act(e, origin) as usize] = x.act(e, *base);
                }
                table.extend(t);
                parts.push(c);
            }
        }
        let a = GSet::disjoint_union(&g, &parts);
        out.push(GMap::new(a, x.clone(), table).expect("induced map is equivariant"));
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < per_orbit[k].2.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn norm_consistency() -> Outcome {
    let mut checked = 0usize;
    for g in [Group::cyclic(2), Group::cyclic(3), Group::symmetric(3).unwrap()] {
        let sets = gsets_up_to(&g, 4);
        for x in &sets {
            let inputs = effective_over(x, 3);
            for y in &sets {
                let mut reps: Vec<GMap> = Vec::new();
                for f in gmaps(x, y) {
                    if f.fibers().iter().any(|fib| fib.len() > 3) || reps.iter().any(|r| iso_over(r, &f).is_some()) {
                        continue;
                    }
                    reps.push(f);
                }
                for f in &reps {
                    for p in &inputs {
                        let by_marks = norm_effective(p, f).map_err(|e| e.to_string())?;
                        let explicit = dependent_product(p, f).map_err(|e| e.to_string())?;
                        let by_orbits = BurnsideElement::from_gset(explicit.object());
                        ensure(by_marks == by_orbits, || {
                            format!(
                                "{}: p = {:?}, f = {:?}: {} vs {}",
                                g.name(),
                                p.table(),
                                f.table(),
                                by_marks.display(&VarNames::default()),
                                by_orbits.display(&VarNames::default())
                            )
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (input, f) pairs over C(2), C(3), S(3), exhaustive up to isomorphism"))
}

fn random_map(source: &GSet, group: &Arc<Group>, rng: &mut ChaCha8Rng) -> Option<(GSet, GMap)> {
    for _ in 0..20 {
        let t = random_gset(group, 4, rng);
        if let Some(f) = random_gmap(source, &t, rng) {
            return Some((t, f));
        }
    }
    None
}

/// A bispan out of `x` with every object of size at most 4.
fn random_bispan_from(x: &GSet, rng: &mut ChaCha8Rng) -> Option<Bispan> {
    let g = x.group().clone();
    for _ in 0..50 {
        let a = random_gset(&g, 4, rng);
        let Some(p) = random_gmap(&a, x, rng) else { continue };
        let Some((_, q)) = random_map(&a, &g, rng) else { continue };
        let Some((_, r)) = random_map(q.target(), &g, rng) else { continue };
        return Bispan::new(p, q, r).ok();
    }
    None
}

fn random_bispan(g: &Arc<Group>, rng: &mut ChaCha8Rng) -> Bispan {
    loop {
        let x = random_gset(g, 4, rng);
        if let Some(b) = random_bispan_from(&x, rng) {
            return b;
        }
    }
}

fn substitution_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut total = 0;
    for g in [Group::cyclic(2), Group::symmetric(3).unwrap()] {
        let mut pairs = 0;
        let mut attempts = 0;
        while pairs < 500 {
            attempts += 1;
            ensure(attempts < 200_000, || format!("{}: only {pairs} simple pairs found", g.name()))?;
            let phi = random_bispan(&g, &mut rng);
            if !is_simple(&phi) {
                continue;
            }
            let Some(psi) = random_bispan_from(phi.y(), &mut rng) else { continue };
            if !is_simple(&psi) {
                continue;
            }
            let images: Vec<Poly> = fiber_polynomials(&phi).into_iter().map(|f| f.poly).collect();
            let composite = compose(&psi, &phi).map_err(|e| e.to_string())?;
            for (outer, got) in fiber_polynomials(&psi).iter().zip(fiber_polynomials(&composite)) {
                let want = outer.poly.substitute(&images);
                ensure(got.poly == want, || {
                    let n = VarNames::default();
                    format!("{}: over y{}: {} != {}", g.name(), got.base, got.poly.display(&n), want.display(&n))
                })?;
            }
            pairs += 1;
        }
        total += pairs;
    }
    Ok(format!("{total} simple composable pairs (500 each over C(2), S(3))"))
}

fn factorization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut n = 0;
    for g in [Group::cyclic(2), Group::cyclic(3), Group::klein_four(), Group::symmetric(3).unwrap()] {
        for _ in 0..60 {
            let phi = random_bispan(&g, &mut rng);
            let (p, q, r) = canonical_factorization(&phi);
            let back = recompose(&p, &q, &r).map_err(|e| e.to_string())?;
            ensure(bispan_equivalent(&phi, &back).map_err(|e| e.to_string())?, || {
                format!("{}: p = {:?}, q = {:?}, r = {:?}", g.name(), p.table(), q.table(), r.table())
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} seeded bispans recompose up to equivalence"))
}

fn tambara_suite() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for g in [Group::cyclic(2), Group::symmetric(3).unwrap()] {
        let inv = check_tambara_axioms(&InvariantRing::new(GSet::regular(&g)), 4, 1, 0);
        let bur = check_tambara_axioms(&EffectiveBurnside::new(&g, 3), 4, 1, 0);
        if let Some(f) = first_failure(&inv).or_else(|| first_failure(&bur)) {
            return Err(f);
        }
        let mutated = check_tambara_axioms(&NormAsTransfer(InvariantRing::new(GSet::regular(&g))), 4, 1, 0);
        let witness = mutated.failures().find_map(|f| f.witness.clone());
        ensure(witness.is_some(), || format!("mutated instance over {} passed", g.name()))?;
        lines.push(format!("{}: {} relations pass twice, mutation caught", g.name(), inv.results.len()));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:.2?}, limit 120 s"))?;
    Ok(format!("{}, {t:.2?} < 120 s", lines.join("; ")))
}

/// The cocycle identity, by two routes.
///
/// Every pair with equal simple support has its bijection defined by normal
/// forms, so for all words with at most 4 operators over {0, 1, x, y, z} we
/// check that normal forms are injective on the evaluation and that all words
/// of one support have the same image. Composites of such bijections then
/// agree for every triple. Independently, every triple of unit-free words with
/// at most 3 operators and every triple of words with units and at most 2
/// operators is composed directly.
fn cocycle() -> Outcome {
    let assignments = [
        SetAssignment::with_sizes(&[1, 2, 3]),
        SetAssignment::with_sizes(&[3, 3, 3]),
        SetAssignment::with_sizes(&[2, 0, 1]),
    ];
    let words = enumerate_words(3, 4);
    let mut images: HashMap<(usize, Poly), Vec<Vec<(u32, usize)>>> = HashMap::new();
    let mut simple = 0usize;
    for w in &words {
        let s = supp(w);
        if !s.is_simple() {
            continue;
        }
        simple += 1;
        for (ai, a) in assignments.iter().enumerate() {
            let mut nf: Vec<Vec<(u32, usize)>> = eval(w, a).map_err(|e| e.to_string())?.iter().map(|e| e.normal_form()).collect();
            nf.sort_unstable();
            let before = nf.len();
            nf.dedup();
            ensure(nf.len() == before, || format!("normal forms collide on {}", w.display(&VarNames::new(["x", "y", "z"]))))?;
            match images.get(&(ai, s.clone())) {
                Some(prev) => ensure(*prev == nf, || {
                    format!("image differs for {}", w.display(&VarNames::new(["x", "y", "z"])))
                })?,
                None => {
                    images.insert((ai, s.clone()), nf);
                }
            }
        }
    }

    let mut triples = 0usize;
    let direct: Vec<Word> = enumerate_words(3, 3)
        .into_iter()
        .filter(|w| {
            let unit_free = !has_unit(w);
            (unit_free || w.size() <= 2) && supp(w).is_simple()
        })
        .collect();
    let mut classes: BTreeMap<String, Vec<&Word>> = BTreeMap::new();
    for w in &direct {
        classes.entry(supp(w).display(&VarNames::default()).to_string()).or_default().push(w);
    }
    let a = SetAssignment::with_sizes(&[2, 1, 2]);
    for class in classes.values() {
        let n = class.len();
        let mut beta = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                beta[i * n + j] = coherence_iso(class[i], class[j], &a).map_err(|e| e.to_string())?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ij, jk, ik) = (&beta[i * n + j], &beta[j * n + k], &beta[i * n + k]);
                    ensure(ij.iter().map(|&m| jk[m]).eq(ik.iter().copied()), || {
                        let v = VarNames::new(["x", "y", "z"]);
                        format!("{} ; {} ; {}", class[i].display(&v), class[j].display(&v), class[k].display(&v))
                    })?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!(
        "{simple} simple words of {} checked by normal form; {triples} triples composed directly",
        words.len()
    ))
}

fn has_unit(w: &Word) -> bool {
    match w {
        Word::Zero | Word::One => true,
        Word::Var(_) => false,
        Word::Sum(a, b) | Word::Prod(a, b) => has_unit(a) || has_unit(b),
    }
}

fn injectivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for g in groups() {
        ensure(ghost_is_injective(&g), || format!("{}: zero on the ghost diagonal", g.name()))?;
        let mut seen: HashMap<Vec<Poly>, Vec<Poly>> = HashMap::new();
        for _ in 0..1000 {
            let degree = rng.gen_range(0..=2);
            let w = WittVector::random(&g, &mut rng, 2, degree, 5);
            let gh = ghost(&w);
            let back = unghost(&gh).map_err(|e| format!("{}: {e}", g.name()))?;
            ensure(back == w, || format!("{}: unghost(ghost(w)) != w", g.name()))?;
            if let Some(prev) = seen.insert(gh.coords().to_vec(), w.components().to_vec()) {
                ensure(prev == w.components(), || format!("{}: ghost collision", g.name()))?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} vectors over Z[x,y], no collisions, nonzero diagonals"))
}

fn determinism() -> Outcome {
    let cases = common::cases();
    for c in &cases {
        let first = common::run_line(&c.command);
        let second = common::run_line(&c.command);
        ensure(first == second, || format!("output differs between runs: {}", c.command))?;
        let want = format!("$ {}\n{}[exit {}]\n", c.command, c.expected, c.code);
        ensure(common::transcript(&c.command, &first) == want, || format!("golden mismatch: {}", c.command))?;
    }
    Ok(format!("{} golden commands byte-identical across two runs", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("ghost factorization", ghost_factorization),
        ("Burnside ring isomorphism", burnside_iso),
        ("classical Witt cross-check", classical_witt),
        ("norm consistency", norm_consistency),
        ("bispan substitution law", substitution_law),
        ("generator factorization round trip", factorization_round_trip),
        ("Tambara axiom suite", tambara_suite),
        ("coherence cocycle", cocycle),
        ("ghost injectivity", injectivity),
        ("CLI determinism", determinism),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: pass ({detail}) [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}) [{t:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
