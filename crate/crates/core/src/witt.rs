//! G-typical Witt vectors over torsion-free coefficient rings (the integers
//! and integer polynomial rings), the ghost map, and the Teichmüller map into
//! the Burnside ring.
//!
//! A Witt vector has one component per class of the subconjugacy poset, in
//! poset order (`[e]` first, `[G]` last). Ring operations are evaluations of
//! universal structure polynomials, built once per group by unghosting in
//! `ℤ[a_K, b_K]`. Their integrality is checked when they are built.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::{
    burnside_transfer, burnside_transfer_scaled, marks, norm_from_trivial, norm_from_trivial_scaled, table_of_marks,
    BurnsideElement, ScaledBurnside,
};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::poly::{Poly, VarNames};
use crate::report::{Outcome, Report};

#[derive(Clone, Debug, Default)]
pub(crate) struct WittCache {
    add: OnceLock<Vec<Poly>>,
    mul: OnceLock<Vec<Poly>>,
    neg: OnceLock<Vec<Poly>>,
    subgroups: OnceLock<Vec<Arc<Group>>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittVector {
    group: Arc<Group>,
    components: Vec<Poly>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhostVector {
    group: Arc<Group>,
    coords: Vec<Poly>,
}

fn check_len(group: &Group, n: usize) -> Result<()> {
    let want = group.poset().len();
    if n == want {
        Ok(())
    } else {
        Err(Error::ObjectMismatch(format!("expected {want} components, got {n}")))
    }
}

impl WittVector {
    pub fn new(group: &Arc<Group>, components: Vec<Poly>) -> Result<Self> {
        check_len(group, components.len())?;
        Ok(WittVector { group: group.clone(), components })
    }

    pub fn from_ints(group: &Arc<Group>, components: &[i64]) -> Result<Self> {
        Self::new(group, components.iter().map(|&c| Poly::constant(c)).collect())
    }

    pub fn zero(group: &Arc<Group>) -> Self {
        WittVector { group: group.clone(), components: vec![Poly::zero(); group.poset().len()] }
    }

    /// The unit: the preimage of the all-ones ghost vector, which is the
    /// indicator of `[G]`.
    pub fn one(group: &Arc<Group>) -> Self {
        let mut w = Self::zero(group);
        let top = group.poset().top();
        w.components[top] = Poly::one();
        w
    }

    /// The generic vector whose component at class `k` is the variable `offset + k`.
    pub fn generic(group: &Arc<Group>, offset: u32) -> Self {
        let n = group.poset().len() as u32;
        WittVector { group: group.clone(), components: (0..n).map(|k| Poly::var(offset + k)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(group: &Arc<Group>, rng: &mut R, n_vars: u32, max_degree: u32, bound: i64) -> Self {
        let components = (0..group.poset().len()).map(|_| Poly::random(rng, n_vars, max_degree, 3, bound)).collect();
        WittVector { group: group.clone(), components }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, class: usize) -> &Poly {
        &self.components[class]
    }

    pub fn is_integral(&self) -> bool {
        self.components.iter().all(|c| c.as_constant().is_some() || c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

impl GhostVector {
    pub fn new(group: &Arc<Group>, coords: Vec<Poly>) -> Result<Self> {
        check_len(group, coords.len())?;
        Ok(GhostVector { group: group.clone(), coords })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }
}

/// Names `a[label]` for the generic vector at offset 0 and `b[label]` at
/// offset `|O|`.
pub fn generic_names(group: &Group) -> VarNames {
    let o = group.poset();
    let a = (0..o.len()).map(|k| format!("a[{}]", o.label(k)));
    let b = (0..o.len()).map(|k| format!("b[{}]", o.label(k)));
    VarNames::new(a.chain(b))
}

/// `(K:H)` for class representatives, as an exponent.
fn index(group: &Group, k: usize, h: usize) -> u32 {
    let o = group.poset();
    (o.representative(k).order() / o.representative(h).order()) as u32
}

/// `Φ_H(α) = Σ_K |(G/K)^H|·α_K^{(K:H)}`.
pub fn ghost(w: &WittVector) -> GhostVector {
    let g = &w.group;
    let t = table_of_marks(g);
    let n = w.components.len();
    let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
    let coords = (0..n)
        .map(|h| {
            let mut acc = Poly::zero();
            for k in h..n {
                if t[k][h] == 0 || w.components[k].is_zero() {
                    continue;
                }
                let e = index(g, k, h);
                let p = powers.entry((k, e)).or_insert_with(|| w.components[k].pow(e));
                acc += &p.scale(&BigInt::from(t[k][h]));
            }
            acc
        })
        .collect();
    GhostVector { group: g.clone(), coords }
}

/// The inverse of [`ghost`] on its image, solving from `[G]` down. Fails with
/// the label of the first class where the division is inexact.
pub fn unghost(v: &GhostVector) -> Result<WittVector> {
    let g = &v.group;
    let o = g.poset();
    let t = table_of_marks(g);
    let n = v.coords.len();
    let mut comps = vec![Poly::zero(); n];
    for h in (0..n).rev() {
        let mut rest = v.coords[h].clone();
        for k in h + 1..n {
            if t[k][h] != 0 && !comps[k].is_zero() {
                rest = rest - comps[k].pow(index(g, k, h)).scale(&BigInt::from(t[k][h]));
            }
        }
        comps[h] = rest
            .div_exact(&BigInt::from(t[h][h]))
            .ok_or_else(|| Error::Integrality { class: o.label(h).to_string() })?;
    }
    Ok(WittVector { group: g.clone(), components: comps })
}

fn cache(group: &Group) -> &WittCache {
    &group.poset().witt_cache
}

fn universal(group: &Arc<Group>, op: impl Fn(&Poly, &Poly) -> Poly) -> Vec<Poly> {
    let n = group.poset().len() as u32;
    let ga = ghost(&WittVector::generic(group, 0));
    let gb = ghost(&WittVector::generic(group, n));
    let coords = ga.coords.iter().zip(&gb.coords).map(|(x, y)| op(x, y)).collect();
    match unghost(&GhostVector { group: group.clone(), coords }) {
        Ok(w) => w.components,
        Err(e) => panic!("universal Witt polynomial is not integral: {e}"),
    }
}

/// Sum polynomials `S_K(a, b)`; `a_K` is variable `K`, `b_K` is `|O| + K`.
pub fn universal_add(group: &Arc<Group>) -> &[Poly] {
    cache(group).add.get_or_init(|| universal(group, |x, y| x + y))
}

/// Product polynomials `P_K(a, b)`.
pub fn universal_mul(group: &Arc<Group>) -> &[Poly] {
    cache(group).mul.get_or_init(|| universal(group, |x, y| x * y))
}

/// Negation polynomials `N_K(a)`.
pub fn universal_neg(group: &Arc<Group>) -> &[Poly] {
    cache(group).neg.get_or_init(|| universal(group, |x, _| -x))
}

fn apply(polys: &[Poly], w1: &WittVector, w2: &WittVector) -> WittVector {
    let images: Vec<Poly> = w1.components.iter().chain(&w2.components).cloned().collect();
    WittVector { group: w1.group.clone(), components: polys.iter().map(|p| p.substitute(&images)).collect() }
}

pub fn witt_add(w1: &WittVector, w2: &WittVector) -> Result<WittVector> {
    w1.check(w2)?;
    Ok(apply(universal_add(&w1.group), w1, w2))
}

pub fn witt_mul(w1: &WittVector, w2: &WittVector) -> Result<WittVector> {
    w1.check(w2)?;
    Ok(apply(universal_mul(&w1.group), w1, w2))
}

pub fn witt_neg(w: &WittVector) -> WittVector {
    apply(universal_neg(&w.group), w, w)
}

/// Class representatives as groups in their own right, indexed by class.
fn subgroups(group: &Arc<Group>) -> &[Arc<Group>] {
    cache(group).subgroups.get_or_init(|| {
        let o = group.poset();
        (0..o.len()).map(|k| group.subgroup_as_group(o.representative(k))).collect()
    })
}

/// `τ(α) = Σ_K T_{K→G} N_{e→K}(α_K)`. Integral for integer vectors; a
/// symbolic vector may need [`teichmuller_tau_scaled`].
pub fn teichmuller_tau(w: &WittVector) -> Result<BurnsideElement> {
    let g = &w.group;
    let o = g.poset();
    let mut total = BurnsideElement::zero(g);
    for (k, c) in w.components.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let local = norm_from_trivial(&subgroups(g)[k], c)?;
        total = total.add(&burnside_transfer(g, o.representative(k), &local)?)?;
    }
    Ok(total)
}

/// τ over ℚ, for symbolic vectors.
pub fn teichmuller_tau_scaled(w: &WittVector) -> ScaledBurnside {
    let g = &w.group;
    let o = g.poset();
    let mut total = ScaledBurnside::integral(BurnsideElement::zero(g));
    for (k, c) in w.components.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let local = norm_from_trivial_scaled(&subgroups(g)[k], c);
        let up = burnside_transfer_scaled(g, o.representative(k), &local).expect("representative subgroup");
        total = total.add(&up).expect("same group");
    }
    total
}

fn show(polys: &[Poly], names: &VarNames) -> String {
    let parts: Vec<String> = polys.iter().map(|p| p.display(names).to_string()).collect();
    format!("({})", parts.join(", "))
}

fn compare(lhs: &[Poly], rhs: &[Poly], names: &VarNames) -> std::result::Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{} != {}", show(lhs, names), show(rhs, names)))
    }
}

/// Checks `marks(τ(α)) = ghost(α)` once over `ℤ[a_K]` and on `samples`
/// seeded integer vectors.
pub fn verify_ghost_factorization(group: &Arc<Group>, samples: usize, seed: u64) -> Report {
    let names = generic_names(group);
    let mut report = Report::new("ghost-factorization", group.name(), Some(seed), samples);
    let generic = WittVector::generic(group, 0);
    let symbolic = teichmuller_tau_scaled(&generic)
        .marks()
        .map_err(|e| e.to_string())
        .and_then(|m| compare(&m, &ghost(&generic).coords, &names));
    report.push(Outcome::from_result("marks(tau(a)) = ghost(a) symbolic", symbolic));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first_failure = None;
    for _ in 0..samples {
        let w = WittVector::random(group, &mut rng, 0, 0, 20);
        let r = teichmuller_tau(&w)
            .map_err(|e| format!("{}: {e}", show(&w.components, &names)))
            .and_then(|t| compare(&marks(&t), &ghost(&w).coords, &names));
        if let Err(e) = r {
            first_failure = Some(e);
            break;
        }
    }
    report.push(Outcome::from_result("marks(tau(a)) = ghost(a) sampled", first_failure.map_or(Ok(()), Err)));
    report
}

/// The Witt vector of a Burnside element: `unghost(marks(b))`.
pub fn witt_of_burnside(b: &BurnsideElement) -> Result<WittVector> {
    unghost(&GhostVector { group: b.group().clone(), coords: marks(b) })
}

/// For each basis element `[G/H]`: `unghost(marks([G/H]))` is integral and
/// maps back to `[G/H]` under τ.
pub fn verify_dress_siebeneicher_iso(group: &Arc<Group>) -> Report {
    let o = group.poset();
    let mut report = Report::new("dress-siebeneicher-iso", group.name(), None, o.len());
    let names = VarNames::default();
    for h in 0..o.len() {
        let basis = BurnsideElement::basis(group, h);
        let r = witt_of_burnside(&basis).map_err(|e| e.to_string()).and_then(|w| {
            if !w.is_integral() {
                return Err(format!("non-integral preimage {}", show(&w.components, &names)));
            }
            let back = teichmuller_tau(&w).map_err(|e| e.to_string())?;
            if back == basis {
                Ok(())
            } else {
                Err(format!("tau{} = {}", show(&w.components, &names), back.display(&names)))
            }
        });
        report.push(Outcome::from_result(format!("[G/{}] round trip", o.label(h)), r));
    }
    report
}

/// Checks `marks_H(T_{K→G} N_{e→K}(a)) = |(G/K)^H|·a^{(K:H)}` over `ℤ[a]`
/// for every pair of classes, and that the diagonal `|N_G(H)/H|` is nonzero.
pub fn ghost_injectivity_double_coset_identity(group: &Arc<Group>) -> Report {
    let o = group.poset();
    let t = table_of_marks(group);
    let n = o.len();
    let mut report = Report::new("double-coset-identity", group.name(), None, n * n);
    let names = VarNames::new(["a"]);
    let a = Poly::var(0);
    for k in 0..n {
        let local = norm_from_trivial_scaled(&subgroups(group)[k], &a);
        let up = burnside_transfer_scaled(group, o.representative(k), &local).expect("representative subgroup");
        let m = up.marks();
        for h in 0..n {
            let expected = if t[k][h] == 0 { Poly::zero() } else { a.pow(index(group, k, h)).scale(&BigInt::from(t[k][h])) };
            let r = match &m {
                Ok(m) => compare(&m[h..=h], &[expected], &names),
                Err(e) => Err(e.to_string()),
            };
            report.push(Outcome::from_result(format!("H={} K={}", o.label(h), o.label(k)), r));
        }
    }
    let zero_diag = (0..n).find(|&h| t[h][h] == 0);
    report.push(Outcome::from_result(
        "diagonal nonzero",
        zero_diag.map_or(Ok(()), |h| Err(format!("|N_G(H)/H| = 0 at {}", o.label(h)))),
    ));
    report
}

/// Largest poset for which associativity and distributivity are also checked
/// as polynomial identities; larger groups rely on the ghost identities plus
/// seeded samples.
const DIRECT_SYMBOLIC_LIMIT: usize = 8;

/// Ring axioms of `W_G`. Ghost additivity, multiplicativity and negation
/// are proven symbolically; with the nonzero diagonal they imply every
/// ring law. Commutativity and the unit laws are also checked symbolically,
/// associativity and distributivity directly on small posets and on
/// `samples` seeded vectors over `ℤ[x, y]`.
pub fn verify_ring_axioms(group: &Arc<Group>, samples: usize, seed: u64) -> Report {
    let o = group.poset();
    let n = o.len() as u32;
    let names = generic_names(group);
    let mut report = Report::new("ring-axioms", group.name(), Some(seed), samples);
    let a = WittVector::generic(group, 0);
    let b = WittVector::generic(group, n);
    let (ga, gb) = (ghost(&a), ghost(&b));
    let zip = |f: fn(&Poly, &Poly) -> Poly| -> Vec<Poly> { ga.coords.iter().zip(&gb.coords).map(|(x, y)| f(x, y)).collect() };

    let sum = apply(universal_add(group), &a, &b);
    report.push(Outcome::from_result("ghost(a+b) = ghost(a)+ghost(b)", compare(&ghost(&sum).coords, &zip(|x, y| x + y), &names)));
    let prod = apply(universal_mul(group), &a, &b);
    report.push(Outcome::from_result("ghost(a*b) = ghost(a)*ghost(b)", compare(&ghost(&prod).coords, &zip(|x, y| x * y), &names)));
    let neg = witt_neg(&a);
    let negated: Vec<Poly> = ga.coords.iter().map(|x| -x).collect();
    report.push(Outcome::from_result("ghost(-a) = -ghost(a)", compare(&ghost(&neg).coords, &negated, &names)));
    let t = table_of_marks(group);
    report.push(Outcome::from_result(
        "ghost injective",
        (0..o.len()).find(|&h| t[h][h] == 0).map_or(Ok(()), |h| Err(format!("zero diagonal at {}", o.label(h)))),
    ));

    let swap = |p: &Poly| p.rename(|v| if v < n { v + n } else { v - n });
    let swapped: Vec<Poly> = sum.components.iter().map(swap).collect();
    report.push(Outcome::from_result("a+b = b+a", compare(&sum.components, &swapped, &names)));
    let swapped: Vec<Poly> = prod.components.iter().map(swap).collect();
    report.push(Outcome::from_result("a*b = b*a", compare(&prod.components, &swapped, &names)));
    let zero = WittVector::zero(group);
    let one = WittVector::one(group);
    report.push(Outcome::from_result("a+0 = a", compare(&apply(universal_add(group), &a, &zero).components, &a.components, &names)));
    report.push(Outcome::from_result("a*1 = a", compare(&apply(universal_mul(group), &a, &one).components, &a.components, &names)));
    report.push(Outcome::from_result("a+(-a) = 0", compare(&apply(universal_add(group), &a, &neg).components, &zero.components, &names)));

    if o.len() <= DIRECT_SYMBOLIC_LIMIT {
        let c = WittVector::generic(group, 2 * n);
        let mut names3 = names.clone();
        for k in 0..o.len() {
            names3.intern(&format!("c[{}]", o.label(k)));
        }
        let add = |x: &WittVector, y: &WittVector| apply(universal_add(group), x, y);
        let mul = |x: &WittVector, y: &WittVector| apply(universal_mul(group), x, y);
        let l = add(&add(&a, &b), &c);
        let r = add(&a, &add(&b, &c));
        report.push(Outcome::from_result("(a+b)+c = a+(b+c) symbolic", compare(&l.components, &r.components, &names3)));
        let l = mul(&mul(&a, &b), &c);
        let r = mul(&a, &mul(&b, &c));
        report.push(Outcome::from_result("(a*b)*c = a*(b*c) symbolic", compare(&l.components, &r.components, &names3)));
        let l = mul(&a, &add(&b, &c));
        let r = add(&mul(&a, &b), &mul(&a, &c));
        report.push(Outcome::from_result("a*(b+c) = a*b+a*c symbolic", compare(&l.components, &r.components, &names3)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xy = VarNames::new(["x", "y"]);
    let mut assoc_add = Ok(());
    let mut assoc_mul = Ok(());
    let mut distrib = Ok(());
    for _ in 0..samples {
        let x = WittVector::random(group, &mut rng, 2, 1, 3);
        let y = WittVector::random(group, &mut rng, 2, 1, 3);
        let z = WittVector::random(group, &mut rng, 2, 1, 3);
        let add = |p: &WittVector, q: &WittVector| witt_add(p, q).expect("same group");
        let mul = |p: &WittVector, q: &WittVector| witt_mul(p, q).expect("same group");
        if assoc_add.is_ok() {
            assoc_add = compare(&add(&add(&x, &y), &z).components, &add(&x, &add(&y, &z)).components, &xy);
        }
        if assoc_mul.is_ok() {
            assoc_mul = compare(&mul(&mul(&x, &y), &z).components, &mul(&x, &mul(&y, &z)).components, &xy);
        }
        if distrib.is_ok() {
            distrib = compare(&mul(&x, &add(&y, &z)).components, &add(&mul(&x, &y), &mul(&x, &z)).components, &xy);
        }
    }
    report.push(Outcome::from_result("(a+b)+c = a+(b+c) sampled", assoc_add));
    report.push(Outcome::from_result("(a*b)*c = a*(b*c) sampled", assoc_mul));
    report.push(Outcome::from_result("a*(b+c) = a*b+a*c sampled", distrib));
    report
}

/// Whether the ghost diagonal is nonzero, which makes [`ghost`] injective.
pub fn ghost_is_injective(group: &Group) -> bool {
    let t = table_of_marks(group);
    (0..t.len()).all(|h| !t[h][h].is_zero())
}
