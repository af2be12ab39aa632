//! Tambara functors given by their structure maps, and a checker for the
//! relations between restriction, transfer and norm.
//!
//! The checker enumerates every G-set up to a size budget and every map
//! between them, then tests each relation on seeded random values. Maps
//! that enter a relation only through their source are taken up to
//! automorphism of the source; the relations are invariant under that
//! action, so nothing is lost.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::gset::{
    dependent_product, exponential_diagram, gmaps, gsets_up_to, iso_over, orbits_under, pullback, random_gmap,
    random_gset, GMap, GSet,
};
use crate::report::{Outcome, Report};

/// A Tambara functor (or semi-Tambara functor, when `neg` is unavailable).
/// Restriction is contravariant; transfer and norm are covariant.
pub trait TambaraInstance: Sync {
    type Value: Clone + Send;

    fn name(&self) -> String;
    fn group(&self) -> &Arc<Group>;
    fn zero(&self, x: &GSet) -> Self::Value;
    fn one(&self, x: &GSet) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Additive inverse, if the levels are rings rather than semirings.
    fn neg(&self, a: &Self::Value) -> Option<Self::Value>;
    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool;
    /// `R_f : S(Y) → S(X)` for `f : X → Y`.
    fn restriction(&self, f: &GMap, v: &Self::Value) -> Self::Value;
    /// `T_f : S(X) → S(Y)`.
    fn transfer(&self, f: &GMap, v: &Self::Value) -> Self::Value;
    /// `N_f : S(X) → S(Y)`.
    fn norm(&self, f: &GMap, v: &Self::Value) -> Self::Value;
    fn sample(&self, x: &GSet, rng: &mut ChaCha8Rng) -> Self::Value;
    fn describe(&self, v: &Self::Value) -> String;
}

// ---------------------------------------------------------------------------
// Invariant ring

/// `X ↦` equivariant functions `h : X → Map(S, ℤ)`, i.e. functions on
/// `X × S` constant on diagonal orbits, with pointwise ring structure.
#[derive(Clone, Debug)]
pub struct InvariantRing {
    base: GSet,
}

/// A value `h(x)(s)`, stored at `x·|S| + s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantValue {
    x: GSet,
    vals: Vec<BigInt>,
}

impl InvariantValue {
    pub fn level(&self) -> &GSet {
        &self.x
    }

    pub fn values(&self) -> &[BigInt] {
        &self.vals
    }
}

impl InvariantRing {
    pub fn new(base: GSet) -> Self {
        InvariantRing { base }
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    /// Orbits of `X × S`, which index a basis of the level at X.
    fn orbits(&self, x: &GSet) -> Vec<Vec<u32>> {
        let prod = x.product(&self.base).expect("same group");
        let elems: Vec<u32> = prod.group().elements().collect();
        let pts: Vec<u32> = prod.points().collect();
        orbits_under(&prod, &elems, &pts)
    }

    /// Rank of the level at X: the number of G-orbits of `X × S`.
    pub fn level_rank(&self, x: &GSet) -> usize {
        self.orbits(x).len()
    }

    /// Checks `h(gx)(s) = h(x)(g⁻¹s)`.
    pub fn value(&self, x: &GSet, vals: Vec<BigInt>) -> Result<InvariantValue> {
        let s = &self.base;
        if vals.len() != x.size() * s.size() {
            return Err(Error::ObjectMismatch(format!("expected {} values", x.size() * s.size())));
        }
        let g = x.group();
        for e in g.elements() {
            for p in x.points() {
                for q in s.points() {
                    let moved = x.act(e, p) as usize * s.size() + s.act(e, q) as usize;
                    if vals[moved] != vals[p as usize * s.size() + q as usize] {
                        return Err(Error::NotEquivariant(format!("value at ({p}, {q}) is not invariant")));
                    }
                }
            }
        }
        Ok(InvariantValue { x: x.clone(), vals })
    }

    fn constant(&self, x: &GSet, c: BigInt) -> InvariantValue {
        InvariantValue { x: x.clone(), vals: vec![c; x.size() * self.base.size()] }
    }

    fn pointwise(&self, a: &InvariantValue, b: &InvariantValue, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> InvariantValue {
        assert_eq!(a.x, b.x, "values at different levels");
        InvariantValue { x: a.x.clone(), vals: a.vals.iter().zip(&b.vals).map(|(p, q)| op(p, q)).collect() }
    }

    fn fiberwise(&self, f: &GMap, v: &InvariantValue, unit: BigInt, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> InvariantValue {
        let n = self.base.size();
        let mut vals = vec![unit; f.target().size() * n];
        for x in f.source().points() {
            let y = f.apply(x) as usize;
            for s in 0..n {
                vals[y * n + s] = op(&vals[y * n + s], &v.vals[x as usize * n + s]);
            }
        }
        InvariantValue { x: f.target().clone(), vals }
    }
}

impl TambaraInstance for InvariantRing {
    type Value = InvariantValue;

    fn name(&self) -> String {
        "invariant".into()
    }

    fn group(&self) -> &Arc<Group> {
        self.base.group()
    }

    fn zero(&self, x: &GSet) -> InvariantValue {
        self.constant(x, BigInt::zero())
    }

    fn one(&self, x: &GSet) -> InvariantValue {
        self.constant(x, BigInt::one())
    }

    fn add(&self, a: &InvariantValue, b: &InvariantValue) -> InvariantValue {
        self.pointwise(a, b, |p, q| p + q)
    }

    fn mul(&self, a: &InvariantValue, b: &InvariantValue) -> InvariantValue {
        self.pointwise(a, b, |p, q| p * q)
    }

    fn neg(&self, a: &InvariantValue) -> Option<InvariantValue> {
        Some(InvariantValue { x: a.x.clone(), vals: a.vals.iter().map(|p| -p).collect() })
    }

    fn equal(&self, a: &InvariantValue, b: &InvariantValue) -> bool {
        a == b
    }

    fn restriction(&self, f: &GMap, v: &InvariantValue) -> InvariantValue {
        let n = self.base.size();
        let vals = f
            .source()
            .points()
            .flat_map(|x| {
                let y = f.apply(x) as usize;
                v.vals[y * n..(y + 1) * n].iter().cloned()
            })
            .collect();
        InvariantValue { x: f.source().clone(), vals }
    }

    fn transfer(&self, f: &GMap, v: &InvariantValue) -> InvariantValue {
        self.fiberwise(f, v, BigInt::zero(), |p, q| p + q)
    }

    fn norm(&self, f: &GMap, v: &InvariantValue) -> InvariantValue {
        self.fiberwise(f, v, BigInt::one(), |p, q| p * q)
    }

    fn sample(&self, x: &GSet, rng: &mut ChaCha8Rng) -> InvariantValue {
        let mut vals = vec![BigInt::zero(); x.size() * self.base.size()];
        for orbit in self.orbits(x) {
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            for p in orbit {
                vals[p as usize] = c.clone();
            }
        }
        InvariantValue { x: x.clone(), vals }
    }

    fn describe(&self, v: &InvariantValue) -> String {
        let vals: Vec<String> = v.vals.iter().map(|c| c.to_string()).collect();
        format!("{} : [{}]", describe_gset(&v.x), vals.join(","))
    }
}

// ---------------------------------------------------------------------------
// Effective Burnside functor

/// `X ↦` G-sets over X up to isomorphism. Sum is disjoint union, product is
/// fiber product, restriction is pullback, transfer is composition and norm
/// is the dependent product.
#[derive(Clone, Debug)]
pub struct EffectiveBurnside {
    group: Arc<Group>,
    sample_size: usize,
}

impl EffectiveBurnside {
    /// Sampled values have at most `sample_size` points.
    pub fn new(group: &Arc<Group>, sample_size: usize) -> Self {
        EffectiveBurnside { group: group.clone(), sample_size }
    }
}

impl TambaraInstance for EffectiveBurnside {
    type Value = GMap;

    fn name(&self) -> String {
        "burnside".into()
    }

    fn group(&self) -> &Arc<Group> {
        &self.group
    }

    fn zero(&self, x: &GSet) -> GMap {
        GMap::from_empty(x)
    }

    fn one(&self, x: &GSet) -> GMap {
        GMap::identity(x)
    }

    fn add(&self, a: &GMap, b: &GMap) -> GMap {
        let sum = GMap::coproduct(a, b).expect("same group");
        GMap::fold(a.target()).after(&sum).expect("fold matches coproduct")
    }

    fn mul(&self, a: &GMap, b: &GMap) -> GMap {
        let pb = pullback(a, b).expect("same base");
        a.after(&pb.first).expect("pullback leg")
    }

    fn neg(&self, _: &GMap) -> Option<GMap> {
        None
    }

    fn equal(&self, a: &GMap, b: &GMap) -> bool {
        iso_over(a, b).is_some()
    }

    fn restriction(&self, f: &GMap, v: &GMap) -> GMap {
        pullback(f, v).expect("common target").first
    }

    fn transfer(&self, f: &GMap, v: &GMap) -> GMap {
        f.after(v).expect("composable")
    }

    fn norm(&self, f: &GMap, v: &GMap) -> GMap {
        dependent_product(v, f).expect("composable").map
    }

    fn sample(&self, x: &GSet, rng: &mut ChaCha8Rng) -> GMap {
        for _ in 0..16 {
            let a = random_gset(&self.group, self.sample_size, rng);
            if let Some(m) = random_gmap(&a, x, rng) {
                return m;
            }
        }
        GMap::from_empty(x)
    }

    fn describe(&self, v: &GMap) -> String {
        describe_map(v)
    }
}

// ---------------------------------------------------------------------------
// Mutation

/// Any instance with its norm replaced by its transfer. Used to confirm the
/// checker detects broken structure maps.
#[derive(Clone, Debug)]
pub struct NormAsTransfer<I>(pub I);

impl<I: TambaraInstance> TambaraInstance for NormAsTransfer<I> {
    type Value = I::Value;

    fn name(&self) -> String {
        format!("{}-mutated", self.0.name())
    }

    fn group(&self) -> &Arc<Group> {
        self.0.group()
    }

    fn zero(&self, x: &GSet) -> I::Value {
        self.0.zero(x)
    }

    fn one(&self, x: &GSet) -> I::Value {
        self.0.one(x)
    }

    fn add(&self, a: &I::Value, b: &I::Value) -> I::Value {
        self.0.add(a, b)
    }

    fn mul(&self, a: &I::Value, b: &I::Value) -> I::Value {
        self.0.mul(a, b)
    }

    fn neg(&self, a: &I::Value) -> Option<I::Value> {
        self.0.neg(a)
    }

    fn equal(&self, a: &I::Value, b: &I::Value) -> bool {
        self.0.equal(a, b)
    }

    fn restriction(&self, f: &GMap, v: &I::Value) -> I::Value {
        self.0.restriction(f, v)
    }

    fn transfer(&self, f: &GMap, v: &I::Value) -> I::Value {
        self.0.transfer(f, v)
    }

    fn norm(&self, f: &GMap, v: &I::Value) -> I::Value {
        self.0.transfer(f, v)
    }

    fn sample(&self, x: &GSet, rng: &mut ChaCha8Rng) -> I::Value {
        self.0.sample(x, rng)
    }

    fn describe(&self, v: &I::Value) -> String {
        self.0.describe(v)
    }
}

// ---------------------------------------------------------------------------
// Checker

pub fn describe_gset(x: &GSet) -> String {
    let o = x.group().poset();
    let parts: Vec<String> = x.orbit_decompose().iter().map(|&c| format!("G/{}", o.label(c))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn describe_map(f: &GMap) -> String {
    let t: Vec<String> = f.table().iter().map(|p| p.to_string()).collect();
    format!("{} -> {} : [{}]", describe_gset(f.source()), describe_gset(f.target()), t.join(","))
}

/// Every G-set up to the budget and the maps between them.
struct Universe {
    sets: Vec<GSet>,
    /// `all[i][j]`: every map `sets[i] → sets[j]`.
    all: Vec<Vec<Vec<GMap>>>,
    /// `reduced[i][j]`: one map per orbit of `Aut(sets[i])`.
    reduced: Vec<Vec<Vec<GMap>>>,
}

impl Universe {
    fn new(group: &Arc<Group>, budget: usize) -> Self {
        let sets = gsets_up_to(group, budget);
        let all: Vec<Vec<Vec<GMap>>> = sets.iter().map(|x| sets.iter().map(|y| gmaps(x, y)).collect()).collect();
        let reduced = all
            .iter()
            .map(|row| {
                row.iter()
                    .map(|maps| {
                        let mut reps: Vec<GMap> = Vec::new();
                        for m in maps {
                            if !reps.iter().any(|r| iso_over(r, m).is_some()) {
                                reps.push(m.clone());
                            }
                        }
                        reps
                    })
                    .collect()
            })
            .collect();
        Universe { sets, all, reduced }
    }

    fn n(&self) -> usize {
        self.sets.len()
    }

    fn reduced_maps(&self) -> impl Iterator<Item = &GMap> {
        self.reduced.iter().flatten().flatten()
    }

    /// `(f, h)` with `f : X → Y` up to `Aut(X)`, `h : Y → Z` arbitrary.
    fn composable(&self) -> impl Iterator<Item = (&GMap, &GMap)> {
        let n = self.n();
        (0..n).flat_map(move |y| {
            (0..n).flat_map(move |x| {
                self.reduced[x][y].iter().flat_map(move |f| (0..n).flat_map(move |z| self.all[y][z].iter().map(move |h| (f, h))))
            })
        })
    }

    /// `(f, g)` with a common target, both up to automorphism of the source.
    fn cospans(&self) -> impl Iterator<Item = (&GMap, &GMap)> {
        let n = self.n();
        (0..n).flat_map(move |y| {
            (0..n).flat_map(move |x| {
                self.reduced[x][y]
                    .iter()
                    .flat_map(move |f| (0..n).flat_map(move |x2| self.reduced[x2][y].iter().map(move |g| (f, g))))
            })
        })
    }
}

type Check<'a, I> = Box<dyn Fn(&I, &Universe, &mut ChaCha8Rng, usize) -> std::result::Result<(), String> + Send + Sync + 'a>;

fn witness<I: TambaraInstance>(t: &I, what: &str, maps: &[(&str, &GMap)], vals: &[(&str, &I::Value)]) -> String {
    let mut parts = vec![what.to_string()];
    parts.extend(maps.iter().map(|(n, m)| format!("{n} = {}", describe_map(m))));
    parts.extend(vals.iter().map(|(n, v)| format!("{n} = {}", t.describe(v))));
    parts.join("; ")
}

fn ensure(ok: bool, w: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(w())
    }
}

fn level_laws<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for x in &u.sets {
        for _ in 0..samples {
            let (a, b, c) = (t.sample(x, rng), t.sample(x, rng), t.sample(x, rng));
            let w = |law: &str| witness(t, law, &[], &[("a", &a), ("b", &b), ("c", &c)]);
            let eq = |p: &I::Value, q: &I::Value| t.equal(p, q);
            ensure(eq(&t.add(&a, &b), &t.add(&b, &a)), || w("a+b = b+a"))?;
            ensure(eq(&t.add(&t.add(&a, &b), &c), &t.add(&a, &t.add(&b, &c))), || w("(a+b)+c = a+(b+c)"))?;
            ensure(eq(&t.add(&a, &t.zero(x)), &a), || w("a+0 = a"))?;
            ensure(eq(&t.mul(&a, &b), &t.mul(&b, &a)), || w("ab = ba"))?;
            ensure(eq(&t.mul(&t.mul(&a, &b), &c), &t.mul(&a, &t.mul(&b, &c))), || w("(ab)c = a(bc)"))?;
            ensure(eq(&t.mul(&a, &t.one(x)), &a), || w("a1 = a"))?;
            ensure(eq(&t.mul(&a, &t.zero(x)), &t.zero(x)), || w("a0 = 0"))?;
            ensure(eq(&t.mul(&a, &t.add(&b, &c)), &t.add(&t.mul(&a, &b), &t.mul(&a, &c))), || w("a(b+c) = ab+ac"))?;
            if let Some(na) = t.neg(&a) {
                ensure(eq(&t.add(&a, &na), &t.zero(x)), || w("a+(-a) = 0"))?;
            }
        }
    }
    Ok(())
}

fn restriction_functorial<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for x in &u.sets {
        for _ in 0..samples {
            let v = t.sample(x, rng);
            ensure(t.equal(&t.restriction(&GMap::identity(x), &v), &v), || witness(t, "R_id = id", &[], &[("v", &v)]))?;
        }
    }
    for (f, h) in u.composable() {
        let hf = h.after(f).expect("composable");
        for _ in 0..samples {
            let v = t.sample(h.target(), rng);
            let lhs = t.restriction(&hf, &v);
            let rhs = t.restriction(f, &t.restriction(h, &v));
            ensure(t.equal(&lhs, &rhs), || witness(t, "R_{hf} = R_f R_h", &[("f", f), ("h", h)], &[("v", &v)]))?;
        }
    }
    Ok(())
}

fn covariant_functorial<I: TambaraInstance>(
    t: &I,
    u: &Universe,
    rng: &mut ChaCha8Rng,
    samples: usize,
    name: &str,
    op: impl Fn(&GMap, &I::Value) -> I::Value,
) -> std::result::Result<(), String> {
    for x in &u.sets {
        for _ in 0..samples {
            let v = t.sample(x, rng);
            ensure(t.equal(&op(&GMap::identity(x), &v), &v), || witness(t, &format!("{name}_id = id"), &[], &[("v", &v)]))?;
        }
    }
    for (f, h) in u.composable() {
        let hf = h.after(f).expect("composable");
        for _ in 0..samples {
            let v = t.sample(f.source(), rng);
            let lhs = op(&hf, &v);
            let rhs = op(h, &op(f, &v));
            ensure(t.equal(&lhs, &rhs), || witness(t, &format!("{name}_{{hf}} = {name}_h {name}_f"), &[("f", f), ("h", h)], &[("v", &v)]))?;
        }
    }
    Ok(())
}

fn restriction_ring_hom<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for f in u.reduced_maps() {
        let y = f.target();
        let w0 = |law: &str| witness(t, law, &[("f", f)], &[]);
        ensure(t.equal(&t.restriction(f, &t.one(y)), &t.one(f.source())), || w0("R(1) = 1"))?;
        ensure(t.equal(&t.restriction(f, &t.zero(y)), &t.zero(f.source())), || w0("R(0) = 0"))?;
        for _ in 0..samples {
            let (a, b) = (t.sample(y, rng), t.sample(y, rng));
            let w = |law: &str| witness(t, law, &[("f", f)], &[("a", &a), ("b", &b)]);
            let r = |v: &I::Value| t.restriction(f, v);
            ensure(t.equal(&r(&t.add(&a, &b)), &t.add(&r(&a), &r(&b))), || w("R(a+b) = R(a)+R(b)"))?;
            ensure(t.equal(&r(&t.mul(&a, &b)), &t.mul(&r(&a), &r(&b))), || w("R(ab) = R(a)R(b)"))?;
        }
    }
    Ok(())
}

fn transfer_additive<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for f in u.reduced_maps() {
        let x = f.source();
        ensure(t.equal(&t.transfer(f, &t.zero(x)), &t.zero(f.target())), || witness(t, "T(0) = 0", &[("f", f)], &[]))?;
        for _ in 0..samples {
            let (a, b) = (t.sample(x, rng), t.sample(x, rng));
            let lhs = t.transfer(f, &t.add(&a, &b));
            let rhs = t.add(&t.transfer(f, &a), &t.transfer(f, &b));
            ensure(t.equal(&lhs, &rhs), || witness(t, "T(a+b) = T(a)+T(b)", &[("f", f)], &[("a", &a), ("b", &b)]))?;
        }
    }
    Ok(())
}

fn norm_multiplicative<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for f in u.reduced_maps() {
        let x = f.source();
        ensure(t.equal(&t.norm(f, &t.one(x)), &t.one(f.target())), || witness(t, "N(1) = 1", &[("f", f)], &[]))?;
        for _ in 0..samples {
            let (a, b) = (t.sample(x, rng), t.sample(x, rng));
            let lhs = t.norm(f, &t.mul(&a, &b));
            let rhs = t.mul(&t.norm(f, &a), &t.norm(f, &b));
            ensure(t.equal(&lhs, &rhs), || witness(t, "N(ab) = N(a)N(b)", &[("f", f)], &[("a", &a), ("b", &b)]))?;
        }
    }
    Ok(())
}

/// `R_g ∘ op_f = op_{f'} ∘ R_{g'}` for the pullback `X' = Y' ×_Y X`.
fn base_change<I: TambaraInstance>(
    t: &I,
    u: &Universe,
    rng: &mut ChaCha8Rng,
    samples: usize,
    name: &str,
    op: impl Fn(&GMap, &I::Value) -> I::Value,
) -> std::result::Result<(), String> {
    for (f, g) in u.cospans() {
        let pb = pullback(g, f).expect("common target");
        let (f2, g2) = (&pb.first, &pb.second);
        for _ in 0..samples {
            let v = t.sample(f.source(), rng);
            let lhs = t.restriction(g, &op(f, &v));
            let rhs = op(f2, &t.restriction(g2, &v));
            ensure(t.equal(&lhs, &rhs), || {
                witness(t, &format!("R_g {name}_f = {name}_f' R_g'"), &[("f", f), ("g", g)], &[("v", &v)])
            })?;
        }
    }
    Ok(())
}

/// `T_q N_{f'} R_e = N_f T_p` on the exponential diagram of `(p, f)`.
fn exponential<I: TambaraInstance>(t: &I, u: &Universe, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
    for (p, f) in u.composable() {
        let d = exponential_diagram(p, f).expect("composable");
        for _ in 0..samples {
            let v = t.sample(p.source(), rng);
            let lhs = t.transfer(d.pi_p(), &t.norm(&d.f_prime, &t.restriction(&d.e, &v)));
            let rhs = t.norm(f, &t.transfer(p, &v));
            ensure(t.equal(&lhs, &rhs), || witness(t, "T_q N_f' R_e = N_f T_p", &[("p", p), ("f", f)], &[("v", &v)]))?;
        }
    }
    Ok(())
}

/// Checks every relation over all G-sets of size at most `budget`, with
/// `samples` seeded random values per instance of a relation. Relations run
/// on separate threads, each with its own random stream, so the report does
/// not depend on scheduling.
pub fn check_tambara_axioms<I: TambaraInstance>(t: &I, budget: usize, samples: usize, seed: u64) -> Report {
    let u = Universe::new(t.group(), budget);
    let checks: Vec<(&str, Check<I>)> = vec![
        ("level ring laws", Box::new(level_laws)),
        ("R functorial", Box::new(restriction_functorial)),
        ("T functorial", Box::new(|t: &I, u: &Universe, r: &mut ChaCha8Rng, s| covariant_functorial(t, u, r, s, "T", |f, v| t.transfer(f, v)))),
        ("N functorial", Box::new(|t: &I, u: &Universe, r: &mut ChaCha8Rng, s| covariant_functorial(t, u, r, s, "N", |f, v| t.norm(f, v)))),
        ("R ring homomorphism", Box::new(restriction_ring_hom)),
        ("T additive", Box::new(transfer_additive)),
        ("N multiplicative", Box::new(norm_multiplicative)),
        ("T base change", Box::new(|t: &I, u: &Universe, r: &mut ChaCha8Rng, s| base_change(t, u, r, s, "T", |f, v| t.transfer(f, v)))),
        ("N base change", Box::new(|t: &I, u: &Universe, r: &mut ChaCha8Rng, s| base_change(t, u, r, s, "N", |f, v| t.norm(f, v)))),
        ("exponential", Box::new(exponential)),
    ];
    let mut results: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .enumerate()
            .map(|(i, (name, check))| {
                let u = &u;
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    Outcome::from_result(*name, check(t, u, &mut rng, samples))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("checker thread")).collect()
    });
    results.sort_by(|a, b| a.relation.cmp(&b.relation).then_with(|| a.witness.cmp(&b.witness)));
    let mut report = Report::new(&format!("tambara:{}", t.name()), t.group().name(), Some(seed), samples);
    report.results = results;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_free() -> InvariantRing {
        InvariantRing::new(GSet::regular(&Group::cyclic(2)))
    }

    #[test]
    fn identity_maps_act_trivially() {
        let t = c2_free();
        let x = GSet::regular(t.group());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = t.sample(&x, &mut rng);
        let id = GMap::identity(&x);
        assert_eq!(t.restriction(&id, &v), v);
        assert_eq!(t.transfer(&id, &v), v);
        assert_eq!(t.norm(&id, &v), v);
    }

    #[test]
    fn empty_fibers() {
        let t = c2_free();
        let pt = GSet::point(t.group());
        let f = GMap::from_empty(&pt);
        let v = t.zero(f.source());
        assert_eq!(t.transfer(&f, &v), t.zero(&pt));
        assert_eq!(t.norm(&f, &v), t.one(&pt));
    }

    #[test]
    fn norm_of_indicator() {
        let t = c2_free();
        let g = t.group().clone();
        let x = GSet::regular(&g);
        // h(x)(s) = 1 if s = x
        let v = t.value(&x, [1, 0, 0, 1].map(BigInt::from).to_vec()).unwrap();
        let f = GMap::to_point(&x);
        let n = t.norm(&f, &v);
        assert_eq!(n.values(), &[BigInt::zero(), BigInt::zero()]);
        assert!(t.value(n.level(), n.values().to_vec()).is_ok());
        let t_ = t.transfer(&f, &v);
        assert_eq!(t_.values(), &[BigInt::one(), BigInt::one()]);
        assert!(t.value(&x, [1, 0, 1, 0].map(BigInt::from).to_vec()).is_err());
    }

    #[test]
    fn level_rank_counts_h_orbits() {
        let g = Group::symmetric(3).unwrap();
        let t = InvariantRing::new(GSet::regular(&g));
        let o = g.poset();
        for c in 0..o.len() {
            let h = o.representative(c);
            let rank = t.level_rank(&GSet::coset_space(&g, h));
            assert_eq!(rank, g.order() / h.order());
        }
    }

    #[test]
    fn invariant_instance_passes_small_budget() {
        let r = check_tambara_axioms(&c2_free(), 2, 1, 7);
        assert!(r.passed(), "{r:?}");
        let names: Vec<&str> = r.results.iter().map(|o| o.relation.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn mutation_is_caught() {
        let r = check_tambara_axioms(&NormAsTransfer(c2_free()), 2, 1, 7);
        let exp = r.results.iter().find(|o| o.relation == "exponential").unwrap();
        assert!(!exp.passed());
        assert!(exp.witness.as_ref().unwrap().contains("p = "));
    }

    #[test]
    fn burnside_instance_passes_small_budget() {
        let t = EffectiveBurnside::new(&Group::cyclic(2), 3);
        let r = check_tambara_axioms(&t, 2, 1, 7);
        assert!(r.passed(), "{r:?}");
    }
}
