//! Bispans `X ← A → B → Y` of G-sets: the morphisms of the category of
//! bispans, their equivalence, composition through an exponential diagram,
//! the restriction/transfer/norm generators, and fiber polynomials.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupJson};
use crate::gset::{
    exponential_diagram, find_equivariant_bijection, orbits_under, perfect_matching, pullback, GMap, GSet,
    GSetJson, Point,
};
use crate::poly::{Monomial, Poly};

/// A bispan `X ←p A →q B →r Y`, read as a morphism from X to Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bispan {
    p: GMap,
    q: GMap,
    r: GMap,
}

impl Bispan {
    pub fn new(p: GMap, q: GMap, r: GMap) -> Result<Bispan> {
        if p.source() != q.source() {
            return Err(Error::ObjectMismatch("p and q must share their source A".into()));
        }
        if q.target() != r.source() {
            return Err(Error::ObjectMismatch("q must land in the source of r".into()));
        }
        Ok(Bispan { p, q, r })
    }

    /// `[X = X = X = X]`
    pub fn identity(x: &GSet) -> Bispan {
        let id = GMap::identity(x);
        Bispan { p: id.clone(), q: id.clone(), r: id }
    }

    pub fn x(&self) -> &GSet {
        self.p.target()
    }

    pub fn a(&self) -> &GSet {
        self.p.source()
    }

    pub fn b(&self) -> &GSet {
        self.r.source()
    }

    pub fn y(&self) -> &GSet {
        self.r.target()
    }

    pub fn p(&self) -> &GMap {
        &self.p
    }

    pub fn q(&self) -> &GMap {
        &self.q
    }

    pub fn r(&self) -> &GMap {
        &self.r
    }

    /// The componentwise disjoint union `X₁ ⊔ X₂ ⇒ Y₁ ⊔ Y₂`.
    pub fn sum(&self, other: &Bispan) -> Result<Bispan> {
        Bispan::new(
            GMap::coproduct(&self.p, &other.p)?,
            GMap::coproduct(&self.q, &other.q)?,
            GMap::coproduct(&self.r, &other.r)?,
        )
    }
}

/// `R_f = [Y ←f X = X = X]`, a morphism `Y ⇒ X`.
pub fn gen_r(f: &GMap) -> Bispan {
    let id = GMap::identity(f.source());
    Bispan { p: f.clone(), q: id.clone(), r: id }
}

/// `T_f = [X = X = X →f Y]`.
pub fn gen_t(f: &GMap) -> Bispan {
    let id = GMap::identity(f.source());
    Bispan { p: id.clone(), q: id, r: f.clone() }
}

/// `N_f = [X = X →f Y = Y]`.
pub fn gen_n(f: &GMap) -> Bispan {
    Bispan { p: GMap::identity(f.source()), q: f.clone(), r: GMap::identity(f.target()) }
}

/// Isomorphisms `α : A → A'`, `β : B → B'` witnessing that `u` and `v` are
/// equivalent, if any.
///
/// Orbits of B are matched with orbits of B' by augmenting paths. A pair of
/// orbits is compatible when representatives `b`, `b'` share their
/// stabilizer `S` and their image in Y, and the fibers `q⁻¹(b)`, `q'⁻¹(b')`
/// are isomorphic as S-sets over X.
pub fn equivalence(u: &Bispan, v: &Bispan) -> Result<Option<(GMap, GMap)>> {
    if u.x() != v.x() || u.y() != v.y() {
        return Err(Error::ObjectMismatch("equivalence needs the same X and Y".into()));
    }
    let (b, b2) = (u.b(), v.b());
    if b.size() != b2.size() || u.a().size() != v.a().size() {
        return Ok(None);
    }
    let group = b.group().clone();
    let all: Vec<Elem> = group.elements().collect();
    let orbs = orbits_under(b, &all, &b.points().collect::<Vec<_>>());
    let orbs2 = orbits_under(b2, &all, &b2.points().collect::<Vec<_>>());
    if orbs.len() != orbs2.len() {
        return Ok(None);
    }
    let fibers = u.q.fibers();
    let fibers2 = v.q.fibers();
    let stab_mask = |set: &GSet, x: Point| all.iter().filter(|&&g| set.act(g, x) == x).fold(0u64, |m, &g| m | (1u64 << g));
    // compat[i][j] = (b' in orbit j, fiber bijection) if orbit i can map onto orbit j
    let mut compat: Vec<Vec<Option<(Point, HashMap<Point, Point>)>>> = Vec::with_capacity(orbs.len());
    for orb in &orbs {
        let x = orb[0];
        let stab = stab_mask(b, x);
        let stab_elems: Vec<Elem> = all.iter().copied().filter(|&g| stab & (1u64 << g) != 0).collect();
        let mut row = Vec::with_capacity(orbs2.len());
        for orb2 in &orbs2 {
            let mut found = None;
            if orb2.len() == orb.len() {
                for &y in orb2 {
                    if v.r.apply(y) != u.r.apply(x) || stab_mask(b2, y) != stab {
                        continue;
                    }
                    let fib = &fibers[x as usize];
                    let fib2 = &fibers2[y as usize];
                    if let Some(m) = find_equivariant_bijection(
                        &stab_elems,
                        u.a(),
                        fib,
                        &|a| u.p.apply(a) as u64,
                        v.a(),
                        fib2,
                        &|a| v.p.apply(a) as u64,
                    ) {
                        found = Some((y, m));
                        break;
                    }
                }
            }
            row.push(found);
        }
        compat.push(row);
    }
    let adj: Vec<Vec<usize>> =
        compat.iter().map(|row| row.iter().enumerate().filter_map(|(j, c)| c.as_ref().map(|_| j)).collect()).collect();
    let Some(matching) = perfect_matching(&adj, orbs2.len()) else {
        return Ok(None);
    };
    let mut alpha = vec![0; u.a().size()];
    let mut beta = vec![0; b.size()];
    for (i, &j) in matching.iter().enumerate() {
        let x = orbs[i][0];
        let (y, fib_map) = compat[i][j].as_ref().expect("matched");
        for &g in &all {
            beta[b.act(g, x) as usize] = b2.act(g, *y);
            for (&a, &a2) in fib_map {
                alpha[u.a().act(g, a) as usize] = v.a().act(g, a2);
            }
        }
    }
    let alpha = GMap::new(u.a().clone(), v.a().clone(), alpha)?;
    let beta = GMap::new(b.clone(), b2.clone(), beta)?;
    Ok(Some((alpha, beta)))
}

/// Whether `u` and `v` represent the same morphism.
pub fn bispan_equivalent(u: &Bispan, v: &Bispan) -> Result<bool> {
    Ok(equivalence(u, v)?.is_some())
}

/// `psi ∘ phi` for `phi : X ⇒ Y`, `psi : Y ⇒ Z`.
///
/// With `phi = [X ← A → B → Y]` and `psi = [Y ← C → D → Z]`: form
/// `B' = B ×_Y C`, the exponential diagram of `B' → C` along `C → D` giving
/// `D̃ = Π(B')` and `C̃ = C ×_D D̃` with evaluation `e : C̃ → B'`, then
/// `A' = A ×_B B'` and `A'' = A' ×_{B'} C̃`. The result is `[X ← A'' → D̃ → Z]`.
pub fn compose(psi: &Bispan, phi: &Bispan) -> Result<Bispan> {
    if phi.y() != psi.x() {
        return Err(Error::ObjectMismatch("compose needs phi: X ⇒ Y and psi: Y ⇒ Z".into()));
    }
    let b_prime = pullback(&phi.r, &psi.p)?;
    let exp = exponential_diagram(&b_prime.second, &psi.q)?;
    let a_prime = pullback(&phi.q, &b_prime.first)?;
    let a_pp = pullback(&a_prime.second, &exp.e)?;
    let p = phi.p.after(&a_prime.first)?.after(&a_pp.first)?;
    let q = exp.f_prime.after(&a_pp.second)?;
    let r = psi.r.after(exp.pi_p())?;
    Bispan::new(p, q, r)
}

/// `[W ← A₁⊔A₂ → B₁⊔B₂ → X₁⊔X₂]` for `u : W ⇒ X₁`, `v : W ⇒ X₂`.
pub fn pair(u: &Bispan, v: &Bispan) -> Result<Bispan> {
    if u.x() != v.x() {
        return Err(Error::ObjectMismatch("pair needs a shared source".into()));
    }
    let a = GSet::disjoint_union(u.a().group(), &[u.a().clone(), v.a().clone()]);
    let p_table = u.p.table().iter().chain(v.p.table()).copied().collect();
    let p = GMap::new(a, u.x().clone(), p_table)?;
    Bispan::new(p, GMap::coproduct(&u.q, &v.q)?, GMap::coproduct(&u.r, &v.r)?)
}

/// `φ_y = Σ_{b ∈ r⁻¹(y)} Π_{a ∈ q⁻¹(b)} p(a)` in ℕ[X], with the points of X
/// as variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPolynomial {
    pub base: Point,
    pub poly: Poly,
}

pub fn fiber_polynomial(phi: &Bispan, y: Point) -> Result<FiberPolynomial> {
    if y as usize >= phi.y().size() {
        return Err(Error::ObjectMismatch(format!("point {y} not in Y")));
    }
    let q_fibers = phi.q.fibers();
    let poly = Poly::from_terms(phi.r.fiber(y).into_iter().map(|b| {
        let m = Monomial::from_factors(q_fibers[b as usize].iter().map(|&a| (phi.p.apply(a), 1)).collect());
        (m, 1.into())
    }));
    Ok(FiberPolynomial { base: y, poly })
}

pub fn fiber_polynomials(phi: &Bispan) -> Vec<FiberPolynomial> {
    phi.y().points().map(|y| fiber_polynomial(phi, y).expect("y in range")).collect()
}

/// Every fiber polynomial is a sum of distinct square-free monomials.
pub fn is_simple(phi: &Bispan) -> bool {
    fiber_polynomials(phi).iter().all(|f| f.poly.is_simple())
}

/// `(p, q, r)` with `T_r ∘ N_q ∘ R_p` equivalent to `phi`.
pub fn canonical_factorization(phi: &Bispan) -> (GMap, GMap, GMap) {
    (phi.p.clone(), phi.q.clone(), phi.r.clone())
}

/// Recomposes `T_r ∘ N_q ∘ R_p`.
pub fn recompose(p: &GMap, q: &GMap, r: &GMap) -> Result<Bispan> {
    compose(&gen_t(r), &compose(&gen_n(q), &gen_r(p))?)
}

/// Serialized bispan: the four G-sets and the three map tables.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BispanJson {
    pub group: GroupJson,
    pub x: GSetJson,
    pub a: GSetJson,
    pub b: GSetJson,
    pub y: GSetJson,
    pub p: Vec<Point>,
    pub q: Vec<Point>,
    pub r: Vec<Point>,
}

impl Bispan {
    pub fn to_json(&self) -> BispanJson {
        BispanJson {
            group: self.x().group().to_json(),
            x: self.x().to_json("group"),
            a: self.a().to_json("group"),
            b: self.b().to_json("group"),
            y: self.y().to_json("group"),
            p: self.p.table().to_vec(),
            q: self.q.table().to_vec(),
            r: self.r.table().to_vec(),
        }
    }

    pub fn from_json(json: &BispanJson) -> Result<Bispan> {
        let group = crate::group::Group::from_json(&json.group)?;
        let set = |s: &GSetJson| -> Result<GSet> {
            if s.size == 0 {
                Ok(GSet::empty(&group))
            } else {
                GSet::new(group.clone(), s.act.clone())
            }
        };
        let (x, a, b, y) = (set(&json.x)?, set(&json.a)?, set(&json.b)?, set(&json.y)?);
        Bispan::new(
            GMap::new(a.clone(), x, json.p.clone())?,
            GMap::new(a, b.clone(), json.q.clone())?,
            GMap::new(b, y, json.r.clone())?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::poly::VarNames;

    fn free_to_point() -> GMap {
        GMap::to_point(&GSet::regular(&Group::cyclic(2)))
    }

    fn show(f: &FiberPolynomial) -> String {
        f.poly.display(&VarNames::new(["x1", "x2", "x3", "x4"])).to_string()
    }

    #[test]
    fn generators_of_identity_are_identity() {
        let x = GSet::regular(&Group::cyclic(2));
        let id = GMap::identity(&x);
        let one = Bispan::identity(&x);
        for b in [gen_r(&id), gen_t(&id), gen_n(&id)] {
            assert!(bispan_equivalent(&b, &one).unwrap());
        }
    }

    #[test]
    fn transfer_and_norm_fiber_polynomials() {
        let f = free_to_point();
        assert_eq!(show(&fiber_polynomial(&gen_t(&f), 0).unwrap()), "x1 + x2");
        assert_eq!(show(&fiber_polynomial(&gen_n(&f), 0).unwrap()), "x1*x2");
        assert!(!bispan_equivalent(&gen_t(&f), &gen_n(&f)).unwrap());
    }

    #[test]
    fn restriction_fiber_polynomial_is_a_variable() {
        let f = free_to_point();
        let r = gen_r(&f);
        assert_eq!(fiber_polynomial(&r, 1).unwrap().poly, Poly::var(0));
    }

    #[test]
    fn square_is_not_simple() {
        let g = Group::trivial();
        let pt = GSet::point(&g);
        let two = GSet::trivial(&g, 2);
        let phi = Bispan::new(GMap::to_point(&two), GMap::to_point(&two), GMap::identity(&pt)).unwrap();
        assert_eq!(fiber_polynomial(&phi, 0).unwrap().poly, Poly::var(0).pow(2));
        assert!(!is_simple(&phi));
        let sum = phi.sum(&Bispan::identity(&pt)).unwrap();
        assert!(!is_simple(&sum));
        assert!(is_simple(&Bispan::identity(&pt)));
    }

    #[test]
    fn norm_after_transfer_expands() {
        let g = Group::cyclic(2);
        let free = GSet::regular(&g);
        let fold = GMap::fold(&free);
        let f = GMap::to_point(&free);
        let c = compose(&gen_n(&f), &gen_t(&fold)).unwrap();
        // variables are the four points of C2/e ⊔ C2/e; (x1 + x3)(x2 + x4)
        let expected = (Poly::var(0) + Poly::var(2)) * (Poly::var(1) + Poly::var(3));
        assert_eq!(fiber_polynomial(&c, 0).unwrap().poly, expected);
    }

    #[test]
    fn transfers_compose() {
        let g = Group::cyclic(2);
        let free = GSet::regular(&g);
        let fold = GMap::fold(&free);
        let f = GMap::to_point(&free);
        let lhs = compose(&gen_t(&f), &gen_t(&fold)).unwrap();
        let rhs = gen_t(&f.after(&fold).unwrap());
        assert!(bispan_equivalent(&lhs, &rhs).unwrap());
    }

    #[test]
    fn unit_laws() {
        let f = free_to_point();
        let phi = gen_n(&f);
        let left = compose(&Bispan::identity(phi.y()), &phi).unwrap();
        let right = compose(&phi, &Bispan::identity(phi.x())).unwrap();
        assert!(bispan_equivalent(&left, &phi).unwrap());
        assert!(bispan_equivalent(&right, &phi).unwrap());
    }

    #[test]
    fn factorization_of_norm() {
        let f = free_to_point();
        let (p, q, r) = canonical_factorization(&gen_n(&f));
        assert!(p.is_identity() && r.is_identity());
        assert_eq!(q, f);
        assert!(bispan_equivalent(&recompose(&p, &q, &r).unwrap(), &gen_n(&f)).unwrap());
    }

    #[test]
    fn relabeled_copy_is_equivalent() {
        let g = Group::cyclic(2);
        let free = GSet::regular(&g);
        let pt = GSet::point(&g);
        let a = GSet::disjoint_union(&g, &[free.clone(), pt.clone()]);
        let b = GSet::disjoint_union(&g, &[pt.clone(), pt.clone()]);
        let phi = Bispan::new(
            GMap::new(a.clone(), pt.clone(), vec![0, 0, 0]).unwrap(),
            GMap::new(a.clone(), b.clone(), vec![0, 0, 1]).unwrap(),
            GMap::to_point(&b),
        )
        .unwrap();
        let a2 = GSet::disjoint_union(&g, &[pt.clone(), free.clone()]);
        let psi = Bispan::new(
            GMap::new(a2.clone(), pt.clone(), vec![0, 0, 0]).unwrap(),
            GMap::new(a2, b.clone(), vec![0, 1, 1]).unwrap(),
            GMap::to_point(&b),
        )
        .unwrap();
        assert!(bispan_equivalent(&phi, &psi).unwrap());
    }

    #[test]
    fn mismatched_objects_are_errors() {
        let f = free_to_point();
        assert!(bispan_equivalent(&gen_t(&f), &gen_r(&f)).is_err());
        assert!(compose(&gen_t(&f), &gen_t(&f)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = free_to_point();
        let phi = gen_n(&f);
        assert_eq!(Bispan::from_json(&phi.to_json()).unwrap(), phi);
    }
}
