//! The Burnside ring A(G) with coefficients in an exact ring, the table of
//! marks, and the transfer and norm maps used by the Teichmüller map.
//!
//! An element is a coefficient vector over the classes of the subconjugacy
//! poset: the coefficient of `[G/H]` sits at the index of `[H]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::gset::{GMap, GSet};
use crate::poly::{Poly, VarNames};

/// Marks indexed by class: entry `[H]` is the number of H-fixed points.
pub type MarksVector = Vec<Poly>;

/// `rows[K][H] = |(G/K)^H|`, lower triangular in the poset order with
/// diagonal `|N_G(H)/H|`. Cached per group.
pub fn table_of_marks(g: &Group) -> &Vec<Vec<u64>> {
    let o = g.poset();
    o.marks_cache.get_or_init(|| {
        (0..o.len())
            .map(|k| {
                let kk = o.representative(k);
                (0..o.len()).map(|h| fixed_cosets(g, o.representative(h), kk)).collect()
            })
            .collect()
    })
}

/// `|(G/K)^H|`: cosets gK with `g⁻¹Hg ⊆ K`.
fn fixed_cosets(g: &Group, h: &Subgroup, k: &Subgroup) -> u64 {
    let count = g
        .elements()
        .filter(|&x| h.elements().iter().all(|&y| k.contains(g.conjugate(g.inv(x), y))))
        .count();
    (count / k.order()) as u64
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BurnsideElement {
    group: Arc<Group>,
    coeffs: Vec<Poly>,
}

impl BurnsideElement {
    pub fn new(group: &Arc<Group>, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != group.poset().len() {
            return Err(Error::ObjectMismatch(format!(
                "expected {} coefficients, got {}",
                group.poset().len(),
                coeffs.len()
            )));
        }
        Ok(BurnsideElement { group: group.clone(), coeffs })
    }

    pub fn from_ints(group: &Arc<Group>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&c| Poly::constant(c)).collect())
    }

    pub fn zero(group: &Arc<Group>) -> Self {
        BurnsideElement { group: group.clone(), coeffs: vec![Poly::zero(); group.poset().len()] }
    }

    /// `[G/G]`
    pub fn one(group: &Arc<Group>) -> Self {
        Self::basis(group, group.poset().top())
    }

    /// `[G/H]` for the class index of H.
    pub fn basis(group: &Arc<Group>, class: usize) -> Self {
        let mut b = Self::zero(group);
        b.coeffs[class] = Poly::one();
        b
    }

    /// The class of a G-set.
    pub fn from_gset(x: &GSet) -> Self {
        let mut b = Self::zero(x.group());
        for c in x.orbit_decompose() {
            b.coeffs[c] = &b.coeffs[c] + &Poly::one();
        }
        b
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, class: usize) -> &Poly {
        &self.coeffs[class]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Integer coefficients, if every coefficient is a machine-size constant.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(Poly::as_i64).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BurnsideElement { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(BurnsideElement { group: self.group.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        BurnsideElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Poly) -> Self {
        BurnsideElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> BurnsideDisplay<'a> {
        BurnsideDisplay { elem: self, names }
    }
}

pub struct BurnsideDisplay<'a> {
    elem: &'a BurnsideElement,
    names: &'a VarNames,
}

impl fmt::Display for BurnsideDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.elem.group.poset();
        let mut first = true;
        for (i, c) in self.elem.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = format!("[G/{}]", o.label(i));
            match c.as_constant() {
                Some(k) => {
                    let sep = match (first, k.is_negative()) {
                        (true, true) => "-",
                        (true, false) => "",
                        (false, true) => " - ",
                        (false, false) => " + ",
                    };
                    let mag = k.abs();
                    if mag.is_one() {
                        write!(f, "{sep}{basis}")?;
                    } else {
                        write!(f, "{sep}{mag}*{basis}")?;
                    }
                }
                None => {
                    let sep = if first { "" } else { " + " };
                    write!(f, "{sep}({})*{basis}", c.display(self.names))?;
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The mark homomorphism: `marks(b)[H] = Σ_K b_K·|(G/K)^H|`.
pub fn marks(b: &BurnsideElement) -> MarksVector {
    let t = table_of_marks(&b.group);
    (0..b.coeffs.len())
        .map(|h| {
            b.coeffs
                .iter()
                .enumerate()
                .filter(|&(k, _)| t[k][h] != 0)
                .map(|(k, c)| c.scale(&BigInt::from(t[k][h])))
                .sum()
        })
        .collect()
}

/// Inverse of [`marks`] on its image, by triangular solve from `[G]` down.
pub fn unmarks(group: &Arc<Group>, v: &[Poly]) -> Result<BurnsideElement> {
    let o = group.poset();
    let t = table_of_marks(group);
    let n = o.len();
    if v.len() != n {
        return Err(Error::ObjectMismatch(format!("expected {n} marks")));
    }
    let mut coeffs = vec![Poly::zero(); n];
    for h in (0..n).rev() {
        let mut rest = v[h].clone();
        for k in h + 1..n {
            if t[k][h] != 0 && !coeffs[k].is_zero() {
                rest = rest - coeffs[k].scale(&BigInt::from(t[k][h]));
            }
        }
        coeffs[h] = rest
            .div_exact(&BigInt::from(t[h][h]))
            .ok_or_else(|| Error::Integrality { class: o.label(h).to_string() })?;
    }
    Ok(BurnsideElement { group: group.clone(), coeffs })
}

/// An element of A(G) ⊗ ℚ[…] stored as integral numerators over a positive
/// common denominator, in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScaledBurnside {
    pub numerator: BurnsideElement,
    pub denominator: BigInt,
}

impl ScaledBurnside {
    pub fn integral(b: BurnsideElement) -> Self {
        ScaledBurnside { numerator: b, denominator: BigInt::one() }
    }

    fn reduce(mut self) -> Self {
        let mut g = self.denominator.clone();
        for c in &self.numerator.coeffs {
            for (_, k) in c.terms() {
                g = g.gcd(k);
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.numerator.coeffs = self.numerator.coeffs.iter().map(|c| c.div_exact(&g).expect("gcd")).collect();
            self.denominator /= g;
        }
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let l = self.denominator.lcm(&other.denominator);
        let a = self.numerator.scale(&Poly::constant(&l / &self.denominator));
        let b = other.numerator.scale(&Poly::constant(&l / &other.denominator));
        Ok(ScaledBurnside { numerator: a.add(&b)?, denominator: l }.reduce())
    }

    /// The element itself when the denominator cancels.
    pub fn to_integral(&self) -> Option<BurnsideElement> {
        self.denominator.is_one().then(|| self.numerator.clone())
    }

    /// Marks, which must be integral.
    pub fn marks(&self) -> Result<MarksVector> {
        let o = self.numerator.group.poset();
        marks(&self.numerator)
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.div_exact(&self.denominator).ok_or_else(|| Error::Integrality { class: o.label(i).to_string() }))
            .collect()
    }
}

/// Solves `marks(b) = v` over ℚ, returning `b` with a common denominator.
pub fn unmarks_scaled(group: &Arc<Group>, v: &[Poly]) -> ScaledBurnside {
    let o = group.poset();
    let t = table_of_marks(group);
    let n = o.len();
    let denom: BigInt = (0..n).map(|h| BigInt::from(t[h][h])).product();
    let mut coeffs = vec![Poly::zero(); n];
    for h in (0..n).rev() {
        let mut rest = v[h].scale(&denom);
        for k in h + 1..n {
            if t[k][h] != 0 {
                rest = rest - coeffs[k].scale(&BigInt::from(t[k][h]));
            }
        }
        coeffs[h] = rest.div_exact(&BigInt::from(t[h][h])).expect("denominator clears the triangular solve");
    }
    ScaledBurnside { numerator: BurnsideElement { group: group.clone(), coeffs }, denominator: denom }.reduce()
}

/// Orbit counts of `G/H × G/K`, indexed `[h][k][class]`. Cached per group.
fn product_table(g: &Arc<Group>) -> &Vec<Vec<Vec<u64>>> {
    let o = g.poset();
    o.product_cache.get_or_init(|| {
        let sets: Vec<GSet> = (0..o.len()).map(|c| GSet::coset_space(g, o.representative(c))).collect();
        sets.iter()
            .map(|a| {
                sets.iter()
                    .map(|b| {
                        let mut counts = vec![0u64; o.len()];
                        for c in a.product(b).expect("same group").orbit_decompose() {
                            counts[c] += 1;
                        }
                        counts
                    })
                    .collect()
            })
            .collect()
    })
}

/// Product in A(G): bilinear extension of the orbit decomposition of `G/H × G/K`.
pub fn burnside_mul(b1: &BurnsideElement, b2: &BurnsideElement) -> Result<BurnsideElement> {
    b1.check(b2)?;
    let table = product_table(&b1.group);
    let mut out = BurnsideElement::zero(&b1.group);
    for (h, c1) in b1.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (k, c2) in b2.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let prod = c1 * c2;
            for (c, &n) in table[h][k].iter().enumerate() {
                if n != 0 {
                    out.coeffs[c] = &out.coeffs[c] + &prod.scale(&BigInt::from(n));
                }
            }
        }
    }
    Ok(out)
}

/// Induction A(H) → A(G), `[H/L] ↦ [G/L]`, for an element of the Burnside
/// ring of `h` viewed as a group via [`Group::subgroup_as_group`].
pub fn burnside_transfer(group: &Arc<Group>, h: &Subgroup, b: &BurnsideElement) -> Result<BurnsideElement> {
    if !is_subgroup_table(group, h, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let ho = b.group.poset();
    let go = group.poset();
    let mut out = BurnsideElement::zero(group);
    for (i, c) in b.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let local = ho.representative(i);
        let embedded: Vec<u32> = local.elements().iter().map(|&x| h.elements()[x as usize]).collect();
        let target = go.class_of(&group.subgroup(&embedded)?);
        out.coeffs[target] = &out.coeffs[target] + c;
    }
    Ok(out)
}

/// Whether `hg` is the multiplication table of `h` in the numbering of
/// [`Group::subgroup_as_group`].
fn is_subgroup_table(group: &Group, h: &Subgroup, hg: &Group) -> bool {
    let els = h.elements();
    hg.order() == els.len()
        && hg.elements().all(|i| {
            hg.elements().all(|j| els[hg.mul(i, j) as usize] == group.mul(els[i as usize], els[j as usize]))
        })
}

/// Transfer for scaled elements.
pub fn burnside_transfer_scaled(group: &Arc<Group>, h: &Subgroup, b: &ScaledBurnside) -> Result<ScaledBurnside> {
    Ok(ScaledBurnside { numerator: burnside_transfer(group, h, &b.numerator)?, denominator: b.denominator.clone() })
}

/// Marks of the norm `N_{e→G}(x)`: `x^{(G:H)}` at `[H]`.
pub fn norm_marks(group: &Arc<Group>, x: &Poly) -> MarksVector {
    let o = group.poset();
    (0..o.len()).map(|h| x.pow((group.order() / o.representative(h).order()) as u32)).collect()
}

/// The norm from the trivial subgroup, `N_{e→G}(x)`, characterized by its
/// marks. For integer `x` the result is always integral; a symbolic `x`
/// generally needs [`norm_from_trivial_scaled`].
pub fn norm_from_trivial(group: &Arc<Group>, x: &Poly) -> Result<BurnsideElement> {
    unmarks(group, &norm_marks(group, x))
}

pub fn norm_from_trivial_scaled(group: &Arc<Group>, x: &Poly) -> ScaledBurnside {
    unmarks_scaled(group, &norm_marks(group, x))
}

/// Fixed points of `Π_f A` from the fibers alone:
/// `|(Π_f A)^L| = Σ_{y ∈ Y^L} Π_{L-orbits of f⁻¹(y)} |p⁻¹(x_j)^{Stab_L(x_j)}|`.
pub fn dependent_product_marks(p: &GMap, f: &GMap) -> Result<Vec<BigInt>> {
    if p.target() != f.source() {
        return Err(Error::ObjectMismatch("p: A → X and f: X → Y required".into()));
    }
    let group = f.source().group().clone();
    let o = group.poset();
    let x = f.source();
    let f_fibers = f.fibers();
    let p_fibers = p.fibers();
    let mut out = Vec::with_capacity(o.len());
    for c in 0..o.len() {
        let l = o.representative(c);
        let mut total = BigInt::zero();
        for y in f.target().points() {
            if !l.elements().iter().all(|&g| f.target().act(g, y) == y) {
                continue;
            }
            let mut prod = BigInt::one();
            let mut seen = vec![false; x.size()];
            for &xj in &f_fibers[y as usize] {
                if seen[xj as usize] {
                    continue;
                }
                for &g in l.elements() {
                    seen[x.act(g, xj) as usize] = true;
                }
                let stab: Vec<u32> = l.elements().iter().copied().filter(|&g| x.act(g, xj) == xj).collect();
                let fixed = p_fibers[xj as usize]
                    .iter()
                    .filter(|&&a| stab.iter().all(|&g| p.source().act(g, a) == a))
                    .count();
                prod *= fixed;
            }
            total += prod;
        }
        out.push(total);
    }
    Ok(out)
}

/// The class of `Π_f A` in A(G), computed from marks alone.
pub fn norm_effective(p: &GMap, f: &GMap) -> Result<BurnsideElement> {
    let m: Vec<Poly> = dependent_product_marks(p, f)?.into_iter().map(Poly::constant).collect();
    let b = unmarks(f.source().group(), &m)?;
    debug_assert!(b.coeffs.iter().all(|c| c.as_constant().is_some_and(|k| !k.is_negative())));
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::dependent_product;

    fn ints(b: &BurnsideElement) -> Vec<i64> {
        b.as_ints().unwrap()
    }

    fn mark_ints(v: &[Poly]) -> Vec<i64> {
        v.iter().map(|p| p.as_i64().unwrap()).collect()
    }

    #[test]
    fn c2_table() {
        assert_eq!(*table_of_marks(&Group::cyclic(2)), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(*table_of_marks(&Group::trivial()), vec![vec![1]]);
    }

    #[test]
    fn s3_row_of_c3() {
        let g = Group::symmetric(3).unwrap();
        assert_eq!(table_of_marks(&g)[2], vec![2, 0, 2, 0]);
    }

    #[test]
    fn marks_examples() {
        let g = Group::cyclic(2);
        assert_eq!(mark_ints(&marks(&BurnsideElement::basis(&g, 0))), vec![2, 0]);
        assert_eq!(mark_ints(&marks(&BurnsideElement::zero(&g))), vec![0, 0]);
        let b = BurnsideElement::from_ints(&g, &[1, 2]).unwrap();
        assert_eq!(mark_ints(&marks(&b)), vec![4, 2]);
    }

    #[test]
    fn unmarks_examples() {
        let g = Group::cyclic(2);
        let b = unmarks(&g, &[Poly::constant(4), Poly::constant(2)]).unwrap();
        assert_eq!(ints(&b), vec![1, 2]);
        let err = unmarks(&g, &[Poly::constant(1), Poly::constant(0)]).unwrap_err();
        assert_eq!(err, Error::Integrality { class: "1".into() });
    }

    #[test]
    fn products() {
        let g = Group::cyclic(2);
        let free = BurnsideElement::basis(&g, 0);
        assert_eq!(ints(&burnside_mul(&free, &free).unwrap()), vec![2, 0]);
        let one = BurnsideElement::one(&g);
        assert_eq!(burnside_mul(&one, &free).unwrap(), free);
        let s3 = Group::symmetric(3).unwrap();
        let p = burnside_mul(&BurnsideElement::basis(&s3, 1), &BurnsideElement::basis(&s3, 2)).unwrap();
        assert_eq!(ints(&p), vec![1, 0, 0, 0]);
    }

    #[test]
    fn transfer_from_trivial() {
        let g = Group::cyclic(2);
        let e = g.trivial_subgroup();
        let eg = g.subgroup_as_group(&e);
        let three = BurnsideElement::from_ints(&eg, &[3]).unwrap();
        let t = burnside_transfer(&g, &e, &three).unwrap();
        assert_eq!(ints(&t), vec![3, 0]);
        assert_eq!(mark_ints(&marks(&t)), vec![6, 0]);
        let zero = BurnsideElement::zero(&eg);
        assert!(burnside_transfer(&g, &e, &zero).unwrap().is_zero());
    }

    #[test]
    fn norms() {
        let g = Group::cyclic(2);
        assert_eq!(ints(&norm_from_trivial(&g, &Poly::constant(2)).unwrap()), vec![1, 2]);
        assert_eq!(norm_from_trivial(&g, &Poly::one()).unwrap(), BurnsideElement::one(&g));
        let minus = norm_from_trivial(&g, &Poly::constant(-1)).unwrap();
        assert_eq!(ints(&minus), vec![1, -1]);
        assert_eq!(mark_ints(&marks(&minus)), vec![1, -1]);
    }

    #[test]
    fn symbolic_norm_needs_denominator() {
        let g = Group::cyclic(2);
        let x = Poly::var(0);
        assert!(norm_from_trivial(&g, &x).is_err());
        let s = norm_from_trivial_scaled(&g, &x);
        assert_eq!(s.denominator, BigInt::from(2));
        assert_eq!(s.marks().unwrap(), vec![x.pow(2), x.clone()]);
    }

    #[test]
    fn effective_norm_of_fold() {
        let g = Group::cyclic(2);
        let free = GSet::regular(&g);
        let p = GMap::fold(&free);
        let f = GMap::to_point(&free);
        let b = norm_effective(&p, &f).unwrap();
        assert_eq!(ints(&b), vec![1, 2]);
        let explicit = dependent_product(&p, &f).unwrap();
        assert_eq!(BurnsideElement::from_gset(explicit.object()), b);
    }

    #[test]
    fn group_mismatch() {
        let a = BurnsideElement::one(&Group::cyclic(2));
        let b = BurnsideElement::one(&Group::cyclic(3));
        assert_eq!(a.add(&b).unwrap_err(), Error::GroupMismatch);
        assert_eq!(burnside_mul(&a, &b).unwrap_err(), Error::GroupMismatch);
    }
}
