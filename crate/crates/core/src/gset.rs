//! Finite G-sets, equivariant maps, and the constructions the bispan
//! category is built from: pullbacks, dependent products and exponential
//! diagrams.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, Group, Subgroup};

/// A point of a G-set.
pub type Point = u32;

#[derive(Clone)]
pub struct GSet {
    group: Arc<Group>,
    size: usize,
    // act[g * size + x] = g·x
    act: Arc<Vec<Point>>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet(size {}, over {:?})", self.size, self.group)
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && *self.group == *other.group && self.act == other.act
    }
}

impl Eq for GSet {}

/// `{group_ref, size, act}` where `act[g][x] = g·x`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GSetJson {
    pub group_ref: String,
    pub size: usize,
    pub act: Vec<Vec<Point>>,
}

impl GSet {
    /// Validates an action table `act[g][x]`.
    pub fn new(group: Arc<Group>, act: Vec<Vec<Point>>) -> Result<GSet> {
        if act.len() != group.order() {
            return Err(Error::InvalidGSet("one row per group element required".into()));
        }
        let size = act.first().map_or(0, Vec::len);
        if act.iter().any(|row| row.len() != size || row.iter().any(|&y| y as usize >= size)) {
            return Err(Error::InvalidGSet("ragged or out-of-range action table".into()));
        }
        let flat: Vec<Point> = act.into_iter().flatten().collect();
        let set = GSet { group, size, act: Arc::new(flat) };
        for x in 0..size as Point {
            if set.act(0, x) != x {
                return Err(Error::InvalidGSet(format!("identity moves point {x}")));
            }
            for g in set.group.elements() {
                for h in set.group.elements() {
                    if set.act(g, set.act(h, x)) != set.act(set.group.mul(g, h), x) {
                        return Err(Error::InvalidGSet(format!("action not compatible at ({g},{h},{x})")));
                    }
                }
            }
        }
        Ok(set)
    }

    fn from_flat(group: Arc<Group>, size: usize, act: Vec<Point>) -> GSet {
        debug_assert_eq!(act.len(), size * group.order());
        GSet { group, size, act: Arc::new(act) }
    }

    pub fn to_json(&self, group_ref: &str) -> GSetJson {
        GSetJson {
            group_ref: group_ref.to_string(),
            size: self.size,
            act: self.act.chunks(self.size.max(1)).map(|c| c.to_vec()).take(self.group.order()).collect(),
        }
    }

    pub fn empty(group: &Arc<Group>) -> GSet {
        GSet::from_flat(group.clone(), 0, Vec::new())
    }

    /// The terminal G-set.
    pub fn point(group: &Arc<Group>) -> GSet {
        GSet::trivial(group, 1)
    }

    /// `n` points, all fixed.
    pub fn trivial(group: &Arc<Group>, n: usize) -> GSet {
        let act = group.elements().flat_map(|_| 0..n as Point).collect();
        GSet::from_flat(group.clone(), n, act)
    }

    /// Left cosets G/H, listed by least element; the coset of the identity is point 0.
    pub fn coset_space(group: &Arc<Group>, h: &Subgroup) -> GSet {
        let n = group.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut count = 0u32;
        for g in group.elements() {
            if coset_of[g as usize] == u32::MAX {
                for &x in h.elements() {
                    coset_of[group.mul(g, x) as usize] = count;
                }
                count += 1;
            }
        }
        let reps: Vec<Elem> = {
            let mut r = vec![0; count as usize];
            for g in group.elements().rev() {
                r[coset_of[g as usize] as usize] = g;
            }
            r
        };
        let mut act = Vec::with_capacity(n * count as usize);
        for g in group.elements() {
            for &r in &reps {
                act.push(coset_of[group.mul(g, r) as usize]);
            }
        }
        GSet::from_flat(group.clone(), count as usize, act)
    }

    /// The left regular action G/e.
    pub fn regular(group: &Arc<Group>) -> GSet {
        GSet::coset_space(group, &group.trivial_subgroup())
    }

    /// `⨿ G/H_i` over class representatives of the subconjugacy poset.
    pub fn from_classes(group: &Arc<Group>, classes: &[usize]) -> GSet {
        let o = group.poset();
        let parts: Vec<GSet> = classes.iter().map(|&c| GSet::coset_space(group, o.representative(c))).collect();
        GSet::disjoint_union(group, &parts)
    }

    /// Disjoint union, summands laid out consecutively.
    pub fn disjoint_union(group: &Arc<Group>, parts: &[GSet]) -> GSet {
        let size: usize = parts.iter().map(|p| p.size).sum();
        let mut act = Vec::with_capacity(size * group.order());
        for g in group.elements() {
            let mut offset = 0;
            for p in parts {
                debug_assert!(*p.group == **group);
                act.extend((0..p.size as Point).map(|x| p.act(g, x) + offset));
                offset += p.size as Point;
            }
        }
        GSet::from_flat(group.clone(), size, act)
    }

    /// Cartesian product with diagonal action; point `(a, b)` is `a·|other| + b`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        self.same_group(other)?;
        let m = other.size as Point;
        let mut act = Vec::with_capacity(self.size * other.size * self.group.order());
        for g in self.group.elements() {
            for a in 0..self.size as Point {
                for b in 0..m {
                    act.push(self.act(g, a) * m + other.act(g, b));
                }
            }
        }
        Ok(GSet::from_flat(self.group.clone(), self.size * other.size, act))
    }

    pub(crate) fn same_group(&self, other: &GSet) -> Result<()> {
        if *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.size as Point
    }

    #[inline]
    pub fn act(&self, g: Elem, x: Point) -> Point {
        self.act[g as usize * self.size + x as usize]
    }

    pub fn stabilizer(&self, x: Point) -> Subgroup {
        self.group.subgroup_where(|g| self.act(g, x) == x)
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        orbits_under(self, self.group.elements().collect::<Vec<_>>().as_slice(), &self.points().collect::<Vec<_>>())
    }

    /// Stabilizer class of each orbit, sorted.
    pub fn orbit_decompose(&self) -> Vec<usize> {
        let o = self.group.poset();
        let mut out: Vec<usize> = self.orbits().iter().map(|orb| o.class_of(&self.stabilizer(orb[0]))).collect();
        out.sort_unstable();
        out
    }

    /// Number of points fixed by every element of `h`.
    pub fn fixed_points(&self, h: &Subgroup) -> usize {
        self.points().filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x)).count()
    }

    /// Fixed-point counts for every class representative of the poset.
    pub fn marks(&self) -> Vec<usize> {
        let o = self.group.poset();
        (0..o.len()).map(|i| self.fixed_points(o.representative(i))).collect()
    }

    pub fn is_isomorphic(&self, other: &GSet) -> bool {
        *self.group == *other.group && self.orbit_decompose() == other.orbit_decompose()
    }
}

/// Orbits of the given group elements on a subset of points closed under them.
pub(crate) fn orbits_under(set: &GSet, elems: &[Elem], pts: &[Point]) -> Vec<Vec<Point>> {
    let mut seen: HashMap<Point, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut sorted = pts.to_vec();
    sorted.sort_unstable();
    for &x in &sorted {
        if seen.contains_key(&x) {
            continue;
        }
        let mut orb: Vec<Point> = elems.iter().map(|&g| set.act(g, x)).collect();
        orb.sort_unstable();
        orb.dedup();
        for &y in &orb {
            seen.insert(y, ());
        }
        out.push(orb);
    }
    out
}

/// An equivariant map between G-sets.
#[derive(Clone, PartialEq, Eq)]
pub struct GMap {
    source: GSet,
    target: GSet,
    map: Arc<Vec<Point>>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMap({} -> {}: {:?})", self.source.size, self.target.size, self.map)
    }
}

impl GMap {
    pub fn new(source: GSet, target: GSet, map: Vec<Point>) -> Result<GMap> {
        source.same_group(&target)?;
        if map.len() != source.size || map.iter().any(|&y| y as usize >= target.size) {
            return Err(Error::InvalidGSet("map table has wrong length or range".into()));
        }
        for g in source.group.elements() {
            for x in source.points() {
                if map[source.act(g, x) as usize] != target.act(g, map[x as usize]) {
                    return Err(Error::NotEquivariant(format!("f({g}·{x}) != {g}·f({x})")));
                }
            }
        }
        Ok(GMap { source, target, map: Arc::new(map) })
    }

    pub(crate) fn new_unchecked(source: GSet, target: GSet, map: Vec<Point>) -> GMap {
        debug_assert!(GMap::new(source.clone(), target.clone(), map.clone()).is_ok());
        GMap { source, target, map: Arc::new(map) }
    }

    pub fn identity(x: &GSet) -> GMap {
        GMap::new_unchecked(x.clone(), x.clone(), x.points().collect())
    }

    /// The unique map out of the empty G-set.
    pub fn from_empty(x: &GSet) -> GMap {
        GMap::new_unchecked(GSet::empty(x.group()), x.clone(), Vec::new())
    }

    /// The unique map to the one-point G-set.
    pub fn to_point(x: &GSet) -> GMap {
        GMap::new_unchecked(x.clone(), GSet::point(x.group()), vec![0; x.size()])
    }

    /// The projection `G/H → G/K`, `gH ↦ gK`, for `H ⊆ K`.
    pub fn projection(group: &Arc<Group>, h: &Subgroup, k: &Subgroup) -> Result<GMap> {
        if !h.is_subset(k) {
            return Err(Error::NotSubconjugate { small: h.order(), large: k.order() });
        }
        let src = GSet::coset_space(group, h);
        let tgt = GSet::coset_space(group, k);
        // coset gH ↦ gK, using the least representative of each H-coset
        let mut map = vec![0; src.size()];
        let mut done = vec![false; src.size()];
        for g in group.elements() {
            let x = src.act(g, 0);
            if !done[x as usize] {
                done[x as usize] = true;
                map[x as usize] = tgt.act(g, 0);
            }
        }
        GMap::new(src, tgt, map)
    }

    /// The fold `X ⊔ X → X`.
    pub fn fold(x: &GSet) -> GMap {
        let src = GSet::disjoint_union(x.group(), &[x.clone(), x.clone()]);
        let map = x.points().chain(x.points()).collect();
        GMap::new_unchecked(src, x.clone(), map)
    }

    /// Inclusions of the summands into `X₁ ⊔ X₂`.
    pub fn coproduct_inclusions(x1: &GSet, x2: &GSet) -> (GMap, GMap) {
        let sum = GSet::disjoint_union(x1.group(), &[x1.clone(), x2.clone()]);
        let off = x1.size() as Point;
        (
            GMap::new_unchecked(x1.clone(), sum.clone(), x1.points().collect()),
            GMap::new_unchecked(x2.clone(), sum, x2.points().map(|x| x + off).collect()),
        )
    }

    /// `f ⊔ g : A ⊔ C → B ⊔ D`.
    pub fn coproduct(f: &GMap, g: &GMap) -> Result<GMap> {
        f.source.same_group(&g.source)?;
        let group = f.source.group();
        let src = GSet::disjoint_union(group, &[f.source.clone(), g.source.clone()]);
        let tgt = GSet::disjoint_union(group, &[f.target.clone(), g.target.clone()]);
        let off = f.target.size() as Point;
        let map = f.map.iter().copied().chain(g.map.iter().map(|&y| y + off)).collect();
        Ok(GMap::new_unchecked(src, tgt, map))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GMap) -> Result<GMap> {
        if first.target != self.source {
            return Err(Error::ObjectMismatch("composable maps need matching G-sets".into()));
        }
        let map = first.map.iter().map(|&x| self.map[x as usize]).collect();
        Ok(GMap::new_unchecked(first.source.clone(), self.target.clone(), map))
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn table(&self) -> &[Point] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.map[x as usize]
    }

    /// Preimage of `y`, ascending.
    pub fn fiber(&self, y: Point) -> Vec<Point> {
        self.source.points().filter(|&x| self.map[x as usize] == y).collect()
    }

    pub fn fibers(&self) -> Vec<Vec<Point>> {
        let mut out = vec![Vec::new(); self.target.size()];
        for x in self.source.points() {
            out[self.map[x as usize] as usize].push(x);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(i, &y)| i as Point == y)
    }
}

// ---------------------------------------------------------------------------
// Isomorphisms over a base

/// One orbit of an acting subgroup, with the data matching depends on.
struct OrbitInfo {
    rep: Point,
    stab: u64,
    label: u64,
    signature: Vec<u64>,
}

fn orbit_infos(set: &GSet, elems: &[Elem], pts: &[Point], label: &dyn Fn(Point) -> u64) -> Vec<(OrbitInfo, Vec<Point>)> {
    orbits_under(set, elems, pts)
        .into_iter()
        .map(|orb| {
            let rep = orb[0];
            let stab = elems.iter().filter(|&&g| set.act(g, rep) == rep).fold(0u64, |m, &g| m | (1u64 << g));
            let mut signature: Vec<u64> = orb.iter().map(|&y| label(y)).collect();
            signature.sort_unstable();
            (OrbitInfo { rep, stab, label: label(rep), signature }, orb)
        })
        .collect()
}

/// Finds a bijection between two point subsets, equivariant for the acting
/// elements `elems` (a subgroup) and preserving the labels, which must
/// themselves be equivariant (labels of `g·x` depend only on `g` and the
/// label of `x`). Orbits are matched by augmenting paths; within a matched
/// pair of orbits any point with the same stabilizer and label works.
pub(crate) fn find_equivariant_bijection(
    elems: &[Elem],
    src: &GSet,
    src_pts: &[Point],
    src_label: &dyn Fn(Point) -> u64,
    dst: &GSet,
    dst_pts: &[Point],
    dst_label: &dyn Fn(Point) -> u64,
) -> Option<HashMap<Point, Point>> {
    if src_pts.len() != dst_pts.len() {
        return None;
    }
    let s = orbit_infos(src, elems, src_pts, src_label);
    let d = orbit_infos(dst, elems, dst_pts, dst_label);
    if s.len() != d.len() {
        return None;
    }
    // witness[i][j] = image of src rep i inside dst orbit j, if compatible
    let mut witness: Vec<Vec<Option<Point>>> = vec![vec![None; d.len()]; s.len()];
    for (i, (si, _)) in s.iter().enumerate() {
        for (j, (dj, dorb)) in d.iter().enumerate() {
            if si.signature != dj.signature {
                continue;
            }
            witness[i][j] = dorb.iter().copied().find(|&y| {
                dst_label(y) == si.label
                    && elems.iter().filter(|&&g| dst.act(g, y) == y).fold(0u64, |m, &g| m | (1u64 << g)) == si.stab
            });
            let _ = dj;
        }
    }
    let adj: Vec<Vec<usize>> =
        witness.iter().map(|row| row.iter().enumerate().filter_map(|(j, w)| w.map(|_| j)).collect()).collect();
    let matching = perfect_matching(&adj, d.len())?;
    let mut out = HashMap::with_capacity(src_pts.len());
    for (i, &j) in matching.iter().enumerate() {
        let x = s[i].0.rep;
        let y = witness[i][j].expect("matched pairs are compatible");
        for &g in elems {
            out.insert(src.act(g, x), dst.act(g, y));
        }
    }
    Some(out)
}

/// Kuhn's augmenting-path algorithm; returns the right vertex for each left
/// vertex when a perfect matching exists.
pub(crate) fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none() || augment(owner[v].unwrap(), adj, seen, owner) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    if adj.len() != right {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (v, u) in owner.iter().enumerate() {
        out[u.expect("perfect")] = v;
    }
    Some(out)
}

/// An isomorphism `h : f.source → g.source` with `g ∘ h = f`, if one exists.
pub fn iso_over(f: &GMap, g: &GMap) -> Option<GMap> {
    if f.target != g.target || *f.source.group != *g.source.group {
        return None;
    }
    let elems: Vec<Elem> = f.source.group.elements().collect();
    let fp: Vec<Point> = f.source.points().collect();
    let gp: Vec<Point> = g.source.points().collect();
    let m = find_equivariant_bijection(
        &elems,
        &f.source,
        &fp,
        &|x| f.apply(x) as u64,
        &g.source,
        &gp,
        &|x| g.apply(x) as u64,
    )?;
    let table = f.source.points().map(|x| m[&x]).collect();
    Some(GMap::new_unchecked(f.source.clone(), g.source.clone(), table))
}

// ---------------------------------------------------------------------------
// Pullbacks

/// `A ×_Y B` for `f : A → Y`, `g : B → Y`, with points `(a, b)` in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: GSet,
    /// Projection to the source of `f`.
    pub first: GMap,
    /// Projection to the source of `g`.
    pub second: GMap,
    pairs: Vec<(Point, Point)>,
    index: HashMap<(Point, Point), Point>,
}

pub fn pullback(f: &GMap, g: &GMap) -> Result<Pullback> {
    if f.target != g.target {
        return Err(Error::ObjectMismatch("pullback needs a common target".into()));
    }
    let group = f.source.group().clone();
    let g_fibers = g.fibers();
    let mut pairs = Vec::new();
    for a in f.source.points() {
        for &b in &g_fibers[f.apply(a) as usize] {
            pairs.push((a, b));
        }
    }
    let index: HashMap<(Point, Point), Point> = pairs.iter().enumerate().map(|(i, &p)| (p, i as Point)).collect();
    let mut act = Vec::with_capacity(pairs.len() * group.order());
    for el in group.elements() {
        for &(a, b) in &pairs {
            act.push(index[&(f.source.act(el, a), g.source.act(el, b))]);
        }
    }
    let object = GSet::from_flat(group, pairs.len(), act);
    let first = GMap::new_unchecked(object.clone(), f.source.clone(), pairs.iter().map(|p| p.0).collect());
    let second = GMap::new_unchecked(object.clone(), g.source.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { object, first, second, pairs, index })
}

impl Pullback {
    pub fn pair_at(&self, z: Point) -> (Point, Point) {
        self.pairs[z as usize]
    }

    pub fn point_of(&self, a: Point, b: Point) -> Option<Point> {
        self.index.get(&(a, b)).copied()
    }

    /// The induced map `W → A ×_Y B` from `u : W → A`, `v : W → B` with `f u = g v`.
    pub fn pairing(&self, u: &GMap, v: &GMap) -> Result<GMap> {
        if u.source != v.source {
            return Err(Error::ObjectMismatch("pairing needs a common source".into()));
        }
        let mut table = Vec::with_capacity(u.source.size());
        for w in u.source.points() {
            let z = self
                .point_of(u.apply(w), v.apply(w))
                .ok_or_else(|| Error::ObjectMismatch("maps do not agree over the base".into()))?;
            table.push(z);
        }
        Ok(GMap::new_unchecked(u.source.clone(), self.object.clone(), table))
    }
}

// ---------------------------------------------------------------------------
// Dependent products

/// `Π_f A → Y` for `p : A → X`, `f : X → Y`. The points over `y` are the
/// sections of `p` over `f⁻¹(y)`, stored as tuples indexed by the ascending
/// fiber of `f`.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub map: GMap,
    sections: Vec<(Point, Vec<Point>)>,
    f_fibers: Vec<Vec<Point>>,
}

pub fn dependent_product(p: &GMap, f: &GMap) -> Result<DependentProduct> {
    if p.target != f.source {
        return Err(Error::ObjectMismatch("dependent product needs p: A → X and f: X → Y".into()));
    }
    let group = f.source.group().clone();
    let f_fibers = f.fibers();
    let p_fibers = p.fibers();
    let mut sections: Vec<(Point, Vec<Point>)> = Vec::new();
    for y in f.target.points() {
        let fiber = &f_fibers[y as usize];
        let choices: Vec<&Vec<Point>> = fiber.iter().map(|&x| &p_fibers[x as usize]).collect();
        for s in cartesian(&choices) {
            sections.push((y, s));
        }
    }
    let index: HashMap<(Point, &[Point]), Point> =
        sections.iter().enumerate().map(|(i, (y, s))| ((*y, s.as_slice()), i as Point)).collect();
    // position of x within its f-fiber
    let mut slot = vec![0usize; f.source.size()];
    for fib in &f_fibers {
        for (i, &x) in fib.iter().enumerate() {
            slot[x as usize] = i;
        }
    }
    let mut act = Vec::with_capacity(sections.len() * group.order());
    for g in group.elements() {
        let ginv = group.inv(g);
        for (y, s) in &sections {
            let gy = f.target.act(g, *y);
            // (g·s)(x') = g·s(g⁻¹x')
            let moved: Vec<Point> = f_fibers[gy as usize]
                .iter()
                .map(|&x2| {
                    let x = f.source.act(ginv, x2);
                    p.source.act(g, s[slot[x as usize]])
                })
                .collect();
            act.push(index[&(gy, moved.as_slice())]);
        }
    }
    let object = GSet::from_flat(group, sections.len(), act);
    let map = GMap::new_unchecked(object, f.target.clone(), sections.iter().map(|s| s.0).collect());
    Ok(DependentProduct { map, sections, f_fibers })
}

fn cartesian(choices: &[&Vec<Point>]) -> Vec<Vec<Point>> {
    let mut out: Vec<Vec<Point>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for &v in c.iter() {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

impl DependentProduct {
    pub fn object(&self) -> &GSet {
        self.map.source()
    }

    /// The section at point `s` of `Π_f A` as `(y, values on f⁻¹(y))`.
    pub fn section(&self, s: Point) -> (Point, &[Point]) {
        let (y, v) = &self.sections[s as usize];
        (*y, v)
    }

    /// Evaluates section `s` at `x ∈ f⁻¹(y)`.
    pub fn evaluate(&self, s: Point, x: Point) -> Option<Point> {
        let (y, vals) = &self.sections[s as usize];
        let pos = self.f_fibers[*y as usize].iter().position(|&z| z == x)?;
        Some(vals[pos])
    }
}

/// The exponential diagram of `p : A → X` along `f : X → Y`:
///
/// ```text
/// X <--p-- A <--e-- X ×_Y Π_f A
/// |                     |
/// f                     f'
/// v                     v
/// Y ====== Y <--Π_f p-- Π_f A
/// ```
#[derive(Clone, Debug)]
pub struct ExponentialDiagram {
    pub p: GMap,
    pub f: GMap,
    pub product: DependentProduct,
    /// `X ×_Y Π_f A` with its projections to X and Π_f A.
    pub pullback: Pullback,
    /// Evaluation `(x, s) ↦ s(x)`.
    pub e: GMap,
    /// Projection `X ×_Y Π_f A → Π_f A`.
    pub f_prime: GMap,
}

pub fn exponential_diagram(p: &GMap, f: &GMap) -> Result<ExponentialDiagram> {
    let product = dependent_product(p, f)?;
    let pb = pullback(f, &product.map)?;
    let e_table: Vec<Point> = pb
        .object
        .points()
        .map(|z| {
            let (x, s) = pb.pair_at(z);
            product.evaluate(s, x).expect("x lies in the fiber of s")
        })
        .collect();
    let e = GMap::new_unchecked(pb.object.clone(), p.source.clone(), e_table);
    let f_prime = pb.second.clone();
    Ok(ExponentialDiagram { p: p.clone(), f: f.clone(), product, pullback: pb, e, f_prime })
}

impl ExponentialDiagram {
    /// `Π_f p : Π_f A → Y`.
    pub fn pi_p(&self) -> &GMap {
        &self.product.map
    }
}

// ---------------------------------------------------------------------------
// Enumeration helpers for exhaustive checks

/// All G-sets with at most `max_size` points, one per isomorphism class,
/// including the empty G-set. Ordered by size then by class multiset.
pub fn gsets_up_to(group: &Arc<Group>, max_size: usize) -> Vec<GSet> {
    let o = group.poset();
    let sizes: Vec<usize> = (0..o.len()).map(|i| group.order() / o.representative(i).order()).collect();
    let mut multisets: Vec<Vec<usize>> = Vec::new();
    fn rec(start: usize, left: usize, sizes: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for c in start..sizes.len() {
            if sizes[c] <= left {
                cur.push(c);
                rec(c, left - sizes[c], sizes, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, max_size, &sizes, &mut Vec::new(), &mut multisets);
    let total = |m: &Vec<usize>| m.iter().map(|&c| sizes[c]).sum::<usize>();
    multisets.sort_by(|a, b| total(a).cmp(&total(b)).then_with(|| a.cmp(b)));
    multisets.iter().map(|m| GSet::from_classes(group, m)).collect()
}

/// All equivariant maps `source → target` whose value `y` at every orbit
/// representative `x` satisfies `allow(x, y)`.
pub fn gmaps_with(source: &GSet, target: &GSet, allow: impl Fn(Point, Point) -> bool) -> Vec<GMap> {
    if *source.group() != *target.group() {
        return Vec::new();
    }
    let orbits = source.orbits();
    let options: Vec<Vec<Point>> = orbits
        .iter()
        .map(|orb| {
            let x = orb[0];
            let stab = source.stabilizer(x);
            target
                .points()
                .filter(|&y| allow(x, y) && stab.elements().iter().all(|&g| target.act(g, y) == y))
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Point>> = options.iter().collect();
    cartesian(&refs)
        .into_iter()
        .map(|choice| {
            let mut table = vec![0; source.size()];
            for (orb, &y) in orbits.iter().zip(&choice) {
                let x = orb[0];
                for g in source.group().elements() {
                    table[source.act(g, x) as usize] = target.act(g, y);
                }
            }
            GMap::new_unchecked(source.clone(), target.clone(), table)
        })
        .collect()
}

pub fn gmaps(source: &GSet, target: &GSet) -> Vec<GMap> {
    gmaps_with(source, target, |_, _| true)
}

/// Maps `u : B → A` with `over_a ∘ u = over_b`.
pub fn gmaps_over(over_b: &GMap, over_a: &GMap) -> Vec<GMap> {
    if over_b.target() != over_a.target() {
        return Vec::new();
    }
    gmaps_with(over_b.source(), over_a.source(), |x, y| over_a.apply(y) == over_b.apply(x))
}

/// A uniformly chosen equivariant map, or `None` when there is none.
pub fn random_gmap<R: Rng>(source: &GSet, target: &GSet, rng: &mut R) -> Option<GMap> {
    let mut table = vec![0; source.size()];
    for orb in source.orbits() {
        let x = orb[0];
        let stab = source.stabilizer(x);
        let options: Vec<Point> =
            target.points().filter(|&y| stab.elements().iter().all(|&g| target.act(g, y) == y)).collect();
        if options.is_empty() {
            return None;
        }
        let y = options[rng.gen_range(0..options.len())];
        for g in source.group().elements() {
            table[source.act(g, x) as usize] = target.act(g, y);
        }
    }
    Some(GMap::new_unchecked(source.clone(), target.clone(), table))
}

/// A random G-set built from up to `max_size` points worth of random orbits.
pub fn random_gset<R: Rng>(group: &Arc<Group>, max_size: usize, rng: &mut R) -> GSet {
    let o = group.poset();
    let mut classes = Vec::new();
    let mut left = rng.gen_range(0..=max_size);
    loop {
        let fitting: Vec<usize> =
            (0..o.len()).filter(|&c| group.order() / o.representative(c).order() <= left).collect();
        if fitting.is_empty() || (left < max_size && rng.gen_bool(0.25)) {
            break;
        }
        let c = fitting[rng.gen_range(0..fitting.len())];
        left -= group.order() / o.representative(c).order();
        classes.push(c);
    }
    GSet::from_classes(group, &classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<Group> {
        Group::cyclic(2)
    }

    #[test]
    fn orbit_types() {
        let g = c2();
        assert_eq!(GSet::regular(&g).orbit_decompose(), vec![0]);
        assert_eq!(GSet::trivial(&g, 3).orbit_decompose(), vec![1, 1, 1]);
        let s3 = Group::symmetric(3).unwrap();
        let three = GSet::coset_space(&s3, s3.poset().representative(1));
        assert_eq!(three.size(), 3);
        assert_eq!(three.orbit_decompose(), vec![1]);
    }

    #[test]
    fn fixed_point_counts() {
        let g = c2();
        let free = GSet::regular(&g);
        assert_eq!(free.fixed_points(&g.trivial_subgroup()), 2);
        assert_eq!(free.fixed_points(&g.whole()), 0);
        assert_eq!(GSet::point(&g).fixed_points(&g.whole()), 1);
    }

    #[test]
    fn iso_over_detects_action_type() {
        let g = c2();
        let free = GSet::regular(&g);
        let two_fixed = GSet::trivial(&g, 2);
        let f = GMap::to_point(&free);
        let h = GMap::to_point(&two_fixed);
        assert!(iso_over(&f, &h).is_none());
        let swapped = GMap::new(free.clone(), GSet::point(&g), vec![0, 0]).unwrap();
        assert!(iso_over(&f, &swapped).is_some());
        let id = GMap::identity(&free);
        assert!(iso_over(&id, &id).unwrap().is_identity());
    }

    #[test]
    fn pullback_of_free_orbits_over_point() {
        let g = c2();
        let free = GSet::regular(&g);
        let f = GMap::to_point(&free);
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.object.size(), 4);
        assert_eq!(pb.object.orbit_decompose(), vec![0, 0]);
    }

    #[test]
    fn dependent_product_of_fold() {
        // f: C2/e → C2/C2, p: fold C2/e ⊔ C2/e → C2/e
        let g = c2();
        let free = GSet::regular(&g);
        let p = GMap::fold(&free);
        let f = GMap::to_point(&free);
        let pi = dependent_product(&p, &f).unwrap();
        assert_eq!(pi.object().size(), 4);
        assert_eq!(pi.object().orbit_decompose(), vec![0, 1, 1]);
        assert_eq!(pi.object().marks(), vec![4, 2]);
    }

    #[test]
    fn dependent_product_with_empty_fiber() {
        let g = c2();
        let x = GSet::trivial(&g, 2);
        let p = GMap::new(GSet::trivial(&g, 1), x.clone(), vec![0]).unwrap();
        let f = GMap::to_point(&x);
        assert_eq!(dependent_product(&p, &f).unwrap().object().size(), 0);
    }

    #[test]
    fn exponential_diagram_squares_commute() {
        let g = c2();
        let free = GSet::regular(&g);
        let p = GMap::fold(&free);
        let f = GMap::to_point(&free);
        let d = exponential_diagram(&p, &f).unwrap();
        // p ∘ e = projection to X
        assert_eq!(p.after(&d.e).unwrap(), d.pullback.first);
        // f ∘ proj = Π_f p ∘ f'
        assert_eq!(f.after(&d.pullback.first).unwrap(), d.pi_p().after(&d.f_prime).unwrap());
    }

    #[test]
    fn identity_dependent_product_is_a() {
        let g = c2();
        let free = GSet::regular(&g);
        let p = GMap::fold(&free);
        let pi = dependent_product(&p, &GMap::identity(&free)).unwrap();
        assert!(iso_over(&pi.map, &p).is_some());
        let d = exponential_diagram(&p, &GMap::identity(&free)).unwrap();
        assert_eq!(d.e.source().size(), d.e.target().size());
    }

    #[test]
    fn empty_gset_operations() {
        let g = c2();
        let e = GSet::empty(&g);
        assert!(e.orbit_decompose().is_empty());
        assert_eq!(gsets_up_to(&g, 0).len(), 1);
        let id = GMap::identity(&e);
        assert!(iso_over(&id, &id).is_some());
    }

    #[test]
    fn enumeration_counts() {
        // C2-sets with ≤ 2 points: ∅, pt, 2pt, C2/e
        assert_eq!(gsets_up_to(&c2(), 2).len(), 4);
        let free = GSet::regular(&c2());
        // maps C2/e → C2/e: identity and swap
        assert_eq!(gmaps(&free, &free).len(), 2);
        assert_eq!(gmaps(&GSet::point(&c2()), &free).len(), 0);
    }
}
