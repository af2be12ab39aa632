//! Finite groups as Cayley tables, their subgroups, and the poset of
//! conjugacy classes of subgroups ordered by subconjugacy.
//!
//! Groups are capped at [`DEFAULT_ORDER_LIMIT`] elements so that a subgroup
//! fits in a `u64` membership mask.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_LIMIT: usize = 64;

/// Index of a group element. Element 0 is always the identity.
pub type Elem = u32;

pub struct Group {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    labels: Vec<String>,
    name: String,
    poset: OnceLock<SubconjugacyPoset>,
    subgroups: OnceLock<Vec<Subgroup>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.order == other.order && self.mul == other.mul)
    }
}

impl Eq for Group {}

/// Serialized form: `{order, mul, labels}` with `mul` a row-major table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<Elem>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl Group {
    /// Builds a group from a Cayley table `table[a][b] = a·b`. The identity is
    /// moved to index 0 if necessary.
    pub fn from_table(table: Vec<Vec<Elem>>, labels: Vec<String>, name: &str) -> Result<Arc<Group>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > DEFAULT_ORDER_LIMIT {
            return Err(Error::GroupTooLarge { order: n, limit: DEFAULT_ORDER_LIMIT });
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return Err(Error::InvalidGroup("table is not a square table over 0..n".into()));
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] as usize == a && table[a][e] as usize == a))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        // swap id <-> 0 so the identity is element 0
        let relabel = |x: usize| -> usize {
            if x == id {
                0
            } else if x == 0 {
                id
            } else {
                x
            }
        };
        let mut mul = vec![0 as Elem; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b] as usize) as Elem;
            }
        }
        let mut labels = if labels.len() == n {
            labels
        } else {
            (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect()
        };
        labels.swap(0, id);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = mul[a * n + b] as usize;
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inv = vec![0 as Elem; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[b * n + a] == 0)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            if mul[a * n + b] != 0 {
                return Err(Error::InvalidGroup(format!("inverse of {a} is one-sided")));
            }
            inv[a] = b as Elem;
        }
        Ok(Arc::new(Group {
            order: n,
            mul,
            inv,
            labels,
            name: name.to_string(),
            poset: OnceLock::new(),
            subgroups: OnceLock::new(),
        }))
    }

    pub fn from_json(json: &GroupJson) -> Result<Arc<Group>> {
        let n = json.order;
        if json.mul.len() != n * n {
            return Err(Error::InvalidGroup(format!("expected {} table entries", n * n)));
        }
        let table = json.mul.chunks(n.max(1)).map(|r| r.to_vec()).collect();
        Group::from_table(table, json.labels.clone(), "json")
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { order: self.order, mul: self.mul.clone(), labels: self.labels.clone() }
    }

    /// The group generated by permutations of `0..n`, with elements listed in
    /// breadth-first order from the identity.
    pub fn from_permutations(generators: &[Vec<u32>], n: usize, limit: usize) -> Result<Arc<Group>> {
        for g in generators {
            let mut seen = vec![false; n];
            if g.len() != n || g.iter().any(|&x| (x as usize) >= n || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::NotPermutation(n));
            }
        }
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut elems = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                // (x·g)(k) = x(g(k))
                let prod: Vec<u32> = g.iter().map(|&k| elems[i][k as usize]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() == limit {
                        return Err(Error::GroupTooLarge { order: limit + 1, limit });
                    }
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let ab: Vec<u32> = b.iter().map(|&k| a[k as usize]).collect();
                        index[&ab] as Elem
                    })
                    .collect()
            })
            .collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        Group::from_table(table, labels, "perm")
    }

    pub fn trivial() -> Arc<Group> {
        Group::cyclic(1)
    }

    /// Cyclic group C(n), element `i` is `a^i`.
    pub fn cyclic(n: usize) -> Arc<Group> {
        assert!((1..=DEFAULT_ORDER_LIMIT).contains(&n), "cyclic order out of range");
        let table = (0..n).map(|i| (0..n).map(|j| ((i + j) % n) as Elem).collect()).collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            })
            .collect();
        Group::from_table(table, labels, &format!("C({n})")).expect("cyclic table is a group")
    }

    /// Dihedral group D(n) of order 2n; element `i + n·j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Arc<Group> {
        assert!(n >= 1 && 2 * n <= DEFAULT_ORDER_LIMIT, "dihedral degree out of range");
        let idx = |i: usize, j: usize| (i % n + n * j) as Elem;
        let table = (0..2 * n)
            .map(|x| {
                let (i, a) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (k, b) = (y % n, y / n);
                        // r^i s^a r^k s^b = r^(i ± k) s^(a+b)
                        let rot = if a == 0 { i + k } else { i + n - k };
                        idx(rot, (a + b) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..2 * n)
            .map(|x| {
                let (i, a) = (x % n, x / n);
                let r = match i {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r^{i}"),
                };
                match (r.is_empty(), a) {
                    (true, 0) => "e".to_string(),
                    (false, 0) => r,
                    (_, _) => format!("{r}s"),
                }
            })
            .collect();
        Group::from_table(table, labels, &format!("D({n})")).expect("dihedral table is a group")
    }

    /// Symmetric group S(n) generated by the n-cycle and a transposition.
    pub fn symmetric(n: usize) -> Result<Arc<Group>> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        let g = Group::from_permutations(&gens, n.max(1), DEFAULT_ORDER_LIMIT)?;
        Ok(Group::renamed(g, &format!("S({n})")))
    }

    pub fn klein_four() -> Arc<Group> {
        let table = (0..4u32).map(|a| (0..4u32).map(|b| a ^ b).collect()).collect();
        let labels = ["e", "a", "b", "ab"].map(String::from).to_vec();
        Group::from_table(table, labels, "V4").expect("klein table is a group")
    }

    fn renamed(g: Arc<Group>, name: &str) -> Arc<Group> {
        let g = Arc::try_unwrap(g).unwrap_or_else(|a| Group {
            order: a.order,
            mul: a.mul.clone(),
            inv: a.inv.clone(),
            labels: a.labels.clone(),
            name: String::new(),
            poset: OnceLock::new(),
            subgroups: OnceLock::new(),
        });
        Arc::new(Group { name: name.to_string(), ..g })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// g·x·g⁻¹
    pub fn conjugate(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[Elem]) -> Result<Subgroup> {
        if let Some(&bad) = gens.iter().find(|&&g| g as usize >= self.order) {
            return Err(Error::NotSubgroup(format!("element {bad} out of range")));
        }
        let mut mask: u64 = 1;
        let mut frontier = vec![0 as Elem];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if mask & (1u64 << y) == 0 {
                    mask |= 1u64 << y;
                    frontier.push(y);
                }
            }
        }
        Ok(Subgroup::from_mask(mask))
    }

    /// Validates an explicit element list as a subgroup.
    pub fn subgroup(&self, elements: &[Elem]) -> Result<Subgroup> {
        if elements.iter().any(|&g| g as usize >= self.order) {
            return Err(Error::NotSubgroup("element out of range".into()));
        }
        let mask = elements.iter().fold(0u64, |m, &g| m | (1u64 << g));
        let h = Subgroup::from_mask(mask);
        if !h.contains(0) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in h.elements() {
            if !h.contains(self.inv(a)) {
                return Err(Error::NotSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in h.elements() {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("not closed under product at ({a},{b})")));
                }
            }
        }
        Ok(h)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_mask(1)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(full_mask(self.order))
    }

    /// g·H·g⁻¹
    pub fn conjugate_subgroup(&self, g: Elem, h: &Subgroup) -> Subgroup {
        Subgroup::from_mask(h.elements().iter().fold(0u64, |m, &x| m | (1u64 << self.conjugate(g, x))))
    }

    /// Whether `h ⊆ g·k·g⁻¹` for some g.
    pub fn is_subconjugate(&self, h: &Subgroup, k: &Subgroup) -> bool {
        if !k.order().is_multiple_of(h.order()) {
            return false;
        }
        self.elements().any(|g| h.is_subset(&self.conjugate_subgroup(g, k)))
    }

    /// The index (K:H) of H in a conjugate of K containing it.
    pub fn subgroup_index(&self, k: &Subgroup, h: &Subgroup) -> Result<usize> {
        if !self.is_subconjugate(h, k) {
            return Err(Error::NotSubconjugate { small: h.order(), large: k.order() });
        }
        Ok(k.order() / h.order())
    }

    /// Stabilizer-style subgroup of all elements satisfying `pred`.
    pub fn subgroup_where(&self, pred: impl Fn(Elem) -> bool) -> Subgroup {
        Subgroup::from_mask(self.elements().filter(|&g| pred(g)).fold(0u64, |m, g| m | (1u64 << g)))
    }

    /// Every subgroup exactly once, sorted by order and then by element list.
    ///
    /// Computed by cyclic extension: start from the cyclic subgroups and join
    /// with cyclic subgroups until nothing new appears.
    pub fn all_subgroups(&self) -> &[Subgroup] {
        self.subgroups.get_or_init(|| {
            let mut cyclic: Vec<Subgroup> = Vec::new();
            let mut seen_cyclic = HashSet::new();
            for g in self.elements() {
                let c = self.generated(&[g]).expect("element in range");
                if seen_cyclic.insert(c.mask()) {
                    cyclic.push(c);
                }
            }
            let mut seen: HashSet<u64> = seen_cyclic.clone();
            let mut all: Vec<Subgroup> = cyclic.clone();
            let mut frontier: Vec<Subgroup> = cyclic.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for h in &frontier {
                    for c in &cyclic {
                        if c.is_subset(h) {
                            continue;
                        }
                        let mut gens: Vec<Elem> = h.elements().to_vec();
                        gens.extend_from_slice(c.elements());
                        let j = self.generated(&gens).expect("elements in range");
                        if seen.insert(j.mask()) {
                            next.push(j.clone());
                            all.push(j);
                        }
                    }
                }
                frontier = next;
            }
            all.sort();
            all
        })
    }

    /// The subconjugacy poset O, computed once and cached.
    pub fn poset(&self) -> &SubconjugacyPoset {
        self.poset.get_or_init(|| SubconjugacyPoset::build(self))
    }

    /// The subgroup `h` as a group in its own right; element `i` of the result
    /// is `h.elements()[i]` in this group.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Arc<Group> {
        let els = h.elements();
        let pos: HashMap<Elem, Elem> = els.iter().enumerate().map(|(i, &g)| (g, i as Elem)).collect();
        let table = els.iter().map(|&a| els.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let labels = els.iter().map(|&g| self.label(g).to_string()).collect();
        let name = format!("{}<{}>", self.name, h.order());
        Group::from_table(table, labels, &name).expect("subgroup table is a group")
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn cycle_notation(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x] as usize;
        }
        let body: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push('(');
        out.push_str(&body.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// A subgroup, stored as a membership mask plus its sorted element list.
///
/// Subgroups carry no pointer back to their group; operations that need the
/// group take it as an argument.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    mask: u64,
    elements: Vec<Elem>,
}

impl Subgroup {
    fn from_mask(mask: u64) -> Self {
        let elements = (0..64).filter(|&i| mask & (1u64 << i) != 0).collect();
        Subgroup { mask, elements }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        (g as usize) < 64 && self.mask & (1u64 << g) != 0
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order()).then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A conjugacy class of subgroups with its canonical representative (the
/// member with the lexicographically least element list).
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
    pub label: String,
}

impl ConjugacyClass {
    pub fn order(&self) -> usize {
        self.representative.order()
    }
}

/// Conjugacy classes of subgroups ordered by subgroup order, then by
/// representative. The first class is `[e]`, the last `[G]`.
#[derive(Clone, Debug)]
pub struct SubconjugacyPoset {
    classes: Vec<ConjugacyClass>,
    leq: Vec<Vec<bool>>,
    class_of: HashMap<u64, usize>,
    pub(crate) marks_cache: OnceLock<Vec<Vec<u64>>>,
    pub(crate) product_cache: OnceLock<Vec<Vec<Vec<u64>>>>,
    pub(crate) witt_cache: crate::witt::WittCache,
}

impl SubconjugacyPoset {
    fn build(g: &Group) -> Self {
        let mut class_of: HashMap<u64, usize> = HashMap::new();
        let mut raw: Vec<Vec<Subgroup>> = Vec::new();
        for h in g.all_subgroups() {
            if class_of.contains_key(&h.mask()) {
                continue;
            }
            let mut members: Vec<Subgroup> = g.elements().map(|x| g.conjugate_subgroup(x, h)).collect();
            members.sort();
            members.dedup();
            for m in &members {
                class_of.insert(m.mask(), usize::MAX);
            }
            raw.push(members);
        }
        // members are sorted, so members[0] is the least representative
        raw.sort_by(|a, b| a[0].cmp(&b[0]));
        let mut classes = Vec::with_capacity(raw.len());
        let mut per_order: HashMap<usize, usize> = HashMap::new();
        for members in &raw {
            *per_order.entry(members[0].order()).or_default() += 1;
        }
        let mut seen_order: HashMap<usize, usize> = HashMap::new();
        for (i, members) in raw.into_iter().enumerate() {
            for m in &members {
                class_of.insert(m.mask(), i);
            }
            let ord = members[0].order();
            let k = seen_order.entry(ord).or_default();
            let label = if per_order[&ord] > 1 {
                format!("{ord}{}", (b'a' + *k as u8) as char)
            } else {
                ord.to_string()
            };
            *k += 1;
            classes.push(ConjugacyClass { representative: members[0].clone(), members, label });
        }
        let n = classes.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let h = &classes[i].representative;
                leq[i][j] = classes[j].members.iter().any(|k| h.is_subset(k));
            }
        }
        SubconjugacyPoset { classes, leq, class_of, marks_cache: OnceLock::new(), product_cache: OnceLock::new(), witt_cache: Default::default() }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ConjugacyClass {
        &self.classes[i]
    }

    pub fn representative(&self, i: usize) -> &Subgroup {
        &self.classes[i].representative
    }

    pub fn label(&self, i: usize) -> &str {
        &self.classes[i].label
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// `[H_i] ≤ [H_j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Class index of an arbitrary subgroup.
    pub fn class_of(&self, h: &Subgroup) -> usize {
        self.class_of[&h.mask()]
    }

    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_generates_c2() {
        let g = Group::from_permutations(&[vec![1, 0]], 2, 64).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn s3_from_generators() {
        let g = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 3, 64).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = Group::from_permutations(&[], 1, 64).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.poset().len(), 1);
    }

    #[test]
    fn rejects_non_permutation() {
        assert_eq!(Group::from_permutations(&[vec![0, 0]], 2, 64).unwrap_err(), Error::NotPermutation(2));
    }

    #[test]
    fn order_limit() {
        let err = Group::symmetric(5).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { .. }));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(Group::cyclic(2).all_subgroups().len(), 2);
        assert_eq!(Group::symmetric(3).unwrap().all_subgroups().len(), 6);
        assert_eq!(Group::cyclic(4).all_subgroups().len(), 3);
        assert_eq!(Group::dihedral(4).all_subgroups().len(), 10);
    }

    #[test]
    fn s3_poset() {
        let g = Group::symmetric(3).unwrap();
        let o = g.poset();
        let orders: Vec<usize> = o.classes().iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert!(o.leq(1, 3) && o.leq(2, 3));
        assert!(!o.leq(1, 2) && !o.leq(2, 1));
        assert_eq!(o.class(1).members.len(), 3);
    }

    #[test]
    fn klein_poset_has_five_classes() {
        let o = Group::klein_four().poset().clone();
        assert_eq!(o.len(), 5);
        assert_eq!(o.label(1), "2a");
    }

    #[test]
    fn index() {
        let g = Group::symmetric(3).unwrap();
        let o = g.poset();
        assert_eq!(g.subgroup_index(o.representative(3), o.representative(1)).unwrap(), 3);
        assert_eq!(g.subgroup_index(o.representative(1), o.representative(1)).unwrap(), 1);
        assert!(g.subgroup_index(o.representative(2), o.representative(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Group::dihedral(3);
        let back = Group::from_json(&g.to_json()).unwrap();
        assert_eq!(*g, *back);
    }

    #[test]
    fn identity_normalized_to_zero() {
        // C2 with the identity listed second
        let g = Group::from_table(vec![vec![1, 0], vec![0, 1]], vec![], "c2").unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn dihedral_relations() {
        let g = Group::dihedral(4);
        let (r, s) = (1, 4);
        assert_eq!(g.mul(s, s), 0);
        assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
    }
}
