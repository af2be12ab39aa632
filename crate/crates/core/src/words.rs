//! Words in the free {+,·}-algebra on the points of X together with the two
//! units, their support polynomials, evaluation on finite sets, and the
//! canonical bijections between evaluations of words with equal simple
//! support.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, VarNames};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    /// The additive unit n₊.
    Zero,
    /// The multiplicative unit n·.
    One,
    Var(u32),
    Sum(Box<Word>, Box<Word>),
    Prod(Box<Word>, Box<Word>),
}

impl Word {
    pub fn sum(a: Word, b: Word) -> Word {
        Word::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Word, b: Word) -> Word {
        Word::Prod(Box::new(a), Box::new(b))
    }

    /// Number of `+`/`·` nodes.
    pub fn size(&self) -> usize {
        match self {
            Word::Zero | Word::One | Word::Var(_) => 0,
            Word::Sum(a, b) | Word::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a VarNames,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(w: &Word, n: &VarNames, f: &mut fmt::Formatter<'_>, in_prod: bool) -> fmt::Result {
            match w {
                Word::Zero => write!(f, "0"),
                Word::One => write!(f, "1"),
                Word::Var(v) => write!(f, "{}", n.name(*v)),
                Word::Sum(a, b) => {
                    if in_prod {
                        write!(f, "(")?;
                    }
                    go(a, n, f, false)?;
                    write!(f, " + ")?;
                    // right operand parenthesized to keep the tree shape
                    if matches!(**b, Word::Sum(..)) {
                        write!(f, "(")?;
                        go(b, n, f, false)?;
                        write!(f, ")")?;
                    } else {
                        go(b, n, f, false)?;
                    }
                    if in_prod {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Word::Prod(a, b) => {
                    go(a, n, f, true)?;
                    write!(f, "*")?;
                    if matches!(**b, Word::Prod(..)) {
                        write!(f, "(")?;
                        go(b, n, f, true)?;
                        write!(f, ")")
                    } else {
                        go(b, n, f, true)
                    }
                }
            }
        }
        go(self.word, self.names, f, false)
    }
}

/// The support homomorphism to ℤ[X]: n₊ ↦ 0, n· ↦ 1, x ↦ x.
pub fn supp(w: &Word) -> Poly {
    match w {
        Word::Zero => Poly::zero(),
        Word::One => Poly::one(),
        Word::Var(v) => Poly::var(*v),
        Word::Sum(a, b) => supp(a) + supp(b),
        Word::Prod(a, b) => supp(a) * supp(b),
    }
}

/// A finite labelled set for each point of X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetAssignment {
    sets: Vec<Vec<String>>,
}

impl SetAssignment {
    pub fn new(sets: Vec<Vec<String>>) -> Result<Self> {
        for s in &sets {
            let mut sorted = s.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(Error::Usage("labels within a set must be distinct".into()));
            }
        }
        Ok(SetAssignment { sets })
    }

    /// Point `x` gets `sizes[x]` elements labelled `x.0, x.1, …`.
    pub fn with_sizes(sizes: &[usize]) -> Self {
        SetAssignment {
            sets: sizes.iter().enumerate().map(|(x, &n)| (0..n).map(|i| format!("{x}.{i}")).collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// ev_x(α) = α(x)
    pub fn set(&self, x: u32) -> Option<&[String]> {
        self.sets.get(x as usize).map(Vec::as_slice)
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

/// An element of an evaluated word, recording how it was built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// The point of the one-point set n·.
    Unit,
    /// Element `index` of α(var).
    Leaf { var: u32, index: usize },
    /// Left summand of a disjoint union.
    Left(Box<Element>),
    /// Right summand of a disjoint union.
    Right(Box<Element>),
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    /// Leaves sorted by variable: the (monomial, factor tuple) reading of the element.
    pub fn normal_form(&self) -> Vec<(u32, usize)> {
        fn collect(e: &Element, out: &mut Vec<(u32, usize)>) {
            match e {
                Element::Unit => {}
                Element::Leaf { var, index } => out.push((*var, *index)),
                Element::Left(x) | Element::Right(x) => collect(x, out),
                Element::Pair(a, b) => {
                    collect(a, out);
                    collect(b, out);
                }
            }
        }
        let mut out = Vec::new();
        collect(self, &mut out);
        out.sort_unstable();
        out
    }

    /// Relabels leaf indices through `f(var, index)`.
    pub fn map_leaves(&self, f: &dyn Fn(u32, usize) -> usize) -> Element {
        match self {
            Element::Unit => Element::Unit,
            Element::Leaf { var, index } => Element::Leaf { var: *var, index: f(*var, *index) },
            Element::Left(x) => Element::Left(Box::new(x.map_leaves(f))),
            Element::Right(x) => Element::Right(Box::new(x.map_leaves(f))),
            Element::Pair(a, b) => Element::Pair(Box::new(a.map_leaves(f)), Box::new(b.map_leaves(f))),
        }
    }
}

/// n₊ ↦ ∅, n· ↦ {()}, + ↦ tagged disjoint union, · ↦ pairs.
pub fn eval(w: &Word, a: &SetAssignment) -> Result<Vec<Element>> {
    Ok(match w {
        Word::Zero => Vec::new(),
        Word::One => vec![Element::Unit],
        Word::Var(v) => {
            let set = a.set(*v).ok_or_else(|| Error::Usage(format!("no set assigned to variable {v}")))?;
            (0..set.len()).map(|index| Element::Leaf { var: *v, index }).collect()
        }
        Word::Sum(l, r) => {
            let mut out: Vec<Element> = eval(l, a)?.into_iter().map(|e| Element::Left(Box::new(e))).collect();
            out.extend(eval(r, a)?.into_iter().map(|e| Element::Right(Box::new(e))));
            out
        }
        Word::Prod(l, r) => {
            let (xs, ys) = (eval(l, a)?, eval(r, a)?);
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(Element::Pair(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            out
        }
    })
}

/// The canonical bijection `eval(w) → eval(w2)` as an index table, defined
/// when both words have the same simple support. Elements correspond when
/// their normal forms agree.
pub fn coherence_iso(w: &Word, w2: &Word, a: &SetAssignment) -> Result<Vec<usize>> {
    let (s, s2) = (supp(w), supp(w2));
    if s != s2 {
        return Err(Error::Coherence("supports differ".into()));
    }
    if !s.is_simple() {
        return Err(Error::Coherence("support is not simple".into()));
    }
    let (src, dst) = (eval(w, a)?, eval(w2, a)?);
    coherence_between(&src, &dst)
}

/// Matches two already evaluated words by normal form.
pub fn coherence_between(src: &[Element], dst: &[Element]) -> Result<Vec<usize>> {
    let index: HashMap<Vec<(u32, usize)>, usize> =
        dst.iter().enumerate().map(|(i, e)| (e.normal_form(), i)).collect();
    if index.len() != dst.len() || src.len() != dst.len() {
        return Err(Error::Coherence("normal forms do not determine a bijection".into()));
    }
    src.iter()
        .map(|e| index.get(&e.normal_form()).copied().ok_or_else(|| Error::Coherence("unmatched element".into())))
        .collect()
}

/// All words with at most `max_ops` operator nodes over `n_vars` variables,
/// grouped by operator count.
pub fn enumerate_words(n_vars: u32, max_ops: usize) -> Vec<Word> {
    let mut by_size: Vec<Vec<Word>> = vec![Vec::new(); max_ops + 1];
    by_size[0].push(Word::Zero);
    by_size[0].push(Word::One);
    by_size[0].extend((0..n_vars).map(Word::Var));
    for n in 1..=max_ops {
        let mut layer = Vec::new();
        for left in 0..n {
            let right = n - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    layer.push(Word::sum(a.clone(), b.clone()));
                    layer.push(Word::prod(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = layer;
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Word {
        Word::Var(i)
    }

    #[test]
    fn supp_of_units() {
        assert_eq!(supp(&Word::Zero), Poly::zero());
        assert_eq!(supp(&Word::One), Poly::one());
    }

    #[test]
    fn supp_annihilates_zero_summand() {
        let w = Word::prod(Word::sum(x(0), Word::Zero), x(1));
        assert_eq!(supp(&w), Poly::var(0) * Poly::var(1));
    }

    #[test]
    fn supp_of_square() {
        let s = Word::sum(x(0), x(1));
        let names = VarNames::new(["x1", "x2"]);
        assert_eq!(supp(&Word::prod(s.clone(), s)).display(&names).to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn eval_cardinalities() {
        let a = SetAssignment::with_sizes(&[2, 3]);
        assert_eq!(eval(&Word::One, &a).unwrap(), vec![Element::Unit]);
        assert_eq!(eval(&Word::sum(x(0), x(1)), &a).unwrap().len(), 5);
        assert!(eval(&x(5), &a).is_err());
    }

    #[test]
    fn identity_and_swap() {
        let a = SetAssignment::with_sizes(&[2, 3]);
        let w = Word::sum(x(0), x(1));
        assert_eq!(coherence_iso(&w, &w, &a).unwrap(), vec![0, 1, 2, 3, 4]);
        let w2 = Word::sum(x(1), x(0));
        assert_eq!(coherence_iso(&w, &w2, &a).unwrap(), vec![3, 4, 0, 1, 2]);
    }

    #[test]
    fn distributivity() {
        let a = SetAssignment::with_sizes(&[1, 1, 1]);
        let w = Word::prod(x(0), Word::sum(x(1), x(2)));
        let w2 = Word::sum(Word::prod(x(0), x(1)), Word::prod(x(0), x(2)));
        let iso = coherence_iso(&w, &w2, &a).unwrap();
        let (src, dst) = (eval(&w, &a).unwrap(), eval(&w2, &a).unwrap());
        for (i, &j) in iso.iter().enumerate() {
            assert_eq!(src[i].normal_form(), dst[j].normal_form());
        }
        assert_eq!(iso, vec![0, 1]);
    }

    #[test]
    fn rejects_unequal_or_non_simple_supports() {
        let a = SetAssignment::with_sizes(&[1, 1]);
        assert!(coherence_iso(&x(0), &x(1), &a).is_err());
        let sq = Word::prod(x(0), x(0));
        assert!(coherence_iso(&sq, &sq, &a).is_err());
    }

    #[test]
    fn word_counts() {
        assert_eq!(enumerate_words(1, 0).len(), 3);
        // 3 leaves, then 2·3·3 one-operator words
        assert_eq!(enumerate_words(1, 1).len(), 3 + 18);
    }
}
