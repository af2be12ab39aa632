//! Exact multivariate polynomials with integer coefficients.
//!
//! A [`Poly`] is kept in canonical form: terms sorted by [`Monomial`] order,
//! no zero coefficients, so structural equality is ring equality. A
//! polynomial with no variables is just an integer, which is how the
//! integer ring is represented throughout the crate.
//!
//! Variables are plain indices. Names only matter at the edges (parsing and
//! printing) and live in a [`VarNames`] table.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A monomial as a sparse list of `(variable, exponent)` pairs, sorted by
/// variable, with every exponent positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: u32) -> Self {
        Monomial { factors: vec![(v, 1)], degree: 1 }
    }

    pub fn from_factors(mut factors: Vec<(u32, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial { factors: merged, degree }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when every exponent is 1.
    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out, degree: self.degree + other.degree }
    }
}

// Graded order, higher degree first; ties broken lexicographically on the
// dense exponent vector with variable 0 most significant, larger first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree.cmp(&self.degree).then_with(|| {
            for (x, y) in self.factors.iter().zip(&other.factors) {
                if x.0 != y.0 {
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            other.factors.len().cmp(&self.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in ℤ[x₀, x₁, …] in canonical sorted form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(v: u32) -> Self {
        Poly { terms: vec![(Monomial::var(v), BigInt::one())] }
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    /// A random polynomial in `n_vars` variables with at most `max_terms`
    /// terms of total degree at most `max_degree`, coefficients in
    /// `-bound..=bound`.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n_vars: u32, max_degree: u32, max_terms: usize, bound: i64) -> Poly {
        let count = rng.gen_range(0..=max_terms);
        Poly::from_terms((0..count).map(|_| {
            let mut left = rng.gen_range(0..=max_degree);
            let mut factors = Vec::new();
            for v in 0..n_vars {
                if left == 0 {
                    break;
                }
                let e = rng.gen_range(0..=left);
                if e > 0 {
                    factors.push((v, e));
                    left -= e;
                }
            }
            (Monomial::from_factors(factors), BigInt::from(rng.gen_range(-bound..=bound)))
        }))
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_constant().and_then(|c| c.to_i64())
    }

    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    /// One past the largest variable index that occurs.
    pub fn var_bound(&self) -> u32 {
        self.terms
            .iter()
            .filter_map(|(m, _)| m.factors().last().map(|&(v, _)| v + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    /// Exact division by an integer, `None` if some coefficient is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Poly> {
        if k.is_zero() {
            return None;
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.push((m.clone(), q));
        }
        Some(Poly { terms })
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`; variables beyond the slice stay put.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut powers: HashMap<(u32, u32), Poly> = HashMap::new();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.factors() {
                match images.get(v as usize) {
                    Some(img) => {
                        let p = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                        term = &term * p;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_factors(kept);
            for (tm, tc) in term.terms {
                *acc.entry(tm.mul(&kept)).or_default() += tc;
            }
        }
        Poly::from_map(acc)
    }

    /// Evaluates at integer points; missing variables evaluate to zero.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = point.get(v as usize).cloned().unwrap_or_default();
                t *= num_traits::pow(x, e as usize);
            }
            total += t;
        }
        total
    }

    /// Renames variables through `map` (old index → new index).
    pub fn rename(&self, map: impl Fn(u32) -> u32) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let f = m.factors().iter().map(|&(v, e)| (map(v), e)).collect();
            (Monomial::from_factors(f), c.clone())
        }))
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// A sum of distinct square-free monomials: every coefficient is 1 and
    /// every exponent is 1.
    pub fn is_simple(&self) -> bool {
        self.terms.iter().all(|(m, c)| c.is_one() && m.is_square_free())
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(c)
    }
}

fn merge(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)], negate_b: bool) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), sign(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].1 + sign(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly { terms: merge(&self.terms, &rhs.terms, false) }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly { terms: merge(&self.terms, &rhs.terms, true) }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Poly::from_map(acc)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.terms = merge(&self.terms, &rhs.terms, false);
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| &acc * &p)
    }
}

/// Names for variable indices, used when parsing and printing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarNames { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// Index of `name`, appending it if unknown.
    pub fn intern(&mut self, name: &str) -> u32 {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                (self.names.len() - 1) as u32
            }
        }
    }

    pub fn name(&self, v: u32) -> String {
        self.names.get(v as usize).cloned().unwrap_or_else(|| format!("x{v}"))
    }

    /// Parses a polynomial expression. With `grow` set, unknown identifiers
    /// become new variables; otherwise they are an error.
    pub fn parse(&mut self, text: &str, grow: bool) -> Result<Poly> {
        let mut p = PolyParser { src: text.as_bytes(), pos: 0, names: self, grow };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("end of input"));
        }
        Ok(out)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a VarNames,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                first = false;
            }
            for &(v, e) in m.factors() {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names.name(v))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a mut VarNames,
    grow: bool,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            expected: vec![expected.to_string()],
        }
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        }
        let first = self.product()?;
        let mut acc = if neg { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = e.to_u32().ok_or_else(|| self.error("small exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_alphanumeric() || c == b'_' || c == b'[' || c == b']' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                let v = if self.grow {
                    self.names.intern(name)
                } else {
                    match self.names.index_of(name) {
                        Some(v) => v,
                        None => {
                            self.pos = start;
                            return Err(self.error("declared variable"));
                        }
                    }
                };
                Ok(Poly::var(v))
            }
            _ => Err(self.error("integer, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> (Poly, VarNames) {
        let mut n = VarNames::default();
        let p = n.parse(s, true).unwrap();
        (p, n)
    }

    #[test]
    fn binomial_square() {
        let (p, n) = parse("(x+y)^2");
        assert_eq!(p.display(&n).to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn cancellation_gives_zero() {
        let (p, _) = parse("(x+1)*(x-1) - x^2 + 1");
        assert!(p.is_zero());
    }

    #[test]
    fn exact_division() {
        let (p, _) = parse("4*x + 6");
        assert_eq!(p.div_exact(&BigInt::from(2)), Some(parse("2*x+3").0));
        assert_eq!(p.div_exact(&BigInt::from(4)), None);
    }

    #[test]
    fn substitution() {
        let (p, _) = parse("x*y + x");
        let img = vec![Poly::var(1) + Poly::one(), Poly::constant(3)];
        // (y+1)*3 + (y+1)
        assert_eq!(p.substitute(&img), Poly::var(1).scale(&4.into()) + Poly::constant(4));
    }

    #[test]
    fn unknown_variable_rejected_without_grow() {
        let mut n = VarNames::new(["a"]);
        assert!(n.parse("a + b", false).is_err());
        assert!(n.parse("a^3 - 2", false).is_ok());
    }

    #[test]
    fn simple_predicate() {
        assert!(parse("x*y + z").0.is_simple());
        assert!(!parse("x^2").0.is_simple());
        assert!(!parse("2*x").0.is_simple());
    }
}
