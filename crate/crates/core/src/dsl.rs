//! The textual input language.
//!
//! ```text
//! group    := "C(" n ")" | "S(" n ")" | "D(" n ")" | "V4" | "perm[" perm ("," perm)* "]"
//! perm     := cycle+          cycle := "(" int* ")"
//! subgroup := "<" [int ("," int)*] ">"
//! gset     := gprod ("+" gprod)*      gprod := gatom ("*" gatom)*
//! gatom    := group "/" (subgroup | label) | "(" gset ")"
//! map      := ident | gset "->" gset [":" "[" [int ("," int)*] "]"]
//! bispan   := bprim (";" bprim)*
//! bprim    := ("R" | "T" | "N") "(" map ")" | "B(" map "," map "," map ")"
//!           | "<" bispan "," bispan ">" | "(" bispan ")"
//! word     := wprod ("+" wprod)*      wprod := watom ("*" watom)*
//! watom    := "0" | "1" | ident | "(" word ")"
//! burnside := ["-"] bterm (("+" | "-") bterm)*
//! bterm    := int ["*" bclass] | bclass
//! bclass   := "[" ("G/" label | subgroup) "]"
//! tuple    := "(" poly ("," poly)* ")"
//! ```
//!
//! Whitespace is insignificant. `phi ; psi` means `phi` first. A map
//! without a table is the least equivariant map by table, which for a
//! transitive target is the canonical projection or fold.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::bispan::{compose, gen_n, gen_r, gen_t, pair, Bispan};
use crate::burnside::BurnsideElement;
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::gset::{gmaps_with, GMap, GSet};
use crate::poly::{Poly, VarNames};
use crate::words::Word;

/// Largest group order accepted from permutation generators.
pub const PERM_GROUP_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

const SYMBOLS: [&str; 16] = ["->", "(", ")", "[", "]", "<", ">", ",", ";", "+", "-", "*", "/", ":", "^", "="];

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().map_err(|_| parse_error(line, col, &["a smaller integer"]))?;
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            i += s.len();
            Tok::Sym(s)
        } else {
            return Err(parse_error(line, col, &["a token"]));
        };
        out.push(Token { tok, span: Span { line, column: col, start, end: i } });
        col += i - start;
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, column: col, start: i, end: i } });
    Ok(out)
}

fn parse_error(line: usize, column: usize, expected: &[&str]) -> Error {
    Error::Parse { line, column, expected: expected.iter().map(|s| s.to_string()).collect() }
}

// ---------------------------------------------------------------------------
// Syntax tree

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Klein,
    /// Generators as products of cycles.
    Perm(Vec<Vec<Vec<u32>>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupExpr {
    pub kind: GroupKind,
    pub span: Span,
}

/// A subgroup given by generator element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupExpr {
    pub generators: Vec<u32>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GSetExpr {
    Coset { group: GroupExpr, subgroup: SubgroupExpr, span: Span },
    /// `G/label`, the orbit type of a conjugacy class of subgroups.
    Orbit { group: GroupExpr, label: String, span: Span },
    Sum(Box<GSetExpr>, Box<GSetExpr>, Span),
    Product(Box<GSetExpr>, Box<GSetExpr>, Span),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapExpr {
    Name(String, Span),
    Literal { source: GSetExpr, target: GSetExpr, table: Option<Vec<u32>>, span: Span },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BispanExpr {
    Restriction(MapExpr, Span),
    Transfer(MapExpr, Span),
    Norm(MapExpr, Span),
    /// `X ←p A →q B →r Y`.
    Full { p: MapExpr, q: MapExpr, r: MapExpr, span: Span },
    /// First the left operand, then the right.
    Then(Box<BispanExpr>, Box<BispanExpr>, Span),
    Pair(Box<BispanExpr>, Box<BispanExpr>, Span),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    Zero(Span),
    One(Span),
    Var(String, Span),
    Sum(Box<WordExpr>, Box<WordExpr>, Span),
    Product(Box<WordExpr>, Box<WordExpr>, Span),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassRef {
    /// `[G/G]`, written as a bare integer coefficient.
    Top,
    Label(String),
    Subgroup(SubgroupExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideTerm {
    pub coeff: BigInt,
    pub class: ClassRef,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideExpr {
    pub terms: Vec<BurnsideTerm>,
    pub span: Span,
}

/// A parenthesized tuple of polynomial texts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleExpr {
    pub items: Vec<(String, Span)>,
    pub span: Span,
}

// ---------------------------------------------------------------------------
// Parser

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

fn join(a: Span, b: Span) -> Span {
    Span { line: a.line, column: a.column, start: a.start, end: b.end }
}

const GROUP_START: [&str; 5] = ["C(", "S(", "D(", "V4", "perm["];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        Ok(Parser { src, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek2(&self) -> &Token {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let s = self.peek().span;
        parse_error(s.line, s.column, expected)
    }

    fn at(&self, sym: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(s) if *s == sym)
    }

    fn eat(&mut self, sym: &str) -> Option<Span> {
        if self.at(sym) {
            Some(self.bump().span)
        } else {
            None
        }
    }

    fn expect(&mut self, sym: &str) -> Result<Span> {
        self.eat(sym).ok_or_else(|| self.error(&[sym]))
    }

    fn int(&mut self) -> Result<(u64, Span)> {
        match self.peek().tok {
            Tok::Int(n) => Ok((n, self.bump().span)),
            _ => Err(self.error(&["integer"])),
        }
    }

    fn small(&mut self) -> Result<(usize, Span)> {
        let (n, s) = self.int()?;
        Ok((n as usize, s))
    }

    fn end(&self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn ident_is(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == name)
    }

    fn at_group(&self) -> bool {
        match &self.peek().tok {
            Tok::Ident(s) => match s.as_str() {
                "C" | "S" | "D" => matches!(self.peek2().tok, Tok::Sym("(")),
                "perm" => matches!(self.peek2().tok, Tok::Sym("[")),
                "V4" => true,
                _ => false,
            },
            _ => false,
        }
    }

    fn group(&mut self) -> Result<GroupExpr> {
        if !self.at_group() {
            return Err(self.error(&GROUP_START));
        }
        let head = self.bump();
        let Tok::Ident(name) = head.tok else { unreachable!() };
        let kind = match name.as_str() {
            "V4" => return Ok(GroupExpr { kind: GroupKind::Klein, span: head.span }),
            "perm" => {
                self.expect("[")?;
                let mut gens = vec![self.perm()?];
                while self.eat(",").is_some() {
                    gens.push(self.perm()?);
                }
                let close = self.expect("]")?;
                return Ok(GroupExpr { kind: GroupKind::Perm(gens), span: join(head.span, close) });
            }
            _ => {
                self.expect("(")?;
                let (n, _) = self.small()?;
                match name.as_str() {
                    "C" => GroupKind::Cyclic(n),
                    "S" => GroupKind::Symmetric(n),
                    _ => GroupKind::Dihedral(n),
                }
            }
        };
        let close = self.expect(")")?;
        Ok(GroupExpr { kind, span: join(head.span, close) })
    }

    fn perm(&mut self) -> Result<Vec<Vec<u32>>> {
        let mut cycles = Vec::new();
        if !self.at("(") {
            return Err(self.error(&["("]));
        }
        while self.eat("(").is_some() {
            let mut cycle = Vec::new();
            while let Tok::Int(n) = self.peek().tok {
                self.bump();
                cycle.push(n as u32);
            }
            self.expect(")").map_err(|_| self.error(&["integer", ")"]))?;
            cycles.push(cycle);
        }
        Ok(cycles)
    }

    fn subgroup(&mut self) -> Result<SubgroupExpr> {
        let open = self.expect("<")?;
        let mut generators = Vec::new();
        if let Some(close) = self.eat(">") {
            return Ok(SubgroupExpr { generators, span: join(open, close) });
        }
        loop {
            let (n, _) = self.int().map_err(|_| self.error(&["integer", ">"]))?;
            generators.push(n as u32);
            if self.eat(",").is_none() {
                break;
            }
        }
        let close = self.expect(">").map_err(|_| self.error(&[",", ">"]))?;
        Ok(SubgroupExpr { generators, span: join(open, close) })
    }

    fn gset(&mut self) -> Result<GSetExpr> {
        let mut lhs = self.gprod()?;
        while self.eat("+").is_some() {
            let rhs = self.gprod()?;
            let span = join(lhs.span(), rhs.span());
            lhs = GSetExpr::Sum(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn gprod(&mut self) -> Result<GSetExpr> {
        let mut lhs = self.gatom()?;
        while self.eat("*").is_some() {
            let rhs = self.gatom()?;
            let span = join(lhs.span(), rhs.span());
            lhs = GSetExpr::Product(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn gatom(&mut self) -> Result<GSetExpr> {
        if self.eat("(").is_some() {
            let inner = self.gset()?;
            self.expect(")").map_err(|_| self.error(&["+", "*", ")"]))?;
            return Ok(inner);
        }
        if !self.at_group() {
            let mut exp = GROUP_START.to_vec();
            exp.push("(");
            return Err(self.error(&exp));
        }
        let group = self.group()?;
        self.expect("/")?;
        if matches!(self.peek().tok, Tok::Int(_)) {
            let (label, s) = self.class_label()?;
            return Ok(GSetExpr::Orbit { span: join(group.span, s), group, label });
        }
        let subgroup = self.subgroup().map_err(|_| self.error(&["<", "class label"]))?;
        let span = join(group.span, subgroup.span);
        Ok(GSetExpr::Coset { group, subgroup, span })
    }

    fn map(&mut self) -> Result<MapExpr> {
        if let Tok::Ident(name) = &self.peek().tok {
            if !self.at_group() {
                let name = name.clone();
                return Ok(MapExpr::Name(name, self.bump().span));
            }
        }
        if !self.at_group() && !self.at("(") {
            let mut exp = vec!["map name"];
            exp.extend(GROUP_START);
            exp.push("(");
            return Err(self.error(&exp));
        }
        let source = self.gset()?;
        self.expect("->").map_err(|_| self.error(&["+", "*", "->"]))?;
        let target = self.gset()?;
        let mut span = join(source.span(), target.span());
        let table = if self.eat(":").is_some() {
            self.expect("[")?;
            let mut t = Vec::new();
            if !self.at("]") {
                loop {
                    t.push(self.int()?.0 as u32);
                    if self.eat(",").is_none() {
                        break;
                    }
                }
            }
            span = join(span, self.expect("]").map_err(|_| self.error(&[",", "]"]))?);
            Some(t)
        } else {
            None
        };
        Ok(MapExpr::Literal { source, target, table, span })
    }

    fn bispan(&mut self) -> Result<BispanExpr> {
        let mut lhs = self.bprim()?;
        while self.eat(";").is_some() {
            let rhs = self.bprim()?;
            let span = join(lhs.span(), rhs.span());
            lhs = BispanExpr::Then(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn bprim(&mut self) -> Result<BispanExpr> {
        if let Some(open) = self.eat("<") {
            let a = self.bispan()?;
            self.expect(",").map_err(|_| self.error(&[";", ","]))?;
            let b = self.bispan()?;
            let close = self.expect(">").map_err(|_| self.error(&[";", ">"]))?;
            return Ok(BispanExpr::Pair(Box::new(a), Box::new(b), join(open, close)));
        }
        if self.eat("(").is_some() {
            let inner = self.bispan()?;
            self.expect(")").map_err(|_| self.error(&[";", ")"]))?;
            return Ok(inner);
        }
        let head = match &self.peek().tok {
            Tok::Ident(s) if ["R", "T", "N", "B"].contains(&s.as_str()) && self.peek2().tok == Tok::Sym("(") => s.clone(),
            _ => return Err(self.error(&["R(", "T(", "N(", "B(", "<", "("])),
        };
        let start = self.bump().span;
        self.expect("(")?;
        let m = self.map()?;
        if head == "B" {
            self.expect(",")?;
            let q = self.map()?;
            self.expect(",")?;
            let r = self.map()?;
            let close = self.expect(")")?;
            return Ok(BispanExpr::Full { p: m, q, r, span: join(start, close) });
        }
        let close = self.expect(")")?;
        let span = join(start, close);
        Ok(match head.as_str() {
            "R" => BispanExpr::Restriction(m, span),
            "T" => BispanExpr::Transfer(m, span),
            _ => BispanExpr::Norm(m, span),
        })
    }

    fn word(&mut self) -> Result<WordExpr> {
        let mut lhs = self.wprod()?;
        while self.eat("+").is_some() {
            let rhs = self.wprod()?;
            let span = join(lhs.span(), rhs.span());
            lhs = WordExpr::Sum(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn wprod(&mut self) -> Result<WordExpr> {
        let mut lhs = self.watom()?;
        while self.eat("*").is_some() {
            let rhs = self.watom()?;
            let span = join(lhs.span(), rhs.span());
            lhs = WordExpr::Product(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn watom(&mut self) -> Result<WordExpr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(0) => {
                self.bump();
                Ok(WordExpr::Zero(t.span))
            }
            Tok::Int(1) => {
                self.bump();
                Ok(WordExpr::One(t.span))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(WordExpr::Var(name, t.span))
            }
            Tok::Sym("(") => {
                self.bump();
                let inner = self.word()?;
                self.expect(")").map_err(|_| self.error(&["+", "*", ")"]))?;
                Ok(inner)
            }
            _ => Err(self.error(&["0", "1", "identifier", "("])),
        }
    }

    fn burnside(&mut self) -> Result<BurnsideExpr> {
        let start = self.peek().span;
        let mut terms = Vec::new();
        let mut negative = self.eat("-").is_some();
        loop {
            let mut term = self.bterm()?;
            if negative {
                term.coeff = -term.coeff;
            }
            terms.push(term);
            if self.eat("+").is_some() {
                negative = self.eat("-").is_some();
            } else if self.eat("-").is_some() {
                negative = true;
            } else {
                break;
            }
        }
        let span = join(start, terms.last().expect("one term").span);
        Ok(BurnsideExpr { terms, span })
    }

    fn bterm(&mut self) -> Result<BurnsideTerm> {
        if let Tok::Int(n) = self.peek().tok {
            let s = self.bump().span;
            if self.eat("*").is_some() {
                let (class, end) = self.bclass()?;
                return Ok(BurnsideTerm { coeff: BigInt::from(n), class, span: join(s, end) });
            }
            return Ok(BurnsideTerm { coeff: BigInt::from(n), class: ClassRef::Top, span: s });
        }
        if !self.at("[") {
            return Err(self.error(&["integer", "["]));
        }
        let (class, span) = self.bclass()?;
        Ok(BurnsideTerm { coeff: BigInt::from(1), class, span })
    }

    /// An order with an optional letter suffix written without a space, `2a`.
    fn class_label(&mut self) -> Result<(String, Span)> {
        let (n, mut s) = self.int().map_err(|_| self.error(&["class label"]))?;
        let mut label = n.to_string();
        if let Tok::Ident(suffix) = &self.peek().tok {
            if self.peek().span.start == s.end {
                label.push_str(suffix);
                s = join(s, self.bump().span);
            }
        }
        Ok((label, s))
    }

    fn bclass(&mut self) -> Result<(ClassRef, Span)> {
        let open = self.expect("[")?;
        let class = if self.at("<") {
            ClassRef::Subgroup(self.subgroup()?)
        } else if self.ident_is("G") {
            self.bump();
            self.expect("/")?;
            ClassRef::Label(self.class_label()?.0)
        } else {
            return Err(self.error(&["G/", "<"]));
        };
        let close = self.expect("]")?;
        Ok((class, join(open, close)))
    }

    fn tuple(&mut self) -> Result<TupleExpr> {
        let open = self.expect("(")?;
        let mut items = Vec::new();
        loop {
            let first = self.peek().span;
            let mut depth = 0usize;
            let mut last = None;
            loop {
                match &self.peek().tok {
                    Tok::Eof => return Err(self.error(&[",", ")"])),
                    Tok::Sym(",") | Tok::Sym(")") if depth == 0 => break,
                    Tok::Sym("(") => depth += 1,
                    Tok::Sym(")") => depth -= 1,
                    _ => {}
                }
                last = Some(self.bump().span);
            }
            let Some(last) = last else { return Err(self.error(&["polynomial"])) };
            items.push((self.src[first.start..last.end].to_string(), join(first, last)));
            if self.eat(",").is_none() {
                break;
            }
        }
        let close = self.expect(")")?;
        Ok(TupleExpr { items, span: join(open, close) })
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src)?;
    let out = f(&mut p)?;
    p.end()?;
    Ok(out)
}

pub fn parse_group(src: &str) -> Result<GroupExpr> {
    whole(src, |p| p.group())
}

pub fn parse_subgroup(src: &str) -> Result<SubgroupExpr> {
    whole(src, |p| p.subgroup())
}

pub fn parse_gset(src: &str) -> Result<GSetExpr> {
    whole(src, |p| p.gset())
}

pub fn parse_map(src: &str) -> Result<MapExpr> {
    whole(src, |p| p.map())
}

pub fn parse_bispan(src: &str) -> Result<BispanExpr> {
    whole(src, |p| p.bispan())
}

pub fn parse_word(src: &str) -> Result<WordExpr> {
    whole(src, |p| p.word())
}

pub fn parse_burnside(src: &str) -> Result<BurnsideExpr> {
    whole(src, |p| p.burnside())
}

pub fn parse_tuple(src: &str) -> Result<TupleExpr> {
    whole(src, |p| p.tuple())
}

// ---------------------------------------------------------------------------
// Spans

impl GSetExpr {
    pub fn span(&self) -> Span {
        match self {
            GSetExpr::Coset { span, .. } | GSetExpr::Orbit { span, .. } | GSetExpr::Sum(_, _, span) | GSetExpr::Product(_, _, span) => *span,
        }
    }
}

impl MapExpr {
    pub fn span(&self) -> Span {
        match self {
            MapExpr::Name(_, span) | MapExpr::Literal { span, .. } => *span,
        }
    }
}

impl BispanExpr {
    pub fn span(&self) -> Span {
        match self {
            BispanExpr::Restriction(_, s)
            | BispanExpr::Transfer(_, s)
            | BispanExpr::Norm(_, s)
            | BispanExpr::Full { span: s, .. }
            | BispanExpr::Then(_, _, s)
            | BispanExpr::Pair(_, _, s) => *s,
        }
    }
}

impl WordExpr {
    pub fn span(&self) -> Span {
        match self {
            WordExpr::Zero(s) | WordExpr::One(s) | WordExpr::Var(_, s) | WordExpr::Sum(_, _, s) | WordExpr::Product(_, _, s) => *s,
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(n) => write!(f, "C({n})"),
            GroupKind::Symmetric(n) => write!(f, "S({n})"),
            GroupKind::Dihedral(n) => write!(f, "D({n})"),
            GroupKind::Klein => write!(f, "V4"),
            GroupKind::Perm(gens) => {
                let gens: Vec<String> = gens
                    .iter()
                    .map(|cycles| {
                        cycles
                            .iter()
                            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
                            .collect()
                    })
                    .collect();
                write!(f, "perm[{}]", gens.join(", "))
            }
        }
    }
}

fn list(xs: &[u32]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SubgroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", list(&self.generators))
    }
}

impl fmt::Display for GSetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSetExpr::Coset { group, subgroup, .. } => write!(f, "{group}/{subgroup}"),
            GSetExpr::Orbit { group, label, .. } => write!(f, "{group}/{label}"),
            GSetExpr::Sum(a, b, _) => match **b {
                GSetExpr::Sum(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
            GSetExpr::Product(a, b, _) => {
                let paren = |e: &GSetExpr, right: bool| match e {
                    GSetExpr::Sum(..) => true,
                    GSetExpr::Product(..) => right,
                    _ => false,
                };
                let show = |e: &GSetExpr, right: bool| if paren(e, right) { format!("({e})") } else { e.to_string() };
                write!(f, "{} * {}", show(a, false), show(b, true))
            }
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Name(n, _) => write!(f, "{n}"),
            MapExpr::Literal { source, target, table: None, .. } => write!(f, "{source} -> {target}"),
            MapExpr::Literal { source, target, table: Some(t), .. } => write!(f, "{source} -> {target} : [{}]", list(t)),
        }
    }
}

impl fmt::Display for BispanExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BispanExpr::Restriction(m, _) => write!(f, "R({m})"),
            BispanExpr::Transfer(m, _) => write!(f, "T({m})"),
            BispanExpr::Norm(m, _) => write!(f, "N({m})"),
            BispanExpr::Full { p, q, r, .. } => write!(f, "B({p}, {q}, {r})"),
            BispanExpr::Then(a, b, _) => match **b {
                BispanExpr::Then(..) => write!(f, "{a} ; ({b})"),
                _ => write!(f, "{a} ; {b}"),
            },
            BispanExpr::Pair(a, b, _) => write!(f, "<{a}, {b}>"),
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Zero(_) => write!(f, "0"),
            WordExpr::One(_) => write!(f, "1"),
            WordExpr::Var(n, _) => write!(f, "{n}"),
            WordExpr::Sum(a, b, _) => match **b {
                WordExpr::Sum(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
            WordExpr::Product(a, b, _) => {
                let show = |e: &WordExpr, right: bool| match e {
                    WordExpr::Sum(..) => format!("({e})"),
                    WordExpr::Product(..) if right => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{} * {}", show(a, false), show(b, true))
            }
        }
    }
}

impl fmt::Display for BurnsideExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff < BigInt::from(0);
            let mag = if neg { -t.coeff.clone() } else { t.coeff.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let class = match &t.class {
                ClassRef::Top => {
                    write!(f, "{mag}")?;
                    continue;
                }
                ClassRef::Label(l) => format!("[G/{l}]"),
                ClassRef::Subgroup(s) => format!("[{s}]"),
            };
            if mag == BigInt::from(1) {
                write!(f, "{class}")?;
            } else {
                write!(f, "{mag}*{class}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for TupleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<&str> = self.items.iter().map(|(s, _)| s.as_str()).collect();
        write!(f, "({})", items.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Evaluation

fn cycles_to_images(cycles: &[Vec<u32>], n: usize) -> Vec<u32> {
    let mut img: Vec<u32> = (0..n as u32).collect();
    // cycles compose right to left, as products of permutations
    for c in cycles.iter().rev() {
        if c.len() < 2 {
            continue;
        }
        let mut step: Vec<u32> = (0..n as u32).collect();
        for (i, &x) in c.iter().enumerate() {
            step[x as usize] = c[(i + 1) % c.len()];
        }
        img = img.iter().map(|&x| step[x as usize]).collect();
    }
    img
}

pub fn eval_group(e: &GroupExpr) -> Result<Arc<Group>> {
    let positive = |n: usize| {
        if n == 0 {
            Err(Error::InvalidGroup(format!("{e} needs a positive parameter")))
        } else {
            Ok(n)
        }
    };
    match &e.kind {
        GroupKind::Cyclic(n) if *n <= PERM_GROUP_LIMIT => Ok(Group::cyclic(positive(*n)?)),
        GroupKind::Dihedral(n) if 2 * *n <= PERM_GROUP_LIMIT => Ok(Group::dihedral(positive(*n)?)),
        GroupKind::Cyclic(n) => Err(Error::GroupTooLarge { order: *n, limit: PERM_GROUP_LIMIT }),
        GroupKind::Dihedral(n) => Err(Error::GroupTooLarge { order: 2 * *n, limit: PERM_GROUP_LIMIT }),
        GroupKind::Symmetric(n) => Group::symmetric(positive(*n)?),
        GroupKind::Klein => Ok(Group::klein_four()),
        GroupKind::Perm(gens) => {
            let n = gens.iter().flatten().flatten().map(|&x| x as usize + 1).max().unwrap_or(1);
            for cycles in gens {
                for c in cycles {
                    let mut seen = c.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    if seen.len() != c.len() {
                        return Err(Error::NotPermutation(n));
                    }
                }
            }
            let images: Vec<Vec<u32>> = gens.iter().map(|g| cycles_to_images(g, n)).collect();
            Group::from_permutations(&images, n, PERM_GROUP_LIMIT)
        }
    }
}

/// Evaluates G-set expressions, sharing one group value per expression.
#[derive(Default)]
pub struct Env {
    groups: Vec<Arc<Group>>,
    pub maps: HashMap<String, MapExpr>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a group so that equal groups share one value.
    pub fn group(&mut self, e: &GroupExpr) -> Result<Arc<Group>> {
        let g = eval_group(e)?;
        if let Some(h) = self.groups.iter().find(|h| ***h == *g) {
            return Ok(h.clone());
        }
        self.groups.push(g.clone());
        Ok(g)
    }

    pub fn gset(&mut self, e: &GSetExpr) -> Result<GSet> {
        match e {
            GSetExpr::Coset { group, subgroup, .. } => {
                let g = self.group(group)?;
                let gens: Vec<Elem> = subgroup.generators.clone();
                if let Some(&bad) = gens.iter().find(|&&x| x as usize >= g.order()) {
                    return Err(Error::NotSubgroup(format!("element {bad} is not in {}", g.name())));
                }
                let h = g.generated(&gens)?;
                Ok(GSet::coset_space(&g, &h))
            }
            GSetExpr::Orbit { group, label, .. } => {
                let g = self.group(group)?;
                let o = g.poset();
                let c = o
                    .index_of_label(label)
                    .ok_or_else(|| Error::Usage(format!("no class labelled {label} in {}", g.name())))?;
                Ok(GSet::coset_space(&g, o.representative(c)))
            }
            GSetExpr::Sum(a, b, _) => {
                let (a, b) = (self.gset(a)?, self.gset(b)?);
                if *a.group() != *b.group() {
                    return Err(Error::GroupMismatch);
                }
                Ok(GSet::disjoint_union(&a.group().clone(), &[a, b]))
            }
            GSetExpr::Product(a, b, _) => self.gset(a)?.product(&self.gset(b)?),
        }
    }

    pub fn map(&mut self, e: &MapExpr) -> Result<GMap> {
        match e {
            MapExpr::Name(name, _) => {
                let def = self.maps.get(name).cloned().ok_or_else(|| Error::Usage(format!("undefined map '{name}'")))?;
                if matches!(def, MapExpr::Name(..)) {
                    return Err(Error::Usage(format!("map '{name}' is defined as another name")));
                }
                self.map(&def)
            }
            MapExpr::Literal { source, target, table, .. } => {
                let (x, y) = (self.gset(source)?, self.gset(target)?);
                if *x.group() != *y.group() {
                    return Err(Error::GroupMismatch);
                }
                match table {
                    Some(t) => {
                        if t.len() != x.size() || t.iter().any(|&p| p as usize >= y.size()) {
                            return Err(Error::ObjectMismatch(format!(
                                "table needs {} entries below {}",
                                x.size(),
                                y.size()
                            )));
                        }
                        GMap::new(x, y, t.clone())
                    }
                    None => least_map(&x, &y),
                }
            }
        }
    }

    pub fn bispan(&mut self, e: &BispanExpr) -> Result<Bispan> {
        match e {
            BispanExpr::Restriction(m, _) => Ok(gen_r(&self.map(m)?)),
            BispanExpr::Transfer(m, _) => Ok(gen_t(&self.map(m)?)),
            BispanExpr::Norm(m, _) => Ok(gen_n(&self.map(m)?)),
            BispanExpr::Full { p, q, r, .. } => Bispan::new(self.map(p)?, self.map(q)?, self.map(r)?),
            BispanExpr::Then(a, b, _) => {
                let (a, b) = (self.bispan(a)?, self.bispan(b)?);
                compose(&b, &a)
            }
            BispanExpr::Pair(a, b, _) => pair(&self.bispan(a)?, &self.bispan(b)?),
        }
    }
}

/// The least equivariant map by table.
fn least_map(x: &GSet, y: &GSet) -> Result<GMap> {
    let mut best: Option<GMap> = None;
    for m in gmaps_with(x, y, |_, _| true) {
        if best.as_ref().is_none_or(|b| m.table() < b.table()) {
            best = Some(m);
        }
    }
    best.ok_or_else(|| Error::ObjectMismatch("no equivariant map between these G-sets".into()))
}

pub fn eval_word(e: &WordExpr, names: &mut VarNames) -> Word {
    match e {
        WordExpr::Zero(_) => Word::Zero,
        WordExpr::One(_) => Word::One,
        WordExpr::Var(n, _) => Word::Var(names.intern(n)),
        WordExpr::Sum(a, b, _) => Word::sum(eval_word(a, names), eval_word(b, names)),
        WordExpr::Product(a, b, _) => Word::prod(eval_word(a, names), eval_word(b, names)),
    }
}

pub fn eval_burnside(group: &Arc<Group>, e: &BurnsideExpr) -> Result<BurnsideElement> {
    let o = group.poset();
    let mut coeffs = vec![Poly::zero(); o.len()];
    for t in &e.terms {
        let class = match &t.class {
            ClassRef::Top => o.top(),
            ClassRef::Label(l) => o
                .index_of_label(l)
                .ok_or_else(|| Error::Usage(format!("no class labelled {l} in {}", group.name())))?,
            ClassRef::Subgroup(s) => {
                if let Some(&bad) = s.generators.iter().find(|&&x| x as usize >= group.order()) {
                    return Err(Error::NotSubgroup(format!("element {bad} is not in {}", group.name())));
                }
                o.class_of(&group.generated(&s.generators)?)
            }
        };
        coeffs[class] = &coeffs[class] + &Poly::constant(t.coeff.clone());
    }
    BurnsideElement::new(group, coeffs)
}

/// Parses each tuple entry as a polynomial. With `grow` unset, unknown
/// names are errors; columns in errors refer to the whole tuple text.
pub fn eval_tuple(e: &TupleExpr, names: &mut VarNames, grow: bool) -> Result<Vec<Poly>> {
    e.items
        .iter()
        .map(|(text, span)| {
            names.parse(text, grow).map_err(|err| match err {
                Error::Parse { column, expected, .. } => Error::Parse { line: span.line, column: span.column + column - 1, expected },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_c2_set() {
        let e = parse_gset("C(2)/<>").unwrap();
        let x = Env::new().gset(&e).unwrap();
        assert_eq!(x.size(), 2);
        assert_eq!(x.orbit_decompose(), vec![0]);
    }

    #[test]
    fn composition_structure() {
        let e = parse_bispan("T(f) ; N(g)").unwrap();
        match e {
            BispanExpr::Then(a, b, _) => {
                assert!(matches!(*a, BispanExpr::Transfer(MapExpr::Name(ref n, _), _) if n == "f"));
                assert!(matches!(*b, BispanExpr::Norm(MapExpr::Name(ref n, _), _) if n == "g"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unclosed_paren() {
        let err = parse_group("C(2/").unwrap_err();
        assert_eq!(err, Error::Parse { line: 1, column: 4, expected: vec![")".into()] });
    }

    #[test]
    fn round_trips() {
        for s in [
            "C(2)/<>",
            "S(3)/<1> + S(3)/<3> * S(3)/<>",
            "(C(2)/<> + C(2)/<1>) * C(2)/<>",
            "C(2)/<> + (C(2)/<> + C(2)/<>)",
            "perm[(0 1 2), (0 1)]/<1, 2>",
            "D(4)/2b + S(3)/1",
        ] {
            assert_eq!(parse_gset(s).unwrap().to_string(), s);
        }
        for s in ["T(f) ; N(g)", "<R(f), T(g)> ; N(h)", "R(f) ; (T(g) ; N(h))", "T(C(2)/<> -> C(2)/<1> : [0, 0])"] {
            assert_eq!(parse_bispan(s).unwrap().to_string(), s);
        }
        for s in ["x + y * z", "(x + y) * z", "x + (y + z)", "x * (y * 1) + 0"] {
            assert_eq!(parse_word(s).unwrap().to_string(), s);
        }
        for s in ["[G/1] + 2*[G/2]", "-[<>] - 3*[G/2a] + 4"] {
            assert_eq!(parse_burnside(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn perm_group() {
        let g = eval_group(&parse_group("perm[(0 1 2), (0 1)]").unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.poset().len(), 4);
    }

    #[test]
    fn default_maps() {
        let mut env = Env::new();
        let fold = env.map(&parse_map("C(2)/<> + C(2)/<> -> C(2)/<>").unwrap()).unwrap();
        assert_eq!(fold.table(), &[0, 1, 0, 1]);
        let proj = env.map(&parse_map("C(2)/<> -> C(2)/<1>").unwrap()).unwrap();
        assert_eq!(proj.table(), &[0, 0]);
        assert!(env.map(&parse_map("C(2)/<1> -> C(2)/<>").unwrap()).is_err());
    }

    #[test]
    fn tuple_items() {
        let t = parse_tuple("(a0*b0, a0^2 + 1, (x+1)*y)").unwrap();
        assert_eq!(t.items.len(), 3);
        let mut names = VarNames::default();
        let polys = eval_tuple(&t, &mut names, true).unwrap();
        assert_eq!(polys[1], names.parse("a0^2+1", false).unwrap());
        let err = eval_tuple(&parse_tuple("(1, 2 +)").unwrap(), &mut names, true).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 8, .. }), "{err:?}");
    }

    #[test]
    fn burnside_literal() {
        let g = Group::cyclic(2);
        let b = eval_burnside(&g, &parse_burnside("[<>] + 2*[G/2]").unwrap()).unwrap();
        assert_eq!(b.as_ints().unwrap(), vec![1, 2]);
        let b = eval_burnside(&g, &parse_burnside("-[G/1] + 1").unwrap()).unwrap();
        assert_eq!(b.as_ints().unwrap(), vec![-1, 1]);
    }

    #[test]
    fn located_errors() {
        assert!(matches!(parse_gset("C(2)/<> +").unwrap_err(), Error::Parse { column: 10, .. }));
        assert!(matches!(parse_word("x + * y").unwrap_err(), Error::Parse { column: 5, .. }));
        assert!(matches!(parse_bispan("Q(f)").unwrap_err(), Error::Parse { column: 1, .. }));
        assert!(matches!(parse_group("C(2) x").unwrap_err(), Error::Parse { column: 6, .. }));
    }
}
