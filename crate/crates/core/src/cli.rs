//! Command-line front end. [`run`] takes the argument vector and standard
//! input and returns the exit status with both output streams, so the binary
//! and the tests share one code path.
//!
//! Exit status: 0 success, 1 a verification found a counterexample, 2 usage
//! or parse error, 3 an inexact division (integrality failure).

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::BufRead;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::bispan::{bispan_equivalent, canonical_factorization, fiber_polynomials, is_simple, recompose, Bispan};
use crate::burnside::{burnside_mul, marks, table_of_marks, unmarks, BurnsideElement};
use crate::dsl::{self, Env};
use crate::error::Error;
use crate::group::Group;
use crate::gset::{GMap, GSet};
use crate::poly::{Poly, VarNames};
use crate::report::{Report, Status};
use crate::tamcheck::{check_tambara_axioms, describe_gset, EffectiveBurnside, InvariantRing, NormAsTransfer};
use crate::witt::{
    ghost, teichmuller_tau, teichmuller_tau_scaled, unghost, verify_dress_siebeneicher_iso, verify_ghost_factorization,
    verify_ring_axioms, witt_add, witt_mul, witt_neg, GhostVector, WittVector,
};
use crate::words::{coherence_iso, eval, supp, Element, SetAssignment, Word};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "tambara", version, about = "Exact computations with finite G-sets, Burnside rings, Witt vectors and Tambara functors")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Seed for randomized verifications.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Names a map for use in bispan expressions, as NAME=MAP.
    #[arg(long = "def", value_name = "NAME=MAP", global = true)]
    pub defs: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Conjugacy classes of subgroups and their inclusions.
    Lattice { group: String },
    /// Table of marks.
    Tom { group: String },
    /// Marks of a Burnside ring element such as "[G/1] + 2*[G/2]".
    Marks { group: String, element: String },
    /// Burnside ring element with the given marks, listed from [e] up.
    Unmarks { group: String, marks: String },
    /// Burnside ring arithmetic.
    Burnside {
        #[command(subcommand)]
        op: BurnsideCmd,
    },
    /// Orbit decomposition and marks of a G-set.
    Orbits { gset: String },
    /// G-typical Witt vectors. Tuples list components from [G] down to [e].
    Witt {
        /// Allow polynomial components.
        #[arg(long, global = true)]
        symbolic: bool,
        #[command(subcommand)]
        op: WittCmd,
    },
    /// Composite of a bispan expression, e.g. "T(f) ; N(g)".
    Compose { bispan: String },
    /// Fiber polynomials of a bispan and whether they are simple.
    Simple { bispan: String },
    /// Factorization of a bispan as T_r ∘ N_q ∘ R_p.
    Factor { bispan: String },
    /// Words in the free {+,*}-algebra.
    Words {
        #[command(subcommand)]
        op: WordsCmd,
    },
    /// Axiom checks.
    Check {
        #[command(subcommand)]
        op: CheckCmd,
    },
    /// Runs commands read from standard input, one per line.
    Batch,
}

#[derive(Subcommand, Debug)]
pub enum BurnsideCmd {
    /// Product of two elements.
    Mul { group: String, a: String, b: String },
}

#[derive(Subcommand, Debug)]
pub enum WittCmd {
    Ghost { group: String, vector: String },
    /// Witt vector with the given ghost components.
    Unghost { group: String, ghost: String },
    Add { group: String, a: String, b: String },
    Mul { group: String, a: String, b: String },
    Neg { group: String, a: String },
    /// Teichmüller map into the Burnside ring.
    Tau { group: String, vector: String },
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        group: String,
        /// Number of seeded random samples.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Factorization,
    Iso,
    RingAxioms,
}

#[derive(Subcommand, Debug)]
pub enum WordsCmd {
    /// Support polynomial.
    Supp { word: String },
    /// Evaluation on finite sets.
    Eval {
        word: String,
        #[command(flatten)]
        sets: SetArgs,
    },
    /// Canonical bijection between evaluations of two words.
    Coherence {
        from: String,
        to: String,
        #[command(flatten)]
        sets: SetArgs,
    },
}

#[derive(clap::Args, Debug)]
pub struct SetArgs {
    /// Assigns labelled elements, as VAR=a,b,c.
    #[arg(long = "set", value_name = "VAR=LABELS")]
    pub sets: Vec<String>,
    /// Assigns a set of the given size, as VAR=N.
    #[arg(long = "size", value_name = "VAR=N")]
    pub sizes: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Checks the Tambara functor relations on every G-set up to the budget.
    Tambara {
        #[arg(long, value_enum)]
        instance: Instance,
        #[arg(long)]
        group: String,
        /// Largest G-set enumerated.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        /// Random values per relation instance.
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    Invariant,
    Burnside,
    InvariantMutated,
    BurnsideMutated,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Integrality { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type Res<T> = std::result::Result<T, Failure>;

/// Parses `text` with `f`, pointing at the offending column on failure.
fn parsed<T>(text: &str, f: fn(&str) -> crate::Result<T>) -> Res<T> {
    f(text).map_err(|e| {
        let mut fail = Failure::from(e.clone());
        if let Error::Parse { line: 1, column, .. } = e {
            fail.message = format!("{}\n  {text}\n  {}^", fail.message, " ".repeat(column - 1));
        }
        fail
    })
}

/// A command result: a JSON document and its table rendering.
struct Out {
    json: Value,
    table: String,
    code: i32,
}

impl Out {
    fn new(command: &str, mut fields: Map<String, Value>, table: String) -> Self {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("command".into(), json!(command));
        obj.append(&mut fields);
        Out { json: Value::Object(obj), table, code: 0 }
    }
}

fn fields(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("fields come from object literals"),
    }
}

fn num(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => json!(i),
        None => json!(b.to_string()),
    }
}

fn poly_num(p: &Poly, names: &VarNames) -> Value {
    match p.as_constant() {
        Some(c) => num(&c),
        None if p.is_zero() => json!(0),
        None => json!(p.display(names).to_string()),
    }
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.push_str(&" ".repeat(widths[c] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Runs one command line. `args[0]` is the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    RunOutput { code: 0, stdout: text, stderr: String::new() }
                }
                _ => RunOutput { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    if let Command::Batch = cli.command {
        return batch(stdin);
    }
    match dispatch(&cli) {
        Ok(out) => {
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                Format::Table => out.table,
            };
            RunOutput { code: out.code, stdout, stderr: String::new() }
        }
        Err(f) => RunOutput { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn batch(stdin: &mut dyn BufRead) -> RunOutput {
    let mut total = RunOutput::default();
    for (i, line) in stdin.lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                total.stderr.push_str(&format!("error: reading standard input: {e}\n"));
                total.code = total.code.max(2);
                break;
            }
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(words) = shlex::split(trimmed) else {
            total.stderr.push_str(&format!("error: line {}: unbalanced quotes\n", i + 1));
            total.code = total.code.max(2);
            continue;
        };
        if words.first().map(String::as_str) == Some("batch") {
            total.stderr.push_str(&format!("error: line {}: batch cannot be nested\n", i + 1));
            total.code = total.code.max(2);
            continue;
        }
        let argv = std::iter::once("tambara".to_string()).chain(words);
        let out = run(argv, &mut std::io::empty());
        total.stdout.push_str(&out.stdout);
        total.stderr.push_str(&out.stderr);
        total.code = total.code.max(out.code);
    }
    total
}

fn env(cli: &Cli) -> Res<Env> {
    let mut env = Env::new();
    for d in &cli.defs {
        let (name, text) = d.split_once('=').ok_or_else(|| usage(format!("--def expects NAME=MAP, got '{d}'")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(usage(format!("invalid map name '{name}'")));
        }
        env.maps.insert(name.to_string(), parsed(text, dsl::parse_map)?);
    }
    Ok(env)
}

fn group_arg(env: &mut Env, text: &str) -> Res<Arc<Group>> {
    let e = parsed(text, dsl::parse_group)?;
    Ok(env.group(&e)?)
}

fn dispatch(cli: &Cli) -> Res<Out> {
    let mut env = env(cli)?;
    match &cli.command {
        Command::Lattice { group } => lattice(&group_arg(&mut env, group)?),
        Command::Tom { group } => tom(&group_arg(&mut env, group)?),
        Command::Marks { group, element } => {
            let g = group_arg(&mut env, group)?;
            let b = dsl::eval_burnside(&g, &parsed(element, dsl::parse_burnside)?)?;
            Ok(marks_out(&b))
        }
        Command::Unmarks { group, marks } => {
            let g = group_arg(&mut env, group)?;
            let v = int_tuple(marks, g.poset().len())?;
            let b = unmarks(&g, &v)?;
            Ok(burnside_out("unmarks", &b))
        }
        Command::Burnside { op: BurnsideCmd::Mul { group, a, b } } => {
            let g = group_arg(&mut env, group)?;
            let a = dsl::eval_burnside(&g, &parsed(a, dsl::parse_burnside)?)?;
            let b = dsl::eval_burnside(&g, &parsed(b, dsl::parse_burnside)?)?;
            Ok(burnside_out("burnside mul", &burnside_mul(&a, &b)?))
        }
        Command::Orbits { gset } => {
            let x = env.gset(&parsed(gset, dsl::parse_gset)?)?;
            orbits(&x)
        }
        Command::Witt { symbolic, op } => witt(&mut env, *symbolic, op, cli.seed),
        Command::Compose { bispan } => {
            let phi = env.bispan(&parsed(bispan, dsl::parse_bispan)?)?;
            Ok(bispan_out("compose", &phi))
        }
        Command::Simple { bispan } => {
            let phi = env.bispan(&parsed(bispan, dsl::parse_bispan)?)?;
            Ok(simple(&phi))
        }
        Command::Factor { bispan } => {
            let phi = env.bispan(&parsed(bispan, dsl::parse_bispan)?)?;
            factor(&phi)
        }
        Command::Words { op } => words(op),
        Command::Check { op: CheckCmd::Tambara { instance, group, budget, samples } } => {
            let g = group_arg(&mut env, group)?;
            Ok(tambara(&g, *instance, *budget, *samples, cli.seed))
        }
        Command::Batch => unreachable!("handled in run"),
    }
}

fn int_tuple(text: &str, len: usize) -> Res<Vec<Poly>> {
    let t = parsed(text, dsl::parse_tuple)?;
    let mut names = VarNames::default();
    let v = dsl::eval_tuple(&t, &mut names, true)?;
    if v.len() != len {
        return Err(usage(format!("expected {len} entries, got {}", v.len())));
    }
    if v.iter().any(|p| p.as_constant().is_none() && !p.is_zero()) {
        return Err(usage("entries must be integers"));
    }
    Ok(v)
}

fn lattice(g: &Arc<Group>) -> Res<Out> {
    let o = g.poset();
    let n = o.len();
    let covers = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| j != i && o.leq(j, i) && !(0..n).any(|k| k != i && k != j && o.leq(j, k) && o.leq(k, i)))
            .collect()
    };
    let elems: Vec<String> = g.elements().map(|e| format!("{e}={}", g.label(e))).collect();
    let mut rows = vec![vec!["label".into(), "order".into(), "conjugates".into(), "representative".into(), "covers".into()]];
    let mut classes = Vec::new();
    for i in 0..n {
        let c = o.class(i);
        let rep: Vec<String> = c.representative.elements().iter().map(|e| e.to_string()).collect();
        let cov: Vec<&str> = covers(i).into_iter().map(|j| o.label(j)).collect();
        rows.push(vec![
            o.label(i).into(),
            c.order().to_string(),
            c.members.len().to_string(),
            format!("{{{}}}", rep.join(", ")),
            if cov.is_empty() { "-".into() } else { cov.join(", ") },
        ]);
        classes.push(json!({
            "label": o.label(i),
            "order": c.order(),
            "conjugates": c.members.len(),
            "representative": c.representative.elements(),
            "covers": cov,
        }));
    }
    let text = format!(
        "group {}, order {}, {} classes of subgroups\nelements: {}\n{}",
        g.name(),
        g.order(),
        n,
        elems.join(" "),
        table(&rows)
    );
    let labels: Vec<&str> = g.labels().iter().map(String::as_str).collect();
    Ok(Out::new(
        "lattice",
        fields(json!({"group": g.name(), "order": g.order(), "elements": labels, "classes": classes})),
        text,
    ))
}

fn tom(g: &Arc<Group>) -> Res<Out> {
    let o = g.poset();
    let t = table_of_marks(g);
    let labels: Vec<&str> = (0..o.len()).map(|i| o.label(i)).collect();
    let mut rows = vec![std::iter::once(String::new()).chain(labels.iter().map(|l| l.to_string())).collect::<Vec<_>>()];
    for (k, row) in t.iter().enumerate() {
        rows.push(std::iter::once(format!("G/{}", o.label(k))).chain(row.iter().map(|m| m.to_string())).collect());
    }
    Ok(Out::new("tom", fields(json!({"group": g.name(), "classes": labels, "rows": t})), table(&rows)))
}

fn labelled(g: &Group, values: &[Value], top_first: bool) -> Map<String, Value> {
    let o = g.poset();
    let mut idx: Vec<usize> = (0..o.len()).collect();
    if top_first {
        idx.reverse();
    }
    idx.into_iter().map(|i| (o.label(i).to_string(), values[i].clone())).collect()
}

fn marks_out(b: &BurnsideElement) -> Out {
    let g = b.group();
    let o = g.poset();
    let names = VarNames::default();
    let m = marks(b);
    let vals: Vec<Value> = m.iter().map(|p| poly_num(p, &names)).collect();
    let rows = vec![
        (0..o.len()).map(|i| o.label(i).to_string()).collect(),
        m.iter().map(|p| p.display(&names).to_string()).collect::<Vec<_>>(),
    ];
    Out::new(
        "marks",
        fields(json!({"group": g.name(), "element": b.display(&names).to_string(), "marks": labelled(g, &vals, false)})),
        table(&rows),
    )
}

fn burnside_out(command: &str, b: &BurnsideElement) -> Out {
    let names = VarNames::default();
    let g = b.group();
    let vals: Vec<Value> = b.coeffs().iter().map(|p| poly_num(p, &names)).collect();
    let text = b.display(&names).to_string();
    Out::new(
        command,
        fields(json!({"group": g.name(), "element": text, "coefficients": labelled(g, &vals, false)})),
        text + "\n",
    )
}

fn orbits(x: &GSet) -> Res<Out> {
    let g = x.group();
    let o = g.poset();
    let mut rows = vec![vec!["class".to_string(), "points".to_string()]];
    let mut list = Vec::new();
    for orbit in x.orbits() {
        let class = o.class_of(&x.stabilizer(orbit[0]));
        let pts: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
        rows.push(vec![format!("G/{}", o.label(class)), format!("{{{}}}", pts.join(", "))]);
        list.push(json!({"class": o.label(class), "points": orbit}));
    }
    let marks: Vec<Value> = x.marks().into_iter().map(|m| json!(m)).collect();
    let mark_text: Vec<String> = (0..o.len()).map(|i| format!("{}:{}", o.label(i), x.marks()[i])).collect();
    let decomposition = describe_gset(x);
    let text = format!(
        "{} points over {}\ndecomposition: {decomposition}\nmarks: {}\n{}",
        x.size(),
        g.name(),
        mark_text.join(" "),
        table(&rows)
    );
    Ok(Out::new(
        "orbits",
        fields(json!({
            "group": g.name(),
            "size": x.size(),
            "decomposition": decomposition,
            "orbits": list,
            "marks": labelled(g, &marks, false),
        })),
        text,
    ))
}

/// Tuples are written from `[G]` down to `[e]`; internally `[e]` comes first.
fn witt_tuple(g: &Arc<Group>, text: &str, names: &mut VarNames, symbolic: bool) -> Res<Vec<Poly>> {
    let t = parsed(text, dsl::parse_tuple)?;
    let n = g.poset().len();
    if t.items.len() != n {
        return Err(usage(format!("{} has {n} classes of subgroups; the tuple has {} entries", g.name(), t.items.len())));
    }
    let mut v = dsl::eval_tuple(&t, names, true)?;
    if !symbolic && v.iter().any(|p| p.as_constant().is_none() && !p.is_zero()) {
        return Err(usage("polynomial components need --symbolic"));
    }
    v.reverse();
    Ok(v)
}

fn tuple_out(command: &str, g: &Arc<Group>, key: &str, comps: &[Poly], names: &VarNames) -> Out {
    let shown: Vec<String> = comps.iter().rev().map(|p| p.display(names).to_string()).collect();
    let vals: Vec<Value> = comps.iter().map(|p| poly_num(p, names)).collect();
    Out::new(command, fields(json!({"group": g.name(), key: labelled(g, &vals, true)})), format!("({})\n", shown.join(", ")))
}

fn report_out(command: &str, r: &Report) -> Out {
    let mut text = format!("{} {}", r.check, r.group);
    if let Some(s) = r.seed {
        let _ = write!(text, " seed={s} samples={}", r.samples);
    }
    text.push('\n');
    for o in &r.results {
        match (&o.status, &o.witness) {
            (Status::Pass, _) => {
                let _ = writeln!(text, "pass  {}", o.relation);
            }
            (Status::Fail, w) => {
                let _ = writeln!(text, "FAIL  {}: {}", o.relation, w.as_deref().unwrap_or(""));
            }
        }
    }
    let _ = writeln!(text, "{}", if r.passed() { "all passed" } else { "counterexample found" });
    let mut f = fields(serde_json::to_value(r).expect("serializable"));
    f.insert("passed".into(), json!(r.passed()));
    let mut out = Out::new(command, f, text);
    out.code = if r.passed() { 0 } else { 1 };
    out
}

fn witt(env: &mut Env, symbolic: bool, op: &WittCmd, seed: u64) -> Res<Out> {
    let mut names = VarNames::default();
    match op {
        WittCmd::Ghost { group, vector } => {
            let g = group_arg(env, group)?;
            let w = WittVector::new(&g, witt_tuple(&g, vector, &mut names, symbolic)?)?;
            Ok(tuple_out("witt ghost", &g, "ghost", ghost(&w).coords(), &names))
        }
        WittCmd::Unghost { group, ghost } => {
            let g = group_arg(env, group)?;
            let v = GhostVector::new(&g, witt_tuple(&g, ghost, &mut names, symbolic)?)?;
            let w = unghost(&v)?;
            Ok(tuple_out("witt unghost", &g, "components", w.components(), &names))
        }
        WittCmd::Add { group, a, b } | WittCmd::Mul { group, a, b } => {
            let g = group_arg(env, group)?;
            let a = WittVector::new(&g, witt_tuple(&g, a, &mut names, symbolic)?)?;
            let b = WittVector::new(&g, witt_tuple(&g, b, &mut names, symbolic)?)?;
            let (cmd, w) = match op {
                WittCmd::Add { .. } => ("witt add", witt_add(&a, &b)?),
                _ => ("witt mul", witt_mul(&a, &b)?),
            };
            Ok(tuple_out(cmd, &g, "components", w.components(), &names))
        }
        WittCmd::Neg { group, a } => {
            let g = group_arg(env, group)?;
            let a = WittVector::new(&g, witt_tuple(&g, a, &mut names, symbolic)?)?;
            Ok(tuple_out("witt neg", &g, "components", witt_neg(&a).components(), &names))
        }
        WittCmd::Tau { group, vector } => {
            let g = group_arg(env, group)?;
            let w = WittVector::new(&g, witt_tuple(&g, vector, &mut names, symbolic)?)?;
            if !symbolic {
                return Ok(burnside_out("witt tau", &teichmuller_tau(&w)?));
            }
            let s = teichmuller_tau_scaled(&w);
            let num_text = s.numerator.display(&names).to_string();
            let vals: Vec<Value> = s.numerator.coeffs().iter().map(|p| poly_num(p, &names)).collect();
            let text = if s.denominator == BigInt::from(1) { num_text.clone() } else { format!("1/{} * ({num_text})", s.denominator) };
            Ok(Out::new(
                "witt tau",
                fields(json!({
                    "group": g.name(),
                    "element": text,
                    "denominator": num(&s.denominator),
                    "numerator": labelled(&g, &vals, false),
                })),
                text + "\n",
            ))
        }
        WittCmd::Verify { what, group, samples } => {
            let g = group_arg(env, group)?;
            let r = match what {
                VerifyKind::Factorization => verify_ghost_factorization(&g, *samples, seed),
                VerifyKind::Iso => verify_dress_siebeneicher_iso(&g),
                VerifyKind::RingAxioms => verify_ring_axioms(&g, *samples, seed),
            };
            Ok(report_out("witt verify", &r))
        }
    }
}

fn map_text(f: &GMap) -> String {
    let t: Vec<String> = f.table().iter().map(|p| p.to_string()).collect();
    format!("[{}]", t.join(", "))
}

fn bispan_text(phi: &Bispan) -> String {
    let mut rows = Vec::new();
    for (name, x) in [("X", phi.x()), ("A", phi.a()), ("B", phi.b()), ("Y", phi.y())] {
        rows.push(vec![name.to_string(), format!("{} point{}", x.size(), if x.size() == 1 { "" } else { "s" }), describe_gset(x)]);
    }
    for (name, f) in [("p", phi.p()), ("q", phi.q()), ("r", phi.r())] {
        rows.push(vec![name.to_string(), "map".into(), map_text(f)]);
    }
    table(&rows)
}

fn fibers_json(phi: &Bispan, names: &VarNames) -> Vec<Value> {
    fiber_polynomials(phi).iter().map(|f| json!({"y": f.base, "polynomial": f.poly.display(names).to_string()})).collect()
}

fn fibers_text(phi: &Bispan, names: &VarNames) -> String {
    let rows: Vec<Vec<String>> =
        fiber_polynomials(phi).iter().map(|f| vec![format!("y{}", f.base), f.poly.display(names).to_string()]).collect();
    format!("fiber polynomials:\n{}", table(&rows))
}

fn bispan_out(command: &str, phi: &Bispan) -> Out {
    let names = VarNames::default();
    let text = format!("{}{}", bispan_text(phi), fibers_text(phi, &names));
    let bj = serde_json::to_value(phi.to_json()).expect("serializable");
    Out::new(command, fields(json!({"bispan": bj, "fibers": fibers_json(phi, &names)})), text)
}

fn simple(phi: &Bispan) -> Out {
    let names = VarNames::default();
    let s = is_simple(phi);
    let text = format!("{}simple: {s}\n", fibers_text(phi, &names));
    Out::new("simple", fields(json!({"simple": s, "fibers": fibers_json(phi, &names)})), text)
}

fn factor(phi: &Bispan) -> Res<Out> {
    let (p, q, r) = canonical_factorization(phi);
    let back = recompose(&p, &q, &r)?;
    let ok = bispan_equivalent(phi, &back)?;
    let mut rows = Vec::new();
    for (name, f) in [("R", &p), ("N", &q), ("T", &r)] {
        rows.push(vec![format!("{name}:"), describe_gset(f.source()), "->".into(), describe_gset(f.target()), map_text(f)]);
    }
    let text = format!("T_r . N_q . R_p\n{}recomposition equivalent: {ok}\n", table(&rows));
    let m = |f: &GMap| json!({"source": describe_gset(f.source()), "target": describe_gset(f.target()), "table": f.table()});
    let mut out = Out::new("factor", fields(json!({"p": m(&p), "q": m(&q), "r": m(&r), "equivalent": ok})), text);
    out.code = if ok { 0 } else { 1 };
    Ok(out)
}

fn assignment(args: &SetArgs, names: &VarNames) -> Res<SetAssignment> {
    let mut given: HashMap<String, Vec<String>> = HashMap::new();
    for s in &args.sets {
        let (v, labels) = s.split_once('=').ok_or_else(|| usage(format!("--set expects VAR=LABELS, got '{s}'")))?;
        let labels: Vec<String> = labels.split(',').map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
        given.insert(v.trim().to_string(), labels);
    }
    for s in &args.sizes {
        let (v, n) = s.split_once('=').ok_or_else(|| usage(format!("--size expects VAR=N, got '{s}'")))?;
        let n: usize = n.trim().parse().map_err(|_| usage(format!("--size expects a count, got '{n}'")))?;
        let v = v.trim().to_string();
        given.insert(v.clone(), (1..=n).map(|i| format!("{v}{i}")).collect());
    }
    let mut sets = Vec::new();
    for i in 0..names.len() as u32 {
        let name = names.name(i);
        sets.push(given.remove(&name).ok_or_else(|| usage(format!("no set given for variable {name}")))?);
    }
    if let Some(extra) = given.keys().min() {
        return Err(usage(format!("variable {extra} does not occur in the words")));
    }
    Ok(SetAssignment::new(sets)?)
}

fn element_text(e: &Element, a: &SetAssignment) -> String {
    match e {
        Element::Unit => "()".into(),
        Element::Leaf { var, index } => a.set(*var).map(|s| s[*index].clone()).unwrap_or_default(),
        Element::Left(x) => format!("inl({})", element_text(x, a)),
        Element::Right(x) => format!("inr({})", element_text(x, a)),
        Element::Pair(x, y) => format!("({}, {})", element_text(x, a), element_text(y, a)),
    }
}

fn word_arg(text: &str, names: &mut VarNames) -> Res<Word> {
    Ok(dsl::eval_word(&parsed(text, dsl::parse_word)?, names))
}

fn words(op: &WordsCmd) -> Res<Out> {
    let mut names = VarNames::default();
    match op {
        WordsCmd::Supp { word } => {
            let w = word_arg(word, &mut names)?;
            let s = supp(&w);
            let shown = w.display(&names).to_string();
            let text = format!("{}\nsimple: {}\n", s.display(&names), s.is_simple());
            Ok(Out::new(
                "words supp",
                fields(json!({"word": shown, "support": s.display(&names).to_string(), "simple": s.is_simple()})),
                text,
            ))
        }
        WordsCmd::Eval { word, sets } => {
            let w = word_arg(word, &mut names)?;
            let a = assignment(sets, &names)?;
            let elems: Vec<String> = eval(&w, &a)?.iter().map(|e| element_text(e, &a)).collect();
            let mut text = format!("{} elements\n", elems.len());
            for e in &elems {
                let _ = writeln!(text, "{e}");
            }
            Ok(Out::new("words eval", fields(json!({"word": w.display(&names).to_string(), "elements": elems})), text))
        }
        WordsCmd::Coherence { from, to, sets } => {
            let w1 = word_arg(from, &mut names)?;
            let w2 = word_arg(to, &mut names)?;
            let a = assignment(sets, &names)?;
            let beta = coherence_iso(&w1, &w2, &a)?;
            let (src, dst) = (eval(&w1, &a)?, eval(&w2, &a)?);
            let mut rows = Vec::new();
            let mut pairs = Vec::new();
            for (i, &j) in beta.iter().enumerate() {
                let (s, t) = (element_text(&src[i], &a), element_text(&dst[j], &a));
                rows.push(vec![s.clone(), "->".into(), t.clone()]);
                pairs.push(json!([s, t]));
            }
            Ok(Out::new(
                "words coherence",
                fields(json!({
                    "from": w1.display(&names).to_string(),
                    "to": w2.display(&names).to_string(),
                    "bijection": pairs,
                })),
                table(&rows),
            ))
        }
    }
}

fn tambara(g: &Arc<Group>, instance: Instance, budget: usize, samples: usize, seed: u64) -> Out {
    let base = GSet::regular(g);
    let r = match instance {
        Instance::Invariant => check_tambara_axioms(&InvariantRing::new(base), budget, samples, seed),
        Instance::InvariantMutated => check_tambara_axioms(&NormAsTransfer(InvariantRing::new(base)), budget, samples, seed),
        Instance::Burnside => check_tambara_axioms(&EffectiveBurnside::new(g, 3), budget, samples, seed),
        Instance::BurnsideMutated => check_tambara_axioms(&NormAsTransfer(EffectiveBurnside::new(g, 3)), budget, samples, seed),
    };
    report_out("check tambara", &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> RunOutput {
        let argv = std::iter::once("tambara").chain(args.iter().copied());
        run(argv, &mut std::io::empty())
    }

    #[test]
    fn tom_c2() {
        let out = go(&["tom", "C(2)"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "     1  2\nG/1  2  0\nG/2  1  1\n");
        let out = go(&["--format", "json", "tom", "C(2)"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["rows"], json!([[2, 0], [1, 1]]));
        assert_eq!(v["schema"], json!(1));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["tom", "C(2/"]).code, 2);
        assert!(go(&["tom", "C(2/"]).stderr.contains("column 4"));
        assert_eq!(go(&["unmarks", "C(2)", "(1, 0)"]).code, 3);
        assert_eq!(go(&["witt", "unghost", "C(2)", "(0, 1)"]).code, 3);
        assert_eq!(go(&["nonsense"]).code, 2);
        assert_eq!(go(&["witt", "verify", "iso", "S(3)"]).code, 0);
        assert_eq!(go(&["check", "tambara", "--instance", "invariant-mutated", "--group", "C(2)", "--budget", "2"]).code, 1);
    }

    #[test]
    fn symbolic_witt_mul() {
        let out = go(&["witt", "mul", "C(2)", "(a0,a1)", "(b0,b1)", "--symbolic"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let mut names = VarNames::new(["a0", "a1", "b0", "b1"]);
        let t = dsl::parse_tuple(out.stdout.trim()).unwrap();
        let got = dsl::eval_tuple(&t, &mut names, false).unwrap();
        assert_eq!(got[0], names.parse("a0*b0", false).unwrap());
        assert_eq!(got[1], names.parse("a0^2*b1 + b0^2*a1 + 2*a1*b1", false).unwrap());
        assert_eq!(go(&["witt", "mul", "C(2)", "(a0,a1)", "(b0,b1)"]).code, 2);
    }

    #[test]
    fn batch_runs_lines() {
        let input = "tom C(2)\n# comment\n\nmarks C(2) '[G/1] + 2*[G/2]'\n";
        let out = run(["tambara", "batch"], &mut input.as_bytes());
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.ends_with("1  2\n4  2\n"));
    }

    #[test]
    fn bispan_commands() {
        let def = ["--def", "f=C(2)/<> -> C(2)/<1>"];
        let out = go(&[&def[..], &["compose", "T(f) ; N(C(2)/<1> -> C(2)/<1>)"]].concat());
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("x0 + x1"));
        let out = go(&[&def[..], &["factor", "N(f) ; T(C(2)/<1> -> C(2)/<1>)"]].concat());
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("recomposition equivalent: true"));
        let out = go(&["simple", "N(C(2)/<> + C(2)/<> -> C(2)/<>)"]);
        assert!(out.stdout.contains("simple: true"), "{}", out.stdout);
    }

    #[test]
    fn words_commands() {
        let out = go(&["words", "coherence", "x*(y+z)", "x*y + x*z", "--size", "x=1", "--size", "y=1", "--size", "z=2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout.lines().count(), 3);
        assert_eq!(go(&["words", "coherence", "x*x", "x", "--size", "x=1"]).code, 2);
        let out = go(&["words", "supp", "x*(y+1) + 0"]);
        assert!(out.stdout.starts_with("x*y + x\n"), "{}", out.stdout);
    }
}
