//! Text input: field expressions over a [`VertexAlgebra`] and scene files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? power ('*' power)*          right-nested normal ordering
//! power  := atom ('^' int)?                  a^n repeats a n times in the chain
//! atom   := rational | name | 'd(' expr ')' | '(' expr ')'
//!         | ':' int '(' expr ',' expr ')' ':'  the k-th product
//!         | ph(n) | s(n) | iota(i) | Lie(i)
//! ```
//!
//! Output of [`VertexAlgebra::show`] parses back to the same state.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeffring::{BasePatch, CoefficientForm};
use crate::cdr::Cdr;
use crate::error::{Error, Result};
use crate::twisted::{BundleScene, SceneCaps};
use crate::vertex::{State, VertexAlgebra};
use crate::Q;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| syntax(text, start, "integer too large"))?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*^/:(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(syntax(text, i, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn syntax(text: &str, pos: usize, msg: &str) -> Error {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    Error::Parse { line, col, msg: msg.to_string() }
}

/// Expression parser bound to one algebra, with optional named fields
/// (`Q`, `G`, ...) and a cap on phase indices.
pub struct Parser<'a> {
    alg: &'a VertexAlgebra,
    named: BTreeMap<String, State>,
    phase_cap: Option<u32>,
}

struct Cursor<'t> {
    text: &'t str,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.text.len(), |(p, _)| *p)
    }

    fn err(&self, msg: &str) -> Error {
        syntax(self.text, self.pos(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<i128> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.at += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.err("expected an integer")),
        }
    }
}

impl<'a> Parser<'a> {
    pub fn new(alg: &'a VertexAlgebra) -> Self {
        Parser { alg, named: BTreeMap::new(), phase_cap: None }
    }

    pub fn with_named(mut self, named: impl IntoIterator<Item = (String, State)>) -> Self {
        self.named.extend(named);
        self
    }

    pub fn with_phase_cap(mut self, cap: u32) -> Self {
        self.phase_cap = Some(cap);
        self
    }

    pub fn parse(&self, text: &str) -> Result<State> {
        let mut cur = Cursor { text, toks: lex(text)?, at: 0 };
        let s = self.expr(&mut cur)?;
        if cur.at != cur.toks.len() {
            return Err(cur.err("unexpected trailing input"));
        }
        Ok(s)
    }

    fn expr(&self, cur: &mut Cursor) -> Result<State> {
        let mut acc = self.term(cur)?;
        loop {
            if cur.eat('+') {
                acc += &self.term(cur)?;
            } else if cur.eat('-') {
                acc = acc - self.term(cur)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&self, cur: &mut Cursor) -> Result<State> {
        let neg = cur.eat('-');
        let mut factors = self.power(cur)?;
        while cur.eat('*') {
            factors.extend(self.power(cur)?);
        }
        if factors.is_empty() {
            factors.push(State::vacuum());
        }
        let mut acc = factors.pop().unwrap();
        while let Some(f) = factors.pop() {
            acc = self.alg.nprod(&f, &acc);
        }
        Ok(if neg { -acc } else { acc })
    }

    /// `a^n` contributes `n` factors to the surrounding right-nested product.
    fn power(&self, cur: &mut Cursor) -> Result<Vec<State>> {
        let base = self.atom(cur)?;
        if !cur.eat('^') {
            return Ok(vec![base]);
        }
        let n = match cur.peek() {
            Some(Tok::Int(n)) => *n,
            _ => return Err(cur.err("expected an exponent")),
        };
        cur.at += 1;
        if n > 64 {
            return Err(cur.err("exponent too large"));
        }
        Ok(vec![base; n as usize])
    }

    fn atom(&self, cur: &mut Cursor) -> Result<State> {
        let pos = cur.pos();
        match cur.peek().cloned() {
            Some(Tok::Int(n)) => {
                cur.at += 1;
                let mut q = Q::from_integer(n);
                if cur.eat('/') {
                    match cur.peek() {
                        Some(Tok::Int(d)) if *d != 0 => {
                            q = q / Q::from_integer(*d);
                            cur.at += 1;
                        }
                        _ => return Err(cur.err("expected a nonzero denominator")),
                    }
                }
                Ok(if q.is_zero() { State::zero() } else { State::scalar(q) })
            }
            Some(Tok::Sym('(')) => {
                cur.at += 1;
                let s = self.expr(cur)?;
                cur.expect(')')?;
                Ok(s)
            }
            Some(Tok::Sym(':')) => {
                cur.at += 1;
                let k = cur.int()?;
                cur.expect('(')?;
                let a = self.expr(cur)?;
                cur.expect(',')?;
                let b = self.expr(cur)?;
                cur.expect(')')?;
                cur.expect(':')?;
                let k = i64::try_from(k).map_err(|_| syntax(cur.text, pos, "mode out of range"))?;
                Ok(self.alg.product(k, &a, &b))
            }
            Some(Tok::Ident(name)) => {
                cur.at += 1;
                self.name(cur, pos, &name)
            }
            _ => Err(cur.err("expected an expression")),
        }
    }

    fn name(&self, cur: &mut Cursor, pos: usize, name: &str) -> Result<State> {
        let called = cur.peek() == Some(&Tok::Sym('('));
        let phase_symbol = self.alg.phase_rule().map(|r| r.symbol.as_str());
        if called && name == "d" {
            cur.at += 1;
            let s = self.expr(cur)?;
            cur.expect(')')?;
            return Ok(self.alg.translate(&s));
        }
        if called && (name == "ph" || name == "s") {
            if phase_symbol != Some(name) {
                return Err(Error::Unknown(format!("{name}(n) in algebra `{}`", self.alg.name())));
            }
            cur.at += 1;
            let n = cur.int()?;
            cur.expect(')')?;
            let n = i32::try_from(n).map_err(|_| syntax(cur.text, pos, "phase out of range"))?;
            if let Some(cap) = self.phase_cap {
                if n.unsigned_abs() > cap {
                    return Err(Error::CapExceeded(format!("phase {n} beyond fourier cap {cap}")));
                }
            }
            return Ok(self.alg.phase_state(n));
        }
        if called && (name == "iota" || name == "Lie") {
            cur.at += 1;
            let idx = match cur.peek().cloned() {
                Some(Tok::Int(k)) => k.to_string(),
                Some(Tok::Ident(c)) => {
                    let i = self.coordinate_index(&c).ok_or_else(|| Error::Unknown(c.clone()))?;
                    (i + 1).to_string()
                }
                _ => return Err(cur.err("expected a coordinate")),
            };
            cur.at += 1;
            cur.expect(')')?;
            return self.lookup(&format!("{name}{idx}"));
        }
        self.lookup(name)
    }

    fn coordinate_index(&self, c: &str) -> Option<usize> {
        let forms = self.alg.form_letters()?;
        forms.x.iter().position(|&g| self.alg.generator(g).name == c)
    }

    fn lookup(&self, name: &str) -> Result<State> {
        if let Some(s) = self.named.get(name) {
            return Ok(s.clone());
        }
        if let Some(g) = self.alg.gen_id(name) {
            return Ok(State::gen(g));
        }
        // free-field aliases: c<k> = d<coord k>, gamma<k> = <coord k>
        let alias = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse::<usize>().ok() };
        let coords: Vec<String> = self
            .alg
            .generators()
            .iter()
            .map(|g| g.name.clone())
            .filter(|n| self.alg.gen_id(&format!("d{n}")).is_some())
            .collect();
        for (prefix, dashed) in [("c", true), ("gamma", false)] {
            if let Some(k) = alias(prefix).filter(|&k| k >= 1 && k <= coords.len()) {
                let target = if dashed { format!("d{}", coords[k - 1]) } else { coords[k - 1].clone() };
                if let Some(g) = self.alg.gen_id(&target) {
                    return Ok(State::gen(g));
                }
            }
        }
        Err(Error::Unknown(name.to_string()))
    }
}

/// A differential form on `patch`, written in the expression grammar.
pub fn parse_form(patch: &BasePatch, text: &str) -> Result<CoefficientForm> {
    let cdr = Cdr::new(patch.clone());
    let s = Parser::new(cdr.algebra()).parse(text)?;
    cdr.algebra().as_form(&s).ok_or_else(|| Error::Precondition(format!("`{text}` is not a differential form")))
}

fn show_form(patch: &BasePatch, w: &CoefficientForm) -> String {
    let cdr = Cdr::new(patch.clone());
    cdr.algebra().show(&cdr.form(w))
}

/// Read a scene file of `key = value` lines; `#` starts a comment.
///
/// Required: `base_dim`, `A_bas`, `Ahat_bas`, `H3`. Optional: `coords`
/// (comma separated, default `x, y, z, w`), `weight_cap`, `fourier_cap`, `poly_cap`.
pub fn parse_scene(text: &str) -> Result<BundleScene> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    const KEYS: [&str; 8] = ["base_dim", "coords", "A_bas", "Ahat_bas", "H3", "weight_cap", "fourier_cap", "poly_cap"];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |col: usize, msg: String| Error::Parse { line: lineno + 1, col, msg };
        let (key, value) = line.split_once('=').ok_or_else(|| at(1, "expected `key = value`".into()))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(at(1, format!("unknown key `{key}`")));
        }
        if entries.insert(key.to_string(), (lineno + 1, value.trim().to_string())).is_some() {
            return Err(at(1, format!("duplicate key `{key}`")));
        }
    }
    let get = |k: &str| -> Result<&(usize, String)> {
        entries.get(k).ok_or_else(|| Error::Parse { line: 0, col: 0, msg: format!("missing key `{k}`") })
    };
    let number = |k: &str, default: u32| -> Result<u32> {
        match entries.get(k) {
            None => Ok(default),
            Some((line, v)) => {
                v.parse().map_err(|_| Error::Parse { line: *line, col: 1, msg: format!("`{k}` must be a nonnegative integer") })
            }
        }
    };
    let (dim_line, dim) = get("base_dim")?;
    let dim: usize = dim
        .parse()
        .ok()
        .filter(|&d| (1..=6).contains(&d))
        .ok_or_else(|| Error::Parse { line: *dim_line, col: 1, msg: "base_dim must be 1..=6".into() })?;
    let patch = match entries.get("coords") {
        None => BasePatch::standard(dim),
        Some((line, v)) => {
            let names: Vec<&str> = v.split(',').map(str::trim).collect();
            if names.len() != dim || names.iter().any(|n| n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric())) {
                return Err(Error::Parse { line: *line, col: 1, msg: format!("coords must list {dim} names") });
            }
            BasePatch::new(names)
        }
    };
    let form = |k: &str| -> Result<CoefficientForm> {
        let (line, v) = get(k)?;
        parse_form(&patch, v).map_err(|e| match e {
            Error::Parse { col, msg, .. } => Error::Parse { line: *line, col, msg: format!("{k}: {msg}") },
            other => other,
        })
    };
    let caps = SceneCaps {
        weight: number("weight_cap", SceneCaps::default().weight)?,
        fourier: number("fourier_cap", SceneCaps::default().fourier)?,
        poly_degree: number("poly_cap", SceneCaps::default().poly_degree)?,
    };
    let (a, ahat, h3) = (form("A_bas")?, form("Ahat_bas")?, form("H3")?);
    for (k, w) in [("A_bas", &a), ("Ahat_bas", &ahat), ("H3", &h3)] {
        if w.max_poly_degree() > caps.poly_degree {
            return Err(Error::CapExceeded(format!("{k} exceeds poly_cap {}", caps.poly_degree)));
        }
    }
    Ok(BundleScene::new(patch, a, ahat, h3)?.with_caps(caps))
}

/// Scene file text that [`parse_scene`] reads back to the same scene.
pub fn write_scene(scene: &BundleScene) -> String {
    let p = scene.patch();
    let caps = scene.caps;
    format!(
        "base_dim = {}\ncoords = {}\nA_bas = {}\nAhat_bas = {}\nH3 = {}\nweight_cap = {}\nfourier_cap = {}\npoly_cap = {}\n",
        p.dim(),
        p.names().join(", "),
        show_form(p, scene.a_bas()),
        show_form(p, scene.ahat_bas()),
        show_form(p, scene.h3()),
        caps.weight,
        caps.fourier,
        caps.poly_degree
    )
}

/// The bundled acceptance scene.
pub const STD2D: &str = "\
# base dimension 2, flat torus fibres
base_dim = 2
coords = x, y
A_bas = x*dy
Ahat_bas = -y*dx
H3 = 0
weight_cap = 3
fourier_cap = 2
poly_cap = 8
";
