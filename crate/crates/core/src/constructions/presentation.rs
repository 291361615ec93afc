//! Text notation for finite presentations.
//!
//! ```text
//! presentation := ['<'] gens '|' [relation {',' relation}] ['>']
//! gens         := ident {',' ident}
//! relation     := expr {'=' expr} | 'central' '(' expr ')' | 'class' '(' int ')'
//! expr         := factor {['*'] factor}
//! factor       := atom ['^' ['-'] int]
//! atom         := ident | '1' | '(' expr ')' | '[' expr ',' expr {',' expr} ']'
//! ```
//!
//! `w1 = w2 = ... = wk` contributes the relators `wi wk^-1`. Brackets are
//! left-normed, `[x, y, z] = [[x, y], z]`, with `[x, y] = x^-1 y^-1 x y` under
//! the default [`Convention`]. When every generator name is a single
//! character, juxtaposed letters such as `ab` read as `a b`.
//!
//! `central(w)` expands to `[w, g]` for every generator `g`; `class(c)`
//! expands to every left-normed commutator of generators of weight `c + 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::GroupTable;

/// A letter is `g + 1` for generator `g` and `-(g + 1)` for its inverse.
pub type Letter = i32;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![g as Letter + 1])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Freely reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::empty(), |acc, _| acc.mul(&base))
    }

    pub fn commutator(&self, other: &Word, conv: Convention) -> Word {
        let (x, y) = (self, other);
        match conv {
            Convention::LeftInverse => x.inverse().mul(&y.inverse()).mul(x).mul(y),
            Convention::RightInverse => x.mul(y).mul(&x.inverse()).mul(&y.inverse()),
        }
    }

    /// Value in `g` with generator `i` sent to `images[i]`.
    pub fn evaluate(&self, g: &GroupTable, images: &[usize]) -> usize {
        self.0.iter().fold(0, |acc, &l| {
            let x = images[l.unsigned_abs() as usize - 1];
            g.mul(acc, if l < 0 { g.inv(x) } else { x })
        })
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&l| {
                let name = &names[(l.unsigned_abs() - 1) as usize];
                if l < 0 {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Which commutator the bracket `[x, y]` denotes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `[x, y] = x^-1 y^-1 x y`
    #[default]
    LeftInverse,
    /// `[x, y] = x y x^-1 y^-1`
    RightInverse,
}

impl Convention {
    pub fn opposite(self) -> Convention {
        match self {
            Convention::LeftInverse => Convention::RightInverse,
            Convention::RightInverse => Convention::LeftInverse,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::LeftInverse => "x^-1 y^-1 x y",
            Convention::RightInverse => "x y x^-1 y^-1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Fully expanded, freely reduced relators.
    pub relators: Vec<Word>,
    pub convention: Convention,
}

impl Presentation {
    /// Whether every relator is trivial under `generator i -> images[i]`.
    pub fn holds_in(&self, g: &GroupTable, images: &[usize]) -> bool {
        images.len() == self.generators.len() && self.relators.iter().all(|r| r.evaluate(g, images) == 0)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display(&self.generators)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    parse_presentation_with(text, Convention::default())
}

pub fn parse_presentation_with(text: &str, convention: Convention) -> Result<Presentation> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, gens: Vec::new(), conv: convention, end: text.len() };
    let relators = p.presentation()?;
    Ok(Presentation { generators: p.gens, relators, convention })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i]
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })?;
            out.push((Tok::Int(v), start));
        } else if "^-()[],=|*<>;".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    gens: Vec<String>,
    conv: Convention,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer"),
        }
    }

    fn presentation(&mut self) -> Result<Vec<Word>> {
        let bracketed = self.eat('<');
        loop {
            match self.peek() {
                Some(Tok::Ident(name)) => {
                    let name = name.clone();
                    if self.gens.contains(&name) {
                        return self.err(format!("duplicate generator {name}"));
                    }
                    self.gens.push(name);
                    self.pos += 1;
                }
                _ => return self.err("expected generator name"),
            }
            if !self.eat(',') {
                break;
            }
        }
        self.expect('|')?;
        let mut rels = Vec::new();
        let closes = |p: &Parser| p.peek().is_none() || (bracketed && p.peek() == Some(&Tok::Sym('>')));
        if !closes(self) {
            loop {
                self.relation(&mut rels)?;
                if !(self.eat(',') || self.eat(';')) {
                    break;
                }
            }
        }
        if bracketed {
            self.expect('>')?;
        }
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(rels)
    }

    fn keyword_call(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
            && matches!(self.tokens.get(self.pos + 1), Some((Tok::Sym('('), _)))
    }

    fn relation(&mut self, out: &mut Vec<Word>) -> Result<()> {
        if self.keyword_call("central") {
            self.pos += 2;
            let w = self.expr()?;
            self.expect(')')?;
            for g in 0..self.gens.len() {
                out.push(w.commutator(&Word::generator(g), self.conv));
            }
            return Ok(());
        }
        if self.keyword_call("class") {
            self.pos += 2;
            let at = self.offset();
            let c = self.int()?;
            if c < 1 {
                return Err(Error::Parse { pos: at, msg: "class must be at least 1".into() });
            }
            self.expect(')')?;
            out.extend(left_normed_commutators(self.gens.len(), c as usize + 1, self.conv));
            return Ok(());
        }
        let mut sides = vec![self.expr()?];
        while self.eat('=') {
            sides.push(self.expr()?);
        }
        let last = sides.last().unwrap().inverse();
        if sides.len() == 1 {
            out.push(sides.pop().unwrap());
        } else {
            for w in &sides[..sides.len() - 1] {
                out.push(w.mul(&last));
            }
        }
        Ok(())
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(_)) => !self.keyword_call("central") && !self.keyword_call("class"),
            Some(Tok::Int(1)) => true,
            Some(Tok::Sym('(')) | Some(Tok::Sym('[')) => true,
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Word> {
        if !self.starts_factor() {
            return self.err("expected a word");
        }
        let mut w = Word::empty();
        loop {
            w = w.mul(&self.factor()?);
            self.eat('*');
            if !self.starts_factor() {
                break;
            }
        }
        Ok(w)
    }

    fn resolve(&self, name: &str, at: usize) -> Result<Vec<usize>> {
        if let Some(g) = self.gens.iter().position(|s| s == name) {
            return Ok(vec![g]);
        }
        let single = self.gens.iter().all(|s| s.chars().count() == 1);
        if single {
            let mut out = Vec::new();
            for (k, ch) in name.char_indices() {
                match self.gens.iter().position(|s| s.starts_with(ch)) {
                    Some(g) => out.push(g),
                    None => {
                        return Err(Error::Parse {
                            pos: at + k,
                            msg: format!("unknown generator {ch}"),
                        })
                    }
                }
            }
            return Ok(out);
        }
        Err(Error::Parse { pos: at, msg: format!("unknown generator {name}") })
    }

    fn factor(&mut self) -> Result<Word> {
        let at = self.offset();
        let (prefix, atom) = match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut gs = self.resolve(&name, at)?;
                let last = gs.pop().unwrap();
                let prefix = gs.into_iter().fold(Word::empty(), |w, g| w.mul(&Word::generator(g)));
                (prefix, Word::generator(last))
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                (Word::empty(), Word::empty())
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(')')?;
                (Word::empty(), w)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut w = self.expr()?;
                self.expect(',')?;
                loop {
                    let rhs = self.expr()?;
                    w = w.commutator(&rhs, self.conv);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                (Word::empty(), w)
            }
            _ => return self.err("expected generator, '1', '(' or '['"),
        };
        let atom = if self.eat('^') { atom.pow(self.int()?) } else { atom };
        Ok(prefix.mul(&atom))
    }
}

/// All `[g_i1, ..., g_iw]` (left-normed) for `i` ranging over `ngens^weight`
/// tuples in lexicographic order.
pub fn left_normed_commutators(ngens: usize, weight: usize, conv: Convention) -> Vec<Word> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; weight];
    if ngens == 0 {
        return out;
    }
    loop {
        let mut w = Word::generator(idx[0]);
        for &i in &idx[1..] {
            w = w.commutator(&Word::generator(i), conv);
        }
        out.push(w);
        let mut k = weight;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < ngens {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The order-64 class-3 group on `a, b, c` used throughout the examples.
pub const G64_PRESENTATION: &str =
    "a, b, c | a^2 = b^2 = 1, c^2 = [a,c], [c,b] = [[c,a],a], central([b,a]), class(3)";
