//! Freely reduced words and finite presentations, with a small text DSL:
//!
//! ```text
//! < a, t | t a^2 t^-1 = a^3, [a, t^2] >
//! ```
//!
//! Words are juxtaposed powers `g^k`; parentheses group, `[x, y]` expands to
//! `x y x^-1 y^-1`, and `1` is the empty word. Relations `u = v` are stored as
//! relators `u v^-1`.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Syllable {
    pub generator: String,
    pub exponent: i64,
}

/// A freely reduced word: adjacent syllables have distinct generators and no
/// exponent is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word from raw `(generator, exponent)` pairs, reducing freely.
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Word {
        let mut w = Word::identity();
        for (g, e) in pairs {
            w.push(g.into(), e);
        }
        w
    }

    pub fn generator(g: &str) -> Word {
        Word::new([(g, 1)])
    }

    pub fn power_of(g: &str, k: i64) -> Word {
        Word::new([(g, k)])
    }

    fn push(&mut self, generator: String, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator,
            exponent,
        });
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, counting `g^k` as `|k|` letters.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.generator.clone(), s.exponent);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn exponent_sum(&self, g: &str) -> i64 {
        exponent_sum(self, g)
    }

    /// Letters one at a time, as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exponent.signum();
            (0..s.exponent.unsigned_abs()).map(move |_| (s.generator.as_str(), sign))
        })
    }

    pub fn generators_used(&self) -> impl Iterator<Item = &str> {
        self.syllables.iter().map(|s| s.generator.as_str())
    }
}

/// Freely reduces `w`. Words are kept reduced on construction, so this is a
/// normalizing copy.
pub fn free_reduce(w: &Word) -> Word {
    Word::new(w.syllables.iter().map(|s| (s.generator.clone(), s.exponent)))
}

pub fn exponent_sum(w: &Word, g: &str) -> i64 {
    w.syllables
        .iter()
        .filter(|s| s.generator == g)
        .map(|s| s.exponent)
        .sum()
}

/// Replaces every syllable `g^k` by `replacement^k`.
pub fn substitute(w: &Word, g: &str, replacement: &Word) -> Word {
    let mut out = Word::identity();
    for s in &w.syllables {
        if s.generator == g {
            out = out.mul(&replacement.pow(s.exponent));
        } else {
            out.push(s.generator.clone(), s.exponent);
        }
    }
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s.exponent == 1 {
                write!(f, "{}", s.generator)?;
            } else {
                write!(f, "{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Presentation, ParseError> {
        for r in &relators {
            for g in r.generators_used() {
                if !generators.iter().any(|x| x == g) {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownGenerator(g.to_string()),
                        position: 0,
                    });
                }
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generators.join(", "))?;
        for (i, r) in self.relators.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, r)?;
        }
        write!(f, ">")
    }
}

impl std::str::FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Presentation, ParseError> {
        parse_presentation(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParseErrorKind {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent")]
    MalformedExponent,
    #[error("expected `{0}`")]
    Expected(char),
    #[error("unbalanced `{0}`")]
    Unbalanced(char),
    #[error("unexpected character `{0}`")]
    Unexpected(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("invalid generator name `{0}`")]
    InvalidGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// A parse failure at a byte offset into the input.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl ParseError {
    /// 1-based line and column of the error within `text`.
    pub fn line_col(&self, text: &str) -> (usize, usize) {
        let upto = &text[..self.position.min(text.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    generators: Vec<String>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, generators: Vec<String>) -> Parser<'a> {
        Parser {
            src,
            pos: 0,
            generators,
        }
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            kind,
            position: self.pos,
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(_) => self.err(ParseErrorKind::Expected(want)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if is_ident_start(c) => {}
            Some(c) => return self.err(ParseErrorKind::Unexpected(c)),
            None => return self.err(ParseErrorKind::UnexpectedEnd),
        }
        while let Some(c) = self.peek_raw() {
            if is_ident_char(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if let Some(c @ ('-' | '+')) = self.peek_raw() {
            self.pos += c.len_utf8();
            self.skip_ws();
        }
        let digits_start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            self.pos = start;
            return self.err(ParseErrorKind::MalformedExponent);
        }
        let text: String = self.src[start..self.pos]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        text.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::MalformedExponent,
            position: start,
        })
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(open @ ('{' | '(')) => {
                let close = if open == '{' { '}' } else { ')' };
                let at = self.pos;
                self.bump();
                let k = self.integer()?;
                if self.peek() != Some(close) {
                    return Err(ParseError {
                        kind: ParseErrorKind::Unbalanced(open),
                        position: at,
                    });
                }
                self.bump();
                Ok(k)
            }
            _ => self.integer(),
        }
    }

    fn at_word_end(&mut self) -> bool {
        matches!(
            self.peek(),
            None | Some(',' | '=' | '>' | ')' | ']' | '|')
        )
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = Word::identity();
        while !self.at_word_end() {
            let atom = self.atom()?;
            let atom = if self.peek() == Some('^') {
                self.bump();
                let k = self.exponent()?;
                atom.pow(k)
            } else {
                atom
            };
            w = w.mul(&atom);
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some('(') => {
                let at = self.pos;
                self.bump();
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(ParseError {
                        kind: ParseErrorKind::Unbalanced('('),
                        position: at,
                    });
                }
                self.bump();
                Ok(w)
            }
            Some('[') => {
                let at = self.pos;
                self.bump();
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                if self.peek() != Some(']') {
                    return Err(ParseError {
                        kind: ParseErrorKind::Unbalanced('['),
                        position: at,
                    });
                }
                self.bump();
                Ok(Word::commutator(&x, &y))
            }
            Some('1') => {
                self.bump();
                Ok(Word::identity())
            }
            Some(c) if is_ident_start(c) => {
                self.skip_ws();
                let at = self.pos;
                let name = self.ident()?;
                if !self.generators.contains(&name) {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownGenerator(name),
                        position: at,
                    });
                }
                Ok(Word::generator(&name))
            }
            Some(c) => self.err(ParseErrorKind::Unexpected(c)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn relation(&mut self) -> Result<Word, ParseError> {
        let lhs = self.word()?;
        if self.peek() == Some('=') {
            self.bump();
            let rhs = self.word()?;
            Ok(lhs.mul(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(ParseErrorKind::Unexpected(c)),
        }
    }
}

/// Parses `< g1, g2, ... | r1, r2 = w, ... >`.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut p = Parser::new(text, Vec::new());
    let open_at = {
        p.skip_ws();
        p.pos
    };
    p.expect('<')?;
    let mut generators = Vec::new();
    if p.peek() != Some('|') {
        loop {
            let at = {
                p.skip_ws();
                p.pos
            };
            let g = p.ident()?;
            if generators.contains(&g) {
                return Err(ParseError {
                    kind: ParseErrorKind::DuplicateGenerator(g),
                    position: at,
                });
            }
            generators.push(g);
            match p.peek() {
                Some(',') => {
                    p.bump();
                }
                _ => break,
            }
        }
    }
    p.expect('|')?;
    p.generators = generators.clone();
    let mut relators = Vec::new();
    if p.peek() != Some('>') {
        loop {
            let r = p.relation()?;
            if !r.is_identity() {
                relators.push(r);
            }
            match p.peek() {
                Some(',') => {
                    p.bump();
                }
                Some('>') => break,
                None => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Unbalanced('<'),
                        position: open_at,
                    })
                }
                Some(c) => return p.err(ParseErrorKind::Unexpected(c)),
            }
        }
    }
    if p.peek().is_none() {
        return Err(ParseError {
            kind: ParseErrorKind::Unbalanced('<'),
            position: open_at,
        });
    }
    p.expect('>')?;
    p.finish()?;
    Ok(Presentation {
        generators,
        relators,
    })
}

/// Parses a single word over the given generators.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Word, ParseError> {
    let mut p = Parser::new(text, generators.to_vec());
    let w = p.word()?;
    p.finish()?;
    Ok(w)
}

/// Parses `u` or `u = v` over the given generators, returning the relator.
pub fn parse_relation(text: &str, generators: &[String]) -> Result<Word, ParseError> {
    let mut p = Parser::new(text, generators.to_vec());
    let w = p.relation()?;
    p.finish()?;
    Ok(w)
}
