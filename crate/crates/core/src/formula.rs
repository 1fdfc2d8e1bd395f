//! Wilkinson-style model formulas for logit regressions on binary factors.
//!
//! `L : V*C*R + A*E` reads as the response `L` followed by a sum of terms.
//! `a*b` expands to `a + b + a:b`, and `(a+b+c)^2` to every product of at
//! most two of the summands. `~` may be used in place of `:`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::table::Schema;

/// A logit model: response plus a hierarchically closed list of
/// interaction terms. The intercept is implicit and always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogitFormula {
    response: String,
    variables: Vec<String>,
    terms: Vec<Vec<String>>,
}

impl LogitFormula {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).formula()
    }

    /// Formula from explicit terms; the closure under subsets is added.
    pub fn from_terms<S: AsRef<str>>(response: &str, terms: &[Vec<S>]) -> Result<Self> {
        if response.is_empty() {
            return Err(Error::EmptyVariableName);
        }
        let mut variables: Vec<String> = Vec::new();
        let mut sets = Vec::new();
        for t in terms {
            let mut set = BTreeSet::new();
            for v in t {
                let v = v.as_ref();
                if v.is_empty() {
                    return Err(Error::EmptyVariableName);
                }
                if v == response {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "response `{response}` cannot be a regressor"
                    )));
                }
                let id = match variables.iter().position(|x| x == v) {
                    Some(i) => i,
                    None => {
                        variables.push(v.to_string());
                        variables.len() - 1
                    }
                };
                set.insert(id);
            }
            if !set.is_empty() {
                sets.push(set);
            }
        }
        Ok(LogitFormula::assemble(
            response.to_string(),
            variables,
            sets,
        ))
    }

    fn assemble(response: String, variables: Vec<String>, sets: Vec<BTreeSet<usize>>) -> Self {
        let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in sets {
            let items: Vec<usize> = s.into_iter().collect();
            for bits in 1u32..(1 << items.len()) {
                let sub: Vec<usize> = (0..items.len())
                    .filter(|i| bits & (1 << i) != 0)
                    .map(|i| items[i])
                    .collect();
                closed.insert(sub);
            }
        }
        let mut ordered: Vec<Vec<usize>> = closed.into_iter().collect();
        ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let terms = ordered
            .into_iter()
            .map(|t| t.into_iter().map(|i| variables[i].clone()).collect())
            .collect();
        LogitFormula {
            response,
            variables,
            terms,
        }
    }

    pub fn response(&self) -> &str {
        &self.response
    }

    /// Regressors in order of first appearance.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Terms ordered by degree, then by first appearance of their variables.
    pub fn terms(&self) -> &[Vec<String>] {
        &self.terms
    }

    /// Number of coefficients including the intercept.
    pub fn parameter_count(&self) -> usize {
        self.terms.len() + 1
    }

    /// Check every variable against a table schema.
    pub fn bind(&self, schema: &Schema) -> Result<()> {
        schema.require(&self.response)?;
        for v in &self.variables {
            schema.require(v)?;
        }
        Ok(())
    }
}

/// Display name of a term: names concatenated when all are one character
/// long, joined by `:` otherwise.
pub fn term_label<S: AsRef<str>>(term: &[S]) -> String {
    if term.is_empty() {
        return "const".to_string();
    }
    let sep = if term.iter().all(|v| v.as_ref().chars().count() == 1) {
        ""
    } else {
        ":"
    };
    let parts: Vec<&str> = term.iter().map(|v| v.as_ref()).collect();
    parts.join(sep)
}

impl FromStr for LogitFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LogitFormula::parse(s)
    }
}

impl fmt::Display for LogitFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.response)?;
        // maximal terms suffice to regenerate the closure
        let maximal: Vec<&Vec<String>> = self
            .terms
            .iter()
            .filter(|t| {
                !self
                    .terms
                    .iter()
                    .any(|u| u.len() > t.len() && t.iter().all(|v| u.contains(v)))
            })
            .collect();
        for (i, t) in maximal.iter().enumerate() {
            let sep = if i == 0 { " " } else { " + " };
            write!(f, "{sep}{}", t.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token<'a> {
    Name(&'a str),
    Int(u32),
    Colon,
    Plus,
    Star,
    Caret,
    Open,
    Close,
    End,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    peeked: Option<(usize, Token<'a>)>,
    names: Vec<String>,
}

type Terms = Vec<BTreeSet<usize>>;

fn err<T>(position: usize, message: &str) -> Result<T> {
    Err(Error::Formula {
        position,
        message: message.to_string(),
    })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            pos: 0,
            peeked: None,
            names: Vec::new(),
        }
    }

    fn lex(&mut self) -> Result<(usize, Token<'a>)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((start, Token::End));
        };
        let single = match c {
            b':' | b'~' => Some(Token::Colon),
            b'+' => Some(Token::Plus),
            b'*' => Some(Token::Star),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::Open),
            b')' => Some(Token::Close),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((start, Token::Name(&self.text[start..self.pos])));
        }
        if c.is_ascii_digit() {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            return match self.text[start..self.pos].parse() {
                Ok(n) => Ok((start, Token::Int(n))),
                Err(_) => err(start, "exponent too large"),
            };
        }
        let ch = self.text[start..].chars().next().unwrap_or('?');
        err(start, &alloc::format!("unexpected character `{ch}`"))
    }

    fn peek(&mut self) -> Result<(usize, Token<'a>)> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.unwrap())
    }

    fn next(&mut self) -> Result<(usize, Token<'a>)> {
        let t = self.peek()?;
        self.peeked = None;
        Ok(t)
    }

    fn formula(mut self) -> Result<LogitFormula> {
        let response = match self.next()? {
            (_, Token::Name(n)) => n.to_string(),
            (p, _) => return err(p, "expected the response variable"),
        };
        match self.next()? {
            (_, Token::Colon) => {}
            (p, _) => return err(p, "expected `:` or `~` after the response"),
        }
        let terms = if let (_, Token::End) = self.peek()? {
            Vec::new()
        } else {
            self.sum()?
        };
        match self.next()? {
            (_, Token::End) => {}
            (p, _) => return err(p, "unexpected input after the formula"),
        }
        if let Some(i) = self.names.iter().position(|n| *n == response) {
            if terms.iter().any(|t| t.contains(&i)) {
                return err(0, "the response cannot appear among the regressors");
            }
        }
        Ok(LogitFormula::assemble(response, self.names, terms))
    }

    fn sum(&mut self) -> Result<Terms> {
        let mut out = self.product()?;
        while let (_, Token::Plus) = self.peek()? {
            self.next()?;
            for t in self.product()? {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        Ok(out)
    }

    fn product(&mut self) -> Result<Terms> {
        let mut out = self.power()?;
        while let (_, Token::Star) = self.peek()? {
            self.next()?;
            let rhs = self.power()?;
            out = cross(&out, &rhs);
        }
        Ok(out)
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if let (_, Token::Caret) = self.peek()? {
            self.next()?;
            let n = match self.next()? {
                (_, Token::Int(n)) if n >= 1 => n,
                (p, _) => return err(p, "expected a positive integer exponent"),
            };
            let mut out = base.clone();
            for _ in 1..n.min(32) {
                out = cross(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.next()? {
            (_, Token::Name(n)) => {
                let id = match self.names.iter().position(|x| x == n) {
                    Some(i) => i,
                    None => {
                        self.names.push(n.to_string());
                        self.names.len() - 1
                    }
                };
                Ok(vec![BTreeSet::from([id])])
            }
            (_, Token::Open) => {
                let inner = self.sum()?;
                match self.next()? {
                    (_, Token::Close) => Ok(inner),
                    (p, _) => err(p, "expected `)`"),
                }
            }
            (p, Token::End) => err(p, "expected a term"),
            (p, _) => err(p, "expected a variable or `(`"),
        }
    }
}

/// `a*b`: all terms of both sides and their pairwise unions.
fn cross(a: &Terms, b: &Terms) -> Terms {
    let mut out: Terms = Vec::new();
    let mut push = |t: BTreeSet<usize>| {
        if !out.contains(&t) {
            out.push(t);
        }
    };
    for t in a.iter().chain(b) {
        push(t.clone());
    }
    for x in a {
        for y in b {
            push(x.union(y).copied().collect());
        }
    }
    out
}
