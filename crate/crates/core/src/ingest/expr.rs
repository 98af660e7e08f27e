//! Kernel expressions such as `x1^2*x2^2*x3^2*(x1+x2)^4` or
//! `a^2 b^3 c^4 d^5 / ((a+b)^4 (c+d)^6)`.
//!
//! ```text
//! product := factor (('*' | '/' | ε) factor)*
//! factor  := atom ('^' exponent)?
//! atom    := ion | '(' ion ('+' ion)+ ')' | '(' product ')'
//! exponent:= real | '(' real ')' | '{' real '}'
//! ```
//!
//! `/` negates the factor right after it. Ions are registered in order of
//! first appearance.

use log::warn;

use crate::error::{Error, Result};
use crate::model::{canonicalize, CountModel, Pattern};

/// A parsed expression: factors over ion indices, before canonicalisation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpressionAst {
    pub ions: Vec<String>,
    /// `(ion indices, exponent)`; indices are sorted and distinct.
    pub factors: Vec<(Vec<usize>, f64)>,
}

impl ExpressionAst {
    pub fn raw_terms(&self) -> Vec<(Pattern, f64)> {
        let n = self.ions.len();
        self.factors
            .iter()
            .map(|(ions, c)| (Pattern::from_indices(n, ions), *c))
            .collect()
    }

    pub fn to_model(&self) -> Result<CountModel> {
        if self.factors.is_empty() {
            return Err(Error::EmptyInput);
        }
        canonicalize(&self.raw_terms())?.renamed(self.ions.clone())
    }
}

pub fn parse_expression(text: &str) -> Result<CountModel> {
    parse_ast(text)?.to_model()
}

pub fn parse_ast(text: &str) -> Result<ExpressionAst> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ions: Vec::new(),
        factors: Vec::new(),
    };
    p.product(1.0, 0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    if p.factors.is_empty() && p.ions.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty product".into(),
        });
    }
    Ok(ExpressionAst {
        ions: p.ions,
        factors: p.factors,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ions: Vec<String>,
    factors: Vec<(Vec<usize>, f64)>,
}

enum Atom {
    Form(Vec<usize>),
    /// Range of `factors` produced by a parenthesised product.
    Group(usize, usize),
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphabetic() || c == b'_')
    }

    fn product(&mut self, sign: f64, depth: usize) -> Result<()> {
        if depth > 64 {
            return Err(self.error("nesting too deep"));
        }
        let mut next_sign = sign;
        let mut any = false;
        loop {
            if !self.starts_factor() {
                if any {
                    return Ok(());
                }
                return Err(self.error("expected an ion or '('"));
            }
            self.factor(next_sign, depth)?;
            any = true;
            next_sign = sign;
            if self.eat(b'*') {
                if self.eat(b'*') {
                    return Err(self.error("use '^' for powers"));
                }
            } else if self.eat(b'/') {
                next_sign = -sign;
            } else if !self.starts_factor() {
                return Ok(());
            }
            if !self.starts_factor() {
                return Err(self.error("expected an ion or '(' after operator"));
            }
        }
    }

    fn factor(&mut self, sign: f64, depth: usize) -> Result<()> {
        let start = self.pos;
        let atom = self.atom(depth)?;
        let exp = if self.eat(b'^') {
            self.exponent()?
        } else {
            1.0
        };
        match atom {
            Atom::Form(ions) => {
                if exp == 0.0 {
                    warn!("dropping zero exponent at position {start}");
                } else {
                    self.factors.push((ions, sign * exp));
                }
            }
            Atom::Group(from, to) => {
                for f in &mut self.factors[from..to] {
                    f.1 *= sign * exp;
                }
                if exp == 0.0 {
                    warn!("dropping zero exponent at position {start}");
                    self.factors.truncate(from);
                }
            }
        }
        Ok(())
    }

    fn atom(&mut self, depth: usize) -> Result<Atom> {
        if !self.eat(b'(') {
            return Ok(Atom::Form(vec![self.ion()?]));
        }
        // a sum of ions or a nested product; decide after the first factor
        let save = self.pos;
        if self
            .peek()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
        {
            let first = self.ion()?;
            if self.peek() == Some(b'+') {
                let mut ions = vec![first];
                while self.eat(b'+') {
                    let i = self.ion()?;
                    if ions.contains(&i) {
                        return Err(self.error("ion repeated inside a sum"));
                    }
                    ions.push(i);
                }
                self.expect(b')')?;
                ions.sort_unstable();
                return Ok(Atom::Form(ions));
            }
            self.pos = save;
        }
        let from = self.factors.len();
        self.product(1.0, depth + 1)?;
        self.expect(b')')?;
        Ok(Atom::Group(from, self.factors.len()))
    }

    fn ion(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.error("expected an ion name"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(match self.ions.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.ions.push(name.to_string());
                self.ions.len() - 1
            }
        })
    }

    fn exponent(&mut self) -> Result<f64> {
        let close = if self.eat(b'(') {
            Some(b')')
        } else if self.eat(b'{') {
            Some(b'}')
        } else {
            None
        };
        let v = self.number()?;
        if let Some(c) = close {
            self.expect(c)?;
        }
        Ok(v)
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
            i += 1;
        }
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'-' || s[j] == b'+') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = i;
                Ok(v)
            }
            _ => Err(self.error("expected a real exponent")),
        }
    }
}

fn ion_factor(name: &str, count: f64) -> String {
    if count == 1.0 {
        name.to_string()
    } else {
        format!("{name}^{count}")
    }
}

/// Writes a model in the grammar accepted by [`parse_expression`]. Ions with
/// a zero ionic count appear as `name^0` so their position is kept.
pub fn render_expression(model: &CountModel) -> String {
    let ions = model.ions();
    let mut parts: Vec<String> = ions
        .iter()
        .zip(model.ionic_counts())
        .map(|(name, a)| ion_factor(name, *a))
        .collect();
    for (p, b) in model.patterns().iter().zip(model.unionic_counts()) {
        let sum: Vec<&str> = p.iter_ones().map(|i| ions[i].as_str()).collect();
        let form = format!("({})", sum.join("+"));
        parts.push(if *b == 1.0 {
            form
        } else {
            format!("{form}^{b}")
        });
    }
    parts.join(" * ")
}
