//! Line-oriented text format for Sullivan models.
//!
//! ```text
//! # complex projective 3-space
//! model CP3
//! gen x 2
//! gen y 7
//! d y = x^4
//! ```
//!
//! Polynomials use rational coefficients, `*`, `^`, `+`, `-` and
//! parentheses. Generators without a `d` line are closed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{AlgebraError, Degree, FreeAlgebra, Generator, Polynomial, SullivanModel};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl DslError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        DslError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

/// Tokens with their 1-based column.
fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(DslError::new(
                line,
                col,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a Arc<FreeAlgebra>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, message: impl Into<String>) -> DslError {
        DslError::new(self.line, self.col(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, DslError> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, DslError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, DslError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| DslError::new(self.line, col, "exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, DslError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut value = Q::from_integer(n);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            value /= Q::from_integer(d);
                        }
                        Some(Tok::Num(_)) => return Err(self.err("zero denominator")),
                        _ => return Err(self.err("expected an integer denominator")),
                    }
                }
                Ok(Polynomial::constant(self.alg, value))
            }
            Some(Tok::Ident(name)) => {
                let col = self.col();
                self.pos += 1;
                self.alg.var(&name).map_err(|_| {
                    DslError::new(self.line, col, format!("unknown generator `{name}`"))
                })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn parse_expression(
    alg: &Arc<FreeAlgebra>,
    text: &str,
    line: usize,
    col0: usize,
) -> Result<Polynomial, DslError> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser {
        alg,
        toks,
        pos: 0,
        line,
        end_col: col0 + text.chars().count(),
    };
    let value = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(value)
}

/// Parses a single polynomial over `alg`.
pub fn parse_polynomial(alg: &Arc<FreeAlgebra>, text: &str) -> Result<Polynomial, DslError> {
    parse_expression(alg, text, 1, 1)
}

/// Parses a model document and validates degrees and `d² = 0`.
pub fn parse_model(text: &str) -> Result<SullivanModel, DslError> {
    let mut name: Option<String> = None;
    let mut gens: Vec<Generator> = Vec::new();
    let mut gen_lines: Vec<usize> = Vec::new();
    // (line, column of expression, generator name, column of name, expression)
    let mut diffs: Vec<(usize, usize, String, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let col = |offset: usize| indent + offset + 1;
        let (keyword, rest) = trimmed
            .split_once(char::is_whitespace)
            .unwrap_or((trimmed, ""));
        let rest_offset = trimmed.len() - rest.len();
        match keyword {
            "model" => {
                let n = rest.trim();
                if n.is_empty() {
                    return Err(DslError::new(line, col(rest_offset), "missing model name"));
                }
                if name.is_some() {
                    return Err(DslError::new(line, col(0), "duplicate `model` line"));
                }
                name = Some(n.to_string());
            }
            "gen" => {
                if !diffs.is_empty() {
                    return Err(DslError::new(
                        line,
                        col(0),
                        "generators must be declared before differentials",
                    ));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(DslError::new(
                        line,
                        col(rest_offset),
                        "expected `gen NAME DEGREE`",
                    ));
                }
                let degree: Degree = parts[1].parse().map_err(|_| {
                    DslError::new(
                        line,
                        col(rest_offset),
                        format!("invalid degree `{}`", parts[1]),
                    )
                })?;
                gens.push(Generator::new(parts[0], degree));
                gen_lines.push(line);
            }
            "d" => {
                let Some((lhs, rhs)) = rest.split_once('=') else {
                    return Err(DslError::new(
                        line,
                        col(rest_offset),
                        "expected `d NAME = POLYNOMIAL`",
                    ));
                };
                let gname = lhs.trim();
                let name_col = col(rest_offset + (lhs.len() - lhs.trim_start().len()));
                let expr_col = col(rest_offset + lhs.len() + 1);
                diffs.push((line, expr_col, gname.to_string(), name_col, rhs.to_string()));
            }
            other => {
                return Err(DslError::new(
                    line,
                    col(0),
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    let name = name.ok_or_else(|| DslError::new(1, 1, "missing `model NAME` line"))?;
    let alg = FreeAlgebra::new(gens.clone()).map_err(|e| {
        let bad = match &e {
            AlgebraError::DegreeTooLow(n, _)
            | AlgebraError::DuplicateGenerator(n)
            | AlgebraError::InvalidName(n) => gens.iter().rposition(|g| &g.name == n),
            _ => None,
        };
        DslError::new(bad.map(|i| gen_lines[i]).unwrap_or(1), 1, e.to_string())
    })?;

    let mut differential: Vec<Polynomial> =
        (0..alg.len()).map(|_| Polynomial::zero(&alg)).collect();
    let mut d_lines = vec![0usize; alg.len()];
    for (line, expr_col, gname, name_col, expr) in &diffs {
        let i = alg.index_of(gname).ok_or_else(|| {
            DslError::new(*line, *name_col, format!("unknown generator `{gname}`"))
        })?;
        if d_lines[i] != 0 {
            return Err(DslError::new(
                *line,
                *name_col,
                format!("duplicate differential for `{gname}`"),
            ));
        }
        let p = parse_expression(&alg, expr, *line, *expr_col)?;
        let expected = alg.degree(i) + 1;
        if !p.is_zero() && p.degree() != Some(expected) {
            let found = if p.is_homogeneous() {
                format!("degree {}", p.degree().unwrap_or(0))
            } else {
                "an inhomogeneous polynomial".to_string()
            };
            return Err(DslError::new(
                *line,
                *expr_col,
                format!("d({gname}) must have degree {expected}, found {found}"),
            ));
        }
        differential[i] = p;
        d_lines[i] = *line;
    }

    let model = SullivanModel::new_unchecked_d2(name, alg.clone(), differential)
        .map_err(|e| DslError::new(1, 1, e.to_string()))?;
    if let Err(failure) = model.check_d_squared() {
        let i = alg.index_of(&failure.generator).expect("known generator");
        return Err(DslError::new(
            d_lines[i].max(1),
            1,
            format!(
                "d^2 != 0: d(d({})) = {}",
                failure.generator, failure.residue
            ),
        ));
    }
    Ok(model)
}

/// Writes a model in the format read by [`parse_model`].
pub fn print_model(model: &SullivanModel) -> String {
    ModelDisplay(model).to_string()
}

struct ModelDisplay<'a>(&'a SullivanModel);

impl fmt::Display for ModelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        writeln!(f, "model {}", m.name())?;
        for g in m.generators() {
            writeln!(f, "gen {} {}", g.name, g.degree)?;
        }
        for (g, dg) in m.generators().iter().zip(m.differential()) {
            if !dg.is_zero() {
                writeln!(f, "d {} = {}", g.name, dg)?;
            }
        }
        Ok(())
    }
}
