//! Text syntax for polynomials, vector fields, forms and integrals.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (('*' | '/' | juxtaposition) factor)*
//! factor   := atom ('^' exponent)*          exponent on polynomials
//!           | atom ('^' atom)*              wedge on forms
//! atom     := integer | z<k> | z{k} | dz<k> | d/dz<k> | parameter | '(' expr ')'
//! integral := ifactor (('*' | '/' | juxtaposition) ifactor)*
//! ifactor  := 'exp' '(' expr ')' | atom ['^' exponent]
//! ```
//!
//! Division is by nonzero constants, except inside integrals where
//! `(A/B)^e` and `exp(H/K)` take rational functions.

mod lexer;
mod parser;

use std::collections::BTreeMap;

use crate::exterior::{KForm, VField};
use crate::foliation::{FolError, LogExpIntegral};
use crate::symcore::{Poly, Rat};

use parser::{IFactor, Parser, Val};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier '{0}'")]
    UnknownIdent(String),
    #[error("variable z{index} outside z{first}..z{}", first + nvars - 1)]
    VarOutOfRange { index: usize, first: usize, nvars: usize },
    #[error("negative exponent on a polynomial")]
    NegativeExponent,
    #[error("division by a non-constant")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    Type(String),
    #[error("invalid integral: {0}")]
    Integral(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// Ambient ring and parameter values for parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub nvars: usize,
    /// Name index of the first variable; `z{first_var}` is variable 0.
    pub first_var: usize,
    pub params: BTreeMap<String, Rat>,
}

impl Context {
    pub fn new(nvars: usize) -> Self {
        Context { nvars, first_var: 0, params: BTreeMap::new() }
    }

    pub fn with_first_var(mut self, first: usize) -> Self {
        self.first_var = first;
        self
    }

    pub fn with_param(mut self, name: impl Into<String>, value: Rat) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn with_params(mut self, params: impl IntoIterator<Item = (String, Rat)>) -> Self {
        self.params.extend(params);
        self
    }
}

fn parse_val(text: &str, ctx: &Context, ratios: bool) -> Result<Val, ParseError> {
    let mut p = Parser::new(lexer::lex(text)?, ctx, ratios);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

fn type_err(kind: &str, want: &str) -> ParseError {
    ParseError { line: 1, col: 1, kind: ParseErrorKind::Type(format!("expected a {want}, found a {kind}")) }
}

pub fn parse_poly(text: &str, ctx: &Context) -> Result<Poly, ParseError> {
    match parse_val(text, ctx, false)? {
        Val::Poly(p) => Ok(p),
        Val::Field(_) => Err(type_err("vector field", "polynomial")),
        Val::Form(_) => Err(type_err("form", "polynomial")),
        Val::Ratio(..) => Err(type_err("rational function", "polynomial")),
    }
}

/// A constant expression over the parameters, e.g. `-a-b-c` or `2*(k-1)`.
pub fn parse_rat(text: &str, ctx: &Context) -> Result<Rat, ParseError> {
    let p = parse_poly(text, &Context { nvars: ctx.nvars.max(1), ..ctx.clone() })?;
    p.constant_value().ok_or_else(|| type_err("polynomial", "constant"))
}

pub fn parse_field(text: &str, ctx: &Context) -> Result<VField, ParseError> {
    match parse_val(text, ctx, false)? {
        Val::Field(f) => Ok(f),
        Val::Poly(p) if p.is_zero() => Ok(VField::zero(ctx.nvars)),
        Val::Poly(_) => Err(type_err("polynomial", "vector field")),
        Val::Form(_) => Err(type_err("form", "vector field")),
        Val::Ratio(..) => Err(type_err("rational function", "vector field")),
    }
}

/// A polynomial parses as a 0-form.
pub fn parse_form(text: &str, ctx: &Context) -> Result<KForm, ParseError> {
    match parse_val(text, ctx, false)? {
        Val::Form(w) => Ok(w),
        Val::Poly(p) => Ok(KForm::from_poly(p)),
        Val::Field(_) => Err(type_err("vector field", "form")),
        Val::Ratio(..) => Err(type_err("rational function", "form")),
    }
}

/// `prod (A_k/B_k)^{e_k} * exp(H/K)`; several `exp` factors are summed.
pub fn parse_integral(text: &str, ctx: &Context) -> Result<LogExpIntegral, ParseError> {
    let mut p = Parser::new(lexer::lex(text)?, ctx, true);
    let factors = p.integral()?;
    p.finish()?;
    let n = ctx.nvars;
    let mut logs: Vec<(Poly, Rat)> = Vec::new();
    let mut exp: Option<(Poly, Poly)> = None;
    for f in factors {
        match f {
            IFactor::Pow(a, b, e) => {
                logs.push((a, e.clone()));
                logs.push((b, -e));
            }
            IFactor::Exp(h, k) => {
                if k.is_zero() {
                    return Err(ParseError { line: 1, col: 1, kind: ParseErrorKind::DivisionByZero });
                }
                exp = Some(match exp {
                    None => (h, k),
                    Some((h0, k0)) => (&(&h0 * &k) + &(&h * &k0), &k0 * &k),
                });
            }
        }
    }
    let exp = exp.filter(|(h, _)| !h.is_zero());
    LogExpIntegral::new(n, logs, exp).map_err(|e: FolError| ParseError {
        line: 1,
        col: 1,
        kind: ParseErrorKind::Integral(e.to_string()),
    })
}

#[cfg(test)]
mod tests;
