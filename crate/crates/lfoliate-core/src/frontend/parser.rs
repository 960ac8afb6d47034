use num_traits::{Signed, Zero};

use crate::exterior::{KForm, VField};
use crate::symcore::{Poly, Rat};

use super::lexer::{Tok, Token};
use super::{Context, ParseError, ParseErrorKind};

/// Intermediate value; `Ratio` only appears where division by a
/// non-constant is allowed (integrals).
#[derive(Clone, Debug)]
pub(super) enum Val {
    Poly(Poly),
    Field(VField),
    Form(KForm),
    Ratio(Poly, Poly),
}

impl Val {
    fn kind(&self) -> &'static str {
        match self {
            Val::Poly(_) => "polynomial",
            Val::Field(_) => "vector field",
            Val::Form(_) => "form",
            Val::Ratio(..) => "rational function",
        }
    }
}

/// Product factor of an integral: `base^exponent` or `exp(H/K)`.
pub(super) enum IFactor {
    Pow(Poly, Poly, Rat),
    Exp(Poly, Poly),
}

pub(super) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ctx: &'a Context,
    ratios: bool,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(toks: Vec<Token>, ctx: &'a Context, ratios: bool) -> Self {
        Parser { toks, pos: 0, ctx, ratios }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, (line, col): (usize, usize), kind: ParseErrorKind) -> ParseError {
        ParseError { line, col, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.here(), ParseErrorKind::Syntax(msg.into()))
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    pub fn finish(&self) -> PResult<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.syntax("unexpected trailing input")),
        }
    }

    fn n(&self) -> usize {
        self.ctx.nvars
    }

    fn var_index(&self, k: usize, at: (usize, usize)) -> PResult<usize> {
        let f = self.ctx.first_var;
        if k < f || k - f >= self.n() {
            return Err(self.err_at(at, ParseErrorKind::VarOutOfRange { index: k, first: f, nvars: self.n() }));
        }
        Ok(k - f)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Num(_) | Tok::Var(_) | Tok::Dz(_) | Tok::DDz(_) | Tok::Ident(_) | Tok::LParen | Tok::Exp
        )
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    pub fn expr(&mut self) -> PResult<Val> {
        let at = self.here();
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                let t = self.term()?;
                self.neg(t)
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let op = self.peek().clone();
            if op != Tok::Plus && op != Tok::Minus {
                return Ok(acc);
            }
            self.bump();
            let rhs = self.term()?;
            let rhs = if op == Tok::Minus { self.neg(rhs) } else { rhs };
            acc = self.add(acc, rhs, at)?;
        }
    }

    fn neg(&self, v: Val) -> Val {
        let m1 = -Rat::from_integer(1.into());
        match v {
            Val::Poly(p) => Val::Poly(-p),
            Val::Field(f) => Val::Field(f.scale(&m1)),
            Val::Form(w) => Val::Form(w.scale(&m1)),
            Val::Ratio(a, b) => Val::Ratio(-a, b),
        }
    }

    fn add(&self, a: Val, b: Val, at: (usize, usize)) -> PResult<Val> {
        let mismatch = |a: &Val, b: &Val| {
            self.err_at(at, ParseErrorKind::Type(format!("cannot add {} and {}", a.kind(), b.kind())))
        };
        Ok(match (a, b) {
            (Val::Poly(p), Val::Poly(q)) => Val::Poly(&p + &q),
            (Val::Field(f), Val::Field(g)) => Val::Field(f.add(&g)),
            (Val::Form(v), Val::Form(w)) => {
                if v.degree() != w.degree() {
                    return Err(mismatch(&Val::Form(v), &Val::Form(w)));
                }
                Val::Form(v.try_add(&w).expect("same shape"))
            }
            // a zero polynomial is neutral for every kind
            (Val::Poly(p), x) | (x, Val::Poly(p)) if p.is_zero() => x,
            (Val::Ratio(a, b), Val::Ratio(c, d)) => Val::Ratio(&(&a * &d) + &(&c * &b), &b * &d),
            (Val::Ratio(a, b), Val::Poly(p)) | (Val::Poly(p), Val::Ratio(a, b)) => Val::Ratio(&a + &(&p * &b), b),
            (x, y) => return Err(mismatch(&x, &y)),
        })
    }

    /// term := factor (('*' | '/' | juxtaposition) factor)*
    fn term(&mut self) -> PResult<Val> {
        let mut acc = self.factor()?;
        loop {
            let at = self.here();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = self.mul(acc, rhs, at)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = self.div(acc, rhs, at)?;
                }
                _ if self.starts_atom() => {
                    let rhs = self.factor()?;
                    acc = self.mul(acc, rhs, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn mul(&self, a: Val, b: Val, at: (usize, usize)) -> PResult<Val> {
        Ok(match (a, b) {
            (Val::Poly(p), Val::Poly(q)) => Val::Poly(&p * &q),
            (Val::Poly(p), Val::Field(f)) | (Val::Field(f), Val::Poly(p)) => Val::Field(f.mul_poly(&p)),
            (Val::Poly(p), Val::Form(w)) | (Val::Form(w), Val::Poly(p)) => Val::Form(w.mul_poly(&p)),
            (Val::Ratio(a, b), Val::Ratio(c, d)) => Val::Ratio(&a * &c, &b * &d),
            (Val::Ratio(a, b), Val::Poly(p)) | (Val::Poly(p), Val::Ratio(a, b)) => Val::Ratio(&a * &p, b),
            (x, y) => {
                return Err(
                    self.err_at(at, ParseErrorKind::Type(format!("cannot multiply {} by {}", x.kind(), y.kind())))
                )
            }
        })
    }

    fn div(&self, a: Val, b: Val, at: (usize, usize)) -> PResult<Val> {
        let c = match &b {
            Val::Poly(p) => p.constant_value(),
            _ => None,
        };
        match c {
            Some(c) if c.is_zero() => Err(self.err_at(at, ParseErrorKind::DivisionByZero)),
            Some(c) => {
                let inv = c.recip();
                Ok(match a {
                    Val::Poly(p) => Val::Poly(p.scale(&inv)),
                    Val::Field(f) => Val::Field(f.scale(&inv)),
                    Val::Form(w) => Val::Form(w.scale(&inv)),
                    Val::Ratio(x, y) => Val::Ratio(x.scale(&inv), y),
                })
            }
            None if self.ratios => match (a, b) {
                (Val::Poly(p), Val::Poly(q)) => Ok(Val::Ratio(p, q)),
                (Val::Ratio(x, y), Val::Poly(q)) => Ok(Val::Ratio(x, &y * &q)),
                (Val::Poly(p), Val::Ratio(x, y)) => Ok(Val::Ratio(&p * &y, x)),
                (Val::Ratio(x, y), Val::Ratio(u, v)) => Ok(Val::Ratio(&x * &v, &y * &u)),
                _ => Err(self.err_at(at, ParseErrorKind::NonConstantDivisor)),
            },
            None => Err(self.err_at(at, ParseErrorKind::NonConstantDivisor)),
        }
    }

    /// factor := atom ('^' exponent | '^' atom for wedge)*
    fn factor(&mut self) -> PResult<Val> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            let at = self.here();
            self.bump();
            base = match base {
                Val::Form(w) => {
                    let rhs = self.atom()?;
                    match rhs {
                        Val::Form(v) => {
                            Val::Form(w.wedge(&v).map_err(|e| self.err_at(at, ParseErrorKind::Type(e.to_string())))?)
                        }
                        other => {
                            return Err(self.err_at(
                                at,
                                ParseErrorKind::Type(format!("cannot wedge a form with a {}", other.kind())),
                            ))
                        }
                    }
                }
                Val::Poly(p) => {
                    let e = self.exponent()?;
                    Val::Poly(p.pow(self.nonneg_int(&e, at)?))
                }
                Val::Ratio(a, b) => {
                    let e = self.exponent()?;
                    let k = self.nonneg_int(&e, at)?;
                    Val::Ratio(a.pow(k), b.pow(k))
                }
                Val::Field(_) => {
                    return Err(self.err_at(at, ParseErrorKind::Type("cannot raise a vector field to a power".into())))
                }
            };
        }
        Ok(base)
    }

    fn nonneg_int(&self, e: &Rat, at: (usize, usize)) -> PResult<u32> {
        if e.is_negative() {
            return Err(self.err_at(at, ParseErrorKind::NegativeExponent));
        }
        if !e.is_integer() {
            return Err(self.err_at(at, ParseErrorKind::Type(format!("non-integer exponent {e}"))));
        }
        e.to_integer().try_into().map_err(|_| self.err_at(at, ParseErrorKind::Type("exponent too large".into())))
    }

    /// exponent := ['-'] number | parameter | '(' constant expr ')'
    fn exponent(&mut self) -> PResult<Rat> {
        let at = self.here();
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let v = match self.peek().clone() {
            Tok::Num(k) => {
                self.bump();
                Rat::from_integer(k)
            }
            Tok::Ident(_) | Tok::LParen => match self.atom()? {
                Val::Poly(p) => p
                    .constant_value()
                    .ok_or_else(|| self.err_at(at, ParseErrorKind::Type("exponent must be constant".into())))?,
                other => {
                    return Err(self.err_at(at, ParseErrorKind::Type(format!("exponent cannot be a {}", other.kind()))))
                }
            },
            _ => return Err(self.syntax("expected an exponent")),
        };
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> PResult<Val> {
        let at = self.here();
        let n = self.n();
        match self.bump() {
            Tok::Num(k) => Ok(Val::Poly(Poly::constant(n, Rat::from_integer(k)))),
            Tok::Var(k) => Ok(Val::Poly(Poly::var(n, self.var_index(k, at)?))),
            Tok::Dz(k) => Ok(Val::Form(KForm::dz(n, self.var_index(k, at)?))),
            Tok::DDz(k) => Ok(Val::Field(VField::coordinate(n, self.var_index(k, at)?))),
            Tok::Ident(name) => match self.ctx.params.get(&name) {
                Some(v) => Ok(Val::Poly(Poly::constant(n, v.clone()))),
                None => Err(self.err_at(at, ParseErrorKind::UnknownIdent(name))),
            },
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Tok::Exp => {
                Err(self.err_at(at, ParseErrorKind::Type("exp(...) is only allowed as an integral factor".into())))
            }
            Tok::End => Err(self.err_at(at, ParseErrorKind::Syntax("unexpected end of input".into()))),
            t => Err(self.err_at(at, ParseErrorKind::Syntax(format!("unexpected {}", describe(&t))))),
        }
    }

    /// integral := ifactor (('*' | '/' | juxtaposition) ifactor)*
    pub fn integral(&mut self) -> PResult<Vec<IFactor>> {
        let mut out = Vec::new();
        let mut sign = Rat::from_integer(1.into());
        loop {
            let mut f = self.ifactor()?;
            if let IFactor::Pow(_, _, e) = &mut f {
                *e *= &sign;
            }
            if let IFactor::Exp(h, _) = &mut f {
                if sign.is_negative() {
                    *h = -h.clone();
                }
            }
            out.push(f);
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    sign = Rat::from_integer(1.into());
                }
                Tok::Slash => {
                    self.bump();
                    sign = Rat::from_integer((-1).into());
                }
                _ if self.starts_atom() => sign = Rat::from_integer(1.into()),
                _ => return Ok(out),
            }
        }
    }

    /// ifactor := 'exp' '(' expr ')' | atom ['^' exponent]
    fn ifactor(&mut self) -> PResult<IFactor> {
        let at = self.here();
        if *self.peek() == Tok::Exp {
            self.bump();
            self.expect(Tok::LParen, "'(' after exp")?;
            let v = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            return match v {
                Val::Poly(h) => Ok(IFactor::Exp(h, Poly::one(self.n()))),
                Val::Ratio(h, k) => Ok(IFactor::Exp(h, k)),
                other => Err(self.err_at(at, ParseErrorKind::Type(format!("exp of a {}", other.kind())))),
            };
        }
        let base = self.atom()?;
        let e = if *self.peek() == Tok::Caret {
            self.bump();
            self.exponent()?
        } else {
            Rat::from_integer(1.into())
        };
        match base {
            Val::Poly(p) => Ok(IFactor::Pow(p, Poly::one(self.n()), e)),
            Val::Ratio(a, b) => Ok(IFactor::Pow(a, b, e)),
            other => {
                Err(self.err_at(at, ParseErrorKind::Type(format!("integral factor cannot be a {}", other.kind()))))
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::RParen => "')'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        other => format!("{other:?}"),
    }
}
