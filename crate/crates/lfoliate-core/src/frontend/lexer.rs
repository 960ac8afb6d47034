use num_bigint::BigInt;

use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Num(BigInt),
    Var(usize),
    Dz(usize),
    DDz(usize),
    Ident(String),
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, col, kind }
    }

    /// Index after `z`: decimal digits or `{digits}`.
    fn index(&mut self, line: usize, col: usize) -> Result<usize, ParseError> {
        let braced = self.peek() == Some('{');
        if braced {
            self.bump();
        }
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        if braced {
            if self.peek() != Some('}') {
                return Err(self.err(self.line, self.col, ParseErrorKind::Syntax("expected '}'".into())));
            }
            self.bump();
        }
        s.parse().map_err(|_| self.err(line, col, ParseErrorKind::Syntax("expected a variable index".into())))
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.peek_at(k) == Some(c))
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(super) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: src.chars().collect(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            cur.bump();
            out.push(Token { tok, line, col });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                s.push(d);
                cur.bump();
            }
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), line, col });
            continue;
        }
        if !is_ident_char(c) {
            return Err(cur.err(line, col, ParseErrorKind::Syntax(format!("unexpected character '{c}'"))));
        }
        // d/dz<k>, checked before reading a word so a parameter named `d` still lexes
        if cur.starts_with("d/dz") {
            for _ in 0..4 {
                cur.bump();
            }
            let k = cur.index(line, col)?;
            out.push(Token { tok: Tok::DDz(k), line, col });
            continue;
        }
        let next_is_index = |k: usize| cur.peek_at(k).is_some_and(|c| c.is_ascii_digit() || c == '{');
        if cur.starts_with("dz") && next_is_index(2) {
            cur.bump();
            cur.bump();
            let k = cur.index(line, col)?;
            out.push(Token { tok: Tok::Dz(k), line, col });
            continue;
        }
        if c == 'z' && next_is_index(1) {
            cur.bump();
            let k = cur.index(line, col)?;
            out.push(Token { tok: Tok::Var(k), line, col });
            continue;
        }
        let mut word = String::new();
        while let Some(d) = cur.peek().filter(|&d| is_ident_char(d)) {
            word.push(d);
            cur.bump();
        }
        let tok = if word == "exp" { Tok::Exp } else { Tok::Ident(word) };
        out.push(Token { tok, line, col });
    }
    out.push(Token { tok: Tok::End, line: cur.line, col: cur.col });
    Ok(out)
}
