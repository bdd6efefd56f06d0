use std::collections::HashMap;
use std::sync::Arc;

use std::str::FromStr;

use malachite_base::num::arithmetic::traits::Reciprocal;

use super::lexer::{Token, TokenKind};
use super::ParseError;
use crate::exterior::{Alternating, Chart, Variance};
use crate::ring::{Polynomial, Rational};

/// Names visible inside coefficient expressions.
pub(crate) struct Env<'a> {
    pub chart: &'a Arc<Chart>,
    pub functions: &'a HashMap<String, Polynomial>,
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

pub(crate) type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    pub fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, token: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: token.line,
            column: token.column,
            message: message.into(),
            token: token.kind.describe(),
        }
    }

    pub fn expect(&mut self, kind: TokenKind, production: &str) -> PResult<Token> {
        if *self.peek_kind() == kind {
            Ok(self.advance())
        } else {
            Err(self.error(
                self.peek(),
                format!("expected `{}` in {production}", kind.describe()),
            ))
        }
    }

    pub fn expect_ident(&mut self, production: &str) -> PResult<(String, Token)> {
        match self.peek_kind().clone() {
            TokenKind::Ident(s) => Ok((s, self.advance())),
            _ => Err(self.error(self.peek(), format!("expected identifier in {production}"))),
        }
    }

    pub fn expect_int(&mut self, production: &str) -> PResult<(String, Token)> {
        match self.peek_kind().clone() {
            TokenKind::Int(s) => {
                let t = self.advance();
                Ok((s, t))
            }
            _ => Err(self.error(self.peek(), format!("expected integer in {production}"))),
        }
    }

    pub fn skip_newlines(&mut self) {
        while *self.peek_kind() == TokenKind::Newline {
            self.advance();
        }
    }

    pub fn expect_end_of_statement(&mut self, production: &str) -> PResult<()> {
        match self.peek_kind() {
            TokenKind::Newline | TokenKind::Eof => {
                self.advance();
                Ok(())
            }
            _ => Err(self.error(
                self.peek(),
                format!("expected end of line after {production}"),
            )),
        }
    }

    // polyexpr := sum
    // sum      := unary_term (('+' | '-') unary_term)*
    // product  := unary (('*' | '/') unary)*
    // unary    := '-' unary | power
    // power    := atom ('^' INT)?
    // atom     := INT | IDENT | '(' sum ')'
    pub fn polynomial(&mut self, env: &Env) -> PResult<Polynomial> {
        let mut acc = self.product(env)?;
        loop {
            match self.peek_kind() {
                TokenKind::Plus => {
                    self.advance();
                    acc = &acc + &self.product(env)?;
                }
                TokenKind::Minus => {
                    self.advance();
                    acc = &acc - &self.product(env)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self, env: &Env) -> PResult<Polynomial> {
        let mut acc = self.unary(env)?;
        loop {
            match self.peek_kind() {
                TokenKind::Star => {
                    self.advance();
                    acc = &acc * &self.unary(env)?;
                }
                TokenKind::Slash => {
                    let slash = self.advance();
                    let divisor_tok = self.peek().clone();
                    let divisor = self.unary(env)?;
                    let c = divisor.constant_value().ok_or_else(|| {
                        self.error(
                            &divisor_tok,
                            "divisor in polynomial expression must be a constant",
                        )
                    })?;
                    if c == 0u32 {
                        return Err(self.error(&slash, "division by zero"));
                    }
                    acc = acc.scale(&c.reciprocal());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self, env: &Env) -> PResult<Polynomial> {
        if *self.peek_kind() == TokenKind::Minus {
            self.advance();
            return Ok(-self.unary(env)?);
        }
        self.power(env)
    }

    fn power(&mut self, env: &Env) -> PResult<Polynomial> {
        let base = self.atom(env)?;
        if *self.peek_kind() == TokenKind::Caret {
            self.advance();
            let (e, tok) = self.expect_int("power exponent")?;
            let e: u32 = e
                .parse()
                .map_err(|_| self.error(&tok, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self, env: &Env) -> PResult<Polynomial> {
        let n = env.chart.dimension();
        let tok = self.peek().clone();
        match &tok.kind {
            TokenKind::Int(s) => {
                self.advance();
                let v = Rational::from_str(s).expect("lexer yields digits");
                Ok(Polynomial::constant(n, v))
            }
            TokenKind::Ident(name) => {
                self.advance();
                if let Some(i) = env.chart.index_of(name) {
                    return Ok(env.chart.coordinate(i).expect("index from chart"));
                }
                env.functions.get(name).cloned().ok_or_else(|| {
                    self.error(&tok, format!("unknown coordinate or function `{name}`"))
                })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.polynomial(env)?;
                self.expect(TokenKind::RParen, "parenthesized polynomial")?;
                Ok(inner)
            }
            _ => Err(self.error(
                &tok,
                "expected number, coordinate, function or `(` in polynomial expression",
            )),
        }
    }

    // tensorexpr := '-'? term (('+' | '-') term)*
    // term       := '(' polyexpr ')' ('*' wedge)? | wedge
    // wedge      := BASIS ('^' BASIS)*
    pub fn tensor<V: Variance>(&mut self, env: &Env) -> PResult<Alternating<V>> {
        let leading_minus = *self.peek_kind() == TokenKind::Minus;
        if leading_minus {
            self.advance();
        }
        let (degree, mut acc) = self.tensor_term::<V>(env)?;
        if leading_minus {
            acc = -&acc;
        }
        loop {
            let negate = match self.peek_kind() {
                TokenKind::Plus => false,
                TokenKind::Minus => true,
                _ => return Ok(acc),
            };
            self.advance();
            let term_start = self.peek().clone();
            let (d, term) = self.tensor_term::<V>(env)?;
            if d != degree {
                return Err(self.error(
                    &term_start,
                    format!("term of degree {d} in a sum of degree-{degree} terms"),
                ));
            }
            acc = if negate { &acc - &term } else { &acc + &term };
        }
    }

    fn tensor_term<V: Variance>(&mut self, env: &Env) -> PResult<(usize, Alternating<V>)> {
        let n = env.chart.dimension();
        let (coeff, indices) = if *self.peek_kind() == TokenKind::LParen {
            self.advance();
            let c = self.polynomial(env)?;
            self.expect(TokenKind::RParen, "coefficient")?;
            if *self.peek_kind() == TokenKind::Star {
                self.advance();
                (c, self.wedge::<V>(env)?)
            } else {
                (c, Vec::new())
            }
        } else {
            (Polynomial::one(n), self.wedge::<V>(env)?)
        };
        let degree = indices.len();
        let t = Alternating::from_components(env.chart.clone(), degree, [(indices, coeff)])
            .map_err(|e| self.error(self.peek(), e.to_string()))?;
        Ok((degree, t))
    }

    fn wedge<V: Variance>(&mut self, env: &Env) -> PResult<Vec<usize>> {
        let mut indices = vec![self.basis::<V>(env)?];
        while *self.peek_kind() == TokenKind::Caret {
            self.advance();
            indices.push(self.basis::<V>(env)?);
        }
        Ok(indices)
    }

    fn basis<V: Variance>(&mut self, env: &Env) -> PResult<usize> {
        let tok = self.peek().clone();
        let expected = format!("expected basis element `{}<k>` in wedge", V::BASIS);
        let TokenKind::Ident(name) = &tok.kind else {
            return Err(self.error(&tok, expected));
        };
        let (prefix, digits) =
            split_basis(name).ok_or_else(|| self.error(&tok, expected.clone()))?;
        if prefix != V::BASIS {
            return Err(self.error(
                &tok,
                format!("basis element `{name}` has the wrong kind here; {expected}"),
            ));
        }
        let k: usize = digits
            .parse()
            .map_err(|_| self.error(&tok, "basis index too large"))?;
        if k == 0 || k > env.chart.dimension() {
            return Err(self.error(
                &tok,
                format!("basis index {k} outside 1..={}", env.chart.dimension()),
            ));
        }
        self.advance();
        Ok(k - 1)
    }
}

/// `dx12` -> `("dx", "12")`, `e3` -> `("e", "3")`.
fn split_basis(name: &str) -> Option<(&str, &str)> {
    let digits_at = name.find(|c: char| c.is_ascii_digit())?;
    let (prefix, digits) = name.split_at(digits_at);
    let is_basis = (prefix == "dx" || prefix == "e") && digits.chars().all(|c| c.is_ascii_digit());
    is_basis.then_some((prefix, digits))
}
