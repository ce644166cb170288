//! Recursive-descent parser for scalar expressions:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | atom
//! atom  := integer | name | "(" expr ")"
//! ```
//!
//! A divisor must reduce to a nonzero rational constant.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ParamSet, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ScalarError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((start, Token::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Name(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or(c);
                return Err(ScalarError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    params: &'a ParamSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ScalarError> {
        Err(ScalarError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let divisor = self.unary()?;
                    let value: Rational = divisor
                        .as_constant()
                        .ok_or(ScalarError::NonConstantDivisor(at))?;
                    if value.is_zero() {
                        return Err(ScalarError::DivisionByZero(at));
                    }
                    acc = acc.div_rational(&value);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return self.syntax("unexpected end of expression");
        };
        self.pos += 1;
        match tok {
            Token::Int(n) => Ok(Scalar::constant(Rational::from_integer(n))),
            Token::Name(name) => self.params.var(&name),
            Token::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.syntax("expected `)`"),
                }
            }
            other => {
                self.pos -= 1;
                self.syntax(format!("unexpected token {other:?}"))
            }
        }
    }
}

/// Parse an expression over the declared parameters into canonical form.
pub fn parse_scalar(text: &str, params: &ParamSet) -> Result<Scalar, ScalarError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        params,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.syntax("trailing input");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ParamSet {
        ParamSet::new(["l1", "l3", "m1"]).unwrap()
    }

    #[test]
    fn simple_expressions() {
        let ps = params();
        assert_eq!(
            parse_scalar("2*m1", &ps).unwrap(),
            Scalar::from_int(2) * Scalar::var(2)
        );
        assert!(parse_scalar("0", &ps).unwrap().is_zero());
        let half = parse_scalar("(l1+l3)/2", &ps).unwrap();
        assert_eq!(
            half,
            Scalar::frac(1, 2) * Scalar::var(0) + Scalar::frac(1, 2) * Scalar::var(1)
        );
    }

    #[test]
    fn precedence_and_unary_minus() {
        let ps = params();
        let s = parse_scalar("1 - 2*3 + -(4 - 1)/3", &ps).unwrap();
        assert_eq!(s, Scalar::from_int(-6));
        assert_eq!(
            parse_scalar("1/2*l1", &ps).unwrap(),
            Scalar::frac(1, 2) * Scalar::var(0)
        );
    }

    #[test]
    fn errors() {
        let ps = params();
        assert_eq!(
            parse_scalar("l2 + 1", &ps),
            Err(ScalarError::UndeclaredName("l2".into()))
        );
        assert_eq!(
            parse_scalar("1/l1", &ps),
            Err(ScalarError::NonConstantDivisor(2))
        );
        assert_eq!(
            parse_scalar("m1/(1-1)", &ps),
            Err(ScalarError::DivisionByZero(3))
        );
        assert!(matches!(
            parse_scalar("2 *", &ps),
            Err(ScalarError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_scalar("(l1", &ps),
            Err(ScalarError::Syntax { .. })
        ));
        assert!(matches!(
            parse_scalar("l1 l3", &ps),
            Err(ScalarError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_scalar("2^3", &ps),
            Err(ScalarError::Syntax { pos: 1, .. })
        ));
    }
}
