//! Recursive-descent parser for the grammar in the module docs.

use super::ast::{BinOp, Expr, Func};
use crate::iteration::IterCount;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use thiserror::Error;

/// Syntax error with the byte offset it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

const RESERVED: [&str; 8] = ["I", "i", "inf", "sin", "cos", "exp", "abs", "sqrt"];

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Equals,
    Comma,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(s) => format!("number `{s}`"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::LBracket => "`[`".into(),
            Token::RBracket => "`]`".into(),
            Token::Equals => "`=`".into(),
            Token::Comma => "`,`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let start = pos;
        let c = bytes[pos];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                pos += 1;
                continue;
            }
            b'+' => tokens.push((Token::Plus, start)),
            b'-' => tokens.push((Token::Minus, start)),
            b'*' => tokens.push((Token::Star, start)),
            b'/' => tokens.push((Token::Slash, start)),
            b'^' => tokens.push((Token::Caret, start)),
            b'(' => tokens.push((Token::LParen, start)),
            b')' => tokens.push((Token::RParen, start)),
            b'[' => tokens.push((Token::LBracket, start)),
            b']' => tokens.push((Token::RBracket, start)),
            b'=' => tokens.push((Token::Equals, start)),
            b',' => tokens.push((Token::Comma, start)),
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'.' {
                    pos += 1;
                    if pos >= bytes.len() || !bytes[pos].is_ascii_digit() {
                        return Err(ParseError {
                            pos,
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                if pos < bytes.len() && (bytes[pos] | 0x20) == b'e' {
                    let mark = pos;
                    pos += 1;
                    if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                        pos += 1;
                    }
                    if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                    } else {
                        // Not an exponent after all; `2e` lexes as `2` `e`.
                        pos = mark;
                    }
                }
                tokens.push((Token::Number(src[start..pos].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push((Token::Ident(src[start..pos].to_string()), start));
                continue;
            }
            _ => {
                let c = src[start..].chars().next().expect("start is a char boundary");
                return Err(ParseError {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        pos += 1;
    }
    tokens.push((Token::Eof, src.len()));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.index].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.index].1
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.index].0.clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos(),
            message: message.into(),
        }
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                token.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.advance();
            return Ok(Expr::negate(self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.advance();
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Token::Number(text) => {
                self.advance();
                Ok(Expr::Num(number_literal(&text)))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) => match name.as_str() {
                "i" => {
                    self.advance();
                    Ok(Expr::Num(Scalar::imaginary_unit()))
                }
                "I" => self.iteral(),
                "inf" => Err(self.error("`inf` is only valid as an iteration count")),
                _ => {
                    if let Some(func) = Func::from_name(&name) {
                        self.advance();
                        self.expect(Token::LParen)?;
                        let arg = self.expr()?;
                        self.expect(Token::RParen)?;
                        Ok(Expr::call(func, arg))
                    } else {
                        self.advance();
                        Ok(Expr::var(name))
                    }
                }
            },
            other => Err(self.error(format!(
                "expected an expression, found {}",
                other.describe()
            ))),
        }
    }

    /// `I [ ident = expr , n = count ] ( expr )`; the leading `I` is at the
    /// current position.
    fn iteral(&mut self) -> Result<Expr, ParseError> {
        self.advance();
        self.expect(Token::LBracket)?;
        let var = match self.advance() {
            Token::Ident(name) if !RESERVED.contains(&name.as_str()) => name,
            Token::Ident(name) => {
                self.index -= 1;
                return Err(self.error(format!("`{name}` is reserved and cannot be bound")));
            }
            other => {
                self.index -= 1;
                return Err(self.error(format!(
                    "expected a variable name, found {}",
                    other.describe()
                )));
            }
        };
        self.expect(Token::Equals)?;
        let init = self.expr()?;
        self.expect(Token::Comma)?;
        match self.advance() {
            Token::Ident(n) if n == "n" => {}
            other => {
                self.index -= 1;
                return Err(self.error(format!("expected `n=`, found {}", other.describe())));
            }
        }
        self.expect(Token::Equals)?;
        let count = match self.advance() {
            Token::Ident(word) if word == "inf" => IterCount::Unbounded,
            Token::Number(digits) if !digits.contains(['.', 'e', 'E']) => {
                let n: u64 = digits.parse().map_err(|_| {
                    self.index -= 1;
                    self.error("iteration count does not fit in 64 bits")
                })?;
                IterCount::Finite(n)
            }
            other => {
                self.index -= 1;
                return Err(self.error(format!(
                    "expected an iteration count or `inf`, found {}",
                    other.describe()
                )));
            }
        };
        self.expect(Token::RBracket)?;
        self.expect(Token::LParen)?;
        let body = self.expr()?;
        self.expect(Token::RParen)?;
        Ok(Expr::iteral(var, init, count, body))
    }
}

fn number_literal(text: &str) -> Scalar {
    if text.contains(['.', 'e', 'E']) {
        Scalar::Real(text.parse().expect("lexer guarantees a valid float"))
    } else {
        Scalar::Int(text.parse::<BigInt>().expect("lexer guarantees digits"))
    }
}

/// Parse a complete expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        tokens: lex(src)?,
        index: 0,
    };
    let expr = parser.expr()?;
    parser.expect(Token::Eof)?;
    Ok(expr)
}
