//! A small arithmetic expression language for coefficient fields and
//! conformal factors: decimal literals, the variables `x` and `y`, the
//! constant `pi`, the operators `+ - * / ^` with unary minus, and the
//! functions `sin`, `cos`, `exp`, `log`.
//!
//! `^` is right-associative and binds tighter than unary minus applied to
//! its base, so `-x^2` is `-(x^2)` while `2^-3` is accepted as
//! `2^(-3)`. Evaluation is pure double-precision arithmetic with
//! deterministic error surfaces instead of NaN/infinity values.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Default number of Halton samples per axis used by
/// [`validate_periodicity`] callers that don't pick their own budget.
pub const DEFAULT_PERIODICITY_SAMPLES: u32 = 16;

/// Default relative tolerance for the periodicity check.
pub const DEFAULT_PERIODICITY_TOL: f64 = 1e-9;

/// Maximum grammar nesting depth accepted by the parser (guards the
/// recursive descent, and thereby evaluation and printing, against stack
/// overflow on adversarial input).
const MAX_DEPTH: u32 = 512;

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Built-in functions of one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    /// Natural logarithm.
    Log,
}

/// Parse errors, with 1-based column positions into the source text.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("column {col}: unexpected character `{ch}`")]
    UnexpectedChar { col: usize, ch: char },
    #[error("column {col}: invalid number literal `{text}`")]
    InvalidNumber { col: usize, text: String },
    #[error("column {col}: unknown name `{name}` (expected x, y, pi, sin, cos, exp or log)")]
    UnknownName { col: usize, name: String },
    #[error("column {col}: expected {expected}")]
    Expected { col: usize, expected: &'static str },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("column {col}: trailing input after expression")]
    TrailingInput { col: usize },
    #[error("expression nests too deeply")]
    TooDeep,
}

/// Evaluation errors. All of them are deterministic functions of the
/// expression and the input point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("log of non-positive value {arg}")]
    LogDomain { arg: f64 },
    #[error("{base}^{exponent} is undefined over the reals")]
    PowDomain { base: f64, exponent: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation overflowed to a non-finite value")]
    NonFinite,
}

/// Abstract syntax tree of an expression in the variables `x` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// A literal. The parser only produces finite, non-negative literals
    /// (negative values come wrapped in [`Expression::Neg`]).
    Number(f64),
    X,
    Y,
    Pi,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

impl Expression {
    /// Parses an expression from text.
    pub fn parse(text: &str) -> Result<Expression, ExprError> {
        let tokens = lex(text)?;
        let mut parser = Parser { tokens: &tokens, pos: 0 };
        let expr = parser.expr(0)?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(ExprError::TrailingInput { col: tok.col }),
        }
    }

    /// Evaluates at the point `(x, y)`.
    ///
    /// # Errors
    ///
    /// [`EvalError::LogDomain`] for `log` of a non-positive value,
    /// [`EvalError::PowDomain`] for a negative base with fractional
    /// exponent or `0^negative`, [`EvalError::DivisionByZero`], and
    /// [`EvalError::NonFinite`] when any intermediate value overflows.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expression::Number(n) => *n,
            Expression::X => x,
            Expression::Y => y,
            Expression::Pi => core::f64::consts::PI,
            Expression::Neg(inner) => -inner.eval(x, y)?,
            Expression::Binary(op, lhs, rhs) => {
                let a = lhs.eval(x, y)?;
                let b = rhs.eval(x, y)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(EvalError::PowDomain { base: a, exponent: b });
                        }
                        if a < 0.0 && math::floor(b) != b {
                            return Err(EvalError::PowDomain { base: a, exponent: b });
                        }
                        math::powf(a, b)
                    }
                }
            }
            Expression::Call(func, arg) => {
                let a = arg.eval(x, y)?;
                match func {
                    Func::Sin => math::sin(a),
                    Func::Cos => math::cos(a),
                    Func::Exp => math::exp(a),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(EvalError::LogDomain { arg: a });
                        }
                        math::ln(a)
                    }
                }
            }
        };
        if !v.is_finite() {
            return Err(EvalError::NonFinite);
        }
        Ok(v)
    }

    /// Binding strength used by the pretty-printer; atoms are strongest.
    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expression::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expression::Neg(_) => 3,
            Expression::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }

    /// Writes `self`, parenthesized if it binds weaker than `min_prec`.
    fn write_prec(&self, out: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            out.write_str("(")?;
            self.write_prec(out, 0)?;
            return out.write_str(")");
        }
        match self {
            Expression::Number(n) => write!(out, "{n}"),
            Expression::X => out.write_str("x"),
            Expression::Y => out.write_str("y"),
            Expression::Pi => out.write_str("pi"),
            Expression::Neg(inner) => {
                out.write_str("-")?;
                inner.write_prec(out, 4)
            }
            Expression::Binary(op, lhs, rhs) => {
                let (symbol, left_min, right_min) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    // Right-associative: the left operand must be an atom.
                    BinOp::Pow => ("^", 5, 4),
                };
                lhs.write_prec(out, left_min)?;
                out.write_str(symbol)?;
                rhs.write_prec(out, right_min)
            }
            Expression::Call(func, arg) => {
                out.write_str(match func {
                    Func::Sin => "sin",
                    Func::Cos => "cos",
                    Func::Exp => "exp",
                    Func::Log => "log",
                })?;
                out.write_str("(")?;
                arg.write_prec(out, 0)?;
                out.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expression {
    /// Prints a form that parses back to the same tree (for trees the
    /// parser can produce; hand-built negative or non-finite literals
    /// have no literal syntax).
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(out, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let col = i + 1;
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                let kind = match b {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                };
                tokens.push(Token { kind, col });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &text[start..i];
                let value: f64 = text
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| ExprError::InvalidNumber {
                        col,
                        text: String::from(text),
                    })?;
                tokens.push(Token { kind: TokenKind::Number(value), col });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Name(String::from(&text[start..i])),
                    col,
                });
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ExprError::UnexpectedChar { col, ch });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<&Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind, expected: &'static str) -> Result<(), ExprError> {
        match self.peek() {
            Some(tok) if tok.kind == *kind => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(ExprError::Expected { col: tok.col, expected }),
            None => Err(ExprError::UnexpectedEnd),
        }
    }

    /// expr := term (('+' | '-') term)*
    fn expr(&mut self, depth: u32) -> Result<Expression, ExprError> {
        if depth > MAX_DEPTH {
            return Err(ExprError::TooDeep);
        }
        let mut lhs = self.term(depth + 1)?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term(depth + 1)?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    /// term := factor (('*' | '/') factor)*
    fn term(&mut self, depth: u32) -> Result<Expression, ExprError> {
        if depth > MAX_DEPTH {
            return Err(ExprError::TooDeep);
        }
        let mut lhs = self.factor(depth + 1)?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor(depth + 1)?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    /// factor := '-' factor | power
    fn factor(&mut self, depth: u32) -> Result<Expression, ExprError> {
        if depth > MAX_DEPTH {
            return Err(ExprError::TooDeep);
        }
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.pos += 1;
            let inner = self.factor(depth + 1)?;
            return Ok(Expression::Neg(Box::new(inner)));
        }
        self.power(depth + 1)
    }

    /// power := atom ('^' factor)?  — right-associative, and the exponent
    /// may start with a unary minus.
    fn power(&mut self, depth: u32) -> Result<Expression, ExprError> {
        if depth > MAX_DEPTH {
            return Err(ExprError::TooDeep);
        }
        let base = self.atom(depth + 1)?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            self.pos += 1;
            let exponent = self.factor(depth + 1)?;
            return Ok(Expression::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    /// atom := number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
    fn atom(&mut self, depth: u32) -> Result<Expression, ExprError> {
        if depth > MAX_DEPTH {
            return Err(ExprError::TooDeep);
        }
        let tok = match self.advance() {
            Some(tok) => tok.clone(),
            None => return Err(ExprError::UnexpectedEnd),
        };
        match tok.kind {
            TokenKind::Number(value) => Ok(Expression::Number(value)),
            TokenKind::LParen => {
                let inner = self.expr(depth + 1)?;
                self.eat(&TokenKind::RParen, "closing `)`")?;
                Ok(inner)
            }
            TokenKind::Name(name) => match name.as_str() {
                "x" => Ok(Expression::X),
                "y" => Ok(Expression::Y),
                "pi" => Ok(Expression::Pi),
                "sin" | "cos" | "exp" | "log" => {
                    let func = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "exp" => Func::Exp,
                        _ => Func::Log,
                    };
                    self.eat(&TokenKind::LParen, "`(` after function name")?;
                    let arg = self.expr(depth + 1)?;
                    self.eat(&TokenKind::RParen, "closing `)`")?;
                    Ok(Expression::Call(func, Box::new(arg)))
                }
                _ => Err(ExprError::UnknownName { col: tok.col, name }),
            },
            _ => Err(ExprError::Expected {
                col: tok.col,
                expected: "a number, variable, function call or `(`",
            }),
        }
    }
}

/// The Halton radical-inverse sequence in the given base; `i` starts at 1.
pub(crate) fn halton(mut i: u32, base: u32) -> f64 {
    let mut denom = 1.0;
    let mut value = 0.0;
    while i > 0 {
        denom /= base as f64;
        value += denom * (i % base) as f64;
        i /= base;
    }
    value
}

/// Checks numerically that `e` respects the identification `x ~ x + 1`.
///
/// Samples `samples` quasi-random `y` values (Halton base 3, mapped to
/// `[-1, 1]`) and `samples` `x` values (Halton base 2 in `[0, 1)`); for
/// each `y` the seam value `|e(0,y) - e(1,y)|` and for each pair the wrap
/// value `|e(x,y) - e(x+1,y)|` must stay within `tol * (1 + |e|)`.
/// Requires `samples >= 8`; evaluation errors propagate.
pub fn validate_periodicity(
    e: &Expression,
    samples: u32,
    tol: f64,
) -> Result<bool, EvalError> {
    assert!(samples >= 8, "periodicity check needs at least 8 samples");
    let close = |a: f64, b: f64| math::abs(a - b) <= tol * (1.0 + math::abs(a));
    for i in 1..=samples {
        let y = 2.0 * halton(i, 3) - 1.0;
        let seam_left = e.eval(0.0, y)?;
        let seam_right = e.eval(1.0, y)?;
        if !close(seam_left, seam_right) {
            return Ok(false);
        }
        for j in 1..=samples {
            let x = halton(j, 2);
            let here = e.eval(x, y)?;
            let wrapped = e.eval(x + 1.0, y)?;
            if !close(here, wrapped) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
