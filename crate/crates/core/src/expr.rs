//! Surface-definition expressions: parsing, printing, symbolic
//! differentiation and evaluation over any [`Scalar`].
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := ("-" | "+") unary | power
//! power   := primary ("^" unary)?          // right-associative
//! primary := number | name | name "(" expr ")" | "(" expr ")"
//! ```

use std::fmt;

use thiserror::Error;

use crate::scalar::{powi, Scalar};
use crate::taylor::{Func, JetError};

/// Variables an expression may reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    U,
    V,
    X,
    Y,
    Z,
    W,
}

impl Variable {
    pub const ALL: [Variable; 6] = [
        Variable::U,
        Variable::V,
        Variable::X,
        Variable::Y,
        Variable::Z,
        Variable::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::U => "u",
            Variable::V => "v",
            Variable::X => "x",
            Variable::Y => "y",
            Variable::Z => "z",
            Variable::W => "w",
        }
    }

    pub fn from_name(name: &str) -> Option<Variable> {
        Variable::ALL.into_iter().find(|v| v.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var(Variable),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("E_PARSE at line {line}, column {column}: found {found}, expected one of {}", expected.join(", "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("E_UNBOUND: variable {0} has no value")]
    Unbound(&'static str),
    #[error(transparent)]
    Jet(#[from] JetError),
}

impl EvalError {
    pub fn code(&self) -> &'static str {
        match self {
            EvalError::Unbound(_) => "E_UNBOUND",
            EvalError::Jet(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("name '{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() || c == '.' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    i = k;
                }
            }
            let text: String = chars[begin..i].iter().collect();
            col += i - begin;
            match text.parse::<f64>() {
                Ok(x) => Tok::Num(x),
                Err(_) => {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        found: format!("malformed number '{text}'"),
                        expected: vec!["number".into()],
                    })
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - begin;
            Tok::Ident(chars[begin..i].iter().collect())
        } else {
            i += 1;
            col += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        found: format!("character '{c}'"),
                        expected: vec!["operator".into(), "operand".into()],
                    })
                }
            }
        };
        out.push(Lexed {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

const OPERAND: [&str; 4] = ["number", "name", "'('", "'-'"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let at = &self.toks[self.pos];
        ParseError {
            line: at.line,
            column: at.column,
            found: at.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.bump();
                    if *self.peek() != Tok::LParen {
                        return Err(self.error(&["'('"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                let leaf = match name.as_str() {
                    "pi" => Expr::Const(Constant::Pi),
                    "e" => Expr::Const(Constant::E),
                    _ => match Variable::from_name(&name) {
                        Some(v) => Expr::Var(v),
                        None => {
                            return Err(self.error(&[
                                "u",
                                "v",
                                "x",
                                "y",
                                "z",
                                "w",
                                "pi",
                                "e",
                                "function name",
                            ]))
                        }
                    },
                };
                self.bump();
                Ok(leaf)
            }
            _ => Err(self.error(&OPERAND)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&["')'", "operator"]))
        }
    }
}

/// Parses an expression; whitespace is insignificant.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                    BinOp::Pow => '^',
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}

fn num(x: f64) -> Expr {
    Expr::Num(x)
}

fn is_num(e: &Expr, x: f64) -> bool {
    matches!(e, Expr::Num(y) if *y == x)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        _ => Expr::Bin(BinOp::Add, Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        (Expr::Num(x), Expr::Num(y)) => num(x - y),
        _ => Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        _ => Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => num(0.0),
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Bin(BinOp::Div, Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&b, 0.0) => num(1.0),
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b)),
    }
}

fn call(func: Func, a: Expr) -> Expr {
    Expr::Call(func, Box::new(a))
}

impl Expr {
    /// Does the tree reference `var`?
    pub fn mentions(&self, var: Variable) -> bool {
        match self {
            Expr::Var(v) => *v == var,
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(var),
            Expr::Bin(_, a, b) => a.mentions(var) || b.mentions(var),
        }
    }

    pub fn variables(&self) -> Vec<Variable> {
        Variable::ALL
            .into_iter()
            .filter(|v| self.mentions(*v))
            .collect()
    }

    /// Value of a variable-free subtree.
    pub fn constant_value(&self) -> Option<f64> {
        if !self.variables().is_empty() {
            return None;
        }
        self.eval::<f64>(&Env::new()).ok()
    }

    /// Symbolic derivative with constant folding of 0 and 1.
    pub fn diff(&self, var: Variable) -> Expr {
        match self {
            Expr::Num(_) | Expr::Const(_) => num(0.0),
            Expr::Var(v) => num(if *v == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.diff(var)),
            Expr::Call(func, a) => {
                let inner = a.diff(var);
                if is_num(&inner, 0.0) {
                    return num(0.0);
                }
                let a = (**a).clone();
                let outer = match func {
                    Func::Sin => call(Func::Cos, a),
                    Func::Cos => neg(call(Func::Sin, a)),
                    Func::Tan => add(num(1.0), pow(call(Func::Tan, a), num(2.0))),
                    Func::Exp => call(Func::Exp, a),
                    Func::Log => div(num(1.0), a),
                    Func::Sqrt => div(num(0.5), call(Func::Sqrt, a)),
                    Func::Sinh => call(Func::Cosh, a),
                    Func::Cosh => call(Func::Sinh, a),
                };
                mul(outer, inner)
            }
            Expr::Bin(op, a, b) => {
                let (da, db) = (a.diff(var), b.diff(var));
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b), mul(a, db)),
                    BinOp::Div => div(sub(mul(da, b.clone()), mul(a, db)), pow(b, num(2.0))),
                    BinOp::Pow => {
                        if !b.mentions(var) {
                            // d(f^c) = c f^(c-1) f'
                            let lowered = match b.constant_value() {
                                Some(c) => num(c - 1.0),
                                None => sub(b.clone(), num(1.0)),
                            };
                            mul(mul(b, pow(a, lowered)), da)
                        } else {
                            // d(f^g) = f^g (g' ln f + g f' / f)
                            let this = pow(a.clone(), b.clone());
                            let log_part = mul(db, call(Func::Log, a.clone()));
                            let ratio = div(mul(b, da), a);
                            mul(this, add(log_part, ratio))
                        }
                    }
                }
            }
        }
    }

    /// Structural evaluation over any scalar backend.
    pub fn eval<S: Scalar>(&self, env: &Env<S>) -> Result<S, EvalError> {
        match self {
            Expr::Num(x) => Ok(env.constant(*x)),
            Expr::Const(c) => Ok(env.constant(c.value())),
            Expr::Var(v) => env.get(*v).cloned().ok_or(EvalError::Unbound(v.name())),
            Expr::Neg(a) => Ok(-a.eval(env)?),
            Expr::Call(func, a) => Ok(a.eval(env)?.elem(*func)?),
            Expr::Bin(op, a, b) => {
                if *op == BinOp::Pow {
                    return eval_pow(a, b, env);
                }
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                Ok(match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.checked_div(&y)?,
                    BinOp::Pow => unreachable!(),
                })
            }
        }
    }
}

fn eval_pow<S: Scalar>(base: &Expr, exp: &Expr, env: &Env<S>) -> Result<S, EvalError> {
    let b = base.eval(env)?;
    match exp.constant_value() {
        Some(p) if p.fract() == 0.0 && p.abs() <= 1024.0 => Ok(powi(&b, p as i64)?),
        Some(p) => Ok(b.pow_real(p)?),
        None => {
            let g = exp.eval(env)?;
            Ok((g * b.elem(Func::Log)?).elem(Func::Exp)?)
        }
    }
}

/// Variable bindings for [`Expr::eval`].
#[derive(Debug, Clone)]
pub struct Env<S> {
    slots: [Option<S>; 6],
    template: Option<S>,
}

impl<S: Scalar> Env<S> {
    pub fn new() -> Self {
        Env {
            slots: Default::default(),
            template: None,
        }
    }

    pub fn with(mut self, var: Variable, value: S) -> Self {
        self.bind(var, value);
        self
    }

    pub fn bind(&mut self, var: Variable, value: S) {
        if self.template.is_none() {
            self.template = Some(value.clone());
        }
        self.slots[var.index()] = Some(value);
    }

    pub fn get(&self, var: Variable) -> Option<&S> {
        self.slots[var.index()].as_ref()
    }

    fn constant(&self, c: f64) -> S {
        match &self.template {
            Some(t) => t.lift(c),
            None => S::from_real(c),
        }
    }
}

impl<S: Scalar> Default for Env<S> {
    fn default() -> Self {
        Self::new()
    }
}
