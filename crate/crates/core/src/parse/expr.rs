//! Tokenizer, expression grammar and the three evaluators (scalar, linear
//! differential polynomial, differential operator) sharing one AST.

use num_bigint::BigInt;

use crate::dpoly::{DerVar, LinDiffPoly, VarKind};
use crate::error::Error;
use crate::field::{FieldElem, Rat};
use crate::ore::OrePoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Primes(usize),
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize)>, // token and 1-based column
    pos: usize,
    line: usize,
    end_col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Lexer, Error> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = col0 + i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '\'' => {
                let start = i;
                while i < chars.len() && chars[i] == '\'' {
                    i += 1;
                }
                toks.push((Tok::Primes(i - start), col));
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = BigInt::parse_bytes(s.as_bytes(), 10)
                    .ok_or_else(|| Error::syntax(line, col, "bad integer literal"))?;
                toks.push((Tok::Int(v), col));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(Error::syntax(
                    line,
                    col,
                    format!("unexpected character '{}'", other),
                ));
            }
        }
    }
    Ok(Lexer { toks, pos: 0, line, end_col: col0 + chars.len() + 1 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        let col = self.col();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(Error::syntax(self.line, col, format!("expected {}", what))),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.col(), msg)
    }
}

/// Expression tree shared by all evaluators.
#[derive(Clone, Debug)]
pub enum Node {
    Int(BigInt),
    T,
    Dee,
    Var(VarKind, usize, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

fn classify_ident(name: &str, lx: &Lexer) -> Result<Node, Error> {
    if name == "t" {
        return Ok(Node::T);
    }
    if name == "d" {
        return Ok(Node::Dee);
    }
    for (prefix, kind) in [("u", VarKind::U), ("x", VarKind::X)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let index: usize = rest
                    .parse()
                    .map_err(|_| lx.err(format!("bad variable index in '{}'", name)))?;
                if index == 0 {
                    return Err(lx.err(format!("variable index must start at 1: '{}'", name)));
                }
                return Ok(Node::Var(kind, index, 0));
            }
        }
    }
    Err(lx.err(format!("unknown symbol '{}'", name)))
}

fn parse_exponent(lx: &mut Lexer) -> Result<u32, Error> {
    let parenthesized = matches!(lx.peek(), Some(Tok::LParen));
    if parenthesized {
        lx.next();
    }
    let col = lx.col();
    let v = match lx.next() {
        Some(Tok::Int(v)) => v,
        _ => {
            return Err(Error::syntax(
                lx.line,
                col,
                "exponent must be a nonnegative integer",
            ))
        }
    };
    if parenthesized {
        lx.expect(Tok::RParen, "')'")?;
    }
    u32::try_from(&v).map_err(|_| Error::syntax(lx.line, col, "exponent out of range"))
}

fn parse_atom(lx: &mut Lexer) -> Result<Node, Error> {
    let col = lx.col();
    match lx.next() {
        Some(Tok::Int(v)) => Ok(Node::Int(v)),
        Some(Tok::LParen) => {
            let e = parse_expr_prec(lx)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(e)
        }
        Some(Tok::Ident(name)) => {
            let node = classify_ident(&name, lx)?;
            match node {
                Node::Var(kind, index, _) => {
                    // derivative suffix: primes, or ^(k) with parentheses
                    let mut order = 0usize;
                    loop {
                        match lx.peek() {
                            Some(Tok::Primes(k)) => {
                                order += k;
                                lx.next();
                            }
                            Some(Tok::Caret) => {
                                // only ^( int ) is a derivative mark; a bare
                                // ^int stays a power and is caught as
                                // nonlinear later
                                if matches!(lx.toks.get(lx.pos + 1), Some((Tok::LParen, _))) {
                                    lx.next(); // ^
                                    lx.next(); // (
                                    let col = lx.col();
                                    let k = match lx.next() {
                                        Some(Tok::Int(v)) => usize::try_from(&v).map_err(|_| {
                                            Error::syntax(lx.line, col, "derivative order out of range")
                                        })?,
                                        _ => {
                                            return Err(Error::syntax(
                                                lx.line,
                                                col,
                                                "derivative order must be an integer",
                                            ))
                                        }
                                    };
                                    lx.expect(Tok::RParen, "')'")?;
                                    order += k;
                                } else {
                                    break;
                                }
                            }
                            _ => break,
                        }
                    }
                    Ok(Node::Var(kind, index, order))
                }
                other => {
                    if matches!(lx.peek(), Some(Tok::Primes(_))) {
                        return Err(lx.err(format!("cannot differentiate '{}'", name)));
                    }
                    Ok(other)
                }
            }
        }
        _ => Err(Error::syntax(lx.line, col, "expected a value")),
    }
}

fn parse_power(lx: &mut Lexer) -> Result<Node, Error> {
    let base = parse_atom(lx)?;
    if matches!(lx.peek(), Some(Tok::Caret)) {
        lx.next();
        let e = parse_exponent(lx)?;
        Ok(Node::Pow(Box::new(base), e))
    } else {
        Ok(base)
    }
}

fn parse_unary(lx: &mut Lexer) -> Result<Node, Error> {
    match lx.peek() {
        Some(Tok::Minus) => {
            lx.next();
            Ok(Node::Neg(Box::new(parse_unary(lx)?)))
        }
        Some(Tok::Plus) => {
            lx.next();
            parse_unary(lx)
        }
        _ => parse_power(lx),
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Node, Error> {
    let mut node = parse_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                node = Node::Mul(Box::new(node), Box::new(parse_unary(lx)?));
            }
            Some(Tok::Slash) => {
                lx.next();
                node = Node::Div(Box::new(node), Box::new(parse_unary(lx)?));
            }
            _ => break,
        }
    }
    Ok(node)
}

fn parse_expr_prec(lx: &mut Lexer) -> Result<Node, Error> {
    let mut node = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                node = Node::Add(Box::new(node), Box::new(parse_term(lx)?));
            }
            Some(Tok::Minus) => {
                lx.next();
                node = Node::Sub(Box::new(node), Box::new(parse_term(lx)?));
            }
            _ => break,
        }
    }
    Ok(node)
}

/// Parses one expression occupying the whole input; `col0` offsets reported
/// columns when the text is a slice of a longer line.
pub fn parse_expr(text: &str, line: usize, col0: usize) -> Result<Node, Error> {
    let mut lx = lex(text, line, col0)?;
    let node = parse_expr_prec(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.err("trailing input after expression"));
    }
    Ok(node)
}

/// Parses a comma-separated list of expressions.
pub fn parse_expr_list(text: &str, line: usize, col0: usize) -> Result<Vec<Node>, Error> {
    let mut lx = lex(text, line, col0)?;
    let mut out = Vec::new();
    loop {
        out.push(parse_expr_prec(&mut lx)?);
        match lx.peek() {
            Some(Tok::Comma) => {
                lx.next();
            }
            None => break,
            _ => return Err(lx.err("expected ',' or end of list")),
        }
    }
    Ok(out)
}

/// Which variable families an expression may mention.
#[derive(Clone, Copy, Debug)]
pub struct Allow {
    pub u: bool,
    pub x: bool,
    pub t: bool,
}

pub fn eval_scalar(node: &Node, line: usize) -> Result<FieldElem, Error> {
    match node {
        Node::Int(v) => Ok(FieldElem::from_rat(Rat::from_integer(v.clone()))),
        Node::T => Ok(FieldElem::t()),
        Node::Dee => Err(Error::semantic(line, "'d' is not a scalar")),
        Node::Var(..) => Err(Error::semantic(line, "variables are not scalars")),
        Node::Neg(a) => Ok(eval_scalar(a, line)?.neg()),
        Node::Add(a, b) => Ok(eval_scalar(a, line)?.add(&eval_scalar(b, line)?)),
        Node::Sub(a, b) => Ok(eval_scalar(a, line)?.sub(&eval_scalar(b, line)?)),
        Node::Mul(a, b) => Ok(eval_scalar(a, line)?.mul(&eval_scalar(b, line)?)),
        Node::Div(a, b) => eval_scalar(a, line)?
            .div(&eval_scalar(b, line)?)
            .map_err(|_| Error::semantic(line, "division by zero")),
        Node::Pow(a, e) => Ok(eval_scalar(a, line)?.pow(*e)),
    }
}

/// Evaluates to a linear differential polynomial, rejecting nonlinear
/// combinations.
pub fn eval_linear(
    node: &Node,
    allow: Allow,
    line: usize,
) -> Result<LinDiffPoly<FieldElem>, Error> {
    match node {
        Node::Int(v) => Ok(LinDiffPoly::from_constant(FieldElem::from_rat(
            Rat::from_integer(v.clone()),
        ))),
        Node::T => {
            if !allow.t {
                return Err(Error::semantic(line, "t requires field Q(t)"));
            }
            Ok(LinDiffPoly::from_constant(FieldElem::t()))
        }
        Node::Dee => Err(Error::semantic(line, "'d' is not allowed here")),
        Node::Var(kind, index, order) => {
            match kind {
                VarKind::U if !allow.u => {
                    return Err(Error::semantic(line, "parameters are not allowed here"))
                }
                VarKind::X if !allow.x => {
                    return Err(Error::semantic(
                        line,
                        "implicit variables are not allowed on a right-hand side",
                    ))
                }
                _ => {}
            }
            let v = DerVar { kind: *kind, index: *index, order: *order };
            Ok(LinDiffPoly::term(v, FieldElem::one()))
        }
        Node::Neg(a) => Ok(eval_linear(a, allow, line)?.neg()),
        Node::Add(a, b) => {
            Ok(eval_linear(a, allow, line)?.add(&eval_linear(b, allow, line)?))
        }
        Node::Sub(a, b) => {
            Ok(eval_linear(a, allow, line)?.sub(&eval_linear(b, allow, line)?))
        }
        Node::Mul(a, b) => {
            let lhs = eval_linear(a, allow, line)?;
            let rhs = eval_linear(b, allow, line)?;
            match (lhs.term_count(), rhs.term_count()) {
                (0, _) => Ok(rhs.scale_field(lhs.constant())),
                (_, 0) => Ok(lhs.scale_field(rhs.constant())),
                _ => Err(Error::semantic(line, "nonlinear term")),
            }
        }
        Node::Div(a, b) => {
            let lhs = eval_linear(a, allow, line)?;
            let rhs = eval_linear(b, allow, line)?;
            if rhs.term_count() != 0 {
                return Err(Error::semantic(line, "division by a variable term"));
            }
            let inv = rhs
                .constant()
                .inv()
                .map_err(|_| Error::semantic(line, "division by zero"))?;
            Ok(lhs.scale_field(&inv))
        }
        Node::Pow(a, e) => {
            let base = eval_linear(a, allow, line)?;
            match *e {
                0 => Ok(LinDiffPoly::from_constant(FieldElem::one())),
                1 => Ok(base),
                _ => {
                    if base.term_count() != 0 {
                        return Err(Error::semantic(line, "nonlinear term"));
                    }
                    Ok(LinDiffPoly::from_constant(base.constant().pow(*e)))
                }
            }
        }
    }
}

/// Evaluates to a differential operator; products multiply in written order
/// under the commutation rule, and scalar division rescales coefficients.
pub fn eval_ore(node: &Node, line: usize) -> Result<OrePoly, Error> {
    match node {
        Node::Int(v) => Ok(OrePoly::constant(FieldElem::from_rat(Rat::from_integer(
            v.clone(),
        )))),
        Node::T => Ok(OrePoly::constant(FieldElem::t())),
        Node::Dee => Ok(OrePoly::dee()),
        Node::Var(..) => Err(Error::semantic(line, "variables are not operators")),
        Node::Neg(a) => Ok(eval_ore(a, line)?.neg()),
        Node::Add(a, b) => Ok(eval_ore(a, line)?.add(&eval_ore(b, line)?)),
        Node::Sub(a, b) => Ok(eval_ore(a, line)?.sub(&eval_ore(b, line)?)),
        Node::Mul(a, b) => Ok(eval_ore(a, line)?.mul(&eval_ore(b, line)?)),
        Node::Div(a, b) => {
            let rhs = eval_ore(b, line)?;
            if rhs.degree() != Some(0) {
                return Err(Error::semantic(line, "can only divide by a scalar"));
            }
            let inv = rhs
                .coeff(0)
                .inv()
                .map_err(|_| Error::semantic(line, "division by zero"))?;
            Ok(eval_ore(a, line)?.scale(&inv))
        }
        Node::Pow(a, e) => {
            let base = eval_ore(a, line)?;
            let mut out = OrePoly::one();
            for _ in 0..*e {
                out = out.mul(&base);
            }
            Ok(out)
        }
    }
}
