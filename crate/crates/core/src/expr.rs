//! Arithmetic expressions over named real variables.
//!
//! Grammar (recursive descent, whitespace insignificant):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-x^2 = -(x^2)` and `2^3^2 = 2^9`. A minus sign is allowed directly in an
//! exponent (`2^-1`). Multiplication must be written out: `2x` is an error.
//!
//! Builtin functions: `sin cos tan exp ln sqrt abs`. A builtin name is a
//! function only when followed by `(`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cordic::CordicTable;
use crate::error::Error;

/// A parse failure, located by byte offset into the input.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message} (expected {expected})")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: String,
}

impl ParseError {
    /// The input with a caret under the offending byte.
    pub fn render(&self, input: &str) -> String {
        caret_display(input, self.offset, &self.message)
    }
}

/// An evaluation failure (division by zero, `ln` of a non-positive number, …)
/// located at the source offset of the failing node.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("{message} at offset {offset}")]
pub struct EvalError {
    pub offset: usize,
    pub message: String,
}

impl EvalError {
    pub fn render(&self, input: &str) -> String {
        caret_display(input, self.offset, &self.message)
    }
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Domain(e.to_string())
    }
}

fn caret_display(input: &str, offset: usize, message: &str) -> String {
    let pad = input.get(..offset).map_or(offset, |s| s.chars().count());
    format!("{input}\n{}^ {message}", " ".repeat(pad))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Number(f64),
    /// Index into the expression's variable list.
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// Syntax tree node with the byte offset it was parsed from.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub offset: usize,
}

impl Node {
    pub fn new(kind: NodeKind, offset: usize) -> Self {
        Node { kind, offset }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            NodeKind::Number(v) if v.is_sign_negative() => 3,
            NodeKind::Number(_) | NodeKind::Var(_) | NodeKind::Call(..) => 5,
            NodeKind::Neg(_) => 3,
            NodeKind::Binary(op, ..) => op.precedence(),
        }
    }
}

/// Where `sin`, `cos` and `tan` get their values.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum TrigBackend {
    #[default]
    Host,
    Cordic(CordicTable),
}

/// A parsed expression together with its variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
    trig: TrigBackend,
}

impl Expr {
    /// Wraps an already built tree. Every `Var` index must be in range.
    pub fn from_tree(root: Node, vars: Vec<String>) -> Result<Self, ParseError> {
        fn check(node: &Node, n: usize) -> Result<(), ParseError> {
            match &node.kind {
                NodeKind::Number(_) => Ok(()),
                NodeKind::Var(i) if *i < n => Ok(()),
                NodeKind::Var(i) => Err(ParseError {
                    offset: node.offset,
                    message: format!("variable index {i} out of range"),
                    expected: "declared variable".into(),
                }),
                NodeKind::Neg(c) | NodeKind::Call(_, c) => check(c, n),
                NodeKind::Binary(_, l, r) => check(l, n).and_then(|_| check(r, n)),
            }
        }
        check(&root, vars.len())?;
        Ok(Expr {
            root,
            vars,
            trig: TrigBackend::Host,
        })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Same tree with a different trigonometric backend.
    pub fn with_trig(mut self, trig: TrigBackend) -> Self {
        self.trig = trig;
        self
    }

    /// Evaluates with positional values, one per declared variable.
    pub fn eval(&self, values: &[f64]) -> Result<f64, EvalError> {
        if values.len() != self.vars.len() {
            return Err(EvalError {
                offset: 0,
                message: format!(
                    "expected {} variable values, got {}",
                    self.vars.len(),
                    values.len()
                ),
            });
        }
        self.eval_node(&self.root, values)
    }

    /// Evaluates with values looked up by variable name.
    pub fn evaluate(&self, bindings: &HashMap<&str, f64>) -> Result<f64, EvalError> {
        let values = self
            .vars
            .iter()
            .map(|v| {
                bindings.get(v.as_str()).copied().ok_or_else(|| EvalError {
                    offset: 0,
                    message: format!("no value bound for variable '{v}'"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.eval_node(&self.root, &values)
    }

    /// Single-variable integrand; evaluation failures become NaN, which the
    /// integrators and solvers report as non-finite values.
    pub fn as_fn1(&self) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.eval(&[x]).unwrap_or(f64::NAN)
    }

    pub fn as_fn(&self) -> impl Fn(&[f64]) -> f64 + '_ {
        move |xs| self.eval(xs).unwrap_or(f64::NAN)
    }

    fn eval_node(&self, node: &Node, values: &[f64]) -> Result<f64, EvalError> {
        let fail = |message: String| EvalError {
            offset: node.offset,
            message,
        };
        let v = match &node.kind {
            NodeKind::Number(v) => *v,
            NodeKind::Var(i) => values[*i],
            NodeKind::Neg(c) => -self.eval_node(c, values)?,
            NodeKind::Binary(op, l, r) => {
                let a = self.eval_node(l, values)?;
                let b = self.eval_node(r, values)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(fail("division by zero".into()));
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(fail("zero raised to a negative power".into()));
                        }
                        if a < 0.0 && b.fract() != 0.0 {
                            return Err(fail(format!(
                                "negative base {a} raised to non-integer power {b}"
                            )));
                        }
                        a.powf(b)
                    }
                }
            }
            NodeKind::Call(func, c) => {
                let x = self.eval_node(c, values)?;
                match func {
                    Func::Sin | Func::Cos | Func::Tan => self.trig(*func, x).map_err(fail)?,
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(fail(format!("ln of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(fail(format!("sqrt of negative value {x}")));
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail(format!("result is not finite ({v})")))
        }
    }

    fn trig(&self, func: Func, x: f64) -> Result<f64, String> {
        match &self.trig {
            TrigBackend::Host => Ok(match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                _ => x.tan(),
            }),
            TrigBackend::Cordic(table) => {
                let sc = table.sin_cos(x).map_err(|e| e.to_string())?;
                Ok(match func {
                    Func::Sin => sc.sin,
                    Func::Cos => sc.cos,
                    _ => {
                        if sc.cos == 0.0 {
                            return Err("tan undefined (cosine is zero)".into());
                        }
                        sc.sin / sc.cos
                    }
                })
            }
        }
    }

    /// Every compound subexpression wrapped in parentheses.
    pub fn to_fully_parenthesized(&self) -> String {
        let mut out = String::new();
        self.write_full(&self.root, &mut out);
        out
    }

    fn write_full(&self, node: &Node, out: &mut String) {
        match &node.kind {
            NodeKind::Number(v) if v.is_sign_negative() => out.push_str(&format!("(-{})", -v)),
            NodeKind::Number(v) => out.push_str(&v.to_string()),
            NodeKind::Var(i) => out.push_str(&self.vars[*i]),
            NodeKind::Neg(c) => {
                out.push_str("(-");
                self.write_full(c, out);
                out.push(')');
            }
            NodeKind::Binary(op, l, r) => {
                out.push('(');
                self.write_full(l, out);
                out.push(op.symbol());
                self.write_full(r, out);
                out.push(')');
            }
            NodeKind::Call(f, c) => {
                out.push_str(f.name());
                out.push('(');
                self.write_full(c, out);
                out.push(')');
            }
        }
    }

    fn write_min(&self, node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &Node, parens: bool, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if parens {
                write!(f, "(")?;
                self.write_min(c, f)?;
                write!(f, ")")
            } else {
                self.write_min(c, f)
            }
        };
        match &node.kind {
            NodeKind::Number(v) if v.is_sign_negative() => write!(f, "-{}", -v),
            NodeKind::Number(v) => write!(f, "{v}"),
            NodeKind::Var(i) => write!(f, "{}", self.vars[*i]),
            NodeKind::Neg(c) => {
                write!(f, "-")?;
                child(c, c.precedence() < 3, f)
            }
            NodeKind::Binary(BinOp::Pow, l, r) => {
                child(l, l.precedence() <= 4, f)?;
                write!(f, "^")?;
                child(r, r.precedence() < 3, f)
            }
            NodeKind::Binary(op, l, r) => {
                let p = op.precedence();
                child(l, l.precedence() < p, f)?;
                write!(f, " {} ", op.symbol())?;
                child(r, r.precedence() <= p, f)
            }
            NodeKind::Call(func, c) => {
                write!(f, "{}(", func.name())?;
                self.write_min(c, f)?;
                write!(f, ")")
            }
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_min(&self.root, f)
    }
}

/// Parses `input` over the declared variables.
pub fn parse<S: AsRef<str>>(input: &str, variables: &[S]) -> Result<Expr, ParseError> {
    let vars: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
    validate_vars(&vars)?;
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
        vars: &vars,
    };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.trailing());
    }
    Ok(Expr {
        root,
        vars,
        trig: TrigBackend::Host,
    })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn validate_vars(vars: &[String]) -> Result<(), ParseError> {
    let bad = |message: String| {
        Err(ParseError {
            offset: 0,
            message,
            expected: "nonempty list of distinct ASCII identifiers".into(),
        })
    };
    if vars.is_empty() {
        return bad("no variables declared".into());
    }
    for (i, v) in vars.iter().enumerate() {
        if !is_identifier(v) {
            return bad(format!("'{v}' is not a valid variable name"));
        }
        if vars[..i].contains(v) {
            return bad(format!("variable '{v}' declared twice"));
        }
    }
    Ok(())
}

const ATOM_EXPECTED: &str = "number, variable, function call or '('";

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, offset: usize, message: impl Into<String>, expected: &str) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
            expected: expected.into(),
        }
    }

    fn describe(&self, at: usize) -> String {
        match self.src.get(at) {
            None => "end of input".into(),
            Some(&b) if b.is_ascii_graphic() => format!("'{}'", b as char),
            Some(&b) => format!("byte 0x{b:02x}"),
        }
    }

    fn trailing(&self) -> ParseError {
        let at = self.pos;
        let next = self.src[at];
        if next == b')' {
            return self.error(at, "unbalanced ')'", "operator or end of input");
        }
        let prev = self.src[..at]
            .iter()
            .rev()
            .find(|b| !b.is_ascii_whitespace())
            .copied();
        let implicit =
            (next.is_ascii_alphanumeric() || next == b'(' || next == b'.' || next == b'_')
                && matches!(prev, Some(p) if p.is_ascii_alphanumeric() || p == b')' || p == b'_');
        if implicit {
            self.error(
                at,
                format!(
                    "unexpected {}; implicit multiplication is not supported, write '*'",
                    self.describe(at)
                ),
                "operator or end of input",
            )
        } else {
            self.error(
                at,
                format!("unexpected {}", self.describe(at)),
                "operator or end of input",
            )
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::new(NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)), at);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::new(NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)), at);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(b'-') {
            let at = self.pos;
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Node::new(NodeKind::Neg(Box::new(inner)), at));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::new(
                NodeKind::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)),
                at,
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let start = match self.peek() {
            None => {
                return Err(self.error(self.pos, "unexpected end of input", ATOM_EXPECTED));
            }
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            return self.name();
        }
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.error(
                    self.pos,
                    format!("unbalanced '(' opened at offset {start}"),
                    "')'",
                ));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c == b')' {
            return Err(self.error(start, "unbalanced ')'", ATOM_EXPECTED));
        }
        Err(self.error(
            start,
            format!("unexpected {}", self.describe(start)),
            ATOM_EXPECTED,
        ))
    }

    fn digits(&mut self) -> usize {
        let from = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - from
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let int_digits = self.digits();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if self.digits() == 0 {
                return Err(self.error(self.pos, "malformed number: no digits after '.'", "digit"));
            }
        } else if int_digits == 0 {
            return Err(self.error(start, "malformed number", "digit"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return Err(self.error(
                    self.pos,
                    "malformed number: exponent has no digits",
                    "digit",
                ));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII digits");
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(start, format!("malformed number '{text}'"), "number"))?;
        if !value.is_finite() {
            return Err(self.error(start, format!("number '{text}' overflows"), "finite number"));
        }
        Ok(Node::new(NodeKind::Number(value), start))
    }

    fn name(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII identifier");
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name).ok_or_else(|| {
                self.error(
                    start,
                    format!("unknown function '{name}'"),
                    "one of sin, cos, tan, exp, ln, sqrt, abs",
                )
            })?;
            let open = self.pos;
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.error(
                    self.pos,
                    format!("unbalanced '(' opened at offset {open}"),
                    "')'",
                ));
            }
            self.pos += 1;
            return Ok(Node::new(NodeKind::Call(func, Box::new(arg)), start));
        }
        match self.vars.iter().position(|v| v == name) {
            Some(i) => Ok(Node::new(NodeKind::Var(i), start)),
            None => Err(self.error(
                start,
                format!("unknown variable '{name}'"),
                &format!("one of the declared variables [{}]", self.vars.join(", ")),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn eval1(src: &str, x: f64) -> f64 {
        parse(src, &["x"]).unwrap().eval(&[x]).unwrap()
    }

    #[test]
    fn worked_rational_example() {
        let e = parse("(x - 2)/(x^2 + 4)", &["x"]).unwrap();
        assert_eq!(e.eval(&[2.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(e.eval(&[0.0]).unwrap(), -0.5);
    }

    #[test]
    fn precedence_contracts() {
        assert_eq!(eval1("-x^2", 3.0), -9.0);
        assert_eq!(eval1("2^3^2", 0.0), 512.0);
        assert_eq!(eval1("2^-1", 0.0), 0.5);
        assert_eq!(eval1("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(eval1("12 / 3 / 2", 0.0), 2.0);
        assert_eq!(eval1("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval1("-2 * -x", 4.0), 8.0);
        assert_eq!(eval1("(-x)^2", 3.0), 9.0);
    }

    #[test]
    fn numbers() {
        assert_eq!(eval1("1.5e2", 0.0), 150.0);
        assert_eq!(eval1(".25", 0.0), 0.25);
        assert_eq!(eval1("2E-3", 0.0), 0.002);
        assert_eq!(eval1("  7  ", 0.0), 7.0);
    }

    #[test]
    fn bindings_by_name() {
        let e = parse("x*y", &["x", "y"]).unwrap();
        let b: HashMap<&str, f64> = [("x", 2.0), ("y", 5.0)].into_iter().collect();
        assert_eq!(e.evaluate(&b).unwrap(), 10.0);
        let partial: HashMap<&str, f64> = [("x", 2.0)].into_iter().collect();
        assert!(e.evaluate(&partial).is_err());
    }

    #[test]
    fn builtin_functions() {
        assert_abs_diff_eq!(eval1("sqrt(x)", 2.0), 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(eval1("exp(ln(x))", 3.0), 3.0, epsilon = 1e-15);
        assert_eq!(eval1("abs(-x)", 3.0), 3.0);
        assert_abs_diff_eq!(eval1("sin(x)^2 + cos(x)^2", 0.4), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval1("tan(x)", 0.3), 0.3f64.tan());
    }

    #[test]
    fn domain_errors_carry_offsets() {
        let e = parse("ln(x)", &["x"]).unwrap();
        assert_eq!(e.eval(&[0.0]).unwrap_err().offset, 0);
        let e = parse("1 + 1/x", &["x"]).unwrap();
        assert_eq!(e.eval(&[0.0]).unwrap_err().offset, 5);
        let e = parse("sqrt(x)", &["x"]).unwrap();
        assert!(e.eval(&[-1.0]).is_err());
        let e = parse("x^(-1)", &["x"]).unwrap();
        assert!(e.eval(&[0.0]).is_err());
        let e = parse("x^0.5", &["x"]).unwrap();
        assert!(e.eval(&[-4.0]).is_err());
        let e = parse("exp(x)", &["x"]).unwrap();
        assert!(e.eval(&[1e5]).is_err());
        assert!(e.eval(&[]).is_err());
    }

    fn err(src: &str) -> ParseError {
        parse(src, &["x"]).unwrap_err()
    }

    #[test]
    fn parse_errors() {
        let e = err("x + y");
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("unknown variable 'y'"));

        let e = err("foo(x)");
        assert_eq!(e.offset, 0);
        assert!(e.message.contains("unknown function"));

        let e = err("1e+");
        assert_eq!(e.offset, 3);
        assert!(e.message.contains("malformed number"));

        let e = err("(x + 1");
        assert_eq!(e.offset, 6);
        assert!(e.message.contains("unbalanced"));

        let e = err("x + 1)");
        assert_eq!(e.offset, 5);
        assert!(e.message.contains("unbalanced"));

        let e = err("2x");
        assert_eq!(e.offset, 1);
        assert!(e.message.contains("implicit multiplication"));

        let e = err("x +");
        assert_eq!(e.offset, 3);
        assert!(e.message.contains("end of input"));

        let e = err("x $ 2");
        assert_eq!(e.offset, 2);

        assert_eq!(err("").offset, 0);
        assert!(err("sin x").message.contains("unknown variable 'sin'"));
    }

    #[test]
    fn variable_list_validation() {
        let none: [&str; 0] = [];
        assert!(parse("1", &none).is_err());
        assert!(parse("1", &["x", "x"]).is_err());
        assert!(parse("1", &["2x"]).is_err());
        assert!(parse("exp * 2", &["exp"]).is_ok());
    }

    #[test]
    fn caret_rendering() {
        let e = err("x + y");
        assert_eq!(e.render("x + y"), "x + y\n    ^ unknown variable 'y'");
    }

    #[test]
    fn display_reparses() {
        for src in [
            "-x^2",
            "(-x)^2",
            "2^3^2",
            "(2^3)^2",
            "1 - (2 - x)",
            "-(x + 1) * 3",
            "x^-x",
            "sin(x)/(1 + x)",
        ] {
            let e = parse(src, &["x"]).unwrap();
            let again = parse(&e.to_string(), &["x"]).unwrap();
            assert_eq!(
                e.eval(&[0.7]).unwrap(),
                again.eval(&[0.7]).unwrap(),
                "{src} -> {e}"
            );
            let full = parse(&e.to_fully_parenthesized(), &["x"]).unwrap();
            assert_eq!(e.eval(&[0.7]).unwrap(), full.eval(&[0.7]).unwrap());
        }
        assert_eq!(parse("-x^2", &["x"]).unwrap().to_string(), "-x^2");
        assert_eq!(parse("(-x)^2", &["x"]).unwrap().to_string(), "(-x)^2");
    }

    #[test]
    fn cordic_backend_agrees_with_host() {
        let table = CordicTable::default();
        let bound = 2f64.powi(-38);
        for src in ["sin(x)", "cos(x)"] {
            let host = parse(src, &["x"]).unwrap();
            let cordic = host.clone().with_trig(TrigBackend::Cordic(table.clone()));
            for i in 0..=400 {
                let x = -10.0 + 0.05 * i as f64;
                let a = host.eval(&[x]).unwrap();
                let b = cordic.eval(&[x]).unwrap();
                assert!((a - b).abs() <= bound, "{src} at x={x}: {a} vs {b}");
            }
        }
        let tan = parse("tan(x)", &["x"])
            .unwrap()
            .with_trig(TrigBackend::Cordic(table));
        assert!((tan.eval(&[0.5]).unwrap() - 0.5f64.tan()).abs() <= 4.0 * bound);
    }
}
