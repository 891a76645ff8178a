//! A small arithmetic language for scalar functions on ℝ^m.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?          right-associative: 2^3^2 = 2^9
//! unary   := '-' unary | primary
//! primary := number | variable | call | '(' expr ')'
//! ```
//!
//! Variables are `x1` … `xm` (1-based) and `t`, the argument of a radial
//! profile. The whole vector `x` may only appear as the argument of
//! `norm(x)` and `dot(x, x)`. Scalar functions: `sin cos exp sqrt abs log`.
//!
//! Note that unary minus binds tighter than `^`, so `-2^2` is `(-2)^2 = 4`.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::{EvalContext, EvalError};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Mul => " * ",
            BinaryOp::Div => " / ",
            BinaryOp::Pow => "^",
        }
    }
}

/// Scalar built-ins taking one scalar argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Log,
}

impl Function {
    pub const ALL: [Function; 6] = [
        Function::Sin,
        Function::Cos,
        Function::Exp,
        Function::Sqrt,
        Function::Abs,
        Function::Log,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Exp => "exp",
            Function::Sqrt => "sqrt",
            Function::Abs => "abs",
            Function::Log => "log",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// Non-negative finite literal; negative constants are `Neg(Number)`.
    Number(f64),
    /// `x{i}`, 1-based.
    Var(usize),
    /// `t`.
    Param,
    /// `norm(x)`.
    Norm,
    /// `dot(x, x)`.
    Dot,
    Neg(Box<Expression>),
    Binary {
        op: BinaryOp,
        lhs: Box<Expression>,
        rhs: Box<Expression>,
    },
    Call {
        func: Function,
        arg: Box<Expression>,
    },
}

impl Expression {
    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Expression::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(func: Function, arg: Expression) -> Self {
        Expression::Call {
            func,
            arg: Box::new(arg),
        }
    }

    pub fn negated(inner: Expression) -> Self {
        Expression::Neg(Box::new(inner))
    }

    fn children(&self) -> Vec<&Expression> {
        match self {
            Expression::Number(_)
            | Expression::Var(_)
            | Expression::Param
            | Expression::Norm
            | Expression::Dot => vec![],
            Expression::Neg(e) | Expression::Call { arg: e, .. } => vec![e],
            Expression::Binary { lhs, rhs, .. } => vec![lhs, rhs],
        }
    }

    fn any(&self, pred: &impl Fn(&Expression) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    /// Largest `i` among referenced `x{i}`, 0 if none.
    pub fn max_variable_index(&self) -> usize {
        let own = match self {
            Expression::Var(i) => *i,
            _ => 0,
        };
        self.children()
            .into_iter()
            .map(Expression::max_variable_index)
            .fold(own, usize::max)
    }

    /// Whether the profile argument `t` occurs.
    pub fn uses_param(&self) -> bool {
        self.any(&|e| matches!(e, Expression::Param))
    }

    /// Whether any coordinate or whole-vector symbol occurs.
    pub fn uses_point(&self) -> bool {
        self.any(&|e| matches!(e, Expression::Var(_) | Expression::Norm | Expression::Dot))
    }

    /// Canonical, fully parenthesized text. Parsing it gives back `self`.
    pub fn unparse(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(v) => write!(f, "{v}"),
            Expression::Var(i) => write!(f, "x{i}"),
            Expression::Param => f.write_str("t"),
            Expression::Norm => f.write_str("norm(x)"),
            Expression::Dot => f.write_str("dot(x, x)"),
            Expression::Neg(e) => write!(f, "(-{e})"),
            Expression::Binary { op, lhs, rhs } => write!(f, "({lhs}{}{rhs})", op.symbol()),
            Expression::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Parse failure. Every variant carries the byte offset into the source.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {position}")]
    Lexical { position: usize, found: char },
    #[error("invalid number {text:?} at offset {position}")]
    InvalidNumber { position: usize, text: String },
    #[error("expected {expected} at offset {position}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown function {name:?} at offset {position}")]
    UnknownFunction { position: usize, name: String },
    #[error("unknown identifier {name:?} at offset {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("{name} takes {expected} argument(s), found {found} at offset {position}")]
    BadArity {
        position: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid variable {name:?} at offset {position}: coordinates are x1, x2, … (1-based)")]
    BadVariable { position: usize, name: String },
    #[error("the vector x at offset {position} may only appear as norm(x) or dot(x, x)")]
    VectorArgument { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Lexical { position, .. }
            | ParseError::InvalidNumber { position, .. }
            | ParseError::Syntax { position, .. }
            | ParseError::UnknownFunction { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::BadArity { position, .. }
            | ParseError::BadVariable { position, .. }
            | ParseError::VectorArgument { position } => *position,
        }
    }
}
