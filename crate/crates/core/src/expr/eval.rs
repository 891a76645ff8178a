use thiserror::Error;

use super::{BinaryOp, Expression, Function};
use crate::linalg::{self, Vector};

/// What the free symbols of an expression are bound to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalContext<'a> {
    /// A point of ℝ^m; binds `x`, `x1` … `xm`.
    Point(&'a [f64]),
    /// Profile mode; binds `t`.
    Profile(f64),
}

impl<'a> EvalContext<'a> {
    pub fn point(x: &'a Vector) -> Self {
        EvalContext::Point(x.as_slice())
    }

    pub fn profile(t: f64) -> Self {
        EvalContext::Profile(t)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("variable x{index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{reason} in {subexpression}")]
    Domain {
        reason: &'static str,
        subexpression: String,
    },
    #[error("non-finite value in {subexpression}")]
    NonFinite { subexpression: String },
    #[error("the profile argument t is unbound when evaluating at a point")]
    UnboundParameter,
    #[error("{subexpression} needs a point but only t is bound")]
    NoPoint { subexpression: String },
}

impl Expression {
    /// Evaluates in real arithmetic.
    ///
    /// Domain violations (square root or logarithm out of range, division by
    /// zero, undefined powers) are errors rather than NaN, and so is any
    /// non-finite intermediate value.
    pub fn evaluate(&self, ctx: &EvalContext<'_>) -> Result<f64, EvalError> {
        let value = match self {
            Expression::Number(v) => *v,
            Expression::Var(i) => match ctx {
                EvalContext::Point(p) => *p.get(i - 1).ok_or(EvalError::IndexOutOfRange {
                    index: *i,
                    dim: p.len(),
                })?,
                EvalContext::Profile(_) => return Err(self.no_point()),
            },
            Expression::Param => match ctx {
                EvalContext::Profile(t) => *t,
                EvalContext::Point(_) => return Err(EvalError::UnboundParameter),
            },
            Expression::Norm => match ctx {
                EvalContext::Point(p) => linalg::norm(p),
                EvalContext::Profile(_) => return Err(self.no_point()),
            },
            Expression::Dot => match ctx {
                EvalContext::Point(p) => linalg::dot(p, p),
                EvalContext::Profile(_) => return Err(self.no_point()),
            },
            Expression::Neg(e) => -e.evaluate(ctx)?,
            Expression::Binary { op, lhs, rhs } => {
                let a = lhs.evaluate(ctx)?;
                let b = rhs.evaluate(ctx)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(self.domain("division by zero"));
                        }
                        a / b
                    }
                    BinaryOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(self.domain("zero raised to a negative power"));
                        }
                        let v = a.powf(b);
                        if v.is_nan() {
                            return Err(self.domain("negative base with non-integer exponent"));
                        }
                        v
                    }
                }
            }
            Expression::Call { func, arg } => {
                let a = arg.evaluate(ctx)?;
                match func {
                    Function::Sin => a.sin(),
                    Function::Cos => a.cos(),
                    Function::Exp => a.exp(),
                    Function::Abs => a.abs(),
                    Function::Sqrt => {
                        if a < 0.0 {
                            return Err(self.domain("square root of a negative number"));
                        }
                        a.sqrt()
                    }
                    Function::Log => {
                        if a <= 0.0 {
                            return Err(self.domain("logarithm of a non-positive number"));
                        }
                        a.ln()
                    }
                }
            }
        };
        if !value.is_finite() {
            return Err(EvalError::NonFinite {
                subexpression: self.unparse(),
            });
        }
        Ok(value)
    }

    fn domain(&self, reason: &'static str) -> EvalError {
        EvalError::Domain {
            reason,
            subexpression: self.unparse(),
        }
    }

    fn no_point(&self) -> EvalError {
        EvalError::NoPoint {
            subexpression: self.unparse(),
        }
    }
}
