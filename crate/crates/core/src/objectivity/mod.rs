//! Objectivity (invariance under every proper rotation) of sets and scalar
//! functions.
//!
//! A set A ⊆ ℝ^m is objective iff Q·y ∈ A for all y ∈ A and Q ∈ SO(m); a
//! function f on an objective set is objective iff f(Q·y) = f(y) for all
//! such y and Q. For m ≥ 2 the objective sets are exactly the radial sets
//! Γ·S^{m−1}, and the objective functions are exactly f(x) = φ(‖x‖). For
//! m = 1 the group is trivial and everything is objective.
//!
//! Exact decisions are available for radial sets, finite sets and quadratic
//! forms. For black-box functions only a Monte-Carlo search for violations
//! is possible, which can refute objectivity but never certify it.

mod function;
mod quadratic;
mod radial;
mod report;

use thiserror::Error;

use crate::expr::{EvalContext, EvalError, Expression};
use crate::linalg::{LinalgError, Vector};
use crate::rotation::RotationError;

pub use function::{
    test_function_objectivity, test_function_objectivity_par, MonteCarloConfig,
    DEFAULT_FUNCTION_TOLERANCE,
};
pub use quadratic::{
    quadratic_objectivity, quadratic_vs_montecarlo_oracle, symmetric_part, QuadraticForm,
    DEFAULT_QUADRATIC_TOLERANCE,
};
pub use radial::{
    extract_profile, finite_set_objectivity, radial_membership, radial_set_closure_check,
    DomainSampler, RadialProfile, RadialSet, MEMBERSHIP_TOLERANCE,
};
pub use report::{Method, ObjectivityReport, ReportError, Verdict, Witness};

/// Why a black-box function could not be evaluated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("function value {0} is not finite")]
    NonFinite(f64),
    #[error("{0}")]
    Other(String),
}

/// A real-valued function on ℝ^m that may fail at some points.
pub trait ScalarFunction {
    fn eval(&self, x: &Vector) -> Result<f64, FunctionError>;
}

impl<F: Fn(&Vector) -> f64> ScalarFunction for F {
    fn eval(&self, x: &Vector) -> Result<f64, FunctionError> {
        Ok(self(x))
    }
}

impl ScalarFunction for Expression {
    fn eval(&self, x: &Vector) -> Result<f64, FunctionError> {
        Ok(self.evaluate(&EvalContext::point(x))?)
    }
}

/// Evaluates and rejects non-finite values.
pub(crate) fn eval_finite<F: ScalarFunction + ?Sized>(
    f: &F,
    x: &Vector,
) -> Result<f64, ObjectivityError> {
    match f.eval(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(ObjectivityError::Evaluation {
            x: x.as_slice().to_vec(),
            source: FunctionError::NonFinite(v),
        }),
        Err(source) => Err(ObjectivityError::Evaluation {
            x: x.as_slice().to_vec(),
            source,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectivityError {
    #[error("trial count must be at least {min}, got {found}")]
    InvalidTrials { min: usize, found: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("the point set is empty")]
    EmptySet,
    #[error("invalid radius set: {0}")]
    InvalidRadii(String),
    #[error("radius {radius} is not in the radius set")]
    RadiusOutsideSet { radius: f64 },
    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },
    #[error("a closed-form profile may only use t")]
    ProfileUsesPoint,
    #[error("no profile value at radius {radius}")]
    NoProfileValue { radius: f64 },
    #[error("evaluation failed at x = {x:?}: {source}")]
    Evaluation { x: Vec<f64>, source: FunctionError },
    #[error("profile evaluation failed at t = {radius}: {source}")]
    ProfileEvaluation { radius: f64, source: FunctionError },
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub(crate) fn check_tolerance(tol: f64) -> Result<(), ObjectivityError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ObjectivityError::InvalidTolerance(tol))
    }
}
