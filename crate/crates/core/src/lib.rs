//! Rotations in SO(m) and rotational-invariance ("objectivity") checks.
//!
//! * [`linalg`]: small dense vectors and matrices, QR, Gram–Schmidt
//!   completion and a Jacobi eigensolver.
//! * [`rotation`]: validated rotation matrices, the rotation taking one unit
//!   vector to another, and Haar sampling.
//! * [`objectivity`]: radial sets and profiles, the exact decision for
//!   quadratic forms, and Monte-Carlo testing of arbitrary functions.
//! * [`expr`]: the expression language used to describe functions.

pub mod expr;
pub mod linalg;
pub mod objectivity;
pub mod rotation;
pub mod stream;

pub use expr::{parse, EvalContext, EvalError, Expression, ParseError};
pub use linalg::{LinalgError, SquareMatrix, Vector};
pub use objectivity::{
    DomainSampler, Method, ObjectivityError, ObjectivityReport, QuadraticForm, RadialProfile,
    RadialSet, ScalarFunction, Verdict, Witness,
};
pub use rotation::{RotationError, RotationMatrix};
pub use stream::SeedStream;
