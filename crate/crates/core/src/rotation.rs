//! The proper rotation group SO(m): validation, construction and sampling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    self, determinant, gram_schmidt_complete, matmul, qr, transpose, LinalgError, SquareMatrix,
    Vector,
};

/// Default tolerance for `‖QᵀQ − I‖∞` and `|det Q − 1|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Tolerance on ‖u‖ = 1 for inputs of [`rotation_mapping`].
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// Below this norm the component of v orthogonal to u is treated as zero.
const COLINEAR_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RotationError {
    #[error("matrix is not orthogonal: ‖QᵀQ − I‖∞ = {residual:e} exceeds {tol:e}")]
    NotOrthogonal { residual: f64, tol: f64 },
    #[error("determinant is {det}, expected 1{}", if *.reflection { " (matrix is a reflection)" } else { "" })]
    WrongDeterminant { det: f64, reflection: bool },
    #[error("{which} is not a unit vector (norm {norm})")]
    NonUnit { which: &'static str, norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("no proper rotation of ℝ¹ maps {from} to {to}: the only element of SO(1) is [1] since det Q = 1")]
    NoProperRotation { from: f64, to: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Scales the validation tolerance with the order for m > 16.
pub fn effective_tolerance(tol: f64, order: usize) -> f64 {
    if order > 16 {
        tol * order as f64 / 16.0
    } else {
        tol
    }
}

/// A matrix Q with QᵀQ = I and det Q = 1, checked at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RotationMatrix(SquareMatrix);

impl RotationMatrix {
    pub fn identity(m: usize) -> Self {
        Self(SquareMatrix::identity(m))
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector, LinalgError> {
        linalg::apply(&self.0, x)
    }

    /// Qᵀ, which is also Q⁻¹.
    pub fn inverse(&self) -> Self {
        Self(transpose(&self.0))
    }

    /// The product `self · other`, revalidated at 1e-9.
    pub fn compose(&self, other: &RotationMatrix) -> Result<Self, RotationError> {
        validate_rotation(matmul(&self.0, &other.0)?, 1e-9)
    }

    /// Orthogonality residual ‖QᵀQ − I‖∞ (largest absolute entry).
    pub fn orthogonality_residual(&self) -> f64 {
        orthogonality_residual(&self.0)
    }
}

impl TryFrom<Vec<Vec<f64>>> for RotationMatrix {
    type Error = RotationError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        validate_rotation(SquareMatrix::from_rows(&rows)?, DEFAULT_TOLERANCE)
    }
}

impl From<RotationMatrix> for Vec<Vec<f64>> {
    fn from(q: RotationMatrix) -> Self {
        q.0.rows().map(<[f64]>::to_vec).collect()
    }
}

fn orthogonality_residual(q: &SquareMatrix) -> f64 {
    let qtq = matmul(&transpose(q), q).expect("same order");
    qtq.sub(&SquareMatrix::identity(q.order()))
        .expect("same order")
        .max_abs()
}

/// Accepts `q` as an element of SO(m) iff ‖QᵀQ − I‖∞ and |det Q − 1| are
/// both within `tol` (scaled by order beyond m = 16).
pub fn validate_rotation(q: SquareMatrix, tol: f64) -> Result<RotationMatrix, RotationError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(RotationError::InvalidTolerance(tol));
    }
    let tol = effective_tolerance(tol, q.order());
    let residual = orthogonality_residual(&q);
    if residual > tol {
        return Err(RotationError::NotOrthogonal { residual, tol });
    }
    let det = determinant(&q);
    if (det - 1.0).abs() > tol {
        return Err(RotationError::WrongDeterminant {
            det,
            reflection: (det + 1.0).abs() <= tol,
        });
    }
    Ok(RotationMatrix(q))
}

/// Counter-clockwise rotation of the plane by `theta` radians.
///
/// # Panics
///
/// If `theta` is not finite.
pub fn rotation_2d(theta: f64) -> RotationMatrix {
    assert!(theta.is_finite(), "rotation angle must be finite");
    let (s, c) = theta.sin_cos();
    plane_block(c, s)
}

fn plane_block(c: f64, s: f64) -> RotationMatrix {
    RotationMatrix(SquareMatrix::from_row_major(2, vec![c, -s, s, c]).expect("finite 2x2 entries"))
}

/// Cosine and sine of the angle from (1, 0) to (x, y).
fn unit_angle(x: f64, y: f64) -> (f64, f64) {
    let r = x.hypot(y);
    (x / r, y / r)
}

fn check_unit(which: &'static str, x: &Vector) -> Result<(), RotationError> {
    let norm = x.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(RotationError::NonUnit { which, norm });
    }
    Ok(())
}

/// Returns Q ∈ SO(m) with Q·u = v for unit vectors u, v.
///
/// For m = 2 this is the plane rotation taking u to v. For m ≥ 3 the plane
/// spanned by u and v is completed to an orthonormal basis B = (e₁, …, e_m)
/// with e₁ = u, and Q = B·diag(Q₂, I_{m−2})·Bᵀ. When v = ±u the plane is
/// spanned by u and the first canonical vector not parallel to u. For m = 1
/// only Q = [1] exists, so u must equal v.
pub fn rotation_mapping(u: &Vector, v: &Vector) -> Result<RotationMatrix, RotationError> {
    if u.dim() != v.dim() {
        return Err(RotationError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    check_unit("u", u)?;
    check_unit("v", v)?;
    let m = u.dim();
    let u = u.normalized().expect("unit vector");
    let v = v.normalized().expect("unit vector");

    let q = match m {
        1 => {
            if u[0].signum() != v[0].signum() {
                return Err(RotationError::NoProperRotation {
                    from: u[0],
                    to: v[0],
                });
            }
            SquareMatrix::identity(1)
        }
        2 => {
            let (c, s) = unit_angle(u.dot(&v)?, u[0] * v[1] - u[1] * v[0]);
            plane_block(c, s).into_matrix()
        }
        _ => {
            let along = u.dot(&v)?;
            let mut w = v.sub(&u.scaled(along))?;
            // second pass against u, for nearly parallel inputs
            let again = w.dot(&u)?;
            w = w.sub(&u.scaled(again))?;
            let prefix = if w.norm() > COLINEAR_EPS {
                vec![u.clone(), w.normalized().expect("non-zero")]
            } else {
                vec![u.clone()]
            };
            let basis = gram_schmidt_complete(&prefix, m)?;
            let (c, s) = unit_angle(v.dot(&basis[0])?, v.dot(&basis[1])?);
            let mut block = SquareMatrix::identity(m);
            block[(0, 0)] = c;
            block[(0, 1)] = -s;
            block[(1, 0)] = s;
            block[(1, 1)] = c;
            let b = SquareMatrix::from_columns(&basis)?;
            matmul(&matmul(&b, &block)?, &transpose(&b))?
        }
    };
    validate_rotation(q, DEFAULT_TOLERANCE)
}

/// Haar-uniform sample from SO(m).
///
/// A matrix of independent standard normals is QR-factorized, each column of
/// the orthogonal factor is multiplied by the sign of the matching diagonal
/// entry of R, and the last column is negated if the result is a reflection.
///
/// # Panics
///
/// If `m` is zero.
pub fn haar_sample<R: Rng + ?Sized>(m: usize, rng: &mut R) -> RotationMatrix {
    assert!(m >= 1, "dimension must be at least 1");
    let gaussian: Vec<f64> = (0..m * m).map(|_| rng.sample(StandardNormal)).collect();
    let g = SquareMatrix::from_row_major(m, gaussian).expect("finite normals");
    let (mut q, r) = qr(&g);
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            for i in 0..m {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if determinant(&q) < 0.0 {
        for i in 0..m {
            q[(i, m - 1)] = -q[(i, m - 1)];
        }
    }
    debug_assert!(validate_rotation(q.clone(), DEFAULT_TOLERANCE).is_ok());
    RotationMatrix(q)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;
    use crate::stream::SeedStream;

    fn m2(rows: [[f64; 2]; 2]) -> SquareMatrix {
        SquareMatrix::from_rows(&rows.map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn identity_validates() {
        for m in 1..=20 {
            assert!(validate_rotation(SquareMatrix::identity(m), DEFAULT_TOLERANCE).is_ok());
        }
    }

    #[test]
    fn reflection_is_reported_distinctly() {
        let err =
            validate_rotation(SquareMatrix::diagonal(&[1.0, -1.0]), DEFAULT_TOLERANCE).unwrap_err();
        assert_eq!(
            err,
            RotationError::WrongDeterminant {
                det: -1.0,
                reflection: true
            }
        );
    }

    #[test]
    fn shear_is_not_orthogonal() {
        // QᵀQ = [[1, 0.1], [0.1, 1.01]], residual 0.1
        let err = validate_rotation(m2([[1.0, 0.1], [0.0, 1.0]]), DEFAULT_TOLERANCE).unwrap_err();
        match err {
            RotationError::NotOrthogonal { residual, .. } => {
                assert!((residual - 0.1).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_tolerance() {
        assert!(matches!(
            validate_rotation(SquareMatrix::identity(2), 0.0),
            Err(RotationError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn tolerance_scales_beyond_sixteen() {
        assert_eq!(effective_tolerance(1e-10, 16), 1e-10);
        assert_eq!(effective_tolerance(1e-10, 32), 2e-10);
    }

    #[test]
    fn rotation_2d_examples() {
        assert_eq!(rotation_2d(0.0).into_matrix(), SquareMatrix::identity(2));
        let quarter = rotation_2d(FRAC_PI_2).into_matrix();
        assert!(
            quarter
                .sub(&m2([[0.0, -1.0], [1.0, 0.0]]))
                .unwrap()
                .max_abs()
                < 1e-15
        );
        let half = rotation_2d(PI).into_matrix();
        assert!(half.sub(&m2([[-1.0, 0.0], [0.0, -1.0]])).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn mapping_identity_when_equal() {
        let u = Vector::new(vec![0.6, 0.0, 0.8]).unwrap();
        let q = rotation_mapping(&u, &u).unwrap();
        assert!(q.apply(&u).unwrap().sub(&u).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn mapping_e1_to_e2_in_the_plane() {
        let q = rotation_mapping(&Vector::basis(2, 0), &Vector::basis(2, 1)).unwrap();
        assert_eq!(q.into_matrix(), m2([[0.0, -1.0], [1.0, 0.0]]));
    }

    #[test]
    fn mapping_in_one_dimension() {
        let plus = Vector::new(vec![1.0]).unwrap();
        let minus = Vector::new(vec![-1.0]).unwrap();
        assert_eq!(
            rotation_mapping(&plus, &plus).unwrap(),
            RotationMatrix::identity(1)
        );
        assert_eq!(
            rotation_mapping(&minus, &minus).unwrap(),
            RotationMatrix::identity(1)
        );
        assert!(matches!(
            rotation_mapping(&plus, &minus),
            Err(RotationError::NoProperRotation { .. })
        ));
    }

    #[test]
    fn mapping_antipodal_in_three_dimensions() {
        let e1 = Vector::basis(3, 0);
        let v = e1.scaled(-1.0);
        let q = rotation_mapping(&e1, &v).unwrap();
        assert!(q.apply(&e1).unwrap().sub(&v).unwrap().max_abs() <= 1e-10);
        assert!(q.orthogonality_residual() <= 1e-10);
        assert!((determinant(q.matrix()) - 1.0).abs() <= 1e-10);
        // deterministic plane choice: span{e1, e2}, so e3 is fixed
        let e3 = Vector::basis(3, 2);
        assert!(q.apply(&e3).unwrap().sub(&e3).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn mapping_errors() {
        let e1 = Vector::basis(2, 0);
        assert!(matches!(
            rotation_mapping(&e1, &Vector::basis(3, 0)),
            Err(RotationError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            rotation_mapping(&e1.scaled(2.0), &e1),
            Err(RotationError::NonUnit { which: "u", .. })
        ));
    }

    #[test]
    fn haar_in_one_dimension_is_identity() {
        let stream = SeedStream::new(11);
        for i in 0..200 {
            assert_eq!(
                haar_sample(1, &mut stream.substream(i)),
                RotationMatrix::identity(1)
            );
        }
    }

    #[test]
    fn haar_validates_and_reproduces() {
        let stream = SeedStream::new(5);
        for m in 1..=9 {
            let q = haar_sample(m, &mut stream.substream(m as u64));
            assert!(validate_rotation(q.matrix().clone(), DEFAULT_TOLERANCE).is_ok());
            let again = haar_sample(m, &mut stream.substream(m as u64));
            assert_eq!(q.matrix().as_row_major(), again.matrix().as_row_major());
        }
    }

    #[test]
    fn haar_image_of_e1_is_centered() {
        // Q·e₁ is uniform on the sphere, so every coordinate has mean 0
        let stream = SeedStream::new(2024);
        let mut sums = [0.0f64; 3];
        let n = 10_000;
        for i in 0..n {
            let q = haar_sample(3, &mut stream.substream(i));
            for (k, s) in sums.iter_mut().enumerate() {
                *s += q.matrix()[(k, 0)];
            }
        }
        for s in sums {
            assert!((s / n as f64).abs() < 0.05, "mean {}", s / n as f64);
        }
    }

    #[test]
    fn rotation_serde_revalidates() {
        let rows: Vec<Vec<f64>> = rotation_2d(0.3).into();
        assert!(RotationMatrix::try_from(rows).is_ok());
        let reflection = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
        assert!(RotationMatrix::try_from(reflection).is_err());
    }
}
