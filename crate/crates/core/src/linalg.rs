//! Dense linear algebra for small orders.
//!
//! Matrices are square and stored row-major. Everything here is O(m³) textbook
//! code: LU with partial pivoting for determinants, Householder QR, modified
//! Gram–Schmidt with basis completion, and a cyclic Jacobi solver for
//! symmetric matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Residual below which a Gram–Schmidt candidate is considered dependent.
pub const DEPENDENCE_THRESHOLD: f64 = 1e-8;

const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
const SYMMETRY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors and matrices must have dimension at least 1")]
    Empty,
    #[error("non-finite entry {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("expected {expected} entries for a square matrix, found {found}")]
    NotSquare { expected: usize, found: usize },
    #[error(
        "prefix vector {index} is linearly dependent on the preceding ones (residual {residual:e})"
    )]
    DependentPrefix { index: usize, residual: f64 },
    #[error("prefix has {count} vectors, more than the dimension {m}")]
    PrefixTooLong { count: usize, m: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
}

fn check_finite(values: &[f64]) -> Result<(), LinalgError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(LinalgError::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// A column vector in ℝ^m with m ≥ 1 and finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        check_finite(&entries)?;
        Ok(Self(entries))
    }

    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1, "dimension must be at least 1");
        Self(vec![0.0; m])
    }

    /// The canonical basis vector e_{index+1} of ℝ^m.
    pub fn basis(m: usize, index: usize) -> Self {
        let mut v = Self::zeros(m);
        v.0[index] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> Result<f64, LinalgError> {
        self.same_dim(other)?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector, LinalgError> {
        self.same_dim(other)?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    fn same_dim(&self, other: &Vector) -> Result<(), LinalgError> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = LinalgError;

    fn try_from(entries: Vec<f64>) -> Result<Self, Self::Error> {
        Vector::new(entries)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Square matrix of order m ≥ 1, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Builds a matrix from `order * order` row-major entries.
    pub fn from_row_major(order: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if order == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != order * order {
            return Err(LinalgError::NotSquare {
                expected: order * order,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { order, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let order = rows.len();
        let mut data = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(LinalgError::DimensionMismatch {
                    expected: order,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(order, data)
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let data = (0..order * order)
            .map(|k| f(k / order, k % order))
            .collect();
        Self { order, data }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { 0.0 })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self, LinalgError> {
        let order = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.dim() != order) {
            return Err(LinalgError::DimensionMismatch {
                expected: order,
                found: bad.dim(),
            });
        }
        Ok(Self::from_fn(order, |i, j| columns[j][i]))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.order)
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.order).map(|i| self[(i, j)]).collect())
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn frobenius(&self) -> f64 {
        norm(&self.data)
    }

    pub fn sub(&self, other: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
        self.same_order(other)?;
        Ok(Self {
            order: self.order,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> SquareMatrix {
        Self {
            order: self.order,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// xᵀ A x.
    pub fn quadratic_form(&self, x: &Vector) -> Result<f64, LinalgError> {
        let ax = apply(self, x)?;
        x.dot(&ax)
    }

    /// Largest |a_ij − a_ji|.
    pub fn asymmetry(&self) -> f64 {
        let n = self.order;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    fn same_order(&self, other: &SquareMatrix) -> Result<(), LinalgError> {
        if self.order != other.order {
            return Err(LinalgError::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.order + j]
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.6}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    // scaled to avoid overflow for large entries
    let scale = max_abs(a);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = a.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * sum.sqrt()
}

pub(crate) fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn matmul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    a.same_order(b)?;
    let n = a.order;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[(k, j)];
            }
        }
    }
    Ok(SquareMatrix {
        order: n,
        data: out,
    })
}

/// Matrix–vector product Q·x, treating x as a column.
pub fn apply(q: &SquareMatrix, x: &Vector) -> Result<Vector, LinalgError> {
    if q.order != x.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: q.order,
            found: x.dim(),
        });
    }
    let out: Vec<f64> = q.rows().map(|row| dot(row, x.as_slice())).collect();
    check_finite(&out)?;
    Ok(Vector(out))
}

pub fn transpose(a: &SquareMatrix) -> SquareMatrix {
    SquareMatrix::from_fn(a.order, |i, j| a[(j, i)])
}

/// Determinant by LU factorization with partial pivoting.
///
/// Orders 1 to 3 use the closed forms.
pub fn determinant(a: &SquareMatrix) -> f64 {
    let m = |i, j| a[(i, j)];
    match a.order {
        1 => m(0, 0),
        2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
        3 => {
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        n => {
            let mut lu = a.data.clone();
            let mut det = 1.0;
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&r, &s| lu[r * n + col].abs().total_cmp(&lu[s * n + col].abs()))
                    .expect("non-empty range");
                if lu[pivot * n + col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    for j in 0..n {
                        lu.swap(col * n + j, pivot * n + j);
                    }
                    det = -det;
                }
                let p = lu[col * n + col];
                det *= p;
                for r in (col + 1)..n {
                    let factor = lu[r * n + col] / p;
                    if factor == 0.0 {
                        continue;
                    }
                    for j in col..n {
                        lu[r * n + j] -= factor * lu[col * n + j];
                    }
                }
            }
            det
        }
    }
}

/// Householder QR factorization `a = Q·R`.
///
/// Returns `(Q, R)` with Q orthogonal and R upper triangular. No sign
/// normalization is applied to the diagonal of R.
pub fn qr(a: &SquareMatrix) -> (SquareMatrix, SquareMatrix) {
    let n = a.order;
    let mut r = a.clone();
    let mut q = SquareMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let column: Vec<f64> = (k..n).map(|i| r[(i, k)]).collect();
        let alpha = norm(&column);
        if alpha == 0.0 {
            continue;
        }
        let alpha = if column[0] > 0.0 { -alpha } else { alpha };
        let mut v = column;
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            continue;
        }
        // R <- (I - 2vvᵀ/vᵀv) R on rows k..n
        for j in 0..n {
            let s: f64 = (k..n).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..n {
                r[(i, j)] -= s * v[i - k];
            }
        }
        // Q <- Q (I - 2vvᵀ/vᵀv) on columns k..n
        for i in 0..n {
            let s: f64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum::<f64>() * 2.0 / vnorm2;
            for j in k..n {
                q[(i, j)] -= s * v[j - k];
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            r[(i, j)] = 0.0;
        }
    }
    (q, r)
}

fn orthogonalize_against(candidate: &mut [f64], basis: &[Vec<f64>]) {
    // two modified Gram–Schmidt passes keep the result orthogonal to
    // working precision even after heavy cancellation
    for _ in 0..2 {
        for b in basis {
            let proj = dot(candidate, b);
            for (c, bi) in candidate.iter_mut().zip(b) {
                *c -= proj * bi;
            }
        }
    }
}

/// Orthonormal basis of ℝ^m extending `prefix`.
///
/// The prefix is orthonormalized with modified Gram–Schmidt, so the first
/// `prefix.len()` outputs span the same subspace as the prefix. The basis is
/// then completed with the canonical vectors e₁, e₂, … in index order,
/// skipping any whose residual norm is below [`DEPENDENCE_THRESHOLD`].
pub fn gram_schmidt_complete(prefix: &[Vector], m: usize) -> Result<Vec<Vector>, LinalgError> {
    if m == 0 {
        return Err(LinalgError::Empty);
    }
    if prefix.len() > m {
        return Err(LinalgError::PrefixTooLong {
            count: prefix.len(),
            m,
        });
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (index, v) in prefix.iter().enumerate() {
        if v.dim() != m {
            return Err(LinalgError::DimensionMismatch {
                expected: m,
                found: v.dim(),
            });
        }
        let scale = v.norm();
        let mut w = v.as_slice().to_vec();
        orthogonalize_against(&mut w, &basis);
        let residual = if scale > 0.0 { norm(&w) / scale } else { 0.0 };
        if residual < DEPENDENCE_THRESHOLD {
            return Err(LinalgError::DependentPrefix { index, residual });
        }
        let n = norm(&w);
        w.iter_mut().for_each(|c| *c /= n);
        basis.push(w);
    }
    for k in 0..m {
        if basis.len() == m {
            break;
        }
        let mut w = vec![0.0; m];
        w[k] = 1.0;
        orthogonalize_against(&mut w, &basis);
        let n = norm(&w);
        if n < DEPENDENCE_THRESHOLD {
            continue;
        }
        w.iter_mut().for_each(|c| *c /= n);
        basis.push(w);
    }
    debug_assert_eq!(basis.len(), m);
    Ok(basis.into_iter().map(Vector).collect())
}

/// Extreme eigenpairs of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenExtremes {
    pub lambda_min: f64,
    pub u_min: Vector,
    pub lambda_max: f64,
    pub u_max: Vector,
}

/// All eigenvalues (unsorted) and the matrix whose columns are the
/// corresponding unit eigenvectors, by cyclic Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius mass is at most
/// 1e-12 times the Frobenius norm of `s`.
pub fn symmetric_eigen(s: &SquareMatrix) -> Result<(Vec<f64>, SquareMatrix), LinalgError> {
    let scale = s.frobenius();
    let asymmetry = s.asymmetry();
    if asymmetry > SYMMETRY_REL_TOL * scale {
        return Err(LinalgError::NotSymmetric { asymmetry });
    }
    let n = s.order;
    let mut a = s.clone();
    // work on the exactly symmetrized copy
    for i in 0..n {
        for j in (i + 1)..n {
            let mean = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = mean;
            a[(j, i)] = mean;
        }
    }
    let mut v = SquareMatrix::identity(n);
    let off = |a: &SquareMatrix| {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += a[(i, j)] * a[(i, j)];
                }
            }
        }
        sum.sqrt()
    };
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&a) <= JACOBI_REL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok((values, v))
}

/// Smallest and largest eigenvalues of a symmetric matrix with unit
/// eigenvectors.
pub fn symmetric_eigen_extremes(s: &SquareMatrix) -> Result<EigenExtremes, LinalgError> {
    let (values, vectors) = symmetric_eigen(s)?;
    let argmin = (0..values.len())
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("order ≥ 1");
    let argmax = (0..values.len())
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("order ≥ 1");
    let unit = |j: usize| {
        let c = vectors.column(j);
        c.normalized().unwrap_or(c)
    };
    Ok(EigenExtremes {
        lambda_min: values[argmin],
        u_min: unit(argmin),
        lambda_max: values[argmax],
        u_max: unit(argmax),
    })
}
