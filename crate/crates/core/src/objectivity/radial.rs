use rand::Rng;

use super::{eval_finite, FunctionError, ObjectivityError, ScalarFunction};
use super::{Method, ObjectivityReport, Witness};
use crate::expr::{EvalContext, Expression};
use crate::linalg::Vector;
use crate::rotation::{haar_sample, rotation_mapping, UNIT_TOLERANCE};
use crate::stream::SeedStream;

/// Absolute tolerance on ‖x‖ at interval endpoints and isolated radii.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// Γ·S^{m−1} = { t·u : t ∈ Γ, ‖u‖ = 1 } for a radius set Γ ⊂ [0, ∞) given as
/// a finite union of closed intervals and isolated points.
///
/// The representation is normalized: intervals are sorted and disjoint,
/// degenerate intervals [a, a] become points, and no point lies inside an
/// interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSet {
    dim: usize,
    intervals: Vec<(f64, f64)>,
    points: Vec<f64>,
}

impl RadialSet {
    pub fn new(
        dim: usize,
        intervals: Vec<(f64, f64)>,
        points: Vec<f64>,
    ) -> Result<Self, ObjectivityError> {
        if dim == 0 {
            return Err(ObjectivityError::ZeroDimension);
        }
        let bad = |msg: String| Err(ObjectivityError::InvalidRadii(msg));
        let mut spans = Vec::new();
        let mut isolated = Vec::new();
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite()) {
                return bad(format!("interval [{a}, {b}] is not finite"));
            }
            if a < 0.0 {
                return bad(format!("interval [{a}, {b}] has a negative radius"));
            }
            if a > b {
                return bad(format!("interval [{a}, {b}] is reversed"));
            }
            if a == b {
                isolated.push(a);
            } else {
                spans.push((a, b));
            }
        }
        for &p in &points {
            if !p.is_finite() || p < 0.0 {
                return bad(format!("radius {p} is negative or not finite"));
            }
            isolated.push(p);
        }
        if spans.is_empty() && isolated.is_empty() {
            return bad("the radius set is empty".into());
        }

        spans.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (a, b) in spans {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        isolated.sort_by(f64::total_cmp);
        isolated.dedup();
        isolated.retain(|&p| !merged.iter().any(|&(a, b)| a <= p && p <= b));
        Ok(Self {
            dim,
            intervals: merged,
            points: isolated,
        })
    }

    /// [a, b]·S^{m−1}.
    pub fn shell(dim: usize, a: f64, b: f64) -> Result<Self, ObjectivityError> {
        Self::new(dim, vec![(a, b)], vec![])
    }

    /// The sphere of radius r.
    pub fn sphere(dim: usize, r: f64) -> Result<Self, ObjectivityError> {
        Self::new(dim, vec![], vec![r])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Whether r ∈ Γ up to `tol` at endpoints and isolated points.
    pub fn contains_radius(&self, r: f64, tol: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| a - tol <= r && r <= b + tol)
            || self.points.iter().any(|&p| (r - p).abs() <= tol)
    }

    fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Mass given to each isolated point when sampling radii.
    fn atom_weight(&self) -> f64 {
        if self.intervals.is_empty() {
            1.0
        } else {
            self.total_length() / self.intervals.len() as f64
        }
    }

    /// Draws a radius uniformly with respect to length on the intervals,
    /// plus an atom at each isolated point weighted by the mean interval
    /// length (or 1 without intervals).
    pub fn sample_radius<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let atom = self.atom_weight();
        let mass = self.total_length() + atom * self.points.len() as f64;
        let mut u = rng.random::<f64>() * mass;
        for &(a, b) in &self.intervals {
            let len = b - a;
            if u < len {
                return a + u;
            }
            u -= len;
        }
        let k = ((u / atom) as usize).min(self.points.len().saturating_sub(1));
        match self.points.get(k) {
            Some(&p) => p,
            // rounding pushed u past the last interval
            None => self.intervals.last().expect("non-empty").1,
        }
    }
}

/// Random points of a domain.
pub trait DomainSampler {
    fn dim(&self) -> usize;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector;
}

impl DomainSampler for RadialSet {
    fn dim(&self) -> usize {
        self.dim
    }

    /// Radius from [`RadialSet::sample_radius`], direction Q·e₁ for a
    /// Haar-random Q.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        let r = self.sample_radius(rng);
        let q = haar_sample(self.dim, rng);
        q.matrix().column(0).scaled(r)
    }
}

/// x ∈ Γ·S^{m−1}, i.e. ‖x‖ ∈ Γ within [`MEMBERSHIP_TOLERANCE`].
pub fn radial_membership(set: &RadialSet, x: &Vector) -> Result<bool, ObjectivityError> {
    if x.dim() != set.dim {
        return Err(ObjectivityError::DimensionMismatch {
            expected: set.dim,
            found: x.dim(),
        });
    }
    Ok(set.contains_radius(x.norm(), MEMBERSHIP_TOLERANCE))
}

/// Samples points of the set and Haar rotations and checks that no rotated
/// point leaves the set.
///
/// Radial sets are always closed under rotations, so any escape found here
/// is a numerical defect; it is still reported as `NotObjective` with the
/// offending pair. The membership tolerance grows with ‖x‖ to absorb the
/// roundoff of applying Q.
pub fn radial_set_closure_check(
    set: &RadialSet,
    trials: usize,
    stream: &SeedStream,
) -> Result<ObjectivityReport, ObjectivityError> {
    if trials == 0 {
        return Err(ObjectivityError::InvalidTrials { min: 1, found: 0 });
    }
    let m = set.dim;
    for trial in 0..trials {
        let mut rng = stream.substream(trial as u64);
        let x = set.sample(&mut rng);
        let q = haar_sample(m, &mut rng);
        let qx = q.apply(&x)?;
        let tol = MEMBERSHIP_TOLERANCE * x.norm().max(1.0);
        let inside = |y: &Vector| set.contains_radius(y.norm(), tol);
        if inside(&x) && !inside(&qx) {
            let witness = Witness {
                x,
                q,
                f_x: 1.0,
                f_qx: 0.0,
            };
            return ObjectivityReport::not_objective(
                Method::RadialRepresentation,
                witness,
                None,
                trial + 1,
                MEMBERSHIP_TOLERANCE,
            )
            .map_err(|e| unreachable!("indicator witness has gap 1: {e}"));
        }
    }
    Ok(ObjectivityReport::objective(
        Method::RadialRepresentation,
        None,
        trials,
        MEMBERSHIP_TOLERANCE,
    ))
}

/// Candidate unit directions: ±e_k first, then an endless family of
/// pairwise non-parallel directions.
fn candidate_directions(m: usize) -> impl Iterator<Item = Vector> {
    let signed_basis = (0..2 * m).map(move |k| {
        let sign = if k < m { 1.0 } else { -1.0 };
        Vector::basis(m, k % m).scaled(sign)
    });
    let generic = (1u64..).map(move |k| {
        let v: Vec<f64> = (0..m)
            .map(|j| 1.0 / (1.0 + (k * j as u64) as f64))
            .collect();
        Vector::new(v)
            .expect("finite")
            .normalized()
            .expect("non-zero")
    });
    signed_basis.chain(generic)
}

/// Decides objectivity of a finite set.
///
/// For m = 1 every set is objective. For m ≥ 2 a non-empty Γ·S^{m−1} is
/// infinite unless Γ = {0}, so the set is objective iff every point is the
/// origin; otherwise the witness rotates a non-zero point onto a direction
/// where the set has no point.
pub fn finite_set_objectivity(
    points: &[Vector],
    m: usize,
) -> Result<ObjectivityReport, ObjectivityError> {
    if m == 0 {
        return Err(ObjectivityError::ZeroDimension);
    }
    if points.is_empty() {
        return Err(ObjectivityError::EmptySet);
    }
    if let Some(p) = points.iter().find(|p| p.dim() != m) {
        return Err(ObjectivityError::DimensionMismatch {
            expected: m,
            found: p.dim(),
        });
    }
    let objective = || {
        ObjectivityReport::objective(Method::RadialRepresentation, None, 0, MEMBERSHIP_TOLERANCE)
    };
    if m == 1 {
        return Ok(objective());
    }
    let Some(p) = points.iter().find(|p| p.norm() > MEMBERSHIP_TOLERANCE) else {
        return Ok(objective());
    };
    let r = p.norm();
    let u = p.normalized().expect("non-zero");
    // well clear of every point, not just outside roundoff
    let clearance = 1e-6 * r;
    let occupied = |y: &Vector| {
        points
            .iter()
            .any(|a| a.sub(y).map(|d| d.norm() <= clearance).unwrap_or(false))
    };
    let target = candidate_directions(m)
        .find(|d| !occupied(&d.scaled(r)))
        .expect("finitely many points cannot block every direction");
    let q = rotation_mapping(&u, &target)?;
    let qx = q.apply(p)?;
    debug_assert!(!occupied(&qx));
    let witness = Witness {
        x: p.clone(),
        q,
        f_x: 1.0,
        f_qx: 0.0,
    };
    ObjectivityReport::not_objective(
        Method::RadialRepresentation,
        witness,
        None,
        0,
        MEMBERSHIP_TOLERANCE,
    )
    .map_err(|e| unreachable!("indicator witness has gap 1: {e}"))
}

/// A radial profile φ with f(x) = φ(‖x‖).
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// φ(t) given by an expression in `t` alone.
    Closed(Expression),
    /// Samples (t, φ(t)), looked up exactly; no interpolation.
    Sampled(Vec<(f64, f64)>),
}

impl RadialProfile {
    pub fn closed(expr: Expression) -> Result<Self, ObjectivityError> {
        if expr.uses_point() {
            return Err(ObjectivityError::ProfileUsesPoint);
        }
        Ok(RadialProfile::Closed(expr))
    }

    pub fn value(&self, t: f64) -> Result<f64, ObjectivityError> {
        match self {
            RadialProfile::Closed(e) => e.evaluate(&EvalContext::profile(t)).map_err(|err| {
                ObjectivityError::ProfileEvaluation {
                    radius: t,
                    source: FunctionError::Eval(err),
                }
            }),
            RadialProfile::Sampled(rows) => rows
                .iter()
                .find(|(r, _)| (r - t).abs() <= MEMBERSHIP_TOLERANCE)
                .map(|&(_, v)| v)
                .ok_or(ObjectivityError::NoProfileValue { radius: t }),
        }
    }

    /// φ(‖x‖).
    pub fn reconstruct(&self, x: &Vector) -> Result<f64, ObjectivityError> {
        self.value(x.norm())
    }

    pub fn samples(&self) -> Option<&[(f64, f64)]> {
        match self {
            RadialProfile::Sampled(rows) => Some(rows),
            RadialProfile::Closed(_) => None,
        }
    }
}

/// The function x ↦ φ(‖x‖).
impl ScalarFunction for RadialProfile {
    fn eval(&self, x: &Vector) -> Result<f64, FunctionError> {
        self.reconstruct(x).map_err(|e| match e {
            ObjectivityError::ProfileEvaluation { source, .. } => source,
            other => FunctionError::Other(other.to_string()),
        })
    }
}

/// φ(t) = f(t·u₀) on the given grid of radii from Γ.
///
/// The profile exists for any f; whether f(x) = φ(‖x‖) actually holds is
/// what separates objective functions from the rest.
pub fn extract_profile<F: ScalarFunction + ?Sized>(
    f: &F,
    gamma: &RadialSet,
    u0: &Vector,
    grid: &[f64],
) -> Result<RadialProfile, ObjectivityError> {
    if u0.dim() != gamma.dim {
        return Err(ObjectivityError::DimensionMismatch {
            expected: gamma.dim,
            found: u0.dim(),
        });
    }
    let norm = u0.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(ObjectivityError::NonUnitDirection { norm });
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        if !gamma.contains_radius(t, MEMBERSHIP_TOLERANCE) {
            return Err(ObjectivityError::RadiusOutsideSet { radius: t });
        }
        let value = eval_finite(f, &u0.scaled(t)).map_err(|e| match e {
            ObjectivityError::Evaluation { source, .. } => {
                ObjectivityError::ProfileEvaluation { radius: t, source }
            }
            other => other,
        })?;
        rows.push((t, value));
    }
    Ok(RadialProfile::Sampled(rows))
}
