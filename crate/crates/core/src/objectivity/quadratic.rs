use super::function::{test_function_objectivity, MonteCarloConfig, DEFAULT_FUNCTION_TOLERANCE};
use super::radial::RadialSet;
use super::{check_tolerance, FunctionError, ObjectivityError, ScalarFunction};
use super::{Method, ObjectivityReport, Verdict, Witness};
use crate::linalg::{symmetric_eigen_extremes, LinalgError, SquareMatrix, Vector};
use crate::rotation::rotation_mapping;
use crate::stream::SeedStream;

/// Default tolerance of the exact decision, relative to max(1, ‖H_s‖∞).
pub const DEFAULT_QUADRATIC_TOLERANCE: f64 = 1e-10;

/// f(x) = xᵀHx. H need not be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    h: SquareMatrix,
}

impl QuadraticForm {
    pub fn new(h: SquareMatrix) -> Self {
        Self { h }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.order()
    }

    pub fn value(&self, x: &Vector) -> Result<f64, LinalgError> {
        self.h.quadratic_form(x)
    }
}

impl ScalarFunction for QuadraticForm {
    fn eval(&self, x: &Vector) -> Result<f64, FunctionError> {
        self.value(x)
            .map_err(|e| FunctionError::Other(e.to_string()))
    }
}

/// H_s = ½(H + Hᵀ), exactly symmetric: each mirrored pair is computed once.
pub fn symmetric_part(h: &SquareMatrix) -> SquareMatrix {
    let n = h.order();
    let mut s = h.clone();
    for i in 0..n {
        for j in i..n {
            let mean = 0.5 * (h[(i, j)] + h[(j, i)]);
            s[(i, j)] = mean;
            s[(j, i)] = mean;
        }
    }
    s
}

/// Exact decision: xᵀHx is objective iff H_s = αI.
///
/// α = trace(H_s)/m, and the test is ‖H_s − αI‖∞ ≤ tol·max(1, ‖H_s‖∞)
/// (largest absolute entry). A non-objective form gets the witness x = u_min,
/// Q taking u_min to u_max, so f(x) = λ_min and f(Q·x) = λ_max. For m = 1
/// every form is objective.
pub fn quadratic_objectivity(
    qf: &QuadraticForm,
    tol: f64,
) -> Result<ObjectivityReport, ObjectivityError> {
    check_tolerance(tol)?;
    let m = qf.dim();
    let hs = symmetric_part(&qf.h);
    let alpha = hs.trace() / m as f64;
    let scaled = tol * hs.max_abs().max(1.0);
    if m == 1 {
        return Ok(ObjectivityReport::objective(
            Method::ExactQuadratic,
            Some(alpha),
            0,
            scaled,
        ));
    }
    let residual = hs.sub(&SquareMatrix::identity(m).scaled(alpha))?.max_abs();
    if residual <= scaled {
        return Ok(ObjectivityReport::objective(
            Method::ExactQuadratic,
            Some(alpha),
            0,
            scaled,
        ));
    }
    let extremes = symmetric_eigen_extremes(&hs)?;
    let q = rotation_mapping(&extremes.u_min, &extremes.u_max)?;
    let x = extremes.u_min;
    let f_x = qf.value(&x)?;
    let f_qx = qf.value(&q.apply(&x)?)?;
    let witness = Witness { x, q, f_x, f_qx };
    // λ_max − λ_min ≥ ‖H_s − αI‖₂ ≥ residual > scaled
    Ok(
        ObjectivityReport::not_objective(Method::ExactQuadratic, witness, None, 0, scaled)
            .expect("eigen gap exceeds the residual"),
    )
}

/// Cross-checks [`quadratic_objectivity`] against Monte-Carlo testing of
/// x ↦ xᵀHx at tolerance 1e-9 on the shell 0.1 ≤ ‖x‖ ≤ 10.
///
/// Returns true iff the verdicts agree: objective with no violation found,
/// or not objective with a violation found. The synthesized witness point is
/// tried first.
pub fn quadratic_vs_montecarlo_oracle(
    qf: &QuadraticForm,
    trials: usize,
    stream: &SeedStream,
) -> Result<bool, ObjectivityError> {
    if trials < 100 {
        return Err(ObjectivityError::InvalidTrials {
            min: 100,
            found: trials,
        });
    }
    let m = qf.dim();
    let exact = quadratic_objectivity(qf, DEFAULT_QUADRATIC_TOLERANCE)?;
    let probes = exact
        .witness()
        .map(|w| vec![w.x.clone()])
        .unwrap_or_default();
    let config = MonteCarloConfig::new(trials, DEFAULT_FUNCTION_TOLERANCE).with_probes(probes);
    let sampler = RadialSet::shell(m, 0.1, 10.0)?;
    let sampled = test_function_objectivity(qf, m, &sampler, &config, stream)?;
    let exact_objective = exact.verdict() == Verdict::Objective;
    let violation_found = sampled.verdict() == Verdict::NotObjective;
    Ok(exact_objective != violation_found)
}
