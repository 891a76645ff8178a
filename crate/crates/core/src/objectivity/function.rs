use rayon::prelude::*;

use super::radial::DomainSampler;
use super::{check_tolerance, eval_finite, ObjectivityError, ScalarFunction};
use super::{Method, ObjectivityReport, Witness};
use crate::linalg::Vector;
use crate::rotation::{haar_sample, rotation_mapping};
use crate::stream::SeedStream;

/// Default relative violation tolerance for black-box functions.
pub const DEFAULT_FUNCTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    pub trials: usize,
    /// A trial fails when |f(Q·x) − f(x)| > tol·max(1, |f(x)|).
    pub tol: f64,
    /// Points tried first, in order, before sampling from the domain. Each
    /// still uses up one trial.
    pub probes: Vec<Vector>,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            tol: DEFAULT_FUNCTION_TOLERANCE,
            probes: Vec::new(),
        }
    }
}

impl MonteCarloConfig {
    pub fn new(trials: usize, tol: f64) -> Self {
        Self {
            trials,
            tol,
            probes: Vec::new(),
        }
    }

    pub fn with_probes(mut self, probes: Vec<Vector>) -> Self {
        self.probes = probes;
        self
    }

    fn validate(&self, m: usize) -> Result<(), ObjectivityError> {
        if self.trials == 0 {
            return Err(ObjectivityError::InvalidTrials { min: 1, found: 0 });
        }
        check_tolerance(self.tol)?;
        if let Some(p) = self.probes.iter().find(|p| p.dim() != m) {
            return Err(ObjectivityError::DimensionMismatch {
                expected: m,
                found: p.dim(),
            });
        }
        Ok(())
    }
}

/// One trial: a direct check f(Q·x) against f(x) for Haar-random Q, then a
/// profile check f(‖x‖·e₁) against f(x). A profile violation is turned into
/// a witness through the rotation taking x/‖x‖ to e₁.
fn run_trial<F, S>(
    f: &F,
    m: usize,
    sampler: &S,
    config: &MonteCarloConfig,
    stream: &SeedStream,
    trial: usize,
) -> Result<Option<Witness>, ObjectivityError>
where
    F: ScalarFunction + ?Sized,
    S: DomainSampler,
{
    let mut rng = stream.substream(trial as u64);
    let x = match config.probes.get(trial) {
        Some(p) => p.clone(),
        None => sampler.sample(&mut rng),
    };
    let q = haar_sample(m, &mut rng);
    let f_x = eval_finite(f, &x)?;
    let threshold = config.tol * f_x.abs().max(1.0);

    let f_qx = eval_finite(f, &q.apply(&x)?)?;
    if (f_qx - f_x).abs() > threshold {
        return Ok(Some(Witness { x, q, f_x, f_qx }));
    }

    let r = x.norm();
    if r > 0.0 {
        let e1 = Vector::basis(m, 0);
        let f_profile = eval_finite(f, &e1.scaled(r))?;
        if (f_profile - f_x).abs() > threshold {
            let direction = x.normalized().expect("non-zero");
            let q = rotation_mapping(&direction, &e1)?;
            let f_qx = eval_finite(f, &q.apply(&x)?)?;
            if (f_qx - f_x).abs() > threshold {
                return Ok(Some(Witness { x, q, f_x, f_qx }));
            }
        }
    }
    Ok(None)
}

fn finish(
    outcome: Option<(usize, Witness)>,
    config: &MonteCarloConfig,
) -> Result<ObjectivityReport, ObjectivityError> {
    match outcome {
        None => Ok(ObjectivityReport::inconclusive(config.trials, config.tol)),
        Some((trial, witness)) => Ok(ObjectivityReport::not_objective(
            Method::MonteCarlo,
            witness,
            None,
            trial + 1,
            config.tol,
        )
        .expect("violations exceed tol·max(1, |f(x)|) ≥ tol")),
    }
}

/// Searches for (x, Q) with f(Q·x) ≠ f(x), x drawn from `sampler`.
///
/// Stops at the first violation (`NotObjective`, with `trials` set to the
/// number of trials used). Without a violation the verdict is
/// `Inconclusive`: sampling cannot certify invariance. For m = 1 the only
/// rotation is the identity and the verdict is `Objective` at once.
///
/// Trial `i` draws from substream `i` of `stream`, so the report matches
/// [`test_function_objectivity_par`] exactly.
pub fn test_function_objectivity<F, S>(
    f: &F,
    m: usize,
    sampler: &S,
    config: &MonteCarloConfig,
    stream: &SeedStream,
) -> Result<ObjectivityReport, ObjectivityError>
where
    F: ScalarFunction + ?Sized,
    S: DomainSampler,
{
    if let Some(early) = preflight(m, sampler, config)? {
        return Ok(early);
    }
    for trial in 0..config.trials {
        if let Some(w) = run_trial(f, m, sampler, config, stream, trial)? {
            return finish(Some((trial, w)), config);
        }
    }
    finish(None, config)
}

/// Parallel version of [`test_function_objectivity`] with identical output.
pub fn test_function_objectivity_par<F, S>(
    f: &F,
    m: usize,
    sampler: &S,
    config: &MonteCarloConfig,
    stream: &SeedStream,
) -> Result<ObjectivityReport, ObjectivityError>
where
    F: ScalarFunction + Sync + ?Sized,
    S: DomainSampler + Sync,
{
    if let Some(early) = preflight(m, sampler, config)? {
        return Ok(early);
    }
    let first = (0..config.trials).into_par_iter().find_map_first(|trial| {
        match run_trial(f, m, sampler, config, stream, trial) {
            Ok(None) => None,
            Ok(Some(w)) => Some(Ok((trial, w))),
            Err(e) => Some(Err(e)),
        }
    });
    finish(first.transpose()?, config)
}

fn preflight<S: DomainSampler>(
    m: usize,
    sampler: &S,
    config: &MonteCarloConfig,
) -> Result<Option<ObjectivityReport>, ObjectivityError> {
    if m == 0 {
        return Err(ObjectivityError::ZeroDimension);
    }
    if sampler.dim() != m {
        return Err(ObjectivityError::DimensionMismatch {
            expected: m,
            found: sampler.dim(),
        });
    }
    config.validate(m)?;
    if m == 1 {
        return Ok(Some(ObjectivityReport::objective(
            Method::MonteCarlo,
            None,
            0,
            config.tol,
        )));
    }
    Ok(None)
}
