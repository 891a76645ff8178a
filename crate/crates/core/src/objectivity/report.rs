use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Vector;
use crate::rotation::RotationMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Objective,
    NotObjective,
    /// No violation found, but sampling cannot certify invariance.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactQuadratic,
    RadialRepresentation,
    MonteCarlo,
}

/// A point and a rotation with f(Q·x) ≠ f(x).
///
/// For sets, `f` is the indicator function: `f_x = 1` and `f_qx = 0` mean
/// x lies in the set but Q·x does not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vector,
    pub q: RotationMatrix,
    pub f_x: f64,
    pub f_qx: f64,
}

impl Witness {
    pub fn gap(&self) -> f64 {
        (self.f_x - self.f_qx).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("a not_objective report needs a witness")]
    MissingWitness,
    #[error("only not_objective reports carry a witness")]
    UnexpectedWitness,
    #[error("witness gap {gap:e} does not exceed the tolerance {tolerance:e}")]
    WeakWitness { gap: f64, tolerance: f64 },
    #[error("an inconclusive verdict is only possible for Monte-Carlo testing")]
    InconclusiveExact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawReport {
    verdict: Verdict,
    method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    trials: usize,
    tolerance: f64,
}

/// Outcome of an objectivity check.
///
/// Invariants, enforced by the constructors and on deserialization: a
/// `NotObjective` verdict carries a witness whose gap exceeds `tolerance`,
/// no other verdict carries one, and `Inconclusive` only comes from
/// Monte-Carlo testing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReport", into = "RawReport")]
pub struct ObjectivityReport {
    raw: RawReport,
}

impl ObjectivityReport {
    pub fn objective(method: Method, alpha: Option<f64>, trials: usize, tolerance: f64) -> Self {
        Self {
            raw: RawReport {
                verdict: Verdict::Objective,
                method,
                alpha,
                witness: None,
                trials,
                tolerance,
            },
        }
    }

    pub fn inconclusive(trials: usize, tolerance: f64) -> Self {
        Self {
            raw: RawReport {
                verdict: Verdict::Inconclusive,
                method: Method::MonteCarlo,
                alpha: None,
                witness: None,
                trials,
                tolerance,
            },
        }
    }

    pub fn not_objective(
        method: Method,
        witness: Witness,
        alpha: Option<f64>,
        trials: usize,
        tolerance: f64,
    ) -> Result<Self, ReportError> {
        Self::try_from(RawReport {
            verdict: Verdict::NotObjective,
            method,
            alpha,
            witness: Some(witness),
            trials,
            tolerance,
        })
    }

    pub fn verdict(&self) -> Verdict {
        self.raw.verdict
    }

    pub fn method(&self) -> Method {
        self.raw.method
    }

    /// α with ½(H + Hᵀ) ≈ αI for quadratic forms.
    pub fn alpha(&self) -> Option<f64> {
        self.raw.alpha
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.raw.witness.as_ref()
    }

    pub fn trials(&self) -> usize {
        self.raw.trials
    }

    pub fn tolerance(&self) -> f64 {
        self.raw.tolerance
    }
}

impl TryFrom<RawReport> for ObjectivityReport {
    type Error = ReportError;

    fn try_from(raw: RawReport) -> Result<Self, Self::Error> {
        match (raw.verdict, &raw.witness) {
            (Verdict::NotObjective, None) => return Err(ReportError::MissingWitness),
            (Verdict::NotObjective, Some(w))
                if w.gap().partial_cmp(&raw.tolerance) != Some(Ordering::Greater) =>
            {
                return Err(ReportError::WeakWitness {
                    gap: w.gap(),
                    tolerance: raw.tolerance,
                })
            }
            (Verdict::Objective | Verdict::Inconclusive, Some(_)) => {
                return Err(ReportError::UnexpectedWitness)
            }
            _ => {}
        }
        if raw.verdict == Verdict::Inconclusive && raw.method != Method::MonteCarlo {
            return Err(ReportError::InconclusiveExact);
        }
        Ok(Self { raw })
    }
}

impl From<ObjectivityReport> for RawReport {
    fn from(report: ObjectivityReport) -> Self {
        report.raw
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::rotation_2d;

    fn witness(f_x: f64, f_qx: f64) -> Witness {
        Witness {
            x: Vector::basis(2, 0),
            q: rotation_2d(1.0),
            f_x,
            f_qx,
        }
    }

    #[test]
    fn not_objective_requires_strong_witness() {
        assert!(ObjectivityReport::not_objective(
            Method::MonteCarlo,
            witness(1.0, 2.0),
            None,
            5,
            1e-9
        )
        .is_ok());
        assert!(matches!(
            ObjectivityReport::not_objective(Method::MonteCarlo, witness(1.0, 1.0), None, 5, 1e-9),
            Err(ReportError::WeakWitness { .. })
        ));
    }

    #[test]
    fn deserialization_enforces_invariants() {
        let bad =
            r#"{"verdict":"not_objective","method":"monte_carlo","trials":1,"tolerance":1e-9}"#;
        assert!(serde_json::from_str::<ObjectivityReport>(bad).is_err());
        let bad =
            r#"{"verdict":"inconclusive","method":"exact_quadratic","trials":1,"tolerance":1e-9}"#;
        assert!(serde_json::from_str::<ObjectivityReport>(bad).is_err());
        let good = r#"{"verdict":"objective","method":"exact_quadratic","alpha":3.0,"trials":0,"tolerance":1e-10}"#;
        let report: ObjectivityReport = serde_json::from_str(good).unwrap();
        assert_eq!(report.alpha(), Some(3.0));
    }

    #[test]
    fn json_round_trip() {
        let report =
            ObjectivityReport::not_objective(Method::MonteCarlo, witness(0.1, 0.7), None, 17, 1e-9)
                .unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(
            serde_json::from_str::<ObjectivityReport>(&text).unwrap(),
            report
        );
    }
}
