use objcheck_core::ObjectivityReport;
use serde::{Deserialize, Serialize};

/// JSON form of an [`ObjectivityReport`] as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    #[serde(flatten)]
    pub report: ObjectivityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
}

impl ReportDocument {
    pub fn new(report: ObjectivityReport, seed: Option<u64>) -> Self {
        Self {
            report,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
