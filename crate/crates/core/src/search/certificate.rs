//! Serialized search outcomes that can be re-checked independently.
//!
//! A lower-bound certificate carries an avoiding coloring and is checked by
//! the detector. An upper-bound certificate records an exhaustion (node count
//! and decision-trace hash) and is checked by re-running the search.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{search_avoiding, Outcome, SearchConfig, SearchResult};
use crate::coloring::{Color, Coloring, ColoringError};
use crate::detector::{CandidateTable, DetectorError};
use crate::pattern::{Family, Witness};
use crate::window::Window;

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("unsupported certificate version {0}")]
    Version(u32),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    LowerBound,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Coloring { colors: Vec<Color> },
    Exhaustion { nodes: u64, trace_hash: String, config: SearchConfig },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub tool_version: String,
    pub kind: CertificateKind,
    pub family: Family,
    pub window: Window,
    pub r: usize,
    pub payload: Payload,
}

/// Result of re-checking a certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Verification {
    Valid,
    /// The coloring has a monochromatic instance.
    Violated(Witness),
    /// The re-run search disagrees with the recorded exhaustion.
    Mismatch { expected: String, found: String },
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid)
    }
}

impl Certificate {
    /// `None` for budget-exceeded results.
    pub fn from_result(result: &SearchResult) -> Option<Self> {
        let (kind, payload) = match &result.outcome {
            Outcome::Avoiding(c) => (
                CertificateKind::LowerBound,
                Payload::Coloring {
                    colors: c.colors().to_vec(),
                },
            ),
            Outcome::Exhausted { trace_hash } => (
                CertificateKind::UpperBound,
                Payload::Exhaustion {
                    nodes: result.nodes,
                    trace_hash: trace_hash.clone(),
                    config: result.config.clone(),
                },
            ),
            Outcome::BudgetExceeded => return None,
        };
        Some(Certificate {
            format_version: CERTIFICATE_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            kind,
            family: result.family.clone(),
            window: result.window.clone(),
            r: result.r,
            payload,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let cert: Certificate = serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
        if cert.format_version != CERTIFICATE_VERSION {
            return Err(CertificateError::Version(cert.format_version));
        }
        let consistent = matches!(
            (&cert.kind, &cert.payload),
            (CertificateKind::LowerBound, Payload::Coloring { .. })
                | (CertificateKind::UpperBound, Payload::Exhaustion { .. })
        );
        if !consistent {
            return Err(CertificateError::Malformed("payload does not match kind".into()));
        }
        Ok(cert)
    }

    pub fn coloring(&self) -> Result<Option<Coloring>, CertificateError> {
        match &self.payload {
            Payload::Coloring { colors } => Ok(Some(Coloring::new(
                Arc::new(self.window.clone()),
                self.r,
                colors.clone(),
            )?)),
            Payload::Exhaustion { .. } => Ok(None),
        }
    }

    pub fn verify(&self) -> Result<Verification, CertificateError> {
        let window = Arc::new(self.window.clone());
        let table = CandidateTable::build(&self.family, window)?;
        match &self.payload {
            Payload::Coloring { .. } => {
                let coloring = self.coloring()?.expect("lower-bound payload");
                Ok(match table.find_witness(&coloring) {
                    Some(w) => Verification::Violated(w),
                    None => Verification::Valid,
                })
            }
            Payload::Exhaustion {
                nodes,
                trace_hash,
                config,
            } => {
                let rerun = search_avoiding(&table, self.r, config);
                let expected = format!("exhausted after {nodes} nodes, trace {trace_hash}");
                Ok(match &rerun.outcome {
                    Outcome::Exhausted { trace_hash: h } if h == trace_hash && rerun.nodes == *nodes => {
                        Verification::Valid
                    }
                    Outcome::Exhausted { trace_hash: h } => Verification::Mismatch {
                        expected,
                        found: format!("exhausted after {} nodes, trace {h}", rerun.nodes),
                    },
                    other => Verification::Mismatch {
                        expected,
                        found: other.label().to_string(),
                    },
                })
            }
        }
    }
}
