//! Certification reports shared by the series, certifier, and Dwork modules.

use serde::{Deserialize, Serialize};

use crate::padic::Valuation;

/// Outcome of a finite-order integrality/congruence certification.
/// A failing report always carries the smallest offending index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertReport {
    pub pass: bool,
    pub order: usize,
    pub witness_index: Option<usize>,
    pub witness_valuation: Option<Valuation>,
    pub detail: String,
}

impl CertReport {
    pub fn pass(order: usize, detail: impl Into<String>) -> Self {
        CertReport {
            pass: true,
            order,
            witness_index: None,
            witness_valuation: None,
            detail: detail.into(),
        }
    }

    pub fn fail(
        order: usize,
        witness_index: usize,
        witness_valuation: Option<Valuation>,
        detail: impl Into<String>,
    ) -> Self {
        CertReport {
            pass: false,
            order,
            witness_index: Some(witness_index),
            witness_valuation,
            detail: detail.into(),
        }
    }
}
