//! Named functions and verification records for every computable identity.

mod checks;
mod coefficients;
mod named;
mod pde;

pub use checks::{
    flat_report, integral_table, integrals_reports, pohozaev_flat_check, structural_checks, sym_reports, IntegralRow,
    PohozaevFlatCase,
};
pub use coefficients::{bracket8, coefficient_suite, scan_b, BQuadratic, ScanResult, ScanRow};
pub use named::{build_named, NamedFunction, NamedId, Params};
pub use pde::{verify_pde, verify_pde_sweep};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::CurvatureError;
use crate::moments::{MomentError, TruncationSpec};
use crate::par::ExecMode;
use crate::profile::ProfileError;
use crate::quadrature::{QuadError, QuadResult, QuadratureSpec};
use crate::scalar::{ExactScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error("{0}")]
    Excluded(String),
    #[error("dimension n = {0} is not supported here")]
    InvalidDimension(u32),
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
    #[error("missing parameter {0:?}")]
    MissingParam(String),
    #[error("unknown function id {0:?}")]
    UnknownId(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyWithPaper,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyWithPaper => "discrepancy_with_paper",
        }
    }

    /// Worst of two statuses, `Fail` dominating.
    pub fn merge(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (DiscrepancyWithPaper, _) | (_, DiscrepancyWithPaper) => DiscrepancyWithPaper,
            _ => Pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Printed,
    Derived,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub case: String,
    pub n: Option<u32>,
    pub paper_ref: String,
    pub expected: String,
    pub expected_provenance: Provenance,
    pub computed_exact: String,
    pub computed_numeric: Option<f64>,
    pub numeric_error_bound: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub status: Status,
    pub notes: String,
}

impl VerificationReport {
    pub fn new(lemma_id: &str, case: impl Into<String>, n: Option<u32>, paper_ref: &str) -> Self {
        Self {
            lemma_id: lemma_id.to_string(),
            case: case.into(),
            n,
            paper_ref: paper_ref.to_string(),
            expected: String::new(),
            expected_provenance: Provenance::Derived,
            computed_exact: String::new(),
            computed_numeric: None,
            numeric_error_bound: None,
            abs_err: None,
            rel_err: None,
            status: Status::Pass,
            notes: String::new(),
        }
    }

    pub fn expect(mut self, value: impl Into<String>, prov: Provenance) -> Self {
        self.expected = value.into();
        self.expected_provenance = prov;
        self
    }

    pub fn exact(mut self, value: impl Into<String>) -> Self {
        self.computed_exact = value.into();
        self
    }

    /// Attaches a numeric value compared against `reference`.
    pub fn numeric(mut self, value: f64, bound: f64, reference: f64) -> Self {
        let abs = (value - reference).abs();
        self.computed_numeric = Some(value);
        self.numeric_error_bound = Some(bound);
        self.abs_err = Some(abs);
        self.rel_err = Some(if reference != 0.0 { abs / reference.abs() } else { abs });
        self
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn worsen(mut self, s: Status) -> Self {
        self.status = self.status.merge(s);
        self
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    /// Dimension independent items are kept under any `--n` filter.
    pub fn matches_n(&self, n: Option<u32>) -> bool {
        match (n, self.n) {
            (Some(want), Some(have)) => want == have,
            _ => true,
        }
    }
}

/// Settings shared by every suite item.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub tol: f64,
    pub seed: u64,
    pub b: ExactScalar,
    pub deltas: Vec<ExactScalar>,
    pub r: ExactScalar,
    pub quad: QuadratureSpec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            seed: 1,
            b: ExactScalar::int(-2),
            deltas: vec![ExactScalar::ratio(1, 100), ExactScalar::ratio(1, 1000), ExactScalar::ratio(1, 10000)],
            r: ExactScalar::int(10),
            quad: QuadratureSpec::default(),
        }
    }
}

impl SuiteOptions {
    pub fn exec(&self) -> ExecMode {
        self.quad.exec
    }

    pub fn truncations(&self) -> Result<Vec<TruncationSpec>, SuiteError> {
        self.deltas.iter().map(|d| Ok(TruncationSpec::new(d.clone(), self.r.clone())?)).collect()
    }
}

/// Relative residual threshold for the residual grids.
pub const GRID_TOL: f64 = 1e-9;

fn scaled(r: QuadResult, c: f64) -> QuadResult {
    QuadResult { value: r.value * c, error_bound: r.error_bound * c.abs(), ..r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_merge() {
        assert_eq!(Status::Pass.merge(Status::DiscrepancyWithPaper), Status::DiscrepancyWithPaper);
        assert_eq!(Status::DiscrepancyWithPaper.merge(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.merge(Status::Pass), Status::Pass);
    }

    #[test]
    fn report_json_round_trip() {
        let r = VerificationReport::new("AdA-1", "n=7", Some(7), "int A dA |y|^4")
            .expect("-85/24", Provenance::Printed)
            .exact("-85/24 * w5 * I(7,9)")
            .numeric(-1.0 / 3.0, 1e-15, -0.3333333333333333);
        let s = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
