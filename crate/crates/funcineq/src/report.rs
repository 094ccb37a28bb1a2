//! Report types shared by the certification, transport and CLI layers.

use serde::{Deserialize, Serialize};

use crate::costs::CostSpec;
use crate::families::FamilySpec;
use crate::measures::MeasureSpec;
use crate::{REPORT_SCHEMA_VERSION, VERSION};

/// Outcome of a certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every evaluated ratio stayed below the claimed (or estimated) constant.
    CertifiedBounded,
    /// A family member exceeded a user-supplied claimed constant beyond
    /// tolerance, or an inequality failed structurally.
    Violated,
    Inconclusive,
}

/// Fixed-width histogram of per-member ratios or slacks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u32>,
}

impl Histogram {
    pub fn from_values(values: &[f64], bins: usize) -> Self {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            return Histogram {
                lo: 0.0,
                hi: 0.0,
                counts: vec![0; bins.max(1)],
            };
        }
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bins = bins.max(1);
        let mut counts = vec![0u32; bins];
        let span = (hi - lo).max(1e-300);
        for v in finite {
            let idx = (((v - lo) / span) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        Histogram { lo, hi, counts }
    }
}

/// The certified outcome of supremizing one inequality over a family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub schema_version: u32,
    pub library_version: String,
    pub inequality: String,
    pub measure: MeasureSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    pub family_name: String,
    pub members_evaluated: usize,
    pub members_skipped: usize,
    /// `sup` of the per-member ratios; a lower bound on the true constant.
    pub estimated_constant: f64,
    /// Parameters of the maximizing member.
    pub witness: Vec<(String, f64)>,
    pub ratio_histogram: Histogram,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_constant: Option<f64>,
    pub tolerance: f64,
    /// Reminder of the one-sided nature of family certification.
    pub note: String,
}

impl InequalityReport {
    pub fn new(inequality: &str, measure: MeasureSpec) -> Self {
        InequalityReport {
            schema_version: REPORT_SCHEMA_VERSION,
            library_version: VERSION.to_string(),
            inequality: inequality.to_string(),
            measure,
            cost: None,
            family: None,
            family_name: String::new(),
            members_evaluated: 0,
            members_skipped: 0,
            estimated_constant: f64::NAN,
            witness: Vec::new(),
            ratio_histogram: Histogram::from_values(&[], 1),
            verdict: Verdict::Inconclusive,
            claimed_constant: None,
            tolerance: 0.0,
            note: "estimated constant is a family supremum: a lower bound on the true \
                   constant; absence of violation is not an upper-bound proof"
                .to_string(),
        }
    }
}
