//! Uniform record type for identity checks, shared by the library tests and
//! the command line reporter.

use serde::Serialize;

/// One verified identity: a residual measured against a fixed threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Stable machine-readable name, e.g. "yb/tau/N3".
    pub id: String,
    /// Human-readable context: parameters, sites, sector labels.
    pub detail: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(id: impl Into<String>, detail: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let pass = residual.is_finite() && residual <= threshold;
        Check { id: id.into(), detail: detail.into(), residual, threshold, pass }
    }

    /// A check that must exceed a floor instead of staying under a ceiling,
    /// used for negative controls: the recorded residual is the measured
    /// value and `pass` means "large enough".
    pub fn floor(id: impl Into<String>, detail: impl Into<String>, residual: f64, floor: f64) -> Self {
        let pass = residual.is_finite() && residual >= floor;
        Check { id: id.into(), detail: detail.into(), residual, threshold: floor, pass }
    }

    /// A yes/no fact with no numeric content.
    pub fn fact(id: impl Into<String>, detail: impl Into<String>, holds: bool) -> Self {
        Check {
            id: id.into(),
            detail: detail.into(),
            residual: if holds { 0.0 } else { 1.0 },
            threshold: 0.5,
            pass: holds,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

pub fn worst_residual(checks: &[Check]) -> f64 {
    checks.iter().fold(0.0f64, |m, c| m.max(c.residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_logic() {
        assert!(Check::new("a", "", 1e-12, 1e-10).pass);
        assert!(!Check::new("a", "", 1e-8, 1e-10).pass);
        assert!(Check::floor("b", "", 1e-3, 1e-5).pass);
        assert!(!Check::floor("b", "", 1e-7, 1e-5).pass);
        assert!(!Check::new("c", "", f64::NAN, 1.0).pass);
        assert!(all_pass(&[Check::fact("d", "", true)]));
        assert!(worst_residual(&[Check::new("e", "", 0.5, 1.0)]) == 0.5);
    }
}
