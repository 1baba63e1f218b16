use num::complex::Complex64;
use serde::{Deserialize, Serialize};

/// Below this |rhs| a case is judged by its absolute error.
pub const REL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<f64> for ComplexValue {
    fn from(x: f64) -> Self {
        Self { re: x, im: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Case {
    /// Relative comparison against |rhs|.
    pub fn new(id: impl Into<String>, lhs: impl Into<Complex64>, rhs: impl Into<Complex64>, tol: f64) -> Self {
        Self::scaled(id, lhs, rhs, tol, 0.0)
    }

    /// Relative comparison against max(|rhs|, scale); scale = 1 makes the
    /// tolerance absolute for values below one.
    pub fn scaled(
        id: impl Into<String>,
        lhs: impl Into<Complex64>,
        rhs: impl Into<Complex64>,
        tol: f64,
        scale: f64,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let abs_err = (lhs - rhs).norm();
        let denom = rhs.norm().max(scale);
        let (rel_err, pass) = if denom < REL_FLOOR {
            (abs_err, abs_err <= tol)
        } else {
            let rel = abs_err / denom;
            (rel, rel <= tol)
        };
        Self { id: id.into(), lhs: lhs.into(), rhs: rhs.into(), abs_err, rel_err, tol, pass }
    }

    /// Re-judges the case under a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.pass = self.rel_err <= tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_rel_err: f64,
}

impl Summary {
    pub fn of(cases: &[Case]) -> Self {
        Self {
            total: cases.len(),
            passed: cases.iter().filter(|c| c.pass).count(),
            max_rel_err: cases.iter().map(|c| c.rel_err).fold(0.0, f64::max),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub runtime_ms: u64,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>, mut cases: Vec<Case>, runtime_ms: u64) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let summary = Summary::of(&cases);
        Self { suite: suite.into(), cases, summary, runtime_ms }
    }

    pub fn passed(&self) -> bool {
        self.summary.all_passed()
    }
}

/// Reports of several suites with a combined summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub suite: String,
    pub reports: Vec<VerifyReport>,
    pub summary: Summary,
    pub runtime_ms: u64,
}

impl AggregateReport {
    pub fn new(reports: Vec<VerifyReport>, runtime_ms: u64) -> Self {
        let summary = Summary {
            total: reports.iter().map(|r| r.summary.total).sum(),
            passed: reports.iter().map(|r| r.summary.passed).sum(),
            max_rel_err: reports.iter().map(|r| r.summary.max_rel_err).fold(0.0, f64::max),
        };
        Self { suite: "all".into(), reports, summary, runtime_ms }
    }

    pub fn passed(&self) -> bool {
        self.summary.all_passed()
    }
}
