//! Identity reports and their CSV serialisation.
//!
//! CSV schema: `kind,param_json,lhs_re,lhs_im,rhs_re,rhs_im,defect,tol,pass`
//! with all reals printed to 17 significant digits so identical runs are
//! byte-identical.

use num_complex::Complex64;

/// Result of checking one identity instance: the two sides, their
/// defect, and a pass flag (`pass ⇔ defect ≤ tolerance`).
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub kind: String,
    pub params: serde_json::Value,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(
        kind: impl Into<String>,
        params: serde_json::Value,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
    ) -> Self {
        let defect = (lhs - rhs).norm();
        Self {
            kind: kind.into(),
            params,
            lhs,
            rhs,
            defect,
            tolerance,
            pass: defect <= tolerance,
        }
    }

    pub fn new_real(
        kind: impl Into<String>,
        params: serde_json::Value,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        Self::new(
            kind,
            params,
            Complex64::new(lhs, 0.0),
            Complex64::new(rhs, 0.0),
            tolerance,
        )
    }

    /// Override the defect (for reports whose "defect" is not plain
    /// `|lhs − rhs|`, e.g. relative or supremum defects).
    pub fn with_defect(mut self, defect: f64) -> Self {
        self.defect = defect;
        self.pass = defect <= self.tolerance;
        self
    }

    pub fn csv_header() -> &'static str {
        "kind,param_json,lhs_re,lhs_im,rhs_re,rhs_im,defect,tol,pass"
    }

    pub fn csv_row(&self) -> String {
        let params = self.params.to_string().replace('"', "\"\"");
        format!(
            "{},\"{}\",{},{},{},{},{},{},{}",
            self.kind,
            params,
            fmt17(self.lhs.re),
            fmt17(self.lhs.im),
            fmt17(self.rhs.re),
            fmt17(self.rhs.im),
            fmt17(self.defect),
            fmt17(self.tolerance),
            self.pass
        )
    }
}

/// Fixed 17-significant-digit scientific formatting.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
