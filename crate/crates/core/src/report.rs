//! Machine-readable verification records.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;

/// Outcome of a single named comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl SubCheck {
    /// Passes iff `residual ≤ tolerance`; a NaN residual always fails.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Exact integer comparison recorded as `|found − expected|` with zero
    /// tolerance.
    pub fn count(name: impl Into<String>, found: usize, expected: usize) -> Self {
        Self::new(name, found.abs_diff(expected) as f64, 0.0).with_note(format!("found {found}, expected {expected}"))
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: f64::NAN,
            tolerance: 0.0,
            passed: false,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Pass/fail record of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub check_name: String,
    /// The claim being verified, in words.
    pub paper_anchor: String,
    pub status: Status,
    pub max_residual: f64,
    pub samples: u64,
    pub seed: u64,
    pub details: Vec<SubCheck>,
}

impl LemmaReport {
    pub fn new(check_name: impl Into<String>, anchor: impl Into<String>, samples: u64, seed: u64) -> Self {
        Self {
            check_name: check_name.into(),
            paper_anchor: anchor.into(),
            status: Status::Pass,
            max_residual: 0.0,
            samples,
            seed,
            details: Vec::new(),
        }
    }

    pub fn push(&mut self, check: SubCheck) {
        if !check.passed {
            self.status = Status::Fail;
        }
        self.max_residual = if self.details.is_empty() {
            check.residual
        } else {
            crate::par::nan_max(self.max_residual, check.residual)
        };
        self.details.push(check);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass && !self.details.is_empty()
    }

    pub fn detail(&self, name: &str) -> Option<&SubCheck> {
        self.details.iter().find(|d| d.name == name)
    }
}

/// Formatter that writes every float with 17 significant digits.
struct Float17;

impl serde_json::ser::Formatter for Float17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes reports as a compact top-level JSON array.
pub fn to_json(reports: &[LemmaReport]) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17);
    reports.serialize(&mut ser).expect("reports serialize to memory");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Human-readable summary: one header line per report and one line per
/// sub-check.
pub fn render_text(reports: &[LemmaReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "[{tag}] {} -- {} (max residual {:.3e}, samples {}, seed {})",
            r.check_name, r.paper_anchor, r.max_residual, r.samples, r.seed
        );
        for d in &r.details {
            let mark = if d.passed { "ok" } else { "FAILED" };
            let _ = write!(
                out,
                "    {mark:>6}  {:<48} residual {:.3e} (tol {:.1e})",
                d.name, d.residual, d.tolerance
            );
            if !d.note.is_empty() {
                let _ = write!(out, "  {}", d.note);
            }
            out.push('\n');
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}
