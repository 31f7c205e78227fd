//! Batch runner: configuration, the per-check report builders and the
//! deterministic scheduler.

use std::fmt;
use std::str::FromStr;

use crate::cmatrix::{herm_eig, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::higgs::{verify_higgs, verify_milnor_wood};
use crate::levi::verify_negative_semidefinite_kernel_with;
use crate::lie_spaces::{
    canonical_witness, curvature_bounds, embed_tangent, extract_tangent, extremize_curvature, payload_curvature,
    random_tangent, random_witness, sectional_curvature, Extremum, HermitianFamily,
};
use crate::par;
use crate::report::{LemmaReport, SubCheck};
use crate::reps::centralizer::verify_centralizer;
use crate::reps::{adjoint_transitivity_check, verify_canonical_rep};
use crate::rng::{gaussian_matrix, seeded, sub_seed};
use crate::trace_bounds::{
    equality_locus_residual, max_flat_dimension_search, orthonormalize_pair, standard_flat_family, trace_ratio,
    PairOutcome,
};
use crate::youla::{paired_eigenvalues, youla_decompose};

/// Restarts used by the extremizer inside the suite.
pub const EXTREMIZER_RESTARTS: usize = 50;

/// Trials of the greedy flat-dimension search.
pub const FLAT_SEARCH_TRIALS: usize = 16;

/// One selectable group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Curvature,
    Trace,
    Youla,
    Levi,
    Reps,
    Higgs,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        Self::Curvature,
        Self::Trace,
        Self::Youla,
        Self::Levi,
        Self::Reps,
        Self::Higgs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Curvature => "curvature",
            Self::Trace => "trace",
            Self::Youla => "youla",
            Self::Levi => "levi",
            Self::Reps => "reps",
            Self::Higgs => "higgs",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| Error::ConfigParse(format!("unknown check '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub families: Vec<HermitianFamily>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckKind>,
    pub output_path: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            families: vec![
                HermitianFamily::Su { p: 3, q: 2 },
                HermitianFamily::Su { p: 4, q: 2 },
                HermitianFamily::Su { p: 3, q: 3 },
                HermitianFamily::Sp { n: 3 },
                HermitianFamily::So { p: 5 },
                HermitianFamily::SoStar { n: 4 },
            ],
            samples: 10_000,
            seed: 42,
            tol: 1e-10,
            checks: CheckKind::ALL.to_vec(),
            output_path: None,
        }
    }
}

pub fn parse_families(s: &str) -> Result<Vec<HermitianFamily>> {
    let fams = s
        .split_whitespace()
        .map(|t| {
            t.parse::<HermitianFamily>()
                .map_err(|e| Error::ConfigParse(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    if fams.is_empty() {
        return Err(Error::ConfigParse("empty family list".into()));
    }
    Ok(fams)
}

pub fn parse_checks(s: &str) -> Result<Vec<CheckKind>> {
    let mut out = Vec::new();
    for part in s.split([',', ' ']).filter(|p| !p.trim().is_empty()) {
        let k: CheckKind = part.parse()?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    if out.is_empty() {
        return Err(Error::ConfigParse("empty check list".into()));
    }
    Ok(out)
}

pub fn parse_samples(s: &str) -> Result<usize> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::ConfigParse(format!("samples must be a positive integer, got '{s}'")))?;
    if n == 0 {
        return Err(Error::ConfigParse("samples must be at least 1".into()));
    }
    Ok(n)
}

pub fn parse_seed(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::ConfigParse(format!("seed must be a non-negative integer, got '{s}'")))
}

pub fn parse_tol(s: &str) -> Result<f64> {
    let t: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::ConfigParse(format!("tol must be a number, got '{s}'")))?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::ConfigParse(format!("tol must be positive, got {t}")));
    }
    Ok(t)
}

impl SuiteConfig {
    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_text(mut self, text: &str) -> Result<Self> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::ConfigParse(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::ConfigParse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "families" => self.families = parse_families(value)?,
            "samples" => self.samples = parse_samples(value)?,
            "seed" => self.seed = parse_seed(value)?,
            "tol" => self.tol = parse_tol(value)?,
            "checks" => self.checks = parse_checks(value)?,
            "out" | "output" | "output_path" => {
                self.output_path = (!value.is_empty()).then(|| value.to_string());
            }
            _ => return Err(Error::ConfigParse(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::ConfigParse("samples must be at least 1".into()));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::ConfigParse(format!("tol must be positive, got {}", self.tol)));
        }
        if self.families.is_empty() || self.checks.is_empty() {
            return Err(Error::ConfigParse("families and checks must be non-empty".into()));
        }
        for f in &self.families {
            f.validate().map_err(|e| Error::ConfigParse(e.to_string()))?;
        }
        Ok(())
    }
}

/// Curvature bounds, witnesses on both ends, and the extremizer.
pub fn curvature_report(f: HermitianFamily, samples: usize, seed: u64) -> LemmaReport {
    let b = curvature_bounds(f);
    let mut r = LemmaReport::new(
        format!("curvature_{f}"),
        format!(
            "holomorphic sectional curvature of {} lies in [{}, {}] and both ends are attained",
            f.label(),
            b.lower,
            b.upper
        ),
        samples as u64,
        seed,
    );
    let rows = par::map_indexed(samples, |i| {
        let mut rng = seeded(seed, i as u64);
        let t = random_tangent(f, &mut rng);
        let k = sectional_curvature(&t).unwrap_or(f64::NAN);
        let outside = (b.lower - k).max(k - b.upper).max(0.0);
        let fast = (payload_curvature(f, &t.payload) - k).abs();
        let roundtrip = embed_tangent(&t)
            .and_then(|m| extract_tangent(f, &m))
            .map(|(back, res)| (&back.payload - &t.payload).norm() + res)
            .unwrap_or(f64::NAN);
        (outside, fast, roundtrip)
    });
    let worst = |g: fn(&(f64, f64, f64)) -> f64| rows.iter().map(g).fold(0.0, par::nan_max);
    r.push(SubCheck::new("random tangents within bounds", worst(|t| t.0), 1e-9));
    r.push(SubCheck::new(
        "payload formula matches commutator formula",
        worst(|t| t.1),
        1e-12,
    ));
    r.push(SubCheck::new("embed/extract round trip", worst(|t| t.2), 1e-14));

    for (which, bound, name) in [
        (Extremum::Min, b.lower, "witnesses attain the lower bound"),
        (Extremum::Max, b.upper, "witnesses attain the upper bound"),
    ] {
        let canonical = sectional_curvature(&canonical_witness(f, which)).unwrap_or(f64::NAN);
        let random = par::max_indexed(100, |i| {
            let mut rng = seeded(seed ^ 0x3e7, i as u64);
            sectional_curvature(&random_witness(f, which, &mut rng)).map_or(f64::NAN, |k| (k - bound).abs())
        });
        r.push(SubCheck::new(
            name,
            par::nan_max((canonical - bound).abs(), random),
            1e-10,
        ));
    }
    for (which, bound, name) in [
        (Extremum::Min, b.lower, "extremizer reaches the lower bound"),
        (Extremum::Max, b.upper, "extremizer reaches the upper bound"),
    ] {
        let (_, v) = extremize_curvature(f, which, EXTREMIZER_RESTARTS, seed ^ 0xe7);
        r.push(SubCheck::new(name, (v - bound).abs(), 1e-6).with_note(format!("value {v:.12}")));
    }
    r
}

fn expected_flat_dimension(f: HermitianFamily) -> Option<usize> {
    match f {
        HermitianFamily::Su { p, q } => Some(p / q),
        HermitianFamily::So { .. } => Some(1),
        HermitianFamily::SoStar { n } if n >= 4 => Some(1),
        _ => None,
    }
}

/// Trace-ratio inequality, equality locus and flat families.
pub fn trace_report(f: HermitianFamily, samples: usize, seed: u64) -> LemmaReport {
    let (rows, cols) = f.payload_shape();
    let mut r = LemmaReport::new(
        format!("trace_{f}"),
        format!(
            "1/q <= tr((A*A)^2)/(tr A*A)^2 <= 1 on {} payloads, equality locus of maximal curvature and maximal flat families",
            f.label()
        ),
        samples as u64,
        seed,
    );
    let res = par::map_indexed(samples, |i| {
        let mut rng = seeded(seed, i as u64);
        let a = gaussian_matrix(&mut rng, rows, cols);
        let Ok(t) = trace_ratio(&a) else {
            return (f64::NAN, f64::NAN);
        };
        let bounds = (1.0 / cols as f64 - t).max(t - 1.0).max(0.0);
        let oracle = herm_eig(&(&a.adjoint() * &a), 1e-10).map_or(f64::NAN, |e| {
            let s: f64 = e.values.iter().sum();
            let s2: f64 = e.values.iter().map(|l| l * l).sum();
            (s2 / (s * s) - t).abs()
        });
        (bounds, oracle)
    });
    r.push(SubCheck::new(
        "trace ratio within [1/q, 1]",
        res.iter().map(|x| x.0).fold(0.0, par::nan_max),
        1e-12,
    ));
    r.push(SubCheck::new(
        "trace ratio matches eigenvalue formula",
        res.iter().map(|x| x.1).fold(0.0, par::nan_max),
        1e-10,
    ));
    let locus = par::max_indexed(100, |i| {
        let mut rng = seeded(seed ^ 0x10c, i as u64);
        equality_locus_residual(f, &random_witness(f, Extremum::Max, &mut rng)).unwrap_or(f64::NAN)
    });
    r.push(SubCheck::new("maximal witnesses on the equality locus", locus, 1e-10));

    if let HermitianFamily::Su { p, q } = f {
        match standard_flat_family(p, q) {
            Ok(fam) => {
                r.push(SubCheck::new(
                    "flat family combinations have scalar Gram matrix",
                    fam.max_combination_residual(100, seed ^ 0xf1a7),
                    1e-10,
                ));
                r.push(SubCheck::count("flat family dimension", fam.span_rank(), p / q));
                r.push(SubCheck::count(
                    "stacked columns independent",
                    fam.stacked_column_rank(),
                    (p / q) * q,
                ));
            }
            Err(e) => r.push(SubCheck::failed("flat family", e.to_string())),
        }
    }
    let found = max_flat_dimension_search(f, FLAT_SEARCH_TRIALS, seed ^ 0x5ea);
    match expected_flat_dimension(f) {
        Some(d) => r.push(SubCheck::count("greedy flat dimension", found, d)),
        None => r.push(
            SubCheck::new("greedy flat dimension", 0.0, 0.0)
                .with_note(format!("found {found}; no closed-form value for this family")),
        ),
    }
    r
}

/// The explicit orthonormalization example: `A = A₁`, `B = (A₁ + A₂)/√2`.
pub fn worked_example_report() -> LemmaReport {
    let mut r = LemmaReport::new(
        "flat_family_orthonormalization",
        "orthonormalizing B against A inside a flat family gives B' = B - (1/2)(lambda - 2 + i(2 - mu)) A",
        1,
        0,
    );
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let fam = match standard_flat_family(5, 2) {
        Ok(f) => f,
        Err(e) => {
            r.push(SubCheck::failed("flat family", e.to_string()));
            return r;
        }
    };
    let (a1, a2) = (&fam.members[0], &fam.members[1]);
    let b = (a1 + a2).scale_real(s);
    match orthonormalize_pair(a1, &b) {
        Ok(PairOutcome::Modified { b, lambda, mu, .. }) => {
            r.push(SubCheck::new(
                "lambda = 2 + sqrt 2",
                (lambda - (2.0 + 2f64.sqrt())).abs(),
                1e-10,
            ));
            r.push(SubCheck::new("mu = 2", (mu - 2.0).abs(), 1e-10));
            r.push(SubCheck::new(
                "B' = A2 / sqrt 2",
                (&b - &a2.scale_real(s)).norm(),
                1e-10,
            ));
        }
        other => r.push(SubCheck::failed("orthonormalize_pair", format!("{other:?}"))),
    }
    let phase = C64::from_polar(1.0, 0.7);
    let dependent = matches!(
        orthonormalize_pair(a1, &a1.scale(phase)),
        Ok(PairOutcome::Dependent { .. })
    );
    r.push(SubCheck::new(
        "multiple of A is reported dependent",
        if dependent { 0.0 } else { 1.0 },
        0.0,
    ));
    r
}

/// Youla decompositions of random skew matrices of sizes 3 to 7.
pub fn youla_report(samples: usize, seed: u64) -> LemmaReport {
    let mut r = LemmaReport::new(
        "youla",
        "every complex skew-symmetric matrix is unitarily congruent to a real block-diagonal form; eigenvalues of A*A pair up",
        samples as u64,
        seed,
    );
    let rows = par::map_indexed(samples, |i| {
        let mut rng = seeded(seed, i as u64);
        let n = 3 + i % 5;
        // mix of full-rank and rank-deficient inputs
        let k = if i % 4 == 3 { 1 } else { n };
        let g = gaussian_matrix(&mut rng, n, k);
        let h = gaussian_matrix(&mut rng, n, k);
        let a = &(&g * &h.transpose()) - &(&h * &g.transpose());
        let rank = (2 * k).min(2 * (n / 2));
        let scale = a.norm();
        match (youla_decompose(&a, 1e-10), paired_eigenvalues(&a)) {
            (Ok(y), Ok(ps)) => {
                let unitary = (&(&y.u.adjoint() * &y.u) - &ComplexMatrix::identity(n)).norm();
                let recon = (&(&(&y.u.conj() * &y.canonical()) * &y.u.adjoint()) - &a).norm() / scale;
                let blocks = y.blocks().abs_diff(rank / 2) as f64;
                (recon.max(y.residual), unitary, blocks, ps.residual)
            }
            _ => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        }
    });
    let worst = |g: fn(&(f64, f64, f64, f64)) -> f64| rows.iter().map(g).fold(0.0, par::nan_max);
    r.push(SubCheck::new("reconstruction conj(U) C U* = A", worst(|t| t.0), 1e-10));
    r.push(SubCheck::new("U unitary", worst(|t| t.1), 1e-10));
    r.push(SubCheck::new("block count = rank / 2", worst(|t| t.2), 0.0));
    r.push(SubCheck::new("eigenvalue pairing", worst(|t| t.3), 1e-8));
    r
}

/// One scheduled report.
#[derive(Debug, Clone)]
struct Job {
    name: String,
    kind: CheckKind,
    family: Option<HermitianFamily>,
    variant: u8,
}

fn plan(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let job = |name: String, kind, family, variant| Job {
        name,
        kind,
        family,
        variant,
    };
    for &kind in &cfg.checks {
        match kind {
            CheckKind::Curvature => {
                for &f in &cfg.families {
                    jobs.push(job(format!("curvature_{f}"), kind, Some(f), 0));
                }
            }
            CheckKind::Trace => {
                for &f in &cfg.families {
                    jobs.push(job(format!("trace_{f}"), kind, Some(f), 0));
                }
                jobs.push(job("flat_family_orthonormalization".into(), kind, None, 1));
            }
            CheckKind::Youla => jobs.push(job("youla".into(), kind, None, 0)),
            CheckKind::Levi => {
                jobs.push(job("levi_form_n5".into(), kind, None, 5));
                jobs.push(job("levi_form_n7".into(), kind, None, 7));
            }
            CheckKind::Reps => {
                for &f in &cfg.families {
                    jobs.push(job(format!("canonical_rep_{f}"), kind, Some(f), 0));
                    jobs.push(job(format!("centralizer_{f}"), kind, Some(f), 1));
                    if matches!(f, HermitianFamily::Sp { .. })
                        || matches!(f, HermitianFamily::SoStar { n } if n % 2 == 0)
                    {
                        jobs.push(job(format!("transitivity_{f}"), kind, Some(f), 2));
                    }
                }
            }
            CheckKind::Higgs => {
                for &f in &cfg.families {
                    jobs.push(job(format!("higgs_{f}"), kind, Some(f), 0));
                }
                jobs.push(job("milnor_wood_bound".into(), kind, None, 1));
            }
        }
    }
    jobs
}

/// Rep-level checks sample at most this many pairs.
const REPS_MAX_SAMPLES: usize = 1000;

fn run_job(job: &Job, cfg: &SuiteConfig) -> LemmaReport {
    let seed = sub_seed(cfg.seed, &job.name);
    let n = cfg.samples;
    let fam = job.family;
    match (job.kind, job.variant, fam) {
        (CheckKind::Curvature, _, Some(f)) => curvature_report(f, n, seed),
        (CheckKind::Trace, 1, _) => worked_example_report(),
        (CheckKind::Trace, _, Some(f)) => trace_report(f, n, seed),
        (CheckKind::Youla, _, _) => youla_report(n, seed),
        (CheckKind::Levi, v, _) => verify_negative_semidefinite_kernel_with(v as usize, n.min(1000), seed),
        (CheckKind::Reps, 0, Some(f)) => verify_canonical_rep(f, n.min(REPS_MAX_SAMPLES), seed, cfg.tol.max(1e-9)),
        (CheckKind::Reps, 1, Some(f)) => verify_centralizer(f, seed),
        (CheckKind::Reps, _, Some(f)) => {
            let trials = if matches!(f, HermitianFamily::Sp { .. }) {
                100
            } else {
                20
            };
            adjoint_transitivity_check(f, trials, seed)
        }
        (CheckKind::Higgs, 1, _) => verify_milnor_wood(),
        (CheckKind::Higgs, _, Some(f)) => verify_higgs(f, n, seed, cfg.tol),
        _ => {
            let mut r = LemmaReport::new(job.name.clone(), "", 0, seed);
            r.push(SubCheck::failed("schedule", "job without a family"));
            r
        }
    }
}

/// Runs every selected check. Jobs execute concurrently; the returned order
/// follows the configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<LemmaReport>> {
    cfg.validate()?;
    let jobs = plan(cfg);
    Ok(par::map_indexed(jobs.len(), |i| run_job(&jobs[i], cfg)))
}

/// Writes the JSON report to `path`.
pub fn write_report(path: &str, reports: &[LemmaReport]) -> Result<()> {
    std::fs::write(path, crate::report::to_json(reports)).map_err(|e| Error::WriteFailure(format!("{path}: {e}")))
}
