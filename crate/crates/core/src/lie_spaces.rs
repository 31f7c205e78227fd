//! The four classical Hermitian families and their holomorphic tangent
//! spaces.
//!
//! A holomorphic tangent vector at the base point is stored by its free
//! parameter ([`TangentParam`]) and expanded to a full matrix `M` by
//! [`embed_tangent`]. With the metric `g(A, B) = tr(AB*)` the holomorphic
//! sectional curvature is `−tr([M, M*]²) / (tr MM*)²`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cmatrix::{commutator, ComplexMatrix, C64, I, ONE};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{gaussian_matrix, random_unitary, seeded, std_normal};

/// Relative tolerance for the symmetric / skew payload constraints.
pub const PAYLOAD_TOL: f64 = 1e-12;

/// Payloads below this norm are treated as zero.
pub const ZERO_PAYLOAD: f64 = 1e-14;

/// One of the four classical families of irreducible Hermitian symmetric
/// spaces of noncompact type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HermitianFamily {
    /// `SU(p, q)` with `p ≥ q ≥ 1`.
    Su { p: usize, q: usize },
    /// `Sp(2n, ℝ)` with `n ≥ 1`.
    Sp { n: usize },
    /// `SO(p, 2)` with `p ≥ 2`.
    So { p: usize },
    /// `SO*(2n)` with `n ≥ 2`.
    SoStar { n: usize },
}

impl HermitianFamily {
    pub fn su(p: usize, q: usize) -> Result<Self> {
        if q < 1 || p < q {
            return Err(Error::BadFamily(format!("SU({p},{q}) needs p >= q >= 1")));
        }
        Ok(Self::Su { p, q })
    }

    pub fn sp(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::BadFamily("Sp(2n) needs n >= 1".into()));
        }
        Ok(Self::Sp { n })
    }

    pub fn so(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::BadFamily(format!("SO({p},2) needs p >= 2")));
        }
        Ok(Self::So { p })
    }

    pub fn so_star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadFamily(format!("SO*({}) needs n >= 2", 2 * n)));
        }
        Ok(Self::SoStar { n })
    }

    /// Checks the size constraints of a value built directly from the enum.
    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Su { p, q } => Self::su(p, q),
            Self::Sp { n } => Self::sp(n),
            Self::So { p } => Self::so(p),
            Self::SoStar { n } => Self::so_star(n),
        }
    }

    /// Size of the square matrices realizing the Lie algebra.
    pub fn matrix_size(self) -> usize {
        match self {
            Self::Su { p, q } => p + q,
            Self::Sp { n } | Self::SoStar { n } => 2 * n,
            Self::So { p } => p + 2,
        }
    }

    /// Shape of the free tangent parameter.
    pub fn payload_shape(self) -> (usize, usize) {
        match self {
            Self::Su { p, q } => (p, q),
            Self::Sp { n } | Self::SoStar { n } => (n, n),
            Self::So { p } => (p, 1),
        }
    }

    /// Real rank of the group.
    pub fn real_rank(self) -> usize {
        match self {
            Self::Su { p, q } => p.min(q),
            Self::Sp { n } => n,
            Self::So { .. } => 2,
            Self::SoStar { n } => n / 2,
        }
    }

    /// Human-readable group name such as `SU(3,2)` or `SO*(8)`.
    pub fn label(self) -> String {
        match self {
            Self::Su { p, q } => format!("SU({p},{q})"),
            Self::Sp { n } => format!("Sp({})", 2 * n),
            Self::So { p } => format!("SO({p},2)"),
            Self::SoStar { n } => format!("SO*({})", 2 * n),
        }
    }
}

impl fmt::Display for HermitianFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Su { p, q } => write!(f, "su:{p},{q}"),
            Self::Sp { n } => write!(f, "sp:{n}"),
            Self::So { p } => write!(f, "so:{p},2"),
            Self::SoStar { n } => write!(f, "sostar:{n}"),
        }
    }
}

impl FromStr for HermitianFamily {
    type Err = Error;

    /// Parses `su:p,q`, `sp:n`, `so:p,2` (or `so:p`) and `sostar:n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadFamily(s.to_string());
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("su", [p, q]) => Self::su(*p, *q),
            ("sp", [n]) => Self::sp(*n),
            ("so", [p]) | ("so", [p, 2]) => Self::so(*p),
            ("sostar", [n]) => Self::so_star(*n),
            _ => Err(bad()),
        }
    }
}

/// Free parameter of a `p^{1,0}` element.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentParam {
    pub family: HermitianFamily,
    /// `p×q` matrix (SU), symmetric `n×n` (Sp), `p×1` column `v` (SO(p,2)),
    /// or skew `n×n` (SO*).
    pub payload: ComplexMatrix,
}

impl TangentParam {
    /// Validates shape and the symmetric / skew constraint.
    pub fn new(family: HermitianFamily, payload: ComplexMatrix) -> Result<Self> {
        check_shape(family, &payload)?;
        if !payload.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = match family {
            HermitianFamily::Sp { .. } => payload.symmetric_residual(),
            HermitianFamily::SoStar { .. } => payload.skew_residual(),
            _ => 0.0,
        };
        if residual > PAYLOAD_TOL {
            return Err(Error::PayloadConstraint {
                family: family.label(),
                residual,
            });
        }
        Ok(Self { family, payload })
    }

    /// SO(p,2) tangent from its vector `v`.
    pub fn from_vector(p: usize, v: &[C64]) -> Result<Self> {
        Self::new(HermitianFamily::so(p)?, ComplexMatrix::column_vector(v))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            family: self.family,
            payload: self.payload.scale(s),
        }
    }
}

fn check_shape(family: HermitianFamily, payload: &ComplexMatrix) -> Result<()> {
    let expected = family.payload_shape();
    if payload.shape() != expected {
        return Err(Error::PayloadShape {
            family: family.label(),
            expected,
            found: payload.shape(),
        });
    }
    Ok(())
}

/// Expands a tangent parameter to the full matrix `M ∈ p^{1,0}`.
pub fn embed_tangent(t: &TangentParam) -> Result<ComplexMatrix> {
    check_shape(t.family, &t.payload)?;
    let a = &t.payload;
    let m = match t.family {
        HermitianFamily::Su { p, q } => {
            let mut m = ComplexMatrix::zeros(p + q, p + q);
            m.set_block(0, p, a);
            m
        }
        HermitianFamily::Sp { n } => {
            let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
            let ia = a.scale(I);
            m.set_block(0, 0, a);
            m.set_block(0, n, &ia);
            m.set_block(n, 0, &ia);
            m.set_block(n, n, &a.scale_real(-1.0));
            m
        }
        HermitianFamily::So { p } => {
            let mut m = ComplexMatrix::zeros(p + 2, p + 2);
            for i in 0..p {
                let v = a[(i, 0)];
                m[(i, p)] = v;
                m[(i, p + 1)] = I * v;
                m[(p, i)] = v;
                m[(p + 1, i)] = I * v;
            }
            m
        }
        HermitianFamily::SoStar { n } => {
            let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
            let neg = a.scale_real(-1.0);
            m.set_block(0, 0, &a.scale(I));
            m.set_block(0, n, &neg);
            m.set_block(n, 0, &neg);
            m.set_block(n, n, &a.scale(-I));
            m
        }
    };
    Ok(m)
}

/// Reads the tangent parameter back from a matrix and reports how far the
/// matrix is from `p^{1,0}`: the returned residual is
/// `‖M − embed(param)‖ / ‖M‖`.
pub fn extract_tangent(family: HermitianFamily, m: &ComplexMatrix) -> Result<(TangentParam, f64)> {
    let size = family.matrix_size();
    if m.shape() != (size, size) {
        return Err(Error::ShapeMismatch {
            expected: (size, size),
            found: m.shape(),
        });
    }
    let payload = match family {
        HermitianFamily::Su { p, q } => m.block(0, p, p, q),
        HermitianFamily::Sp { n } => {
            let a = m.block(0, 0, n, n);
            (&a + &a.transpose()).scale_real(0.5)
        }
        HermitianFamily::So { p } => ComplexMatrix::from_fn(p, 1, |i, _| m[(i, p)]),
        HermitianFamily::SoStar { n } => {
            let a = m.block(0, 0, n, n).scale(-I);
            (&a - &a.transpose()).scale_real(0.5)
        }
    };
    let t = TangentParam { family, payload };
    let back = embed_tangent(&t)?;
    let nm = m.norm();
    let residual = if nm == 0.0 { 0.0 } else { (m - &back).norm() / nm };
    Ok((t, residual))
}

/// Holomorphic sectional curvature `−tr([M,M*]²) / (tr MM*)²`.
pub fn sectional_curvature(t: &TangentParam) -> Result<f64> {
    if t.payload.norm() <= ZERO_PAYLOAD {
        return Err(Error::ZeroTangent);
    }
    let m = embed_tangent(t)?;
    let c = commutator(&m, &m.adjoint());
    let num = (&c * &c).trace().re;
    let den = m.norm_sqr();
    Ok(-num / (den * den))
}

/// Closed-form curvature evaluated directly on the payload.
///
/// SU, Sp and SO* give `−2·tr((A*A)²)/(tr A*A)²`; SO(p,2) gives
/// `−1 + |vᵗv|² / (2‖v‖⁴)`. Used inside the extremizer where the full
/// embedding would dominate the cost.
pub fn payload_curvature(family: HermitianFamily, a: &ComplexMatrix) -> f64 {
    match family {
        HermitianFamily::So { .. } => {
            let nv = a.norm_sqr();
            let vtv: C64 = a.as_slice().iter().map(|z| z * z).sum();
            -1.0 + vtv.norm_sqr() / (2.0 * nv * nv)
        }
        _ => {
            let g = &a.adjoint() * a;
            let t = g.trace().re;
            -2.0 * g.norm_sqr() / (t * t)
        }
    }
}

/// Lower and upper bounds of the holomorphic sectional curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn curvature_bounds(f: HermitianFamily) -> CurvatureBounds {
    match f {
        HermitianFamily::Su { p, q } => CurvatureBounds {
            lower: -2.0,
            upper: -2.0 / p.min(q) as f64,
        },
        HermitianFamily::Sp { n } => CurvatureBounds {
            lower: -2.0,
            upper: -2.0 / n as f64,
        },
        HermitianFamily::So { .. } => CurvatureBounds {
            lower: -1.0,
            upper: -0.5,
        },
        HermitianFamily::SoStar { n } => CurvatureBounds {
            lower: -1.0,
            upper: -1.0 / (n / 2) as f64,
        },
    }
}

/// Applies the family's linear constraint to a raw payload.
pub fn project_payload(family: HermitianFamily, a: &ComplexMatrix) -> ComplexMatrix {
    match family {
        HermitianFamily::Sp { .. } => (a + &a.transpose()).scale_real(0.5),
        HermitianFamily::SoStar { .. } => (a - &a.transpose()).scale_real(0.5),
        _ => a.clone(),
    }
}

/// Random unit-norm tangent: Gaussian entries, projected, normalized.
pub fn random_tangent<R: Rng + ?Sized>(family: HermitianFamily, rng: &mut R) -> TangentParam {
    let (r, c) = family.payload_shape();
    loop {
        let a = project_payload(family, &gaussian_matrix(rng, r, c));
        let nrm = a.norm();
        if nrm > 1e-8 {
            return TangentParam {
                family,
                payload: a.scale_real(1.0 / nrm),
            };
        }
    }
}

/// Which end of the curvature range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl FromStr for Extremum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Self::Min),
            "max" => Ok(Self::Max),
            _ => Err(Error::ConfigParse(format!("unknown extremum '{s}'"))),
        }
    }
}

/// The `n×n` matrix `[[0, I],[−I, 0]]` for even `n`; for odd `n` the
/// `(n−1)` version padded with a zero last row and column.
pub fn standard_skew(n: usize) -> ComplexMatrix {
    let h = n / 2;
    let mut j = ComplexMatrix::zeros(n, n);
    for i in 0..h {
        j[(i, h + i)] = ONE;
        j[(h + i, i)] = -ONE;
    }
    j
}

/// Fixed witness on the minimal or maximal curvature locus.
pub fn canonical_witness(family: HermitianFamily, which: Extremum) -> TangentParam {
    let (r, c) = family.payload_shape();
    let mut a = ComplexMatrix::zeros(r, c);
    match (family, which) {
        (HermitianFamily::Su { q, .. }, Extremum::Max) => {
            for i in 0..q {
                a[(i, i)] = ONE;
            }
        }
        (HermitianFamily::Sp { n }, Extremum::Max) => a = ComplexMatrix::identity(n),
        (HermitianFamily::Su { .. } | HermitianFamily::Sp { .. }, Extremum::Min) => a[(0, 0)] = ONE,
        (HermitianFamily::So { .. }, Extremum::Max) => a[(0, 0)] = ONE,
        (HermitianFamily::So { .. }, Extremum::Min) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            a[(0, 0)] = C64::new(s, 0.0);
            a[(1, 0)] = C64::new(0.0, s);
        }
        (HermitianFamily::SoStar { n }, Extremum::Max) => a = standard_skew(n),
        (HermitianFamily::SoStar { .. }, Extremum::Min) => {
            a[(0, 1)] = ONE;
            a[(1, 0)] = -ONE;
        }
    }
    TangentParam { family, payload: a }
}

/// Random point on the minimal or maximal curvature locus.
pub fn random_witness<R: Rng + ?Sized>(family: HermitianFamily, which: Extremum, rng: &mut R) -> TangentParam {
    let base = canonical_witness(family, which).payload;
    let payload = match family {
        HermitianFamily::Su { p, q } => {
            let w = random_unitary(rng, p);
            let v = random_unitary(rng, q);
            &(&w * &base) * &v
        }
        HermitianFamily::Sp { n } | HermitianFamily::SoStar { n } => {
            let u = random_unitary(rng, n);
            &(&u * &base) * &u.transpose()
        }
        HermitianFamily::So { p } => {
            // real orthogonal rotation preserves both vᵗv and ‖v‖
            let mut x: Vec<f64> = (0..p).map(|_| std_normal(rng)).collect();
            let mut y: Vec<f64> = (0..p).map(|_| std_normal(rng)).collect();
            let nx = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            x.iter_mut().for_each(|t| *t /= nx);
            let d: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            y.iter_mut().zip(&x).for_each(|(b, a)| *b -= d * a);
            let ny = y.iter().map(|t| t * t).sum::<f64>().sqrt();
            y.iter_mut().for_each(|t| *t /= ny);
            let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let v: Vec<C64> = match which {
                Extremum::Max => x.iter().map(|&t| phase * t).collect(),
                Extremum::Min => x
                    .iter()
                    .zip(&y)
                    .map(|(&a, &b)| phase * C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2)
                    .collect(),
            };
            ComplexMatrix::column_vector(&v)
        }
    };
    let scale = rng.random_range(0.1..10.0);
    TangentParam {
        family,
        payload: payload.scale_real(scale),
    }
}

/// Result of [`extremize_curvature`].
#[derive(Debug, Clone)]
pub struct ExtremizeOutcome {
    pub witness: TangentParam,
    pub value: f64,
    /// Index of the restart that produced the witness.
    pub restart: usize,
}

const FD_STEP: f64 = 1e-6;
const MAX_ITERS: usize = 400;

/// Random-restart projected gradient search for the smallest or largest
/// holomorphic sectional curvature over unit payloads.
pub fn extremize_curvature(f: HermitianFamily, mode: Extremum, restarts: usize, seed: u64) -> (TangentParam, f64) {
    let out = extremize_curvature_detailed(f, mode, restarts, seed);
    (out.witness, out.value)
}

pub fn extremize_curvature_detailed(
    f: HermitianFamily,
    mode: Extremum,
    restarts: usize,
    seed: u64,
) -> ExtremizeOutcome {
    let restarts = restarts.max(1);
    let runs = par::map_indexed(restarts, |r| {
        let mut rng = seeded(seed, r as u64);
        let start = random_tangent(f, &mut rng);
        ascend(f, mode, start.payload)
    });
    let sign = match mode {
        Extremum::Max => 1.0,
        Extremum::Min => -1.0,
    };
    let (restart, best) = runs
        .into_iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| {
            let fa = sign * payload_curvature(f, a);
            let fb = sign * payload_curvature(f, b);
            fa.total_cmp(&fb).then(j.cmp(i))
        })
        .expect("at least one restart");
    let witness = TangentParam {
        family: f,
        payload: best,
    };
    let value = sectional_curvature(&witness).expect("unit payload is nonzero");
    let b = curvature_bounds(f);
    ExtremizeOutcome {
        witness,
        value: value.clamp(b.lower, b.upper),
        restart,
    }
}

fn normalize_projected(f: HermitianFamily, a: &ComplexMatrix) -> ComplexMatrix {
    let p = project_payload(f, a);
    let n = p.norm();
    p.scale_real(1.0 / n)
}

fn ascend(f: HermitianFamily, mode: Extremum, start: ComplexMatrix) -> ComplexMatrix {
    let sign = match mode {
        Extremum::Max => 1.0,
        Extremum::Min => -1.0,
    };
    let (r, c) = start.shape();
    let objective = |a: &ComplexMatrix| sign * payload_curvature(f, a);
    let mut x = normalize_projected(f, &start);
    let mut fx = objective(&x);
    let mut step = 0.5;
    for _ in 0..MAX_ITERS {
        let coords = x.to_real_coords();
        let mut grad = vec![0.0; coords.len()];
        let mut probe = coords.clone();
        for k in 0..coords.len() {
            probe[k] = coords[k] + FD_STEP;
            let fp = objective(&ComplexMatrix::from_real_coords(r, c, &probe));
            probe[k] = coords[k] - FD_STEP;
            let fm = objective(&ComplexMatrix::from_real_coords(r, c, &probe));
            probe[k] = coords[k];
            grad[k] = (fp - fm) / (2.0 * FD_STEP);
        }
        let g = project_payload(f, &ComplexMatrix::from_real_coords(r, c, &grad));
        // tangential part on the unit sphere
        let radial = crate::cmatrix::frobenius_inner(&g, &x).unwrap().re;
        let g = &g - &x.scale_real(radial);
        let gn = g.norm_sqr();
        if gn < 1e-18 {
            break;
        }
        let mut accepted = false;
        while step > 1e-12 {
            let cand = normalize_projected(f, &(&x + &g.scale_real(step)));
            let fc = objective(&cand);
            if fc >= fx + 0.3 * step * gn {
                x = cand;
                fx = fc;
                accepted = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    x
}
