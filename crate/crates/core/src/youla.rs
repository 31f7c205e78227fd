//! Canonical form of complex skew-symmetric matrices under unitary
//! congruence `A ↦ UᵗAU`.
//!
//! Every skew `A` admits a unitary `U` such that `UᵗAU` is block diagonal
//! with real blocks `[[0, σ], [−σ, 0]]` (and a zero for odd rank defect).
//! The `σ²` are the eigenvalues of `A*A`, which therefore come in pairs.

use crate::cmatrix::{herm_eig, vdot, vnorm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Default relative pairing tolerance.
pub const PAIRING_TOL: f64 = 1e-8;

/// Eigenvalues of `A*A` below this fraction of the largest are zero.
const RANK_TOL: f64 = 1e-10;

/// Relative gap separating eigenvalue clusters of `A*A`.
const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct YoulaDecomposition {
    /// Unitary with `UᵗAU` canonical.
    pub u: ComplexMatrix,
    /// Block magnitudes, descending.
    pub sigmas: Vec<f64>,
    /// `‖UᵗAU − canonical‖ / ‖A‖`.
    pub residual: f64,
}

impl YoulaDecomposition {
    pub fn blocks(&self) -> usize {
        self.sigmas.len()
    }

    /// The block-diagonal canonical matrix of size `n`.
    pub fn canonical(&self) -> ComplexMatrix {
        canonical_form(self.u.rows(), &self.sigmas)
    }
}

/// Block-diagonal matrix with `[[0, σ_j], [−σ_j, 0]]` blocks followed by
/// zeros.
pub fn canonical_form(n: usize, sigmas: &[f64]) -> ComplexMatrix {
    let mut c = ComplexMatrix::zeros(n, n);
    for (j, &s) in sigmas.iter().enumerate() {
        c[(2 * j, 2 * j + 1)] = C64::new(s, 0.0);
        c[(2 * j + 1, 2 * j)] = C64::new(-s, 0.0);
    }
    c
}

fn check_skew(a: &ComplexMatrix, tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (a.rows(), a.rows()),
            found: a.shape(),
        });
    }
    let residual = a.skew_residual();
    if residual > tol {
        return Err(Error::NotSkew { residual });
    }
    Ok(())
}

fn orthogonalize(v: &mut [C64], against: &[Vec<C64>]) {
    for _ in 0..2 {
        for u in against {
            let c = vdot(u, v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn normalized(mut v: Vec<C64>) -> Option<Vec<C64>> {
    let n = vnorm(&v);
    if n < 1e-8 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(v)
}

/// Projection of `v` onto the span of the orthonormal `basis`.
fn project(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut out = vec![ZERO; v.len()];
    for b in basis {
        let c = vdot(b, v);
        out.iter_mut().zip(b).for_each(|(o, x)| *o += c * x);
    }
    out
}

/// Youla decomposition of a skew-symmetric matrix.
pub fn youla_decompose(a: &ComplexMatrix, tol: f64) -> Result<YoulaDecomposition> {
    check_skew(a, tol)?;
    let n = a.rows();
    let scale = a.norm();
    if scale == 0.0 {
        return Ok(YoulaDecomposition {
            u: ComplexMatrix::identity(n),
            sigmas: Vec::new(),
            residual: 0.0,
        });
    }
    let h = &a.adjoint() * a;
    let eig = herm_eig(&h, 1e-8)?;
    let top = eig.values[n - 1];

    // clusters of equal eigenvalues, largest first
    let mut clusters: Vec<(f64, Vec<Vec<C64>>)> = Vec::new();
    let mut kernel: Vec<Vec<C64>> = Vec::new();
    for k in (0..n).rev() {
        let l = eig.values[k];
        if l <= RANK_TOL * top {
            kernel.push(eig.vector(k));
            continue;
        }
        match clusters.last_mut() {
            Some((l0, vs)) if (*l0 - l).abs() <= CLUSTER_TOL * top => vs.push(eig.vector(k)),
            _ => clusters.push((l, vec![eig.vector(k)])),
        }
    }

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut sigmas = Vec::new();
    for (lam, space) in &clusters {
        let sigma0 = lam.sqrt();
        let mut chosen: Vec<Vec<C64>> = Vec::new();
        for candidate in space {
            let mut u1 = candidate.clone();
            orthogonalize(&mut u1, &chosen);
            let Some(u1) = normalized(u1) else { continue };
            // partner: −conj(A u1)/σ, kept inside the eigenspace
            let au1 = a.mul_vec(&u1);
            let raw: Vec<C64> = au1.iter().map(|z| -z.conj() / sigma0).collect();
            let mut u2 = project(&raw, space);
            let mut with_u1 = chosen.clone();
            with_u1.push(u1.clone());
            orthogonalize(&mut u2, &with_u1);
            let Some(u2) = normalized(u2) else { continue };
            let atu2 = a.mul_vec(&u2);
            let s: C64 = u1.iter().zip(&atu2).map(|(x, y)| x * y).sum();
            sigmas.push(s.re);
            chosen.push(u1);
            chosen.push(u2);
            if chosen.len() >= space.len() {
                break;
            }
        }
        columns.extend(chosen);
    }
    // leftovers (kernel and any unpaired direction) complete the basis
    for v in kernel.into_iter().chain(clusters.into_iter().flat_map(|(_, s)| s)) {
        if columns.len() == n {
            break;
        }
        let mut w = v;
        orthogonalize(&mut w, &columns);
        if let Some(w) = normalized(w) {
            columns.push(w);
        }
    }
    if columns.len() < n {
        return Err(Error::NoConvergence { iterations: 0 });
    }

    // blocks sorted by σ descending (stable, clusters already ordered)
    let u = ComplexMatrix::from_columns(&columns);
    let canon = canonical_form(n, &sigmas);
    let residual = (&(&u.transpose() * a) * &u - &canon).norm() / scale;
    Ok(YoulaDecomposition { u, sigmas, residual })
}

/// Eigenvalues of `A*A` (descending) with their pairing residual.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSpectrum {
    /// Descending; consecutive entries `(2k, 2k+1)` form the pairs and a
    /// trailing zero appears for odd size.
    pub values: Vec<f64>,
    /// Largest pair mismatch (and trailing value for odd size) relative to
    /// the largest eigenvalue.
    pub residual: f64,
}

impl PairedSpectrum {
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.values.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    }
}

pub fn paired_eigenvalues(a: &ComplexMatrix) -> Result<PairedSpectrum> {
    paired_eigenvalues_with_tol(a, PAIRING_TOL)
}

/// Like [`paired_eigenvalues`] with an explicit pairing tolerance.
pub fn paired_eigenvalues_with_tol(a: &ComplexMatrix, tol: f64) -> Result<PairedSpectrum> {
    check_skew(a, 1e-10)?;
    let n = a.rows();
    let eig = herm_eig(&(&a.adjoint() * a), 1e-8)?;
    let values: Vec<f64> = eig.values.iter().rev().map(|l| l.max(0.0)).collect();
    let top = values.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(PairedSpectrum { values, residual: 0.0 });
    }
    let mut residual = values.chunks_exact(2).map(|c| (c[0] - c[1]).abs()).fold(0.0, f64::max);
    if n % 2 == 1 {
        residual = residual.max(values[n - 1]);
    }
    residual /= top;
    if residual > tol {
        return Err(Error::PairingFailure { residual });
    }
    Ok(PairedSpectrum { values, residual })
}
