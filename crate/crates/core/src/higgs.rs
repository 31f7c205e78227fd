//! Pointwise Higgs-field algebra: the central element `Z` of `k`, the
//! Toledo and energy densities of `Φ = Φ⁺ + Φ⁻`, and the Milnor–Wood
//! bound.
//!
//! `Z` acts on `p^{1,0}` by `i` and on `p^{0,1}` by `−i`. With
//! `⟨A, B⟩ = tr(AB*)`, `Re⟨Φ, [Φ, iZ]⟩ = ‖Φ⁺‖² − ‖Φ⁻‖²` because the two
//! eigenspaces are orthogonal.

use rand::Rng;

use crate::cmatrix::{commutator, frobenius_inner, ComplexMatrix, C64, I};
use crate::error::{Error, Result};
use crate::lie_spaces::{embed_tangent, random_tangent, HermitianFamily};
use crate::par;
use crate::report::{LemmaReport, SubCheck};
use crate::reps::{algebra_residual, omega};
use crate::rng::{seeded, uniform};

/// Relative tolerance on the eigenspace conditions of a Higgs element.
pub const EIGENSPACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CenterElement {
    pub family: HermitianFamily,
    pub z: ComplexMatrix,
}

impl CenterElement {
    /// `‖[Z, M] − iM‖ / ‖M‖`.
    pub fn eigen_residual(&self, m: &ComplexMatrix, sign: f64) -> f64 {
        let d = &commutator(&self.z, m) - &m.scale(C64::new(0.0, sign));
        d.norm() / m.norm().max(f64::MIN_POSITIVE)
    }

    /// Distance of `Z` from `k`: membership in `g` plus skew-Hermitian part.
    pub fn k_residual(&self) -> f64 {
        algebra_residual(self.family, &self.z) + (&self.z + &self.z.adjoint()).norm()
    }
}

/// Generator of the center of `k` with eigenvalues `±i` on `p`.
pub fn center_generator(fam: HermitianFamily) -> Result<CenterElement> {
    let fam = fam.validate()?;
    let z = match fam {
        HermitianFamily::Su { p, q } => {
            let s = (p + q) as f64;
            let d: Vec<C64> = (0..p + q)
                .map(|i| {
                    if i < p {
                        C64::new(0.0, q as f64 / s)
                    } else {
                        C64::new(0.0, -(p as f64) / s)
                    }
                })
                .collect();
            ComplexMatrix::from_diag(&d)
        }
        HermitianFamily::Sp { n } | HermitianFamily::SoStar { n } => omega(n).scale_real(0.5),
        HermitianFamily::So { p } => {
            let mut z = ComplexMatrix::zeros(p + 2, p + 2);
            z[(p, p + 1)] = C64::new(1.0, 0.0);
            z[(p + 1, p)] = C64::new(-1.0, 0.0);
            z
        }
    };
    Ok(CenterElement { family: fam, z })
}

/// A point of `p ⊗ ℂ` split into its `±i` eigencomponents under `ad Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiggsElement {
    family: HermitianFamily,
    phi_plus: ComplexMatrix,
    phi_minus: ComplexMatrix,
}

impl HiggsElement {
    pub fn new(family: HermitianFamily, phi_plus: ComplexMatrix, phi_minus: ComplexMatrix) -> Result<Self> {
        let n = family.validate()?.matrix_size();
        for m in [&phi_plus, &phi_minus] {
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: (n, n),
                    found: m.shape(),
                });
            }
        }
        let h = Self {
            family,
            phi_plus,
            phi_minus,
        };
        let residual = h.eigenspace_residual();
        if !(residual <= EIGENSPACE_TOL) {
            return Err(Error::EigenspaceViolation { residual });
        }
        Ok(h)
    }

    /// `Φ⁺ = embed(a)` and `Φ⁻ = embed(b)*` for random tangents `a, b`
    /// scaled by independent factors in `[0, 2)`.
    pub fn random<R: Rng + ?Sized>(family: HermitianFamily, rng: &mut R) -> Self {
        let part = |rng: &mut R| {
            let t = random_tangent(family, rng);
            let m = embed_tangent(&t).expect("random tangent fits its family");
            let s = uniform(rng, 0.0, 2.0);
            m.scale_real(s / m.norm())
        };
        let phi_plus = part(rng);
        let phi_minus = part(rng).adjoint();
        Self {
            family,
            phi_plus,
            phi_minus,
        }
    }

    pub fn family(&self) -> HermitianFamily {
        self.family
    }

    pub fn phi_plus(&self) -> &ComplexMatrix {
        &self.phi_plus
    }

    pub fn phi_minus(&self) -> &ComplexMatrix {
        &self.phi_minus
    }

    pub fn phi(&self) -> ComplexMatrix {
        &self.phi_plus + &self.phi_minus
    }

    /// Largest relative violation of `[Z, Φ±] = ±iΦ±` and `Φ± ∈ p ⊗ ℂ`.
    pub fn eigenspace_residual(&self) -> f64 {
        let Ok(z) = center_generator(self.family) else {
            return f64::NAN;
        };
        let mut worst = 0.0f64;
        for (m, sign) in [(&self.phi_plus, 1.0), (&self.phi_minus, -1.0)] {
            if m.norm() == 0.0 {
                continue;
            }
            worst = par::nan_max(worst, z.eigen_residual(m, sign));
        }
        worst
    }
}

/// The two cross pairings `⟨Φ⁺, Φ⁻⟩` and `⟨Φ⁻, Φ⁺⟩` that drop out of
/// `⟨Φ, [Φ, iZ]⟩`, as magnitudes.
pub fn cross_pairings(h: &HiggsElement) -> (f64, f64) {
    let a = frobenius_inner(&h.phi_plus, &h.phi_minus)
        .map(|z| z.norm())
        .unwrap_or(f64::NAN);
    let b = frobenius_inner(&h.phi_minus, &h.phi_plus)
        .map(|z| z.norm())
        .unwrap_or(f64::NAN);
    (a, b)
}

/// `Re⟨Φ, [Φ, iZ]⟩`, cross-checked against `‖Φ⁺‖² − ‖Φ⁻‖²`.
pub fn toledo_density(h: &HiggsElement) -> Result<f64> {
    let residual = h.eigenspace_residual();
    if !(residual <= EIGENSPACE_TOL) {
        return Err(Error::EigenspaceViolation { residual });
    }
    let z = center_generator(h.family)?;
    let phi = h.phi();
    let bracket = commutator(&phi, &z.z.scale(I));
    let direct = frobenius_inner(&phi, &bracket)?.re;
    let split = h.phi_plus.norm_sqr() - h.phi_minus.norm_sqr();
    let scale = energy_density(h).max(1.0);
    let gap = (direct - split).abs() / scale;
    if gap > 1e-10 {
        return Err(Error::EigenspaceViolation { residual: gap });
    }
    Ok(direct)
}

/// `‖Φ⁺‖² + ‖Φ⁻‖²`.
pub fn energy_density(h: &HiggsElement) -> f64 {
    h.phi_plus.norm_sqr() + h.phi_minus.norm_sqr()
}

/// `(−2k/(n+1)) · rank · vol`.
pub fn milnor_wood_bound(k: f64, n: u32, rank: u32, vol: f64) -> Result<f64> {
    if k > 0.0 || k.is_nan() {
        return Err(Error::BadSign(k));
    }
    if n == 0 || rank == 0 || !(vol > 0.0) {
        return Err(Error::BadShape(format!("n = {n}, rank = {rank}, vol = {vol}")));
    }
    Ok(-2.0 * k / (n as f64 + 1.0) * rank as f64 * vol)
}

/// Randomized verification of the center, the density identity, the
/// energy inequality with its equality case, and the cross pairings.
pub fn verify_higgs(fam: HermitianFamily, samples: usize, seed: u64, tol: f64) -> LemmaReport {
    let mut r = LemmaReport::new(
        format!("higgs_{fam}"),
        format!(
            "pointwise Toledo/energy algebra on {}: Re<Phi,[Phi,iZ]> = |Phi+|^2 - |Phi-|^2 and energy >= |toledo|",
            fam.label()
        ),
        samples as u64,
        seed,
    );
    let z = match center_generator(fam) {
        Ok(z) => z,
        Err(e) => {
            r.push(SubCheck::failed("center", e.to_string()));
            return r;
        }
    };
    r.push(SubCheck::new("Z lies in k", z.k_residual(), 1e-12));
    let ad2 = par::max_indexed(10, |i| {
        let mut rng = seeded(seed ^ 0xad2, i as u64);
        let a = embed_tangent(&random_tangent(fam, &mut rng)).expect("fits");
        let b = embed_tangent(&random_tangent(fam, &mut rng)).expect("fits");
        let x = &a + &b.adjoint();
        let twice = commutator(&z.z, &commutator(&z.z, &x));
        (&twice + &x).norm() / x.norm()
    });
    r.push(SubCheck::new("ad(Z)^2 = -id on p", ad2, 1e-12));

    let samples = samples.max(1);
    let rows = par::map_indexed(samples, |i| {
        let mut rng = seeded(seed, i as u64);
        let h = HiggsElement::random(fam, &mut rng);
        let eig = h.eigenspace_residual();
        let (c1, c2) = cross_pairings(&h);
        let phi = h.phi();
        let direct = frobenius_inner(&phi, &commutator(&phi, &z.z.scale(I)))
            .map(|v| v.re)
            .unwrap_or(f64::NAN);
        let split = h.phi_plus.norm_sqr() - h.phi_minus.norm_sqr();
        let e = energy_density(&h);
        let identity = (direct - split).abs() / e.max(1.0);
        // slack of the inequality against its closed form 2 min(|Φ+|², |Φ-|²)
        let slack = e - direct.abs();
        let min_part = h.phi_plus.norm_sqr().min(h.phi_minus.norm_sqr());
        let ineq = (slack - 2.0 * min_part).abs().max((-slack).max(0.0)) / e.max(1.0);
        (eig, identity, ineq, c1.max(c2))
    });
    let fold = |f: fn(&(f64, f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, par::nan_max);
    r.push(SubCheck::new(
        "components in the +-i eigenspaces of ad Z",
        fold(|t| t.0),
        1e-12,
    ));
    r.push(SubCheck::new(
        "Re<Phi,[Phi,iZ]> = |Phi+|^2 - |Phi-|^2",
        fold(|t| t.1),
        tol,
    ));
    r.push(SubCheck::new(
        "energy - |toledo| = 2 min(|Phi+|^2, |Phi-|^2) >= 0",
        fold(|t| t.2),
        tol,
    ));
    r.push(SubCheck::new("cross pairings vanish", fold(|t| t.3), 1e-12));

    // equality exactly for holomorphic or antiholomorphic Φ
    let eq = par::max_indexed(samples.min(1000), |i| {
        let mut rng = seeded(seed ^ 0xe9, i as u64);
        let h = HiggsElement::random(fam, &mut rng);
        let plus = HiggsElement {
            phi_minus: ComplexMatrix::zeros(h.phi_minus.rows(), h.phi_minus.cols()),
            ..h.clone()
        };
        let minus = HiggsElement {
            phi_plus: ComplexMatrix::zeros(h.phi_plus.rows(), h.phi_plus.cols()),
            ..h
        };
        [plus, minus]
            .iter()
            .map(|h| match toledo_density(h) {
                Ok(t) => (energy_density(h) - t.abs()).abs(),
                Err(_) => f64::NAN,
            })
            .fold(0.0, par::nan_max)
    });
    r.push(SubCheck::new("equality when one component vanishes", eq, 1e-12));
    r
}

/// Arithmetic checks of the Milnor–Wood bound on fixed inputs.
pub fn verify_milnor_wood() -> LemmaReport {
    use std::f64::consts::PI;
    let mut r = LemmaReport::new(
        "milnor_wood_bound",
        "Milnor-Wood bound tau_max = (-2k/(n+1)) rk(G) Vol(X)",
        3,
        0,
    );
    let cases = [
        ("k = 0 gives 0", (0.0, 3, 2, 5.0), 0.0),
        ("k = -(n+1)/2 gives rank * vol", (-2.0, 3, 2, 5.0), 10.0),
        (
            "n = 1, k = -2, rank 1, vol 2pi gives 4pi",
            (-2.0, 1, 1, 2.0 * PI),
            4.0 * PI,
        ),
    ];
    for (name, (k, n, rank, vol), want) in cases {
        match milnor_wood_bound(k, n, rank, vol) {
            Ok(v) => r.push(SubCheck::new(name, (v - want).abs(), 1e-14)),
            Err(e) => r.push(SubCheck::failed(name, e.to_string())),
        }
    }
    let rejects = matches!(milnor_wood_bound(1.0, 1, 1, 1.0), Err(Error::BadSign(_)));
    r.push(SubCheck::new(
        "positive k rejected",
        if rejects { 0.0 } else { 1.0 },
        0.0,
    ));
    r
}
