//! Trace-ratio inequalities and the linear spaces on their equality loci.
//!
//! For a `p×q` matrix `A ≠ 0` the ratio `tr((A*A)²) / (tr A*A)²` lies in
//! `[1/q, 1]`: it is 1 exactly in rank one and `1/q` exactly when
//! `A*A = λI_q`. A *flat family* is a linear space all of whose nonzero
//! members satisfy the second condition.

use rand::Rng;

use crate::cmatrix::{herm_eig, ComplexMatrix, C64, I, ONE};
use crate::error::{Error, Result};
use crate::lie_spaces::{random_witness, Extremum, HermitianFamily, TangentParam, ZERO_PAYLOAD};
use crate::par;
use crate::rng::{complex_gaussian, random_unitary, seeded};

/// Threshold on `‖B'‖` below which [`orthonormalize_pair`] reports
/// linear dependence.
pub const DEPENDENT_TOL: f64 = 1e-10;

/// Largest deviation of `A*A` (or `B*B`) from `I` accepted as normalized.
pub const NORMALIZED_TOL: f64 = 1e-10;

/// Largest deviation of `(A+B)*(A+B)` from a scalar matrix.
pub const SCALAR_TOL: f64 = 1e-6;

/// `tr((A*A)²) / (tr A*A)²`.
pub fn trace_ratio(a: &ComplexMatrix) -> Result<f64> {
    if a.norm() <= ZERO_PAYLOAD {
        return Err(Error::ZeroMatrix);
    }
    let g = &a.adjoint() * a;
    let t = g.trace().re;
    Ok(g.norm_sqr() / (t * t))
}

/// Distance of a tangent payload from the maximal-curvature locus, computed
/// on the payload rescaled to unit Frobenius norm.
///
/// - SU, Sp, SO* with even `n`: `‖A*A − (tr A*A / q)·I‖`.
/// - SO(p,2): `‖v‖⁴ − |vᵗv|²`.
/// - SO* with odd `n`: spread of the `n − 1` largest eigenvalues of `A*A`
///   around their mean, plus the smallest eigenvalue.
pub fn equality_locus_residual(f: HermitianFamily, t: &TangentParam) -> Result<f64> {
    let nrm = t.payload.norm();
    if nrm <= ZERO_PAYLOAD {
        return Err(Error::ZeroTangent);
    }
    let a = t.payload.scale_real(1.0 / nrm);
    let residual = match f {
        HermitianFamily::So { .. } => {
            let vtv: C64 = a.as_slice().iter().map(|z| z * z).sum();
            (1.0 - vtv.norm_sqr()).max(0.0)
        }
        HermitianFamily::SoStar { n } if n % 2 == 1 => {
            let g = &a.adjoint() * &a;
            let eig = herm_eig(&g, 1e-8)?;
            let top = &eig.values[1..];
            let mean = top.iter().sum::<f64>() / top.len() as f64;
            let spread = top.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
            spread + eig.values[0].abs()
        }
        _ => {
            let g = &a.adjoint() * &a;
            let q = g.rows();
            let lam = g.trace().re / q as f64;
            (&g - &ComplexMatrix::identity(q).scale_real(lam)).norm()
        }
    };
    Ok(residual)
}

/// A linear space of `p×q` matrices spanned by `members`.
#[derive(Debug, Clone)]
pub struct FlatFamily {
    pub p: usize,
    pub q: usize,
    pub members: Vec<ComplexMatrix>,
}

impl FlatFamily {
    /// `Σ t_j A_j`.
    pub fn combination(&self, t: &[C64]) -> ComplexMatrix {
        assert_eq!(t.len(), self.members.len());
        let mut c = ComplexMatrix::zeros(self.p, self.q);
        for (tj, aj) in t.iter().zip(&self.members) {
            c += &aj.scale(*tj);
        }
        c
    }

    /// `‖C*C − (Σ|t_j|²)·I_q‖` for `C = Σ t_j A_j`.
    pub fn combination_residual(&self, t: &[C64]) -> f64 {
        let c = self.combination(t);
        let s: f64 = t.iter().map(|z| z.norm_sqr()).sum();
        (&(&c.adjoint() * &c) - &ComplexMatrix::identity(self.q).scale_real(s)).norm()
    }

    /// Largest combination residual over `samples` random unit coefficient
    /// tuples.
    pub fn max_combination_residual(&self, samples: usize, seed: u64) -> f64 {
        let k = self.members.len();
        par::max_indexed(samples, |i| {
            let mut rng = seeded(seed, i as u64);
            let mut t: Vec<C64> = (0..k).map(|_| complex_gaussian(&mut rng)).collect();
            let n = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            t.iter_mut().for_each(|z| *z /= n);
            self.combination_residual(&t)
        })
    }

    /// Complex rank of the members viewed as vectors in `ℂ^{pq}`.
    pub fn span_rank(&self) -> usize {
        span_rank(&self.members)
    }

    /// Column rank of the `p × kq` matrix `(A_1 | … | A_k)`.
    pub fn stacked_column_rank(&self) -> usize {
        let k = self.members.len();
        let mut s = ComplexMatrix::zeros(self.p, k * self.q);
        for (j, a) in self.members.iter().enumerate() {
            s.set_block(0, j * self.q, a);
        }
        numerical_rank(&(&s.adjoint() * &s))
    }
}

fn numerical_rank(gram: &ComplexMatrix) -> usize {
    let eig = herm_eig(gram, 1e-8).expect("Gram matrices are Hermitian");
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    eig.values.iter().filter(|&&l| l > 1e-10 * top.max(1e-300)).count()
}

fn span_rank(ms: &[ComplexMatrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let gram = ComplexMatrix::from_fn(ms.len(), ms.len(), |i, j| {
        crate::cmatrix::frobenius_inner(&ms[j], &ms[i]).unwrap()
    });
    numerical_rank(&gram)
}

/// The `m = ⌊p/q⌋` matrices `A_j` carrying `I_q` in rows `(j−1)q .. jq`.
pub fn standard_flat_family(p: usize, q: usize) -> Result<FlatFamily> {
    if q == 0 || p < q {
        return Err(Error::BadShape(format!(
            "flat family needs p >= q >= 1, got p={p}, q={q}"
        )));
    }
    let members = (0..p / q)
        .map(|j| {
            let mut a = ComplexMatrix::zeros(p, q);
            a.set_block(j * q, 0, &ComplexMatrix::identity(q));
            a
        })
        .collect();
    Ok(FlatFamily { p, q, members })
}

/// Outcome of one orthonormalization step.
#[derive(Debug, Clone, PartialEq)]
pub enum PairOutcome {
    /// `B' = B − c·A` with `A*B' = 0`.
    Modified {
        b: ComplexMatrix,
        lambda: f64,
        mu: f64,
        coefficient: C64,
    },
    /// `B` is a multiple of `A`.
    Dependent { lambda: f64, mu: f64, coefficient: C64 },
}

impl PairOutcome {
    pub fn coefficient(&self) -> C64 {
        match self {
            Self::Modified { coefficient, .. } | Self::Dependent { coefficient, .. } => *coefficient,
        }
    }
}

/// Makes `B` orthogonal to `A` inside a flat family.
///
/// With `A*A = B*B = I_q`, `(A+B)*(A+B) = λI` and `(A+iB)*(A+iB) = μI`, the
/// matrix `B − ½(λ−2 + i(2−μ))·A` is either zero or has columns orthogonal
/// to those of `A`.
pub fn orthonormalize_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<PairOutcome> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    let q = a.cols();
    let id = ComplexMatrix::identity(q);
    let norm_res = (&(&a.adjoint() * a) - &id)
        .norm()
        .max((&(&b.adjoint() * b) - &id).norm());
    if norm_res > NORMALIZED_TOL {
        return Err(Error::NotNormalized { residual: norm_res });
    }
    let scalar_part = |c: &ComplexMatrix| -> Result<f64> {
        let g = &c.adjoint() * c;
        let s = g.trace().re / q as f64;
        let residual = (&g - &id.scale_real(s)).norm();
        if residual > SCALAR_TOL {
            return Err(Error::NotScalar { residual });
        }
        Ok(s)
    };
    let lambda = scalar_part(&(a + b))?;
    let mu = scalar_part(&(a + &b.scale(I)))?;
    let coefficient = C64::new(lambda - 2.0, 2.0 - mu) * 0.5;
    let b_new = b - &a.scale(coefficient);
    if b_new.norm() <= DEPENDENT_TOL {
        Ok(PairOutcome::Dependent {
            lambda,
            mu,
            coefficient,
        })
    } else {
        Ok(PairOutcome::Modified {
            b: b_new,
            lambda,
            mu,
            coefficient,
        })
    }
}

/// Rescales so that `B*B = I_q`, assuming `B*B` is scalar.
pub fn renormalize(b: &ComplexMatrix) -> ComplexMatrix {
    let s = (&b.adjoint() * b).trace().re / b.cols() as f64;
    b.scale_real(1.0 / s.sqrt())
}

/// Greedy lower bound on the largest dimension of a linear space of
/// tangent payloads contained in the maximal-curvature locus.
pub fn max_flat_dimension_search(f: HermitianFamily, trials: usize, seed: u64) -> usize {
    let trials = trials.max(1);
    par::map_indexed(trials, |r| {
        let mut rng = seeded(seed, r as u64);
        greedy_flat(f, &mut rng)
    })
    .into_iter()
    .max()
    .unwrap_or(1)
}

const PROPOSALS_PER_STEP: usize = 8;
const FLATNESS_TUPLES: usize = 100;
const FLATNESS_TOL: f64 = 1e-8;

fn dimension_cap(f: HermitianFamily) -> usize {
    let (r, c) = f.payload_shape();
    let ambient = match f {
        HermitianFamily::Sp { n } => n * (n + 1) / 2,
        HermitianFamily::SoStar { n } => n * (n - 1) / 2,
        _ => r * c,
    };
    let expected = match f {
        HermitianFamily::Su { p, q } => p / q,
        _ => 1,
    };
    (expected + 2).max(if ambient <= 3 { ambient } else { 0 }).min(ambient)
}

fn greedy_flat<R: Rng + ?Sized>(f: HermitianFamily, rng: &mut R) -> usize {
    let cap = dimension_cap(f);
    let mut members = vec![random_witness(f, Extremum::Max, rng).payload];
    if let HermitianFamily::Su { .. } = f {
        members[0] = renormalize(&members[0]);
    }
    while members.len() < cap {
        let mut extended = false;
        for k in 0..PROPOSALS_PER_STEP {
            let cand = match f {
                HermitianFamily::Su { .. } if k % 2 == 0 => complement_proposal(&members, rng),
                _ => Some(random_witness(f, Extremum::Max, rng).payload),
            };
            let Some(cand) = cand else { continue };
            let cand = match f {
                HermitianFamily::Su { .. } => match reduce_against(&members, &renormalize(&cand)) {
                    Some(c) => c,
                    None => continue,
                },
                _ => cand,
            };
            let mut trial = members.clone();
            trial.push(cand);
            if span_rank(&trial) == trial.len() && is_flat(f, &trial, rng) {
                members = trial;
                extended = true;
                break;
            }
        }
        if !extended {
            break;
        }
    }
    members.len()
}

/// Mixes the existing members with an isometry onto the orthogonal
/// complement of their column spaces.
fn complement_proposal<R: Rng + ?Sized>(members: &[ComplexMatrix], rng: &mut R) -> Option<ComplexMatrix> {
    let (p, q) = members[0].shape();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for m in members {
        for j in 0..q {
            basis.push(m.column(j));
        }
    }
    if basis.len() + q > p {
        return None;
    }
    // orthonormal complement by Gram-Schmidt on a random unitary's columns
    let u = random_unitary(rng, p);
    let mut fresh: Vec<Vec<C64>> = Vec::new();
    for j in 0..p {
        if fresh.len() == q {
            break;
        }
        let mut v = u.column(j);
        for _ in 0..2 {
            for b in basis.iter().chain(fresh.iter()) {
                let nb = crate::cmatrix::vnorm(b);
                let c = crate::cmatrix::vdot(b, &v) / (nb * nb);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = crate::cmatrix::vnorm(&v);
        if n > 1e-6 {
            v.iter_mut().for_each(|x| *x /= n);
            fresh.push(v);
        }
    }
    if fresh.len() < q {
        return None;
    }
    let w = random_unitary(rng, q);
    let mut cand = &ComplexMatrix::from_columns(&fresh) * &w;
    for m in members {
        cand += &m.scale(complex_gaussian(rng));
    }
    Some(cand)
}

fn reduce_against(members: &[ComplexMatrix], b: &ComplexMatrix) -> Option<ComplexMatrix> {
    let mut b = b.clone();
    for a in members {
        match orthonormalize_pair(&renormalize(a), &b).ok()? {
            PairOutcome::Modified { b: nb, .. } => b = renormalize(&nb),
            PairOutcome::Dependent { .. } => return None,
        }
    }
    Some(b)
}

fn is_flat<R: Rng + ?Sized>(f: HermitianFamily, members: &[ComplexMatrix], rng: &mut R) -> bool {
    for _ in 0..FLATNESS_TUPLES {
        let mut c = ComplexMatrix::zeros(members[0].rows(), members[0].cols());
        for m in members {
            c += &m.scale(complex_gaussian(rng));
        }
        let t = TangentParam { family: f, payload: c };
        match equality_locus_residual(f, &t) {
            Ok(r) if r <= FLATNESS_TOL => {}
            _ => return false,
        }
    }
    true
}

/// Convenience: a `p×q` matrix with `ONE` at `(i, j)`.
pub fn unit_matrix(p: usize, q: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(p, q);
    m[(i, j)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_spaces::standard_skew;
    use crate::rng::gaussian_matrix;

    #[test]
    fn ratio_examples() {
        assert!((trace_ratio(&unit_matrix(4, 1, 0, 0)).unwrap() - 1.0).abs() < 1e-15);
        let mut a = ComplexMatrix::zeros(5, 3);
        a.set_block(0, 0, &ComplexMatrix::identity(3));
        assert!((trace_ratio(&a).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(trace_ratio(&ComplexMatrix::zeros(2, 2)), Err(Error::ZeroMatrix));
    }

    #[test]
    fn ratio_matches_eigenvalue_oracle() {
        let mut rng = seeded(21, 0);
        for _ in 0..20 {
            let a = gaussian_matrix(&mut rng, 4, 2);
            let eig = herm_eig(&(&a.adjoint() * &a), 1e-10).unwrap();
            let s1: f64 = eig.values.iter().sum();
            let s2: f64 = eig.values.iter().map(|l| l * l).sum();
            let r = trace_ratio(&a).unwrap();
            assert!((r - s2 / (s1 * s1)).abs() < 1e-12);
            assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn locus_residual_examples() {
        let su = HermitianFamily::su(4, 2).unwrap();
        let mut a = ComplexMatrix::zeros(4, 2);
        a.set_block(0, 0, &ComplexMatrix::identity(2));
        let t = TangentParam::new(su, a).unwrap();
        assert!(equality_locus_residual(su, &t).unwrap() < 1e-15);

        let so = HermitianFamily::so(3).unwrap();
        let phase = C64::from_polar(2.0, 0.7);
        let v = TangentParam::from_vector(3, &[phase * 0.6, phase * 0.8, phase * 0.0]).unwrap();
        assert!(equality_locus_residual(so, &v).unwrap() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let iso = TangentParam::from_vector(3, &[C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0)]).unwrap();
        assert!((equality_locus_residual(so, &iso).unwrap() - 1.0).abs() < 1e-15);

        let odd = HermitianFamily::so_star(5).unwrap();
        let t = TangentParam::new(odd, standard_skew(5)).unwrap();
        assert!(equality_locus_residual(odd, &t).unwrap() < 1e-14);
        let t = TangentParam::new(odd, unit_matrix(5, 5, 0, 1) - unit_matrix(5, 5, 1, 0)).unwrap();
        assert!(equality_locus_residual(odd, &t).unwrap() > 0.1);
    }

    #[test]
    fn standard_family_shapes() {
        let fam = standard_flat_family(5, 2).unwrap();
        assert_eq!(fam.members.len(), 2);
        assert_eq!(fam.members[0][(0, 0)], ONE);
        assert_eq!(fam.members[1][(2, 0)], ONE);
        assert_eq!(fam.members[1][(3, 1)], ONE);
        assert!(fam.members.iter().all(|m| (0..2).all(|j| m[(4, j)].norm() == 0.0)));
        assert_eq!(
            standard_flat_family(3, 3).unwrap().members,
            vec![ComplexMatrix::identity(3)]
        );
        assert!(matches!(standard_flat_family(2, 3), Err(Error::BadShape(_))));
    }

    #[test]
    fn combination_by_direct_multiplication() {
        let fam = standard_flat_family(6, 2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let t = [C64::new(s, 0.0), C64::new(0.0, s), C64::new(s, 0.0)];
        let c = fam.combination(&t);
        // oracle: explicit product of the stacked blocks
        let mut cc = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..6 {
                    cc[(i, j)] += c[(k, i)].conj() * c[(k, j)];
                }
            }
        }
        assert!((&cc - &ComplexMatrix::identity(2)).norm() < 1e-15);
    }

    #[test]
    fn worked_orthonormalization() {
        let fam = standard_flat_family(5, 2).unwrap();
        let (a1, a2) = (&fam.members[0], &fam.members[1]);
        match orthonormalize_pair(a1, a2).unwrap() {
            PairOutcome::Modified { b, coefficient, .. } => {
                assert_eq!(&b, a2);
                assert_eq!(coefficient, C64::new(0.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            orthonormalize_pair(a1, a1).unwrap(),
            PairOutcome::Dependent { .. }
        ));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = (a1 + a2).scale_real(s);
        match orthonormalize_pair(a1, &b).unwrap() {
            PairOutcome::Modified { b, lambda, mu, .. } => {
                assert!((lambda - (2.0 + 2f64.sqrt())).abs() < 1e-14);
                assert!((mu - 2.0).abs() < 1e-14);
                assert!((&b - &a2.scale_real(s)).norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orthonormalization_rejects_bad_input() {
        let a = unit_matrix(3, 1, 0, 0);
        assert!(matches!(
            orthonormalize_pair(&a, &a.scale_real(2.0)),
            Err(Error::NotNormalized { .. })
        ));
        let fam = standard_flat_family(4, 2).unwrap();
        let mut b = ComplexMatrix::zeros(4, 2);
        b[(0, 0)] = ONE;
        b[(2, 1)] = ONE;
        assert!(matches!(
            orthonormalize_pair(&fam.members[0], &b),
            Err(Error::NotScalar { .. })
        ));
    }

    #[test]
    fn stacked_columns_are_injective() {
        for (p, q) in [(5, 2), (7, 3), (6, 2)] {
            let fam = standard_flat_family(p, q).unwrap();
            assert_eq!(fam.stacked_column_rank(), fam.members.len() * q);
            assert_eq!(fam.span_rank(), fam.members.len());
        }
    }

    #[test]
    fn small_searches() {
        assert_eq!(max_flat_dimension_search(HermitianFamily::su(5, 2).unwrap(), 4, 1), 2);
        assert_eq!(max_flat_dimension_search(HermitianFamily::so(6).unwrap(), 4, 1), 1);
        assert_eq!(max_flat_dimension_search(HermitianFamily::so_star(5).unwrap(), 4, 1), 1);
        assert_eq!(max_flat_dimension_search(HermitianFamily::so_star(3).unwrap(), 4, 1), 3);
    }
}
