//! The defining function of the maximal-curvature locus on odd skew
//! matrices and its Levi form.
//!
//! On `n×n` skew matrices (`n = 5` or `7`) the locus is the zero set of
//! `F(A) = (tr A*A)² − c·tr((A*A)²)` with `c = 2⌊n/2⌋`, and `F ≤ 0`
//! everywhere. Coordinates `a_1, a_2, …` fill the strict upper triangle row
//! by row. The base point `A₀` carries ones at `(0,1), (2,3), …`.
//!
//! The Levi form `Q[j][k] = ∂²F/∂ā_j∂a_k` has the closed form
//!
//! ```text
//! Q[j][k] = 8·ā_k·a_j + 4·δ_jk·tr(A*A) + 4c·tr(E_j E_k A*A)
//! ```
//!
//! where `E_j = ∂A/∂a_j` is the real skew elementary matrix.

use crate::cmatrix::{herm_eig, kernel_basis, subspace_distance, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::par;
use crate::report::{LemmaReport, SubCheck};
use crate::rng::{complex_gaussian, seeded, uniform};

/// Coordinates of a skew matrix on the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewCoords {
    pub n: usize,
    pub a: Vec<C64>,
}

impl SkewCoords {
    pub fn new(n: usize, a: Vec<C64>) -> Result<Self> {
        check_size(n)?;
        let m = coord_count(n);
        if a.len() != m {
            return Err(Error::BadLength {
                expected: m,
                found: a.len(),
            });
        }
        Ok(Self { n, a })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![ZERO; coord_count(n)])
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 5 || n == 7 {
        Ok(())
    } else {
        Err(Error::BadSize(n))
    }
}

/// `n(n−1)/2`.
pub fn coord_count(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Zero-based coordinate index of the entry `(i, j)`, `i < j`.
pub fn coord_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Entry `(i, j)`, `i < j`, addressed by the zero-based coordinate index.
pub fn coord_entry(n: usize, k: usize) -> (usize, usize) {
    let mut k = k;
    for i in 0..n {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    panic!("coordinate index out of range");
}

/// The skew matrix with the given upper-triangle coordinates.
pub fn embed_skew(c: &SkewCoords) -> Result<ComplexMatrix> {
    let m = coord_count(c.n);
    if c.a.len() != m {
        return Err(Error::BadLength {
            expected: m,
            found: c.a.len(),
        });
    }
    let mut a = ComplexMatrix::zeros(c.n, c.n);
    for (k, &z) in c.a.iter().enumerate() {
        let (i, j) = coord_entry(c.n, k);
        a[(i, j)] = z;
        a[(j, i)] = -z;
    }
    Ok(a)
}

/// Upper-triangle coordinates of a skew matrix.
pub fn skew_coords_of(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.rows();
    (0..coord_count(n))
        .map(|k| {
            let (i, j) = coord_entry(n, k);
            a[(i, j)]
        })
        .collect()
}

/// Base point: ones at `(0,1), (2,3), …, (n−3, n−2)`.
pub fn base_point(n: usize) -> Result<SkewCoords> {
    let mut c = SkewCoords::zeros(n)?;
    for b in 0..n / 2 {
        c.a[coord_index(n, 2 * b, 2 * b + 1)] = ONE;
    }
    Ok(c)
}

/// Coefficient `c = 2⌊n/2⌋` of the quartic term.
pub fn quartic_coefficient(n: usize) -> Result<f64> {
    check_size(n)?;
    Ok(2.0 * (n / 2) as f64)
}

fn traces(a: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let g = &a.adjoint() * a;
    (g.trace().re, g)
}

/// `F(A) = (tr A*A)² − c·tr((A*A)²)`.
pub fn big_f(n: usize, a: &ComplexMatrix) -> Result<f64> {
    let c = quartic_coefficient(n)?;
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: a.shape(),
        });
    }
    let res = a.skew_residual();
    if res > 1e-10 {
        return Err(Error::NotSkew { residual: res });
    }
    Ok(big_f_unchecked(c, a))
}

fn big_f_unchecked(c: f64, a: &ComplexMatrix) -> f64 {
    let (t, g) = traces(a);
    t * t - c * g.norm_sqr()
}

/// The companion cubic `(tr A*A)³ − 36·tr((A*A)³)` for `n = 7`.
pub fn big_f_cubic(a: &ComplexMatrix) -> Result<f64> {
    if a.shape() != (7, 7) {
        return Err(Error::BadSize(a.rows()));
    }
    let (t, g) = traces(a);
    let g3 = &(&g * &g) * &g;
    Ok(t * t * t - 36.0 * g3.trace().re)
}

/// Levi form `Q[j][k] = ∂²F/∂ā_j∂a_k` on the skew coordinates.
#[derive(Debug, Clone)]
pub struct LeviForm {
    pub n: usize,
    pub q: ComplexMatrix,
}

/// Real skew elementary matrix `∂A/∂a_k`.
fn elementary(n: usize, k: usize) -> ComplexMatrix {
    let (i, j) = coord_entry(n, k);
    let mut e = ComplexMatrix::zeros(n, n);
    e[(i, j)] = ONE;
    e[(j, i)] = -ONE;
    e
}

/// Closed-form Levi form at `c0`.
pub fn levi_form_at(n: usize, c0: &SkewCoords) -> Result<LeviForm> {
    let c = quartic_coefficient(n)?;
    if c0.n != n {
        return Err(Error::BadSize(c0.n));
    }
    let a = embed_skew(c0)?;
    let (t, g) = traces(&a);
    let m = coord_count(n);
    let es: Vec<ComplexMatrix> = (0..m).map(|k| elementary(n, k)).collect();
    let eg: Vec<ComplexMatrix> = es.iter().map(|e| e * &g).collect();
    let mut q = ComplexMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            let mut v = c0.a[k].conj() * c0.a[j] * 8.0;
            if j == k {
                v += C64::new(4.0 * t, 0.0);
            }
            // tr(E_j E_k G) = Σ (E_j)_{rs} (E_k G)_{sr}
            let ekg = &eg[k];
            let ej = &es[j];
            let mut tr = ZERO;
            for r in 0..n {
                for s in 0..n {
                    let e = ej[(r, s)];
                    if e != ZERO {
                        tr += e * ekg[(s, r)];
                    }
                }
            }
            v += tr * (4.0 * c);
            q[(j, k)] = v;
        }
    }
    Ok(LeviForm { n, q })
}

/// Finite-difference Levi form from the Wirtinger combination
/// `¼[(F_{x_j x_k} + F_{y_j y_k}) + i(F_{y_j x_k} − F_{x_j y_k})]`, using
/// central second differences with step `h` and one Richardson step.
pub fn levi_form_fd(n: usize, c0: &SkewCoords, h: f64) -> Result<LeviForm> {
    let c = quartic_coefficient(n)?;
    let m = coord_count(n);
    let base: Vec<f64> = c0.a.iter().map(|z| z.re).chain(c0.a.iter().map(|z| z.im)).collect();
    let f = |x: &[f64]| -> f64 {
        let coords: Vec<C64> = (0..m).map(|k| C64::new(x[k], x[m + k])).collect();
        let a = embed_skew(&SkewCoords { n, a: coords }).expect("length is fixed");
        big_f_unchecked(c, &a)
    };
    let hessian = |u: usize, v: usize, h: f64| -> f64 {
        let mut x = base.clone();
        let mut at = |du: f64, dv: f64| {
            x.copy_from_slice(&base);
            x[u] += du;
            x[v] += dv;
            f(&x)
        };
        (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
    };
    let rich = |u: usize, v: usize| (4.0 * hessian(u, v, h / 2.0) - hessian(u, v, h)) / 3.0;
    let rows: Vec<Vec<C64>> = par::map_indexed(m, |j| {
        (0..m)
            .map(|k| {
                let re = rich(j, k) + rich(m + j, m + k);
                let im = rich(m + j, k) - rich(j, m + k);
                C64::new(re, im) * 0.25
            })
            .collect()
    });
    let q = ComplexMatrix::from_fn(m, m, |j, k| rows[j][k]);
    Ok(LeviForm { n, q })
}

/// Finite-difference step used by the Levi-form cross-check.
pub const FD_STEP: f64 = 1e-3;

/// Verifies the Levi form of `F` at the base point for `n = 5` or `7`.
pub fn verify_negative_semidefinite_kernel(n: usize) -> LemmaReport {
    verify_negative_semidefinite_kernel_with(n, 1000, 42)
}

pub fn verify_negative_semidefinite_kernel_with(n: usize, samples: usize, seed: u64) -> LemmaReport {
    let q = match base_point(n).and_then(|b| levi_form_at(n, &b)) {
        Ok(l) => l.q,
        Err(e) => {
            let mut r = LemmaReport::new(check_name(n), anchor(n), samples as u64, seed);
            r.push(SubCheck::failed("levi form", e.to_string()));
            return r;
        }
    };
    verify_levi_matrix(n, &q, samples, seed)
}

fn check_name(n: usize) -> String {
    format!("levi_form_n{n}")
}

fn anchor(n: usize) -> String {
    match n {
        5 => "Levi form at A0 is negative semi-definite with 5-dimensional kernel <e4, e7, e9, e10, e1+e8>".into(),
        _ => format!(
            "Levi form at A0 (n = {n}) is negative semi-definite with 7-dimensional kernel, F < 0 off the trivial direction"
        ),
    }
}

/// Runs the Levi-form checks against a supplied form `q` (normally the
/// closed form at the base point; tests pass perturbed copies).
pub fn verify_levi_matrix(n: usize, q: &ComplexMatrix, samples: usize, seed: u64) -> LemmaReport {
    let mut r = LemmaReport::new(check_name(n), anchor(n), samples as u64, seed);
    let base = match base_point(n) {
        Ok(b) => b,
        Err(e) => {
            r.push(SubCheck::failed("base point", e.to_string()));
            return r;
        }
    };
    let m = coord_count(n);
    r.push(SubCheck::new("levi form is Hermitian", q.hermitian_residual(), 1e-12));

    let eig = match herm_eig(q, 1e-10) {
        Ok(e) => e,
        Err(e) => {
            r.push(SubCheck::failed("eigenvalues", e.to_string()));
            return r;
        }
    };
    let top = *eig.values.last().unwrap();
    r.push(
        SubCheck::new("largest eigenvalue <= 0", top.max(0.0), 1e-10)
            .with_note(format!("largest eigenvalue {top:.3e}")),
    );
    let kernel = kernel_basis(q, 1e-10).unwrap_or_default();
    let expected_dim = if n == 5 { 5 } else { 7 };
    r.push(SubCheck::count("kernel dimension", kernel.len(), expected_dim));

    let fd_residual = levi_form_fd(n, &base, FD_STEP)
        .map(|fd| (&fd.q - q).max_abs())
        .unwrap_or(f64::NAN);
    r.push(SubCheck::new(
        "closed form vs finite differences at A0",
        fd_residual,
        1e-6,
    ));

    let a0 = embed_skew(&base).expect("base point has valid length");
    let c = quartic_coefficient(n).expect("size checked");
    r.push(SubCheck::new("F(A0) = 0", big_f_unchecked(c, &a0).abs(), 1e-12));

    if n == 5 {
        let unit = |ks: &[usize]| -> Vec<C64> {
            let s = 1.0 / (ks.len() as f64).sqrt();
            let mut v = vec![ZERO; m];
            for &k in ks {
                v[k] = C64::new(s, 0.0);
            }
            v
        };
        // e4, e7, e9, e10 and (e1 + e8)/√2 in one-based numbering
        let expected = vec![unit(&[3]), unit(&[6]), unit(&[8]), unit(&[9]), unit(&[0, 7])];
        r.push(SubCheck::new(
            "kernel span equals <e4, e7, e9, e10, e1+e8>",
            subspace_distance(&kernel, &expected),
            1e-8,
        ));
        let slice = [3usize, 6, 8, 9];
        let worst = par::max_indexed(samples, |i| {
            let mut rng = seeded(seed, i as u64);
            let mut a = base.a.clone();
            let mut s = 0.0;
            for &k in &slice {
                let z = complex_gaussian(&mut rng);
                a[k] += z;
                s += z.norm_sqr();
            }
            let f = big_f_unchecked(c, &embed_skew(&SkewCoords { n, a }).unwrap());
            (f + 4.0 * s * s).abs() / (1.0 + s * s)
        });
        r.push(
            SubCheck::new("slice identity F = -4 (sum |x|^2)^2", worst, 1e-9)
                .with_note("F(A0 + a e4 + b e7 + c e9 + d e10)"),
        );
    } else {
        // trivial direction: A0 itself
        let nt = (n / 2) as f64;
        let trivial: Vec<C64> = base.a.iter().map(|z| z / nt.sqrt()).collect();
        let nontrivial: Vec<Vec<C64>> = {
            let mut out: Vec<Vec<C64>> = Vec::new();
            for v in &kernel {
                let mut w = v.clone();
                for u in std::iter::once(&trivial).chain(out.iter()) {
                    let cc = crate::cmatrix::vdot(u, &w);
                    w.iter_mut().zip(u).for_each(|(x, y)| *x -= cc * y);
                }
                let nw = crate::cmatrix::vnorm(&w);
                if nw > 1e-6 {
                    w.iter_mut().for_each(|x| *x /= nw);
                    out.push(w);
                }
            }
            out
        };
        r.push(SubCheck::count(
            "non-trivial kernel directions",
            nontrivial.len(),
            expected_dim - 1,
        ));
        let trivial_in_kernel = 1.0 - {
            let p: f64 = kernel
                .iter()
                .map(|k| crate::cmatrix::vdot(k, &trivial).norm_sqr())
                .sum();
            p
        };
        r.push(SubCheck::new(
            "trivial direction A0 lies in the kernel",
            trivial_in_kernel.abs(),
            1e-10,
        ));
        let worst = if nontrivial.is_empty() {
            f64::NAN
        } else {
            par::map_indexed(samples, |i| {
                let mut rng = seeded(seed, i as u64);
                let radius = uniform(&mut rng, 0.05, 2.0);
                let coef: Vec<C64> = nontrivial.iter().map(|_| complex_gaussian(&mut rng)).collect();
                let cn = coef.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let mut a = base.a.clone();
                for (z, v) in coef.iter().zip(&nontrivial) {
                    for (ak, vk) in a.iter_mut().zip(v) {
                        *ak += z / cn * radius * vk;
                    }
                }
                let f = big_f_unchecked(c, &embed_skew(&SkewCoords { n, a }).unwrap());
                f / radius.powi(4)
            })
            .into_iter()
            .fold(f64::NEG_INFINITY, par::nan_max)
        };
        r.push(
            SubCheck::new("F(A0 + x) / |x|^4 < 0 on non-trivial kernel directions", worst, -1e-9)
                .with_note("residual is the largest sampled ratio; it must be negative"),
        );
        let cubic = big_f_cubic(&a0).map(f64::abs).unwrap_or(f64::NAN);
        r.push(SubCheck::new(
            "cubic (tr A*A)^3 - 36 tr((A*A)^3) vanishes at A0",
            cubic,
            1e-10,
        ));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::gaussian_matrix;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn ordering_matches_row_major_upper_triangle() {
        assert_eq!(coord_entry(5, 0), (0, 1));
        assert_eq!(coord_entry(5, 3), (0, 4));
        assert_eq!(coord_entry(5, 4), (1, 2));
        assert_eq!(coord_entry(5, 7), (2, 3));
        assert_eq!(coord_entry(5, 9), (3, 4));
        for n in [5, 7] {
            for k in 0..coord_count(n) {
                let (i, j) = coord_entry(n, k);
                assert_eq!(coord_index(n, i, j), k);
            }
        }
        assert_eq!(coord_index(7, 2, 3), 11);
        assert_eq!(coord_index(7, 4, 5), 18);
    }

    #[test]
    fn embed_examples() {
        let mut a = vec![ZERO; 10];
        a[0] = ONE;
        let m = embed_skew(&SkewCoords::new(5, a).unwrap()).unwrap();
        assert_eq!(m[(0, 1)], ONE);
        assert_eq!(m[(1, 0)], -ONE);
        assert_eq!(m.norm_sqr(), 2.0);
        let a0 = embed_skew(&base_point(5).unwrap()).unwrap();
        assert_eq!(a0[(0, 1)], ONE);
        assert_eq!(a0[(2, 3)], ONE);
        assert_eq!(a0.norm_sqr(), 4.0);
        assert_eq!(
            embed_skew(&SkewCoords::zeros(5).unwrap()).unwrap(),
            ComplexMatrix::zeros(5, 5)
        );
        assert!(matches!(
            SkewCoords::new(5, vec![ZERO; 9]),
            Err(Error::BadLength { .. })
        ));
        assert!(matches!(SkewCoords::zeros(6), Err(Error::BadSize(6))));
    }

    #[test]
    fn base_point_spectrum() {
        let a0 = embed_skew(&base_point(5).unwrap()).unwrap();
        let e = herm_eig(&(&a0.adjoint() * &a0), 1e-12).unwrap();
        assert_eq!(e.values, vec![0.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn f_values() {
        let a0 = embed_skew(&base_point(5).unwrap()).unwrap();
        assert_eq!(big_f(5, &a0).unwrap(), 0.0);
        let mut a = vec![ZERO; 10];
        a[0] = ONE;
        let m = embed_skew(&SkewCoords::new(5, a).unwrap()).unwrap();
        assert_eq!(big_f(5, &m).unwrap(), -4.0);
        assert!(matches!(
            big_f(5, &ComplexMatrix::identity(5)),
            Err(Error::NotSkew { .. })
        ));
        assert!(matches!(big_f(6, &ComplexMatrix::zeros(6, 6)), Err(Error::BadSize(6))));
        let a07 = embed_skew(&base_point(7).unwrap()).unwrap();
        assert_eq!(big_f(7, &a07).unwrap(), 0.0);
        assert_eq!(big_f_cubic(&a07).unwrap(), 0.0);
    }

    #[test]
    fn levi_at_base_point_entries() {
        let q = levi_form_at(5, &base_point(5).unwrap()).unwrap().q;
        for j in 0..10 {
            let expect = match j {
                0 | 7 => -8.0,
                3 | 6 | 8 | 9 => 0.0,
                _ => -16.0,
            };
            assert_eq!(q[(j, j)], c(expect), "diagonal {j}");
            for k in 0..10 {
                if k != j {
                    let expect = if (j, k) == (0, 7) || (j, k) == (7, 0) { 8.0 } else { 0.0 };
                    assert_eq!(q[(j, k)], c(expect), "entry {j},{k}");
                }
            }
        }
        // the {1,8} block has eigenvalues −16 and 0
        let b = ComplexMatrix::from_real(2, 2, &[-8.0, 8.0, 8.0, -8.0]);
        let e = herm_eig(&b, 1e-12).unwrap();
        assert!((e.values[0] + 16.0).abs() < 1e-13 && e.values[1].abs() < 1e-13);
    }

    #[test]
    fn closed_form_matches_finite_differences_off_base() {
        let mut rng = seeded(31, 0);
        for n in [5, 7] {
            for _ in 0..3 {
                let a: Vec<C64> = (0..coord_count(n)).map(|_| complex_gaussian(&mut rng)).collect();
                let s = SkewCoords::new(n, a).unwrap();
                let q = levi_form_at(n, &s).unwrap().q;
                let fd = levi_form_fd(n, &s, FD_STEP).unwrap().q;
                let scale = embed_skew(&s).unwrap().norm_sqr().max(1.0);
                assert!((&q - &fd).max_abs() < 1e-7 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn congruence_invariance() {
        let mut rng = seeded(32, 0);
        let g = gaussian_matrix(&mut rng, 5, 5);
        let a = &g - &g.transpose();
        let u = crate::rng::random_unitary(&mut rng, 5);
        let b = &(&u.transpose() * &a) * &u;
        assert!((big_f(5, &a).unwrap() - big_f(5, &b).unwrap()).abs() < 1e-9 * a.norm_sqr().powi(2));
    }

    #[test]
    fn reports_pass_at_base_point() {
        for n in [5, 7] {
            let r = verify_negative_semidefinite_kernel_with(n, 200, 1);
            assert!(r.passed(), "{}", crate::report::render_text(&[r]));
        }
    }

    #[test]
    fn perturbed_form_fails() {
        let mut q = levi_form_at(5, &base_point(5).unwrap()).unwrap().q;
        q[(3, 3)] += ONE;
        let r = verify_levi_matrix(5, &q, 10, 1);
        assert!(!r.passed());
        assert!(!r.detail("largest eigenvalue <= 0").unwrap().passed);
    }
}
