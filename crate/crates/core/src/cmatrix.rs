//! Dense complex linear algebra.
//!
//! Everything downstream is expressed in terms of [`ComplexMatrix`], a
//! row-major matrix of `Complex64`. The sizes involved are small (at most a
//! few hundred rows), so the algorithms favour robustness over speed: cyclic
//! Jacobi for Hermitian eigenproblems, LU with partial pivoting for solves and
//! a Padé scaling-and-squaring exponential.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default relative tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Absolute floor for the kernel threshold.
pub const KERNEL_FLOOR: f64 = 1e-12;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let m = Self { rows, cols, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from row-major `f64` entries. Panics on length mismatch.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_real: wrong number of entries");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Column vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        assert!(!cols.is_empty(), "from_columns: no columns");
        let rows = cols[0].len();
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    /// Copy of the `rows × cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Overwrites the block starting at `(r0, c0)` with `b`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real part as a real-valued complex matrix.
    pub fn real_part(&self) -> Self {
        self.map(|z| C64::new(z.re, 0.0))
    }

    /// Imaginary part as a real-valued complex matrix.
    pub fn imag_part(&self) -> Self {
        self.map(|z| C64::new(z.im, 0.0))
    }

    /// `‖self − self*‖ / ‖self‖`, zero for the zero matrix.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        (self - &self.adjoint()).norm() / n
    }

    /// `‖self + selfᵗ‖ / ‖self‖`, zero for the zero matrix.
    pub fn skew_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        (self + &self.transpose()).norm() / n
    }

    /// `‖self − selfᵗ‖ / ‖self‖`, zero for the zero matrix.
    pub fn symmetric_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        (self - &self.transpose()).norm() / n
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Flattens to `[re..., im...]` row-major real coordinates.
    pub fn to_real_coords(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.data.iter().map(|z| z.re).collect();
        out.extend(self.data.iter().map(|z| z.im));
        out
    }

    pub fn from_real_coords(rows: usize, cols: usize, x: &[f64]) -> Self {
        let n = rows * cols;
        assert_eq!(x.len(), 2 * n);
        Self {
            rows,
            cols,
            data: (0..n).map(|k| C64::new(x[k], x[n + k])).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: f64) -> ComplexMatrix {
        self.scale_real(s)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                (&self).$method(rhs)
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "sub_assign: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// The invariant metric `g(A, B) = tr(A B*)`, i.e. `Σ A_ij conj(B_ij)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y.conj()).sum())
}

/// Hermitian inner product of vectors, conjugate-linear in the first slot.
pub fn vdot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vnorm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl EigenResult {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V · diag(λ) · V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diag(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// `tol` bounds the accepted relative asymmetry `‖H − H*‖ / ‖H‖`; the input is
/// symmetrized before iterating.
pub fn herm_eig(h: &ComplexMatrix, tol: f64) -> Result<EigenResult> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (h.rows(), h.rows()),
            found: h.shape(),
        });
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = h.hermitian_residual();
    if residual > tol {
        return Err(Error::NonHermitian { residual });
    }
    let n = h.rows();
    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm();

    let mut converged = scale == 0.0 || n == 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence { iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        converged = off.sqrt() <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenResult { values, vectors })
}

/// One unitary Jacobi rotation annihilating `a[p][q]`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.rows();
    // phase e^{-i arg a_pq} makes the pivot real; then a real rotation zeroes it
    let phase = apq.conj() / g;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = phase * (-s);
    let vqq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

/// Orthonormal basis of the numerical kernel of a Hermitian matrix.
///
/// An eigenvector is kept when `|λ| ≤ max(tol · max(1, max|λ|), 1e-12)`.
pub fn kernel_basis(h: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<C64>>> {
    let eig = herm_eig(h, tol.max(DEFAULT_TOL))?;
    let largest = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let threshold = (tol * largest.max(1.0)).max(KERNEL_FLOOR);
    Ok(eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= threshold)
        .map(|(k, _)| eig.vector(k))
        .collect())
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases. Subspaces of different dimension are at distance 1.
pub fn subspace_distance(u: &[Vec<C64>], v: &[Vec<C64>]) -> f64 {
    if u.len() != v.len() {
        return 1.0;
    }
    if u.is_empty() {
        return 0.0;
    }
    let one_sided = |a: &[Vec<C64>], b: &[Vec<C64>]| -> f64 {
        // columns of b minus their projection onto span(a)
        let resid: Vec<Vec<C64>> = b
            .iter()
            .map(|y| {
                let mut r = y.clone();
                for x in a {
                    let c = vdot(x, y);
                    for (ri, xi) in r.iter_mut().zip(x) {
                        *ri -= c * xi;
                    }
                }
                r
            })
            .collect();
        let w = ComplexMatrix::from_columns(&resid);
        let gram = &w.adjoint() * &w;
        herm_eig(&gram, 1e-8)
            .map(|e| e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
            .unwrap_or(1.0)
    };
    one_sided(u, v).max(one_sided(v, u))
}

/// Solves `A X = B` by LU with partial pivoting. Returns `None` when `A` is
/// numerically singular.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<ComplexMatrix> {
    assert!(a.is_square() && a.rows() == b.rows(), "solve: shape mismatch");
    let n = a.rows();
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    if scale == 0.0 {
        return None;
    }
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if lu[(piv, k)].norm() <= 1e-300_f64.max(f64::EPSILON * 1e-3 * scale) {
            return None;
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[(k, k)];
        for j in 0..m {
            let mut s = x[(k, j)];
            for l in (k + 1)..n {
                s -= lu[(k, l)] * x[(l, j)];
            }
            x[(k, j)] = s / d;
        }
    }
    Some(x)
}

pub fn inverse(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> C64 {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows();
    let mut lu = a.clone();
    let mut det = ONE;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if lu[(piv, k)] == ZERO {
            return ZERO;
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            det = -det;
        }
        let d = lu[(k, k)];
        det *= d;
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            for j in (k + 1)..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }
    det
}

// Padé degrees and the matching 1-norm thresholds for double precision.
const PADE_DEGREES: [usize; 5] = [3, 5, 7, 9, 13];
const PADE_THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.539398330063230e-1,
    9.504178996162932e-1,
    2.097847961257068e0,
    5.371920351148152e0,
];

fn pade_coefficients(m: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for i in 1..=m {
        let prev = c[i - 1];
        c.push(prev * (m - i + 1) as f64 / (i as f64 * (2 * m - i + 1) as f64));
    }
    c
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant.
pub fn expm(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square(), "expm of non-square matrix");
    let n = m.rows();
    let norm = m.norm_one();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }

    let (degree, squarings) = match PADE_THETA.iter().position(|&t| norm <= t) {
        Some(k) => (PADE_DEGREES[k], 0u32),
        None => {
            let s = (norm / PADE_THETA[4]).log2().ceil().max(0.0) as u32;
            (13, s)
        }
    };
    let a = m.scale_real(0.5f64.powi(squarings as i32));
    let c = pade_coefficients(degree);

    // even powers A^0, A^2, A^4, ...
    let a2 = &a * &a;
    let mut even = vec![ComplexMatrix::identity(n)];
    for k in 1..=degree / 2 {
        let next = &even[k - 1] * &a2;
        even.push(next);
    }
    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, p) in even.iter().enumerate() {
        let ie = 2 * k;
        let io = 2 * k + 1;
        v += &p.scale_real(c[ie]);
        if io <= degree {
            u_inner += &p.scale_real(c[io]);
        }
    }
    let u = &a * &u_inner;
    let num = &v + &u;
    let den = &v - &u;
    let mut r = solve(&den, &num).expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_matrix, random_unitary, seeded};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = seeded(seed, 0);
        let g = gaussian_matrix(&mut rng, n, n);
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let h = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        let e = herm_eig(&h, 1e-10).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let h = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = herm_eig(&h, 1e-10).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_offdiagonal_eigenpairs() {
        let h = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(-1.0, 0.0)]).unwrap();
        let e = herm_eig(&h, 1e-10).unwrap();
        let s = 5f64.sqrt();
        assert!((e.values[0] + s).abs() < 1e-13 && (e.values[1] - s).abs() < 1e-13);
        for k in 0..2 {
            let v = e.vector(k);
            let hv = h.mul_vec(&v);
            let r: f64 = hv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * e.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-13);
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let h = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(herm_eig(&h, 1e-10), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn random_hermitian_reconstruction_and_unitarity() {
        for (seed, n) in [(1, 3), (2, 7), (3, 12), (4, 30)] {
            let h = random_hermitian(n, seed);
            let e = herm_eig(&h, 1e-10).unwrap();
            assert!((&e.reconstruct() - &h).norm() <= 1e-10 * h.norm());
            let vv = &e.vectors.adjoint() * &e.vectors;
            assert!((&vv - &ComplexMatrix::identity(n)).norm() < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn repeated_eigenvalues_converge() {
        let mut rng = seeded(9, 0);
        let u = random_unitary(&mut rng, 6);
        let d = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, 0.0, 0.0, -2.0]);
        let h = &(&u * &d) * &u.adjoint();
        let e = herm_eig(&h, 1e-10).unwrap();
        let expect = [-2.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        for (a, b) in e.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(4, 4);
        assert_eq!(expm(&z), ComplexMatrix::identity(4));
    }

    #[test]
    fn expm_of_diagonal() {
        let d = ComplexMatrix::from_diag(&[c(0.3, 0.0), c(-2.0, 1.0)]);
        let e = expm(&d);
        assert!((e[(0, 0)] - c(0.3, 0.0).exp()).norm() < 1e-15);
        assert!((e[(1, 1)] - c(-2.0, 1.0).exp()).norm() < 1e-15);
        assert!(e[(0, 1)].norm() == 0.0 && e[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn expm_inverse_pair() {
        let mut rng = seeded(5, 0);
        for n in [2, 5, 8] {
            let g = gaussian_matrix(&mut rng, n, n);
            let m = g.scale_real(5.0 / g.norm());
            let p = &expm(&m) * &expm(&m.scale_real(-1.0));
            assert!((&p - &ComplexMatrix::identity(n)).norm() < 1e-10);
        }
    }

    #[test]
    fn solve_recovers_rhs() {
        let mut rng = seeded(6, 0);
        let a = gaussian_matrix(&mut rng, 6, 6);
        let b = gaussian_matrix(&mut rng, 6, 2);
        let x = solve(&a, &b).unwrap();
        assert!((&(&a * &x) - &b).norm() < 1e-12 * b.norm().max(1.0) * 100.0);
        assert!(solve(&ComplexMatrix::zeros(3, 3), &ComplexMatrix::identity(3)).is_none());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ComplexMatrix::identity(4)), ONE);
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(determinant(&a), -ONE);
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0)]);
        assert!((determinant(&d) - c(0.0, 6.0)).norm() < 1e-15);
    }

    #[test]
    fn frobenius_inner_examples() {
        let id = ComplexMatrix::identity(4);
        assert_eq!(frobenius_inner(&id, &id).unwrap(), c(4.0, 0.0));
        let mut a = ComplexMatrix::zeros(5, 3);
        for i in 0..3 {
            a[(i, i)] = ONE;
        }
        assert_eq!(frobenius_inner(&a, &a).unwrap(), c(3.0, 0.0));
        assert!(matches!(frobenius_inner(&a, &id), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ComplexMatrix::identity(3), 1e-10).unwrap().is_empty());
        let k = kernel_basis(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), 1e-10).unwrap();
        assert_eq!(k.len(), 1);
        assert!((k[0][0].norm() - 1.0).abs() < 1e-15 && k[0][1].norm() == 0.0);
    }

    #[test]
    fn subspace_distance_detects_rotation() {
        let e0 = vec![ONE, ZERO, ZERO];
        let e1 = vec![ZERO, ONE, ZERO];
        let t = 1e-3f64;
        let r = vec![c(t.cos(), 0.0), ZERO, c(t.sin(), 0.0)];
        assert!(subspace_distance(&[e0.clone(), e1.clone()], &[e1.clone(), e0.clone()]) < 1e-15);
        let d = subspace_distance(&[e0, e1.clone()], &[r, e1]);
        assert!((d - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![ONE; 3]),
            Err(Error::BadLength { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
    }
}
