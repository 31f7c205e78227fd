//! Centralizer of the canonical `sl₂` image inside `g`, computed as the
//! nullspace of a real-linear constraint system.

use crate::cmatrix::{commutator, expm, herm_eig, ComplexMatrix, C64};
use crate::lie_spaces::HermitianFamily;
use crate::report::{LemmaReport, SubCheck};

use super::{algebra_residual, canonical_rep, defining_form, group_residual};

/// Eigenvalues of the normal matrix at most this fraction of the largest
/// count as kernel.
pub const NULLSPACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CentralizerResult {
    pub family: HermitianFamily,
    pub dimension: usize,
    /// Real basis of the commutant inside `g`, orthonormal for `Re tr(AB*)`.
    pub basis: Vec<ComplexMatrix>,
}

/// Linear constraints whose common kernel is `g`, stacked as real
/// coordinates.
fn membership_constraints(fam: HermitianFamily, x: &ComplexMatrix) -> Vec<f64> {
    let f = defining_form(fam);
    let mut out = match fam {
        HermitianFamily::Su { .. } => {
            let mut v = (&(&x.adjoint() * &f) + &(&f * x)).to_real_coords();
            let t = x.trace();
            v.extend([t.re, t.im]);
            v
        }
        HermitianFamily::Sp { .. } | HermitianFamily::So { .. } => {
            let mut v = x.imag_part().to_real_coords();
            v.extend((&(&x.transpose() * &f) + &(&f * x)).to_real_coords());
            v
        }
        HermitianFamily::SoStar { .. } => {
            let mut v = (x + &x.transpose()).to_real_coords();
            v.extend((&(&x.adjoint() * &f) + &(&f * x)).to_real_coords());
            v
        }
    };
    out.shrink_to_fit();
    out
}

/// Nullspace of `[Z, f_*(e_i)] = 0`, `Z ∈ g`.
pub fn centralizer(fam: HermitianFamily, tol: f64) -> crate::Result<CentralizerResult> {
    let rep = canonical_rep(fam)?;
    let n = fam.matrix_size();
    let dim = 2 * n * n;
    let constraint = |x: &ComplexMatrix| {
        let mut v = membership_constraints(fam, x);
        for img in &rep.f_star_images {
            v.extend(commutator(x, img).to_real_coords());
        }
        v
    };
    // columns of the constraint matrix
    let cols: Vec<Vec<f64>> = crate::par::map_indexed(dim, |k| {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        constraint(&ComplexMatrix::from_real_coords(n, n, &e))
    });
    let gram = ComplexMatrix::from_fn(dim, dim, |i, j| {
        C64::new(cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum(), 0.0)
    });
    let eig = herm_eig(&gram, 1e-12)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let cut = tol.max(NULLSPACE_TOL) * top;
    let basis: Vec<ComplexMatrix> = (0..dim)
        .filter(|&k| eig.values[k] <= cut)
        .map(|k| {
            let v: Vec<f64> = eig.vector(k).iter().map(|z| z.re).collect();
            ComplexMatrix::from_real_coords(n, n, &v)
        })
        .collect();
    Ok(CentralizerResult {
        family: fam,
        dimension: basis.len(),
        basis,
    })
}

/// Centralizer dimensions as listed in the reference table, next to the
/// value that follows from the group actually named there.
#[derive(Debug, Clone, PartialEq)]
pub struct TableDimension {
    /// Dimension of the group the table names.
    pub expected: Option<usize>,
    /// The number the table's formula gives when it differs from `expected`.
    pub printed: Option<usize>,
    pub flag: Option<String>,
}

pub fn table_dimension(fam: HermitianFamily) -> TableDimension {
    let plain = |d: usize| TableDimension {
        expected: Some(d),
        printed: None,
        flag: None,
    };
    match fam {
        HermitianFamily::Su { p, q } if p > q => plain(q * q + (p - q) * (p - q) - 1),
        HermitianFamily::Su { p, .. } => TableDimension {
            expected: Some(p * p - 1),
            printed: Some(p * p),
            flag: Some(format!(
                "table labels the centralizer U({p}) (dimension {}), but its elements diag(U, U) have det U = +-1, giving dimension {}",
                p * p,
                p * p - 1
            )),
        },
        HermitianFamily::Sp { n } => plain(n * (n - 1) / 2),
        HermitianFamily::So { p } => plain((p - 1) * (p - 2) / 2),
        HermitianFamily::SoStar { n } if n % 2 == 0 => TableDimension {
            expected: Some(n / 2 * (n + 1)),
            printed: Some(n * (2 * n + 1)),
            flag: Some(format!(
                "the compact symplectic group Sp({}) inside U({n}) has dimension {}; n(2n+1) = {} exceeds dim k = {}",
                n / 2,
                n / 2 * (n + 1),
                n * (2 * n + 1),
                n * n
            )),
        },
        HermitianFamily::SoStar { n } => TableDimension {
            expected: Some((n - 1) / 2 * n + 1),
            printed: None,
            flag: Some(format!(
                "odd n is not tabulated; compared against Sp({}) x U(1)",
                (n - 1) / 2
            )),
        },
    }
}

/// Projection of `x` onto the second factor of `k` for SO*(2n), n even.
/// `None` for other families or odd `n`.
pub fn so_star_second_factor_projection(n: usize, x: &ComplexMatrix) -> Option<ComplexMatrix> {
    let basis = so_star_second_factor_basis(n)?;
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for b in &basis {
        let c = b
            .as_slice()
            .iter()
            .zip(x.as_slice())
            .map(|(u, v)| (u.conj() * v).re)
            .sum::<f64>();
        out += &b.scale_real(c);
    }
    Some(out)
}

fn sym_basis(m: usize) -> Vec<ComplexMatrix> {
    let mut v = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut e = ComplexMatrix::zeros(m, m);
            e[(i, j)] = C64::new(1.0, 0.0);
            e[(j, i)] = C64::new(1.0, 0.0);
            v.push(e);
        }
    }
    v
}

fn skew_basis(m: usize) -> Vec<ComplexMatrix> {
    let mut v = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut e = ComplexMatrix::zeros(m, m);
            e[(i, j)] = C64::new(1.0, 0.0);
            e[(j, i)] = C64::new(-1.0, 0.0);
            v.push(e);
        }
    }
    v
}

/// Assembles the 4×4 block pattern `[[B, C, D, E], [sC, ...]]` into a
/// 2n×2n real matrix and maps it into `k ⊂ so*(2n)`.
fn blocks4(m: usize, pattern: [[(i8, usize); 4]; 4], parts: &[ComplexMatrix; 4]) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(4 * m, 4 * m);
    for (r, row) in pattern.iter().enumerate() {
        for (c, &(sign, which)) in row.iter().enumerate() {
            x.set_block(r * m, c * m, &parts[which].scale_real(sign as f64));
        }
    }
    x
}

fn factor_basis(n: usize, pattern: [[(i8, usize); 4]; 4], kinds: [bool; 4]) -> Vec<ComplexMatrix> {
    let m = n / 2;
    let zero = ComplexMatrix::zeros(m, m);
    let mut out = Vec::new();
    for slot in 0..4 {
        let elems = if kinds[slot] { skew_basis(m) } else { sym_basis(m) };
        for e in elems {
            let mut parts = [zero.clone(), zero.clone(), zero.clone(), zero.clone()];
            parts[slot] = e;
            out.push(blocks4(m, pattern, &parts));
        }
    }
    orthonormalize(out)
}

fn orthonormalize(v: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for mut x in v {
        for _ in 0..2 {
            for b in &out {
                let c: f64 = b
                    .as_slice()
                    .iter()
                    .zip(x.as_slice())
                    .map(|(u, w)| (u.conj() * w).re)
                    .sum();
                x -= &b.scale_real(c);
            }
        }
        let nrm = x.norm();
        if nrm > 1e-12 {
            out.push(x.scale_real(1.0 / nrm));
        }
    }
    out
}

/// Orthonormal basis of the first factor of `k` (the centralizer), n even:
/// rows `[B, C, D, E]`, `[−C, B, E, −D]`, `[−D, −E, B, C]`, `[−E, D, −C, B]`
/// with `B` skew and `C, D, E` symmetric.
pub fn so_star_first_factor_basis(n: usize) -> Option<Vec<ComplexMatrix>> {
    if n % 2 != 0 || n < 2 {
        return None;
    }
    let p = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(-1, 1), (1, 0), (1, 3), (-1, 2)],
        [(-1, 2), (-1, 3), (1, 0), (1, 1)],
        [(-1, 3), (1, 2), (-1, 1), (1, 0)],
    ];
    Some(factor_basis(n, p, [true, false, false, false]))
}

/// Orthonormal basis of the second factor of `k`, n even: rows
/// `[B, C, D, E]`, `[C, −B, −E, D]`, `[−D, −E, B, C]`, `[E, −D, C, −B]` with
/// `B, C, E` skew and `D` symmetric.
pub fn so_star_second_factor_basis(n: usize) -> Option<Vec<ComplexMatrix>> {
    if n % 2 != 0 || n < 2 {
        return None;
    }
    let p = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (-1, 3), (1, 2)],
        [(-1, 2), (-1, 3), (1, 0), (1, 1)],
        [(1, 3), (-1, 2), (1, 1), (-1, 0)],
    ];
    Some(factor_basis(n, p, [true, true, false, true]))
}

/// Full centralizer report: dimension against the table, commutation and
/// membership of every basis element, `expm` landing in `G`, and for SO*
/// containment in the first factor of `k`.
pub fn verify_centralizer(fam: HermitianFamily, seed: u64) -> LemmaReport {
    let table = table_dimension(fam);
    let mut r = LemmaReport::new(
        format!("centralizer_{fam}"),
        format!(
            "centralizer of the canonical sl2 image in {}: dimension matches the group listed in the table",
            fam.label()
        ),
        1,
        seed,
    );
    let res = match centralizer(fam, NULLSPACE_TOL) {
        Ok(res) => res,
        Err(e) => {
            r.push(SubCheck::failed("nullspace", e.to_string()));
            return r;
        }
    };
    match table.expected {
        Some(d) => {
            let mut c = SubCheck::count("dimension", res.dimension, d);
            if let Some(flag) = &table.flag {
                c.note = format!("{}; {flag}", c.note);
            }
            r.push(c);
        }
        None => r.push(SubCheck::new("dimension computed", 0.0, 0.0).with_note(format!(
            "found {}; {}",
            res.dimension,
            table.flag.clone().unwrap_or_default()
        ))),
    }
    let rep = match canonical_rep(fam) {
        Ok(rep) => rep,
        Err(e) => {
            r.push(SubCheck::failed("canonical rep", e.to_string()));
            return r;
        }
    };
    let (mut comm, mut mem, mut grp) = (0.0f64, 0.0f64, 0.0f64);
    for z in &res.basis {
        for img in &rep.f_star_images {
            comm = comm.max(commutator(z, img).norm());
        }
        mem = mem.max(algebra_residual(fam, z));
        grp = grp.max(group_residual(fam, &expm(z)));
    }
    r.push(SubCheck::new("basis commutes with f_* images", comm, 1e-10));
    r.push(SubCheck::new("basis lies in g", mem, 1e-10));
    r.push(SubCheck::new("expm(basis) preserves the defining form", grp, 1e-9));
    if let HermitianFamily::SoStar { n } = fam {
        if n % 2 == 0 {
            let worst = res
                .basis
                .iter()
                .filter_map(|z| so_star_second_factor_projection(n, z))
                .map(|p| p.norm())
                .fold(0.0, f64::max);
            r.push(SubCheck::new("centralizer inside the first factor of k", worst, 1e-9));
        }
    }
    r
}
