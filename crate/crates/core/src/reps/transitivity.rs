//! Evidence that the maximal compact subgroup acts transitively on the
//! complex lines of maximal-curvature directions (Sp and SO*, where this
//! is not immediate).

use crate::cmatrix::{commutator, expm, herm_eig, solve, ComplexMatrix, C64, I};
use crate::lie_spaces::{embed_tangent, standard_skew, HermitianFamily, TangentParam};
use crate::par;
use crate::report::{LemmaReport, SubCheck};
use crate::rng::{random_unitary, real_gaussian_matrix, seeded, uniform, SampleRng};

use super::centralizer::so_star_second_factor_basis;
use super::group_residual;

const LM_ITERS: usize = 200;
const LM_RESTARTS: usize = 8;

/// `[[0, C], [−C, 0]]`.
pub fn sp_compact_generator(c: &ComplexMatrix) -> ComplexMatrix {
    let n = c.rows();
    let mut k = ComplexMatrix::zeros(2 * n, 2 * n);
    k.set_block(0, n, c);
    k.set_block(n, 0, &-c);
    k
}

/// `[[S, iS], [iS, −S]]`.
pub fn sp_line_matrix(s: &ComplexMatrix) -> ComplexMatrix {
    let n = s.rows();
    let is = s.scale(I);
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    m.set_block(0, 0, s);
    m.set_block(0, n, &is);
    m.set_block(n, 0, &is);
    m.set_block(n, n, &-s);
    m
}

fn adjoint_action(g: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    // g is real orthogonal for every element of K used here
    &(g * m) * &g.transpose()
}

fn random_symmetric(rng: &mut SampleRng, n: usize, scale: f64) -> ComplexMatrix {
    let g = real_gaussian_matrix(rng, n, n);
    (&g + &g.transpose()).scale_real(0.5 * scale)
}

/// Real symmetric `C` with `exp(2iC) = S` for a unitary symmetric `S`.
///
/// Real and imaginary parts of `S` are commuting real symmetric matrices, so
/// a generic real combination of them is diagonalized by a real orthogonal
/// `O` that also diagonalizes `S`.
pub fn symmetric_unitary_log(s: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    let n = s.rows();
    let x = s.real_part();
    let y = s.imag_part();
    let t = std::f64::consts::E - 1.0; // any generic weight
    let eig = herm_eig(&(&x + &y.scale_real(t)), 1e-12)?;
    let o = eig.vectors.real_part();
    let d = &(&o.transpose() * s) * &o;
    let half: Vec<f64> = (0..n).map(|k| 0.5 * d[(k, k)].arg()).collect();
    Ok(&(&o * &ComplexMatrix::from_real_diag(&half)) * &o.transpose())
}

fn sp_check(n: usize, trials: usize, seed: u64, r: &mut LemmaReport) {
    let fam = HermitianFamily::Sp { n };
    let base = match TangentParam::new(fam, ComplexMatrix::identity(n)).and_then(|t| embed_tangent(&t)) {
        Ok(m) => m,
        Err(e) => {
            r.push(SubCheck::failed("base direction", e.to_string()));
            return;
        }
    };
    let fixed = adjoint_action(&expm(&sp_compact_generator(&ComplexMatrix::zeros(n, n))), &base);
    r.push(SubCheck::new(
        "C = 0 fixes the base direction",
        (&fixed - &base).norm(),
        1e-15,
    ));

    let ad = par::max_indexed(trials, |i| {
        let mut rng = seeded(seed, i as u64);
        let c = random_symmetric(&mut rng, n, 1.0);
        let lhs = adjoint_action(&expm(&sp_compact_generator(&c)), &base);
        let s = expm(&c.scale(C64::new(0.0, 2.0)));
        (&lhs - &sp_line_matrix(&s)).norm() / base.norm()
    });
    r.push(SubCheck::new(
        "Ad_exp(k) base = [[S, iS], [iS, -S]], S = exp(2iC)",
        ad,
        1e-8,
    ));

    let targets = trials.min(20).max(1);
    let log = par::max_indexed(targets, |i| {
        let mut rng = seeded(seed ^ 0x1095, i as u64);
        let w = random_unitary(&mut rng, n);
        let s = &w * &w.transpose();
        match symmetric_unitary_log(&s) {
            Ok(c) => {
                let back = expm(&c.scale(C64::new(0.0, 2.0)));
                let reach = adjoint_action(&expm(&sp_compact_generator(&c)), &base);
                let sym = c.symmetric_residual() + c.imag_part().norm();
                (&back - &s)
                    .norm()
                    .max((&reach - &sp_line_matrix(&s)).norm() / base.norm())
                    .max(sym)
            }
            Err(_) => f64::NAN,
        }
    });
    r.push(SubCheck::new(
        "every unitary symmetric S is exp(2iC), C real symmetric",
        log,
        1e-6,
    ));
}

/// Levenberg–Marquardt descent of `‖Ad_g M − T‖` over `g = exp(k)`, `k` in
/// the span of `basis`. Returns the final distance and group residual.
fn orbit_descent(
    fam: HermitianFamily,
    basis: &[ComplexMatrix],
    m: &ComplexMatrix,
    target: &ComplexMatrix,
    rng: &mut SampleRng,
) -> (f64, f64) {
    let d = basis.len();
    let combine = |c: &[f64]| {
        let mut k = ComplexMatrix::zeros(m.rows(), m.cols());
        for (b, &x) in basis.iter().zip(c) {
            k += &b.scale_real(x);
        }
        k
    };
    let mut best = (f64::INFINITY, f64::NAN);
    for _ in 0..LM_RESTARTS {
        let c0: Vec<f64> = (0..d)
            .map(|_| uniform(rng, -std::f64::consts::PI, std::f64::consts::PI))
            .collect();
        let mut g = expm(&combine(&c0));
        let mut res = &adjoint_action(&g, m) - target;
        let mut cost = res.norm_sqr();
        let mut lambda = 1e-3;
        for _ in 0..LM_ITERS {
            if cost.sqrt() < 1e-13 {
                break;
            }
            // columns: d/dt Ad_{g exp(t K_i)} M = Ad_g [K_i, M]
            let cols: Vec<Vec<f64>> = basis
                .iter()
                .map(|k| adjoint_action(&g, &commutator(k, m)).to_real_coords())
                .collect();
            let r = res.to_real_coords();
            let jtj = ComplexMatrix::from_fn(d, d, |i, j| {
                C64::new(cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum(), 0.0)
            });
            let jtr: Vec<C64> = cols
                .iter()
                .map(|c| C64::new(-c.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>(), 0.0))
                .collect();
            let mut improved = false;
            for _ in 0..20 {
                let mut a = jtj.clone();
                for i in 0..d {
                    a[(i, i)] += C64::new(lambda * (1.0 + jtj[(i, i)].re), 0.0);
                }
                let Some(step) = solve(&a, &ComplexMatrix::column_vector(&jtr)) else {
                    lambda *= 10.0;
                    continue;
                };
                let delta: Vec<f64> = (0..d).map(|i| step[(i, 0)].re).collect();
                let trial = &g * &expm(&combine(&delta));
                let trial_res = &adjoint_action(&trial, m) - target;
                let trial_cost = trial_res.norm_sqr();
                if trial_cost < cost {
                    g = trial;
                    res = trial_res;
                    cost = trial_cost;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        let dist = cost.sqrt() / target.norm();
        if dist < best.0 {
            best = (dist, group_residual(fam, &g));
        }
        if dist < 1e-10 {
            break;
        }
    }
    best
}

fn so_star_check(n: usize, trials: usize, seed: u64, r: &mut LemmaReport) {
    let fam = HermitianFamily::SoStar { n };
    let Some(basis) = so_star_second_factor_basis(n) else {
        r.push(SubCheck::failed(
            "orbit descent",
            format!("odd n = {n} unsupported; only even n is analyzed"),
        ));
        return;
    };
    let j = standard_skew(n);
    let m = match TangentParam::new(fam, j.clone()).and_then(|t| embed_tangent(&t)) {
        Ok(m) => m,
        Err(e) => {
            r.push(SubCheck::failed("base direction", e.to_string()));
            return;
        }
    };
    let outcomes = par::map_indexed(trials, |i| {
        let mut rng = seeded(seed, i as u64);
        let u = random_unitary(&mut rng, n);
        let phase = C64::from_polar(1.0, uniform(&mut rng, -std::f64::consts::PI, std::f64::consts::PI));
        let payload = (&(&u * &j) * &u.transpose()).scale(phase);
        match TangentParam::new(fam, payload).and_then(|t| embed_tangent(&t)) {
            Ok(target) => orbit_descent(fam, &basis, &m, &target, &mut rng),
            Err(_) => (f64::NAN, f64::NAN),
        }
    });
    let dist = outcomes.iter().fold(0.0, |a, o| par::nan_max(a, o.0));
    let grp = outcomes.iter().fold(0.0, |a, o| par::nan_max(a, o.1));
    r.push(SubCheck::new(
        "orbit of J under the second factor reaches random targets",
        dist,
        1e-4,
    ));
    r.push(SubCheck::new("descent stays in K", grp, 1e-9));
}

/// Transitivity evidence for Sp(2n) and SO*(2n).
pub fn adjoint_transitivity_check(fam: HermitianFamily, trials: usize, seed: u64) -> LemmaReport {
    let mut r = LemmaReport::new(
        format!("transitivity_{fam}"),
        format!(
            "the maximal compact subgroup of {} acts transitively on the complex lines of maximal-curvature directions",
            fam.label()
        ),
        trials as u64,
        seed,
    );
    let trials = trials.max(1);
    match fam {
        HermitianFamily::Sp { n } if n >= 1 => sp_check(n, trials, seed, &mut r),
        HermitianFamily::SoStar { n } if n >= 2 => so_star_check(n, trials, seed, &mut r),
        _ => r.push(SubCheck::failed(
            "family",
            format!("transitivity check is only defined for Sp and SO*, got {}", fam.label()),
        )),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp_passes() {
        let r = adjoint_transitivity_check(HermitianFamily::sp(3).unwrap(), 100, 1);
        assert!(r.passed(), "{}", crate::report::render_text(&[r]));
    }

    #[test]
    fn so_star_even_passes() {
        let r = adjoint_transitivity_check(HermitianFamily::so_star(4).unwrap(), 6, 2);
        assert!(r.passed(), "{}", crate::report::render_text(&[r]));
    }

    #[test]
    fn so_star_odd_is_unsupported() {
        let r = adjoint_transitivity_check(HermitianFamily::so_star(5).unwrap(), 1, 0);
        assert!(!r.passed());
    }

    #[test]
    fn log_of_diagonal_phases() {
        let s = ComplexMatrix::from_diag(&[C64::from_polar(1.0, 0.4), C64::from_polar(1.0, -1.0)]);
        let c = symmetric_unitary_log(&s).unwrap();
        assert!((c[(0, 0)].re - 0.2).abs() < 1e-14 && (c[(1, 1)].re + 0.5).abs() < 1e-14);
    }
}
