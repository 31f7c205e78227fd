use hcl_core::cmatrix::{determinant, expm, herm_eig};
use hcl_core::higgs::{energy_density, toledo_density, HiggsElement};
use hcl_core::levi::big_f;
use hcl_core::lie_spaces::{curvature_bounds, random_tangent, sectional_curvature};
use hcl_core::reps::{exp_sl2, presentation, rho_tot, Sl2Element};
use hcl_core::rng::{gaussian_matrix, seeded};
use hcl_core::trace_bounds::trace_ratio;
use hcl_core::youla::youla_decompose;
use hcl_core::{ComplexMatrix, HermitianFamily, C64};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = HermitianFamily> {
    prop_oneof![
        (1usize..=4, 1usize..=4).prop_map(|(p, q)| HermitianFamily::su(p.max(q), p.min(q)).unwrap()),
        (1usize..=4).prop_map(|n| HermitianFamily::sp(n).unwrap()),
        (3usize..=6).prop_map(|p| HermitianFamily::so(p).unwrap()),
        (2usize..=6).prop_map(|n| HermitianFamily::so_star(n).unwrap()),
    ]
}

fn skew(n: usize, seed: u64) -> ComplexMatrix {
    let g = gaussian_matrix(&mut seeded(seed, 0), n, n);
    &g - &g.transpose()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eigendecomposition_reconstructs(n in 1usize..8, seed in any::<u64>()) {
        let g = gaussian_matrix(&mut seeded(seed, 0), n, n);
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let eig = herm_eig(&h, 1e-12).unwrap();
        prop_assert!((&eig.reconstruct() - &h).norm() <= 1e-10 * h.norm().max(1.0));
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1] + 1e-12) || eig.values.windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }

    #[test]
    fn curvature_stays_within_family_bounds(f in family(), seed in any::<u64>()) {
        let t = random_tangent(f, &mut seeded(seed, 1));
        let k = sectional_curvature(&t).unwrap();
        let b = curvature_bounds(f);
        prop_assert!(k >= b.lower - 1e-10 && k <= b.upper + 1e-10, "{f}: {k} not in [{}, {}]", b.lower, b.upper);
    }

    #[test]
    fn trace_ratio_between_one_over_q_and_one(p in 1usize..6, q in 1usize..6, seed in any::<u64>()) {
        let a = gaussian_matrix(&mut seeded(seed, 2), p, q);
        let r = trace_ratio(&a).unwrap();
        let m = p.min(q) as f64;
        prop_assert!(r >= 1.0 / m - 1e-12 && r <= 1.0 + 1e-12);
    }

    #[test]
    fn youla_reconstructs_skew_matrices(n in 1usize..8, seed in any::<u64>()) {
        let a = skew(n, seed);
        let d = youla_decompose(&a, 1e-10).unwrap();
        let back = &(&d.u.transpose() * &a) * &d.u;
        prop_assert!((&back - &d.canonical()).norm() <= 1e-9 * a.norm().max(1.0));
        prop_assert!((&(&d.u.adjoint() * &d.u) - &ComplexMatrix::identity(n)).norm() <= 1e-10);
        prop_assert!(d.blocks() <= n / 2);
    }

    #[test]
    fn expm_of_negative_is_inverse(n in 1usize..7, seed in any::<u64>(), s in 0.1f64..3.0) {
        let a = gaussian_matrix(&mut seeded(seed, 3), n, n).scale_real(s);
        let prod = &expm(&a) * &expm(&a.scale_real(-1.0));
        prop_assert!((&prod - &ComplexMatrix::identity(n)).norm() <= 1e-8);
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..7, seed in any::<u64>()) {
        let mut rng = seeded(seed, 4);
        let a = gaussian_matrix(&mut rng, n, n);
        let b = gaussian_matrix(&mut rng, n, n);
        let lhs = determinant(&(&a * &b));
        let rhs = determinant(&a) * determinant(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn rho_is_multiplicative(
        f in family().prop_filter("closed form", |f| !matches!(f, HermitianFamily::SoStar { .. })),
        x in prop::array::uniform3(-1.0f64..1.0),
        y in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let p = presentation(f);
        let el = |c: [f64; 3]| Sl2Element::Sl2R { a: c[0], b: c[1], c: c[2] }.to_presentation(p);
        let (g, h) = (exp_sl2(f, &el(x)), exp_sl2(f, &el(y)));
        let lhs = rho_tot(f, &(&g * &h)).unwrap();
        let rhs = &rho_tot(f, &g).unwrap() * &rho_tot(f, &h).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= 1e-8 * rhs.norm().max(1.0));
    }

    #[test]
    fn toledo_density_bounded_by_energy(f in family(), seed in any::<u64>()) {
        let h = HiggsElement::random(f, &mut seeded(seed, 5));
        let t = toledo_density(&h).unwrap();
        let e = energy_density(&h);
        let split = h.phi_plus().norm_sqr() - h.phi_minus().norm_sqr();
        prop_assert!((t - split).abs() <= 1e-10 * e.max(1.0));
        prop_assert!(t.abs() <= e * (1.0 + 1e-12));
    }

    #[test]
    fn levi_defining_function_is_quartic(n in prop_oneof![Just(5usize), Just(7usize)], seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let a = skew(n, seed);
        let lambda = C64::new(re, im);
        let lhs = big_f(n, &a.scale(lambda)).unwrap();
        let rhs = lambda.norm_sqr().powi(2) * big_f(n, &a).unwrap();
        let scale = lambda.norm_sqr().powi(2) * a.norm().powi(4);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale.max(1.0));
    }
}
