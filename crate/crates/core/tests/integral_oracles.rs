use jacobi_wronskian::integrals::{
    double_integral_ipl4, double_integral_partial, ipl4_to_phi_factor, orthogonality_residual,
    partial_integral_jacobi_closed, partial_integral_legendre, partial_integral_quadrature,
    phi_orthogonality, phi_product_partial, shifted_family_partial, EigenvalueGap,
    LegendreNormalization,
};
use jacobi_wronskian::polyeval::{legendre_monic_scale, JacobiParams};
use proptest::prelude::*;

fn params(a: f64, b: f64) -> JacobiParams {
    JacobiParams::new(a, b).unwrap()
}

const XS: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 0.9];

fn assert_oracle_agrees(p: JacobiParams, n: usize, m: usize, x: f64) {
    let closed = partial_integral_jacobi_closed(p, n, m, x).unwrap().value;
    let tol = 1e-11 * closed.abs().max(1.0);
    let quad = partial_integral_quadrature(p, n, m, x, tol).unwrap();
    let bound = 1e-10 * closed.abs().max(1.0) + quad.abs_error_estimate;
    assert!(
        (closed - quad.value).abs() <= bound,
        "a={} b={} n={n} m={m} x={x}: closed {closed} quad {} (bound {bound:e})",
        p.alpha(),
        p.beta(),
        quad.value
    );
}

#[test]
fn closed_form_matches_oracle_on_fixed_sweep() {
    let cases = [
        (0.0, 0.0),
        (-0.9, -0.9),
        (3.0, 3.0),
        (-0.9, 3.0),
        (2.5, -0.75),
        (0.3, 1.2),
    ];
    for &(a, b) in &cases {
        let p = params(a, b);
        for &(n, m) in &[(1usize, 0usize), (5, 3), (40, 10), (200, 7), (3, 9)] {
            for &x in &XS {
                assert_oracle_agrees(p, n, m, x);
            }
        }
    }
}

#[test]
fn legendre_and_jacobi_closed_forms_coincide() {
    for n in 0..25usize {
        for m in 0..12usize {
            if n == m {
                continue;
            }
            for &x in &XS {
                let leg = partial_integral_legendre(n, m, x, LegendreNormalization::Standard)
                    .unwrap()
                    .value;
                let jac = partial_integral_jacobi_closed(JacobiParams::LEGENDRE, n, m, x).unwrap().value;
                assert!((leg - jac).abs() <= 1e-12 * leg.abs().max(1e-300) + 1e-16, "{n} {m} {x}: {leg} {jac}");
            }
        }
    }
}

#[test]
fn legendre_closed_form_normalization_bilinear() {
    for &(n, m) in &[(4usize, 1usize), (9, 2), (15, 14)] {
        for &x in &XS {
            let std = partial_integral_legendre(n, m, x, LegendreNormalization::Standard).unwrap().value;
            let monic = partial_integral_legendre(n, m, x, LegendreNormalization::Monic).unwrap().value;
            let c = legendre_monic_scale(n) * legendre_monic_scale(m);
            assert!((monic - c * std).abs() <= 1e-13 * (c * std).abs() + 1e-300);
        }
    }
}

#[test]
fn orthogonality_of_full_interval_products() {
    for &(a, b) in &[(0.0, 0.0), (2.0, 0.5), (-0.8, -0.2), (1.7, 2.9)] {
        for &(n, m) in &[(1usize, 0usize), (5, 2), (17, 4), (50, 49)] {
            let r = orthogonality_residual(params(a, b), n, m, 1e-12).unwrap();
            assert!(r <= 1e-10, "a={a} b={b} n={n} m={m}: {r:e}");
        }
    }
}

#[test]
fn double_integral_and_phi_product_vanish_and_agree() {
    for &(a, b) in &[(0.0, 0.0), (1.0, 1.0), (-0.6, 0.8), (2.2, -0.4)] {
        let p = params(a, b);
        for &(n, m) in &[(2usize, 1usize), (3, 2), (9, 4), (20, 17)] {
            let ipl4 = double_integral_ipl4(p, n, m, 1e-12).unwrap();
            let phi = phi_orthogonality(p, n, m, 1e-12).unwrap();
            let factor = ipl4_to_phi_factor(p, n, m);
            assert!(ipl4.abs() <= 1e-9, "ipl4 {ipl4:e}");
            assert!(phi.abs() <= 1e-9 * factor.max(1.0), "phi {phi:e}");
            // away from the full interval both are nonzero and must agree after scaling
            let phi = phi_product_partial(p, n, m, 0.1, 1e-12).unwrap().value;
            let ipl4 = double_integral_partial(p, n, m, 0.1, 1e-12 * phi.abs() / factor).unwrap().value;
            let shifted = shifted_family_partial(p, n, m, 0.1, 1e-12).unwrap().value;
            assert!((factor * ipl4 - phi).abs() <= 1e-9 * phi.abs(), "{} vs {phi}", factor * ipl4);
            assert!((shifted - phi).abs() <= 1e-10 * phi.abs(), "{shifted} vs {phi}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn oracle_agreement(a in -0.9f64..=3.0, b in -0.9f64..=3.0, n in 0usize..=200, m in 0usize..=10, xi in 0usize..5) {
        prop_assume!(n != m);
        assert_oracle_agrees(params(a, b), n, m, XS[xi]);
    }

    #[test]
    fn eigenvalue_gap_never_zero(a in -0.999f64..=5.0, b in -0.999f64..=5.0, n in 0usize..=500, m in 0usize..=500) {
        prop_assume!(n != m);
        let gap = EigenvalueGap::new(params(a, b), n, m).unwrap().value();
        prop_assert!(gap != 0.0 && gap.is_finite());
    }

    #[test]
    fn closed_form_zero_at_endpoints(a in -0.999f64..=5.0, b in -0.999f64..=5.0, n in 0usize..=300, m in 0usize..=300) {
        prop_assume!(n != m);
        let p = params(a, b);
        prop_assert_eq!(partial_integral_jacobi_closed(p, n, m, -1.0).unwrap().value, 0.0);
        prop_assert_eq!(partial_integral_jacobi_closed(p, n, m, 1.0).unwrap().value, 0.0);
    }
}
