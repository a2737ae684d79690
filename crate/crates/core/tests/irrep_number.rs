use nalgebra::DMatrix;
use num_complex::Complex64;
use phasequant::irrep::{
    build_operator, casimir_defect, commutator_defect, f_coeff, raised_state, IrrepParams, OperatorKind, StateVector,
};
use phasequant::number_obs::{
    correspondence_report, ground_state_moment, k1_lower_bound, k_moments, matrix_trig_moments, trig_moments,
};
use proptest::prelude::*;

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn interior(m: &DMatrix<Complex64>, size: usize) -> DMatrix<Complex64> {
    m.view((0, 0), (size, size)).into_owned()
}

#[test]
fn ladder_operators_are_adjoint_at_every_dim() {
    for dim in [2, 3, 17, 64] {
        for (k, w) in [(0.3, 0.0), (1.0, 0.7), (2.5, -2.0)] {
            let p = IrrepParams::with_omega(k, w).unwrap();
            let up = build_operator(OperatorKind::Kplus, p, dim).unwrap().to_dense();
            let down = build_operator(OperatorKind::Kminus, p, dim).unwrap().to_dense();
            assert_eq!(up.adjoint(), down);
        }
    }
}

#[test]
fn phase_operators_are_exactly_hermitian() {
    for (k, w) in [(0.2, 0.0), (1.0, 1.1), (3.0, 2.0)] {
        let p = IrrepParams::with_omega(k, w).unwrap();
        for kind in [OperatorKind::CosPhi, OperatorKind::SinPhi, OperatorKind::K1, OperatorKind::K2] {
            let m = build_operator(kind, p, 30).unwrap().to_dense();
            assert_eq!(m.adjoint(), m, "{kind}");
        }
    }
}

#[test]
fn cos_phi_from_matrix_products() {
    // (K3^{-1} K1 + K1 K3^{-1}) / 2 with the inverse taken as the exact diagonal 1/(k+n).
    for k in [0.25, 0.5, 1.0, 4.0] {
        let p = IrrepParams::with_omega(k, 0.4).unwrap();
        let dim = 40;
        let k1 = build_operator(OperatorKind::K1, p, dim).unwrap().to_dense();
        let inv =
            DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |n, _| Complex64::from(1.0 / (k + n as f64))));
        let products = (&inv * &k1 + &k1 * &inv) * Complex64::from(0.5);
        let entries = build_operator(OperatorKind::CosPhi, p, dim).unwrap().to_dense();
        assert!(max_abs(&interior(&(products - entries), dim - 1)) < 1e-14);
    }
}

#[test]
fn sin_phi_from_matrix_products() {
    // sin-phi carries the sign of the classical observable P2 = -p sin(phi).
    let k = 0.8;
    let p = IrrepParams::new(k).unwrap();
    let dim = 30;
    let k2 = build_operator(OperatorKind::K2, p, dim).unwrap().to_dense();
    let inv = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |n, _| Complex64::from(1.0 / (k + n as f64))));
    let products = (&inv * &k2 + &k2 * &inv) * Complex64::from(-0.5);
    let entries = build_operator(OperatorKind::SinPhi, p, dim).unwrap().to_dense();
    assert!(max_abs(&interior(&(products - entries), dim - 1)) < 1e-14);
}

#[test]
fn raising_the_lowest_state_gives_number_states() {
    for k in [0.1, 0.5, 1.0, 3.7] {
        let p = IrrepParams::new(k).unwrap();
        for n in 0..=30 {
            let raised = raised_state(p, n, 40).unwrap();
            let exact = StateVector::number_state(p, n, 40).unwrap();
            let err = raised.coeffs.iter().zip(&exact.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "k={k} n={n} err={err}");
        }
    }
}

#[test]
fn f_coefficients_from_definition() {
    // f_n = sqrt(n (2k+n-1)) (1/(k+n) + 1/(k+n-1))
    for k in [0.3, 1.0, 2.0] {
        for n in 1..20usize {
            let nf = n as f64;
            let want = (nf * (2.0 * k + nf - 1.0)).sqrt() * (1.0 / (k + nf) + 1.0 / (k + nf - 1.0));
            assert!((f_coeff(k, n).unwrap() - want).abs() < 1e-15 * want.max(1.0));
        }
    }
}

#[test]
fn coefficients_finite_for_tiny_k() {
    // f_1 = sqrt(2k) (1/(k+1) + 1/k) ~ sqrt(2/k)
    let k = 1e-30;
    let f1 = f_coeff(k, 1).unwrap();
    assert!((f1 / (2.0 / k).sqrt() - 1.0).abs() < 1e-14);
    assert!(phasequant::irrep::ladder_down_coeff(k, 1).unwrap() > 0.0);
}

#[test]
fn algebra_defects_half_integer_k_exact() {
    let p = IrrepParams::new(0.5).unwrap();
    assert_eq!(casimir_defect(p, 200).unwrap(), 0.0);
    let (a, b, c) = commutator_defect(p, 64).unwrap();
    assert!(a.max(b).max(c) < 1e-12);
}

#[test]
fn number_state_k_moments_closed_form() {
    // <K1> = <K2> = 0 and var K1 = var K2 = ((k+n)^2 - k(k-1))/2 on |k,n>.
    for k in [0.5, 1.0, 2.0] {
        for n in [0usize, 3, 9] {
            let m = k_moments(k, n).unwrap();
            let want = ((k + n as f64).powi(2) - k * (k - 1.0)) / 2.0;
            assert_eq!((m.mean_k1, m.mean_k2), (0.0, 0.0));
            assert!((m.var_k1 - want).abs() < 1e-12 * want);
            assert!((m.var_k2 - want).abs() < 1e-12 * want);
        }
    }
}

#[test]
fn ground_moment_matches_general_formula_on_grid() {
    for k in [0.1, 0.162, 0.32, 0.5, 1.0, 2.0, 5.0] {
        let closed = ground_state_moment(k).unwrap();
        let general = trig_moments(k, 0).unwrap().second_moment;
        assert!((closed - general).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn ground_moment_threshold_is_k1() {
    let k1 = k1_lower_bound().unwrap();
    assert!((k1 - 0.162).abs() < 5e-4);
    for i in 1..=200 {
        let k = 0.005 * i as f64;
        if (k - k1).abs() < 1e-9 {
            continue;
        }
        assert_eq!(ground_state_moment(k).unwrap() <= 1.0, k >= k1, "k={k}");
    }
    assert!((ground_state_moment(k1).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn correspondence_second_moment_rate() {
    let r = correspondence_report(0.5, &[100, 1000, 10000]).unwrap();
    let s = r.second_moment_slope.unwrap();
    assert!((s + 2.0).abs() <= 0.2, "slope {s}");
    assert!(r.rows.iter().all(|row| row.casimir_residual.abs() < 1e-6));
    assert!(correspondence_report(0.5, &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_moments_match_closed_forms(k in 0.05f64..6.0, n in 0usize..60, w in -3.0f64..3.0) {
        let p = IrrepParams::with_omega(k, w).unwrap();
        let m = matrix_trig_moments(p, n, n + 4).unwrap();
        let c = trig_moments(k, n).unwrap();
        prop_assert!((m.second_moment - c.second_moment).abs() < 1e-12);
        prop_assert!(m.mean_cos.abs() < 1e-15 && m.mean_sin.abs() < 1e-15);
        prop_assert!((m.commutator_expect - c.commutator_expect).norm() < 1e-12);
    }

    #[test]
    fn casimir_interior_small(k in 0.05f64..5.0, dim in 4usize..80) {
        let d = casimir_defect(IrrepParams::new(k).unwrap(), dim).unwrap();
        prop_assert!(d < 1e-12 * (k + dim as f64).powi(2));
    }

    #[test]
    fn number_states_are_k3_eigenstates(k in 0.05f64..5.0, n in 0usize..30) {
        let p = IrrepParams::new(k).unwrap();
        let op = build_operator(OperatorKind::K3, p, 32).unwrap();
        let (mean, var) = StateVector::number_state(p, n, 32).unwrap().mean_and_variance(&op);
        prop_assert!((mean - (k + n as f64)).abs() < 1e-13);
        prop_assert!(var.abs() < 1e-12);
    }
}
