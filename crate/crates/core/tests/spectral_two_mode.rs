use nalgebra::{DMatrix, SymmetricEigen};
use phasequant::irrep::{build_operator, IrrepParams, OperatorKind};
use phasequant::number_obs::k1_lower_bound;
use phasequant::spectral::{
    cos_spectrum, improper_eigenvector, inverse_iteration, ratio_supremum, sturm_count, threshold_scan,
    tridiagonal_eigenvalues, RhoGrid, ScanConfig,
};
use phasequant::two_mode::{
    build_two_mode, cross_sector_leak, dirac_sqrt_check, irrep_decomposition, sector_casimir_defect,
    sector_equivalence, sector_table, two_mode_commutator_defect, TwoModeKind,
};
use phasequant::Error;
use proptest::prelude::*;

#[test]
fn ql_matches_dense_symmetric_solver() {
    let p = IrrepParams::new(0.7).unwrap();
    let op = build_operator(OperatorKind::CosPhi, p, 120).unwrap();
    let dense = DMatrix::from_fn(120, 120, |r, c| op.entry(r, c).re);
    let mut want: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    want.sort_by(f64::total_cmp);
    let got = cos_spectrum(p, 120).unwrap().eigenvalues;
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn spectrum_is_omega_independent() {
    let base = cos_spectrum(IrrepParams::new(1.0).unwrap(), 300).unwrap();
    for w in [0.3, 1.7, -2.9] {
        let s = cos_spectrum(IrrepParams::with_omega(1.0, w).unwrap(), 300).unwrap();
        for (a, b) in base.eigenvalues.iter().zip(&s.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn max_eigenvalue_converges_from_inside() {
    for k in [1.0, 2.0] {
        let tops: Vec<f64> = [250, 500, 1000, 2000]
            .iter()
            .map(|&d| cos_spectrum(IrrepParams::new(k).unwrap(), d).unwrap().max())
            .collect();
        assert!(tops.windows(2).all(|w| w[1] > w[0]), "k={k} {tops:?}");
        let diffs: Vec<f64> = tops.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]), "k={k} {diffs:?}");
        assert!(tops[3] <= 1.0);
    }
}

#[test]
fn half_k_has_isolated_eigenvalue_above_one() {
    // Converged already at dim 250: an isolated eigenvalue, not an edge approaching 1.
    for d in [250, 500, 1000, 2000] {
        let top = cos_spectrum(IrrepParams::new(0.5).unwrap(), d).unwrap().max();
        assert!((top - 1.006_482_243_965_75).abs() < 1e-12, "dim={d} top={top}");
    }
}

#[test]
fn spectrum_is_symmetric_about_zero() {
    let s = cos_spectrum(IrrepParams::new(1.3).unwrap(), 400).unwrap();
    assert!(s.symmetry_defect() < 1e-12);
}

#[test]
fn small_k_has_eigenvalue_above_one() {
    let s = cos_spectrum(IrrepParams::new(0.25).unwrap(), 500).unwrap();
    assert!(s.max() > 1.0);
}

#[test]
fn improper_eigenvectors_satisfy_recursion() {
    for (k, mu) in [(1.0, 0.3), (0.5, -0.99), (3.0, 0.0)] {
        let v = improper_eigenvector(k, mu, 1.0, 300).unwrap();
        assert!(v.max_residual < 1e-12);
        assert!(v.overflow_at.is_none());
    }
    assert!(improper_eigenvector(1.0, 1.5, 1.0, 300).is_ok());
}

#[test]
fn k_bounds_are_ordered() {
    let scan = threshold_scan(0.2, 0.5, 1e-3, &ScanConfig::default()).unwrap();
    assert!(k1_lower_bound().unwrap() < scan.threshold_bracket.0);
    assert!(scan.threshold_bracket.1 - scan.threshold_bracket.0 <= 1e-3);
    let grid = RhoGrid::default();
    assert!(ratio_supremum(scan.threshold_bracket.1, &grid).unwrap().sup <= 2.0);
    assert!(ratio_supremum(scan.threshold_bracket.0, &grid).unwrap().sup > 2.0);
}

#[test]
fn scan_rejects_unbracketed_interval() {
    let r = threshold_scan(0.6, 1.0, 1e-3, &ScanConfig::default());
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn two_mode_algebra_and_sectors() {
    let (a, b, c) = two_mode_commutator_defect(12).unwrap();
    assert!(a.max(b).max(c) < 1e-12);
    assert_eq!(cross_sector_leak(12).unwrap(), 0.0);
    assert!(sector_casimir_defect(12).unwrap() < 1e-12);
    assert!(sector_equivalence(12).unwrap() < 1e-12);
}

#[test]
fn sector_table_counts_states() {
    let m = 8;
    let sectors = irrep_decomposition(m).unwrap();
    let total: usize = sectors.iter().map(|s| s.states.len()).sum();
    assert_eq!(total, m * m);
    let table = sector_table(&sectors);
    assert_eq!(table[0].delta, 0);
    assert_eq!(table[0].multiplicity, 1);
    for row in &table[1..] {
        assert_eq!(row.multiplicity, 2);
        assert_eq!(row.k, 0.5 + row.delta as f64 / 2.0);
        assert_eq!(row.states_per_copy, m - row.delta);
    }
}

#[test]
fn number_operators_are_diagonal() {
    let n1 = build_two_mode(TwoModeKind::N1, 5).unwrap();
    for (r, c, v) in n1.entries() {
        assert_eq!(r, c);
        assert_eq!(v, (r / 5) as f64);
    }
}

#[test]
fn dirac_square_root() {
    let d = dirac_sqrt_check(10).unwrap();
    assert!(d.defect < 1e-12 && d.eigen_ok);
    assert!(dirac_sqrt_check(2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sturm_count_brackets_eigenvalues(
        diag in prop::collection::vec(-3.0f64..3.0, 2..40),
        seed in prop::collection::vec(0.01f64..2.0, 40),
    ) {
        let off = &seed[..diag.len() - 1];
        let ev = tridiagonal_eigenvalues(&diag, off).unwrap();
        for (i, &e) in ev.iter().enumerate() {
            prop_assert!(sturm_count(&diag, off, e - 1e-9) <= i);
            prop_assert!(sturm_count(&diag, off, e + 1e-9) > i);
            let (_, res) = inverse_iteration(&diag, off, e);
            prop_assert!(res < 1e-10 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn spectrum_inside_unit_interval_for_large_k(k in 1.0f64..6.0, dim in 10usize..300) {
        let s = cos_spectrum(IrrepParams::new(k).unwrap(), dim).unwrap();
        prop_assert!(s.max() < 1.0 && s.min() > -1.0);
    }
}
