//! Moments of the generators and phase operators in number eigenstates `|k,n>`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::irrep::{build_operator, f_unchecked, IrrepParams, OperatorKind, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KMoments {
    pub mean_k1: f64,
    pub mean_k2: f64,
    pub var_k1: f64,
    pub var_k2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigMoments {
    pub mean_cos: f64,
    pub mean_sin: f64,
    /// `<cos^2> = <sin^2>`.
    pub second_moment: f64,
    /// `<[sin, cos]>`, purely imaginary.
    pub commutator_expect: Complex64,
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("Bargmann index must be finite and > 0, got {k}")))
    }
}

/// `<K1> = <K2> = 0`, `(dK1)^2 = (dK2)^2 = (n(2k+n) + k)/2`.
pub fn k_moments(k: f64, n: usize) -> Result<KMoments> {
    check_k(k)?;
    let nf = n as f64;
    let var = 0.5 * (nf * (2.0 * k + nf) + k);
    Ok(KMoments { mean_k1: 0.0, mean_k2: 0.0, var_k1: var, var_k2: var })
}

pub fn trig_moments(k: f64, n: usize) -> Result<TrigMoments> {
    check_k(k)?;
    let hi = f_unchecked(k, n + 1).powi(2);
    let lo = f_unchecked(k, n).powi(2);
    Ok(TrigMoments {
        mean_cos: 0.0,
        mean_sin: 0.0,
        second_moment: (hi + lo) / 16.0,
        commutator_expect: Complex64::new(0.0, -(hi - lo) / 8.0),
    })
}

/// `<k,0|cos^2|k,0> = (2k+1)^2 / (8k(k+1)^2)`.
pub fn ground_state_moment(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok((2.0 * k + 1.0).powi(2) / (8.0 * k * (k + 1.0).powi(2)))
}

/// Smallest `k` with `<k,0|cos^2|k,0> <= 1`.
///
/// Evaluated from the Cardano radical and by bisection on the ground-state
/// moment; the two must agree to 1e-12.
pub fn k1_lower_bound() -> Result<f64> {
    let radical = k1_radical();
    let bisected = k1_bisection();
    if (radical - bisected).abs() > 1e-12 {
        return Err(Error::Internal(format!("k1 radical {radical} and bisection {bisected} disagree")));
    }
    Ok(radical)
}

pub(crate) fn k1_radical() -> f64 {
    let s = 0.5 * (23.0f64 / 27.0).sqrt();
    ((0.5 + s).cbrt() + (0.5 - s).cbrt() - 1.0) / 2.0
}

pub(crate) fn k1_bisection() -> f64 {
    // ground_state_moment is strictly decreasing on (0, inf)
    let h = |k: f64| (2.0 * k + 1.0).powi(2) / (8.0 * k * (k + 1.0).powi(2)) - 1.0;
    let (mut lo, mut hi) = (0.05, 0.5);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `f_n^2/4 - 1` written without cancellation:
/// with `m = n + k - 1/2`, `a = k - 1/2` it equals `(m^2 (1/2 - a^2) - 1/16) / (m^2 - 1/4)^2`.
fn f_sq_excess(k: f64, n: usize) -> f64 {
    if n == 0 {
        return -1.0;
    }
    let m = n as f64 + k - 0.5;
    let a = k - 0.5;
    let m2 = m * m;
    (m2 * (0.5 - a * a) - 0.0625) / (m2 - 0.25).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrespondenceRow {
    pub n: usize,
    /// `<K1^2> + <K2^2> - <K3^2> - k(1-k)`.
    pub casimir_residual: f64,
    /// `<cos^2> - 1/2`.
    pub second_moment_dev: f64,
    /// `|<[sin, cos]>|`.
    pub commutator_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub k: f64,
    pub rows: Vec<CorrespondenceRow>,
    /// Least-squares slope of `ln|second_moment_dev|` against `ln n`.
    pub second_moment_slope: Option<f64>,
    /// Least-squares slope of `ln commutator_abs` against `ln n`.
    pub commutator_slope: Option<f64>,
}

pub fn correspondence_report(k: f64, n_list: &[usize]) -> Result<CorrespondenceReport> {
    check_k(k)?;
    if n_list.is_empty() {
        return Err(domain("correspondence_report needs at least one n"));
    }
    if n_list.contains(&0) {
        return Err(domain("correspondence_report needs n >= 1"));
    }
    let q = k * (1.0 - k);
    let rows: Vec<CorrespondenceRow> = n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let sum_sq = nf * (2.0 * k + nf) + k;
            let k3_sq = (k + nf) * (k + nf);
            let (hi, lo) = (f_sq_excess(k, n + 1), f_sq_excess(k, n));
            CorrespondenceRow {
                n,
                casimir_residual: sum_sq - k3_sq - q,
                second_moment_dev: (hi + lo) / 4.0,
                commutator_abs: ((hi - lo) / 2.0).abs(),
            }
        })
        .collect();
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let dev: Vec<f64> = rows.iter().map(|r| r.second_moment_dev.abs()).collect();
    let com: Vec<f64> = rows.iter().map(|r| r.commutator_abs).collect();
    Ok(CorrespondenceReport {
        k,
        second_moment_slope: loglog_slope(&ns, &dev),
        commutator_slope: loglog_slope(&ns, &com),
        rows,
    })
}

/// Least-squares slope of `ln y` on `ln x`; `None` with fewer than two
/// distinct points or any non-positive value.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let len = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / len;
    let my = ly.iter().sum::<f64>() / len;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// The same moments evaluated as quadratic forms of the truncated matrices.
/// `n` must leave one row of headroom (`n + 2 <= dim`).
pub fn matrix_trig_moments(params: IrrepParams, n: usize, dim: usize) -> Result<TrigMoments> {
    if n + 2 > dim {
        return Err(domain(format!("number state n={n} needs dim >= {}, got {dim}", n + 2)));
    }
    let state = StateVector::number_state(params, n, dim)?;
    let cos = build_operator(OperatorKind::CosPhi, params, dim)?;
    let sin = build_operator(OperatorKind::SinPhi, params, dim)?;
    let cv = cos.apply(&state.coeffs);
    let sv = sin.apply(&state.coeffs);
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    // <[sin,cos]> = <sin v | cos v> - <cos v | sin v>
    let commutator = dot(&sv, &cv) - dot(&cv, &sv);
    Ok(TrigMoments {
        mean_cos: dot(&state.coeffs, &cv).re,
        mean_sin: dot(&state.coeffs, &sv).re,
        second_moment: dot(&cv, &cv).re,
        commutator_expect: commutator,
    })
}
