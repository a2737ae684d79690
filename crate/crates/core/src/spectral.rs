//! Spectrum of the truncated phase-cosine operator, its improper eigenvectors,
//! and the scan over `k` for the supremum of `<cos>` over coherent states.

use serde::Serialize;

use crate::coherent::g_ratio;
use crate::error::{domain, Error, Result};
use crate::irrep::{build_operator, f_unchecked, IrrepParams, OperatorKind};

const QL_MAX_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`), ascending.
///
/// Implicit QL with Wilkinson shifts.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(domain(format!("tridiagonal shape mismatch: {} diagonal, {} off-diagonal", n, off.len())));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::Convergence { what: "tridiagonal QL", iterations: sweeps });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence / LDL^T inertia).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solve `(T - sigma) x = b` by LU with row interchanges; zero pivots are
/// replaced by `floor` so an exact eigenvalue shift still yields a solution.
fn shifted_solve(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64], floor: f64) {
    let n = diag.len();
    if n == 1 {
        let p = diag[0] - sigma;
        b[0] /= if p == 0.0 { floor } else { p };
        return;
    }
    let mut d: Vec<f64> = diag.iter().map(|x| x - sigma).collect();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = floor;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = floor;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - dl[i] * b[i];
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

fn tridiagonal_apply(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut y: Vec<f64> = diag.iter().zip(x).map(|(d, v)| d * v).collect();
    for i in 0..n - 1 {
        y[i] += off[i] * x[i + 1];
        y[i + 1] += off[i] * x[i];
    }
    y
}

/// Unit eigenvector for the eigenvalue `lambda` by two steps of inverse iteration,
/// with its residual `||T v - lambda v||`.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let n = diag.len();
    let norm = tridiagonal_inf_norm(diag, off);
    let floor = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    // deterministic start vector with no special alignment
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 * 0.618_033_988_749_895).fract() - 0.5)).collect();
    for _ in 0..2 {
        shifted_solve(diag, off, lambda, &mut v, floor);
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= len);
    }
    let tv = tridiagonal_apply(diag, off, &v);
    let res = tv.iter().zip(&v).map(|(a, x)| (a - lambda * x).powi(2)).sum::<f64>().sqrt();
    (v, res)
}

fn tridiagonal_inf_norm(diag: &[f64], off: &[f64]) -> f64 {
    (0..diag.len())
        .map(|i| {
            diag[i].abs() + if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < off.len() { off[i].abs() } else { 0.0 }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Largest `||A v - lambda v||` over all eigenpairs.
    pub max_residual: f64,
    /// Infinity norm of the matrix.
    pub matrix_norm: f64,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `max_i |lambda_i + lambda_{n-1-i}|`.
    pub fn symmetry_defect(&self) -> f64 {
        let e = &self.eigenvalues;
        (0..e.len()).map(|i| (e[i] + e[e.len() - 1 - i]).abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues of the `dim x dim` truncated phase-cosine matrix, each
/// certified by an inverse-iteration residual `<= 1e-10 ||A||`.
///
/// The off-diagonal moduli `f_{n+1}/4` do not depend on `omega`, and a
/// Hermitian tridiagonal matrix is unitarily similar to the real one built
/// from the moduli, so the spectrum is `omega`-independent by construction.
pub fn cos_spectrum(params: IrrepParams, dim: usize) -> Result<Spectrum> {
    if dim < 10 {
        return Err(domain(format!("cos_spectrum needs dim >= 10, got {dim}")));
    }
    let k = params.k();
    let diag = vec![0.0; dim];
    let off: Vec<f64> = (1..dim).map(|n| 0.25 * f_unchecked(k, n)).collect();
    let eigenvalues = tridiagonal_eigenvalues(&diag, &off)?;
    let matrix_norm = tridiagonal_inf_norm(&diag, &off);
    let max_residual = eigenvalues.iter().map(|&l| inverse_iteration(&diag, &off, l).1).fold(0.0, f64::max);
    if max_residual > 1e-10 * matrix_norm {
        return Err(Error::Convergence { what: "eigenpair residual certification", iterations: 2 });
    }
    Ok(Spectrum { eigenvalues, max_residual, matrix_norm })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImproperEigenvector {
    /// `a_0, a_1, ...`, stopped early at the first `|a_n| > 1e300`.
    pub coeffs: Vec<f64>,
    /// Index whose magnitude exceeded `1e300`, if any.
    pub overflow_at: Option<usize>,
    /// `max_{n <= len-2} |(cos a - mu a)_n| / max |a_n|`, from the truncated matrix.
    pub max_residual: f64,
}

/// Solution of `a_{n+1} = (4 mu a_n - f_n a_{n-1}) / f_{n+1}` with `f_0 = 0`,
/// i.e. the formal eigenvector of the phase-cosine operator for eigenvalue `mu`.
pub fn improper_eigenvector(k: f64, mu: f64, a0: f64, n_max: usize) -> Result<ImproperEigenvector> {
    let params = IrrepParams::new(k)?;
    if n_max < 2 {
        return Err(domain(format!("improper_eigenvector needs n_max >= 2, got {n_max}")));
    }
    if !(a0.is_finite() && a0 != 0.0 && mu.is_finite()) {
        return Err(domain("improper_eigenvector needs finite mu and finite nonzero a0"));
    }
    let mut coeffs = vec![a0];
    let mut overflow_at = None;
    let mut prev = 0.0;
    for n in 0..n_max - 1 {
        let next = (4.0 * mu * coeffs[n] - f_unchecked(k, n) * prev) / f_unchecked(k, n + 1);
        if next.abs() > 1e300 || !next.is_finite() {
            overflow_at = Some(n + 1);
            break;
        }
        prev = coeffs[n];
        coeffs.push(next);
    }
    let len = coeffs.len();
    let max_abs = coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let max_residual = if len < 2 {
        0.0
    } else {
        let cos = build_operator(OperatorKind::CosPhi, params, len)?;
        let v: Vec<_> = coeffs.iter().map(|&a| num_complex::Complex64::new(a, 0.0)).collect();
        let cv = cos.apply(&v);
        (0..len - 1).map(|n| (cv[n] - mu * v[n]).norm()).fold(0.0, f64::max) / max_abs
    };
    Ok(ImproperEigenvector { coeffs, overflow_at, max_residual })
}

/// Log-spaced grid over which `g / I_{2k-1}` is maximised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
}

impl Default for RhoGrid {
    fn default() -> Self {
        Self { rho_min: 1e-3, rho_max: 500.0, points: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSupremum {
    pub sup: f64,
    pub at_rho: f64,
    /// The maximum sits on the upper end of the grid (ratio still rising).
    pub at_boundary: bool,
}

/// `sup_rho g(rho) / I_{2k-1}(2 rho)` over the grid, polished by golden-section search.
/// Equals twice the largest `<cos>` reachable by coherent states of this `k`.
pub fn ratio_supremum(k: f64, grid: &RhoGrid) -> Result<RatioSupremum> {
    if !(grid.rho_max >= 50.0) || !(grid.rho_min > 0.0 && grid.rho_min < grid.rho_max) || grid.points < 3 {
        return Err(domain(format!(
            "invalid rho grid {grid:?} (need 0 < rho_min < rho_max, rho_max >= 50, >= 3 points)"
        )));
    }
    let step = (grid.rho_max / grid.rho_min).ln() / (grid.points - 1) as f64;
    let rho_at = |i: usize| {
        if i == grid.points - 1 {
            grid.rho_max
        } else {
            grid.rho_min * (step * i as f64).exp()
        }
    };
    let mut best = (f64::NEG_INFINITY, 0usize);
    for i in 0..grid.points {
        let v = g_ratio(k, rho_at(i))?;
        if v > best.0 {
            best = (v, i);
        }
    }
    let (val, i) = best;
    if i == grid.points - 1 {
        return Ok(RatioSupremum { sup: val, at_rho: grid.rho_max, at_boundary: true });
    }
    let lo = rho_at(i.saturating_sub(1));
    let hi = rho_at(i + 1);
    let (x, v) = golden_max(|r| g_ratio(k, r), lo, hi)?;
    let (sup, at_rho) = if v >= val { (v, x) } else { (val, rho_at(i)) };
    Ok(RatioSupremum { sup, at_rho, at_boundary: false })
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut iterations = 0;
    while b - a > 1e-10 * b {
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Convergence { what: "golden-section maximisation", iterations });
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// `k` is admissible when no coherent state pushes `<cos>` above 1, i.e. the ratio supremum is `<= 2`.
pub fn is_admissible(k: f64, grid: &RhoGrid) -> Result<bool> {
    Ok(ratio_supremum(k, grid)?.sup <= 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub grid: RhoGrid,
    /// Evenly spaced `k` values probed before bisection, used to check monotonicity.
    pub coarse_points: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { grid: RhoGrid::default(), coarse_points: 9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    /// Every `k` evaluated, ascending.
    pub k_grid: Vec<f64>,
    pub sup_ratio: Vec<f64>,
    pub per_k_argmax_rho: Vec<f64>,
    pub admissible: Vec<bool>,
    /// `(inadmissible, admissible)` with width `<= tol`.
    pub threshold_bracket: (f64, f64),
    pub tol: f64,
    pub grid: RhoGrid,
}

/// Bisection for the smallest admissible `k` in `[k_lo, k_hi]`.
///
/// Admissibility is first sampled on a coarse grid; any admissible point
/// followed by an inadmissible one is reported as [`Error::NonMonotone`].
pub fn threshold_scan(k_lo: f64, k_hi: f64, tol: f64, cfg: &ScanConfig) -> Result<ScanReport> {
    if !(k_lo > 0.0 && k_lo < k_hi && k_hi.is_finite()) {
        return Err(domain(format!("need 0 < k_lo < k_hi, got [{k_lo}, {k_hi}]")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be > 0, got {tol}")));
    }
    if cfg.coarse_points < 2 {
        return Err(domain("coarse scan needs at least 2 points"));
    }
    let mut samples: Vec<(f64, RatioSupremum)> = Vec::new();
    let eval = |k: f64, samples: &mut Vec<(f64, RatioSupremum)>| -> Result<bool> {
        let s = ratio_supremum(k, &cfg.grid)?;
        samples.push((k, s));
        Ok(s.sup <= 2.0)
    };
    let n = cfg.coarse_points;
    let coarse: Vec<f64> = (0..n).map(|i| k_lo + (k_hi - k_lo) * i as f64 / (n - 1) as f64).collect();
    let mut flags = Vec::with_capacity(n);
    for &k in &coarse {
        flags.push(eval(k, &mut samples)?);
    }
    let first_ok =
        flags.iter().position(|&f| f).ok_or_else(|| domain(format!("no admissible k in [{k_lo}, {k_hi}]")))?;
    if first_ok == 0 {
        return Err(domain(format!("k_lo = {k_lo} is already admissible; threshold not bracketed")));
    }
    if let Some(j) = flags[first_ok..].iter().position(|&f| !f) {
        return Err(Error::NonMonotone { k: coarse[first_ok + j] });
    }
    let (mut lo, mut hi) = (coarse[first_ok - 1], coarse[first_ok]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid, &mut samples)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ScanReport {
        k_grid: samples.iter().map(|s| s.0).collect(),
        sup_ratio: samples.iter().map(|s| s.1.sup).collect(),
        per_k_argmax_rho: samples.iter().map(|s| s.1.at_rho).collect(),
        admissible: samples.iter().map(|s| s.1.sup <= 2.0).collect(),
        threshold_bracket: (lo, hi),
        tol,
        grid: cfg.grid,
    })
}
