//! Barut–Girardello coherent states, eigenstates of `K-` with eigenvalue `z = rho e^{i alpha}`:
//!
//! ```text
//! |z> = rho^{k-1/2} / sqrt(I_{2k-1}(2 rho)) * sum_n z^n / sqrt(n! Gamma(2k+n)) |k,n>
//! ```
//!
//! Every weight is formed from its logarithm, so `rho` in the hundreds is fine.
//! A non-trivial ladder phase `omega` is absorbed by building the coefficients
//! from `omega z`; all expectation values are then independent of `omega`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::irrep::{build_operator, f_unchecked, IrrepParams, OperatorKind, StateVector};
use crate::quad::{integrate, QuadConfig};
use crate::specfun::{ln_gamma, log_bessel_i, log_bessel_k};

/// Truncation tail allowed by [`coherent_vector`].
pub const TAIL_TOL: f64 = 1e-12;
const LN_MAX: f64 = 709.782_712_893_384;
/// Largest `|z|` accepted by the photon-number sums, which visit about `|z|` terms.
pub const MAX_RHO: f64 = 1e6;
/// Largest Bargmann index for coherent states; beyond it `ln p_n` is a difference
/// of numbers too large to resolve in f64.
pub const MAX_K: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentSpec {
    pub params: IrrepParams,
    pub z: Complex64,
}

impl CoherentSpec {
    pub fn new(params: IrrepParams, z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(domain("coherent-state label z must be finite"));
        }
        Ok(Self { params, z })
    }

    pub fn from_polar(params: IrrepParams, rho: f64, alpha: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0 && alpha.is_finite()) {
            return Err(domain(format!("need finite rho >= 0 and finite alpha, got rho={rho}, alpha={alpha}")));
        }
        let z = if rho == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::from_polar(rho, alpha) };
        Ok(Self { params, z })
    }

    pub fn k(&self) -> f64 {
        self.params.k()
    }

    pub fn rho(&self) -> f64 {
        self.z.norm()
    }

    /// Argument of `z` in `[0, 2 pi)`.
    pub fn alpha(&self) -> f64 {
        if self.z == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            self.z.arg().rem_euclid(std::f64::consts::TAU)
        }
    }

    fn coefficient_phase(&self) -> f64 {
        self.alpha() + self.params.omega_angle()
    }
}

/// Photon-number weights `p_n = rho^{2(n+k)-1} / (n! Gamma(2k+n) I_{2k-1}(2 rho))`.
#[derive(Debug, Clone, Copy)]
struct Weights {
    k: f64,
    ln_rho: f64,
    ln_norm: f64,
    rho: f64,
}

impl Weights {
    fn new(k: f64, rho: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(domain(format!("Bargmann index must be finite and > 0, got {k}")));
        }
        if k > MAX_K {
            return Err(domain(format!("k = {k:e} exceeds the supported maximum {MAX_K:e} for coherent states")));
        }
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(domain(format!("rho must be finite and >= 0, got {rho}")));
        }
        if rho > MAX_RHO {
            return Err(domain(format!("rho = {rho:e} exceeds the supported maximum {MAX_RHO:e}")));
        }
        let ln_norm = if rho == 0.0 { 0.0 } else { log_bessel_i(2.0 * k - 1.0, 2.0 * rho)?.ln_value };
        Ok(Self { k, ln_rho: rho.ln(), ln_norm, rho })
    }

    fn ln_p(&self, n: usize) -> f64 {
        let nf = n as f64;
        (2.0 * (nf + self.k) - 1.0) * self.ln_rho - self.ln_norm - ln_gamma(nf + 1.0) - ln_gamma(2.0 * self.k + nf)
    }

    fn p(&self, n: usize) -> f64 {
        if self.rho == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        self.ln_p(n).exp()
    }

    /// `p_{n+1} / p_n`.
    fn step(&self, n: usize) -> f64 {
        let nf = n as f64;
        self.rho * self.rho / ((nf + 1.0) * (2.0 * self.k + nf))
    }

    /// Past this index the weights decrease monotonically.
    fn mode(&self) -> usize {
        let mut n = 0usize;
        while self.step(n) >= 1.0 {
            n += 1;
        }
        n
    }

    /// `sum_{n >= from} p_n * w(n)` for a weight `0 <= w <= 1`, summed until
    /// the geometric remainder bound drops below `1e-20` of the accumulated value.
    fn sum_from(&self, from: usize, w: impl Fn(usize) -> f64) -> f64 {
        if self.rho == 0.0 {
            return if from == 0 { w(0) } else { 0.0 };
        }
        let mode = self.mode();
        let mut acc = 0.0;
        let mut n = from;
        loop {
            let p = self.p(n);
            acc += p * w(n);
            if n >= mode {
                let r = self.step(n);
                if r < 1.0 {
                    let rest = p * r / (1.0 - r);
                    if rest <= 1e-20 * acc || rest < 1e-300 {
                        break;
                    }
                }
            }
            n += 1;
        }
        acc
    }

    fn tail(&self, from: usize) -> f64 {
        self.sum_from(from, |_| 1.0)
    }
}

/// Smallest truncation with `mean + 12 sd < dim` and tail below [`TAIL_TOL`].
pub fn required_dim(spec: &CoherentSpec) -> Result<usize> {
    let w = Weights::new(spec.k(), spec.rho())?;
    let m = k3_moments(spec)?;
    let mean_n = m.mean - spec.k();
    let estimate = mean_n + 12.0 * m.var.max(0.0).sqrt();
    if !(estimate.is_finite() && estimate < 1e8) {
        return Err(Error::Internal(format!("truncation estimate {estimate} for k={}, rho={}", spec.k(), spec.rho())));
    }
    let mut dim = (estimate.floor() as usize + 1).max(2);
    while w.tail(dim) >= TAIL_TOL {
        dim += 1;
    }
    Ok(dim)
}

/// Coefficients `<k,n|z>` for `n < dim`. Fails with [`Error::Truncation`]
/// when the omitted weight exceeds [`TAIL_TOL`].
pub fn coherent_vector(spec: &CoherentSpec, dim: usize) -> Result<StateVector> {
    if dim == 0 {
        return Err(domain("coherent_vector needs dim >= 1"));
    }
    let w = Weights::new(spec.k(), spec.rho())?;
    let tail = w.tail(dim);
    if tail >= TAIL_TOL {
        return Err(Error::Truncation { dim, required: required_dim(spec)?, tail });
    }
    let theta = spec.coefficient_phase();
    let coeffs = (0..dim)
        .map(|n| {
            if spec.rho() == 0.0 {
                Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0)
            } else {
                Complex64::from_polar((0.5 * w.ln_p(n)).exp(), n as f64 * theta)
            }
        })
        .collect();
    Ok(StateVector { coeffs, params: spec.params, tail_bound: tail })
}

/// `||(K- - z)|z>||` over rows `0..dim-2` of the truncated lowering operator.
pub fn lowering_residual(spec: &CoherentSpec, dim: usize) -> Result<f64> {
    let v = coherent_vector(spec, dim)?;
    let km = build_operator(OperatorKind::Kminus, spec.params, dim)?;
    let kv = km.apply(&v.coeffs);
    Ok(kv[..dim - 1].iter().zip(&v.coeffs).map(|(a, c)| (a - spec.z * c).norm_sqr()).sum::<f64>().sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution {
    /// `p_n` for `n = 0..=n_max`.
    pub probs: Vec<f64>,
    /// `sum_{n > n_max} p_n`.
    pub tail: f64,
}

impl PhotonDistribution {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs.iter().enumerate().map(|(n, p)| (n as f64 - mean).powi(2) * p).sum()
    }

    pub fn fano_factor(&self) -> f64 {
        self.variance() / self.mean()
    }

    /// Total-variation distance to the Poisson law with the same mean.
    /// Mass beyond `n_max` enters only through the difference of the two
    /// tails, so the result is a lower bound when those tails are non-zero.
    pub fn total_variation_to_poisson(&self) -> f64 {
        let lambda = self.mean();
        let mut covered = 0.0;
        let mut dist = 0.0;
        for (n, p) in self.probs.iter().enumerate() {
            let q = if lambda == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (n as f64 * lambda.ln() - lambda - ln_gamma(n as f64 + 1.0)).exp()
            };
            covered += q;
            dist += (p - q).abs();
        }
        let q_tail = (1.0 - covered).max(0.0);
        0.5 * (dist + (self.tail - q_tail).abs())
    }
}

pub fn photon_distribution(spec: &CoherentSpec, n_max: usize) -> Result<PhotonDistribution> {
    let w = Weights::new(spec.k(), spec.rho())?;
    Ok(PhotonDistribution { probs: (0..=n_max).map(|n| w.p(n)).collect(), tail: w.tail(n_max + 1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct K3Moments {
    pub mean: f64,
    pub second: f64,
    pub var: f64,
}

/// `<K3> = k + rho r`, `<K3^2> = k^2 + rho^2 + rho r` with `r = I_{2k}(2 rho)/I_{2k-1}(2 rho)`.
pub fn k3_moments(spec: &CoherentSpec) -> Result<K3Moments> {
    let k = spec.k();
    let rho = spec.rho();
    let r = crate::specfun::bessel_i_ratio(2.0 * k - 1.0, 2.0 * rho);
    let rr = rho * r;
    let mean = k + rr;
    let second = k * k + rho * rho + rr;
    // variance of n without the cancellation in second - mean^2
    let var = rho * rho * (1.0 - r) * (1.0 + r) + (1.0 - 2.0 * k) * rr;
    Ok(K3Moments { mean, second, var })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct K12Moments {
    pub mean_k1: f64,
    pub mean_k2: f64,
    pub var_k1: f64,
    pub var_k2: f64,
}

pub fn k12_moments(spec: &CoherentSpec) -> Result<K12Moments> {
    let half_k3 = 0.5 * k3_moments(spec)?.mean;
    Ok(K12Moments { mean_k1: spec.z.re, mean_k2: -spec.z.im, var_k1: half_k3, var_k2: half_k3 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyCheck {
    /// `(dK1)^2 (dK2)^2`.
    pub lhs: f64,
    /// `<K3>^2 / 4`.
    pub rhs: f64,
    pub saturated: bool,
}

impl UncertaintyCheck {
    fn from_parts(var_k1: f64, var_k2: f64, mean_k3: f64) -> Self {
        let lhs = var_k1 * var_k2;
        let rhs = 0.25 * mean_k3 * mean_k3;
        Self { lhs, rhs, saturated: (lhs - rhs).abs() <= 1e-10 * rhs }
    }
}

pub fn uncertainty_check(spec: &CoherentSpec) -> Result<UncertaintyCheck> {
    let m = k12_moments(spec)?;
    Ok(UncertaintyCheck::from_parts(m.var_k1, m.var_k2, k3_moments(spec)?.mean))
}

/// Uncertainty product of an arbitrary truncated state, from matrix quadratic forms.
pub fn uncertainty_check_state(state: &StateVector) -> Result<UncertaintyCheck> {
    let dim = state.dim();
    let (_, v1) = state.mean_and_variance(&build_operator(OperatorKind::K1, state.params, dim)?);
    let (_, v2) = state.mean_and_variance(&build_operator(OperatorKind::K2, state.params, dim)?);
    let (m3, _) = state.mean_and_variance(&build_operator(OperatorKind::K3, state.params, dim)?);
    Ok(UncertaintyCheck::from_parts(v1, v2, m3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GMethod {
    Series,
    Integral,
}

fn term_weight(k: f64, n: usize) -> f64 {
    let nk = n as f64 + k;
    1.0 / nk + 1.0 / (nk + 1.0)
}

/// `g(rho) = sum_n rho^{2(n+k)} / (n! Gamma(2k+n)) (1/(n+k) + 1/(n+k+1))`, or the same
/// value as `int_0^{2 rho} I_{2k-1}(u) (1 + u^2 / (4 rho^2)) du`.
pub fn g_function(k: f64, rho: f64, method: GMethod) -> Result<f64> {
    let w = Weights::new(k, rho)?;
    if method == GMethod::Integral && rho == 0.0 {
        return Err(domain("integral form of g needs rho > 0"));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let ln_scaled = match method {
        GMethod::Series => g_ratio(k, rho)?.ln(),
        GMethod::Integral => g_integral_scaled(k, rho)?.ln(),
    };
    let ln_g = ln_scaled + w.ln_norm;
    if ln_g > LN_MAX {
        return Err(Error::Overflow { log_value: ln_g });
    }
    Ok(ln_g.exp())
}

/// `g(rho) / I_{2k-1}(2 rho) = rho sum_n p_n (1/(n+k) + 1/(n+k+1))`; tends to 2 as `rho -> inf`.
pub fn g_ratio(k: f64, rho: f64) -> Result<f64> {
    let w = Weights::new(k, rho)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(rho * w.sum_from(0, |n| term_weight(k, n) / term_weight(k, 0)) * term_weight(k, 0))
}

/// Integral representation divided by `I_{2k-1}(2 rho)`.
fn g_integral_scaled(k: f64, rho: f64) -> Result<f64> {
    let nu = 2.0 * k - 1.0;
    let ln_norm = log_bessel_i(nu, 2.0 * rho)?.ln_value;
    let inv4r2 = 1.0 / (4.0 * rho * rho);
    let h = move |u: f64| -> f64 {
        match log_bessel_i(nu, u) {
            Ok(l) => (l.ln_value - ln_norm).exp() * (1.0 + u * u * inv4r2),
            Err(_) => f64::NAN,
        }
    };
    let cfg = QuadConfig { abs_tol: 0.0, rel_tol: 1e-11, max_intervals: 4000 };
    let res = if k < 0.5 {
        // u = t^p removes the u^{2k-1} endpoint singularity
        let p = 1.0 / (2.0 * k);
        let top = (2.0 * rho).powf(2.0 * k);
        integrate(|t: f64| h(t.powf(p)) * p * t.powf(p - 1.0), 0.0, top, &cfg)?
    } else {
        integrate(h, 0.0, 2.0 * rho, &cfg)?
    };
    if !(res.abs_err <= cfg.rel_tol * res.value.abs()) {
        return Err(Error::Convergence { what: "g integral quadrature", iterations: res.intervals });
    }
    Ok(res.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigExpectation {
    pub mean_cos: f64,
    pub mean_sin: f64,
    /// `g / I_{2k-1}(2 rho)`.
    pub ratio: f64,
}

/// `<cos> = cos(alpha) g / (2 I_{2k-1})`, `<sin> = sin(alpha) g / (2 I_{2k-1})`.
pub fn trig_expectation(spec: &CoherentSpec) -> Result<TrigExpectation> {
    let ratio = g_ratio(spec.k(), spec.rho())?;
    let alpha = spec.alpha();
    Ok(TrigExpectation { mean_cos: 0.5 * alpha.cos() * ratio, mean_sin: 0.5 * alpha.sin() * ratio, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigSecondMoment {
    pub cos_sq: f64,
    pub sin_sq: f64,
    /// Omitted weight of the coherent state beyond the truncation.
    pub tail: f64,
}

/// `<z|cos^2|z> = sum_n |<k,n|cos|z>|^2`, including the row `n = dim` reached from `n = dim - 1`.
pub fn trig_second_moment(spec: &CoherentSpec, dim: usize) -> Result<TrigSecondMoment> {
    let v = coherent_vector(spec, dim)?;
    let c = &v.coeffs;
    let k = spec.k();
    let w = spec.params.omega();
    let (mut cos_sq, mut sin_sq) = (0.0, 0.0);
    for n in 0..=dim {
        let from_below = if n >= 1 { w * c[n - 1] * (0.25 * f_unchecked(k, n)) } else { Complex64::new(0.0, 0.0) };
        let from_above =
            if n + 1 < dim { w.conj() * c[n + 1] * (0.25 * f_unchecked(k, n + 1)) } else { Complex64::new(0.0, 0.0) };
        cos_sq += (from_below + from_above).norm_sqr();
        sin_sq += (from_below - from_above).norm_sqr();
    }
    Ok(TrigSecondMoment { cos_sq, sin_sq, tail: v.tail_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompletenessResult {
    pub value: f64,
    pub quad_abs_err: f64,
    /// Upper bound on the omitted integral over `(radius, inf)`.
    pub tail_bound: f64,
    pub radius: f64,
}

/// Diagonal element `<k,n| (resolution of identity) |k,n>`: the angular integral
/// is done analytically, leaving
/// `int_0^R 4 rho^{2(n+k)} K_{2k-1}(2 rho) / (n! Gamma(2k+n)) d rho` which tends to 1.
pub fn completeness_check(k: f64, n: usize, cfg: &QuadConfig) -> Result<CompletenessResult> {
    let radius = 20f64.max(10.0 * k + 5.0 * n as f64);
    completeness_check_radius(k, n, radius, cfg)
}

pub fn completeness_check_radius(k: f64, n: usize, radius: f64, cfg: &QuadConfig) -> Result<CompletenessResult> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain(format!("Bargmann index must be finite and > 0, got {k}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(domain(format!("radius must be finite and > 0, got {radius}")));
    }
    let nu = 2.0 * k - 1.0;
    let s = n as f64 + k;
    let ln_pref = 4f64.ln() - ln_gamma(n as f64 + 1.0) - ln_gamma(2.0 * k + n as f64);
    let f = |rho: f64| -> f64 {
        match log_bessel_k(nu, 2.0 * rho) {
            Ok(l) => (ln_pref + 2.0 * s * rho.ln() + l.ln_value).exp(),
            Err(_) => f64::NAN,
        }
    };
    let res = integrate(f, 0.0, radius, cfg)?;
    Ok(CompletenessResult {
        value: res.value,
        quad_abs_err: res.abs_err,
        tail_bound: completeness_tail(nu, s, ln_pref, radius)?,
        radius,
    })
}

/// Bound on `int_R^inf e^{ln_pref} rho^{2s} K_nu(2 rho) d rho`.
///
/// `sqrt(x) e^x K_nu(x)` is monotone in `x` (increasing to `sqrt(pi/2)` for
/// `|nu| < 1/2`, decreasing towards it otherwise), so
/// `K_nu(x) <= B e^{-x} / sqrt(x)` on `x >= 2R` with `B` the larger of the two ends.
/// The remaining integral is `2^{-2s-1} Gamma(2s + 1/2, 2R)`.
fn completeness_tail(nu: f64, s: f64, ln_pref: f64, radius: f64) -> Result<f64> {
    let x0 = 2.0 * radius;
    let ln_b_edge = log_bessel_k(nu, x0)?.ln_value + x0 + 0.5 * x0.ln();
    let ln_b = ln_b_edge.max(0.5 * (std::f64::consts::PI / 2.0).ln());
    let a = 2.0 * s + 0.5;
    // Gamma(a, x) <= x^{a-1} e^{-x} / (1 - (a-1)/x) for x > a - 1, and <= x^{a-1} e^{-x} when a <= 1
    let denom = if a <= 1.0 { 1.0 } else { 1.0 - (a - 1.0) / x0 };
    if denom <= 0.0 {
        return Err(domain(format!("radius {radius} too small for the tail bound at s = {s}")));
    }
    let ln_gamma_inc = (a - 1.0) * x0.ln() - x0 - denom.ln();
    Ok((ln_pref + ln_b - (2.0 * s + 1.0) * 2f64.ln() + ln_gamma_inc).exp())
}

/// `<z_a|z_b>` by contracting truncated coefficient vectors.
pub fn overlap(a: &CoherentSpec, b: &CoherentSpec, dim: usize) -> Result<Complex64> {
    if a.k() != b.k() {
        return Err(Error::Mismatch { left: a.k(), right: b.k() });
    }
    coherent_vector(a, dim)?.inner(&coherent_vector(b, dim)?)
}
