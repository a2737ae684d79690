//! Modified Bessel functions of real order and positive real argument.
//!
//! `I_nu` is summed from its ascending series below `x = max(30, 2 nu^2)` and
//! from the Hankel expansion above it. `K_nu` is evaluated for the reduced
//! order `mu = nu - round(nu)` (Temme's series for `x <= 2`, Steed's
//! continued fraction for `2 < x < 20`, Hankel expansion for `x >= 20`) and
//! carried to `nu` by forward recurrence, which is stable for `K`.
//! The ratio `I_{nu+1}/I_nu` comes from the Gauss continued fraction and never
//! touches `I` itself.

use serde::Serialize;

use super::gamma::{ln_gamma, temme_gammas};
use crate::error::{domain, Error, Result};

const EPS: f64 = f64::EPSILON;
/// Relative term size at which series sums stop.
const SERIES_TOL: f64 = 1e-18;
const SERIES_CAP: usize = 500;
const CF_CAP: usize = 50_000;
const LN_MAX: f64 = 709.782_712_893_384;
const K_ASYMPTOTIC_X: f64 = 20.0;
const K_TEMME_X: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Asymptotic,
    ContinuedFraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub method: Method,
}

/// A value held as its natural logarithm, for arguments where `e^x` overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogEval {
    pub ln_value: f64,
    /// Estimated relative error of `exp(ln_value)`.
    pub rel_err: f64,
    pub method: Method,
}

impl LogEval {
    fn into_eval(self) -> Result<EvalResult> {
        if self.ln_value > LN_MAX {
            return Err(Error::Overflow { log_value: self.ln_value });
        }
        let value = self.ln_value.exp();
        Ok(EvalResult { value, abs_err_estimate: value * self.rel_err, method: self.method })
    }
}

/// Argument at which `I_nu` switches from the ascending series to the Hankel expansion.
pub fn i_switch_point(nu: f64) -> f64 {
    30f64.max(2.0 * nu * nu)
}

fn check_i_args(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(domain(format!("bessel_i needs finite arguments, got nu={nu}, x={x}")));
    }
    if nu <= -1.0 {
        return Err(domain(format!("bessel_i supports nu > -1, got {nu}")));
    }
    if x < 0.0 {
        return Err(domain(format!("bessel_i needs x >= 0, got {x}")));
    }
    Ok(())
}

/// `I_nu(x)` for `nu > -1`, `x >= 0`.
///
/// Fails with [`Error::Overflow`] (carrying `ln I_nu(x)`) once `e^x` leaves
/// the f64 range; use [`log_bessel_i`] there.
pub fn bessel_i(nu: f64, x: f64) -> Result<EvalResult> {
    check_i_args(nu, x)?;
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(EvalResult { value: 1.0, abs_err_estimate: 0.0, method: Method::Series })
        } else if nu > 0.0 {
            Ok(EvalResult { value: 0.0, abs_err_estimate: 0.0, method: Method::Series })
        } else {
            Err(domain(format!("I_nu(0) diverges for nu = {nu} < 0")))
        };
    }
    log_bessel_i(nu, x)?.into_eval()
}

/// `ln I_nu(x)` for `nu > -1`, `x > 0`.
pub fn log_bessel_i(nu: f64, x: f64) -> Result<LogEval> {
    check_i_args(nu, x)?;
    if x == 0.0 {
        return Err(domain("log_bessel_i needs x > 0"));
    }
    if x < i_switch_point(nu) {
        i_series(nu, x)
    } else {
        i_asymptotic(nu, x)
    }
}

fn i_series(nu: f64, x: f64) -> Result<LogEval> {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0usize;
    loop {
        let nf = (n + 1) as f64;
        term *= q / (nf * (nf + nu));
        sum += term;
        n += 1;
        if term < SERIES_TOL * sum {
            break;
        }
        if n >= SERIES_CAP {
            return Err(Error::Convergence { what: "I_nu ascending series", iterations: n });
        }
    }
    let ln_pref = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0);
    let ln_value = ln_pref + sum.ln();
    Ok(LogEval { ln_value, rel_err: EPS * (4.0 + n as f64 + ln_value.abs() + ln_pref.abs()), method: Method::Series })
}

/// Hankel expansion; the exponentially small `e^{-x}` companion is below 1e-26 for x >= 30.
fn i_asymptotic(nu: f64, x: f64) -> Result<LogEval> {
    let mu4 = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu4 - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() && k > 1 {
            break; // past the smallest term
        }
        term = next;
        sum += term;
        if term.abs() < SERIES_TOL * sum.abs() || term == 0.0 {
            break;
        }
        k += 1;
        if k > SERIES_CAP {
            return Err(Error::Convergence { what: "I_nu asymptotic series", iterations: k });
        }
    }
    let ln_value = x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln();
    Ok(LogEval {
        ln_value,
        rel_err: term.abs() / sum.abs() + EPS * (4.0 + k as f64 + ln_value.abs()),
        method: Method::Asymptotic,
    })
}

/// `K_nu(x)` for real `nu` (using `K_{-nu} = K_nu`) and `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<EvalResult> {
    let l = log_bessel_k(nu, x)?;
    let value = l.ln_value.exp();
    if !value.is_finite() {
        return Err(Error::Overflow { log_value: l.ln_value });
    }
    Ok(EvalResult { value, abs_err_estimate: value * l.rel_err, method: l.method })
}

/// `ln K_nu(x)`; never overflows or underflows in the representable log range.
pub fn log_bessel_k(nu: f64, x: f64) -> Result<LogEval> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(domain(format!("bessel_k needs finite arguments, got nu={nu}, x={x}")));
    }
    if x <= 0.0 {
        return Err(domain(format!("K_nu(x) diverges at x = {x} <= 0")));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    // scaled pair e^x K_mu, e^x K_{mu+1}
    let (mut k0, mut k1, method) = if x <= K_TEMME_X {
        let (a, b) = k_temme(mu, x)?;
        (a * x.exp(), b * x.exp(), Method::Series)
    } else if x < K_ASYMPTOTIC_X {
        let (a, b) = k_steed(mu, x)?;
        (a, b, Method::ContinuedFraction)
    } else {
        (k_hankel_scaled(mu, x), k_hankel_scaled(mu + 1.0, x), Method::Asymptotic)
    };
    let steps = nl as usize;
    let mut ln_scale = 0.0;
    let two_over_x = 2.0 / x;
    for i in 1..=steps {
        let next = (mu + i as f64) * two_over_x * k1 + k0;
        k0 = k1;
        k1 = next;
        if k1 > 1e250 {
            k0 *= 1e-250;
            k1 *= 1e-250;
            ln_scale += 250.0 * std::f64::consts::LN_10;
        }
    }
    let ln_value = k0.ln() + ln_scale - x;
    Ok(LogEval { ln_value, rel_err: EPS * (30.0 + 2.0 * steps as f64 + ln_value.abs()), method })
}

/// Temme's series for `K_mu(x)`, `K_{mu+1}(x)`; `|mu| <= 1/2`, `x <= 2`.
fn k_temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    use std::f64::consts::PI;
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    let mut i = 1usize;
    loop {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
        i += 1;
        if i > SERIES_CAP {
            return Err(Error::Convergence { what: "K_nu Temme series", iterations: i });
        }
    }
    Ok((sum, sum1 * 2.0 / x))
}

/// Steed's continued fraction CF2; returns `e^x K_mu(x)`, `e^x K_{mu+1}(x)`.
fn k_steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut i = 2usize;
    loop {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
        i += 1;
        if i > CF_CAP {
            return Err(Error::Convergence { what: "K_nu continued fraction", iterations: i });
        }
    }
    h *= a1;
    let kmu = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let kmu1 = kmu * (mu + x + 0.5 - h) / x;
    Ok((kmu, kmu1))
}

/// Hankel expansion of `e^x K_nu(x)`; used for small orders and `x >= 20`.
fn k_hankel_scaled(nu: f64, x: f64) -> f64 {
    let mu4 = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..=SERIES_CAP {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu4 - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < SERIES_TOL * sum.abs() {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * sum
}

/// `I_{nu+1}(x) / I_nu(x)` for `nu > -1`, `x >= 0`, from the Gauss continued fraction.
///
/// Lies in `[0, 1)` for `nu >= -1/2`; for `-1 < nu < -1/2` it tends to 1 from above.
pub fn bessel_i_ratio(nu: f64, x: f64) -> f64 {
    debug_assert!(nu > -1.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    // modified Lentz on the denominator b1 + 1/(b2 + ...), b_j = 2(nu + j)/x; b1 > 0
    const TINY: f64 = 1e-300;
    let mut f = (2.0 * (nu + 1.0) / x).max(TINY);
    let mut c = f;
    let mut d = 0.0;
    for j in 2..=CF_CAP {
        let b = 2.0 * (nu + j as f64) / x;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            return 1.0 / f;
        }
    }
    // CF_CAP iterations cover x up to ~4e4; beyond that fall back to the leading asymptotics
    1.0 - (2.0 * nu + 1.0) / (2.0 * x)
}
