//! Globally adaptive 7/15-point Gauss–Kronrod quadrature on finite intervals.
//!
//! Interior nodes only, so integrable endpoint singularities are tolerated;
//! the interval with the largest error estimate is bisected until the total
//! estimate meets the requested tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-11, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One 15-point Kronrod estimate with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let (lo, hi) = (f(center - x), f(center + x));
        f1[j] = lo;
        f2[j] = hi;
        res_k += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round);
    }
    (value, err)
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(domain(format!("integrate needs a finite interval a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_err: 0.0, intervals: 0 });
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    loop {
        if !total.is_finite() {
            return Err(domain("integrand produced a non-finite value"));
        }
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Convergence { what: "adaptive Gauss-Kronrod quadrature", iterations: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at machine resolution; accept what we have
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
    // re-sum to shed drift from the incremental updates
    let value = heap.iter().map(|s| s.value).sum();
    let abs_err = heap.iter().map(|s| s.err).sum();
    Ok(QuadResult { value, abs_err, intervals: heap.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_to_degree_22() {
        for d in 0..=22 {
            let (v, _) = gk15(&|x: f64| x.powi(d), 0.0, 1.0);
            assert!((v - 1.0 / (d as f64 + 1.0)).abs() < 1e-15, "degree {d}");
        }
    }

    #[test]
    fn smooth_and_singular_integrands() {
        let cfg = QuadConfig::default();
        let r = integrate(|x| x.exp(), 0.0, 2.0, &cfg).unwrap();
        assert!((r.value - (2f64.exp() - 1.0)).abs() < 1e-13);
        // integrable endpoint singularity: int_0^1 x^-1/2 = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, &QuadConfig { max_intervals: 5000, ..cfg }).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
        // log singularity: int_0^1 ln x = -1
        let r = integrate(|x| x.ln(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
        assert!(r.abs_err >= (r.value + 1.0).abs());
    }

    #[test]
    fn empty_and_invalid_intervals() {
        let cfg = QuadConfig::default();
        assert_eq!(integrate(|x| x, 1.0, 1.0, &cfg).unwrap().value, 0.0);
        assert!(integrate(|x| x, 1.0, 0.0, &cfg).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &cfg).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadConfig { abs_tol: 0.0, rel_tol: 1e-15, max_intervals: 4 };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }));
    }
}
