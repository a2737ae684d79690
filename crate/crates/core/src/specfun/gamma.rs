use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// zeta(2), zeta(3), ..., zeta(31).
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 30] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926_0,
    1.000_000_059_608_189_1,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334_0,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
    1.000_000_000_465_662_9,
];

/// B_2m / (2m (2m - 1)) for m = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of the gamma function for positive real arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

/// Unchecked `log_gamma` for hot loops; caller guarantees `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.75 {
        // Gamma(x) = Gamma(1 + x) / x
        let lg1 = if x <= 0.25 { ln_gamma_1p(x) } else { ln_gamma_shifted(1.0 + x) };
        lg1 - x.ln()
    } else if x <= 1.25 {
        ln_gamma_1p(x - 1.0)
    } else if (1.75..=2.25).contains(&x) {
        let t = x - 2.0;
        t.ln_1p() + ln_gamma_1p(t)
    } else if x < 10.0 {
        ln_gamma_shifted(x)
    } else {
        stirling(x)
    }
}

/// ln Gamma(1 + t) for |t| <= 1/4 from the zeta Taylor series.
fn ln_gamma_1p(t: f64) -> f64 {
    let mut acc = 0.0;
    for (j, z) in ZETA.iter().enumerate().rev() {
        let k = (j + 2) as f64;
        let c = if (j + 2) % 2 == 0 { z / k } else { -z / k };
        acc = acc * t + c;
    }
    t * (acc * t - EULER_GAMMA)
}

fn ln_gamma_shifted(x: f64) -> f64 {
    let mut y = x;
    let mut prod = 1.0;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    stirling(y) - prod.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// Taylor coefficients of 1/Gamma(1 + mu) about mu = 0.
#[allow(clippy::excessive_precision)]
const RGAMMA_1P: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_86,
    -0.655_878_071_520_253_88,
    -0.042_002_635_034_095_236,
    0.166_538_611_382_291_49,
    -0.042_197_734_555_544_337,
    -0.009_621_971_527_876_973_6,
    0.007_218_943_246_663_099_5,
    -0.001_165_167_591_859_065_1,
    -0.000_215_241_674_114_950_97,
    0.000_128_050_282_388_116_19,
    -2.013_485_478_078_823_9e-5,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607_1e-7,
    6.116_095_104_481_415_8e-9,
    5.002_007_644_469_222_9e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071_3e-12,
    -3.696_805_618_642_205_7e-12,
    5.100_370_287_454_476_0e-13,
    -2.058_326_053_566_506_8e-14,
    -5.348_122_539_423_018_0e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
];

/// Gamma-function combinations used by Temme's series for K_mu, |mu| <= 1/2.
///
/// Returns `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))` where
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`, both smooth through mu = 0.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mu2 = mu * mu;
    for j in (0..RGAMMA_1P.len()).rev() {
        if j % 2 == 0 {
            even = even * mu2 + RGAMMA_1P[j];
        } else {
            odd = odd * mu2 + RGAMMA_1P[j];
        }
    }
    // 1/Gamma(1+mu) = even + mu*odd, 1/Gamma(1-mu) = even - mu*odd
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, even + mu * odd, even - mu * odd)
}
