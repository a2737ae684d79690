//! Modified Bessel functions, their ratio, log-gamma and adaptive quadrature.

use phasequant::quad::{integrate, QuadConfig};
use phasequant::specfun::{bessel_i, bessel_i_ratio, bessel_k, log_bessel_i, log_gamma};

fn main() -> phasequant::Result<()> {
    println!("{:>6} {:>8} {:>22} {:>22}  method", "nu", "x", "I_nu(x)", "K_nu(x)");
    for (nu, x) in [(0.0, 1.0), (0.5, 2.0), (1.5, 10.0), (-0.5, 0.3), (3.0, 50.0)] {
        let i = bessel_i(nu, x)?;
        let k = bessel_k(nu, x)?;
        println!("{nu:>6} {x:>8} {:>22.15e} {:>22.15e}  {:?}/{:?}", i.value, k.value, i.method, k.method);
    }

    let big = log_bessel_i(1.0, 2000.0)?;
    println!("\nln I_1(2000) = {:.12} (direct evaluation overflows)", big.ln_value);
    println!("I_2(2)/I_1(2) = {:.12}", bessel_i_ratio(1.0, 2.0));
    println!("ln Gamma(10.5) = {:.15}", log_gamma(10.5)?);

    let q = integrate(|x: f64| (-x * x).exp(), 0.0, 10.0, &QuadConfig::default())?;
    println!("int_0^10 exp(-x^2) dx = {:.15} (sqrt(pi)/2 = {:.15})", q.value, std::f64::consts::PI.sqrt() / 2.0);
    Ok(())
}
