//! Spectrum of the truncated phase-cosine matrix and its improper eigenvectors.

use phasequant::irrep::IrrepParams;
use phasequant::spectral::{cos_spectrum, improper_eigenvector};

fn main() -> phasequant::Result<()> {
    for k in [0.25, 0.5, 1.0, 3.0] {
        let p = IrrepParams::new(k)?;
        let tops: Vec<String> = [250, 500, 1000, 2000]
            .iter()
            .map(|&d| cos_spectrum(p, d).map(|s| format!("{:.9}", s.max())))
            .collect::<phasequant::Result<_>>()?;
        println!("k={k:<5} largest eigenvalue at dim 250/500/1000/2000: {}", tops.join(" "));
    }

    for (mu, n_max) in [(0.5, 200), (1.5, 800)] {
        let v = improper_eigenvector(1.0, mu, 1.0, n_max)?;
        let tail: Vec<String> = v.coeffs.iter().rev().take(3).map(|a| format!("{a:.3e}")).collect();
        println!(
            "mu={mu}: {} coefficients, overflow at {:?}, residual {:.1e}, last {}",
            v.coeffs.len(),
            v.overflow_at,
            v.max_residual,
            tail.join(" ")
        );
    }
    Ok(())
}
