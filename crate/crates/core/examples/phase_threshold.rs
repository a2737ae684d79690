//! The ratio g/I_{2k-1} and the smallest Bargmann index for which it stays below 2.

use phasequant::coherent::{g_function, g_ratio, GMethod};
use phasequant::spectral::{ratio_supremum, threshold_scan, RhoGrid, ScanConfig};

fn main() -> phasequant::Result<()> {
    for rho in [0.5, 2.0, 10.0] {
        let s = g_function(1.0, rho, GMethod::Series)?;
        let i = g_function(1.0, rho, GMethod::Integral)?;
        println!("k=1 rho={rho:>4}: g series {s:.12e}, integral {i:.12e}");
    }
    println!("k=1 rho=50: g/I = {:.8} vs 2(1 - 1/(4 rho)) = {:.8}", g_ratio(1.0, 50.0)?, 2.0 * (1.0 - 1.0 / 200.0));

    let grid = RhoGrid::default();
    for k in [0.25, 0.3, 0.32, 0.5] {
        let s = ratio_supremum(k, &grid)?;
        println!("k={k}: sup g/I = {:.6} at rho = {:.3}", s.sup, s.at_rho);
    }

    let scan = threshold_scan(0.2, 0.5, 1e-4, &ScanConfig::default())?;
    let (lo, hi) = scan.threshold_bracket;
    println!("threshold in [{lo:.6}, {hi:.6}] after {} evaluations", scan.k_grid.len());
    Ok(())
}
