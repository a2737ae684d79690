//! Eigenstates of the lowering operator: moments, uncertainty, statistics and completeness.

use phasequant::coherent::{
    completeness_check, k3_moments, lowering_residual, photon_distribution, required_dim, trig_expectation,
    uncertainty_check, CoherentSpec,
};
use phasequant::irrep::IrrepParams;
use phasequant::quad::QuadConfig;

fn main() -> phasequant::Result<()> {
    let p = IrrepParams::new(0.5)?;
    println!("{:>6} {:>6} {:>10} {:>10} {:>9} {:>10} {:>10}", "rho", "dim", "<K3>", "<cos>", "Fano", "TV", "K- resid");
    for rho in [0.5, 2.0, 10.0, 50.0, 100.0] {
        let spec = CoherentSpec::from_polar(p, rho, 0.3)?;
        let dim = required_dim(&spec)?;
        let m = k3_moments(&spec)?;
        let trig = trig_expectation(&spec)?;
        let dist = photon_distribution(&spec, dim)?;
        println!(
            "{rho:>6} {dim:>6} {:>10.4} {:>10.6} {:>9.5} {:>10.5} {:>10.2e}",
            m.mean,
            trig.mean_cos,
            dist.fano_factor(),
            dist.total_variation_to_poisson(),
            lowering_residual(&spec, dim)?
        );
    }

    let u = uncertainty_check(&CoherentSpec::from_polar(p, 3.0, 1.0)?)?;
    println!("\nrho=3: (dK1)^2 (dK2)^2 = {:.12}, <K3>^2/4 = {:.12}", u.lhs, u.rhs);

    for n in [0, 1, 5] {
        let c = completeness_check(1.0, n, &QuadConfig::default())?;
        println!("resolution of identity, k=1, <{n}|...|{n}> = {:.12}", c.value);
    }
    Ok(())
}
