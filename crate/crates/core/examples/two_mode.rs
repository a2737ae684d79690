//! Two-mode realisation: sector decomposition into discrete-series irreps and the Dirac square root.

use phasequant::two_mode::{
    dirac_sqrt_check, irrep_decomposition, sector_casimir_defect, sector_equivalence, sector_table,
    two_mode_commutator_defect,
};

fn main() -> phasequant::Result<()> {
    let m = 8;
    println!("{:>6} {:>5} {:>13} {:>16} {:>11}", "delta", "k", "multiplicity", "states per copy", "defect");
    for row in sector_table(&irrep_decomposition(m)?) {
        println!(
            "{:>6} {:>5} {:>13} {:>16} {:>11.1e}",
            row.delta, row.k, row.multiplicity, row.states_per_copy, row.max_defect
        );
    }
    let (a, b, c) = two_mode_commutator_defect(m)?;
    println!("\ncommutator defects {a:.1e} {b:.1e} {c:.1e}, Casimir {:.1e}", sector_casimir_defect(m)?);
    println!("sector vs irrep matrices {:.1e}", sector_equivalence(m)?);

    let d = dirac_sqrt_check(m)?;
    let ev: Vec<String> = d.eigenvalues.iter().map(|e| format!("{e:.4}")).collect();
    println!("Dirac: B^2 defect {:.1e}, eigenvalues {}", d.defect, ev.join(" "));
    Ok(())
}
