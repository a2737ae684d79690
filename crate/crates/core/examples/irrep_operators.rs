//! Truncated matrices of the discrete-series generators and the phase operators.

use phasequant::irrep::{build_operator, casimir_defect, commutator_defect, IrrepParams, OperatorKind};

fn main() -> phasequant::Result<()> {
    let p = IrrepParams::with_omega(0.75, 0.4)?;
    println!("k = {}, Casimir eigenvalue k(1-k) = {}, label {:?}", p.k(), p.casimir_eigenvalue(), p.group_label());

    for kind in [OperatorKind::Kplus, OperatorKind::CosPhi, OperatorKind::SinPhi] {
        let op = build_operator(kind, p, 5)?;
        println!("\n{} (5x5):", kind.name());
        for r in 0..5 {
            let row: Vec<String> = (0..5)
                .map(|c| {
                    let z = op.entry(r, c);
                    format!("{:>7.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            println!("  {}", row.join("  "));
        }
    }

    for dim in [20, 50, 200] {
        let (a, b, c) = commutator_defect(p, dim)?;
        println!("dim {dim:>3}: commutator defects {a:.1e} {b:.1e} {c:.1e}, Casimir {:.1e}", casimir_defect(p, dim)?);
    }
    Ok(())
}
