//! Run the full set of numerical claims and write report.json plus one CSV per claim.
//!
//! `cargo run --release --example reproduce_claims -- [out_dir]`

use phasequant::reproduce::{run, write_report, ReproduceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results".into());
    let report = run(&[], &ReproduceConfig::default());
    for c in &report.claims {
        println!("{} {:>2} {:<15} {:>7.2}s", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.seconds);
        for check in c.failed_checks() {
            println!("       {}: {:e} (required {})", check.label, check.value, check.requirement);
        }
    }
    let files = write_report(&report, std::path::Path::new(&out))?;
    println!("wrote {} files to {out}", files.len());
    Ok(())
}
