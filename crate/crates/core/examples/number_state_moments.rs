//! Phase-operator moments in number states, the ground-state bound and the large-n limit.

use phasequant::number_obs::{correspondence_report, ground_state_moment, k1_lower_bound, k_moments, trig_moments};

fn main() -> phasequant::Result<()> {
    for k in [0.5, 1.0, 2.0] {
        let m = k_moments(k, 3)?;
        let t = trig_moments(k, 3)?;
        println!(
            "k={k}: n=3 var K1 = {}, <cos^2> = {:.6}, <[sin,cos]> = {:.3e}i, ground <cos^2> = {:.6}",
            m.var_k1,
            t.second_moment,
            t.commutator_expect.im,
            ground_state_moment(k)?
        );
    }

    let k1 = k1_lower_bound()?;
    println!("\n<0|cos^2|0> <= 1 requires k >= {k1:.12}");

    let report = correspondence_report(1.0, &[100, 1000, 10000])?;
    for row in &report.rows {
        println!(
            "n={:>6}: <cos^2>-1/2 = {:.3e}, |<[sin,cos]>| = {:.3e}, Casimir residual {:e}",
            row.n, row.second_moment_dev, row.commutator_abs, row.casimir_residual
        );
    }
    println!(
        "log-log slopes: second moment {:.3}, commutator {:.3}",
        report.second_moment_slope.unwrap_or(f64::NAN),
        report.commutator_slope.unwrap_or(f64::NAN)
    );
    Ok(())
}
