//! Search for the smallest disturbance probability that leaves a valid
//! residual channel, and compare it with the analytic value.

use contextual_heat::contextuality::find_minimal_pd;
use contextual_heat::scenario::NamedInteraction;

fn main() -> contextual_heat::Result<()> {
    let (g, a, theta) = (1.0, -0.6, 0.9);
    for kind in NamedInteraction::ALL {
        println!("{kind}");
        for t in [0.2, 0.6, 1.2] {
            let u = kind.unitary(g, a, theta, t)?;
            let (p_min, report) = find_minimal_pd(&u)?;
            println!(
                "  t = {t:.1}  minimal p_d = {p_min:.8}  analytic = {:.8}  residual trace error {:.1e}",
                kind.analytic_pd(g, a, t),
                report.trace_residual
            );
        }
    }
    Ok(())
}
