//! Choi spectra of the residual channels left after removing the
//! stochastically reversible part of a few interaction unitaries.

use std::f64::consts::PI;

use contextual_heat::scenario::NamedInteraction;
use contextual_heat::contextuality::extract_stochastic_reversibility;

fn main() -> contextual_heat::Result<()> {
    let (g, a, t) = (1.0, 0.4, 0.7);
    for theta in [0.0, PI / 4.0, PI / 2.0] {
        for kind in NamedInteraction::ALL {
            let u = kind.unitary(g, a, theta, t)?;
            let p_d = kind.analytic_pd(g, a, t);
            let r = extract_stochastic_reversibility(&u, p_d)?;
            let top: Vec<String> = r.choi_eigenvalues.iter().rev().take(3).map(|v| format!("{v:.6}")).collect();
            println!(
                "theta = {theta:.3}  {kind:<20} p_d = {p_d:.6}  cptp = {}  largest eigenvalues [{}]  smallest {:.1e}",
                r.is_cptp,
                top.join(", "),
                r.choi_eigenvalues[0]
            );
        }
    }
    Ok(())
}
