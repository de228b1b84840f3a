//! Heat, mutual information and entropy production for a correlated
//! two-qubit state under the resonant interaction.

use contextual_heat::scenario::{builtin_micadei, Model, Prepared};
use contextual_heat::thermo::clausius_report_with;
use contextual_heat::HermitianOp;

fn main() -> contextual_heat::Result<()> {
    let model = Model::new(&builtin_micadei())?;
    let Prepared::Qubits { params, .. } = model.prepared() else { unreachable!() };
    let h_b = HermitianOp::from_real_diag(&[0.0, params.omega_b()]);

    println!("beta_A = {:.4e}, beta_B = {:.4e} (A is the hotter qubit)", params.beta_a, params.beta_b);
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "t [s]", "Q_A", "dI", "(bA-bB)Q_A", "S");
    for k in 0..=10 {
        let t = 2.5e-3 * k as f64 / 10.0;
        let u = model.unitary(t)?;
        let r = clausius_report_with(model.rho(), &u, model.h_a(), &h_b, params.beta_a, params.beta_b)?;
        println!(
            "{t:>10.2e} {:>+12.4e} {:>+12.4e} {:>+12.4e} {:>12.4e}",
            r.q_a,
            r.delta_mutual_info,
            (params.beta_a - params.beta_b) * r.q_a,
            r.entropy_production
        );
        assert!(r.identity_holds());
    }
    Ok(())
}
