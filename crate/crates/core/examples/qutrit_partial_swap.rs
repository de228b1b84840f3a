//! Two correlated qutrits under a partial swap: numeric crossings
//! against the closed-form critical times.

use contextual_heat::contextuality::{qutrit_critical_times_analytic, CrossingKind};
use contextual_heat::scenario::{builtin_qutrit_demo, Model, Prepared};
use contextual_heat::thermo::{qutrit_xi, qutrit_zeta};

fn main() -> contextual_heat::Result<()> {
    let config = builtin_qutrit_demo();
    let model = Model::new(&config)?;
    let Prepared::Qutrits { params, .. } = model.prepared() else { unreachable!() };
    let (zeta, xi) = (qutrit_zeta(params), qutrit_xi(params));
    println!("zeta = {zeta:+.6}, xi = {xi:+.6}");

    let found = model.critical_times(&config.time_grid)?;
    let (upper, lower) = qutrit_critical_times_analytic(zeta, xi, params.omega_max(), config.interaction.g)?;
    let report = |name, kind, exact: f64| match found.first_of(kind) {
        Some(t) => println!("{name}: grid {t:.10}  closed form {exact:.10}  rel. diff {:.1e}", (t - exact).abs() / exact),
        None => println!("{name}: not found on grid (closed form {exact:.10})"),
    };
    report("upper", CrossingKind::Upper, upper);
    report("lower", CrossingKind::Lower, lower);
    Ok(())
}
