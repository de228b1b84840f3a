//! Reproduce the critical time of the NMR heat-flow experiment.
//!
//! Run with `cargo run --example micadei_critical_time`.

use contextual_heat::scenario::{builtin_micadei, run_sweep};

fn main() -> contextual_heat::Result<()> {
    let config = builtin_micadei();
    let out = run_sweep(&config)?;
    let tau = out.critical_times.first().copied();

    println!("grid: {} points over [0, {:e}] s", out.records.len(), config.time_grid.t_max);
    match tau {
        Some(t) => println!("heat leaves the violating region at tau_c = {t:.6e} s"),
        None => println!("no violation on this grid"),
    }
    for c in &out.crossings.crossings {
        println!("  {:?} crossing at {:.6e} s (entering violation: {})", c.kind, c.t, c.entering_violation);
    }
    // a few records around the crossing
    if let Some(t) = tau {
        let k = out.records.partition_point(|r| r.t < t);
        for r in &out.records[k.saturating_sub(2)..(k + 2).min(out.records.len())] {
            println!(
                "  t = {:.6e}  Q_A = {:+.4e}  bound = [{:+.4e}, {:+.4e}]  violates = {}",
                r.t, r.heat, r.bound_lower, r.bound_upper, r.violates
            );
        }
    }
    println!("trace cross-check: {} samples, max deviation {:.2e}", out.cross_check.samples, out.cross_check.max_deviation);
    Ok(())
}
