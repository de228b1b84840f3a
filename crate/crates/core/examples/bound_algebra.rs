//! Noncontextuality bounds for a single and a sequential stochastic
//! reversibility, and how they grow with the disturbance.

use contextual_heat::contextuality::{b_minus, b_plus, nc_bound_theorem1, nc_bound_theorem2, resonant_bound};

fn main() -> contextual_heat::Result<()> {
    let a_max = 1.0;
    println!("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}", "p1", "p2", "b-", "b+", "lower", "upper");
    for p1 in [0.0, 0.1, 0.5] {
        for p2 in [0.0, 0.1, 0.5] {
            let b = nc_bound_theorem2(a_max, p1, p2)?;
            println!(
                "{p1:>6.2} {p2:>6.2} {:>10.4} {:>10.4} {:>+10.4} {:>+10.4}",
                b_minus(p1, p2),
                b_plus(p1, p2),
                b.lower,
                b.upper
            );
        }
    }

    let single = nc_bound_theorem1(a_max, 0.3, 0.5)?;
    let seq = nc_bound_theorem2(a_max, 0.3, 0.0)?;
    println!("single, alpha = 1/2: [{:+.4}, {:+.4}]", single.lower, single.upper);
    println!("sequential, p2 = 0:  [{:+.4}, {:+.4}]", seq.lower, seq.upper);

    println!("resonant interaction, g = 1, a = 0:");
    for t in [0.05, 0.1, 0.2, 0.4] {
        let b = resonant_bound(a_max, 1.0, 0.0, t)?;
        println!("  t = {t:.2}  [{:+.5}, {:+.5}]", b.lower, b.upper);
    }
    Ok(())
}
