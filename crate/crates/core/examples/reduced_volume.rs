//! `mu(V, L)`, `||L^d . V||` and `delta vol_(X|V)` side by side.

use okounkov_lab::ideals::mu_equals_ain_check;
use okounkov_lab::rational::decimal;
use okounkov_lab::series::{Flag, GradedSeries, Rule};

fn main() -> okounkov_lab::error::Result<()> {
    let p3 = GradedSeries::projective(3, 2)?;
    let c = mu_equals_ain_check(&p3, &[2], &Flag::identity(2), 100)?;
    for r in &c.mu.rows {
        let m = &r.index;
        println!(
            "m = {:>3}  mu {}  ain {}  delta vol {}",
            m[0],
            decimal(&r.value, 4),
            decimal(c.ain.value_at(m).expect("same rows"), 4),
            decimal(c.delta_vol.value_at(m).expect("same rows"), 4)
        );
    }

    // an ambient series that is not complete
    let floor57 = GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 })?;
    let c = mu_equals_ain_check(&floor57, &[1], &Flag::identity(1), 70)?;
    println!("floor57 on x2 = 0: mu >= ain on every row: {}", c.mu_dominates);
    Ok(())
}
