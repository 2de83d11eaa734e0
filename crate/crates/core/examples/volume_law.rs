//! Counting sections of O(1) on the plane: `2 #S_m / m^2` tends to `2 vol(Δ) = 1`.

use okounkov_lab::okounkov::volume_report;
use okounkov_lab::rational::decimal;
use okounkov_lab::series::{Flag, GradedSeries};

fn main() -> okounkov_lab::error::Result<()> {
    let p2 = GradedSeries::projective(2, 1)?;
    let rep = volume_report(&p2, &Flag::identity(2), 200)?;
    println!("body {}, exact {}", rep.body.body, rep.body.exact);
    for row in &rep.count_estimates.rows {
        println!("m = {:>3}  count estimate {}", row.index[0], decimal(&row.value, 6));
    }
    println!("target {}", rep.normalized_target.expect("complete series have exact bodies"));
    Ok(())
}
