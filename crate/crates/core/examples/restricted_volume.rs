//! Restricting O(2) on projective 3-space to the plane `x3 = 0`.

use okounkov_lab::okounkov::{asymptotic_intersection, restricted_volume};
use okounkov_lab::rational::decimal;
use okounkov_lab::series::{Flag, GradedSeries};

fn main() -> okounkov_lab::error::Result<()> {
    let p3 = GradedSeries::projective(3, 2)?;
    let rep = restricted_volume(&p3, &[2], &Flag::identity(2), 100)?;
    for row in &rep.count_estimates.rows {
        println!("m = {:>3}  {}", row.index[0], decimal(&row.value, 5));
    }
    println!("vol_(X|V) = {}", rep.normalized_target.expect("complete ambient"));

    let plane = p3.restrict(&[2])?;
    let ain = asymptotic_intersection(&plane, &Flag::identity(2), 100)?;
    println!("||L^2 . V|| estimate {}", decimal(ain.last_value().expect("rows"), 5));
    Ok(())
}
