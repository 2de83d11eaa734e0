//! Fujita approximation of the floor-5/7 series.
//!
//! `T_{k,p}` is the k-fold sum of `S_p`. Degrees below 7 miss part of the body for good;
//! from `p = 7` on the sums fill `S_{kp}` exactly.

use okounkov_lab::fujita::{fujita_report, tkp, DEFAULT_K_CAP};
use okounkov_lab::rational::{decimal, ratio};
use okounkov_lab::series::{GradedSeries, Rule};

fn main() -> okounkov_lab::error::Result<()> {
    let floor57 = GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 })?;
    println!("#T_(3,2) = {}, #S_6 = {}", tkp(&floor57, 3, 2)?.len(), floor57.count(6)?);

    let rep = fujita_report(&floor57, &ratio(1, 100), 14, DEFAULT_K_CAP)?;
    println!("volume estimate {}  p0 {:?}", rep.volume_estimate, rep.p0);
    for row in &rep.rows {
        println!(
            "p = {:>2}  limit {}  reference {}  qualifies {}  monotone {}",
            row.p,
            decimal(&row.limit_estimate, 4),
            decimal(&row.reference, 4),
            row.qualifies,
            row.monotone
        );
    }
    Ok(())
}
