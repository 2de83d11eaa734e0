//! The global cone of a two-parameter family and its fibers.

use okounkov_lab::multigraded::{
    compare_fiber, fiber_body, fiber_volume_scan, global_body, multigraded_fujita_check, simplex_grid,
};
use okounkov_lab::rational::{int, ratio};
use okounkov_lab::series::{Flag, GradedSeries, MultiGradedSeries, Rule};

fn main() -> okounkov_lab::error::Result<()> {
    // W_(m1, m2) = complete O(m1 + 2 m2) on the line
    let family = MultiGradedSeries::product(vec![GradedSeries::projective(1, 1)?, GradedSeries::projective(1, 2)?], vec![])?;
    let flag = Flag::identity(1);
    let gb = global_body(&family, &flag, 8)?;
    for a in [[1, 1], [1, 2], [2, 3]] {
        let c = compare_fiber(&gb, &family, &flag, &a, 12)?;
        println!("fiber at {a:?}: {}  equals the induced body: {}", c.fiber, c.equal);
    }
    println!("fiber at (1/2, 1/3): {}", fiber_body(&gb, &[ratio(1, 2), ratio(1, 3)])?);

    let pair = MultiGradedSeries::product(
        vec![GradedSeries::projective(2, 1)?, GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 })?],
        vec![],
    )?;
    let flag = Flag::identity(2);
    let gb = global_body(&pair, &flag, 14)?;
    let scan = fiber_volume_scan(&gb, &simplex_grid(2, &ratio(1, 11), 11))?;
    for p in &scan.points {
        println!("vol at ({}, {}) = {}", p.a[0], p.a[1], p.volume);
    }
    println!("log-concavity and homogeneity hold on the grid: {}", scan.all_hold());

    let check = multigraded_fujita_check(&pair, &flag, &simplex_grid(2, &ratio(1, 4), 4), &ratio(1, 10), 14, 14)?;
    println!("uniform p0 {:?}, pointwise {:?}", check.p0, check.pointwise_p0);
    assert!(check.table.iter().all(|c| c.ratio <= int(1)));
    Ok(())
}
