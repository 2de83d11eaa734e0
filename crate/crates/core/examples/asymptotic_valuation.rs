//! Asymptotic order of vanishing along toric valuations.

use okounkov_lab::geometry::ExpVec;
use okounkov_lab::ideals::{asymptotic_order, valuation_checks, MonomialValuation};
use okounkov_lab::series::GradedSeries;

fn main() -> okounkov_lab::error::Result<()> {
    let squares = GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[2]), 1)])?;
    let fixed = GradedSeries::generated(1, vec![(ExpVec::of(&[1]), 1)])?.with_bound(2)?;
    for w in [vec![1, 0], vec![0, 1]] {
        let v = MonomialValuation::new(w.clone())?;
        for (name, s) in [("squares", &squares), ("x0 x1", &fixed)] {
            let order = asymptotic_order(s, &v, 20)?;
            let c = valuation_checks(s, &v, 20)?;
            println!(
                "{name} along {w:?}: v(||D||) = {}, bounded {}, sup ratio {} (slack {})",
                order.infimum, c.v_bounded_ok, c.sup_ratio, c.slack
            );
        }
    }
    Ok(())
}
