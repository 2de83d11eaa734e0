//! Property (★): one twist `N` with `J(||pD||)(-N) ⊆ b(|pD|)` for every `p`.

use okounkov_lab::geometry::ExpVec;
use okounkov_lab::ideals::{base_ideal, check_star, is_finitely_generated, star_sum_check, DEFAULT_M_CHECK};
use okounkov_lab::series::{GradedSeries, Rule};

fn main() -> okounkov_lab::error::Result<()> {
    let squares = GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[2]), 1)])?.named("squares");
    let staggered = GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[3]), 2)])?.named("staggered");
    let floor57 = GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 })?.named("floor57");

    for s in [&squares, &staggered, &floor57] {
        let r = check_star(s, 14)?;
        let fg = is_finitely_generated(s, 14, DEFAULT_M_CHECK)?;
        let w = r.witness.map_or("none".to_string(), |w| w.to_string());
        println!("{}: witness {w}, stabilized {}, generated from degree {:?}", s.name(), r.stabilized, fg);
        for (p, n) in r.per_p_shifts.iter().take(4) {
            println!("    p = {p}: b_p = {}, shift {n}", base_ideal(s, *p)?);
        }
    }
    let sum = star_sum_check(&squares, &staggered, 10)?;
    println!("sum witness {} <= {} + {}: {}", sum.sum_witness, sum.witnesses[0], sum.witnesses[1], sum.holds);
    Ok(())
}
