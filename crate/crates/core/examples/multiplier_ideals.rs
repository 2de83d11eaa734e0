//! Integral closures and multiplier ideals of monomial ideals.

use okounkov_lab::geometry::ExpVec;
use okounkov_lab::ideals::{integral_closure, multiplier_ideal, MonomialIdeal, NewtonPolyhedron};
use okounkov_lab::rational::ratio;
use okounkov_lab::svg::staircase_svg;

fn ideal(gens: &[&[i64]]) -> MonomialIdeal {
    MonomialIdeal::new(gens[0].len(), gens.iter().map(|g| ExpVec::of(g)).collect()).expect("valid ideal")
}

fn main() -> okounkov_lab::error::Result<()> {
    let a = ideal(&[&[4, 0], &[1, 2], &[0, 5]]);
    println!("a = {a}");
    println!("closure = {}", integral_closure(&a)?);
    for (n, d) in [(1, 2), (1, 1), (3, 2), (2, 1)] {
        println!("J({n}/{d} a) = {}", multiplier_ideal(&a, &ratio(n, d))?);
    }
    let np = NewtonPolyhedron::of_ideal(&a)?;
    println!("Newton polyhedron: {:?}", np.facets());

    let cusp = ideal(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 7]]);
    println!("J({cusp}) = {}", multiplier_ideal(&cusp, &ratio(1, 1))?);
    print!("{}", staircase_svg(&multiplier_ideal(&a, &ratio(2, 1))?, "J(2a)")?);
    Ok(())
}
