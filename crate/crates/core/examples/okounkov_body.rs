//! Bodies, flags and lattice normalization.
//!
//! The squares series only sees even exponents, so its body `[0, 2]` has twice the
//! volume that the section count suggests; the index of the value group fixes that.

use okounkov_lab::okounkov::{degree_zero_index, okounkov_body, volume_report};
use okounkov_lab::series::{Flag, GradedSeries};
use okounkov_lab::spec::parse_spec_str;
use okounkov_lab::svg::polytope_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let squares = parse_spec_str(include_str!("specs/squares.toml"))?;
    let sq = squares.single().expect("single series");
    let rep = volume_report(sq, &Flag::identity(1), 60)?;
    println!(
        "squares: body {}, delta_lat {}, normalized volume {}",
        rep.body.body,
        rep.delta_lat.expect("finite index"),
        rep.normalized_target.expect("exact body")
    );

    // the same polygon through two different coordinate flags
    let trapezoid = parse_spec_str(include_str!("specs/trapezoid.toml"))?;
    let t = trapezoid.single().expect("single series");
    for flag in [Flag::identity(2), trapezoid.flag.clone()] {
        let b = okounkov_body(t, &flag, 12)?;
        println!("flag {:?}: {}, volume {}", flag.permutation(), b.body, b.body.volume());
        assert_eq!(degree_zero_index(&b.lattice), Some(1.into()));
    }

    let p2 = GradedSeries::projective(2, 3)?;
    let b = okounkov_body(&p2, &Flag::identity(2), 6)?;
    print!("{}", polytope_svg(&b.body, "3 x simplex")?);
    Ok(())
}
