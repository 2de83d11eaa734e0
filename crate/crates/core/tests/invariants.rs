//! Property tests for the structural invariants of each layer.

mod common;

use common::*;
use num_traits::Zero;
use okounkov_lab::fujita::tkp;
use okounkov_lab::geometry::{cone_from_generators, lattice_summary, minkowski_sum, ExpVec, Polytope};
use okounkov_lab::ideals::{asymptotic_multiplier_ideal, base_ideal, integral_closure, multiplier_ideal, MonomialIdeal};
use okounkov_lab::okounkov::{check_fujita_identity, okounkov_body, volume_estimate};
use okounkov_lab::series::{Flag, GradedSeries, MultiGradedSeries, Rule};
use proptest::prelude::*;

fn points(d: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec((0i64..=6, 1i64..=2).prop_map(|(n, k)| qr(n, k)), d), d + 1..=7)
}

fn full_hull(d: usize) -> impl Strategy<Value = Polytope> {
    points(d).prop_filter_map("lower dimensional", |pts| Polytope::hull(&pts).ok().filter(|p| p.is_full_dimensional()))
}

/// Generated series in two variables, always containing a degree one generator.
fn generated() -> impl Strategy<Value = GradedSeries> {
    let gen = (prop::collection::vec(0i64..=3, 2), 1u32..=3);
    (prop::collection::vec(0i64..=1, 2), prop::collection::vec(gen, 0..=3)).prop_map(|(first, rest)| {
        let mut gens = vec![(ExpVec::of(&first), 1)];
        gens.extend(rest.into_iter().map(|(g, d)| (ExpVec::of(&g), d)));
        GradedSeries::generated(2, gens).unwrap()
    })
}

fn floor_rule() -> impl Strategy<Value = GradedSeries> {
    (1u32..=6, 2u32..=8, 0usize..=1)
        .prop_filter("proper ratio", |(n, d, _)| n < d)
        .prop_map(|(num, den, coord)| GradedSeries::rule(2, Rule::FloorRatio { num, den, coord, bound: 1 }).unwrap())
}

fn ideal() -> impl Strategy<Value = MonomialIdeal> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0i64..=5, n), 1..=4)
            .prop_map(move |g| MonomialIdeal::new(n, g.iter().map(|v| ExpVec::of(v)).collect()).unwrap())
    })
}

fn coefficient() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn volume_scales_with_dimension_power(p in (2usize..=3).prop_flat_map(full_hull), k in coefficient()) {
        let d = p.dim() as i32;
        prop_assert_eq!(p.scale(&k).volume(), p.volume() * num_traits::pow(k, d as usize));
    }

    #[test]
    fn minkowski_sum_is_commutative_and_associative(a in full_hull(2), b in full_hull(2), c in full_hull(2)) {
        let ab = a.minkowski_sum(&b).unwrap();
        prop_assert_eq!(&ab, &b.minkowski_sum(&a).unwrap());
        prop_assert_eq!(ab.minkowski_sum(&c).unwrap(), a.minkowski_sum(&b.minkowski_sum(&c).unwrap()).unwrap());
    }

    #[test]
    fn point_minkowski_sum_is_commutative(a in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..=5),
                                          b in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..=5)) {
        use okounkov_lab::geometry::PointSet;
        let a = PointSet::from_vec(2, a.iter().map(|v| ExpVec::of(v)).collect()).unwrap();
        let b = PointSet::from_vec(2, b.iter().map(|v| ExpVec::of(v)).collect()).unwrap();
        let ab = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(&ab, &minkowski_sum(&b, &a).unwrap());
        for x in a.iter() {
            for y in b.iter() {
                prop_assert!(ab.contains(&x.add(y)));
            }
        }
    }

    #[test]
    fn lattice_index_is_unimodular_invariant(vs in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 1..=5),
                                             t in -3i64..=3, s in -3i64..=3) {
        // (1 t; 0 1)(1 0; s 1) has determinant one
        let u = [[1 + t * s, t], [s, 1]];
        let moved: Vec<Vec<i64>> = vs.iter().map(|v| vec![u[0][0] * v[0] + u[0][1] * v[1], u[1][0] * v[0] + u[1][1] * v[1]]).collect();
        let a = lattice_summary(&vs, 2);
        let b = lattice_summary(&moved, 2);
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.index, b.index);
    }

    #[test]
    fn cone_fibers_are_homogeneous(gens in prop::collection::vec(prop::collection::vec(0i64..=4, 3), 3..=6),
                                   a in 1i64..=4, lambda in coefficient()) {
        let cone = cone_from_generators(&gens);
        prop_assume!(cone.is_ok());
        let cone = cone.unwrap();
        let base = cone.fiber(&[q(a)]);
        prop_assume!(base.is_ok());
        let scaled = cone.fiber(&[q(a) * &lambda]).unwrap();
        prop_assert_eq!(scaled, base.unwrap().scale(&lambda));
    }

    #[test]
    fn series_are_multiplicative(s in prop_oneof![generated(), floor_rule()]) {
        prop_assert!(s.audit_multiplicativity(8).is_ok());
    }

    #[test]
    fn valuation_preserves_counts(s in prop_oneof![generated(), floor_rule()], swap in any::<bool>(), m in 1u32..=8) {
        let flag = if swap { Flag::with_permutation(2, vec![2, 1]).unwrap() } else { Flag::identity(2) };
        prop_assert_eq!(s.gamma(m, &flag).unwrap().len(), s.count(m).unwrap());
    }

    #[test]
    fn restriction_commutes_with_sums(a in generated(), b in generated(), j in 0usize..=1) {
        let lhs = a.sum(&b).unwrap().restrict(&[j]).unwrap();
        let rhs = a.restrict(&[j]).unwrap().sum(&b.restrict(&[j]).unwrap()).unwrap();
        for m in 1..=6 {
            prop_assert_eq!(lhs.degree(m).unwrap(), rhs.degree(m).unwrap(), "degree {}", m);
        }
    }

    #[test]
    fn veronese_divides_the_exponent(s in prop_oneof![generated(), floor_rule()], h in 1u32..=4) {
        let e = s.exponent(12).unwrap();
        let v = s.veronese(h).unwrap();
        prop_assert_eq!(v.exponent(12).unwrap(), e / num_integer::gcd(e, h));
        for m in 1..=4 {
            prop_assert_eq!(v.degree(m).unwrap(), s.degree(h * m).unwrap());
        }
    }

    #[test]
    fn veronese_keeps_the_map_degree(s in generated(), h in 1u32..=3) {
        let a = s.gf_report(12).unwrap();
        let b = s.veronese(h).unwrap().gf_report(12).unwrap();
        prop_assert_eq!(a.is_gf, b.is_gf);
        if a.is_gf {
            prop_assert_eq!(a.delta, b.delta);
        }
    }

    #[test]
    fn inner_bodies_grow_with_m(s in floor_rule(), m in 2u32..=10) {
        let flag = Flag::identity(2);
        let small = okounkov_body(&s, &flag, m).unwrap().body;
        let large = okounkov_body(&s, &flag, 2 * m).unwrap().body;
        prop_assert!(large.contains_polytope(&small));
    }

    #[test]
    fn fujita_identity_is_exact_for_generated_series(s in generated()) {
        prop_assume!(s.gf_report(12).unwrap().is_gf);
        let id = check_fujita_identity(&s, &Flag::identity(2), 12).unwrap();
        prop_assert!(id.delta_agrees);
        prop_assert_eq!(id.last_residual(), Q::zero());
    }

    #[test]
    fn positive_volume_iff_generically_finite(s in generated()) {
        let v = volume_estimate(&s, &Flag::identity(2), 12).unwrap();
        prop_assert_eq!(v > Q::zero(), s.gf_report(12).unwrap().is_gf);
    }

    #[test]
    fn truncations_sit_inside_the_series(s in prop_oneof![generated(), floor_rule()], k in 1u32..=4, l in 1u32..=3, p in 1u32..=4) {
        prop_assume!(s.is_nonempty(p).unwrap());
        let tk = tkp(&s, k, p).unwrap();
        let tl = tkp(&s, l, p).unwrap();
        let tkl = tkp(&s, k + l, p).unwrap();
        prop_assert!(tk.is_subset(&s.degree(k * p).unwrap()));
        prop_assert!(minkowski_sum(&tk, &tl).unwrap().is_subset(&tkl));
    }

    #[test]
    fn subseries_sit_inside(p in 1u32..=3, m in prop::collection::vec(0u32..=3, 2)) {
        let f = GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 }).unwrap();
        let w = MultiGradedSeries::product(vec![GradedSeries::projective(2, 1).unwrap(), f], Vec::new()).unwrap();
        let sub = w.subseries(p).unwrap();
        prop_assert!(sub.degree(&m).unwrap().is_subset(&w.degree(&m).unwrap()));
    }

    #[test]
    fn base_ideals_lie_in_multiplier_ideals(s in prop_oneof![generated(), floor_rule()], p in 1u32..=4) {
        prop_assume!(s.is_nonempty(p).unwrap());
        let b = base_ideal(&s, p).unwrap();
        let j = asymptotic_multiplier_ideal(&s, p, 4).unwrap().ideal;
        prop_assert!(b.sheaf_subset(&j));
    }

    #[test]
    fn base_ideals_multiply(s in prop_oneof![generated(), floor_rule()], k in 1u32..=3, l in 1u32..=3) {
        prop_assume!(s.is_nonempty(k).unwrap() && s.is_nonempty(l).unwrap());
        let prod = base_ideal(&s, k).unwrap().product(&base_ideal(&s, l).unwrap());
        prop_assert!(prod.is_subset(&base_ideal(&s, k + l).unwrap()));
    }

    #[test]
    fn closure_is_idempotent(i in ideal()) {
        let c = integral_closure(&i).unwrap();
        prop_assert!(i.is_subset(&c));
        prop_assert_eq!(integral_closure(&c).unwrap(), c);
    }

    #[test]
    fn multiplier_ideals_shrink_as_c_grows(i in ideal(), c in coefficient(), step in coefficient()) {
        let small = multiplier_ideal(&i, &c).unwrap();
        let large = multiplier_ideal(&i, &(&c + &step)).unwrap();
        prop_assert!(large.is_subset(&small));
    }

    #[test]
    fn multiplier_ideals_are_integrally_closed(i in ideal(), c in coefficient()) {
        let j = multiplier_ideal(&i, &c).unwrap();
        prop_assert_eq!(integral_closure(&j).unwrap(), j);
    }
}
