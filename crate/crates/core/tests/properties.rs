use lowdisp_core::{
    dispersion, is_empty, largest_empty_box, naive_oracle, Coord, Dyadic, Point, PointSet, Rat,
    SearchConfig,
};
use proptest::prelude::*;

fn dyadic() -> impl Strategy<Value = Coord> {
    (1u32..=5).prop_flat_map(|e| {
        (1u64..(1 << e)).prop_map(move |a| Coord::Dyadic(Dyadic::normalize(a, e).unwrap()))
    })
}

fn rational() -> impl Strategy<Value = Coord> {
    (2i64..=12).prop_flat_map(|q| (1i64..q).prop_map(move |p| Coord::Rational(Rat::ratio(p, q))))
}

fn point_set(d: usize, max_n: usize) -> impl Strategy<Value = PointSet> {
    let coord = prop_oneof![3 => dyadic(), 1 => rational()];
    prop::collection::vec(prop::collection::vec(coord, d), 0..=max_n).prop_map(move |pts| {
        PointSet::new(d, pts.into_iter().map(Point::new).collect(), "prop").unwrap()
    })
}

fn any_set() -> impl Strategy<Value = PointSet> {
    prop_oneof![point_set(1, 12), point_set(2, 14), point_set(3, 7)]
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_matches_oracle(ps in any_set()) {
        prop_assert_eq!(dispersion(&ps, &cfg()).unwrap(), naive_oracle(&ps));
    }

    #[test]
    fn witness_is_empty_and_attains_volume(ps in any_set()) {
        let r = largest_empty_box(&ps, &cfg()).unwrap();
        prop_assert!(is_empty(&r.witness, &ps).unwrap());
        prop_assert_eq!(r.witness.volume(), r.volume);
    }

    #[test]
    fn adding_a_point_never_increases_dispersion(ps in point_set(2, 10), extra in prop::collection::vec(dyadic(), 2)) {
        let before = dispersion(&ps, &cfg()).unwrap();
        let after = dispersion(&ps.with_point(Point::new(extra)).unwrap(), &cfg()).unwrap();
        prop_assert!(after <= before);
    }

    #[test]
    fn reflection_preserves_dispersion(ps in any_set()) {
        let reflected = PointSet::new(ps.dim(), ps.points().iter().map(Point::reflect).collect(), "r").unwrap();
        prop_assert_eq!(dispersion(&reflected, &cfg()).unwrap(), dispersion(&ps, &cfg()).unwrap());
    }

    #[test]
    fn pruning_and_slicing_do_not_change_the_answer(ps in point_set(2, 12), slices in 1usize..5) {
        let base = largest_empty_box(&ps, &cfg()).unwrap();
        let plain = largest_empty_box(&ps, &SearchConfig { prune: false, ..cfg() }).unwrap();
        let sliced = largest_empty_box(&ps, &cfg().with_threads(slices)).unwrap();
        prop_assert_eq!(&plain.volume, &base.volume);
        prop_assert_eq!(&plain.witness, &base.witness);
        prop_assert_eq!(&sliced.witness, &base.witness);
    }

    #[test]
    fn text_format_round_trips(ps in any_set()) {
        let back = PointSet::read_text(ps.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back.points(), ps.points());
        prop_assert_eq!(back.dim(), ps.dim());
    }
}
