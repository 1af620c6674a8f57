mod common;

use common::{check_additivity, check_faces, check_round_trip, ivec, rng};
use divfan::geom::rational::QVec;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

/// 1 to 8 integer points of a common dimension 1..=3.
fn point_sets(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(-3i64..=3, d), 1..=max))
}

fn tail_rays(dim: usize) -> impl Strategy<Value = Vec<QVec>> {
    prop::collection::vec((1i64..=2, prop::collection::vec(-2i64..=2, dim - 1)), 0..=dim).prop_map(|rs| {
        rs.into_iter()
            .map(|(a, rest)| {
                let mut v = vec![a];
                v.extend(rest);
                ivec(&v)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn faces_match_brute_force(points in point_sets(8), subsets in prop::collection::vec(1u32..256, 12)) {
        prop_assert_eq!(check_faces(&points, &subsets), Ok(()));
    }

    #[test]
    fn double_description_round_trips((points, rays) in point_sets(6).prop_flat_map(|p| {
        let d = p[0].len();
        (Just(p), tail_rays(d))
    })) {
        prop_assert_eq!(check_round_trip(&points, &rays), Ok(()));
    }

    #[test]
    fn support_functions_add(seed in any::<u64>(), dim in 1usize..=3) {
        prop_assert_eq!(check_additivity(&mut rng(seed), dim), Ok(()));
    }
}
