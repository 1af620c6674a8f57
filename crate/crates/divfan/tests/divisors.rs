mod common;

use common::{check_convexity, check_coherence_under_intersection, check_localization, envelope_family, line_base, rng};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn evaluation_is_superadditive(seed in any::<u64>(), dim in 1usize..=2) {
        prop_assert_eq!(check_convexity(&mut rng(seed), dim), Ok(()));
    }
}

proptest! {
    #![proptest_config(config(160))]

    /// Instances without an effective zero set are rejected, not counted.
    #[test]
    fn localization_matches_shifted_evaluation(seed in any::<u64>(), dim in 1usize..=2) {
        let checked = check_localization(&mut rng(seed), dim);
        prop_assert!(checked.is_ok(), "{:?}", checked);
        prop_assume!(checked == Ok(true));
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn coherence_survives_intersection(seed in any::<u64>(), dim in 1usize..=2, cells in 3usize..=4) {
        let family = envelope_family(&mut rng(seed), &line_base(3), dim, cells);
        prop_assert_eq!(check_coherence_under_intersection(&family), Ok(()));
    }
}
