//! Property suites. Each module is a separate group and can be run alone,
//! e.g. `cargo test --test properties closure_idempotence`.

mod common;

use common::props;
use proptest::prelude::*;

fn input() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a".to_string(), "b".to_string()]), 1..=4)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn holds(c: props::Check) -> Result<(), TestCaseError> {
    c.map_err(TestCaseError::fail)
}

mod closure_idempotence {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn idempotent_and_extensive(seed in any::<u64>(), mask in any::<u64>()) {
            holds(props::closure_idempotent(seed, mask))?;
        }

        #[test]
        fn monotone(seed in any::<u64>(), m1 in any::<u64>(), m2 in any::<u64>()) {
            holds(props::closure_monotone(seed, m1, m2))?;
        }
    }
}

mod goto_subset {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn selections_are_subsets(seed in any::<u64>(), mask in any::<u64>()) {
            holds(props::goto_subset(seed, mask))?;
        }

        #[test]
        fn child_sets_are_closed(seed in any::<u64>(), mask in any::<u64>()) {
            holds(props::child_sets_closed(seed, mask))?;
        }
    }
}

mod relation_laws {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn reflexive_transitive(seed in any::<u64>()) {
            holds(props::relation_closure(seed))?;
        }

        #[test]
        fn base_pairs_and_variants(seed in any::<u64>()) {
            holds(props::relation_base(seed))?;
        }
    }
}

mod item_well_formedness {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn reachable_items(seed in any::<u64>(), w in input()) {
            holds(props::items_well_formed(seed, &w))?;
        }

        #[test]
        fn ghi_items_and_spans(seed in any::<u64>(), w in input()) {
            holds(props::ghi_items_well_formed(seed, &w))?;
        }
    }
}

mod trace_replay {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn accepting_traces_replay(seed in any::<u64>(), w in input()) {
            holds(props::traces_replay(seed, &w))?;
        }
    }
}

mod mirror_involution {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn mirroring_twice_is_identity(seed in any::<u64>(), w in input()) {
            holds(props::mirror_involution(seed, &w))?;
        }
    }
}

mod pruning_safety {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn pruning_keeps_verdicts(seed in any::<u64>(), w in input()) {
            holds(props::pruning_safety(seed, &w))?;
        }
    }
}

mod consulted_monotonicity {
    use super::*;

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn grows_along_traces(seed in any::<u64>(), w in input()) {
            holds(props::consulted_monotone(seed, &w))?;
        }
    }
}
