mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cooking_traces(inst in 0usize..512, picks in prop::collection::vec(any::<u32>(), 1..30)) {
        prop_assert_eq!(check_trace("cooking", inst, &picks), Ok(()));
    }

    #[test]
    fn box_traces(inst in 0usize..512, picks in prop::collection::vec(any::<u32>(), 1..30)) {
        prop_assert_eq!(check_trace("box", inst, &picks), Ok(()));
    }
}
