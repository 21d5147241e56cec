mod common;

use common::*;
use crossnorm::oracle::grid_injective;
use crossnorm::verify::{check_sandwich, compare, equivalence_ratio, ComparisonStatus};
use crossnorm::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Sandwich records never come out violated.
    #[test]
    fn sandwich_is_never_violated(t in tensor(3), seed in any::<u64>()) {
        let tag = match t.x_space().p() {
            p if p.is_two() => CrossnormTag::Hilbertian,
            p => CrossnormTag::EntrywiseP(p),
        };
        let r = check_sandwich(&t, tag, &quick_budget(seed), 1e-9).unwrap();
        prop_assert!(r.verdict != Verdict::Violated, "{r:?}");
    }

    /// A lower bound pushed above a certified upper bound is reported as a violation.
    #[test]
    fn inflated_lower_bounds_are_caught(t in tensor(3), bump in 1e-3..1.0f64) {
        let inj = injective_norm(&t, &quick_budget(1));
        let proj = projective_norm(&t, &quick_budget(1));
        let mut fake = inj.clone();
        fake.direction = Direction::LowerBound;
        fake.value = proj.value + bump;
        let (a, b) = (Side::from_estimate("lo", &fake), Side::from_estimate("hi", &proj));
        prop_assert_eq!(compare(&a, &b, 1e-6).1, ComparisonStatus::Violated);
    }

    /// The grid oracle is nondecreasing in resolution.
    #[test]
    fn grid_refinement_is_monotone(t in tensor(2)) {
        let coarse = grid_injective(&t, 20).unwrap().value;
        let fine = grid_injective(&t, 40).unwrap().value;
        prop_assert!(fine >= coarse - 1e-12, "{coarse} -> {fine}");
    }
}

#[test]
fn ratio_of_a_norm_with_itself_is_one() {
    let b = quick_budget(0);
    for p in [Exponent::ONE, Exponent::Finite(1.5), Exponent::INF] {
        let x = space(2, p);
        for tag in [CrossnormTag::Injective, CrossnormTag::Projective] {
            let r = equivalence_ratio::<f64>(tag, tag, &x, &x, &b).unwrap();
            assert_eq!(r.value, 1.0);
        }
    }
}

#[test]
fn projective_over_injective_on_the_euclidean_plane() {
    let x = l2(2);
    let r = equivalence_ratio::<f64>(
        CrossnormTag::Projective,
        CrossnormTag::Injective,
        &x,
        &x,
        &quick_budget(5),
    )
    .unwrap();
    assert!(
        r.value >= 2.0 - 1e-3 && r.value <= 2.0 + 1e-9,
        "{}",
        r.value
    );
    let Some(Witness::Matrix(f)) = r.witness else {
        panic!("missing witness")
    };
    let s = oracle::singular_values(f.view());
    assert!((s.iter().sum::<f64>() / s[0] - r.value).abs() < 1e-6);
}
