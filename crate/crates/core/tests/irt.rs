use pfml_core::irt::*;
use proptest::prelude::*;

fn item() -> impl Strategy<Value = ItemParams> {
    (0.01..2.0f64, -4.0..4.0f64, 0.0..0.99f64).prop_map(|(a, b, c)| ItemParams::new(a, b, c).unwrap())
}

proptest! {
    #[test]
    fn probability_between_guessing_and_one(it in item(), theta in -4.0..4.0f64) {
        let p = icc_probability(&it, theta);
        prop_assert!(p >= it.c() && p <= 1.0);
    }

    #[test]
    fn probability_increases_with_ability(it in item(), t1 in -4.0..4.0f64, t2 in -4.0..4.0f64) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(icc_probability(&it, lo) <= icc_probability(&it, hi));
    }

    #[test]
    fn standard_error_times_root_information(items in prop::collection::vec(item(), 1..30), theta in -4.0..4.0f64) {
        let tif = test_information(&items, theta).unwrap();
        prop_assume!(tif > 1e-300);
        let tse = test_standard_error(&items, theta).unwrap();
        prop_assert!((tse * tif.sqrt() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn information_is_additive(items in prop::collection::vec(item(), 1..10), theta in -4.0..4.0f64) {
        let sum: f64 = items.iter().map(|i| item_information(i, theta).unwrap()).sum();
        prop_assert!((test_information(&items, theta).unwrap() - sum).abs() <= 1e-12 * sum.max(1.0));
    }

    #[test]
    fn level_matches_band(theta in -4.0..4.0f64) {
        let level = performance_level(theta);
        let (lo, hi) = level.theta_band();
        prop_assert!(theta >= lo && theta < hi || (hi == 4.0 && theta <= hi));
    }
}

#[test]
fn information_peaks_near_difficulty_for_zero_guessing() {
    let it = ItemParams::new(1.3, 0.7, 0.0).unwrap();
    let grid: Vec<f64> = (0..=800).map(|i| -4.0 + i as f64 * 0.01).collect();
    let peak = grid
        .iter()
        .copied()
        .max_by(|x, y| item_information(&it, *x).unwrap().total_cmp(&item_information(&it, *y).unwrap()))
        .unwrap();
    assert!((peak - 0.7).abs() < 0.011);
}

#[test]
fn demo_bank_has_twenty_valid_items() {
    let bank = demo_bank();
    assert_eq!(bank.len(), 20);
    assert_eq!(icc_probability(&bank[11], 0.0), 0.75);
}
