use pfml_core::assembly::*;
use pfml_core::irt::demo_bank;
use pfml_core::{ItemParams, PerformanceLevel};

#[test]
fn trace_never_increases() {
    let bank = demo_bank();
    for seed in 0..3 {
        let mut cfg = AssemblyConfig::new(5, PerformanceLevel::Proficient);
        cfg.seed = seed;
        cfg.budget = 30;
        cfg.cohort_size = 30;
        let (form, trace) = assemble_form(&bank, &cfg).unwrap();
        assert_eq!(trace.len(), 31);
        assert!(trace.windows(2).all(|w| w[1].best_objective <= w[0].best_objective));
        assert_eq!(form.item_indices.len(), 5);
        for (tif, tse) in form.tif_curve.iter().zip(&form.tse_curve) {
            assert!((tse * tif.sqrt() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn rejects_long_forms() {
    let bank: Vec<ItemParams> = demo_bank();
    let cfg = AssemblyConfig::new(21, PerformanceLevel::Basic);
    assert!(assemble_form(&bank, &cfg).is_err());
}
