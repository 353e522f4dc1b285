//! Synthetic ground-truth cohorts: an item bank, student abilities and a
//! two-form response matrix linked by a block of common items.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::assembly::simulate_responses;
use crate::error::{Error, Result};
use crate::estimation::{Response, ResponseMatrix};
use crate::fuzzy::FuzzySystem;
use crate::irt::{p3pl, Ability, ItemParams, B_RANGE, THETA_RANGE};
use crate::pfml::{TrainingRow, TrainingSet};
use crate::seeded_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    pub n_students: usize,
    pub n_items: usize,
    pub items_per_form: usize,
    pub common_items: usize,
    /// Uniform range for discrimination.
    pub a_range: (f64, f64),
    /// Normal `(mean, sd)` for difficulty, clamped to the valid range.
    pub b_normal: (f64, f64),
    /// Uniform range for guessing.
    pub c_range: (f64, f64),
    /// Normal `(mean, sd)` for ability, clamped to the valid range.
    pub theta_normal: (f64, f64),
    pub seed: u64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            n_students: 732,
            n_items: 51,
            items_per_form: 28,
            common_items: 5,
            a_range: (0.5, 1.6),
            b_normal: (0.0, 1.0),
            c_range: (0.15, 0.35),
            theta_normal: (0.0, 1.0),
            seed: 0,
        }
    }
}

impl CohortSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.common_items > self.items_per_form
            || 2 * self.items_per_form != self.n_items + self.common_items
        {
            return bad("2 * items_per_form - common_items must equal n_items");
        }
        if self.items_per_form == 0 || self.n_students < 2 {
            return bad("cohort needs at least one item per form and two students");
        }
        let (alo, ahi) = self.a_range;
        let (clo, chi) = self.c_range;
        if !(0.0 <= alo && alo <= ahi && ahi <= 2.0) || !(0.0 <= clo && clo <= chi && chi < 1.0) {
            return bad("item parameter ranges fall outside the model's ranges");
        }
        if !(self.b_normal.1 > 0.0 && self.theta_normal.1 > 0.0) {
            return bad("standard deviations must be positive");
        }
        Ok(())
    }

    /// Bank indices of form A and form B; the last `common_items` of A are
    /// the first of B.
    pub fn forms(&self) -> (core::ops::Range<usize>, core::ops::Range<usize>) {
        let b_start = self.items_per_form - self.common_items;
        (0..self.items_per_form, b_start..self.n_items)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub items: Vec<ItemParams>,
    pub abilities: Vec<Ability>,
    pub responses: ResponseMatrix,
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn clamped_normal<R: Rng + ?Sized>(rng: &mut R, (mean, sd): (f64, f64), (lo, hi): (f64, f64)) -> Result<f64> {
    let dist = Normal::new(mean, sd).map_err(|_| Error::InvalidConfig("invalid normal distribution".into()))?;
    Ok(dist.sample(rng).clamp(lo, hi))
}

/// The first half of the students (rounded up) take form A, the rest form
/// B; cells outside a student's form are missing.
pub fn generate_cohort(spec: &CohortSpec) -> Result<Cohort> {
    spec.validate()?;
    let mut rng = seeded_rng(spec.seed);
    let mut items = Vec::with_capacity(spec.n_items);
    for _ in 0..spec.n_items {
        let a = uniform(&mut rng, spec.a_range);
        let b = clamped_normal(&mut rng, spec.b_normal, B_RANGE)?;
        let c = uniform(&mut rng, spec.c_range);
        items.push(ItemParams::new(a, b, c)?);
    }
    let mut abilities = Vec::with_capacity(spec.n_students);
    for _ in 0..spec.n_students {
        abilities.push(Ability::new(clamped_normal(&mut rng, spec.theta_normal, THETA_RANGE)?)?);
    }
    let half = spec.n_students.div_ceil(2);
    let (form_a, form_b) = spec.forms();
    let mut cells = alloc::vec![Response::Missing; spec.n_students * spec.n_items];
    for (students, form) in [(0..half, form_a), (half..spec.n_students, form_b)] {
        let block = simulate_responses(&items[form.clone()], &abilities[students.clone()], &mut rng)?;
        for (row, s) in students.enumerate() {
            let dest = &mut cells[s * spec.n_items..(s + 1) * spec.n_items];
            dest[form.clone()].copy_from_slice(block.row(row));
        }
    }
    Ok(Cohort {
        responses: ResponseMatrix::from_rows(spec.n_items, cells)?,
        items,
        abilities,
    })
}

#[derive(Debug, Clone, Copy)]
pub enum TrainingMode<'a> {
    /// Every combination of the input terms' begin-core values.
    Grid(&'a FuzzySystem),
    /// `rows` uniformly drawn `(item, student)` pairs.
    Sampled { rows: usize, seed: u64 },
}

/// Training rows `(a, b, c, θ)` whose desired output is the 3PL
/// probability.
pub fn generate_training_set(items: &[ItemParams], abilities: &[Ability], mode: TrainingMode<'_>) -> Result<TrainingSet> {
    let rows = match mode {
        TrainingMode::Grid(kb) => grid_rows(kb)?,
        TrainingMode::Sampled { rows, seed } => {
            if items.is_empty() || abilities.is_empty() {
                return Err(Error::EmptyItems);
            }
            let mut rng = seeded_rng(seed);
            (0..rows)
                .map(|_| {
                    let item = items[rng.random_range(0..items.len())];
                    let theta = abilities[rng.random_range(0..abilities.len())];
                    row(&item, theta)
                })
                .collect()
        }
    };
    if rows.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    TrainingSet::new(rows)
}

/// Row for one observed `(item, student)` cell.
pub fn row(item: &ItemParams, theta: Ability) -> TrainingRow {
    TrainingRow {
        inputs: [item.a(), item.b(), item.c(), theta.get()],
        desired: item.probability(theta.get()),
    }
}

fn grid_rows(kb: &FuzzySystem) -> Result<Vec<TrainingRow>> {
    let anchors: Vec<Vec<f64>> = kb
        .inputs()
        .map(|v| v.terms.iter().map(|t| t.shape.begin_core()).collect())
        .collect();
    if anchors.len() != 4 {
        return Err(Error::InvalidFuzzy(alloc::format!(
            "grid training needs 4 inputs, found {}",
            anchors.len()
        )));
    }
    let mut rows = Vec::new();
    for &a in &anchors[0] {
        for &b in &anchors[1] {
            for &c in &anchors[2] {
                for &t in &anchors[3] {
                    rows.push(TrainingRow {
                        inputs: [a, b, c, t],
                        desired: p3pl(a, b, c, t),
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::default_assessment_kb;

    #[test]
    fn default_layout() {
        let cohort = generate_cohort(&CohortSpec::default()).unwrap();
        let m = &cohort.responses;
        assert_eq!((m.n_students(), m.n_items()), (732, 51));
        assert_eq!(m.observed_count(), 732 * 28);
        for s in 0..732 {
            let row = m.row(s);
            assert_eq!(row.iter().filter(|r| r.is_observed()).count(), 28);
            let seen = if s < 366 { 0..28 } else { 23..51 };
            for (i, r) in row.iter().enumerate() {
                assert_eq!(r.is_observed(), seen.contains(&i));
            }
        }
    }

    #[test]
    fn ground_truth_in_range() {
        let spec = CohortSpec::default();
        let cohort = generate_cohort(&spec).unwrap();
        for it in &cohort.items {
            assert!((0.5..=1.6).contains(&it.a()));
            assert!((0.15..=0.35).contains(&it.c()));
            assert!((-4.0..=4.0).contains(&it.b()));
        }
    }

    #[test]
    fn reproducible() {
        let spec = CohortSpec { seed: 9, ..CohortSpec::default() };
        assert_eq!(generate_cohort(&spec).unwrap(), generate_cohort(&spec).unwrap());
        let other = CohortSpec { seed: 10, ..CohortSpec::default() };
        assert_ne!(generate_cohort(&spec).unwrap().responses, generate_cohort(&other).unwrap().responses);
    }

    #[test]
    fn inconsistent_cohort_spec() {
        let spec = CohortSpec { n_items: 50, ..CohortSpec::default() };
        assert!(matches!(generate_cohort(&spec), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn grid_mode_has_one_row_per_rule() {
        let kb = default_assessment_kb();
        let set = generate_training_set(&[], &[], TrainingMode::Grid(&kb)).unwrap();
        assert_eq!(set.len(), 144);
        assert!(set.rows().iter().all(|r| (0.0..=1.0).contains(&r.desired)));
    }

    #[test]
    fn sampled_mode() {
        let items = [ItemParams::new(0.96, 0.59, 0.23).unwrap()];
        let thetas = [Ability::new(1.5).unwrap()];
        let set = generate_training_set(&items, &thetas, TrainingMode::Sampled { rows: 3, seed: 1 }).unwrap();
        assert_eq!(set.len(), 3);
        assert!((set.rows()[0].desired - 0.857).abs() < 0.002);
        assert!(generate_training_set(&[], &thetas, TrainingMode::Sampled { rows: 3, seed: 1 }).is_err());
    }
}
