//! Fixed-length form assembly with a (1+1) evolution strategy.
//!
//! The search runs over an importance weight per bank item; a candidate
//! weight vector is scored by taking its top-M items, letting a simulated
//! cohort from the target ability band answer them, re-estimating each
//! simulated ability by MAP, and summing the prior-weighted squared
//! recovery errors. The cohort (abilities and uniform draws) is sampled once
//! per run so the objective is deterministic while the ES is running.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::estimation::{estimate_ability_map, Grid, PriorConfig, Response, ResponseMatrix};
use crate::irt::{standard_error_from_information, test_information, Ability, ItemParams, PerformanceLevel};
use crate::math::normal_pdf;
use crate::seeded_rng;

/// One Bernoulli draw per (student, item): correct iff `r ≤ P(θ)`.
pub fn simulate_responses<R: Rng + ?Sized>(
    items: &[ItemParams],
    abilities: &[Ability],
    rng: &mut R,
) -> Result<ResponseMatrix> {
    if items.is_empty() || abilities.is_empty() {
        return Err(Error::EmptyItems);
    }
    let mut cells = Vec::with_capacity(items.len() * abilities.len());
    for theta in abilities {
        for item in items {
            let r: f64 = rng.random();
            cells.push(if r <= item.probability(theta.get()) {
                Response::Correct
            } else {
                Response::Incorrect
            });
        }
    }
    ResponseMatrix::from_rows(items.len(), cells)
}

/// Importance weight per bank item.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceVector(Vec<f64>);

impl ImportanceVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("importance weights must be finite".into()));
        }
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of the `m` largest weights, descending; ties keep index order.
    pub fn top(&self, m: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by(|&i, &j| self.0[j].total_cmp(&self.0[i]));
        order.truncate(m);
        order
    }
}

/// Weighting `P0(θ)` applied to each simulated student's squared error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorWeight {
    StandardNormal,
    Constant(f64),
}

impl PriorWeight {
    pub fn weight(&self, theta: f64) -> f64 {
        match self {
            PriorWeight::StandardNormal => normal_pdf(theta),
            PriorWeight::Constant(w) => *w,
        }
    }
}

/// Step-size control: σ starts at `initial_sigma`, is multiplied by
/// `success_factor` on an accepted mutation and `failure_factor` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsParams {
    pub initial_sigma: f64,
    pub success_factor: f64,
    pub failure_factor: f64,
}

impl Default for EsParams {
    fn default() -> Self {
        Self {
            initial_sigma: 1.0,
            success_factor: 2.0,
            failure_factor: 0.84,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyConfig {
    pub form_length: usize,
    pub cohort_size: usize,
    pub target_level: PerformanceLevel,
    pub prior_weight: PriorWeight,
    pub budget: usize,
    pub seed: u64,
    pub es: EsParams,
    pub prior: PriorConfig,
    pub theta_grid: Grid,
    /// Grid for the reported TIF/TSE curves.
    pub curve_grid: Grid,
}

impl AssemblyConfig {
    pub fn new(form_length: usize, target_level: PerformanceLevel) -> Self {
        Self {
            form_length,
            cohort_size: 100,
            target_level,
            prior_weight: PriorWeight::StandardNormal,
            budget: 200,
            seed: 0,
            es: EsParams::default(),
            prior: PriorConfig::default(),
            theta_grid: Grid::theta_default(),
            curve_grid: Grid::theta_default(),
        }
    }

    pub fn validate(&self, bank_size: usize) -> Result<()> {
        if self.form_length == 0 {
            return Err(Error::InvalidConfig("form length must be at least 1".into()));
        }
        if self.form_length > bank_size {
            return Err(Error::FormTooLong {
                length: self.form_length,
                bank: bank_size,
            });
        }
        if self.cohort_size == 0 {
            return Err(Error::InvalidConfig("cohort size must be at least 1".into()));
        }
        if !(self.es.initial_sigma > 0.0) || !(self.es.success_factor > 0.0) || !(self.es.failure_factor > 0.0) {
            return Err(Error::InvalidConfig("ES step-size parameters must be positive".into()));
        }
        self.prior.validate()
    }
}

/// Frozen simulated cohort: true abilities plus a uniform draw per
/// (student, bank item).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedCohort {
    thetas: Vec<f64>,
    draws: Vec<f64>,
    bank_size: usize,
}

impl SimulatedCohort {
    /// Abilities uniform over the level band.
    pub fn sample<R: Rng + ?Sized>(bank_size: usize, size: usize, level: PerformanceLevel, rng: &mut R) -> Self {
        let (lo, hi) = level.theta_band();
        let thetas = (0..size).map(|_| rng.random_range(lo..hi)).collect();
        let draws = (0..size * bank_size).map(|_| rng.random()).collect();
        Self {
            thetas,
            draws,
            bank_size,
        }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    fn pattern(&self, student: usize, bank: &[ItemParams], selected: &[usize]) -> Vec<Response> {
        let theta = self.thetas[student];
        let draws = &self.draws[student * self.bank_size..(student + 1) * self.bank_size];
        selected
            .iter()
            .map(|&i| {
                if draws[i] <= bank[i].probability(theta) {
                    Response::Correct
                } else {
                    Response::Incorrect
                }
            })
            .collect()
    }
}

/// `Σ_s P0(θ_s)·(θ_s − θ̂_s)²` over the cohort for the top-M items of `u`.
///
/// `estimate` receives the student index, the simulated pattern and the
/// selected items.
pub fn assembly_objective(
    u: &ImportanceVector,
    bank: &[ItemParams],
    form_length: usize,
    cohort: &SimulatedCohort,
    weight: PriorWeight,
    mut estimate: impl FnMut(usize, &[Response], &[ItemParams]) -> Result<f64>,
) -> Result<f64> {
    if form_length > bank.len() {
        return Err(Error::FormTooLong {
            length: form_length,
            bank: bank.len(),
        });
    }
    if u.len() != bank.len() || cohort.bank_size != bank.len() {
        return Err(Error::LengthMismatch {
            expected: bank.len(),
            found: u.len(),
        });
    }
    let selected = u.top(form_length);
    let items: Vec<ItemParams> = selected.iter().map(|&i| bank[i]).collect();
    let mut g = 0.0;
    for (s, &theta) in cohort.thetas.iter().enumerate() {
        let w = weight.weight(theta);
        if w == 0.0 {
            continue;
        }
        let pattern = cohort.pattern(s, bank, &selected);
        let est = estimate(s, &pattern, &items)?;
        g += w * (theta - est) * (theta - est);
    }
    Ok(g)
}

/// [`assembly_objective`] with MAP ability estimation from `cfg`.
pub fn map_objective(
    u: &ImportanceVector,
    bank: &[ItemParams],
    cfg: &AssemblyConfig,
    cohort: &SimulatedCohort,
) -> Result<f64> {
    assembly_objective(u, bank, cfg.form_length, cohort, cfg.prior_weight, |_, pattern, items| {
        estimate_ability_map(pattern, items, &cfg.prior, &cfg.theta_grid).map(Ability::get)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsState {
    pub iteration: usize,
    pub sigma: f64,
    pub best_objective: f64,
    pub accepted: bool,
}

/// An assembled form and its information profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    pub item_indices: Vec<usize>,
    pub target_level: PerformanceLevel,
    pub theta: Vec<f64>,
    pub tif_curve: Vec<f64>,
    pub tse_curve: Vec<f64>,
}

impl Form {
    pub fn new(bank: &[ItemParams], item_indices: Vec<usize>, target_level: PerformanceLevel, grid: &Grid) -> Result<Self> {
        if item_indices.is_empty() {
            return Err(Error::EmptyItems);
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for &i in &item_indices {
            if i >= bank.len() || !seen.insert(i) {
                return Err(Error::InvalidConfig(alloc::format!("form item index {i} is invalid or repeated")));
            }
        }
        let items: Vec<ItemParams> = item_indices.iter().map(|&i| bank[i]).collect();
        let theta = grid.points().to_vec();
        let tif_curve = theta
            .iter()
            .map(|&t| test_information(&items, t))
            .collect::<Result<Vec<f64>>>()?;
        let tse_curve = tif_curve
            .iter()
            .map(|&i| standard_error_from_information(i))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            item_indices,
            target_level,
            theta,
            tif_curve,
            tse_curve,
        })
    }

    /// θ at the maximum of the TIF curve (first one on ties).
    pub fn tif_peak(&self) -> f64 {
        let mut best = 0;
        for (k, v) in self.tif_curve.iter().enumerate() {
            if *v > self.tif_curve[best] {
                best = k;
            }
        }
        self.theta[best]
    }
}

/// Runs the (1+1)-ES and returns the final form with the per-iteration trace
/// (entry 0 is the initial state).
pub fn assemble_form(bank: &[ItemParams], cfg: &AssemblyConfig) -> Result<(Form, Vec<EsState>)> {
    cfg.validate(bank.len())?;
    let mut rng = seeded_rng(cfg.seed);
    let cohort = SimulatedCohort::sample(bank.len(), cfg.cohort_size, cfg.target_level, &mut rng);
    let mut u = ImportanceVector((0..bank.len()).map(|_| rng.random::<f64>()).collect());
    let mut best = map_objective(&u, bank, cfg, &cohort)?;
    let mut sigma = cfg.es.initial_sigma;
    let mut trace = Vec::with_capacity(cfg.budget + 1);
    trace.push(EsState {
        iteration: 0,
        sigma,
        best_objective: best,
        accepted: false,
    });
    for iteration in 1..=cfg.budget {
        let candidate = ImportanceVector(
            u.0.iter()
                .map(|w| w + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
        let g = map_objective(&candidate, bank, cfg, &cohort)?;
        let accepted = g < best;
        if accepted {
            u = candidate;
            best = g;
            sigma *= cfg.es.success_factor;
        } else {
            sigma *= cfg.es.failure_factor;
        }
        trace.push(EsState {
            iteration,
            sigma,
            best_objective: best,
            accepted,
        });
    }
    let form = Form::new(bank, u.top(cfg.form_length), cfg.target_level, &cfg.curve_grid)?;
    Ok((form, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irt::demo_bank;
    use alloc::vec;

    fn item(a: f64, b: f64, c: f64) -> ItemParams {
        ItemParams::new(a, b, c).unwrap()
    }

    #[test]
    fn certain_items_are_always_correct() {
        let items = vec![item(1.0, 0.0, 1.0); 3];
        let abilities = vec![Ability::new(-4.0).unwrap(); 50];
        let m = simulate_responses(&items, &abilities, &mut seeded_rng(1)).unwrap();
        assert!(m.rows().flatten().all(|r| *r == Response::Correct));
    }

    #[test]
    fn very_hard_item_almost_never_correct() {
        // P(-4) for (a=2, b=4, c=0) is about 1.3e-12.
        let p = item(2.0, 4.0, 0.0).probability(-4.0);
        assert!(p < 1e-11 && p > 1e-13);
        let abilities = vec![Ability::new(-4.0).unwrap(); 10_000];
        let m = simulate_responses(&[item(2.0, 4.0, 0.0)], &abilities, &mut seeded_rng(2));
        // A column with no correct answers is still a valid (observed) column.
        let m = m.unwrap();
        let correct = m.column(0).filter(|r| *r == Response::Correct).count();
        assert!((correct as f64) / 10_000.0 < 0.01);
    }

    #[test]
    fn simulation_is_seeded() {
        let bank = demo_bank();
        let abilities: Vec<Ability> = (0..20).map(|i| Ability::new(-2.0 + 0.2 * i as f64).unwrap()).collect();
        let a = simulate_responses(&bank, &abilities, &mut seeded_rng(9)).unwrap();
        let b = simulate_responses(&bank, &abilities, &mut seeded_rng(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn objective_edge_cases() {
        let bank = demo_bank();
        let cohort = SimulatedCohort::sample(bank.len(), 30, PerformanceLevel::Proficient, &mut seeded_rng(4));
        let u = ImportanceVector::new((0..20).map(|i| i as f64).collect()).unwrap();
        let perfect = assembly_objective(&u, &bank, 10, &cohort, PriorWeight::StandardNormal, |s, _, _| {
            Ok(cohort.thetas()[s])
        })
        .unwrap();
        assert_eq!(perfect, 0.0);
        let mut cfg = AssemblyConfig::new(10, PerformanceLevel::Proficient);
        cfg.prior_weight = PriorWeight::Constant(0.0);
        assert_eq!(map_objective(&u, &bank, &cfg, &cohort).unwrap(), 0.0);
        cfg.form_length = 21;
        assert!(matches!(
            map_objective(&u, &bank, &cfg, &cohort),
            Err(Error::FormTooLong { .. })
        ));
    }

    #[test]
    fn objective_is_positive_and_reproducible() {
        let bank = demo_bank();
        let cfg = AssemblyConfig::new(10, PerformanceLevel::Proficient);
        let run = || {
            let mut rng = seeded_rng(77);
            let cohort = SimulatedCohort::sample(bank.len(), 50, cfg.target_level, &mut rng);
            let u = ImportanceVector::new((0..20).map(|_| rng.random()).collect()).unwrap();
            map_objective(&u, &bank, &cfg, &cohort).unwrap()
        };
        let first = run();
        assert!(first > 0.0);
        assert_eq!(first, run());
    }

    #[test]
    fn top_is_stable_on_ties() {
        let u = ImportanceVector::new(vec![0.5, 0.9, 0.5, 0.9, 0.1]).unwrap();
        assert_eq!(u.top(4), vec![1, 3, 0, 2]);
    }

    #[test]
    fn zero_budget_keeps_initial_vector() {
        let bank = demo_bank();
        let mut cfg = AssemblyConfig::new(5, PerformanceLevel::Basic);
        cfg.budget = 0;
        cfg.cohort_size = 20;
        cfg.seed = 3;
        let (form, trace) = assemble_form(&bank, &cfg).unwrap();
        assert_eq!(trace.len(), 1);
        let mut rng = seeded_rng(3);
        let _ = SimulatedCohort::sample(bank.len(), 20, PerformanceLevel::Basic, &mut rng);
        let u = ImportanceVector((0..20).map(|_| rng.random::<f64>()).collect());
        assert_eq!(form.item_indices, u.top(5));
    }

    #[test]
    fn full_bank_selects_everything() {
        let bank: Vec<ItemParams> = demo_bank().into_iter().take(6).collect();
        let mut cfg = AssemblyConfig::new(6, PerformanceLevel::Advanced);
        cfg.budget = 5;
        cfg.cohort_size = 10;
        let (form, _) = assemble_form(&bank, &cfg).unwrap();
        let mut idx = form.item_indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn trace_is_monotone_and_curves_consistent() {
        let bank = demo_bank();
        let mut cfg = AssemblyConfig::new(8, PerformanceLevel::Proficient);
        cfg.budget = 30;
        cfg.cohort_size = 30;
        cfg.seed = 11;
        let (form, trace) = assemble_form(&bank, &cfg).unwrap();
        assert!(trace.windows(2).all(|w| w[1].best_objective <= w[0].best_objective));
        for (tif, tse) in form.tif_curve.iter().zip(&form.tse_curve) {
            assert!((tse * libm::sqrt(*tif) - 1.0).abs() < 1e-9);
        }
        let (again, _) = assemble_form(&bank, &cfg).unwrap();
        assert_eq!(form, again);
    }
}
