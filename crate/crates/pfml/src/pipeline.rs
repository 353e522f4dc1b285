//! Multi-step procedures shared by the command line and the test suites.

use std::fmt;
use std::str::FromStr;

use pfml_core::estimation::{estimate_ability_map, gauss_seidel_estimate, GsConfig, PriorConfig, ResponseMatrix};
use pfml_core::evaluation::{curve_sweep, kfold_split, oracle_3pl, CurveTable, LabeledPrediction};
use pfml_core::fuzzy::{build_rule_base, FuzzySystem, InferenceEngine};
use pfml_core::pfml::{gfml_train, pfml_train, LearnConfig, PinningMethod, TrainOutcome, TrainingRow, TrainingSet};
use pfml_core::{seeded_rng, Ability, ItemParams, Result};
use rand::seq::SliceRandom;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trainer {
    Pfml1,
    Pfml2,
    Gfml,
}

impl Trainer {
    pub fn name(self) -> &'static str {
        match self {
            Trainer::Pfml1 => "pfml1",
            Trainer::Pfml2 => "pfml2",
            Trainer::Gfml => "gfml",
        }
    }

    /// Pinning used by the trainer; the GA baseline pins like method 2.
    pub fn pinning(self) -> PinningMethod {
        match self {
            Trainer::Pfml1 => PinningMethod::Method1,
            Trainer::Pfml2 | Trainer::Gfml => PinningMethod::Method2,
        }
    }

    pub fn train(self, data: &TrainingSet, cfg: &LearnConfig, seed_kb: &FuzzySystem) -> Result<TrainOutcome> {
        let cfg = LearnConfig {
            method: self.pinning(),
            ..cfg.clone()
        };
        match self {
            Trainer::Pfml1 | Trainer::Pfml2 => pfml_train(data, &cfg, seed_kb),
            Trainer::Gfml => gfml_train(data, &cfg, seed_kb),
        }
    }
}

impl fmt::Display for Trainer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Trainer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pfml1" => Ok(Trainer::Pfml1),
            "pfml2" => Ok(Trainer::Pfml2),
            "gfml" => Ok(Trainer::Gfml),
            other => Err(format!("unknown method `{other}` (expected pfml1, pfml2 or gfml)")),
        }
    }
}

/// One observed response with the model inputs that describe it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub inputs: [f64; 4],
    pub desired: f64,
    pub correct: bool,
}

/// Observed cells of `students` under the given item and ability estimates.
pub fn observed_cells(matrix: &ResponseMatrix, students: &[usize], items: &[ItemParams], thetas: &[Ability]) -> Vec<Cell> {
    let mut out = Vec::new();
    for (k, &s) in students.iter().enumerate() {
        let theta = thetas[k];
        for (i, r) in matrix.row(s).iter().enumerate() {
            if let Some(score) = r.score() {
                let it = &items[i];
                out.push(Cell {
                    inputs: [it.a(), it.b(), it.c(), theta.get()],
                    desired: oracle_3pl(it, theta),
                    correct: score > 0.5,
                });
            }
        }
    }
    out
}

/// Up to `limit` cells drawn without replacement.
pub fn training_set(cells: &[Cell], limit: usize, seed: u64) -> Result<TrainingSet> {
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.shuffle(&mut seeded_rng(seed));
    order.truncate(limit);
    TrainingSet::new(
        order
            .into_iter()
            .map(|i| TrainingRow {
                inputs: cells[i].inputs,
                desired: cells[i].desired,
            })
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct EvalSettings {
    pub folds: usize,
    pub trainer: Trainer,
    pub learn: LearnConfig,
    pub gs: GsConfig,
    pub prior: PriorConfig,
    pub training_rows: usize,
    pub seed: u64,
}

impl EvalSettings {
    pub fn new(seed: u64) -> Self {
        Self {
            folds: 5,
            trainer: Trainer::Pfml2,
            learn: LearnConfig {
                seed,
                ..LearnConfig::new(PinningMethod::Method2)
            },
            gs: GsConfig::default(),
            prior: PriorConfig::default(),
            training_rows: 500,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoldReport {
    pub fold: usize,
    pub train_students: usize,
    pub test_students: usize,
    pub training_rows: usize,
    pub test_cells: usize,
    pub gs_sweeps: usize,
    pub train_mse: f64,
    pub mse_before: f64,
    pub mse_after: f64,
    pub before: CurveTable,
    pub after: CurveTable,
    pub learned: FuzzySystem,
    pub history: Vec<f64>,
}

fn predictions(engine: &InferenceEngine, cells: &[Cell]) -> Result<(Vec<LabeledPrediction>, f64)> {
    let mut preds = Vec::with_capacity(cells.len());
    let mut sq = 0.0;
    for c in cells {
        let y = engine.infer(&c.inputs)?.value;
        sq += (y - c.desired).powi(2);
        preds.push(LabeledPrediction::new(y, c.correct)?);
    }
    Ok((preds, sq / cells.len().max(1) as f64))
}

/// Student-level K-fold protocol: item parameters and training abilities
/// from Gauss-Seidel on the training students, MAP abilities for the
/// held-out students, then the seed and learned systems are scored on the
/// held-out responses.
pub fn evaluate_kfold(
    matrix: &ResponseMatrix,
    seed_kb: &FuzzySystem,
    settings: &EvalSettings,
    mut progress: impl FnMut(&FoldReport),
) -> Result<Vec<FoldReport>> {
    let before_system = build_rule_base(seed_kb)?;
    let before = InferenceEngine::new(&before_system);
    let mut reports = Vec::with_capacity(settings.folds);
    for (k, fold) in kfold_split(matrix.n_students(), settings.folds, settings.seed)?.into_iter().enumerate() {
        let train_matrix = matrix.select_students(&fold.train)?;
        let gs = gauss_seidel_estimate(&train_matrix, &settings.gs, &settings.prior)?;
        let train_cells = observed_cells(matrix, &fold.train, &gs.items, &gs.abilities);
        let data = training_set(&train_cells, settings.training_rows, settings.seed.wrapping_add(k as u64))?;
        let learn = LearnConfig {
            seed: settings.learn.seed.wrapping_add(k as u64),
            ..settings.learn.clone()
        };
        let outcome = settings.trainer.train(&data, &learn, seed_kb)?;

        let test_thetas = fold
            .test
            .iter()
            .map(|&s| estimate_ability_map(matrix.row(s), &gs.items, &settings.prior, &settings.gs.theta_grid))
            .collect::<Result<Vec<Ability>>>()?;
        let test_cells = observed_cells(matrix, &fold.test, &gs.items, &test_thetas);
        let (before_preds, mse_before) = predictions(&before, &test_cells)?;
        let (after_preds, mse_after) = predictions(&InferenceEngine::new(&outcome.system), &test_cells)?;
        let report = FoldReport {
            fold: k + 1,
            train_students: fold.train.len(),
            test_students: fold.test.len(),
            training_rows: data.len(),
            test_cells: test_cells.len(),
            gs_sweeps: gs.sweeps,
            train_mse: outcome.final_fitness(),
            mse_before,
            mse_after,
            before: curve_sweep(&before_preds)?,
            after: curve_sweep(&after_preds)?,
            learned: outcome.system,
            history: outcome.history,
        };
        progress(&report);
        reports.push(report);
    }
    Ok(reports)
}
