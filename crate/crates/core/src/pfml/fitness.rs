use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::layout::{decode, ParticleLayout};
use crate::error::{Error, Result};
use crate::fuzzy::{build_rule_base, FuzzySystem, InferenceEngine};

/// Inputs `(a, b, c, θ)` with the desired output probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingRow {
    pub inputs: [f64; 4],
    pub desired: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingSet {
    rows: Vec<TrainingRow>,
}

impl TrainingSet {
    pub fn new(rows: Vec<TrainingRow>) -> Result<Self> {
        for row in &rows {
            if !(0.0..=1.0).contains(&row.desired) || row.inputs.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig(alloc::format!(
                    "training row {:?} -> {} is invalid",
                    row.inputs,
                    row.desired
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[TrainingRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Mean squared error between inferred and desired outputs.
pub fn fitness(kb: &FuzzySystem, data: &TrainingSet) -> Result<f64> {
    fitness_with(&InferenceEngine::new(kb), data)
}

pub(crate) fn fitness_with(engine: &InferenceEngine, data: &TrainingSet) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut sum = 0.0;
    for row in &data.rows {
        let d = engine.infer(&row.inputs)?.value - row.desired;
        sum += d * d;
    }
    Ok(sum / data.len() as f64)
}

/// Scores particle positions: decode, regenerate the rule base from the
/// moved sets, infer over the training set. Results are memoized on the
/// exact bit pattern of the position.
pub struct PositionEvaluator<'a> {
    layout: &'a ParticleLayout,
    data: &'a TrainingSet,
    cache: BTreeMap<Vec<u64>, f64>,
    evaluations: usize,
}

impl<'a> PositionEvaluator<'a> {
    pub fn new(layout: &'a ParticleLayout, data: &'a TrainingSet) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(Self {
            layout,
            data,
            cache: BTreeMap::new(),
            evaluations: 0,
        })
    }

    pub fn layout(&self) -> &ParticleLayout {
        self.layout
    }

    /// Number of positions actually scored (cache misses).
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn system(&self, position: &[f64]) -> Result<FuzzySystem> {
        build_rule_base(&decode(position, self.layout)?)
    }

    pub fn evaluate(&mut self, position: &[f64]) -> Result<f64> {
        let key: Vec<u64> = position.iter().map(|x| x.to_bits()).collect();
        if let Some(&f) = self.cache.get(&key) {
            return Ok(f);
        }
        let f = fitness_with(&InferenceEngine::new(&self.system(position)?), self.data)?;
        self.evaluations += 1;
        self.cache.insert(key, f);
        Ok(f)
    }
}
