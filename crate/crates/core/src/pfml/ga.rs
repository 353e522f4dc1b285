use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::fitness::{PositionEvaluator, TrainingSet};
use super::layout::ParticleLayout;
use super::restrict::restrict_in_place;
use super::{initial_population, LearnConfig, TrainOutcome};
use crate::error::Result;
use crate::fuzzy::FuzzySystem;
use crate::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub tournament: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Mutation standard deviation as a fraction of the block's domain width.
    pub mutation_scale: f64,
    pub elites: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 20,
            tournament: 2,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            mutation_scale: 0.05,
            elites: 1,
        }
    }
}

fn tournament<R: Rng + ?Sized>(scores: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..scores.len());
    for _ in 1..size {
        let other = rng.random_range(0..scores.len());
        if scores[other] < scores[best] {
            best = other;
        }
    }
    best
}

fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]));
    order
}

/// Real-coded GA baseline over the same encoding, restriction and fitness
/// as [`super::pfml_train`].
pub fn gfml_train(data: &TrainingSet, cfg: &LearnConfig, seed_kb: &FuzzySystem) -> Result<TrainOutcome> {
    cfg.validate()?;
    let params = cfg.ga;
    let layout = ParticleLayout::from_kb(seed_kb);
    let mut eval = PositionEvaluator::new(&layout, data)?;
    let mut rng = seeded_rng(cfg.seed);
    let mut population = initial_population(seed_kb, &layout, cfg.method, params.population, &mut rng)?;
    let mut scores = population
        .iter()
        .map(|x| eval.evaluate(x))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = ranking(&scores)[0];
    let mut history = alloc::vec![scores[best]];
    while history.len() <= cfg.max_generations && scores[best] >= cfg.fitness_target {
        let order = ranking(&scores);
        let elites = params.elites.min(population.len());
        let mut next: Vec<Vec<f64>> = order[..elites].iter().map(|&i| population[i].clone()).collect();
        let mut next_scores: Vec<f64> = order[..elites].iter().map(|&i| scores[i]).collect();
        while next.len() < population.len() {
            let p1 = &population[tournament(&scores, params.tournament, &mut rng)];
            let p2 = &population[tournament(&scores, params.tournament, &mut rng)];
            let mut child = if rng.random::<f64>() < params.crossover_rate {
                p1.iter()
                    .zip(p2)
                    .map(|(a, b)| if rng.random::<bool>() { *a } else { *b })
                    .collect()
            } else {
                p1.clone()
            };
            mutate(&mut child, &layout, &params, &mut rng);
            restrict_in_place(&mut child, &layout, cfg.method);
            next_scores.push(eval.evaluate(&child)?);
            next.push(child);
        }
        population = next;
        scores = next_scores;
        best = ranking(&scores)[0];
        history.push(scores[best]);
    }
    Ok(TrainOutcome {
        system: eval.system(&population[best])?,
        best_position: population.swap_remove(best),
        history,
    })
}

fn mutate<R: Rng + ?Sized>(x: &mut [f64], layout: &ParticleLayout, params: &GaParams, rng: &mut R) {
    for b in layout.blocks() {
        let sd = params.mutation_scale * b.width();
        for v in &mut x[b.range()] {
            if rng.random::<f64>() < params.mutation_rate {
                *v += sd * rng.sample::<f64, _>(StandardNormal);
            }
        }
    }
}
