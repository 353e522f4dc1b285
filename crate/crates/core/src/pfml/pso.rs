use alloc::vec::Vec;

use rand::Rng;

use super::fitness::{PositionEvaluator, TrainingSet};
use super::layout::ParticleLayout;
use super::restrict::{restrict_in_place, PinningMethod};
use super::{initial_population, LearnConfig, TrainOutcome};
use crate::error::Result;
use crate::fuzzy::FuzzySystem;
use crate::seeded_rng;

/// How the cognitive/social random factors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomMode {
    /// One `(r1, r2)` pair per particle per step.
    PerParticle,
    /// A fresh pair for every coordinate.
    PerCoordinate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmParams {
    pub size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub random_mode: RandomMode,
}

impl Default for SwarmParams {
    fn default() -> Self {
        Self {
            size: 20,
            inertia: 0.0,
            cognitive: 2.0,
            social: 2.0,
            random_mode: RandomMode::PerParticle,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub params: SwarmParams,
}

impl Swarm {
    /// Scores the given positions (zero velocity) and sets the bests.
    pub fn new(positions: Vec<Vec<f64>>, params: SwarmParams, eval: &mut PositionEvaluator<'_>) -> Result<Self> {
        let mut particles = Vec::with_capacity(positions.len());
        for position in positions {
            let f = eval.evaluate(&position)?;
            particles.push(Particle {
                velocity: alloc::vec![0.0; position.len()],
                best_position: position.clone(),
                position,
                best_fitness: f,
            });
        }
        let mut swarm = Self {
            best_position: particles[0].position.clone(),
            best_fitness: f64::INFINITY,
            particles,
            params,
        };
        swarm.update_global();
        Ok(swarm)
    }

    /// Sequential fold by particle index; the first best wins ties.
    fn update_global(&mut self) {
        for p in &self.particles {
            if p.best_fitness < self.best_fitness {
                self.best_fitness = p.best_fitness;
                self.best_position.clone_from(&p.best_position);
            }
        }
    }
}

/// One synchronous swarm update: move every particle, restrict, score,
/// then refresh personal and global bests.
pub fn pso_step<R: Rng + ?Sized>(
    swarm: &mut Swarm,
    eval: &mut PositionEvaluator<'_>,
    layout: &ParticleLayout,
    method: PinningMethod,
    rng: &mut R,
) -> Result<()> {
    let SwarmParams {
        inertia,
        cognitive,
        social,
        random_mode,
        ..
    } = swarm.params;
    let global = swarm.best_position.clone();
    for p in &mut swarm.particles {
        let (mut r1, mut r2): (f64, f64) = (rng.random(), rng.random());
        for d in 0..p.position.len() {
            if random_mode == RandomMode::PerCoordinate && d > 0 {
                r1 = rng.random();
                r2 = rng.random();
            }
            let x = p.position[d];
            p.velocity[d] =
                inertia * p.velocity[d] + cognitive * r1 * (p.best_position[d] - x) + social * r2 * (global[d] - x);
            p.position[d] = x + p.velocity[d];
        }
        restrict_in_place(&mut p.position, layout, method);
        let f = eval.evaluate(&p.position)?;
        if f < p.best_fitness {
            p.best_fitness = f;
            p.best_position.clone_from(&p.position);
        }
    }
    swarm.update_global();
    Ok(())
}

/// Tunes the knowledge base of `seed_kb` with particle swarm optimization.
pub fn pfml_train(data: &TrainingSet, cfg: &LearnConfig, seed_kb: &FuzzySystem) -> Result<TrainOutcome> {
    cfg.validate()?;
    let layout = ParticleLayout::from_kb(seed_kb);
    let mut eval = PositionEvaluator::new(&layout, data)?;
    let mut rng = seeded_rng(cfg.seed);
    let positions = initial_population(seed_kb, &layout, cfg.method, cfg.swarm.size, &mut rng)?;
    let mut swarm = Swarm::new(positions, cfg.swarm, &mut eval)?;
    let mut history = alloc::vec![swarm.best_fitness];
    while history.len() <= cfg.max_generations && swarm.best_fitness >= cfg.fitness_target {
        pso_step(&mut swarm, &mut eval, &layout, cfg.method, &mut rng)?;
        history.push(swarm.best_fitness);
    }
    Ok(TrainOutcome {
        system: eval.system(&swarm.best_position)?,
        best_position: swarm.best_position,
        history,
    })
}
