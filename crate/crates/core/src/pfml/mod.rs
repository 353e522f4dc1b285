//! Swarm tuning of a fuzzy knowledge base.
//!
//! A particle is the flattened `(BS, BC, EC, ES)` parameter vector of every
//! term (76 coordinates for the assessment system). After each move the
//! position is restricted back to a well-formed knowledge base, the rule
//! base is regenerated from the moved sets and the particle is scored by the
//! mean squared error of its inferences against the desired outputs.
//! A real-coded genetic algorithm over the same encoding serves as the
//! comparison baseline.

mod fitness;
mod ga;
mod layout;
mod pso;
mod restrict;

use alloc::vec::Vec;

use rand::Rng;

pub use fitness::{fitness, PositionEvaluator, TrainingRow, TrainingSet};
pub use ga::{gfml_train, GaParams};
pub use layout::{decode, encode, Block, ParticleLayout};
pub use pso::{pfml_train, pso_step, Particle, RandomMode, Swarm, SwarmParams};
pub use restrict::{restrict, restrict_in_place, satisfies_restriction, PinningMethod};

use crate::error::{Error, Result};
use crate::fuzzy::FuzzySystem;

#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    pub method: PinningMethod,
    pub max_generations: usize,
    pub fitness_target: f64,
    pub seed: u64,
    pub swarm: SwarmParams,
    pub ga: GaParams,
}

impl LearnConfig {
    pub fn new(method: PinningMethod) -> Self {
        Self {
            method,
            max_generations: 1000,
            fitness_target: 0.001,
            seed: 0,
            swarm: SwarmParams::default(),
            ga: GaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_generations == 0 {
            return Err(Error::InvalidConfig("max_generations must be at least 1".into()));
        }
        if !(self.fitness_target > 0.0) {
            return Err(Error::InvalidConfig("fitness_target must be positive".into()));
        }
        if self.swarm.size == 0 || self.ga.population < 2 {
            return Err(Error::InvalidConfig("population too small".into()));
        }
        Ok(())
    }
}

/// Learned system (with regenerated rules) and its best-fitness trace;
/// entry 0 is the initial population's best.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub system: FuzzySystem,
    pub history: Vec<f64>,
    pub best_position: Vec<f64>,
}

impl TrainOutcome {
    pub fn final_fitness(&self) -> f64 {
        *self.history.last().expect("history has the initial entry")
    }

    pub fn generations(&self) -> usize {
        self.history.len() - 1
    }
}

/// Initial population: `size − 1` uniformly random restricted positions
/// plus the seed knowledge base (restricted only if it is not already
/// well-formed).
pub(crate) fn initial_population<R: Rng + ?Sized>(
    seed_kb: &FuzzySystem,
    layout: &ParticleLayout,
    method: PinningMethod,
    size: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let mut seeded = encode(seed_kb, layout)?;
    if !satisfies_restriction(&seeded, layout, method) {
        restrict_in_place(&mut seeded, layout, method);
    }
    let mut population = Vec::with_capacity(size);
    for _ in 1..size {
        let mut x = alloc::vec![0.0; layout.dimension()];
        for b in layout.blocks() {
            for v in &mut x[b.range()] {
                *v = rng.random_range(b.domain_left..=b.domain_right);
            }
        }
        restrict_in_place(&mut x, layout, method);
        population.push(x);
    }
    population.push(seeded);
    Ok(population)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{default_assessment_kb, default_assessment_system, infer};
    use alloc::vec;

    fn rows(system: &FuzzySystem, offset: f64) -> Vec<TrainingRow> {
        let mut out = Vec::new();
        for a in [0.3, 1.0, 1.6] {
            for b in [-2.0, 0.0, 1.0] {
                for t in [-1.5, 0.5, 2.5] {
                    let inputs = [a, b, 0.2, t];
                    let y = infer(system, &inputs).unwrap().value;
                    out.push(TrainingRow {
                        inputs,
                        desired: (y - offset).clamp(0.0, 1.0),
                    });
                }
            }
        }
        out
    }

    #[test]
    fn layout_of_default_kb() {
        let layout = ParticleLayout::from_kb(&default_assessment_kb());
        let sizes: Vec<usize> = layout.blocks().iter().map(Block::len).collect();
        assert_eq!(sizes, vec![12, 16, 12, 16, 20]);
        assert_eq!(layout.dimension(), 76);
        let b = layout.blocks();
        assert!(b[0].left_shoulder && b[0].right_shoulder);
        assert!(b[4].left_shoulder && b[4].right_shoulder);
    }

    #[test]
    fn encode_decode_round_trip() {
        let kb = default_assessment_system();
        let layout = ParticleLayout::from_kb(&kb);
        let x = encode(&kb, &layout).unwrap();
        assert_eq!(&x[..4], &[0.0, 0.0, 0.65, 0.74]);
        assert_eq!(decode(&x, &layout).unwrap(), kb);
        assert_eq!(
            decode(&x[..75], &layout),
            Err(Error::LengthMismatch { expected: 76, found: 75 })
        );
    }

    #[test]
    fn restrict_keeps_valid_discrimination_block() {
        let kb = default_assessment_kb();
        let layout = ParticleLayout::from_kb(&kb);
        let x = encode(&kb, &layout).unwrap();
        for method in [PinningMethod::Method1, PinningMethod::Method2] {
            let y = restrict(&x, &layout, method);
            assert_eq!(&y[..12], &x[..12]);
            assert!(satisfies_restriction(&y, &layout, method));
            assert_eq!(restrict(&y, &layout, method), y);
        }
    }

    #[test]
    fn method2_pins_edges_and_shoulders() {
        let layout = ParticleLayout::from_kb(&default_assessment_kb());
        let x = vec![0.5; 76];
        let y = restrict(&x, &layout, PinningMethod::Method2);
        for b in layout.blocks() {
            let v = &y[b.range()];
            assert_eq!((v[0], v[1]), (b.domain_left, b.domain_left));
            assert_eq!((v[v.len() - 2], v[v.len() - 1]), (b.domain_right, b.domain_right));
        }
        let y = restrict(&x, &layout, PinningMethod::Method1);
        assert!(y.iter().all(|v| *v == 0.5));
    }

    #[test]
    fn fitness_algebra() {
        let sys = default_assessment_system();
        let exact = TrainingSet::new(rows(&sys, 0.0)).unwrap();
        assert_eq!(fitness(&sys, &exact).unwrap(), 0.0);

        let shifted: Vec<TrainingRow> = rows(&sys, 0.0)
            .into_iter()
            .filter(|r| r.desired >= 0.05)
            .map(|r| TrainingRow {
                desired: r.desired - 0.05,
                ..r
            })
            .collect();
        let shifted = TrainingSet::new(shifted).unwrap();
        assert!((fitness(&sys, &shifted).unwrap() - 0.0025).abs() < 1e-12);

        let mut doubled = shifted.rows().to_vec();
        doubled.extend_from_slice(shifted.rows());
        let doubled = TrainingSet::new(doubled).unwrap();
        assert!((fitness(&sys, &doubled).unwrap() - fitness(&sys, &shifted).unwrap()).abs() < 1e-15);

        assert_eq!(fitness(&sys, &TrainingSet::default()), Err(Error::EmptyTrainingSet));
        assert!(TrainingSet::new(vec![TrainingRow { inputs: [1.0; 4], desired: 1.5 }]).is_err());
    }

    #[test]
    fn evaluator_memoizes() {
        let kb = default_assessment_kb();
        let layout = ParticleLayout::from_kb(&kb);
        let data = TrainingSet::new(rows(&default_assessment_system(), 0.0)).unwrap();
        let mut eval = PositionEvaluator::new(&layout, &data).unwrap();
        let x = encode(&kb, &layout).unwrap();
        let f = eval.evaluate(&x).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(eval.evaluate(&x).unwrap(), f);
        assert_eq!(eval.evaluations(), 1);
    }

    fn single_particle_swarm(x: Vec<f64>, velocity: f64, eval: &mut PositionEvaluator<'_>) -> Swarm {
        let mut swarm = Swarm::new(vec![x], SwarmParams::default(), eval).unwrap();
        swarm.particles[0].velocity.iter_mut().for_each(|v| *v = velocity);
        swarm
    }

    #[test]
    fn zero_update_and_inertia_free_velocity() {
        let kb = default_assessment_kb();
        let layout = ParticleLayout::from_kb(&kb);
        let data = TrainingSet::new(rows(&default_assessment_system(), 0.1)).unwrap();
        let mut eval = PositionEvaluator::new(&layout, &data).unwrap();
        let x = restrict(&encode(&kb, &layout).unwrap(), &layout, PinningMethod::Method1);

        let mut swarm = single_particle_swarm(x.clone(), 0.0, &mut eval);
        pso_step(&mut swarm, &mut eval, &layout, PinningMethod::Method1, &mut crate::seeded_rng(0)).unwrap();
        assert_eq!(swarm.particles[0].position, x);

        // With w = 0 the old velocity has no influence.
        let mut fast = single_particle_swarm(x.clone(), 7.0, &mut eval);
        pso_step(&mut fast, &mut eval, &layout, PinningMethod::Method1, &mut crate::seeded_rng(0)).unwrap();
        assert!(fast.particles[0].velocity.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn infinite_target_stops_immediately() {
        let data = TrainingSet::new(rows(&default_assessment_system(), 0.1)).unwrap();
        let mut cfg = LearnConfig::new(PinningMethod::Method2);
        cfg.fitness_target = f64::INFINITY;
        let out = pfml_train(&data, &cfg, &default_assessment_kb()).unwrap();
        assert_eq!(out.generations(), 0);
        let out = gfml_train(&data, &cfg, &default_assessment_kb()).unwrap();
        assert_eq!(out.generations(), 0);
    }

    #[test]
    fn invalid_learn_config() {
        let data = TrainingSet::new(rows(&default_assessment_system(), 0.1)).unwrap();
        let mut cfg = LearnConfig::new(PinningMethod::Method1);
        cfg.max_generations = 0;
        assert!(matches!(pfml_train(&data, &cfg, &default_assessment_kb()), Err(Error::InvalidConfig(_))));
        let cfg = LearnConfig::new(PinningMethod::Method1);
        assert_eq!(pfml_train(&TrainingSet::default(), &cfg, &default_assessment_kb()), Err(Error::EmptyTrainingSet));
    }

    #[test]
    fn trainers_are_monotone_and_deterministic() {
        let data = TrainingSet::new(rows(&default_assessment_system(), 0.1)).unwrap();
        let mut cfg = LearnConfig::new(PinningMethod::Method2);
        cfg.max_generations = 8;
        cfg.seed = 5;
        for train in [pfml_train, gfml_train] {
            let out = train(&data, &cfg, &default_assessment_kb()).unwrap();
            assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(out.generations(), 8);
            assert_eq!(out, train(&data, &cfg, &default_assessment_kb()).unwrap());
            let layout = ParticleLayout::from_kb(&default_assessment_kb());
            assert!(satisfies_restriction(&out.best_position, &layout, cfg.method));
            assert_eq!(out.system.rules().len(), 144);
            for v in out.system.variables() {
                assert_eq!(v.terms[0].shape.begin_support(), v.domain_left);
                assert_eq!(v.terms[v.terms.len() - 1].shape.end_support(), v.domain_right);
            }
        }
    }
}
