//! Ability and item-parameter estimation.
//!
//! Abilities are MAP estimates found by a dense grid search followed by one
//! parabolic refinement step. Item parameters maximize each item's posterior
//! (response log-likelihood plus log priors on a, b, c) by coordinate-wise
//! grid search. [`gauss_seidel_estimate`] alternates the two.

mod gauss_seidel;
mod prior;
mod response;

use alloc::vec::Vec;

use libm::log;

pub use gauss_seidel::{gauss_seidel_estimate, GsConfig, GsEstimate};
pub use prior::{BetaPrior, ChiPrior, NormalPrior, PriorConfig};
pub use response::{Response, ResponseMatrix};

use crate::error::{Error, Result};
use crate::irt::{p3pl, Ability, ItemParams, A_RANGE, B_RANGE, C_RANGE, THETA_RANGE};
use crate::math::logistic;

/// Probabilities are kept inside `[FLOOR, 1 − FLOOR]` before taking logs.
pub const PROBABILITY_FLOOR: f64 = 1e-10;

#[inline]
fn ln_response(p: f64, score: f64) -> f64 {
    let p = p.clamp(PROBABILITY_FLOOR, 1.0 - PROBABILITY_FLOOR);
    if score > 0.5 {
        log(p)
    } else {
        log(1.0 - p)
    }
}

/// Evenly spaced points over a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(alloc::format!(
                "grid [{lo}, {hi}] with step {step} is invalid"
            )));
        }
        let intervals = libm::round((hi - lo) / step).max(1.0) as usize;
        let span = hi - lo;
        let points = (0..=intervals)
            .map(|i| lo + span * i as f64 / intervals as f64)
            .collect();
        Ok(Self { lo, hi, points })
    }

    /// `[-4, 4]` at step 0.01 (801 points).
    pub fn theta_default() -> Self {
        Self::new(THETA_RANGE.0, THETA_RANGE.1, 0.01).expect("static grid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points.len() - 1) as f64
    }

    /// Maximizes `f` over the grid, then refines once with a parabola
    /// through the best point and its neighbours.
    pub fn argmax(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let values: Vec<f64> = self.points.iter().map(|&x| f(x)).collect();
        let mut best = 0;
        for (k, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = k;
            }
        }
        let x = self.points[best];
        if best == 0 || best + 1 == values.len() {
            return x;
        }
        let (l, m, r) = (values[best - 1], values[best], values[best + 1]);
        let curvature = l - 2.0 * m + r;
        if !(curvature < 0.0) || !l.is_finite() || !r.is_finite() {
            return x;
        }
        let offset = 0.5 * (l - r) / curvature;
        (x + offset.clamp(-1.0, 1.0) * self.step()).clamp(self.lo, self.hi)
    }

    /// Grid point with the largest value; first one wins ties.
    fn argmax_point(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut best = (self.points[0], f64::NEG_INFINITY);
        for &x in &self.points {
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        best.0
    }
}

/// Coordinate grids for item parameters, each spanning its full range.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemGrid {
    pub a: Grid,
    pub b: Grid,
    pub c: Grid,
    /// Number of b → a → c cycles per item.
    pub cycles: usize,
}

impl Default for ItemGrid {
    fn default() -> Self {
        Self {
            a: Grid::new(A_RANGE.0, A_RANGE.1, 0.02).expect("static grid"),
            b: Grid::new(B_RANGE.0, B_RANGE.1, 0.02).expect("static grid"),
            c: Grid::new(C_RANGE.0, C_RANGE.1, 0.01).expect("static grid"),
            cycles: 2,
        }
    }
}

/// Log-likelihood of one response pattern; missing cells contribute 0.
pub fn log_likelihood(pattern: &[Response], items: &[ItemParams], theta: f64) -> Result<f64> {
    if pattern.len() != items.len() {
        return Err(Error::LengthMismatch {
            expected: items.len(),
            found: pattern.len(),
        });
    }
    Ok(pattern_ll(pattern, items, theta))
}

fn pattern_ll(pattern: &[Response], items: &[ItemParams], theta: f64) -> f64 {
    pattern
        .iter()
        .zip(items)
        .filter_map(|(r, item)| r.score().map(|u| ln_response(item.probability(theta), u)))
        .sum()
}

/// MAP ability for one response pattern under `prior.theta`.
pub fn estimate_ability_map(
    pattern: &[Response],
    items: &[ItemParams],
    prior: &PriorConfig,
    grid: &Grid,
) -> Result<Ability> {
    if pattern.len() != items.len() {
        return Err(Error::LengthMismatch {
            expected: items.len(),
            found: pattern.len(),
        });
    }
    let observed: Vec<(ItemParams, f64)> = pattern
        .iter()
        .zip(items)
        .filter_map(|(r, item)| r.score().map(|u| (*item, u)))
        .collect();
    if observed.is_empty() {
        return Err(Error::NoObservedResponses);
    }
    let theta = grid.argmax(|t| {
        observed
            .iter()
            .map(|(item, u)| ln_response(item.probability(t), *u))
            .sum::<f64>()
            + prior.theta.ln_pdf(t)
    });
    Ok(Ability::saturating(theta))
}

/// One item's observed (ability, score) pairs.
struct ItemData {
    thetas: Vec<f64>,
    scores: Vec<f64>,
}

impl ItemData {
    fn log_posterior(&self, prior: &PriorConfig, a: f64, b: f64, c: f64) -> f64 {
        let ln_prior = prior.ln_item_prior(a, b, c);
        if !ln_prior.is_finite() {
            return f64::NEG_INFINITY;
        }
        ln_prior
            + self
                .thetas
                .iter()
                .zip(&self.scores)
                .map(|(&t, &u)| ln_response(p3pl(a, b, c, t), u))
                .sum::<f64>()
    }

    fn maximize(&self, prior: &PriorConfig, grid: &ItemGrid, start: ItemParams) -> ItemParams {
        let (mut a, mut b, mut c) = (start.a(), start.b(), start.c());
        let mut logits = alloc::vec![0.0; self.thetas.len()];
        for _ in 0..grid.cycles {
            b = grid.b.argmax_point(|b| self.log_posterior(prior, a, b, c));
            a = grid.a.argmax_point(|a| self.log_posterior(prior, a, b, c));
            for (l, &t) in logits.iter_mut().zip(&self.thetas) {
                *l = logistic(crate::irt::SCALING * a * (t - b));
            }
            c = grid.c.argmax_point(|c| {
                let ln_prior = prior.ln_item_prior(a, b, c);
                if !ln_prior.is_finite() {
                    return f64::NEG_INFINITY;
                }
                ln_prior
                    + logits
                        .iter()
                        .zip(&self.scores)
                        .map(|(&l, &u)| ln_response(c + (1.0 - c) * l, u))
                        .sum::<f64>()
            });
        }
        ItemParams::new(a, b, c).expect("grid search stays inside parameter ranges")
    }
}

fn item_data(matrix: &ResponseMatrix, thetas: &[f64], item: usize) -> Result<ItemData> {
    let mut data = ItemData {
        thetas: Vec::new(),
        scores: Vec::new(),
    };
    for (s, r) in matrix.column(item).enumerate() {
        if let Some(u) = r.score() {
            data.thetas.push(thetas[s]);
            data.scores.push(u);
        }
    }
    if data.scores.is_empty() {
        return Err(Error::EmptyItem(matrix.item_ids()[item].clone()));
    }
    Ok(data)
}

/// Posterior-mode item parameters given fixed abilities, searched from the
/// bank center `(1, 0, 0.25)`.
pub fn estimate_item_params(
    matrix: &ResponseMatrix,
    abilities: &[Ability],
    prior: &PriorConfig,
    grid: &ItemGrid,
) -> Result<Vec<ItemParams>> {
    let thetas: Vec<f64> = abilities.iter().map(|a| a.get()).collect();
    let start = alloc::vec![ItemParams::bank_center(); matrix.n_items()];
    estimate_item_params_from(matrix, &thetas, prior, grid, &start)
}

/// Same as [`estimate_item_params`] but starting each coordinate search at
/// `start[i]` and taking raw (unclamped) abilities.
pub fn estimate_item_params_from(
    matrix: &ResponseMatrix,
    thetas: &[f64],
    prior: &PriorConfig,
    grid: &ItemGrid,
    start: &[ItemParams],
) -> Result<Vec<ItemParams>> {
    if thetas.len() != matrix.n_students() {
        return Err(Error::LengthMismatch {
            expected: matrix.n_students(),
            found: thetas.len(),
        });
    }
    if start.len() != matrix.n_items() {
        return Err(Error::LengthMismatch {
            expected: matrix.n_items(),
            found: start.len(),
        });
    }
    (0..matrix.n_items())
        .map(|i| Ok(item_data(matrix, thetas, i)?.maximize(prior, grid, start[i])))
        .collect()
}

/// Z-scores using the population standard deviation.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooFewValues);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let sd = libm::sqrt(var);
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(values.iter().map(|x| (x - mean) / sd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use Response::*;

    fn item(a: f64, b: f64, c: f64) -> ItemParams {
        ItemParams::new(a, b, c).unwrap()
    }

    #[test]
    fn likelihood_cases() {
        let it = item(1.0, 0.0, 0.0);
        let ll = log_likelihood(&[Correct], &[it], 0.0).unwrap();
        assert!((ll - log(0.5)).abs() < 1e-12);
        assert_eq!(log_likelihood(&[Missing, Missing], &[it, it], 0.3).unwrap(), 0.0);
        let other = item(0.6, 1.0, 0.2);
        let joint = log_likelihood(&[Correct, Incorrect], &[it, other], 0.7).unwrap();
        let sum = log_likelihood(&[Correct], &[it], 0.7).unwrap()
            + log_likelihood(&[Incorrect], &[other], 0.7).unwrap();
        assert!((joint - sum).abs() < 1e-12);
        assert!(matches!(
            log_likelihood(&[Correct], &[it, it], 0.0),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn likelihood_floors_degenerate_items() {
        let certain = item(1.0, 0.0, 1.0);
        let ll = log_likelihood(&[Incorrect], &[certain], 0.0).unwrap();
        assert!(ll.is_finite());
        assert!((ll - log(PROBABILITY_FLOOR)).abs() < 1e-6);
    }

    #[test]
    fn map_with_flat_likelihood_returns_prior_mode() {
        let flat = vec![item(0.0, 0.0, 0.0); 3];
        let theta = estimate_ability_map(
            &[Correct, Incorrect, Correct],
            &flat,
            &PriorConfig::default(),
            &Grid::theta_default(),
        )
        .unwrap();
        assert_eq!(theta.get(), 0.0);
    }

    #[test]
    fn map_rejects_all_missing() {
        let items = vec![item(1.0, 0.0, 0.0); 2];
        assert_eq!(
            estimate_ability_map(&[Missing, Missing], &items, &PriorConfig::default(), &Grid::theta_default()),
            Err(Error::NoObservedResponses)
        );
    }

    #[test]
    fn standardize_cases() {
        let z = standardize(&[1.0, 2.0, 3.0]).unwrap();
        let expected = [-1.224744871391589, 0.0, 1.224744871391589];
        for (a, b) in z.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let again = standardize(&z).unwrap();
        for (a, b) in z.iter().zip(&again) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(standardize(&[5.0, 5.0, 5.0]), Err(Error::ZeroVariance));
        assert_eq!(standardize(&[5.0]), Err(Error::TooFewValues));
    }

    #[test]
    fn grid_has_exact_endpoints_and_zero() {
        let g = Grid::theta_default();
        assert_eq!(g.points().len(), 801);
        assert_eq!(g.points()[0], -4.0);
        assert_eq!(g.points()[400], 0.0);
        assert_eq!(g.points()[800], 4.0);
    }

    #[test]
    fn item_params_require_responses() {
        let m = ResponseMatrix::from_rows(2, vec![Correct, Missing, Incorrect, Correct]).unwrap();
        let abilities = [Ability::new(0.0).unwrap(), Ability::new(1.0).unwrap()];
        let est = estimate_item_params(&m, &abilities, &PriorConfig::default(), &ItemGrid::default()).unwrap();
        assert_eq!(est.len(), 2);
        assert!(matches!(
            estimate_item_params(&m, &abilities[..1], &PriorConfig::default(), &ItemGrid::default()),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
