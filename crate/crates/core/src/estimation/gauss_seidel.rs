use alloc::vec::Vec;

use super::{estimate_ability_map, estimate_item_params_from, standardize, Grid, ItemGrid, PriorConfig, ResponseMatrix};
use crate::error::{Error, Result};
use crate::irt::{Ability, ItemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct GsConfig {
    pub default_item: ItemParams,
    pub theta_grid: Grid,
    pub item_grid: ItemGrid,
    pub max_sweeps: usize,
    /// Converged once no item parameter moves by this much in a sweep.
    pub tolerance: f64,
}

impl Default for GsConfig {
    fn default() -> Self {
        Self {
            default_item: ItemParams::bank_center(),
            theta_grid: Grid::theta_default(),
            item_grid: ItemGrid::default(),
            max_sweeps: 100,
            tolerance: 1e-3,
        }
    }
}

impl GsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsEstimate {
    pub items: Vec<ItemParams>,
    /// Standardized abilities from the last sweep.
    pub abilities: Vec<Ability>,
    pub sweeps: usize,
    /// Largest parameter change observed in each sweep.
    pub changes: Vec<f64>,
}

/// Alternates MAP abilities, standardization and item-parameter search.
pub fn gauss_seidel_estimate(matrix: &ResponseMatrix, cfg: &GsConfig, prior: &PriorConfig) -> Result<GsEstimate> {
    cfg.validate()?;
    prior.validate()?;
    let mut items = alloc::vec![cfg.default_item; matrix.n_items()];
    let mut changes = Vec::new();
    let mut z = Vec::new();
    for _ in 0..cfg.max_sweeps {
        let raw = matrix
            .rows()
            .map(|row| estimate_ability_map(row, &items, prior, &cfg.theta_grid).map(Ability::get))
            .collect::<Result<Vec<f64>>>()?;
        z = standardize(&raw)?;
        let next = estimate_item_params_from(matrix, &z, prior, &cfg.item_grid, &items)?;
        let change = items
            .iter()
            .zip(&next)
            .map(|(old, new)| {
                (old.a() - new.a())
                    .abs()
                    .max((old.b() - new.b()).abs())
                    .max((old.c() - new.c()).abs())
            })
            .fold(0.0, f64::max);
        items = next;
        changes.push(change);
        if change < cfg.tolerance {
            break;
        }
    }
    Ok(GsEstimate {
        items,
        abilities: z.into_iter().map(Ability::saturating).collect(),
        sweeps: changes.len(),
        changes,
    })
}
