use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzySet, FuzzySystem, FuzzyVariable, Shape};

/// One variable's slice of the particle: `4 × terms` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub offset: usize,
    pub terms: usize,
    pub domain_left: f64,
    pub domain_right: f64,
    /// First term starts with `BS = BC = domain_left` in the seed.
    pub left_shoulder: bool,
    /// Last term ends with `EC = ES = domain_right` in the seed.
    pub right_shoulder: bool,
}

impl Block {
    pub fn len(&self) -> usize {
        4 * self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms == 0
    }

    pub fn range(&self) -> core::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }

    pub fn width(&self) -> f64 {
        self.domain_right - self.domain_left
    }
}

/// Maps a knowledge base onto a flat parameter vector, variable by
/// variable in declaration order, `(BS, BC, EC, ES)` per term.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleLayout {
    blocks: Vec<Block>,
    template: FuzzySystem,
}

impl ParticleLayout {
    pub fn from_kb(seed: &FuzzySystem) -> Self {
        let mut blocks = Vec::with_capacity(seed.variables().len());
        let mut offset = 0;
        for v in seed.variables() {
            let first = v.terms[0].shape.params();
            let last = v.terms[v.terms.len() - 1].shape.params();
            blocks.push(Block {
                offset,
                terms: v.terms.len(),
                domain_left: v.domain_left,
                domain_right: v.domain_right,
                left_shoulder: first[0] == v.domain_left && first[1] == v.domain_left,
                right_shoulder: last[2] == v.domain_right && last[3] == v.domain_right,
            });
            offset += 4 * v.terms.len();
        }
        Self {
            blocks,
            template: seed.clone(),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    pub fn template(&self) -> &FuzzySystem {
        &self.template
    }

    fn matches(&self, kb: &FuzzySystem) -> bool {
        kb.variables().len() == self.blocks.len()
            && kb
                .variables()
                .iter()
                .zip(&self.blocks)
                .all(|(v, b)| v.terms.len() == b.terms && v.domain_left == b.domain_left && v.domain_right == b.domain_right)
    }
}

pub fn encode(kb: &FuzzySystem, layout: &ParticleLayout) -> Result<Vec<f64>> {
    if !layout.matches(kb) {
        return Err(Error::InvalidFuzzy("knowledge base does not match the particle layout".into()));
    }
    Ok(kb
        .variables()
        .iter()
        .flat_map(|v| v.terms.iter().flat_map(|t| t.shape.params()))
        .collect())
}

/// Rebuilds the template system with the given set parameters; names,
/// domains and rules are kept.
pub fn decode(position: &[f64], layout: &ParticleLayout) -> Result<FuzzySystem> {
    if position.len() != layout.dimension() {
        return Err(Error::LengthMismatch {
            expected: layout.dimension(),
            found: position.len(),
        });
    }
    let variables: Vec<FuzzyVariable> = layout
        .template
        .variables()
        .iter()
        .zip(&layout.blocks)
        .map(|(v, b)| {
            let params = &position[b.range()];
            let terms = v
                .terms
                .iter()
                .zip(params.chunks_exact(4))
                .map(|(t, p)| FuzzySet {
                    name: t.name.clone(),
                    shape: Shape::from_params([p[0], p[1], p[2], p[3]]),
                    hedge: t.hedge,
                })
                .collect();
            FuzzyVariable { terms, ..v.clone() }
        })
        .collect();
    layout.template.with_variables(variables)
}
