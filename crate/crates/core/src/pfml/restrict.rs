use super::layout::{Block, ParticleLayout};

/// Boundary handling for the outermost breakpoints of each variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinningMethod {
    /// First BS may sit anywhere at or above the left domain edge, last ES
    /// anywhere at or below the right edge.
    Method1,
    /// First BS is held at the left domain edge and last ES at the right
    /// edge; seed shoulders keep their flat core against the edge.
    Method2,
}

/// Clamp, sort, redistribute and exchange each variable block so the
/// decoded terms are ascending and adjacent terms overlap.
pub fn restrict(position: &[f64], layout: &ParticleLayout, method: PinningMethod) -> alloc::vec::Vec<f64> {
    let mut out = position.to_vec();
    restrict_in_place(&mut out, layout, method);
    out
}

pub fn restrict_in_place(position: &mut [f64], layout: &ParticleLayout, method: PinningMethod) {
    for block in layout.blocks() {
        restrict_block(&mut position[block.range()], block, method);
    }
}

fn restrict_block(values: &mut [f64], block: &Block, method: PinningMethod) {
    for v in values.iter_mut() {
        *v = v.clamp(block.domain_left, block.domain_right);
    }
    values.sort_by(f64::total_cmp);
    // Sorted values are already laid out term by term as (BS, BC, EC, ES);
    // swap each term's BS with the previous term's ES.
    for j in 1..block.terms {
        values.swap(4 * j, 4 * j - 1);
    }
    if method == PinningMethod::Method2 {
        let n = values.len();
        values[0] = block.domain_left;
        values[n - 1] = block.domain_right;
        if block.left_shoulder {
            values[1] = block.domain_left;
        }
        if block.right_shoulder {
            values[n - 2] = block.domain_right;
        }
    }
}

/// Checks the post-conditions of [`restrict`] on one position.
pub fn satisfies_restriction(position: &[f64], layout: &ParticleLayout, method: PinningMethod) -> bool {
    layout.blocks().iter().all(|b| {
        let v = &position[b.range()];
        let inside = v.iter().all(|x| *x >= b.domain_left && *x <= b.domain_right);
        let ascending = v.chunks_exact(4).all(|t| t[0] <= t[1] && t[1] <= t[2] && t[2] <= t[3]);
        let overlapping = (1..b.terms).all(|j| v[4 * j] <= v[4 * j - 1] && v[4 * (j - 1)] <= v[4 * j]);
        let pinned = method == PinningMethod::Method1
            || (v[0] == b.domain_left && v[v.len() - 1] == b.domain_right);
        inside && ascending && overlapping && pinned
    })
}
