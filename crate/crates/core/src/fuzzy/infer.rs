use alloc::vec::Vec;

use super::set::trapezoid;
use super::system::FuzzySystem;
use crate::error::{Error, Result};

/// Output-domain sample count for centroid defuzzification.
pub const DEFUZZ_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inference {
    pub value: f64,
    /// True when every rule had zero strength; `value` is then the
    /// output-domain midpoint.
    pub no_rule_fired: bool,
}

struct CompiledInput {
    name: alloc::string::String,
    left: f64,
    right: f64,
    first_term: usize,
    terms: Vec<[f64; 4]>,
}

struct CompiledRule {
    antecedent: Vec<usize>,
    consequent: usize,
    weight: f64,
}

/// A [`FuzzySystem`] flattened for repeated evaluation.
pub struct InferenceEngine {
    inputs: Vec<CompiledInput>,
    n_input_terms: usize,
    rules: Vec<CompiledRule>,
    n_output_terms: usize,
    output_domain: (f64, f64),
    ys: Vec<f64>,
    /// Output term memberships, `n_output_terms × DEFUZZ_POINTS`.
    table: Vec<f64>,
    /// Index range of each output term's support on the sample grid.
    supports: Vec<(usize, usize)>,
}

impl InferenceEngine {
    pub fn new(sys: &FuzzySystem) -> Self {
        let mut inputs = Vec::new();
        let mut offset = 0;
        for v in sys.inputs() {
            inputs.push(CompiledInput {
                name: v.name.clone(),
                left: v.domain_left,
                right: v.domain_right,
                first_term: offset,
                terms: v.terms.iter().map(|t| t.shape.params()).collect(),
            });
            offset += v.terms.len();
        }
        let input_index = |name: &str| {
            sys.inputs()
                .position(|v| v.name == name)
                .expect("validated rule references an input")
        };
        let out = sys.output();
        let rules = sys
            .rules()
            .iter()
            .map(|r| CompiledRule {
                antecedent: r
                    .antecedent
                    .iter()
                    .map(|c| {
                        let vi = input_index(&c.variable);
                        let ti = sys.inputs().nth(vi).unwrap().term(&c.term).unwrap();
                        inputs[vi].first_term + ti
                    })
                    .collect(),
                consequent: out.term(&r.consequent.term).expect("validated consequent"),
                weight: r.weight,
            })
            .collect();

        let (lo, hi) = (out.domain_left, out.domain_right);
        let ys: Vec<f64> = (0..DEFUZZ_POINTS)
            .map(|k| lo + (hi - lo) * k as f64 / (DEFUZZ_POINTS - 1) as f64)
            .collect();
        let mut table = Vec::with_capacity(out.terms.len() * DEFUZZ_POINTS);
        let mut supports = Vec::with_capacity(out.terms.len());
        for term in &out.terms {
            let [bs, bc, ec, es] = term.shape.params();
            let start = table.len();
            table.extend(ys.iter().map(|&y| trapezoid(bs, bc, ec, es, y)));
            let row = &table[start..];
            let first = row.iter().position(|m| *m > 0.0).unwrap_or(DEFUZZ_POINTS);
            let last = row.iter().rposition(|m| *m > 0.0).map_or(0, |k| k + 1);
            supports.push((first, last.max(first)));
        }
        Self {
            inputs,
            n_input_terms: offset,
            rules,
            n_output_terms: out.terms.len(),
            output_domain: (lo, hi),
            ys,
            table,
            supports,
        }
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    /// Strength of each output term after MIN firing and MAX aggregation.
    pub fn term_strengths(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::LengthMismatch {
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        let mut mu = alloc::vec![0.0; self.n_input_terms];
        for (var, &x) in self.inputs.iter().zip(inputs) {
            if !(x >= var.left && x <= var.right) {
                return Err(Error::InputOutOfDomain {
                    variable: var.name.clone(),
                    value: x,
                });
            }
            for (k, &[bs, bc, ec, es]) in var.terms.iter().enumerate() {
                mu[var.first_term + k] = trapezoid(bs, bc, ec, es, x);
            }
        }
        let mut strengths = alloc::vec![0.0; self.n_output_terms];
        for rule in &self.rules {
            let mut s = rule.weight;
            for &t in &rule.antecedent {
                s = s.min(mu[t]);
                if s == 0.0 {
                    break;
                }
            }
            if s > strengths[rule.consequent] {
                strengths[rule.consequent] = s;
            }
        }
        Ok(strengths)
    }

    pub fn infer(&self, inputs: &[f64]) -> Result<Inference> {
        let strengths = self.term_strengths(inputs)?;
        let (mut lo, mut hi) = (DEFUZZ_POINTS, 0);
        for (t, &s) in strengths.iter().enumerate() {
            if s > 0.0 {
                lo = lo.min(self.supports[t].0);
                hi = hi.max(self.supports[t].1);
            }
        }
        let (mut num, mut den) = (0.0, 0.0);
        for k in lo..hi {
            let mut agg: f64 = 0.0;
            for (t, &s) in strengths.iter().enumerate() {
                if s > 0.0 {
                    agg = agg.max(s.min(self.table[t * DEFUZZ_POINTS + k]));
                }
            }
            num += self.ys[k] * agg;
            den += agg;
        }
        if den > 0.0 {
            Ok(Inference {
                value: (num / den).clamp(self.output_domain.0, self.output_domain.1),
                no_rule_fired: false,
            })
        } else {
            Ok(Inference {
                value: 0.5 * (self.output_domain.0 + self.output_domain.1),
                no_rule_fired: true,
            })
        }
    }
}

/// Mamdani inference with centroid defuzzification; `inputs` follow the
/// declaration order of the input variables.
pub fn infer(sys: &FuzzySystem, inputs: &[f64]) -> Result<Inference> {
    InferenceEngine::new(sys).infer(inputs)
}
