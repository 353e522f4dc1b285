//! The assessment knowledge base (item a, b, c and student ability in,
//! probability of a correct response out) and its generated rule base.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::set::FuzzySet;
use super::system::{Clause, FuzzyRule, FuzzySystem, FuzzyVariable, VariableKind};
use crate::error::{Error, Result};
use crate::irt::p3pl;

pub const DISCRIMINATION: &str = "Discrimination";
pub const DIFFICULTY: &str = "Difficulty";
pub const GUESSING: &str = "Guessing";
pub const ABILITY: &str = "Ability";
pub const CRP: &str = "CorrectResponsePossibility";

fn variable(name: &str, domain: (f64, f64), kind: VariableKind, terms: &[(&str, [f64; 4])]) -> FuzzyVariable {
    FuzzyVariable::new(
        name,
        domain,
        kind,
        terms.iter().map(|(n, p)| FuzzySet::from_params(*n, *p)).collect(),
    )
}

/// Hand-built knowledge base with no rules.
pub fn default_assessment_kb() -> FuzzySystem {
    use VariableKind::*;
    let ability_like = [
        [-4.0, -4.0, -1.1, -0.6],
        [-1.0, -0.65, 0.05, 0.4],
        [0.05, 0.4, 0.95, 1.5],
        [0.95, 1.5, 4.0, 4.0],
    ];
    let variables = vec![
        variable(
            DISCRIMINATION,
            (0.0, 2.0),
            Input,
            &[
                ("Low", [0.0, 0.0, 0.65, 0.74]),
                ("Medium", [0.67, 0.82, 1.11, 1.25]),
                ("High", [1.17, 1.42, 2.0, 2.0]),
            ],
        ),
        variable(
            DIFFICULTY,
            (-4.0, 4.0),
            Input,
            &[
                ("VeryEasy", ability_like[0]),
                ("Easy", ability_like[1]),
                ("Average", ability_like[2]),
                ("Hard", ability_like[3]),
            ],
        ),
        variable(
            GUESSING,
            (0.0, 1.0),
            Input,
            &[
                ("Low", [0.0, 0.0, 0.17, 0.19]),
                ("Medium", [0.18, 0.21, 0.26, 0.28]),
                ("High", [0.26, 0.33, 1.0, 1.0]),
            ],
        ),
        variable(
            ABILITY,
            (-4.0, 4.0),
            Input,
            &[
                ("BelowBasic", ability_like[0]),
                ("Basic", ability_like[1]),
                ("Proficient", ability_like[2]),
                ("Advanced", ability_like[3]),
            ],
        ),
        variable(
            CRP,
            (0.0, 1.0),
            Output,
            &[
                ("VeryLow", [0.0, 0.0, 0.23, 0.34]),
                ("Low", [0.23, 0.34, 0.34, 0.58]),
                ("Average", [0.34, 0.58, 0.58, 0.8]),
                ("High", [0.58, 0.8, 0.8, 0.97]),
                ("VeryHigh", [0.8, 0.96, 1.0, 1.0]),
            ],
        ),
    ];
    FuzzySystem::new("", variables, Vec::new()).expect("static knowledge base is valid")
}

/// Output term for a crisp probability: highest membership, earliest term
/// on ties. If `p` falls outside every term's support, the term whose core
/// is nearest wins.
fn consequent_for(output: &FuzzyVariable, p: f64) -> usize {
    let mut best = (0, 0.0);
    for (k, t) in output.terms.iter().enumerate() {
        let mu = t.membership(p);
        if mu > best.1 {
            best = (k, mu);
        }
    }
    if best.1 > 0.0 {
        return best.0;
    }
    let distance = |k: usize| {
        let [_, bc, ec, _] = output.terms[k].shape.params();
        if p < bc {
            bc - p
        } else {
            (p - ec).max(0.0)
        }
    };
    (0..output.terms.len())
        .min_by(|&i, &j| distance(i).total_cmp(&distance(j)))
        .unwrap_or(0)
}

/// One rule per combination of input terms: the terms' begin-core values
/// are plugged into the 3PL curve and the output term that best matches
/// the resulting probability becomes the consequent.
///
/// Inputs are read positionally as discrimination, difficulty, guessing,
/// ability. The first input varies slowest.
pub fn build_rule_base(kb: &FuzzySystem) -> Result<FuzzySystem> {
    let inputs: Vec<&FuzzyVariable> = kb.inputs().collect();
    if inputs.len() != 4 {
        return Err(Error::InvalidFuzzy(format!(
            "rule construction needs 4 inputs (a, b, c, ability), found {}",
            inputs.len()
        )));
    }
    let output = kb.output();
    let total: usize = inputs.iter().map(|v| v.terms.len()).product();
    let mut rules = Vec::with_capacity(total);
    let mut idx = [0usize; 4];
    for n in 0..total {
        let mut rem = n;
        for k in (0..4).rev() {
            idx[k] = rem % inputs[k].terms.len();
            rem /= inputs[k].terms.len();
        }
        let anchor = |k: usize| inputs[k].terms[idx[k]].shape.begin_core();
        let p = p3pl(anchor(0), anchor(1), anchor(2), anchor(3));
        let consequent = &output.terms[consequent_for(output, p)];
        rules.push(FuzzyRule::new(
            format!("Rule{}", n + 1),
            (0..4)
                .map(|k| Clause::new(inputs[k].name.clone(), inputs[k].terms[idx[k]].name.clone()))
                .collect(),
            Clause::new(output.name.clone(), consequent.name.clone()),
        ));
    }
    kb.with_rules(rules)
}

/// Knowledge base plus its generated rule base.
pub fn default_assessment_system() -> FuzzySystem {
    build_rule_base(&default_assessment_kb()).expect("default knowledge base has the assessment shape")
}
