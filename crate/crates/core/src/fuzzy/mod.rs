//! Mamdani fuzzy systems in the FML structural model.

mod assessment;
mod infer;
mod set;
mod system;

pub use assessment::{
    build_rule_base, default_assessment_kb, default_assessment_system, ABILITY, CRP, DIFFICULTY, DISCRIMINATION,
    GUESSING,
};
pub use infer::{infer, Inference, InferenceEngine, DEFUZZ_POINTS};
pub use set::{membership, FuzzySet, Hedge, Shape};
pub use system::{Clause, FuzzyRule, FuzzySystem, FuzzyVariable, VariableKind};
