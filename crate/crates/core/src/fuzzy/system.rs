use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::set::FuzzySet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    pub name: String,
    pub domain_left: f64,
    pub domain_right: f64,
    pub kind: VariableKind,
    pub terms: Vec<FuzzySet>,
}

impl FuzzyVariable {
    pub fn new(
        name: impl Into<String>,
        (domain_left, domain_right): (f64, f64),
        kind: VariableKind,
        terms: Vec<FuzzySet>,
    ) -> Self {
        Self {
            name: name.into(),
            domain_left,
            domain_right,
            kind,
            terms,
        }
    }

    pub fn term(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == name)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.domain_left && x <= self.domain_right
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidFuzzy(format!("variable `{}`: {msg}", self.name)));
        if self.name.is_empty() {
            return invalid("empty name".into());
        }
        if !(self.domain_left.is_finite() && self.domain_right.is_finite() && self.domain_left < self.domain_right) {
            return invalid(format!("domain [{}, {}] is empty", self.domain_left, self.domain_right));
        }
        if self.terms.is_empty() {
            return invalid("no terms".into());
        }
        for (k, term) in self.terms.iter().enumerate() {
            if term.name.is_empty() {
                return invalid(format!("term {} has an empty name", k + 1));
            }
            if self.terms[..k].iter().any(|t| t.name == term.name) {
                return invalid(format!("duplicate term `{}`", term.name));
            }
            if !term.shape.is_ordered() {
                return invalid(format!("term `{}` parameters {:?} are not ascending", term.name, term.shape.params()));
            }
            let p = term.shape.params();
            if p[0] < self.domain_left || p[3] > self.domain_right {
                return invalid(format!("term `{}` parameters {:?} leave the domain", term.name, p));
            }
        }
        if self
            .terms
            .windows(2)
            .any(|w| w[1].shape.begin_support() < w[0].shape.begin_support())
        {
            return invalid("terms are not ordered by begin support".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub variable: String,
    pub term: String,
}

impl Clause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

/// Conjunctive (MIN) rule with a single consequent clause.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub name: String,
    pub antecedent: Vec<Clause>,
    pub consequent: Clause,
    pub weight: f64,
}

impl FuzzyRule {
    pub fn new(name: impl Into<String>, antecedent: Vec<Clause>, consequent: Clause) -> Self {
        Self {
            name: name.into(),
            antecedent,
            consequent,
            weight: 1.0,
        }
    }
}

/// Mamdani system: MIN and, MAX or, MIN activation, MAX aggregation.
///
/// Construction validates every invariant; the fields are read-only
/// afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    name: String,
    variables: Vec<FuzzyVariable>,
    rule_base_name: String,
    rules: Vec<FuzzyRule>,
}

impl FuzzySystem {
    pub fn new(name: impl Into<String>, variables: Vec<FuzzyVariable>, rules: Vec<FuzzyRule>) -> Result<Self> {
        Self::with_rule_base_name(name, variables, "RuleBase1", rules)
    }

    pub fn with_rule_base_name(
        name: impl Into<String>,
        variables: Vec<FuzzyVariable>,
        rule_base_name: impl Into<String>,
        rules: Vec<FuzzyRule>,
    ) -> Result<Self> {
        let sys = Self {
            name: name.into(),
            variables,
            rule_base_name: rule_base_name.into(),
            rules,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule_base_name(&self) -> &str {
        &self.rule_base_name
    }

    pub fn variables(&self) -> &[FuzzyVariable] {
        &self.variables
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn inputs(&self) -> impl Iterator<Item = &FuzzyVariable> {
        self.variables.iter().filter(|v| v.kind == VariableKind::Input)
    }

    pub fn output(&self) -> &FuzzyVariable {
        self.variables
            .iter()
            .find(|v| v.kind == VariableKind::Output)
            .expect("validated system has an output")
    }

    pub fn variable(&self, name: &str) -> Option<&FuzzyVariable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Same knowledge base with a different rule base.
    pub fn with_rules(&self, rules: Vec<FuzzyRule>) -> Result<Self> {
        Self::with_rule_base_name(self.name.clone(), self.variables.clone(), self.rule_base_name.clone(), rules)
    }

    /// Same rules with a different knowledge base.
    pub fn with_variables(&self, variables: Vec<FuzzyVariable>) -> Result<Self> {
        Self::with_rule_base_name(self.name.clone(), variables, self.rule_base_name.clone(), self.rules.clone())
    }

    fn validate(&self) -> Result<()> {
        for (k, v) in self.variables.iter().enumerate() {
            v.validate()?;
            if self.variables[..k].iter().any(|o| o.name == v.name) {
                return Err(Error::InvalidFuzzy(format!("duplicate variable `{}`", v.name)));
            }
        }
        let outputs = self.variables.iter().filter(|v| v.kind == VariableKind::Output).count();
        if outputs != 1 {
            return Err(Error::InvalidFuzzy(format!("expected exactly one output variable, found {outputs}")));
        }
        if self.inputs().next().is_none() {
            return Err(Error::InvalidFuzzy("no input variables".into()));
        }
        let capacity = self
            .inputs()
            .map(|v| v.terms.len())
            .try_fold(1usize, |acc, n| acc.checked_mul(n))
            .unwrap_or(usize::MAX);
        if self.rules.len() > capacity {
            return Err(Error::InvalidFuzzy(format!(
                "{} rules exceed the {capacity} input term combinations",
                self.rules.len()
            )));
        }
        for rule in &self.rules {
            self.validate_rule(rule)?;
        }
        Ok(())
    }

    fn validate_rule(&self, rule: &FuzzyRule) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidFuzzy(format!("rule `{}`: {msg}", rule.name)));
        if rule.antecedent.is_empty() {
            return fail("empty antecedent".into());
        }
        if !(rule.weight.is_finite() && (0.0..=1.0).contains(&rule.weight)) {
            return fail(format!("weight {} outside [0, 1]", rule.weight));
        }
        for (k, clause) in rule.antecedent.iter().enumerate() {
            match self.variable(&clause.variable) {
                Some(v) if v.kind == VariableKind::Input => {
                    if v.term(&clause.term).is_none() {
                        return fail(format!("unknown term `{}` for variable `{}`", clause.term, clause.variable));
                    }
                }
                Some(_) => return fail(format!("`{}` is not an input variable", clause.variable)),
                None => return fail(format!("unknown variable `{}`", clause.variable)),
            }
            if rule.antecedent[..k].iter().any(|c| c.variable == clause.variable) {
                return fail(format!("variable `{}` appears twice", clause.variable));
            }
        }
        let out = self.output();
        if rule.consequent.variable != out.name {
            return fail(format!("consequent variable `{}` is not the output", rule.consequent.variable));
        }
        if out.term(&rule.consequent.term).is_none() {
            return fail(format!(
                "unknown term `{}` for variable `{}`",
                rule.consequent.term, rule.consequent.variable
            ));
        }
        Ok(())
    }
}
