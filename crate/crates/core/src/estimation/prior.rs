use alloc::format;

use crate::error::{Error, Result};
use crate::math::{ln_beta_pdf, ln_chi_pdf, ln_normal_pdf};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPrior {
    pub mean: f64,
    pub sd: f64,
}

/// `x / scale` follows a chi distribution with `dof` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiPrior {
    pub dof: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPrior {
    pub alpha: f64,
    pub beta: f64,
}

impl NormalPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_normal_pdf(x, self.mean, self.sd)
    }
}

impl ChiPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_chi_pdf(x, self.dof, self.scale)
    }

    pub fn mode(&self) -> f64 {
        libm::sqrt((self.dof - 1.0).max(0.0)) * self.scale
    }
}

impl BetaPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_beta_pdf(x, self.alpha, self.beta)
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn mode(&self) -> f64 {
        (self.alpha - 1.0) / (self.alpha + self.beta - 2.0)
    }
}

/// Priors on ability and on the three item parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    pub theta: NormalPrior,
    pub b: NormalPrior,
    pub a: ChiPrior,
    pub c: BetaPrior,
}

impl Default for PriorConfig {
    /// θ, b ~ N(0, 1); a ~ 0.5·chi(5) (mode 1); c ~ Beta(2, 6) (mean 0.25).
    fn default() -> Self {
        Self {
            theta: NormalPrior { mean: 0.0, sd: 1.0 },
            b: NormalPrior { mean: 0.0, sd: 1.0 },
            a: ChiPrior { dof: 5.0, scale: 0.5 },
            c: BetaPrior { alpha: 2.0, beta: 6.0 },
        }
    }
}

impl PriorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("theta sd", self.theta.sd),
            ("b sd", self.b.sd),
            ("a dof", self.a.dof),
            ("a scale", self.a.scale),
            ("c alpha", self.c.alpha),
            ("c beta", self.c.beta),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!("prior {name} must be positive, got {value}")));
            }
        }
        if !self.theta.mean.is_finite() || !self.b.mean.is_finite() {
            return Err(Error::InvalidConfig("prior means must be finite".into()));
        }
        Ok(())
    }

    pub(crate) fn ln_item_prior(&self, a: f64, b: f64, c: f64) -> f64 {
        self.a.ln_pdf(a) + self.b.ln_pdf(b) + self.c.ln_pdf(c)
    }
}
