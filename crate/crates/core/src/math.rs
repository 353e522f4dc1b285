use libm::{exp, lgamma, log};

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

pub(crate) fn ln_normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - log(sd) - LN_SQRT_2PI
}

/// Log density of a scaled chi distribution: `x / scale ~ chi(dof)`.
pub(crate) fn ln_chi_pdf(x: f64, dof: f64, scale: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let y = x / scale;
    (1.0 - 0.5 * dof) * core::f64::consts::LN_2 - lgamma(0.5 * dof) + (dof - 1.0) * log(y)
        - 0.5 * y * y
        - log(scale)
}

pub(crate) fn ln_beta_pdf(x: f64, alpha: f64, beta: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let ln_b = lgamma(alpha) + lgamma(beta) - lgamma(alpha + beta);
    (alpha - 1.0) * log(x) + (beta - 1.0) * log(1.0 - x) - ln_b
}

pub(crate) fn normal_pdf(x: f64) -> f64 {
    exp(-0.5 * x * x - LN_SQRT_2PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let n = 200_000;
        let h = (hi - lo) / n as f64;
        (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn densities_integrate_to_one() {
        let chi = integrate(|x| exp(ln_chi_pdf(x, 5.0, 0.5)), 0.0, 10.0);
        let beta = integrate(|x| exp(ln_beta_pdf(x, 2.0, 6.0)), 0.0, 1.0);
        let normal = integrate(|x| exp(ln_normal_pdf(x, 0.3, 1.7)), -20.0, 20.0);
        assert!((chi - 1.0).abs() < 1e-6, "{chi}");
        assert!((beta - 1.0).abs() < 1e-6, "{beta}");
        assert!((normal - 1.0).abs() < 1e-6, "{normal}");
    }

    #[test]
    fn chi_mode_at_one_for_default_prior() {
        let best = (1..400)
            .map(|i| i as f64 * 0.005)
            .max_by(|a, b| ln_chi_pdf(*a, 5.0, 0.5).total_cmp(&ln_chi_pdf(*b, 5.0, 0.5)))
            .unwrap();
        assert!((best - 1.0).abs() < 0.006);
    }

    #[test]
    fn logistic_is_symmetric() {
        for x in [-30.0, -2.0, 0.0, 1.5, 40.0] {
            assert!((logistic(x) + logistic(-x) - 1.0).abs() < 1e-15);
        }
    }
}
