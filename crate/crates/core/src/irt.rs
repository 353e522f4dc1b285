//! Three-parameter logistic item response model.
//!
//! `P(θ) = c + (1 − c) / (1 + exp(−1.7·a·(θ − b)))`, with item information,
//! test information, test standard error, T-scores and the four reporting
//! levels built on top of it. Abilities are plain `f64` in these functions;
//! [`Ability`] is the validated carrier used by estimators and reports.

use core::fmt;

use libm::sqrt;

use crate::error::{Error, Result};
use crate::math::logistic;

/// Scaling constant that brings the logistic close to the normal ogive.
pub const SCALING: f64 = 1.7;

pub const A_RANGE: (f64, f64) = (0.0, 2.0);
pub const B_RANGE: (f64, f64) = (-4.0, 4.0);
pub const C_RANGE: (f64, f64) = (0.0, 1.0);
pub const THETA_RANGE: (f64, f64) = (-4.0, 4.0);

fn check(name: &'static str, value: f64, (lo, hi): (f64, f64)) -> Result<f64> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// Discrimination `a`, difficulty `b` and guessing `c` of one item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItemParams {
    a: f64,
    b: f64,
    c: f64,
}

impl ItemParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            a: check("a", a, A_RANGE)?,
            b: check("b", b, B_RANGE)?,
            c: check("c", c, C_RANGE)?,
        })
    }

    /// Center of a four-option item bank: `a = 1, b = 0, c = 0.25`.
    pub const fn bank_center() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.25 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn probability(&self, theta: f64) -> f64 {
        p3pl(self.a, self.b, self.c, theta)
    }
}

/// Unchecked 3PL curve; callers outside the validated types (rule
/// construction, fuzzy anchors) use this directly.
#[inline]
pub fn p3pl(a: f64, b: f64, c: f64, theta: f64) -> f64 {
    c + (1.0 - c) * logistic(SCALING * a * (theta - b))
}

/// Latent ability on the `[-4, 4]` scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Ability(f64);

impl Ability {
    pub fn new(theta: f64) -> Result<Self> {
        check("theta", theta, THETA_RANGE).map(Self)
    }

    /// Clamps a finite value into the ability range.
    pub fn saturating(theta: f64) -> Self {
        Self(theta.clamp(THETA_RANGE.0, THETA_RANGE.1))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Ability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PerformanceLevel {
    BelowBasic,
    Basic,
    Proficient,
    Advanced,
}

impl PerformanceLevel {
    pub const ALL: [PerformanceLevel; 4] = [
        PerformanceLevel::BelowBasic,
        PerformanceLevel::Basic,
        PerformanceLevel::Proficient,
        PerformanceLevel::Advanced,
    ];

    /// Half-open ability band `[lo, hi)`, truncated to the ability range.
    pub fn theta_band(self) -> (f64, f64) {
        match self {
            PerformanceLevel::BelowBasic => (THETA_RANGE.0, -1.0),
            PerformanceLevel::Basic => (-1.0, -0.4),
            PerformanceLevel::Proficient => (-0.4, 1.5),
            PerformanceLevel::Advanced => (1.5, THETA_RANGE.1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PerformanceLevel::BelowBasic => "BelowBasic",
            PerformanceLevel::Basic => "Basic",
            PerformanceLevel::Proficient => "Proficient",
            PerformanceLevel::Advanced => "Advanced",
        }
    }

    /// Case-insensitive lookup that also accepts `below-basic` / `below_basic`.
    pub fn from_name(name: &str) -> Option<Self> {
        let mut key = [0u8; 16];
        let mut n = 0;
        for ch in name.bytes().filter(|b| !matches!(b, b'-' | b'_' | b' ')) {
            if n == key.len() {
                return None;
            }
            key[n] = ch.to_ascii_lowercase();
            n += 1;
        }
        match &key[..n] {
            b"belowbasic" => Some(Self::BelowBasic),
            b"basic" => Some(Self::Basic),
            b"proficient" => Some(Self::Proficient),
            b"advanced" => Some(Self::Advanced),
            _ => None,
        }
    }
}

impl fmt::Display for PerformanceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn icc_probability(item: &ItemParams, theta: f64) -> f64 {
    item.probability(theta)
}

/// Fisher information of one item at `theta`.
pub fn item_information(item: &ItemParams, theta: f64) -> Result<f64> {
    if item.c >= 1.0 {
        return Err(Error::DegenerateItem);
    }
    let p = item.probability(theta);
    if p <= 0.0 {
        return Ok(0.0);
    }
    let q = 1.0 - p;
    let r = (p - item.c) / (1.0 - item.c);
    Ok(SCALING * SCALING * item.a * item.a * (q / p) * r * r)
}

pub fn test_information(items: &[ItemParams], theta: f64) -> Result<f64> {
    if items.is_empty() {
        return Err(Error::EmptyItems);
    }
    items.iter().map(|item| item_information(item, theta)).sum()
}

pub fn test_standard_error(items: &[ItemParams], theta: f64) -> Result<f64> {
    standard_error_from_information(test_information(items, theta)?)
}

pub fn standard_error_from_information(tif: f64) -> Result<f64> {
    if tif > 0.0 {
        Ok(1.0 / sqrt(tif))
    } else {
        Err(Error::ZeroInformation)
    }
}

pub fn t_score(theta: f64) -> f64 {
    theta * 10.0 + 50.0
}

pub fn performance_level(theta: f64) -> PerformanceLevel {
    if theta < -1.0 {
        PerformanceLevel::BelowBasic
    } else if theta < -0.4 {
        PerformanceLevel::Basic
    } else if theta < 1.5 {
        PerformanceLevel::Proficient
    } else {
        PerformanceLevel::Advanced
    }
}

/// The 20-item demonstration bank (a, b, c), numbered 1..=20.
pub const DEMO_BANK: [(f64, f64, f64); 20] = [
    (1.1, 1.0, 0.1),
    (0.77, 0.75, 0.23),
    (0.7, -0.06, 0.14),
    (1.6, 0.0, 0.11),
    (2.0, 1.7, 0.03),
    (1.5, 0.0, 0.0),
    (1.0, 0.0, 0.0),
    (0.5, 0.0, 0.0),
    (1.0, 2.0, 0.0),
    (1.0, 0.0, 0.0),
    (1.0, -2.0, 0.0),
    (1.0, 0.0, 0.5),
    (1.0, 0.0, 0.25),
    (1.0, 0.0, 0.0),
    (0.5, -0.5, 0.5),
    (1.0, 0.0, 0.25),
    (1.5, 0.5, 0.0),
    (0.5, 1.0, 0.0),
    (1.0, 1.5, 0.5),
    (1.5, -1.0, 0.25),
];

pub fn demo_bank() -> alloc::vec::Vec<ItemParams> {
    DEMO_BANK
        .iter()
        .map(|&(a, b, c)| ItemParams { a, b, c })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn item(a: f64, b: f64, c: f64) -> ItemParams {
        ItemParams::new(a, b, c).unwrap()
    }

    #[test]
    fn icc_anchor_values() {
        let it = item(0.96, 0.59, 0.23);
        assert!((icc_probability(&it, 1.5) - 0.857).abs() <= 0.002);
        assert!((icc_probability(&it, -1.5) - 0.254).abs() <= 0.002);
        assert_eq!(icc_probability(&item(1.3, 0.7, 0.0), 0.7), 0.5);
        assert_eq!(icc_probability(&item(1.0, 0.0, 0.5), 0.0), 0.75);
    }

    #[test]
    fn icc_at_difficulty_is_midpoint_of_guessing_and_one() {
        for c in [0.0, 0.1, 0.33, 0.9] {
            let it = item(1.2, -0.5, c);
            assert!((icc_probability(&it, -0.5) - (1.0 + c) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn information_values() {
        assert!((item_information(&item(1.0, 0.0, 0.0), 0.0).unwrap() - 0.7225).abs() < 1e-12);
        let far = item_information(&item(1.0, 2.0, 0.0), -4.0).unwrap();
        assert!(far < 0.01);
        let near = item_information(&item(1.0, 2.0, 0.0), 2.0).unwrap();
        let i2 = item_information(&item(2.0, 2.0, 0.0), 2.0).unwrap();
        assert!((i2 / near - 4.0).abs() < 1e-12);
        assert_eq!(
            item_information(&item(1.0, 0.0, 1.0), 0.0),
            Err(Error::DegenerateItem)
        );
    }

    #[test]
    fn test_information_sums() {
        let base = item(1.0, 0.0, 0.0);
        assert!((test_information(&[base, base], 0.0).unwrap() - 1.445).abs() < 1e-12);
        let other = item(0.7, 1.2, 0.2);
        assert_eq!(
            test_information(&[base], 0.3).unwrap(),
            item_information(&base, 0.3).unwrap()
        );
        let ab = test_information(&[base, other], 0.3).unwrap();
        let ba = test_information(&[other, base], 0.3).unwrap();
        assert!((ab - ba).abs() < 1e-15);
        assert_eq!(test_information(&[], 0.0), Err(Error::EmptyItems));
    }

    #[test]
    fn standard_error_values() {
        assert_eq!(standard_error_from_information(4.0).unwrap(), 0.5);
        assert_eq!(standard_error_from_information(1.0).unwrap(), 1.0);
        assert!(standard_error_from_information(11.2).unwrap() < 0.3);
        assert_eq!(
            standard_error_from_information(0.0),
            Err(Error::ZeroInformation)
        );
        let flat = vec![item(0.0, 0.0, 0.0)];
        assert_eq!(test_standard_error(&flat, 0.0), Err(Error::ZeroInformation));
    }

    #[test]
    fn level_boundaries() {
        assert_eq!(t_score(0.0), 50.0);
        assert_eq!(t_score(1.5), 65.0);
        assert_eq!(t_score(-1.0), 40.0);
        assert_eq!(performance_level(-1.01), PerformanceLevel::BelowBasic);
        assert_eq!(performance_level(-1.0), PerformanceLevel::Basic);
        assert_eq!(performance_level(-0.4), PerformanceLevel::Proficient);
        assert_eq!(performance_level(1.5), PerformanceLevel::Advanced);
        assert!(PerformanceLevel::BelowBasic < PerformanceLevel::Advanced);
        assert_eq!(
            PerformanceLevel::from_name("below-basic"),
            Some(PerformanceLevel::BelowBasic)
        );
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ItemParams::new(2.1, 0.0, 0.0).is_err());
        assert!(ItemParams::new(1.0, -4.5, 0.0).is_err());
        assert!(ItemParams::new(1.0, 0.0, f64::NAN).is_err());
        assert!(Ability::new(f64::INFINITY).is_err());
        assert!(Ability::new(4.0).is_ok());
    }

    #[test]
    fn demo_item_twelve() {
        assert_eq!(demo_bank()[11].probability(0.0), 0.75);
    }
}
