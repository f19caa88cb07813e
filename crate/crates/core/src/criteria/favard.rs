use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{MeasureConfig, ScanConfig};
use crate::error::Result;
use crate::fit::least_squares;
use crate::model::{build_measure, HalfPlaneMeasure, SystemDescriptor};
use crate::quad::Tolerance;

use super::resolvent::resolvent_norm;
use super::series::membership_on;

/// Which vector the Favard norm is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FavardLevel {
    /// `x = b` in the state space: `sup lambda^alpha ||A R(lambda) b||`.
    State,
    /// `x = A^(-1) b`, so the quantity is `sup lambda^alpha ||R(lambda) b||`;
    /// finite for control vectors outside the state space.
    Extrapolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FavardNorm {
    pub value: f64,
    /// False when the value is the `+inf` sentinel.
    pub finite: bool,
    pub edge_slope: Option<f64>,
    pub argmax: f64,
}

impl FavardNorm {
    fn infinite(edge_slope: Option<f64>) -> Self {
        FavardNorm {
            value: f64::INFINITY,
            finite: false,
            edge_slope,
            argmax: f64::NAN,
        }
    }
}

fn state_norm(measure: &HalfPlaneMeasure, q: f64, lambda: f64) -> Result<f64> {
    let l = Complex64::new(lambda, 0.0);
    let r = measure.integrate(
        |s| (s.norm_sqr() / (l + s).norm_sqr()).powf(0.5 * q),
        Tolerance {
            abs: 1e-300,
            rel: 1e-11,
        },
    )?;
    Ok(r.value.max(0.0).powf(1.0 / q))
}

fn edge_slope(lambdas: &[f64], values: &[f64], octaves: usize) -> Option<f64> {
    let top = lambdas.last()?.log2().floor() as i32;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for j in (top - octaves as i32)..top {
        let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
        let m = lambdas
            .iter()
            .zip(values)
            .filter(|(l, _)| **l >= lo && **l < hi)
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        if m > 0.0 {
            x.push(lo.ln());
            y.push(m.ln());
        }
    }
    if x.len() < 3 {
        return None;
    }
    least_squares(&x, &y).map(|f| f.slope)
}

/// Favard norm of order `alpha` over the scan's log grid of `lambda`.
pub fn favard_norm_on(
    measure: &HalfPlaneMeasure,
    q: f64,
    alpha: f64,
    level: FavardLevel,
    scan: &ScanConfig,
) -> Result<FavardNorm> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(crate::Error::OutOfRange {
            name: "alpha",
            value: alpha,
            allowed: "0 < alpha <= 1",
        });
    }
    if measure.is_empty() {
        return Ok(FavardNorm {
            value: 0.0,
            finite: true,
            edge_slope: None,
            argmax: f64::NAN,
        });
    }
    if level == FavardLevel::State
        && measure.is_infinite()
        && membership_on(measure, q, 0.0)?.is_divergent()
    {
        return Ok(FavardNorm::infinite(None));
    }
    let per = scan.lambda_points_per_octave.max(1);
    let steps = ((scan.log2_lambda_max - scan.log2_lambda_min) * per as f64).round() as usize;
    let lambdas: Vec<f64> = (0..=steps)
        .map(|i| 2f64.powf(scan.log2_lambda_min + i as f64 / per as f64))
        .collect();
    let mut values = Vec::with_capacity(lambdas.len());
    for &l in &lambdas {
        let n = match level {
            FavardLevel::State => state_norm(measure, q, l)?,
            FavardLevel::Extrapolated => resolvent_norm(measure, q, Complex64::new(l, 0.0))?,
        };
        values.push(l.powf(alpha) * n);
    }
    let slope = edge_slope(&lambdas, &values, 8);
    if slope.is_some_and(|s| s > scan.bounded_slope) {
        return Ok(FavardNorm::infinite(slope));
    }
    let (i, v) = values.iter().enumerate().fold(
        (0, 0.0),
        |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
    );
    Ok(FavardNorm {
        value: v,
        finite: true,
        edge_slope: slope,
        argmax: lambdas[i],
    })
}

pub fn favard_norm(
    system: &SystemDescriptor,
    alpha: f64,
    level: FavardLevel,
    config: &MeasureConfig,
    scan: &ScanConfig,
) -> Result<FavardNorm> {
    let d = system.as_diagonal()?;
    let measure = build_measure(system, config)?;
    favard_norm_on(&measure, d.q, alpha, level, scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DiagonalSystem, Sequence};

    fn cfg() -> MeasureConfig {
        MeasureConfig {
            k_max: 10_000,
            ..MeasureConfig::default()
        }
    }

    #[test]
    fn single_mode_tends_to_one() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        let f = favard_norm(&s, 1.0, FavardLevel::State, &cfg(), &ScanConfig::default()).unwrap();
        assert!(f.finite);
        assert!((f.value - 1.0).abs() < 1e-5 && f.value < 1.0, "{f:?}");
    }

    #[test]
    fn zero_vector() {
        let s = SystemDescriptor::diagonal(
            "zero",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 0.0), 2.0),
        );
        let f = favard_norm(&s, 0.5, FavardLevel::State, &cfg(), &ScanConfig::default()).unwrap();
        assert_eq!(f.value, 0.0);
    }

    #[test]
    fn heat_levels() {
        let s = crate::model::catalog::lookup("heat1d-dirichlet", Default::default()).unwrap();
        let scan = ScanConfig::default();
        let state = favard_norm(&s, 0.25, FavardLevel::State, &cfg(), &scan).unwrap();
        assert!(!state.finite);
        let quarter = favard_norm(&s, 0.25, FavardLevel::Extrapolated, &cfg(), &scan).unwrap();
        assert!(
            quarter.finite && (quarter.value - 0.5f64.sqrt()).abs() < 1e-9,
            "{quarter:?}"
        );
        let half = favard_norm(&s, 0.5, FavardLevel::Extrapolated, &cfg(), &scan).unwrap();
        assert!(!half.finite);
    }
}
