//! Laplace transforms of test inputs and lower bounds on the Laplace–Carleson
//! embedding norm.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::model::HalfPlaneMeasure;
use crate::quad::Tolerance;

/// Closed-form scalar inputs on `[0, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestInput {
    /// `u(t) = exp(-rate t)`.
    Exponential { rate: f64 },
    /// `u = 1` on `[0, tau]`.
    Indicator { tau: f64 },
    /// `u = values[i]` on `[breakpoints[i], breakpoints[i + 1])`.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

/// `exp(w) - 1` without cancellation for small `|w|`.
pub(crate) fn cexpm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let s = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

/// `(1 - exp(-z h)) / z`, with the `z -> 0` limit `h`.
fn segment_transform(z: Complex64, h: f64) -> Complex64 {
    if z.norm() * h < 1e-8 {
        return Complex64::new(h, 0.0) * (1.0 - 0.5 * z * h);
    }
    -cexpm1(-z * h) / z
}

impl TestInput {
    pub fn exponential(rate: f64) -> Self {
        TestInput::Exponential { rate }
    }

    pub fn indicator(tau: f64) -> Self {
        TestInput::Indicator { tau }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TestInput::Exponential { rate } if !(*rate > 0.0 && rate.is_finite()) => {
                Err(Error::OutOfRange {
                    name: "rate",
                    value: *rate,
                    allowed: "rate > 0",
                })
            }
            TestInput::Indicator { tau } if !(*tau > 0.0 && tau.is_finite()) => {
                Err(Error::OutOfRange {
                    name: "tau",
                    value: *tau,
                    allowed: "tau > 0",
                })
            }
            TestInput::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                if breakpoints.first() != Some(&0.0) {
                    return Err(Error::InvalidInput("breakpoints must start at 0".into()));
                }
                if breakpoints.windows(2).any(|w| !(w[1] > w[0]))
                    || breakpoints.iter().any(|b| !b.is_finite())
                {
                    return Err(Error::InvalidInput(
                        "breakpoints must be strictly increasing".into(),
                    ));
                }
                if values.len() + 1 != breakpoints.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} breakpoints need {} values, got {}",
                        breakpoints.len(),
                        breakpoints.len().saturating_sub(1),
                        values.len()
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Pieces `(start, length, value)`; exponentials have none.
    pub(crate) fn pieces(&self) -> Vec<(f64, f64, f64)> {
        match self {
            TestInput::Exponential { .. } => Vec::new(),
            TestInput::Indicator { tau } => vec![(0.0, *tau, 1.0)],
            TestInput::PiecewiseConstant {
                breakpoints,
                values,
            } => breakpoints
                .windows(2)
                .zip(values)
                .map(|(w, v)| (w[0], w[1] - w[0], *v))
                .collect(),
        }
    }

    /// `int_0^inf exp(-z t) u(t) dt`.
    pub fn laplace_at(&self, z: Complex64) -> Result<Complex64> {
        match self {
            TestInput::Exponential { rate } => {
                let d = z + rate;
                if d.norm() == 0.0 {
                    return Err(Error::PoleAtEvaluation { re: z.re, im: z.im });
                }
                if !(d.re > 0.0) {
                    return Err(Error::OutOfRange {
                        name: "Re z",
                        value: z.re,
                        allowed: "Re z > -rate",
                    });
                }
                Ok(1.0 / d)
            }
            _ => {
                if z.re < 0.0 {
                    return Err(Error::OutOfRange {
                        name: "Re z",
                        value: z.re,
                        allowed: "Re z >= 0",
                    });
                }
                Ok(self
                    .pieces()
                    .iter()
                    .map(|&(a, h, v)| v * (-z * a).exp() * segment_transform(z, h))
                    .sum())
            }
        }
    }

    /// `||u||_(L^p(0, inf))`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_norm_on(p, f64::INFINITY)
    }

    /// `||u||_(L^p(0, t))`.
    pub fn lp_norm_on(&self, p: f64, t: f64) -> f64 {
        match self {
            TestInput::Exponential { rate } => {
                let pl = p * rate;
                let frac = if t.is_finite() {
                    -(-pl * t).exp_m1()
                } else {
                    1.0
                };
                (frac / pl).powf(1.0 / p)
            }
            _ => self
                .pieces()
                .iter()
                .map(|&(a, h, v)| {
                    let len = (a + h).min(t) - a;
                    if len > 0.0 {
                        v.abs().powf(p) * len
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }

    /// Same input multiplied by `c`.
    pub fn scaled(&self, c: f64) -> ScaledInput {
        ScaledInput {
            input: self.clone(),
            factor: c,
        }
    }
}

/// A test input times a constant; exponentials and indicators are not closed
/// under scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledInput {
    pub input: TestInput,
    pub factor: f64,
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            allowed: "1 <= p < inf",
        });
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            allowed: "1 <= q < inf",
        });
    }
    Ok(())
}

/// `(int |L(c u)|^q dmu)^(1/q) / ||c u||_p`.
pub fn embedding_ratio_scaled(
    u: &ScaledInput,
    measure: &HalfPlaneMeasure,
    p: f64,
    q: f64,
) -> Result<f64> {
    check_exponents(p, q)?;
    u.input.validate()?;
    let norm = u.factor.abs() * u.input.lp_norm(p);
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("test input is zero".into()));
    }
    if measure.is_empty() {
        return Ok(0.0);
    }
    let c = u.factor;
    let r = measure
        .integrate(
            |s| match u.input.laplace_at(s) {
                Ok(v) => (c * v).norm().powf(q),
                Err(_) => f64::NAN,
            },
            Tolerance {
                abs: 1e-300,
                rel: 1e-9,
            },
        )
        .map_err(|e| match e {
            Error::IntegralDiverges(m) => Error::EmbeddingIntegralDiverges(m),
            other => other,
        })?;
    if r.value.is_nan() {
        return Err(Error::InvalidInput(
            "Laplace transform undefined on the support".into(),
        ));
    }
    Ok(r.value.max(0.0).powf(1.0 / q) / norm)
}

/// `||L u||_(L^q(mu)) / ||u||_(L^p)`.
pub fn embedding_ratio(u: &TestInput, measure: &HalfPlaneMeasure, p: f64, q: f64) -> Result<f64> {
    embedding_ratio_scaled(&u.scaled(1.0), measure, p, q)
}

/// Exponentials with rates log-spaced over `[1e-3, 1e6]`, ten per decade.
pub fn default_family() -> Vec<TestInput> {
    (0..=90)
        .map(|i| TestInput::exponential(10f64.powf(-3.0 + i as f64 / 10.0)))
        .collect()
}

/// Indicators with lengths log-spaced over `[lo, hi]`, ten per decade.
pub fn indicator_family(lo: f64, hi: f64) -> Vec<TestInput> {
    let n = ((hi / lo).log10() * 10.0).round().max(0.0) as usize;
    (0..=n)
        .map(|i| TestInput::indicator(lo * (hi / lo).powf(i as f64 / n.max(1) as f64)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingBound {
    /// Supremum of the ratio over the family.
    pub bound: f64,
    /// Slope of `ln ratio` against `ln rate` over the top decade of exponential rates.
    pub trend: f64,
    /// `(rate, ratio)` for the exponential members, in family order.
    pub exponential_ratios: Vec<(f64, f64)>,
}

/// Lower bound on the embedding norm from a family of test inputs.
pub fn embedding_lower_bound(
    measure: &HalfPlaneMeasure,
    p: f64,
    q: f64,
    family: &[TestInput],
) -> Result<EmbeddingBound> {
    if family.is_empty() {
        return Err(Error::InvalidInput("test family is empty".into()));
    }
    let ratios = family
        .par_iter()
        .map(|u| embedding_ratio(u, measure, p, q))
        .collect::<Result<Vec<_>>>()?;
    let bound = ratios.iter().copied().fold(0.0, f64::max);
    let exponential_ratios: Vec<(f64, f64)> = family
        .iter()
        .zip(&ratios)
        .filter_map(|(u, r)| match u {
            TestInput::Exponential { rate } => Some((*rate, *r)),
            _ => None,
        })
        .collect();
    let trend = exponential_trend(&exponential_ratios);
    Ok(EmbeddingBound {
        bound,
        trend,
        exponential_ratios,
    })
}

fn exponential_trend(points: &[(f64, f64)]) -> f64 {
    let Some(top) = points.iter().map(|p| p.0).reduce(f64::max) else {
        return 0.0;
    };
    let (x, y): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|(r, v)| *r >= top / 10.0 * (1.0 - 1e-12) && *v > 0.0)
        .map(|(r, v)| (r.ln(), v.ln()))
        .unzip();
    if x.len() < 2 {
        return 0.0;
    }
    least_squares(&x, &y).map_or(0.0, |f| f.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Density};
    use approx::assert_relative_eq;

    fn atom_at_one() -> HalfPlaneMeasure {
        HalfPlaneMeasure::new(
            vec![Atom {
                location: Complex64::new(1.0, 0.0),
                mass: 1.0,
                index: 1,
            }],
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn laplace_closed_forms() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            TestInput::exponential(1.0).laplace_at(one).unwrap(),
            Complex64::new(0.5, 0.0)
        );
        let tau = 2.5;
        let z = Complex64::new(0.7, -1.3);
        let ind = TestInput::indicator(tau).laplace_at(z).unwrap();
        let direct = (1.0 - (-z * tau).exp()) / z;
        assert_relative_eq!((ind - direct).norm(), 0.0, epsilon = 1e-14);
        let tiny = TestInput::indicator(tau)
            .laplace_at(Complex64::new(1e-14, 0.0))
            .unwrap();
        assert_relative_eq!(tiny.re, tau, max_relative = 1e-12);
        let pw = TestInput::PiecewiseConstant {
            breakpoints: vec![0.0, 1.0],
            values: vec![1.0],
        };
        assert_eq!(
            pw.laplace_at(z).unwrap(),
            TestInput::indicator(1.0).laplace_at(z).unwrap()
        );
        assert!(matches!(
            TestInput::exponential(1.0).laplace_at(-one),
            Err(Error::PoleAtEvaluation { .. })
        ));
    }

    #[test]
    fn norms() {
        assert_relative_eq!(
            TestInput::exponential(2.0).lp_norm(3.0),
            6f64.powf(-1.0 / 3.0)
        );
        assert_relative_eq!(TestInput::indicator(4.0).lp_norm(2.0), 2.0);
        assert_relative_eq!(TestInput::indicator(4.0).lp_norm_on(2.0, 1.0), 1.0);
    }

    #[test]
    fn single_atom_ratio() {
        let r = embedding_ratio(&TestInput::exponential(1.0), &atom_at_one(), 2.0, 2.0).unwrap();
        assert_relative_eq!(r, 0.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn zero_measure() {
        let b =
            embedding_lower_bound(&HalfPlaneMeasure::empty(), 2.0, 2.0, &default_family()).unwrap();
        assert_eq!((b.bound, b.trend), (0.0, 0.0));
    }

    #[test]
    fn density_beta_integral() {
        for gamma in [-0.5, 0.5] {
            let m = HalfPlaneMeasure::new(
                Vec::new(),
                Some(Density {
                    gamma,
                    scale: 1.0,
                    cutoff: 0.0,
                }),
                None,
            )
            .unwrap();
            for lambda in [0.1, 1.0, 10.0] {
                let r = embedding_ratio(&TestInput::exponential(lambda), &m, 2.0, 2.0).unwrap();
                let integral = (r * TestInput::exponential(lambda).lp_norm(2.0)).powi(2);
                let exact = lambda.powf(gamma - 1.0) * std::f64::consts::PI * gamma
                    / (std::f64::consts::PI * gamma).sin();
                assert_relative_eq!(integral, exact, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn divergent_density_reported() {
        // s^(1/2) against |1/(z + 1)|^1 is not integrable at infinity
        let m = HalfPlaneMeasure::new(
            Vec::new(),
            Some(Density {
                gamma: 0.5,
                scale: 1.0,
                cutoff: 1.0,
            }),
            None,
        )
        .unwrap();
        assert!(matches!(
            embedding_ratio(&TestInput::exponential(1.0), &m, 2.0, 1.0),
            Err(Error::EmbeddingIntegralDiverges(_))
        ));
    }
}
