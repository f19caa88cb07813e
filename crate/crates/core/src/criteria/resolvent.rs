use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{MeasureConfig, ScanConfig};
use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::model::{build_measure, HalfPlaneMeasure, SystemDescriptor};
use crate::quad::Tolerance;

use super::{check_p, CriterionId, CriterionReport, Evidence, Sufficiency};

/// Whether the resolvent condition decides admissibility for a system at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeissRule {
    /// Resolvent boundedness is equivalent to infinite-time admissibility.
    Equivalent,
    SufficientOnly,
    Unknown,
}

/// Self-adjoint negative generators on a Hilbert space have the p-Weiss
/// property for `p <= 2`.
pub fn weiss_rule_applicable(system: &SystemDescriptor, p: f64) -> WeissRule {
    if system.q() == 2.0 && system.has_real_spectrum() && p <= 2.0 && p > 1.0 {
        WeissRule::Equivalent
    } else {
        WeissRule::Unknown
    }
}

/// Classification of the scanned resolvent supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResolventBound {
    Bounded,
    Unbounded,
    Inconclusive,
}

fn inv_pow(norm_sqr: f64, q: f64) -> f64 {
    if q == 2.0 {
        1.0 / norm_sqr
    } else {
        norm_sqr.powf(-0.5 * q)
    }
}

/// `||R(lambda, A) b||` sampled on a log grid of real `lambda`; independent of `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventScan {
    pub q: f64,
    pub lambdas: Vec<f64>,
    pub norms: Vec<f64>,
    /// Heights `y` probed off the axis per grid point, as `(lambda index, y, norm)`.
    pub off_axis: Vec<(usize, f64, f64)>,
}

/// `||R(lambda) b||^q = int |lambda + s|^(-q) dmu(s)`.
pub fn resolvent_norm(measure: &HalfPlaneMeasure, q: f64, lambda: Complex64) -> Result<f64> {
    let r = measure.integrate(
        |s| inv_pow((lambda + s).norm_sqr(), q),
        Tolerance {
            abs: 1e-300,
            rel: 1e-11,
        },
    )?;
    Ok(r.value.max(0.0).powf(1.0 / q))
}

fn check_stable(measure: &HalfPlaneMeasure) -> Result<()> {
    if let Some(d) = measure.density() {
        if d.cutoff <= 0.0 {
            return Err(Error::UnstableSpectrum {
                index: 0,
                real: 0.0,
            });
        }
    }
    Ok(())
}

impl ResolventScan {
    pub fn compute(measure: &HalfPlaneMeasure, q: f64, scan: &ScanConfig) -> Result<Self> {
        check_stable(measure)?;
        let steps = ((scan.log2_lambda_max - scan.log2_lambda_min)
            * scan.lambda_points_per_octave as f64)
            .round() as usize;
        let lambdas: Vec<f64> = (0..=steps)
            .map(|i| {
                2f64.powf(scan.log2_lambda_min + i as f64 / scan.lambda_points_per_octave as f64)
            })
            .collect();
        let norms = lambdas
            .par_iter()
            .map(|&l| resolvent_norm(measure, q, Complex64::new(l, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let mut off_axis = Vec::new();
        if scan.complex_resolvent {
            for (i, &x) in lambdas
                .iter()
                .enumerate()
                .step_by(scan.lambda_points_per_octave.max(1) / 4 + 1)
            {
                for m in -2..=4 {
                    for sign in [-1.0, 1.0] {
                        let y = sign * x * 2f64.powi(m);
                        off_axis.push((i, y, resolvent_norm(measure, q, Complex64::new(x, y))?));
                    }
                }
            }
        }
        Ok(ResolventScan {
            q,
            lambdas,
            norms,
            off_axis,
        })
    }

    /// `lambda^(1/p) ||R(lambda) b||` on the grid.
    pub fn weighted(&self, p: f64) -> Vec<f64> {
        self.lambdas
            .iter()
            .zip(&self.norms)
            .map(|(l, n)| l.powf(1.0 / p) * n)
            .collect()
    }
}

fn octave_block_slope(
    lambdas: &[f64],
    values: &[f64],
    octaves: std::ops::Range<i32>,
) -> Option<f64> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for j in octaves {
        let lo = 2f64.powi(j);
        let hi = 2f64.powi(j + 1);
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

const EDGE_OCTAVES: i32 = 8;

/// Golden-section maximization of `t/p + ln ||R(e^t) b||` on `[a, b]`.
fn refine(measure: &HalfPlaneMeasure, q: f64, p: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let h = |t: f64| -> Result<f64> {
        let n = resolvent_norm(measure, q, Complex64::new(t.exp(), 0.0))?;
        Ok(t / p + n.ln())
    };
    let (mut a, mut b) = (a, b);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut hc = h(c)?;
    let mut hd = h(d)?;
    while (b - a) > 1e-6 {
        if hc > hd {
            b = d;
            d = c;
            hd = hc;
            c = b - phi * (b - a);
            hc = h(c)?;
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + phi * (b - a);
            hd = h(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t.exp(), h(t)?.exp()))
}

/// Resolvent report at `p` from a precomputed scan.
pub fn resolvent_report(
    measure: &HalfPlaneMeasure,
    scan_data: &ResolventScan,
    p: f64,
    rule: WeissRule,
    scan: &ScanConfig,
) -> Result<CriterionReport> {
    check_p(p)?;
    let g = scan_data.weighted(p);
    let lambdas = &scan_data.lambdas;
    let (imax, gmax) = g.iter().enumerate().fold(
        (0, 0.0),
        |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
    );
    let mut witness = gmax;
    let mut argmax = lambdas[imax];
    if gmax > 0.0 && imax > 0 && imax + 1 < lambdas.len() {
        let (l, v) = refine(
            measure,
            scan_data.q,
            p,
            lambdas[imax - 1].ln(),
            lambdas[imax + 1].ln(),
        )?;
        if v > witness {
            witness = v;
            argmax = l;
        }
    }
    for &(i, _, n) in &scan_data.off_axis {
        witness = witness.max(lambdas[i].powf(1.0 / p) * n);
    }
    let top = scan.log2_lambda_max.floor() as i32;
    let bottom = scan.log2_lambda_min.ceil() as i32;
    let slope_large = octave_block_slope(lambdas, &g, (top - EDGE_OCTAVES)..top);
    let slope_small = octave_block_slope(lambdas, &g, bottom..(bottom + EDGE_OCTAVES));

    let bound = if gmax == 0.0 {
        ResolventBound::Bounded
    } else {
        let up = slope_large.unwrap_or(f64::NEG_INFINITY);
        let down = -slope_small.unwrap_or(f64::INFINITY);
        let growth = up.max(down);
        if growth >= scan.unbounded_slope {
            ResolventBound::Unbounded
        } else if growth <= scan.bounded_slope {
            ResolventBound::Bounded
        } else {
            ResolventBound::Inconclusive
        }
    };
    let verdict = match bound {
        ResolventBound::Bounded => Evidence::AdmissibleEvidence,
        ResolventBound::Unbounded => Evidence::NotAdmissibleEvidence,
        ResolventBound::Inconclusive => Evidence::Inconclusive,
    };
    let sufficiency = if rule == WeissRule::Equivalent {
        Sufficiency::Equivalent
    } else {
        Sufficiency::Necessary
    };
    let mut r = CriterionReport::new(CriterionId::ResolventWeiss, verdict, witness, sufficiency);
    r.growth_exponent = slope_large;
    if bound == ResolventBound::Bounded && imax + 1 == lambdas.len() {
        r.notes.push(format!(
            "supremum approached at the right edge lambda = {:.3e}",
            lambdas[imax]
        ));
    } else if gmax > 0.0 {
        r.notes.push(format!("maximum at lambda = {argmax:.6e}"));
    }
    if rule == WeissRule::Equivalent {
        r.notes.push(
            "self-adjoint generator, q = 2, p <= 2: resolvent condition is equivalent".into(),
        );
    }
    Ok(r)
}

/// `sup lambda^(1/p) ||R(lambda, A) b||` over the log grid, refined at the argmax.
pub fn resolvent_weiss_sup(
    system: &SystemDescriptor,
    p: f64,
    config: &MeasureConfig,
    scan: &ScanConfig,
) -> Result<CriterionReport> {
    check_p(p)?;
    let measure = build_measure(system, config)?;
    let data = ResolventScan::compute(&measure, system.q(), scan)?;
    resolvent_report(&measure, &data, p, weiss_rule_applicable(system, p), scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DiagonalSystem, PowerLawDensitySystem, Sequence, SystemKind};

    fn cfg() -> MeasureConfig {
        MeasureConfig {
            k_max: 10_000,
            ..MeasureConfig::default()
        }
    }

    #[test]
    fn single_mode_half() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        let r = resolvent_weiss_sup(&s, 2.0, &cfg(), &ScanConfig::default()).unwrap();
        assert!((r.witness - 0.5).abs() < 1e-10, "{}", r.witness);
        assert_eq!(r.verdict, Evidence::AdmissibleEvidence);
        assert_eq!(r.sufficiency, Sufficiency::Equivalent);
    }

    #[test]
    fn zero_coefficients() {
        let s = SystemDescriptor::diagonal(
            "zero",
            DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 1.0), 2.0),
        );
        let r = resolvent_weiss_sup(&s, 3.0, &cfg(), &ScanConfig::default()).unwrap();
        assert_eq!(r.witness, 0.0);
    }

    #[test]
    fn unshifted_density_is_unstable() {
        let s = SystemDescriptor::new(
            "pl",
            SystemKind::PowerLaw(PowerLawDensitySystem {
                gamma: 0.5,
                sigma: 0.0,
                scale: 1.0,
            }),
        );
        assert!(matches!(
            resolvent_weiss_sup(&s, 3.0, &cfg(), &ScanConfig::default()),
            Err(Error::UnstableSpectrum { .. })
        ));
    }

    #[test]
    fn weiss_rule_cases() {
        let s = SystemDescriptor::diagonal("one", DiagonalSystem::single_mode(-1.0, 1.0, 2.0));
        assert_eq!(weiss_rule_applicable(&s, 1.5), WeissRule::Equivalent);
        assert_eq!(weiss_rule_applicable(&s, 4.0), WeissRule::Unknown);
        let c = SystemDescriptor::diagonal(
            "c",
            DiagonalSystem::new(
                Sequence::explicit([Complex64::new(-1.0, 1.0)]),
                Sequence::explicit_real([1.0]),
                2.0,
            ),
        );
        assert_eq!(weiss_rule_applicable(&c, 2.0), WeissRule::Unknown);
    }
}
