use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::config::ScanConfig;
use crate::error::{Error, Result};
use crate::fit::{classify_log_terms, least_squares, Classification, SeriesVerdict};
use crate::model::HalfPlaneMeasure;

use super::{check_p, conjugate, CriterionId, CriterionReport, Evidence, Sufficiency};

const POINTS_PER_OCTAVE: usize = 8;
const SPARSE_OCTAVE: usize = 8;
const REGRESSION_OCTAVES: usize = 20;
const STRIP_WINDOW: i32 = 10;

/// One sampled square: half-width `a` and `mu(Q_I) / |I|^(q/p')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub a: f64,
    pub ratio: f64,
}

fn sector_adjust(report: &mut CriterionReport, measure: &HalfPlaneMeasure) {
    if measure.sector_satisfied() {
        return;
    }
    report.sufficiency = match report.verdict {
        Evidence::NotAdmissibleEvidence => Sufficiency::Necessary,
        _ => Sufficiency::Sufficient,
    };
    report.notes.push(
        "complex atoms without a declared sector angle: the test is used one-directionally".into(),
    );
}

fn horizon_note(report: &mut CriterionReport, measure: &HalfPlaneMeasure, reach: f64) {
    if let Some(h) = measure.horizon() {
        if reach > h {
            report.notes.push(format!(
                "scan reaches {reach:.3e}, beyond the truncation horizon {h:.3e}"
            ));
        }
    }
}

/// Square ratios over dyadic half-widths plus atom-aligned points in sparse octaves.
pub fn square_ratio_scan(
    measure: &HalfPlaneMeasure,
    p: f64,
    q: f64,
    scan: &ScanConfig,
) -> Vec<ScalePoint> {
    let e = q / conjugate(p);
    let mut grid: Vec<f64> = Vec::new();
    for j in scan.j_min..scan.j_max {
        for i in 0..POINTS_PER_OCTAVE {
            grid.push(2f64.powf(j as f64 + i as f64 / POINTS_PER_OCTAVE as f64));
        }
    }
    grid.push(2f64.powi(scan.j_max));
    let atoms = measure.atoms();
    for j in scan.j_min..scan.j_max {
        // atoms whose aligned half-width Re s / 2 falls in [2^j, 2^(j+1))
        let lo = 2f64.powi(j + 1);
        let hi = 2f64.powi(j + 2);
        let start = atoms.partition_point(|s| s.location.re < lo);
        let end = atoms.partition_point(|s| s.location.re < hi);
        if end - start <= SPARSE_OCTAVE {
            for s in &atoms[start..end] {
                let a = 0.5 * s.location.re;
                grid.push(a * (1.0 - 1e-9));
                grid.push(a * (1.0 + 1e-9));
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.into_iter()
        .map(|a| {
            let mass = measure.square_mass(a);
            let ratio = if mass > 0.0 {
                (mass.ln() - e * (2.0 * a).ln()).exp()
            } else {
                0.0
            };
            ScalePoint { a, ratio }
        })
        .collect()
}

/// Maximum ratio per octave `[2^j, 2^(j+1))`, keyed by `j`.
fn octave_maxima(points: &[ScalePoint], j_min: i32, j_max: i32) -> Vec<(i32, f64)> {
    let mut out = Vec::new();
    for j in j_min..j_max {
        let lo = 2f64.powi(j);
        let hi = 2f64.powi(j + 1);
        let m = points
            .iter()
            .filter(|s| s.a >= lo && s.a < hi)
            .map(|s| s.ratio)
            .fold(0.0, f64::max);
        out.push((j, m));
    }
    out
}

fn block_slope(blocks: &[(i32, f64)]) -> Option<f64> {
    let kept: Vec<&(i32, f64)> = blocks.iter().filter(|b| b.1 > 0.0).collect();
    if kept.len() < 3 {
        return None;
    }
    let x: Vec<f64> = kept.iter().map(|b| b.0 as f64 * LN_2).collect();
    let y: Vec<f64> = kept.iter().map(|b| b.1.ln()).collect();
    least_squares(&x, &y).map(|f| f.slope)
}

/// Carleson-square test for `1 < p <= q`: is `mu(Q_I) <= K |I|^(q/p')` for all `I = i[-a, a]`?
///
/// The ratio is scanned over dyadic scales; the growth exponent is the
/// slope of the per-octave maxima against `ln a` at the large-scale end,
/// and the small-scale end is checked for blow-up as `a -> 0`.
pub fn carleson_square_criterion(
    measure: &HalfPlaneMeasure,
    p: f64,
    q: f64,
    scan: &ScanConfig,
) -> Result<CriterionReport> {
    check_p(p)?;
    if p > q {
        return Err(Error::WrongBranch {
            p,
            q,
            hint: "p > q: use the dyadic strip criterion",
        });
    }
    let points = square_ratio_scan(measure, p, q, scan);
    let witness = points.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let blocks = octave_maxima(&points, scan.j_min, scan.j_max);
    let n = blocks.len();
    let top = &blocks[n.saturating_sub(REGRESSION_OCTAVES)..];
    let bottom = &blocks[..REGRESSION_OCTAVES.min(n)];
    let slope_large = block_slope(top);
    let slope_small = block_slope(bottom);

    let grows_large = slope_large.is_some_and(|s| s > scan.bounded_slope);
    let grows_small = slope_small.is_some_and(|s| s < -scan.bounded_slope)
        && measure.density().is_some_and(|d| d.cutoff == 0.0);
    let verdict = if grows_large || grows_small {
        Evidence::NotAdmissibleEvidence
    } else {
        Evidence::AdmissibleEvidence
    };
    let mut report = CriterionReport::new(
        CriterionId::CarlesonSquare,
        verdict,
        witness,
        Sufficiency::Equivalent,
    );
    report.growth_exponent = Some(slope_large.unwrap_or(f64::NEG_INFINITY));
    if grows_small {
        report.notes.push(format!(
            "ratio blows up at small scales (slope {:.4})",
            slope_small.unwrap_or(f64::NAN)
        ));
    }
    let off = measure.off_axis_atoms();
    if off > 0 {
        report.notes.push(format!(
            "{off} atoms satisfy |Im s| > Re s; only squares symmetric about 0 are scanned"
        ));
    }
    horizon_note(&mut report, measure, 2f64.powi(scan.j_max + 1));
    sector_adjust(&mut report, measure);
    Ok(report)
}

/// Dyadic strip test for `p > q`: is `{2^(-n q/p') mu(S_n)}` in `l^(p/(p-q))`?
///
/// Terms are formed in log space. The last strips of the window decide
/// convergence at `n -> inf`; when the measure reaches down to 0 the first
/// strips decide `n -> -inf` as well.
pub fn dyadic_strip_criterion(
    measure: &HalfPlaneMeasure,
    p: f64,
    q: f64,
    scan: &ScanConfig,
) -> Result<CriterionReport> {
    check_p(p)?;
    if p <= q {
        return Err(Error::WrongBranch {
            p,
            q,
            hint: "p <= q: use the Carleson square criterion",
        });
    }
    let r = p / (p - q);
    let e = q / conjugate(p);
    let mut n_max = scan.n_max;
    if let Some(h) = measure.horizon() {
        n_max = n_max.min(h.log2().floor() as i32 - 1);
    }
    let terms: Vec<(i32, f64)> = (scan.n_min..=n_max)
        .map(|n| {
            let m = measure.strip_mass(n);
            let log_t = if m > 0.0 {
                r * (-(n as f64) * e * LN_2 + m.ln())
            } else {
                f64::NEG_INFINITY
            };
            (n, log_t)
        })
        .collect();
    let partial: f64 = terms.iter().map(|t| t.1.exp()).sum();
    let upper: Vec<(f64, f64)> = terms
        .iter()
        .rev()
        .take(STRIP_WINDOW as usize)
        .rev()
        .map(|&(n, t)| (n as f64, t))
        .collect();
    let mut series = classify_log_terms(&upper, partial);
    let reaches_zero = measure.density().is_some_and(|d| d.cutoff == 0.0);
    if reaches_zero {
        let lower: Vec<(f64, f64)> = terms
            .iter()
            .take(STRIP_WINDOW as usize)
            .map(|&(n, t)| (-(n as f64), t))
            .collect();
        let low = classify_log_terms(&lower, partial);
        series = combine(series, low);
    }
    let verdict = match series.classification {
        Classification::Convergent => Evidence::AdmissibleEvidence,
        Classification::Divergent => Evidence::NotAdmissibleEvidence,
        Classification::Inconclusive => Evidence::Inconclusive,
    };
    let mut report = CriterionReport::new(
        CriterionId::DyadicStrip,
        verdict,
        partial,
        Sufficiency::Equivalent,
    );
    report.growth_exponent = Some(series.tail_exponent);
    report.series = Some(series);
    if n_max < scan.n_max {
        report.notes.push(format!(
            "strip window cut at n = {n_max} by the truncation horizon"
        ));
    }
    if let Some(first) = measure.atoms().first() {
        if first.location.re <= 2f64.powi(scan.n_min - 1) {
            report
                .notes
                .push("atoms below the first scanned strip are not counted".into());
        }
    }
    sector_adjust(&mut report, measure);
    Ok(report)
}

fn combine(a: SeriesVerdict, b: SeriesVerdict) -> SeriesVerdict {
    use Classification::*;
    match (a.classification, b.classification) {
        (Divergent, _) => a,
        (_, Divergent) => b,
        (Inconclusive, _) => a,
        (_, Inconclusive) => b,
        _ => {
            if a.margin <= b.margin {
                a
            } else {
                b
            }
        }
    }
}
