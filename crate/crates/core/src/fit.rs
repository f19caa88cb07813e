//! Least-squares slopes and the tail-exponent rule that turns truncated
//! series into convergence verdicts.

use serde::{Deserialize, Serialize};

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual sum of squares.
    pub rss: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub len: usize,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = (0..n)
        .map(|i| {
            let r = y[i] - intercept - slope * x[i];
            r * r
        })
        .sum();
    let stderr = if n > 2 {
        (rss / (n - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        rss,
        stderr,
        len: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Which regression described the tail best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMode {
    /// `ln t` against `ln n`; convergence boundary at slope -1.
    Power,
    /// `ln t` against `n`; convergence boundary at slope 0.
    Geometric,
    /// Finitely many nonzero terms.
    Finite,
}

impl TailMode {
    pub fn boundary(self) -> f64 {
        match self {
            TailMode::Power => -1.0,
            TailMode::Geometric => 0.0,
            TailMode::Finite => f64::NEG_INFINITY,
        }
    }

    /// Slope distance below the boundary required before calling a tail convergent.
    pub fn margin_tolerance(self) -> f64 {
        match self {
            TailMode::Power => 0.05,
            TailMode::Geometric => 1e-3,
            TailMode::Finite => 0.0,
        }
    }
}

/// Convergence classification of an infinite series or scanned supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    pub classification: Classification,
    /// Truncated sum, including any analytic tail when it is finite.
    pub partial_value: f64,
    /// Fitted slope of the log-terms over the tail window.
    pub tail_exponent: f64,
    /// `boundary - tail_exponent`; positive on the convergent side.
    pub margin: f64,
    pub mode: TailMode,
}

impl SeriesVerdict {
    pub fn finite(value: f64) -> Self {
        SeriesVerdict {
            classification: Classification::Convergent,
            partial_value: value,
            tail_exponent: f64::NEG_INFINITY,
            margin: f64::INFINITY,
            mode: TailMode::Finite,
        }
    }

    pub fn is_convergent(&self) -> bool {
        self.classification == Classification::Convergent
    }

    pub fn is_divergent(&self) -> bool {
        self.classification == Classification::Divergent
    }
}

/// Fits of the tail window in both modes, and the one chosen.
fn select_mode(index: &[f64], log_terms: &[f64]) -> Option<(TailMode, LineFit)> {
    let geometric = least_squares(index, log_terms)?;
    if index.iter().any(|&n| n <= 0.0) {
        return Some((TailMode::Geometric, geometric));
    }
    let ln_index: Vec<f64> = index.iter().map(|n| n.ln()).collect();
    let power = least_squares(&ln_index, log_terms)?;
    let noise = 1e-20 * index.len() as f64;
    if geometric.rss < 0.5 * power.rss && power.rss > noise {
        Some((TailMode::Geometric, geometric))
    } else {
        Some((TailMode::Power, power))
    }
}

/// Largest slope increase across a power-mode window still read as a pure power law.
pub const STEEPENING_TOLERANCE: f64 = 0.01;

/// Increase of the log-log slope from the first to the second half of the window.
fn steepening(index: &[f64], logs: &[f64]) -> f64 {
    let n = index.len();
    if n < 6 {
        return 0.0;
    }
    let half = |r: std::ops::Range<usize>| {
        let x: Vec<f64> = index[r.clone()].iter().map(|k| k.ln()).collect();
        least_squares(&x, &logs[r]).map(|f| f.slope)
    };
    match (half(0..n / 2), half(n / 2..n)) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    }
}

/// Classifies a series from `(index, ln term)` samples of its tail window.
///
/// Terms equal to zero (`ln term = -inf`) are skipped; a window with no
/// nonzero terms is a finite sum. A tail that decays no faster than the
/// boundary rate is divergent even when it sits exactly on the boundary
/// (e.g. the harmonic series); the margin tolerance applies only to the
/// convergent side.
pub fn classify_log_terms(samples: &[(f64, f64)], partial_value: f64) -> SeriesVerdict {
    let kept: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(n, t)| n.is_finite() && !t.is_nan() && *t != f64::NEG_INFINITY)
        .collect();
    if kept.is_empty() {
        return SeriesVerdict::finite(partial_value);
    }
    if kept.iter().any(|(_, t)| *t == f64::INFINITY) {
        return SeriesVerdict {
            classification: Classification::Divergent,
            partial_value: f64::INFINITY,
            tail_exponent: f64::INFINITY,
            margin: f64::NEG_INFINITY,
            mode: TailMode::Geometric,
        };
    }
    let index: Vec<f64> = kept.iter().map(|s| s.0).collect();
    let logs: Vec<f64> = kept.iter().map(|s| s.1).collect();
    let Some((mode, fit)) = (if kept.len() >= 3 {
        select_mode(&index, &logs)
    } else {
        None
    }) else {
        return SeriesVerdict {
            classification: Classification::Inconclusive,
            partial_value,
            tail_exponent: f64::NAN,
            margin: f64::NAN,
            mode: TailMode::Power,
        };
    };
    let boundary = mode.boundary();
    let precision = (3.0 * fit.stderr).max(1e-6);
    let classification = if fit.slope + 3.0 * fit.stderr < boundary - mode.margin_tolerance() {
        if mode == TailMode::Power && steepening(&index, &logs) > STEEPENING_TOLERANCE {
            // log-convex in ln n: a geometric factor will eventually dominate
            Classification::Inconclusive
        } else {
            Classification::Convergent
        }
    } else if fit.slope >= boundary - precision {
        Classification::Divergent
    } else {
        Classification::Inconclusive
    };
    SeriesVerdict {
        classification,
        partial_value,
        tail_exponent: fit.slope,
        margin: boundary - fit.slope,
        mode,
    }
}
