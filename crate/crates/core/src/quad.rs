//! Adaptive Gauss-Kronrod quadrature with the two changes of variable the
//! half-plane measures need: a log map for `[a, inf)` and a power map that
//! absorbs an integrable `s^gamma` singularity at the origin.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4000;

/// Result of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Tolerances for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-300,
            rel: 1e-12,
        }
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    (value, error)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7-K15 integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (value, error) = kronrod15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut converged = false;
    while heap.len() < MAX_SEGMENTS {
        if total_err <= tol.abs.max(tol.rel * total.abs()) || !total_err.is_finite() {
            converged = total_err.is_finite();
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            heap.push(worst);
            converged = true;
            break;
        }
        let (v1, e1) = kronrod15(&f, worst.a, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated update drift
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Quadrature {
        value,
        error,
        converged: converged || error <= tol.abs.max(tol.rel * value.abs()),
    }
}

/// Local power-law exponent `d ln f / d ln x` estimated between `x` and `2x`.
/// Returns `None` when `f` vanishes at either point.
pub fn local_exponent<F: Fn(f64) -> f64>(f: &F, x: f64) -> Option<f64> {
    let f1 = f(x).abs();
    let f2 = f(2.0 * x).abs();
    if f1 == 0.0 || f2 == 0.0 || !f1.is_finite() || !f2.is_finite() {
        return None;
    }
    Some((f2 / f1).ln() / std::f64::consts::LN_2)
}

/// Integrates `f` over `[a, inf)` for `a > 0` through `x = a e^u`.
///
/// Integration proceeds in chunks of `u`; once the integrand decays like a
/// power the remainder is closed analytically from the local exponent.
/// Integrands decaying no faster than `1/x` are reported as divergent.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: Tolerance,
) -> Result<Quadrature> {
    assert!(a > 0.0, "lower limit must be positive");
    let h = |u: f64| {
        let x = a * u.exp();
        let v = f(x) * x;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    const CHUNK: f64 = 2.0;
    const FAR: f64 = 1e12;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    let mut u = 0.0;
    loop {
        let q = integrate(h, u, u + CHUNK, tol);
        total += q.value;
        err += q.error;
        converged &= q.converged;
        u += CHUNK;
        let x_end = a * u.exp();
        let fx = f(x_end);
        if fx == 0.0 || !fx.is_finite() {
            // check a little further before declaring the support finished
            if f(2.0 * x_end) == 0.0 && f(16.0 * x_end) == 0.0 {
                break;
            }
            if u > 700.0 {
                break;
            }
            continue;
        }
        let exponent = local_exponent(&f, x_end);
        match exponent {
            Some(e) if e < -1.0 => {
                let remainder = x_end * fx / (-e - 1.0);
                if remainder.abs() <= 1e-16 * total.abs() || u > 690.0 - a.ln().max(0.0) {
                    total += remainder;
                    err += (remainder * 1e-3).abs();
                    break;
                }
                if x_end > FAR * a && e > -1.0 - 1e-6 {
                    return Err(Error::IntegralDiverges(format!(
                        "integrand decays like x^{e:.6} at x = {x_end:.3e}"
                    )));
                }
            }
            Some(e) if x_end > FAR * a.max(1.0) => {
                return Err(Error::IntegralDiverges(format!(
                    "integrand decays like x^{e:.6} at x = {x_end:.3e}"
                )));
            }
            _ => {}
        }
        if u > 700.0 {
            break;
        }
    }
    Ok(Quadrature {
        value: total,
        error: err,
        converged,
    })
}

/// Integrates `s^gamma f(s)` over `[0, b]` for `gamma > -1`, mapping
/// `v = s^(gamma+1)` so the weight's singularity disappears.
pub fn integrate_power_weight_from_zero<F: Fn(f64) -> f64>(
    f: F,
    gamma: f64,
    b: f64,
    tol: Tolerance,
) -> Quadrature {
    debug_assert!(gamma > -1.0);
    let e = gamma + 1.0;
    let top = b.powf(e);
    let q = integrate(|v: f64| f(v.powf(1.0 / e)), 0.0, top, tol);
    Quadrature {
        value: q.value / e,
        error: q.error / e,
        converged: q.converged,
    }
}

/// Integrates `s^gamma f(s)` over `(lo, inf)`.
pub fn integrate_power_weight<F: Fn(f64) -> f64>(
    f: F,
    gamma: f64,
    lo: f64,
    tol: Tolerance,
) -> Result<Quadrature> {
    let weighted = |s: f64| s.powf(gamma) * f(s);
    if lo > 0.0 {
        return integrate_to_infinity(weighted, lo, tol);
    }
    if gamma <= -1.0 {
        return Err(Error::IntegralDiverges(format!(
            "s^{gamma} is not integrable at the origin"
        )));
    }
    let head = integrate_power_weight_from_zero(&f, gamma, 1.0, tol);
    let tail = integrate_to_infinity(weighted, 1.0, tol)?;
    Ok(Quadrature {
        value: head.value + tail.value,
        error: head.error + tail.error,
        converged: head.converged && tail.converged,
    })
}
