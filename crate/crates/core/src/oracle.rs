//! Direct simulation of the input-to-state map in the eigenbasis.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::MeasureConfig;
use crate::embedding::{cexpm1, TestInput};
use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::model::{build_measure, DiagonalSystem, HalfPlaneMeasure, SystemDescriptor};
use crate::quad::Tolerance;

/// Truncation error allowed relative to the simulated value.
pub const TAIL_CERTIFICATE: f64 = 1e-9;
const RESONANCE: f64 = 1e-12;

/// `(1 - exp(-x h)) / x`, with the removable singularity at `x = 0`.
fn phi(x: Complex64, h: f64) -> Complex64 {
    if x.norm() < RESONANCE {
        return Complex64::new(h, 0.0);
    }
    -cexpm1(-x * h) / x
}

/// `int_0^t exp(-s (t - r)) exp(-rate r) dr` evaluated without overflow.
fn exponential_response(s: Complex64, rate: f64, t: f64) -> Complex64 {
    let x = s - rate;
    if x.re >= 0.0 {
        (-rate * t).exp() * phi(x, t)
    } else {
        (-s * t).exp() * phi(-x, t)
    }
}

/// How a test input is placed on `[0, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// `u(r)` as given.
    Forward,
    /// `u(t - r)`: the input is concentrated just before the horizon.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub input: TestInput,
    pub placement: Placement,
}

impl Probe {
    pub fn forward(input: TestInput) -> Self {
        Probe {
            input,
            placement: Placement::Forward,
        }
    }

    pub fn reversed(input: TestInput) -> Self {
        Probe {
            input,
            placement: Placement::Reversed,
        }
    }

    /// `int_0^t exp(-s (t - r)) v(r) dr` where `v` is the placed input and
    /// `s = -lambda_k`.
    pub fn response(&self, s: Complex64, t: f64) -> Complex64 {
        match (&self.input, self.placement) {
            (TestInput::Exponential { rate }, Placement::Forward) => {
                exponential_response(s, *rate, t)
            }
            (TestInput::Exponential { rate }, Placement::Reversed) => phi(s + rate, t),
            (input, Placement::Forward) => input
                .pieces()
                .iter()
                .filter(|(a, _, _)| *a < t)
                .map(|&(a, h, v)| {
                    let end = (a + h).min(t);
                    v * (-s * (t - end)).exp() * phi(s, end - a)
                })
                .sum(),
            (input, Placement::Reversed) => input
                .pieces()
                .iter()
                .filter(|(a, _, _)| *a < t)
                .map(|&(a, h, v)| {
                    let end = (a + h).min(t);
                    v * (-s * a).exp() * phi(s, end - a)
                })
                .sum(),
        }
    }

    /// `||v||_(L^p(0, t))` of the placed input.
    pub fn norm_on(&self, p: f64, t: f64) -> f64 {
        self.input.lp_norm_on(p, t)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            allowed: "0 < t < inf",
        });
    }
    Ok(())
}

fn only_atoms(measure: &HalfPlaneMeasure) -> Result<()> {
    if measure.density().is_some() {
        return Err(Error::WrongSystemKind {
            expected: "diagonal",
            found: "power-law",
        });
    }
    Ok(())
}

/// `||Phi_t v||` for a measure built from a diagonal system.
pub fn state_response_on(measure: &HalfPlaneMeasure, q: f64, probe: &Probe, t: f64) -> Result<f64> {
    check_t(t)?;
    probe.input.validate()?;
    only_atoms(measure)?;
    if measure.is_empty() {
        return Ok(0.0);
    }
    let r = measure.integrate(
        |s| {
            let v = probe.response(s, t).norm_sqr();
            if q == 2.0 {
                v
            } else {
                v.powf(0.5 * q)
            }
        },
        Tolerance {
            abs: 1e-300,
            rel: 1e-12,
        },
    )?;
    if r.error > TAIL_CERTIFICATE * r.value {
        return Err(Error::TailNotCertified {
            bound: r.error,
            partial: r.value,
        });
    }
    Ok(r.value.max(0.0).powf(1.0 / q))
}

/// `||int_0^t T(t - s) B u(s) ds||` for `u` placed forward on `[0, t]`.
pub fn state_response(
    system: &DiagonalSystem,
    u: &TestInput,
    t: f64,
    config: &MeasureConfig,
) -> Result<f64> {
    let sys = SystemDescriptor::diagonal("state", system.clone());
    let measure = build_measure(&sys, config)?;
    state_response_on(&measure, system.q, &Probe::forward(u.clone()), t)
}

/// Largest state-to-input norm ratio over `family` at horizon `t`; a lower
/// bound on the finite-time admissibility constant.
pub fn admissibility_constant_on(
    measure: &HalfPlaneMeasure,
    q: f64,
    p: f64,
    t: f64,
    family: &[Probe],
) -> Result<f64> {
    crate::criteria::check_p(p)?;
    check_t(t)?;
    let ratios = family
        .par_iter()
        .map(|probe| {
            let norm = probe.norm_on(p, t);
            if !(norm > 0.0) {
                return Ok(0.0);
            }
            Ok(state_response_on(measure, q, probe, t)? / norm)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

pub fn admissibility_constant(
    system: &DiagonalSystem,
    p: f64,
    t: f64,
    family: &[Probe],
    config: &MeasureConfig,
) -> Result<f64> {
    let sys = SystemDescriptor::diagonal("constant", system.clone());
    let measure = build_measure(&sys, config)?;
    admissibility_constant_on(&measure, system.q, p, t, family)
}

/// Probes used at horizon `t`: reversed exponentials with rates `2^(j/2)` in
/// `[1/t, 1e3 t^2]` and reversed indicators with lengths `2^(j/2)` in
/// `[1e-3 / t^2, t]`.
pub fn probe_family(t: f64) -> Vec<Probe> {
    let lattice = |lo: f64, hi: f64| -> Vec<f64> {
        let j0 = (2.0 * lo.log2()).ceil() as i32;
        let j1 = (2.0 * hi.log2()).floor() as i32;
        (j0..=j1).map(|j| 2f64.powf(j as f64 / 2.0)).collect()
    };
    let mut family: Vec<Probe> = lattice(1.0 / t, 1e3 * t * t)
        .into_iter()
        .map(|r| Probe::reversed(TestInput::exponential(r)))
        .collect();
    family.extend(
        lattice(1e-3 / (t * t), t)
            .into_iter()
            .map(|tau| Probe::reversed(TestInput::indicator(tau))),
    );
    family
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileClass {
    Plateau,
    Growing,
    Inconclusive,
}

/// Terminal log-slope at or below which a profile counts as a plateau.
pub const PLATEAU_SLOPE: f64 = 0.02;
/// Terminal log-slope at or above which a profile counts as growing.
pub const GROWING_SLOPE: f64 = 0.1;
const TERMINAL_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantProfile {
    pub times: Vec<f64>,
    /// `C_est(t)`: running supremum, so a probe zero-padded to a later
    /// horizon keeps its value.
    pub constants: Vec<f64>,
    pub classification: ProfileClass,
    pub terminal_slope: Option<f64>,
}

/// `2^0, 2^1, ..., 2^floor(log2 t_max)`.
pub fn dyadic_times(t_max: f64) -> Vec<f64> {
    let n = t_max.log2().floor().max(0.0) as i32;
    (0..=n).map(|j| 2f64.powi(j)).collect()
}

fn classify_profile(times: &[f64], constants: &[f64]) -> (ProfileClass, Option<f64>) {
    if constants.iter().all(|&c| c == 0.0) && !constants.is_empty() && times.len() > 1 {
        return (ProfileClass::Plateau, Some(0.0));
    }
    let n = times.len();
    if n < 2 {
        return (ProfileClass::Inconclusive, None);
    }
    let from = n.saturating_sub(TERMINAL_POINTS);
    let x: Vec<f64> = times[from..].iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = constants[from..].iter().map(|c| c.ln()).collect();
    let Some(fit) = least_squares(&x, &y) else {
        return (ProfileClass::Inconclusive, None);
    };
    let class = if fit.slope <= PLATEAU_SLOPE {
        ProfileClass::Plateau
    } else if fit.slope >= GROWING_SLOPE {
        ProfileClass::Growing
    } else {
        ProfileClass::Inconclusive
    };
    (class, Some(fit.slope))
}

pub fn constant_growth_profile_on(
    measure: &HalfPlaneMeasure,
    q: f64,
    p: f64,
    times: &[f64],
) -> Result<ConstantProfile> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "time grid must be nonempty and increasing".into(),
        ));
    }
    let mut constants = Vec::with_capacity(times.len());
    let mut running: f64 = 0.0;
    for &t in times {
        let c = admissibility_constant_on(measure, q, p, t, &probe_family(t))?;
        running = running.max(c);
        constants.push(running);
    }
    let (classification, terminal_slope) = classify_profile(times, &constants);
    Ok(ConstantProfile {
        times: times.to_vec(),
        constants,
        classification,
        terminal_slope,
    })
}

pub fn constant_growth_profile(
    system: &SystemDescriptor,
    p: f64,
    times: &[f64],
    config: &MeasureConfig,
) -> Result<ConstantProfile> {
    let d = system.as_diagonal()?;
    let measure = build_measure(system, config)?;
    constant_growth_profile_on(&measure, d.q, p, times)
}

/// `(coth mu - mu csch^2 mu) / 2`.
pub fn weiss_closed_form(mu: f64) -> f64 {
    if mu < 1e-3 {
        mu / 3.0 - 2.0 * mu.powi(3) / 45.0
    } else if mu > 30.0 {
        0.5 - (2.0 * mu - 1.0) * (-2.0 * mu).exp()
    } else {
        let s = mu.sinh();
        0.5 * (1.0 / mu.tanh() - mu / (s * s))
    }
}

/// `mu sum_(n <= terms) 2 n^2 pi^2 / (mu^2 + n^2 pi^2)^2`, summed from the
/// small terms up.
pub fn weiss_eigen_sum(mu: f64, terms: u64) -> f64 {
    let pi2 = std::f64::consts::PI.powi(2);
    let mu2 = mu * mu;
    let mut s = 0.0;
    for n in (1..=terms).rev() {
        let k2 = (n as f64).powi(2) * pi2;
        let d = mu2 + k2;
        s += 2.0 * k2 / (d * d);
    }
    mu * s
}

/// `mu int_(terms + 1/2)^inf 2 x^2 pi^2 / (mu^2 + x^2 pi^2)^2 dx`: the
/// midpoint estimate of what [`weiss_eigen_sum`] leaves out.
pub fn weiss_eigen_tail(mu: f64, terms: u64) -> f64 {
    let y = std::f64::consts::PI * (terms as f64 + 0.5);
    let inner = (mu / y).atan() / (2.0 * mu) + y / (2.0 * (mu * mu + y * y));
    mu * 2.0 / std::f64::consts::PI * inner
}

/// Control columns sharing one eigenvalue family.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub system: DiagonalSystem,
    /// Norm of the input direction in the input space; the column is divided by it.
    pub input_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionScan {
    pub constants: Vec<f64>,
    pub sup: f64,
    pub argmax: usize,
    pub notes: Vec<String>,
}

/// Admissibility constants of each unit input direction at horizon `t`.
pub fn uniform_direction_scan(
    directions: &[Direction],
    p: f64,
    t: f64,
    config: &MeasureConfig,
) -> Result<DirectionScan> {
    let Some(first) = directions.first() else {
        return Err(Error::InvalidInput("no directions".into()));
    };
    if directions.iter().any(|d| {
        d.system.eigenvalues != first.system.eigenvalues
            || d.system.first_index != first.system.first_index
            || d.system.shift != first.system.shift
            || d.system.q != first.system.q
    }) {
        return Err(Error::IncompatibleColumns);
    }
    let family = probe_family(t);
    let mut constants = Vec::with_capacity(directions.len());
    for d in directions {
        if !(d.input_norm > 0.0) {
            return Err(Error::OutOfRange {
                name: "input_norm",
                value: d.input_norm,
                allowed: "input_norm > 0",
            });
        }
        constants.push(admissibility_constant(&d.system, p, t, &family, config)? / d.input_norm);
    }
    let (argmax, sup) =
        constants.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc },
        );
    let mut notes = Vec::new();
    let probe = SystemDescriptor::diagonal("direction", first.system.clone());
    if crate::criteria::weiss_rule_applicable(&probe, p) == crate::criteria::WeissRule::Equivalent {
        notes.push("self-adjoint generator with p <= 2: uniform boundedness over directions decides admissibility".into());
    }
    Ok(DirectionScan {
        constants,
        sup,
        argmax,
        notes,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::model::catalog::lookup;
    use crate::model::Sequence;
    use approx::assert_relative_eq;

    fn cfg(k: usize) -> MeasureConfig {
        MeasureConfig {
            k_max: k,
            ..MeasureConfig::default()
        }
    }

    #[test]
    fn single_mode_indicator() {
        let s = DiagonalSystem::single_mode(-1.0, 1.0, 2.0);
        for t in [0.1, 1.0, 7.0] {
            let v = state_response(&s, &TestInput::indicator(t), t, &cfg(10)).unwrap();
            assert_relative_eq!(v, -(-t).exp_m1(), max_relative = 1e-14);
        }
    }

    #[test]
    fn zero_input_and_zero_column() {
        let s = DiagonalSystem::single_mode(-1.0, 1.0, 2.0);
        let zero = TestInput::PiecewiseConstant {
            breakpoints: vec![0.0, 1.0],
            values: vec![0.0],
        };
        assert_eq!(state_response(&s, &zero, 1.0, &cfg(10)).unwrap(), 0.0);
        let z = DiagonalSystem::new(Sequence::power(1.0, 2.0), Sequence::power(0.0, 0.0), 2.0);
        let c = admissibility_constant(&z, 2.0, 1.0, &probe_family(1.0), &cfg(100)).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn resonance_limit() {
        let s = DiagonalSystem::single_mode(-2.0, 1.0, 2.0);
        let t = 1.5;
        let v = state_response(&s, &TestInput::exponential(2.0), t, &cfg(10)).unwrap();
        assert_relative_eq!(v, t * (-2.0 * t).exp(), max_relative = 1e-14);
        let near = state_response(&s, &TestInput::exponential(2.0 + 1e-9), t, &cfg(10)).unwrap();
        assert_relative_eq!(near, v, max_relative = 1e-8);
    }

    #[test]
    fn heat_exponential_state() {
        let heat = lookup("heat1d-dirichlet", Default::default()).unwrap();
        let d = heat.as_diagonal().unwrap();
        let v = state_response(d, &TestInput::exponential(1.0), 1.0, &cfg(100_000)).unwrap();
        assert_relative_eq!(v, 0.228270484287485999637, max_relative = 1e-12);
    }

    #[test]
    fn single_mode_normalized_exponential() {
        // reversed exponential of rate 1 on a long horizon: (1/2) (2)^(1/2)
        let s = DiagonalSystem::single_mode(-1.0, 1.0, 2.0);
        let c = admissibility_constant(
            &s,
            2.0,
            60.0,
            &[Probe::reversed(TestInput::exponential(1.0))],
            &cfg(10),
        )
        .unwrap();
        assert_relative_eq!(c, 0.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn closed_form_regimes() {
        assert_relative_eq!(
            weiss_closed_form(0.1),
            0.0332889522964030574241,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            weiss_closed_form(1.0),
            0.2944868122665104186141,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            weiss_closed_form(10.0),
            0.499999960838081007982,
            max_relative = 1e-13
        );
        for mu in [1e-4f64, 5e-4, 40.0] {
            let s = mu.sinh();
            let direct = 0.5 * (1.0 / mu.tanh() - mu / (s * s));
            assert_relative_eq!(weiss_closed_form(mu), direct, max_relative = 1e-6);
        }
        assert!(weiss_closed_form(1e3) <= 0.5);
    }

    #[test]
    fn degenerate_profile() {
        let heat = lookup("heat1d-dirichlet", Default::default()).unwrap();
        let p = constant_growth_profile(&heat, 5.0, &dyadic_times(1.0), &cfg(1000)).unwrap();
        assert_eq!(p.classification, ProfileClass::Inconclusive);
    }

    #[test]
    fn mismatched_columns() {
        let a = Direction {
            system: DiagonalSystem::single_mode(-1.0, 1.0, 2.0),
            input_norm: 1.0,
        };
        let b = Direction {
            system: DiagonalSystem::single_mode(-2.0, 1.0, 2.0),
            input_norm: 1.0,
        };
        assert_eq!(
            uniform_direction_scan(&[a, b], 2.0, 1.0, &cfg(10)),
            Err(Error::IncompatibleColumns)
        );
    }
}
