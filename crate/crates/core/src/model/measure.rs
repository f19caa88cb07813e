use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::MeasureConfig;
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::sums::power_sum;

use super::system::{
    DiagonalSystem, MultiplierSystem, PowerLawDensitySystem, Sequence, SystemDescriptor, SystemKind,
};

/// A point mass of the half-plane measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: Complex64,
    pub mass: f64,
    /// Index of the mode or multiplier atom that produced it.
    pub index: i64,
}

/// Absolutely continuous part `scale * s^gamma` on `(cutoff, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub gamma: f64,
    pub scale: f64,
    pub cutoff: f64,
}

impl Density {
    fn antiderivative(&self, x: f64) -> f64 {
        let e = self.gamma + 1.0;
        if e.abs() < 1e-15 {
            x.ln()
        } else {
            x.powf(e) / e
        }
    }

    /// Mass of `(lo, hi]`, in closed form.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.cutoff).max(0.0);
        if !(hi > lo) {
            return 0.0;
        }
        let e = self.gamma + 1.0;
        if lo == 0.0 {
            // e > 0 is guaranteed by construction when the cutoff is 0
            return self.scale * hi.powf(e) / e;
        }
        if hi.is_infinite() {
            return if e < 0.0 {
                self.scale * (-lo.powf(e) / e)
            } else {
                f64::INFINITY
            };
        }
        self.scale * (self.antiderivative(hi) - self.antiderivative(lo))
    }
}

/// Analytic continuation of a pure-power atom family past the horizon:
/// locations `eig_scale * k^eig_power + shift`, masses
/// `(coef_scale * k^coef_power)^q` for `k >= start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomTail {
    pub start: u64,
    pub eig_scale: f64,
    pub eig_power: f64,
    pub shift: f64,
    pub coef_scale: f64,
    pub coef_power: f64,
    pub q: f64,
}

const K_LIMIT: f64 = 1e17;

impl AtomTail {
    pub fn location(&self, k: f64) -> f64 {
        self.eig_scale * k.powf(self.eig_power) + self.shift
    }

    pub fn mass(&self, k: f64) -> f64 {
        self.coef_scale.powf(self.q) * k.powf(self.coef_power * self.q)
    }

    fn index_estimate(&self, x: f64) -> f64 {
        let y = (x - self.shift) / self.eig_scale;
        if y <= 0.0 {
            0.0
        } else {
            y.powf(1.0 / self.eig_power).min(K_LIMIT)
        }
    }

    fn above(&self, k: u64, x: f64, inclusive: bool) -> bool {
        let s = self.location(k as f64);
        if inclusive {
            s >= x
        } else {
            s > x
        }
    }

    fn below(&self, k: u64, x: f64, inclusive: bool) -> bool {
        let s = self.location(k as f64);
        if inclusive {
            s <= x
        } else {
            s < x
        }
    }

    /// Smallest `k >= start` whose location lies above `x`.
    fn first_above(&self, x: f64, inclusive: bool) -> u64 {
        let mut k = (self.index_estimate(x).floor() as u64).max(self.start);
        while k > self.start && self.above(k - 1, x, inclusive) {
            k -= 1;
        }
        while !self.above(k, x, inclusive) {
            k += 1;
        }
        k
    }

    /// Largest `k` whose location lies below `x`, if any is `>= start`.
    fn last_below(&self, x: f64, inclusive: bool) -> Option<u64> {
        if x.is_infinite() {
            return Some(K_LIMIT as u64);
        }
        let mut k = self.index_estimate(x).floor() as u64 + 1;
        while k >= self.start && !self.below(k, x, inclusive) {
            if k == 0 {
                return None;
            }
            k -= 1;
        }
        if k < self.start {
            return None;
        }
        while self.below(k + 1, x, inclusive) {
            k += 1;
        }
        Some(k)
    }

    /// Mass of the atoms with location in the interval `lo..hi` with the given end conventions.
    pub fn mass_between(&self, lo: f64, lo_inclusive: bool, hi: f64, hi_inclusive: bool) -> f64 {
        let Some(k_hi) = self.last_below(hi, hi_inclusive) else {
            return 0.0;
        };
        let k_lo = self.first_above(lo, lo_inclusive);
        if k_hi < k_lo {
            return 0.0;
        }
        self.coef_scale.powf(self.q) * power_sum(k_lo, k_hi, self.coef_power * self.q)
    }
}

/// Value of a measure integral, split by source.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeasureIntegral {
    /// Total including tail and density parts.
    pub value: f64,
    /// Contribution of the analytic atom tail.
    pub tail: f64,
    /// Contribution of the density.
    pub density: f64,
    /// Error estimate for the non-atomic parts.
    pub error: f64,
}

/// Positive measure on the open right half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneMeasure {
    atoms: Vec<Atom>,
    prefix: Vec<f64>,
    real_axis: bool,
    density: Option<Density>,
    tail: Option<AtomTail>,
    horizon: Option<f64>,
    sector_angle: Option<f64>,
}

fn canonical_order(atoms: &mut [Atom]) {
    atoms.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
}

impl HalfPlaneMeasure {
    /// Builds a measure, checking that locations lie in the open right
    /// half-plane and masses are positive.
    pub fn new(atoms: Vec<Atom>, density: Option<Density>, tail: Option<AtomTail>) -> Result<Self> {
        for a in &atoms {
            if !(a.location.re > 0.0) || !a.location.im.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "atom {} at {} is not in the open right half-plane",
                    a.index, a.location
                )));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "atom {} has mass {}",
                    a.index, a.mass
                )));
            }
        }
        if let Some(d) = density {
            if !(d.scale > 0.0) || !(d.cutoff >= 0.0) || (d.gamma <= -1.0 && d.cutoff == 0.0) {
                return Err(Error::InvalidInput(format!(
                    "density {d:?} is not locally finite on the half-plane"
                )));
            }
        }
        Ok(Self::new_unchecked(atoms, density, tail))
    }

    /// Builds a measure without validation. Meant for exercising audits on
    /// deliberately corrupted data.
    pub fn new_unchecked(
        mut atoms: Vec<Atom>,
        density: Option<Density>,
        tail: Option<AtomTail>,
    ) -> Self {
        canonical_order(&mut atoms);
        let mut prefix = Vec::with_capacity(atoms.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for a in &atoms {
            acc += a.mass;
            prefix.push(acc);
        }
        let real_axis = atoms.iter().all(|a| a.location.im == 0.0);
        HalfPlaneMeasure {
            atoms,
            prefix,
            real_axis,
            density,
            tail,
            horizon: None,
            sector_angle: None,
        }
    }

    pub fn empty() -> Self {
        Self::new_unchecked(Vec::new(), None, None)
    }

    pub fn with_horizon(mut self, horizon: Option<f64>) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_sector_angle(mut self, theta: Option<f64>) -> Self {
        self.sector_angle = theta;
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn tail(&self) -> Option<&AtomTail> {
        self.tail.as_ref()
    }

    /// Locations below the horizon are complete; beyond it the family was truncated
    /// without an analytic continuation.
    pub fn horizon(&self) -> Option<f64> {
        self.horizon
    }

    pub fn sector_angle(&self) -> Option<f64> {
        self.sector_angle
    }

    /// All atoms lie on the positive real axis.
    pub fn is_real(&self) -> bool {
        self.real_axis
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none() && self.tail.is_none()
    }

    /// The measure stands for an infinite family or has unbounded support.
    pub fn is_infinite(&self) -> bool {
        self.tail.is_some() || self.horizon.is_some() || self.density.is_some()
    }

    /// Whether every atom satisfies `|arg s| < theta` for the declared sector.
    pub fn sector_satisfied(&self) -> bool {
        if self.real_axis {
            return true;
        }
        match self.sector_angle {
            Some(theta) => self.atoms.iter().all(|a| a.location.arg().abs() < theta),
            None => false,
        }
    }

    /// Atoms outside the symmetric squares' natural cone `|Im s| <= Re s`.
    pub fn off_axis_atoms(&self) -> usize {
        self.atoms
            .iter()
            .filter(|a| a.location.im.abs() > a.location.re)
            .count()
    }

    fn atom_range(&self, lo: f64, hi: f64) -> (usize, usize) {
        let i = self.atoms.partition_point(|a| a.location.re <= lo);
        let j = self.atoms.partition_point(|a| a.location.re <= hi);
        (i, j.max(i))
    }

    /// Mass of the vertical strip `{Re z in (lo, hi]}`.
    pub fn vertical_strip_mass(&self, lo: f64, hi: f64) -> f64 {
        let (i, j) = self.atom_range(lo, hi);
        let mut total: f64 = self.atoms[i..j].iter().map(|a| a.mass).sum();
        if let Some(t) = &self.tail {
            total += t.mass_between(lo, false, hi, true);
        }
        if let Some(d) = &self.density {
            total += d.mass_between(lo, hi);
        }
        total
    }

    /// `mu(S_n)` for the dyadic strip `S_n = {Re z in (2^(n-1), 2^n]}`.
    pub fn strip_mass(&self, n: i32) -> f64 {
        self.vertical_strip_mass(2f64.powi(n - 1), 2f64.powi(n))
    }

    /// `mu(Q_I)` for `I = i[-a, a]`: mass with `0 < Re z < 2a` and `|Im z| <= a`.
    pub fn square_mass(&self, a: f64) -> f64 {
        let side = 2.0 * a;
        let end = self.atoms.partition_point(|s| s.location.re < side);
        let mut total = if self.real_axis {
            self.prefix[end]
        } else {
            self.atoms[..end]
                .iter()
                .filter(|s| s.location.im.abs() <= a)
                .map(|s| s.mass)
                .sum()
        };
        if let Some(t) = &self.tail {
            total += t.mass_between(0.0, false, side, false);
        }
        if let Some(d) = &self.density {
            total += d.mass_between(0.0, side);
        }
        total
    }

    /// `int f dmu`. Atoms are summed in canonical order; the analytic tail
    /// is closed by a midpoint integral over the index variable and the
    /// density by adaptive quadrature.
    pub fn integrate<F: Fn(Complex64) -> f64>(
        &self,
        f: F,
        tol: Tolerance,
    ) -> Result<MeasureIntegral> {
        let mut out = MeasureIntegral::default();
        let mut atoms = 0.0;
        for a in &self.atoms {
            atoms += a.mass * f(a.location);
        }
        if let Some(t) = &self.tail {
            let g = |k: f64| {
                let m = t.mass(k);
                if m == 0.0 {
                    0.0
                } else {
                    m * f(Complex64::new(t.location(k), 0.0))
                }
            };
            let x0 = t.start as f64 - 0.5;
            let q = quad::integrate_to_infinity(g, x0, tol)?;
            let h = 0.25;
            let slope = (g(x0 + h) - g(x0 - h)) / (2.0 * h);
            let correction = slope / 24.0;
            out.tail = q.value + correction;
            out.error += q.error + 1e-2 * correction.abs();
        }
        if let Some(d) = &self.density {
            let q = quad::integrate_power_weight(
                |s: f64| f(Complex64::new(s, 0.0)),
                d.gamma,
                d.cutoff,
                tol,
            )?;
            out.density = d.scale * q.value;
            out.error += d.scale * q.error;
        }
        out.value = atoms + out.tail + out.density;
        Ok(out)
    }
}

fn check_stable(index: i64, lambda: Complex64) -> Result<()> {
    if !(lambda.re < 0.0) {
        return Err(Error::UnstableSpectrum {
            index,
            real: lambda.re,
        });
    }
    Ok(())
}

fn check_sector(index: i64, lambda: Complex64, theta: Option<f64>) -> Result<()> {
    if let Some(theta) = theta {
        if (-lambda).arg().abs() >= theta {
            return Err(Error::InvalidSystem(format!(
                "eigenvalue {lambda} at index {index} lies outside the sector of angle {theta}"
            )));
        }
    }
    Ok(())
}

fn diagonal_measure(d: &DiagonalSystem, config: &MeasureConfig) -> Result<HalfPlaneMeasure> {
    d.validate()?;
    let q = d.q;
    let mut atoms = Vec::new();
    let push = |k: i64, lambda: Complex64, b: Complex64, atoms: &mut Vec<Atom>| -> Result<()> {
        check_stable(k, lambda)?;
        check_sector(k, lambda, d.sector_angle)?;
        let mass = b.norm().powf(q);
        if mass > 0.0 {
            atoms.push(Atom {
                location: -lambda,
                mass,
                index: k,
            });
        }
        Ok(())
    };

    if let Some(n) = d.len() {
        for i in 0..n as i64 {
            let k = d.first_index + i;
            let lambda = d.eigenvalue(k).expect("index within length");
            let b = d.coefficient(k).expect("index within length");
            push(k, lambda, b, &mut atoms)?;
        }
        return Ok(HalfPlaneMeasure::new(atoms, None, None)?.with_sector_angle(d.sector_angle));
    }

    let Sequence::Parametric {
        scale: eig_scale,
        power: eig_power,
        ratio: eig_ratio,
        ..
    } = d.eigenvalues
    else {
        unreachable!("infinite families are parametric")
    };
    let Sequence::Parametric {
        scale: coef_scale,
        power: coef_power,
        ratio: coef_ratio,
        ..
    } = d.coefficients
    else {
        unreachable!("infinite families are parametric")
    };
    if !(eig_power >= 0.0 && eig_ratio >= 1.0 && (eig_power > 0.0 || eig_ratio > 1.0)) {
        return Err(Error::UnsupportedTail(format!(
            "eigenvalue family {eig_scale} k^{eig_power} {eig_ratio}^k is not monotone in |lambda_k|"
        )));
    }
    if d.first_index < 1 {
        return Err(Error::InvalidSystem(
            "infinite families must start at index >= 1".into(),
        ));
    }
    let pure_power = eig_ratio == 1.0;
    if pure_power && coef_ratio != 1.0 && coef_scale != 0.0 {
        return Err(Error::UnsupportedTail(format!(
            "coefficients with ratio {coef_ratio}^k over power-law eigenvalues have no closed-form strip masses"
        )));
    }

    let mut k = d.first_index;
    let mut count = 0usize;
    let mut capped = false;
    loop {
        if count >= config.k_max {
            break;
        }
        let lambda = d.eigenvalue(k).expect("parametric family");
        if lambda.norm() > config.lambda_cap {
            capped = true;
            break;
        }
        let b = d.coefficient(k).expect("parametric family");
        push(k, lambda, b, &mut atoms)?;
        count += 1;
        k += 1;
    }

    let mut measure;
    if pure_power {
        let tail = (coef_scale != 0.0).then(|| AtomTail {
            start: k as u64,
            eig_scale,
            eig_power,
            shift: d.shift,
            coef_scale: coef_scale.abs(),
            coef_power,
            q,
        });
        measure = HalfPlaneMeasure::new(atoms, None, tail)?;
    } else {
        let next = -d.eigenvalue(k).expect("parametric family").re;
        measure = HalfPlaneMeasure::new(atoms, None, None)?;
        if coef_scale != 0.0 {
            measure = measure.with_horizon(Some(if capped {
                next.min(config.lambda_cap)
            } else {
                next
            }));
        }
    }
    Ok(measure.with_sector_angle(d.sector_angle))
}

fn power_law_measure(p: &PowerLawDensitySystem) -> Result<HalfPlaneMeasure> {
    p.validate()?;
    HalfPlaneMeasure::new(
        Vec::new(),
        Some(Density {
            gamma: p.gamma,
            scale: p.scale,
            cutoff: p.sigma,
        }),
        None,
    )
}

fn multiplier_measure(m: &MultiplierSystem) -> Result<HalfPlaneMeasure> {
    m.validate()?;
    let mut atoms = Vec::with_capacity(m.atoms.len());
    for (j, a) in m.atoms.iter().enumerate() {
        check_stable(j as i64, a.symbol)?;
        let mass = a.coefficient.norm().powf(m.q) * a.weight;
        if mass > 0.0 {
            atoms.push(Atom {
                location: -a.symbol,
                mass,
                index: j as i64,
            });
        }
    }
    HalfPlaneMeasure::new(atoms, None, None)
}

/// The measure a system's admissibility is tested against:
/// `sum |b_k|^q delta_{-lambda_k}` for diagonal systems, the pushforward
/// `(-a)_* |b|^q mu` for multipliers and the reduced spectral density for
/// power-law systems.
pub fn build_measure(
    system: &SystemDescriptor,
    config: &MeasureConfig,
) -> Result<HalfPlaneMeasure> {
    match &system.kind {
        SystemKind::Diagonal(d) => diagonal_measure(d, config),
        SystemKind::PowerLaw(p) => power_law_measure(p),
        SystemKind::Multiplier(m) => multiplier_measure(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::system::MultiplierAtom;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn heat() -> SystemDescriptor {
        SystemDescriptor::diagonal(
            "heat",
            DiagonalSystem::new(
                Sequence::power(PI * PI, 2.0),
                Sequence::power(2f64.sqrt() * PI, 1.0).alternating(),
                2.0,
            ),
        )
    }

    fn small() -> MeasureConfig {
        MeasureConfig {
            k_max: 1000,
            ..MeasureConfig::default()
        }
    }

    #[test]
    fn heat_atoms() {
        let m = build_measure(&heat(), &small()).unwrap();
        assert_eq!(m.atoms().len(), 1000);
        let a = m.atoms()[4];
        assert_eq!(a.index, 5);
        assert_relative_eq!(a.location.re, 25.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(a.mass, 50.0 * PI * PI, max_relative = 1e-14);
        assert_eq!(m.tail().unwrap().start, 1001);
    }

    #[test]
    fn tail_matches_materialized_strips() {
        let short = build_measure(&heat(), &small()).unwrap();
        let long = build_measure(
            &heat(),
            &MeasureConfig {
                k_max: 200_000,
                ..MeasureConfig::default()
            },
        )
        .unwrap();
        for n in [5, 10, 20, 25, 30, 34] {
            assert_relative_eq!(
                short.strip_mass(n),
                long.strip_mass(n),
                max_relative = 1e-11
            );
        }
        for a in [3.0, 1e4, 1e7, 2e10] {
            assert_relative_eq!(
                short.square_mass(a),
                long.square_mass(a),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn density_strip() {
        let p = SystemDescriptor::new(
            "d",
            SystemKind::PowerLaw(PowerLawDensitySystem {
                gamma: -0.5,
                sigma: 1.0,
                scale: 1.0,
            }),
        );
        let m = build_measure(&p, &small()).unwrap();
        assert_relative_eq!(
            m.strip_mass(1),
            2.0 * (2f64.sqrt() - 1.0),
            max_relative = 1e-14
        );
        assert_eq!(m.strip_mass(0), 0.0);
    }

    #[test]
    fn density_square() {
        let m = HalfPlaneMeasure::new(
            vec![],
            Some(Density {
                gamma: 0.5,
                scale: 1.0,
                cutoff: 0.0,
            }),
            None,
        )
        .unwrap();
        assert_relative_eq!(m.square_mass(0.5), 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn square_boundary_is_open() {
        let m = HalfPlaneMeasure::new(
            vec![Atom {
                location: Complex64::new(2.0, 0.0),
                mass: 1.0,
                index: 1,
            }],
            None,
            None,
        )
        .unwrap();
        assert_eq!(m.square_mass(1.0), 0.0);
        assert_eq!(m.square_mass(1.0 + 1e-12), 1.0);
    }

    #[test]
    fn complex_atoms_respect_height() {
        let m = HalfPlaneMeasure::new(
            vec![Atom {
                location: Complex64::new(1.0, 3.0),
                mass: 1.0,
                index: 1,
            }],
            None,
            None,
        )
        .unwrap();
        assert_eq!(m.square_mass(2.0), 0.0);
        assert_eq!(m.square_mass(3.0), 1.0);
        assert_eq!(m.off_axis_atoms(), 1);
    }

    #[test]
    fn unstable_rejected() {
        let d = DiagonalSystem::new(
            Sequence::explicit_real([-1.0, 0.5]),
            Sequence::explicit_real([1.0, 1.0]),
            2.0,
        );
        let r = build_measure(&SystemDescriptor::diagonal("u", d), &small());
        assert!(matches!(r, Err(Error::UnstableSpectrum { index: 2, .. })));
    }

    #[test]
    fn non_monotone_family_rejected() {
        let d = DiagonalSystem::new(Sequence::power(1.0, -1.0), Sequence::power(1.0, 0.0), 2.0);
        let r = build_measure(&SystemDescriptor::diagonal("u", d), &small());
        assert!(matches!(r, Err(Error::UnsupportedTail(_))));
    }

    #[test]
    fn geometric_family_has_horizon() {
        let d = DiagonalSystem::new(
            Sequence::geometric(1.0, 2.0),
            Sequence::geometric(1.0, 2f64.powf(1.0 / 3.0)),
            2.0,
        );
        let m = build_measure(&SystemDescriptor::diagonal("g", d), &small()).unwrap();
        assert_eq!(m.atoms().len(), 99);
        assert!(m.horizon().unwrap() > 1e29);
        assert!(m.tail().is_none());
    }

    #[test]
    fn multiplier_pushforward() {
        let d = DiagonalSystem::new(
            Sequence::explicit_real([-1.0, -4.0]),
            Sequence::explicit_real([2.0, -1.0]),
            3.0,
        );
        let mult = MultiplierSystem {
            atoms: vec![
                MultiplierAtom {
                    weight: 0.5,
                    symbol: Complex64::new(-1.0, 0.0),
                    coefficient: Complex64::new(2.0, 0.0),
                },
                MultiplierAtom {
                    weight: 2.0,
                    symbol: Complex64::new(-4.0, 0.0),
                    coefficient: Complex64::new(-1.0, 0.0),
                },
            ],
            q: 3.0,
        };
        let a = build_measure(&SystemDescriptor::diagonal("d", d), &small()).unwrap();
        let b = build_measure(
            &SystemDescriptor::new("m", SystemKind::Multiplier(mult)),
            &small(),
        )
        .unwrap();
        assert_eq!(a.atoms()[0].mass * 0.5, b.atoms()[0].mass);
        assert_eq!(a.atoms()[1].mass * 2.0, b.atoms()[1].mass);
    }

    #[test]
    fn integrate_includes_tail() {
        // sum 2 k^2 pi^2 / (k^2 pi^2)^2 = 2/pi^2 * zeta(2) = 1/3
        let m = build_measure(&heat(), &small()).unwrap();
        let r = m
            .integrate(|s| 1.0 / (s.re * s.re), Tolerance::default())
            .unwrap();
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-12);
        assert!(r.tail > 0.0);
    }
}
