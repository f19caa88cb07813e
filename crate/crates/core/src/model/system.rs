use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An indexed sequence `k -> x_k`, either listed or given by a formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Sequence {
    /// Values for consecutive indices starting at the system's first index.
    Explicit { values: Vec<Complex64> },
    /// `(-1)^k * scale * k^power * ratio^k` (sign only when `alternate`).
    Parametric {
        scale: f64,
        power: f64,
        ratio: f64,
        alternate: bool,
    },
}

impl Sequence {
    /// `scale * k^power`.
    pub fn power(scale: f64, power: f64) -> Self {
        Sequence::Parametric {
            scale,
            power,
            ratio: 1.0,
            alternate: false,
        }
    }

    /// `scale * ratio^k`.
    pub fn geometric(scale: f64, ratio: f64) -> Self {
        Sequence::Parametric {
            scale,
            power: 0.0,
            ratio,
            alternate: false,
        }
    }

    pub fn alternating(self) -> Self {
        match self {
            Sequence::Parametric {
                scale,
                power,
                ratio,
                ..
            } => Sequence::Parametric {
                scale,
                power,
                ratio,
                alternate: true,
            },
            other => other,
        }
    }

    pub fn explicit<I: IntoIterator<Item = Complex64>>(values: I) -> Self {
        Sequence::Explicit {
            values: values.into_iter().collect(),
        }
    }

    pub fn explicit_real<I: IntoIterator<Item = f64>>(values: I) -> Self {
        Sequence::explicit(values.into_iter().map(|x| Complex64::new(x, 0.0)))
    }

    /// Number of listed values; `None` for formulas.
    pub fn len(&self) -> Option<usize> {
        match self {
            Sequence::Explicit { values } => Some(values.len()),
            Sequence::Parametric { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Value at index `k`, where `offset` is the first index.
    pub fn value(&self, k: i64, offset: i64) -> Option<Complex64> {
        match self {
            Sequence::Explicit { values } => {
                let i = k - offset;
                if i < 0 {
                    None
                } else {
                    values.get(i as usize).copied()
                }
            }
            Sequence::Parametric {
                scale,
                power,
                ratio,
                alternate,
            } => {
                let x = k as f64;
                let mut v = scale * x.powf(*power);
                if *ratio != 1.0 {
                    v *= ratio.powf(x);
                }
                if *alternate && k.rem_euclid(2) == 1 {
                    v = -v;
                }
                Some(Complex64::new(v, 0.0))
            }
        }
    }

    /// Modulus at index `k` for parametric families, without the sign.
    pub fn modulus(&self, k: f64) -> Option<f64> {
        match self {
            Sequence::Parametric {
                scale,
                power,
                ratio,
                ..
            } => {
                let mut v = scale.abs() * k.powf(*power);
                if *ratio != 1.0 {
                    v *= ratio.abs().powf(k);
                }
                Some(v)
            }
            Sequence::Explicit { .. } => None,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            Sequence::Explicit { values } => values.iter().all(|v| *v == Complex64::new(0.0, 0.0)),
            Sequence::Parametric { scale, .. } => *scale == 0.0,
        }
    }
}

/// Diagonal semigroup `e^{lambda_k t}` on `l^q` with control sequence `b_k`.
///
/// Eigenvalues given by a formula are `lambda_k = -f(k) - shift`, where
/// `f` is the parametric sequence; listed eigenvalues are used as given
/// (minus the shift).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSystem {
    pub eigenvalues: Sequence,
    pub coefficients: Sequence,
    pub q: f64,
    pub sector_angle: Option<f64>,
    pub first_index: i64,
    pub shift: f64,
}

impl DiagonalSystem {
    pub fn new(eigenvalues: Sequence, coefficients: Sequence, q: f64) -> Self {
        DiagonalSystem {
            eigenvalues,
            coefficients,
            q,
            sector_angle: None,
            first_index: 1,
            shift: 0.0,
        }
    }

    /// Single mode `lambda_1`, `b_1`, as used in scalar examples.
    pub fn single_mode(lambda: f64, b: f64, q: f64) -> Self {
        DiagonalSystem::new(
            Sequence::explicit_real([lambda]),
            Sequence::explicit_real([b]),
            q,
        )
    }

    pub fn eigenvalue(&self, k: i64) -> Option<Complex64> {
        let v = self.eigenvalues.value(k, self.first_index)?;
        let base = match self.eigenvalues {
            Sequence::Explicit { .. } => v,
            Sequence::Parametric { .. } => -v,
        };
        Some(base - self.shift)
    }

    pub fn coefficient(&self, k: i64) -> Option<Complex64> {
        self.coefficients.value(k, self.first_index)
    }

    /// Number of modes, or `None` for an infinite family.
    pub fn len(&self) -> Option<usize> {
        match (self.eigenvalues.len(), self.coefficients.len()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0 && self.q.is_finite()) {
            return Err(Error::InvalidSystem(format!(
                "state exponent q = {} must lie in (1, inf)",
                self.q
            )));
        }
        if let Some(theta) = self.sector_angle {
            if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidSystem(format!(
                    "sector angle {theta} must lie in (0, pi/2)"
                )));
            }
        }
        if let (Some(a), Some(b)) = (self.eigenvalues.len(), self.coefficients.len()) {
            if a != b {
                return Err(Error::InvalidSystem(format!(
                    "{a} eigenvalues but {b} coefficients"
                )));
            }
        }
        if let Sequence::Parametric {
            scale,
            ratio,
            alternate,
            ..
        } = self.eigenvalues
        {
            if alternate {
                return Err(Error::InvalidSystem(
                    "eigenvalue families cannot alternate in sign".into(),
                ));
            }
            if !(scale > 0.0) || !(ratio > 0.0) {
                return Err(Error::InvalidSystem(
                    "eigenvalue family needs positive scale and ratio".into(),
                ));
            }
        }
        if !(self.shift >= 0.0) {
            return Err(Error::InvalidSystem(format!(
                "shift {} must be nonnegative",
                self.shift
            )));
        }
        Ok(())
    }
}

/// Normal semigroup whose reduced spectral density is `scale * s^gamma` on `(sigma, inf)`,
/// i.e. spectrum `(-inf, -sigma]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawDensitySystem {
    pub gamma: f64,
    pub sigma: f64,
    pub scale: f64,
}

impl PowerLawDensitySystem {
    pub const Q: f64 = 2.0;

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "density scale {} must be positive",
                self.scale
            )));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidSystem(format!(
                "cutoff sigma = {} must be nonnegative",
                self.sigma
            )));
        }
        if !self.gamma.is_finite() || (self.gamma <= -1.0 && self.sigma == 0.0) {
            return Err(Error::InvalidSystem(format!(
                "density exponent gamma = {} is not locally integrable at 0",
                self.gamma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierAtom {
    pub weight: f64,
    pub symbol: Complex64,
    pub coefficient: Complex64,
}

/// Multiplication semigroup `e^{t a}` on `L^q` of a discrete measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSystem {
    pub atoms: Vec<MultiplierAtom>,
    pub q: f64,
}

impl MultiplierSystem {
    /// Unit-weight multiplier carrying the same data as a finite diagonal system.
    pub fn from_diagonal(system: &DiagonalSystem) -> Result<Self> {
        let n = system.len().ok_or_else(|| {
            Error::InvalidSystem("infinite diagonal family has no finite multiplier form".into())
        })?;
        let atoms = (0..n as i64)
            .map(|i| {
                let k = system.first_index + i;
                MultiplierAtom {
                    weight: 1.0,
                    symbol: system.eigenvalue(k).expect("index within length"),
                    coefficient: system.coefficient(k).expect("index within length"),
                }
            })
            .collect();
        Ok(MultiplierSystem { atoms, q: system.q })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0 && self.q.is_finite()) {
            return Err(Error::InvalidSystem(format!(
                "state exponent q = {} must lie in (1, inf)",
                self.q
            )));
        }
        for (j, a) in self.atoms.iter().enumerate() {
            if !(a.weight > 0.0) {
                return Err(Error::InvalidSystem(format!(
                    "atom {j} has nonpositive weight {}",
                    a.weight
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SystemKind {
    Diagonal(DiagonalSystem),
    PowerLaw(PowerLawDensitySystem),
    Multiplier(MultiplierSystem),
}

impl SystemKind {
    pub fn label(&self) -> &'static str {
        match self {
            SystemKind::Diagonal(_) => "diagonal",
            SystemKind::PowerLaw(_) => "power-law",
            SystemKind::Multiplier(_) => "multiplier",
        }
    }
}

/// A semigroup with a control operator, plus descriptive metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub name: String,
    pub kind: SystemKind,
    pub note: Option<String>,
    pub citation: Option<String>,
    /// Critical exponent known in closed form, if any.
    pub known_threshold: Option<f64>,
    /// Total stabilizing shift applied to the generator.
    pub applied_shift: f64,
    /// The heat-equation resolvent identity may be evaluated in closed form.
    pub closed_form_identity: bool,
}

impl SystemDescriptor {
    pub fn new(name: impl Into<String>, kind: SystemKind) -> Self {
        SystemDescriptor {
            name: name.into(),
            kind,
            note: None,
            citation: None,
            known_threshold: None,
            applied_shift: 0.0,
            closed_form_identity: false,
        }
    }

    pub fn diagonal(name: impl Into<String>, system: DiagonalSystem) -> Self {
        SystemDescriptor::new(name, SystemKind::Diagonal(system))
    }

    pub fn q(&self) -> f64 {
        match &self.kind {
            SystemKind::Diagonal(d) => d.q,
            SystemKind::PowerLaw(_) => PowerLawDensitySystem::Q,
            SystemKind::Multiplier(m) => m.q,
        }
    }

    pub fn as_diagonal(&self) -> Result<&DiagonalSystem> {
        match &self.kind {
            SystemKind::Diagonal(d) => Ok(d),
            other => Err(Error::WrongSystemKind {
                expected: "diagonal",
                found: other.label(),
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SystemKind::Diagonal(d) => d.validate(),
            SystemKind::PowerLaw(p) => p.validate(),
            SystemKind::Multiplier(m) => m.validate(),
        }
    }

    /// True when the spectrum lies on the negative real axis.
    pub fn has_real_spectrum(&self) -> bool {
        match &self.kind {
            SystemKind::Diagonal(d) => match &d.eigenvalues {
                Sequence::Parametric { .. } => true,
                Sequence::Explicit { values } => values.iter().all(|v| v.im == 0.0),
            },
            SystemKind::PowerLaw(_) => true,
            SystemKind::Multiplier(m) => m.atoms.iter().all(|a| a.symbol.im == 0.0),
        }
    }

    pub fn is_shifted(&self) -> bool {
        self.applied_shift > 0.0
    }
}

/// Moves the spectrum left by `omega`: `lambda_k - omega`, `sigma + omega`, `a_j - omega`.
pub fn shift_system(system: &SystemDescriptor, omega: f64) -> Result<SystemDescriptor> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::OutOfRange {
            name: "shift",
            value: omega,
            allowed: "omega > 0",
        });
    }
    let mut out = system.clone();
    match &mut out.kind {
        SystemKind::Diagonal(d) => d.shift += omega,
        SystemKind::PowerLaw(p) => p.sigma += omega,
        SystemKind::Multiplier(m) => {
            for a in &mut m.atoms {
                a.symbol -= omega;
            }
        }
    }
    out.applied_shift += omega;
    Ok(out)
}
