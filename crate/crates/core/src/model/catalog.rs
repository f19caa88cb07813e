//! Builtin systems with known critical exponents.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

use super::system::{
    shift_system, DiagonalSystem, PowerLawDensitySystem, Sequence, SystemDescriptor, SystemKind,
};

/// Parameters accepted by parametrized catalog entries.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CatalogParams {
    /// Space dimension for `laplacian-Rn`.
    pub n: Option<u32>,
    /// Exponent the counterexample sequences are tuned to.
    pub p0: Option<f64>,
}

/// One row of the catalog listing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogListing {
    pub name: &'static str,
    pub params: CatalogParams,
    pub label: String,
    pub known_threshold: Option<f64>,
    pub citation: String,
    pub note: Option<String>,
}

impl Serialize for CatalogParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        if let Some(n) = self.n {
            map.serialize_entry("n", &n)?;
        }
        if let Some(p0) = self.p0 {
            map.serialize_entry("p0", &p0)?;
        }
        map.end()
    }
}

pub const NAMES: [&str; 7] = [
    "heat1d-dirichlet",
    "heat-halfline-dirichlet",
    "heat-halfline-neumann",
    "laplacian-Rn",
    "counterexample-geometric-small-p",
    "counterexample-geometric-large-p",
    "weiss-counterexample",
];

const HEAT1D_CITATION: &str = "heat equation on [0,1], Dirichlet boundary control at 1: \
    lambda_k = -k^2 pi^2, b_k = (-1)^k sqrt(2) k pi; b in X_(-beta) iff beta > 3/4, \
    not admissible at p = 4";

fn heat1d() -> SystemDescriptor {
    let d = DiagonalSystem::new(
        Sequence::power(PI * PI, 2.0),
        Sequence::power(2f64.sqrt() * PI, 1.0).alternating(),
        2.0,
    );
    let mut s = SystemDescriptor::diagonal("heat1d-dirichlet", d);
    s.citation = Some(HEAT1D_CITATION.into());
    s.known_threshold = Some(4.0);
    s
}

fn power_law(name: &str, gamma: f64, citation: String, threshold: f64) -> Result<SystemDescriptor> {
    let mut s = SystemDescriptor::new(
        name,
        SystemKind::PowerLaw(PowerLawDensitySystem {
            gamma,
            sigma: 0.0,
            scale: 1.0,
        }),
    );
    s.citation = Some(citation);
    s.known_threshold = Some(threshold);
    s.note = Some(
        "generator shifted by 1 to make the spectrum (-inf, -1]; verdicts are finite-time".into(),
    );
    shift_system(&s, 1.0)
}

fn laplacian(n: u32) -> Result<SystemDescriptor> {
    if !(1..=3).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            allowed: "n in {1, 2, 3}",
        });
    }
    let gamma = n as f64 / 2.0 - 1.0;
    power_law(
        "laplacian-Rn",
        gamma,
        format!(
            "Laplacian on R^{n} with point control delta_0: reduced spectral density |z|^(n/2-1) = s^{gamma} \
             on the negative axis; admissible for p > 4/(4-n)"
        ),
        4.0 / (4.0 - n as f64),
    )
}

fn counterexample_small(p0: f64) -> Result<SystemDescriptor> {
    if !(p0 > 1.0 && p0 <= 2.0) {
        return Err(Error::OutOfRange {
            name: "p0",
            value: p0,
            allowed: "1 < p0 <= 2",
        });
    }
    let conj = p0 / (p0 - 1.0);
    let d = DiagonalSystem::new(
        Sequence::geometric(1.0, 2.0),
        Sequence::geometric(1.0, 2f64.powf(1.0 / conj)),
        2.0,
    );
    let mut s = SystemDescriptor::diagonal("counterexample-geometric-small-p", d);
    s.citation = Some(format!(
        "lambda_k = -2^k, b_k = 2^(k/p0'), p0 = {p0}: p0-admissible by the Carleson square test, \
         yet b is not in X_(-1/p0')"
    ));
    s.known_threshold = Some(p0);
    Ok(s)
}

fn counterexample_large(p0: f64) -> Result<SystemDescriptor> {
    if !(p0 > 2.0 && p0.is_finite()) {
        return Err(Error::OutOfRange {
            name: "p0",
            value: p0,
            allowed: "2 < p0 < inf",
        });
    }
    let conj = p0 / (p0 - 1.0);
    let d = DiagonalSystem::new(
        Sequence::geometric(1.0, 2.0),
        Sequence::Parametric {
            scale: 1.0,
            power: -0.5,
            ratio: 2f64.powf(1.0 / conj),
            alternate: false,
        },
        2.0,
    );
    let mut s = SystemDescriptor::diagonal("counterexample-geometric-large-p", d);
    s.citation = Some(format!(
        "lambda_k = -2^k, b_k = k^(-1/2) 2^(k/p0'), p0 = {p0}: p0-admissible by the dyadic strip test \
         (terms k^(-p0/(p0-2))), yet b is not in X_(-1/p0') (harmonic series)"
    ));
    s.known_threshold = Some(p0);
    Ok(s)
}

/// Resolves a catalog name to a system.
pub fn lookup(name: &str, params: CatalogParams) -> Result<SystemDescriptor> {
    match name {
        "heat1d-dirichlet" => Ok(heat1d()),
        "weiss-counterexample" => {
            let mut s = heat1d();
            s.name = "weiss-counterexample".into();
            s.closed_form_identity = true;
            s.note = Some(
                "the resolvent condition holds at p = 4 (sup_mu mu sum 2n^2 pi^2/(mu^2+n^2 pi^2)^2 = \
                 1/2 (coth mu - mu csch^2 mu) <= 1/2) while p = 4 admissibility fails: \
                 the 4-Weiss property is violated"
                    .into(),
            );
            Ok(s)
        }
        "heat-halfline-dirichlet" => power_law(
            "heat-halfline-dirichlet",
            0.5,
            "heat equation on the half-line, Dirichlet boundary control: spectral density s^(1/2); \
             admissible for p > 4"
                .into(),
            4.0,
        ),
        "heat-halfline-neumann" => power_law(
            "heat-halfline-neumann",
            -0.5,
            "heat equation on the half-line, Neumann boundary control: spectral density s^(-1/2); \
             admissible for p > 4/3"
                .into(),
            4.0 / 3.0,
        ),
        "laplacian-Rn" => laplacian(params.n.unwrap_or(3)),
        "counterexample-geometric-small-p" => counterexample_small(params.p0.unwrap_or(1.5)),
        "counterexample-geometric-large-p" => counterexample_large(params.p0.unwrap_or(3.0)),
        other => Err(Error::NotFound(other.to_string())),
    }
}

fn listing(name: &'static str, params: CatalogParams) -> CatalogListing {
    let s = lookup(name, params).expect("builtin entries resolve");
    let label = match (params.n, params.p0) {
        (Some(n), _) => format!("{name} (n = {n})"),
        (_, Some(p0)) => format!("{name} (p0 = {p0})"),
        _ => name.to_string(),
    };
    CatalogListing {
        name,
        params,
        label,
        known_threshold: s.known_threshold,
        citation: s.citation.unwrap_or_default(),
        note: s.note,
    }
}

/// Every catalog system at its listed parameters; `laplacian-Rn` appears once per dimension.
pub fn listings() -> Vec<CatalogListing> {
    let none = CatalogParams::default();
    vec![
        listing("heat1d-dirichlet", none),
        listing("heat-halfline-dirichlet", none),
        listing("heat-halfline-neumann", none),
        listing(
            "laplacian-Rn",
            CatalogParams {
                n: Some(1),
                p0: None,
            },
        ),
        listing(
            "laplacian-Rn",
            CatalogParams {
                n: Some(2),
                p0: None,
            },
        ),
        listing(
            "laplacian-Rn",
            CatalogParams {
                n: Some(3),
                p0: None,
            },
        ),
        listing(
            "counterexample-geometric-small-p",
            CatalogParams {
                n: None,
                p0: Some(1.5),
            },
        ),
        listing(
            "counterexample-geometric-large-p",
            CatalogParams {
                n: None,
                p0: Some(3.0),
            },
        ),
        listing("weiss-counterexample", none),
    ]
}

/// The systems behind [`listings`].
pub fn all_systems() -> Vec<SystemDescriptor> {
    listings()
        .into_iter()
        .map(|l| lookup(l.name, l.params).expect("builtin entries resolve"))
        .collect()
}
