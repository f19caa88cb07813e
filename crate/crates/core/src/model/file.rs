//! System-definition files (TOML or JSON).
//!
//! ```toml
//! kind = "diagonal"
//! name = "heat"
//! q = 2.0
//!
//! [eigenvalues]
//! family = "power"      # explicit | power | geometric
//! c = 9.869604401089358
//! r = 2.0
//!
//! [coefficients]
//! family = "power"
//! c = 4.442882938158366
//! r = 1.0
//! alternate = true
//! ```
//!
//! Explicit families list `values`, each a real number or a `[re, im]` pair.
//! Power-law systems use `gamma`, `scale` and `sigma`; multiplier systems an
//! array of `atoms` with `weight`, `symbol` and `coefficient`.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

use super::system::{
    DiagonalSystem, MultiplierAtom, MultiplierSystem, PowerLawDensitySystem, Sequence,
    SystemDescriptor, SystemKind,
};

fn parse_err(field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        field: field.to_string(),
        message: message.into(),
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn get_f64(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| parse_err(&join(prefix, key), format!("expected a number, found {v}"))),
    }
}

fn require_f64(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<f64> {
    get_f64(obj, prefix, key)?
        .ok_or_else(|| parse_err(&join(prefix, key), "missing required field"))
}

fn get_bool(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<bool> {
    match obj.get(key) {
        None => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(v) => Err(parse_err(
            &join(prefix, key),
            format!("expected true or false, found {v}"),
        )),
    }
}

fn get_str<'a>(obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<Option<&'a str>> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(v) => Err(parse_err(
            &join(prefix, key),
            format!("expected a string, found {v}"),
        )),
    }
}

fn complex(v: &Value, field: &str) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Some(pair) = v.as_array() {
        if pair.len() == 2 {
            if let (Some(re), Some(im)) = (pair[0].as_f64(), pair[1].as_f64()) {
                return Ok(Complex64::new(re, im));
            }
        }
    }
    Err(parse_err(
        field,
        format!("expected a number or [re, im], found {v}"),
    ))
}

fn table<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    match root.get(key) {
        Some(Value::Object(m)) => Ok(m),
        Some(v) => Err(parse_err(key, format!("expected a table, found {v}"))),
        None => Err(parse_err(key, "missing required table")),
    }
}

fn check_keys(obj: &Map<String, Value>, prefix: &str, allowed: &[&str]) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(parse_err(&join(prefix, key), "unknown field"));
        }
    }
    Ok(())
}

fn sequence(obj: &Map<String, Value>, prefix: &str) -> Result<Sequence> {
    let family = get_str(obj, prefix, "family")?
        .ok_or_else(|| parse_err(&join(prefix, "family"), "missing required field"))?;
    match family {
        "explicit" => {
            check_keys(obj, prefix, &["family", "values"])?;
            let field = join(prefix, "values");
            let values = obj
                .get("values")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err(&field, "expected an array of values"))?;
            let values = values
                .iter()
                .enumerate()
                .map(|(i, v)| complex(v, &format!("{field}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Sequence::Explicit { values })
        }
        "power" => {
            check_keys(obj, prefix, &["family", "c", "r", "alternate"])?;
            Ok(Sequence::Parametric {
                scale: require_f64(obj, prefix, "c")?,
                power: require_f64(obj, prefix, "r")?,
                ratio: 1.0,
                alternate: get_bool(obj, prefix, "alternate")?,
            })
        }
        "geometric" => {
            check_keys(obj, prefix, &["family", "c", "rho", "r", "alternate"])?;
            Ok(Sequence::Parametric {
                scale: require_f64(obj, prefix, "c")?,
                power: get_f64(obj, prefix, "r")?.unwrap_or(0.0),
                ratio: require_f64(obj, prefix, "rho")?,
                alternate: get_bool(obj, prefix, "alternate")?,
            })
        }
        other => Err(parse_err(
            &join(prefix, "family"),
            format!("unknown family `{other}`; expected explicit, power or geometric"),
        )),
    }
}

fn diagonal(root: &Map<String, Value>) -> Result<SystemKind> {
    check_keys(
        root,
        "",
        &[
            "kind",
            "name",
            "note",
            "q",
            "sector_angle",
            "first_index",
            "shift",
            "eigenvalues",
            "coefficients",
        ],
    )?;
    let mut d = DiagonalSystem::new(
        sequence(table(root, "eigenvalues")?, "eigenvalues")?,
        sequence(table(root, "coefficients")?, "coefficients")?,
        require_f64(root, "", "q")?,
    );
    d.sector_angle = get_f64(root, "", "sector_angle")?;
    if let Some(v) = root.get("first_index") {
        d.first_index = v
            .as_i64()
            .ok_or_else(|| parse_err("first_index", format!("expected an integer, found {v}")))?;
    }
    d.shift = get_f64(root, "", "shift")?.unwrap_or(0.0);
    Ok(SystemKind::Diagonal(d))
}

fn power_law(root: &Map<String, Value>) -> Result<SystemKind> {
    check_keys(
        root,
        "",
        &["kind", "name", "note", "gamma", "scale", "sigma", "q"],
    )?;
    if let Some(q) = get_f64(root, "", "q")? {
        if q != 2.0 {
            return Err(parse_err(
                "q",
                "power-law systems live on a Hilbert space: q must be 2",
            ));
        }
    }
    Ok(SystemKind::PowerLaw(PowerLawDensitySystem {
        gamma: require_f64(root, "", "gamma")?,
        scale: get_f64(root, "", "scale")?.unwrap_or(1.0),
        sigma: get_f64(root, "", "sigma")?.unwrap_or(0.0),
    }))
}

fn multiplier(root: &Map<String, Value>) -> Result<SystemKind> {
    check_keys(root, "", &["kind", "name", "note", "q", "atoms"])?;
    let atoms = root
        .get("atoms")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("atoms", "expected an array of atoms"))?;
    let atoms = atoms
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let prefix = format!("atoms[{j}]");
            let obj = a
                .as_object()
                .ok_or_else(|| parse_err(&prefix, "expected a table"))?;
            check_keys(obj, &prefix, &["weight", "symbol", "coefficient"])?;
            let symbol = obj
                .get("symbol")
                .ok_or_else(|| parse_err(&join(&prefix, "symbol"), "missing required field"))?;
            let coefficient = obj.get("coefficient").ok_or_else(|| {
                parse_err(&join(&prefix, "coefficient"), "missing required field")
            })?;
            Ok(MultiplierAtom {
                weight: get_f64(obj, &prefix, "weight")?.unwrap_or(1.0),
                symbol: complex(symbol, &join(&prefix, "symbol"))?,
                coefficient: complex(coefficient, &join(&prefix, "coefficient"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemKind::Multiplier(MultiplierSystem {
        atoms,
        q: require_f64(root, "", "q")?,
    }))
}

fn from_value(value: Value, default_name: &str) -> Result<SystemDescriptor> {
    let Value::Object(root) = value else {
        return Err(parse_err("<root>", "expected a table at the top level"));
    };
    let kind =
        get_str(&root, "", "kind")?.ok_or_else(|| parse_err("kind", "missing required field"))?;
    let kind = match kind {
        "diagonal" => diagonal(&root)?,
        "power-law" => power_law(&root)?,
        "multiplier" => multiplier(&root)?,
        other => {
            return Err(parse_err(
                "kind",
                format!("unknown kind `{other}`; expected diagonal, power-law or multiplier"),
            ))
        }
    };
    let name = get_str(&root, "", "name")?
        .unwrap_or(default_name)
        .to_string();
    let mut system = SystemDescriptor::new(name, kind);
    system.note = get_str(&root, "", "note")?.map(str::to_string);
    system.validate()?;
    Ok(system)
}

/// Parses a TOML system definition.
pub fn parse_toml(text: &str) -> Result<SystemDescriptor> {
    let value: toml::Value =
        toml::from_str(text).map_err(|e| parse_err("<toml>", e.message().to_string()))?;
    let json = serde_json::to_value(value).map_err(|e| parse_err("<toml>", e.to_string()))?;
    from_value(json, "system")
}

/// Parses a JSON system definition.
pub fn parse_json(text: &str) -> Result<SystemDescriptor> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| parse_err("<json>", e.to_string()))?;
    from_value(value, "system")
}

/// Reads a system file; `.json` files are JSON, everything else TOML.
pub fn load_system(path: &Path) -> Result<SystemDescriptor> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("system");
    let is_json = path.extension().and_then(|e| e.to_str()) == Some("json");
    let mut system = if is_json {
        parse_json(&text)?
    } else {
        parse_toml(&text)?
    };
    if system.name == "system" {
        system.name = stem.to_string();
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAT: &str = r#"
kind = "diagonal"
name = "heat"
q = 2.0

[eigenvalues]
family = "power"
c = 9.869604401089358
r = 2.0

[coefficients]
family = "power"
c = 4.442882938158366
r = 1.0
alternate = true
"#;

    #[test]
    fn diagonal_toml() {
        let s = parse_toml(HEAT).unwrap();
        let d = s.as_diagonal().unwrap();
        assert_eq!(d.q, 2.0);
        assert_eq!(d.first_index, 1);
        assert!(d.coefficient(1).unwrap().re < 0.0);
    }

    #[test]
    fn missing_field_is_named() {
        let text = HEAT.replace("r = 2.0\n", "");
        match parse_toml(&text) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "eigenvalues.r"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_type_is_named() {
        let text = HEAT.replace("q = 2.0", "q = \"two\"");
        match parse_toml(&text) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "q"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn explicit_complex_json() {
        let text = r#"{"kind": "diagonal", "q": 2,
            "eigenvalues": {"family": "explicit", "values": [[-1, 0.5], -2]},
            "coefficients": {"family": "explicit", "values": [1, [0, 1]]}}"#;
        let s = parse_json(text).unwrap();
        let d = s.as_diagonal().unwrap();
        assert_eq!(d.eigenvalue(1).unwrap(), Complex64::new(-1.0, 0.5));
        assert_eq!(d.coefficient(2).unwrap(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn power_law_and_multiplier() {
        let s = parse_toml("kind = \"power-law\"\ngamma = 0.5\nsigma = 1.0\n").unwrap();
        assert!(matches!(s.kind, SystemKind::PowerLaw(p) if p.sigma == 1.0));
        let m = parse_toml(
            "kind = \"multiplier\"\nq = 2\n[[atoms]]\nweight = 2.0\nsymbol = [-1.0, 0.0]\ncoefficient = 1.0\n",
        )
        .unwrap();
        assert!(matches!(m.kind, SystemKind::Multiplier(ref x) if x.atoms.len() == 1));
    }

    #[test]
    fn unknown_field() {
        let text = HEAT.replace("alternate = true", "alternat = true");
        match parse_toml(&text) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "coefficients.alternat"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
