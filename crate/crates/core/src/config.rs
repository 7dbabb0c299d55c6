//! TOML parameter files.
//!
//! Every [`SystemParams`] field may be given under its own name in rad/s (or
//! its natural unit). Rates may instead be given as ordinary frequencies with
//! an `_hz` suffix (multiplied by 2π on load), and some quantities as ratios:
//!
//! | key                     | meaning      |
//! |-------------------------|--------------|
//! | `eta_over_kappa`        | η = r·κ      |
//! | `xi1_over_kappa`        | ξ₁ = r·κ     |
//! | `xi2_over_xi1`          | ξ₂ = r·ξ₁    |
//! | `gamma_c_over_kappa`    | γ_c = r·κ    |
//! | `delta_c_over_kappa`    | δ_c = r·κ    |
//! | `omega_sw_over_omega_r` | ω_sw = r·ω_R |
//!
//! Giving two forms of the same quantity is an error. Quantities not
//! mentioned take the values of [`SystemParams::reference_defaults`], with
//! ratio-defined defaults following the file's base quantities.

use std::f64::consts::PI;
use std::path::Path;

use toml::{Table, Value};

use crate::error::ConfigError;
use crate::params::{DConvention, SystemParams};

#[derive(Clone, Copy)]
enum Default {
    Absolute(f64),
    Hz(f64),
    Ratio(f64),
}

struct Quantity {
    name: &'static str,
    hz: bool,
    ratio: Option<(&'static str, &'static str)>,
    default: Default,
}

const fn q(name: &'static str, hz: bool, ratio: Option<(&'static str, &'static str)>, default: Default) -> Quantity {
    Quantity {
        name,
        hz,
        ratio,
        default,
    }
}

/// Resolution order matters: ratio bases come first.
const QUANTITIES: &[Quantity] = &[
    q("kappa", true, None, Default::Hz(1.3e6)),
    q("omega_m", true, None, Default::Absolute(1e5)),
    q("gamma_m", true, None, Default::Hz(100.0)),
    q("omega_r", true, None, Default::Absolute(2.37e4)),
    q(
        "gamma_c",
        true,
        Some(("gamma_c_over_kappa", "kappa")),
        Default::Ratio(0.001),
    ),
    q("xi1", true, Some(("xi1_over_kappa", "kappa")), Default::Ratio(0.05)),
    q("xi2", true, Some(("xi2_over_xi1", "xi1")), Default::Ratio(0.0)),
    q("eta", true, Some(("eta_over_kappa", "kappa")), Default::Ratio(100.0)),
    q(
        "delta_c",
        true,
        Some(("delta_c_over_kappa", "kappa")),
        Default::Ratio(50.0),
    ),
    q(
        "omega_sw",
        true,
        Some(("omega_sw_over_omega_r", "omega_r")),
        Default::Ratio(0.5),
    ),
    q("u0", true, None, Default::Absolute(1.05e4)),
    q("n_atoms", false, None, Default::Absolute(1e5)),
    q("temperature", false, None, Default::Absolute(1e-7)),
    q("n_s", false, None, Default::Absolute(10.0)),
    q("phi", false, None, Default::Absolute(PI)),
];

fn number(table: &Table, key: &str) -> Result<f64, ConfigError> {
    match &table[key] {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::WrongType {
            key: key.to_owned(),
            expected: "number",
        }),
    }
}

pub fn parse_config(text: &str) -> Result<SystemParams, ConfigError> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    resolve(&table)
}

pub fn load_config(path: &Path) -> Result<SystemParams, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_config(&text)
}

fn resolve(table: &Table) -> Result<SystemParams, ConfigError> {
    let mut known: Vec<String> = vec!["squeezing_enabled".into(), "d_convention".into()];
    for quantity in QUANTITIES {
        known.push(quantity.name.into());
        if quantity.hz {
            known.push(format!("{}_hz", quantity.name));
        }
        if let Some((key, _)) = quantity.ratio {
            known.push(key.into());
        }
    }
    if let Some(key) = table.keys().find(|k| !known.iter().any(|n| n == *k)) {
        return Err(ConfigError::UnknownKey { key: key.clone() });
    }

    let mut values: Vec<(&'static str, f64)> = Vec::new();
    let lookup = |values: &[(&str, f64)], name: &str| -> f64 {
        values
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .expect("ratio base resolved first")
    };
    for quantity in QUANTITIES {
        let hz_key = format!("{}_hz", quantity.name);
        let mut present: Vec<&str> = Vec::new();
        if table.contains_key(quantity.name) {
            present.push(quantity.name);
        }
        if quantity.hz && table.contains_key(&hz_key) {
            present.push(&hz_key);
        }
        if let Some((key, _)) = quantity.ratio {
            if table.contains_key(key) {
                present.push(key);
            }
        }
        if present.len() > 1 {
            return Err(ConfigError::Conflict {
                first: present[0].to_owned(),
                second: present[1].to_owned(),
            });
        }
        let value = match present.first() {
            Some(&key) if key == quantity.name => number(table, key)?,
            Some(&key) if key == hz_key => 2.0 * PI * number(table, key)?,
            Some(&key) => {
                let (_, base) = quantity.ratio.expect("only ratio keys remain");
                number(table, key)? * lookup(&values, base)
            }
            None => match quantity.default {
                Default::Absolute(v) => v,
                Default::Hz(v) => 2.0 * PI * v,
                Default::Ratio(r) => {
                    let (_, base) = quantity.ratio.expect("ratio default has a base");
                    r * lookup(&values, base)
                }
            },
        };
        values.push((quantity.name, value));
    }

    let squeezing_enabled = match table.get("squeezing_enabled") {
        None => false,
        Some(Value::Boolean(b)) => *b,
        Some(_) => {
            return Err(ConfigError::WrongType {
                key: "squeezing_enabled".into(),
                expected: "boolean",
            })
        }
    };
    let d_convention = match table.get("d_convention") {
        None => DConvention::Standard,
        Some(Value::String(s)) if s == "standard" => DConvention::Standard,
        Some(Value::String(s)) if s == "literal" => DConvention::Literal,
        Some(_) => {
            return Err(ConfigError::InvalidValue {
                key: "d_convention".into(),
                reason: "expected \"standard\" or \"literal\"".into(),
            })
        }
    };

    let get = |name: &str| lookup(&values, name);
    let params = SystemParams {
        kappa: get("kappa"),
        omega_m: get("omega_m"),
        gamma_m: get("gamma_m"),
        gamma_c: get("gamma_c"),
        xi1: get("xi1"),
        xi2: get("xi2"),
        eta: get("eta"),
        delta_c: get("delta_c"),
        omega_r: get("omega_r"),
        omega_sw: get("omega_sw"),
        n_atoms: get("n_atoms"),
        u0: get("u0"),
        temperature: get("temperature"),
        n_s: get("n_s"),
        phi: get("phi"),
        squeezing_enabled,
        d_convention,
    };
    params.validate()?;
    Ok(params)
}

/// Fully resolved parameters as a config file using only absolute keys.
/// Parsing the result reproduces `params` exactly.
pub fn to_config_string(params: &SystemParams) -> String {
    toml::to_string(params).expect("SystemParams serializes to TOML")
}
