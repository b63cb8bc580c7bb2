//! TOML model definitions.
//!
//! ```toml
//! name = "ising"
//!
//! [charges]
//! labels = ["I", "sigma", "psi"]
//! vacuum = "I"                  # optional, defaults to the first label
//! dual = { sigma = "sigma" }    # optional, checked against the fusion rules
//!
//! [fusion]                      # vacuum rules are implied; b*a mirrors a*b
//! "sigma*sigma" = ["I", "psi"]
//! "sigma*psi" = ["sigma"]
//! "psi*psi" = ["I"]
//!
//! [F]                           # "a,b,c,d;e,f" = [F^{abc}_d]_{ef}
//! "sigma,sigma,sigma,sigma;I,I" = "1/sqrt(2)"
//!
//! [R]                           # "a,b;c" = R^{ab}_c
//! "sigma,sigma;I" = "exp(-i*1/8*pi)"
//! ```
//!
//! Admissible F and R entries that are omitted are 1. Values are complex
//! literals in the grammar of [`crate::mtc::literal`] or plain numbers.
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::literal::{format_complex, parse_complex};
use super::model::{AnyonModel, Charge, ModelBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    charges: ChargesSection,
    #[serde(default)]
    fusion: BTreeMap<String, Vec<String>>,
    #[serde(default, rename = "F")]
    f: BTreeMap<String, Literal>,
    #[serde(default, rename = "R")]
    r: BTreeMap<String, Literal>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChargesSection {
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vacuum: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    dual: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Text(String),
    Number(f64),
}

impl Literal {
    fn value(&self) -> Result<C64> {
        match self {
            Literal::Text(s) => parse_complex(s),
            Literal::Number(x) => Ok(C64::new(*x, 0.0)),
        }
    }
}

/// Parses a TOML model definition and runs all load-time verification.
pub fn load_model(text: &str) -> Result<AnyonModel> {
    let file: ModelFile = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    let mut labels = file.charges.labels.clone();
    if labels.is_empty() {
        return Err(Error::Parse("charges.labels is empty".into()));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(Error::Parse(format!("duplicate charge label `{dup}`")));
    }
    if let Some(vac) = &file.charges.vacuum {
        let pos = labels.iter().position(|l| l == vac).ok_or_else(|| Error::UnknownCharge(vac.clone()))?;
        let v = labels.remove(pos);
        labels.insert(0, v);
    }
    let index = |label: &str| -> Result<Charge> {
        labels
            .iter()
            .position(|l| l == label.trim())
            .ok_or_else(|| Error::UnknownCharge(label.trim().to_string()))
    };
    let mut builder = ModelBuilder::with_labels(file.name.clone().unwrap_or_else(|| "custom".into()), labels.clone());
    for (a, b) in &file.charges.dual {
        builder = builder.dual(index(a)?, index(b)?);
    }
    for (key, outs) in &file.fusion {
        let (a, b) = key
            .split_once('*')
            .ok_or_else(|| Error::Parse(format!("fusion key `{key}` must look like \"a*b\"")))?;
        let outs = outs.iter().map(|c| index(c)).collect::<Result<Vec<_>>>()?;
        builder = builder.fuse(index(a)?, index(b)?, &outs);
    }
    for (key, value) in &file.f {
        let (abcd, ef) = key
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("F key `{key}` must look like \"a,b,c,d;e,f\"")))?;
        let head = abcd.split(',').map(index).collect::<Result<Vec<_>>>()?;
        let tail = ef.split(',').map(index).collect::<Result<Vec<_>>>()?;
        if head.len() != 4 || tail.len() != 2 {
            return Err(Error::Parse(format!("F key `{key}` must have four charges, then two")));
        }
        builder = builder.f([head[0], head[1], head[2], head[3], tail[0], tail[1]], value.value()?);
    }
    for (key, value) in &file.r {
        let (ab, c) = key
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("R key `{key}` must look like \"a,b;c\"")))?;
        let head = ab.split(',').map(index).collect::<Result<Vec<_>>>()?;
        if head.len() != 2 {
            return Err(Error::Parse(format!("R key `{key}` must have two charges, then one")));
        }
        builder = builder.r([head[0], head[1], index(c)?], value.value()?);
    }
    builder.build()
}

/// Reads and parses a model file.
pub fn load_model_file(path: impl AsRef<Path>) -> Result<AnyonModel> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    load_model(&text)
}

/// Writes a model in the TOML format accepted by [`load_model`]. Entries equal to 1 are omitted.
pub fn write_model(model: &AnyonModel) -> String {
    let one = C64::new(1.0, 0.0);
    let label = |a: Charge| model.label(a).to_string();
    let mut fusion = BTreeMap::new();
    let mut f = BTreeMap::new();
    let mut r = BTreeMap::new();
    for a in model.charges().skip(1) {
        for b in model.charges().skip(a) {
            fusion.insert(
                format!("{}*{}", label(a), label(b)),
                model.products(a, b).iter().map(|&c| label(c)).collect(),
            );
        }
    }
    for a in model.charges() {
        for b in model.charges() {
            for c in model.charges() {
                for d in model.charges() {
                    let (rows, cols, mat) = model.f_matrix(a, b, c, d);
                    for (i, &e) in rows.iter().enumerate() {
                        for (j, &g) in cols.iter().enumerate() {
                            if mat[(i, j)] != one {
                                let key = format!("{},{},{},{};{},{}", label(a), label(b), label(c), label(d), label(e), label(g));
                                f.insert(key, Literal::Text(format_complex(mat[(i, j)])));
                            }
                        }
                    }
                }
            }
            for &c in model.products(a, b) {
                let value = model.r(a, b, c);
                if value != one {
                    r.insert(format!("{},{};{}", label(a), label(b), label(c)), Literal::Text(format_complex(value)));
                }
            }
        }
    }
    let file = ModelFile {
        name: Some(model.name().to_string()),
        charges: ChargesSection {
            labels: model.labels().to_vec(),
            vacuum: Some(label(0)),
            dual: BTreeMap::new(),
        },
        fusion,
        f,
        r,
    };
    toml::to_string(&file).expect("model tables serialize")
}
