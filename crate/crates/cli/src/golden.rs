use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

const BUILTIN: &str = include_str!("../data/golden.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    /// rank → flat class label → number of classes.
    pub cube_census: BTreeMap<usize, BTreeMap<String, usize>>,
    pub cell24: Cell24,
    pub uniqueness: Uniqueness,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell24 {
    pub rank: usize,
    pub cusps: usize,
    pub cusp_copies: u64,
    pub cusp_class: String,
    pub betti: Vec<usize>,
    pub euler: i64,
    pub symmetry_order: usize,
    pub adm_order: usize,
    pub coloured_isometry_order: u128,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Uniqueness {
    pub classes: usize,
    pub unfiltered_classes: u64,
}

impl Golden {
    pub fn builtin() -> Golden {
        toml::from_str(BUILTIN).expect("bundled golden file parses")
    }

    pub fn load(path: Option<&Path>) -> Result<(Golden, String)> {
        match path {
            None => Ok((Golden::builtin(), BUILTIN.to_string())),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let golden = toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                Ok((golden, text))
            }
        }
    }
}
