//! Parameter resolution: flags override the config file, which overrides
//! the figure preset, which overrides the built-in defaults.
//!
//! Each layer is flattened to a JSON object and laid over the previous
//! one; the result is deserialized into the command's parameter struct,
//! whose `deny_unknown_fields` catches typos in config files.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Contents of a `--config` file: global keys at the top level and one
/// table per command.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub globals: Map<String, Value>,
    pub sections: Map<String, Value>,
}

const GLOBAL_KEYS: [&str; 3] = ["format", "seed", "threads"];

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let mut cfg = ConfigFile::default();
        for (k, v) in table {
            let v = serde_json::to_value(v).map_err(|e| CliError::Usage(format!("config key {k}: {e}")))?;
            if v.is_object() {
                cfg.sections.insert(k, v);
            } else if GLOBAL_KEYS.contains(&k.as_str()) {
                cfg.globals.insert(k, v);
            } else {
                return Err(CliError::Usage(format!("config: unknown top-level key {k:?}")));
            }
        }
        Ok(cfg)
    }

    pub fn section(&self, name: &str) -> Map<String, Value> {
        match self.sections.get(name) {
            Some(Value::Object(m)) => m.clone(),
            _ => Map::new(),
        }
    }

    pub fn global<T: DeserializeOwned>(&self, key: &str) -> CliResult<Option<T>> {
        self.globals
            .get(key)
            .map(|v| serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
            .transpose()
    }
}

/// Flag values that were actually given: nulls, empty lists and unset
/// switches are dropped so they do not mask lower layers.
fn given(flags: &impl Serialize) -> CliResult<Map<String, Value>> {
    match serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))? {
        Value::Object(m) => Ok(m
            .into_iter()
            .filter(|(_, v)| match v {
                Value::Null | Value::Bool(false) => false,
                Value::Array(a) => !a.is_empty(),
                _ => true,
            })
            .collect()),
        _ => Ok(Map::new()),
    }
}

/// Resolved parameters together with their JSON form for the manifest.
pub struct Resolved<P> {
    pub params: P,
    pub value: Value,
}

pub fn resolve<P, F>(
    section: &str,
    config: &ConfigFile,
    flags: &F,
    preset: impl FnOnce(Option<&str>) -> CliResult<P>,
) -> CliResult<Resolved<P>>
where
    P: Serialize + DeserializeOwned,
    F: Serialize,
{
    let flag_map = given(flags)?;
    let cfg_map = config.section(section);
    let figure = flag_map
        .get("figure")
        .or_else(|| cfg_map.get("figure"))
        .and_then(Value::as_str)
        .map(str::to_owned);
    let base = preset(figure.as_deref())?;
    let mut merged = match serde_json::to_value(&base).map_err(|e| CliError::Usage(e.to_string()))? {
        Value::Object(m) => m,
        _ => unreachable!("parameter structs serialize to objects"),
    };
    merged.extend(cfg_map);
    merged.extend(flag_map);
    let value = Value::Object(merged);
    let params = serde_json::from_value(value.clone()).map_err(|e| CliError::Usage(format!("{section}: {e}")))?;
    Ok(Resolved { params, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct P {
        figure: Option<String>,
        a: f64,
        b: Vec<f64>,
        on: bool,
    }

    #[derive(Serialize)]
    struct F {
        figure: Option<String>,
        a: Option<f64>,
        b: Vec<f64>,
        on: bool,
    }

    fn preset(fig: Option<&str>) -> CliResult<P> {
        Ok(match fig {
            Some("x") => P { figure: Some("x".into()), a: 5.0, b: vec![1.0, 2.0], on: true },
            Some(other) => return Err(CliError::Usage(format!("unknown figure {other}"))),
            None => P { figure: None, a: 1.0, b: vec![], on: false },
        })
    }

    #[test]
    fn layering() {
        let cfg = ConfigFile::parse("seed = 3\n[cmd]\na = 2.0\nfigure = \"x\"\n").unwrap();
        let flags = F { figure: None, a: None, b: vec![9.0], on: false };
        let r = resolve("cmd", &cfg, &flags, preset).unwrap().params;
        assert_eq!(r, P { figure: Some("x".into()), a: 2.0, b: vec![9.0], on: true });
        assert_eq!(cfg.global::<u64>("seed").unwrap(), Some(3));
        let flags = F { figure: None, a: Some(7.0), b: vec![], on: false };
        assert_eq!(resolve("cmd", &cfg, &flags, preset).unwrap().params.a, 7.0);
    }

    #[test]
    fn rejects_unknown_keys() {
        let cfg = ConfigFile::parse("[cmd]\nbogus = 1\n").unwrap();
        let flags = F { figure: None, a: None, b: vec![], on: false };
        assert!(matches!(resolve("cmd", &cfg, &flags, preset), Err(CliError::Usage(_))));
        assert!(ConfigFile::parse("stray = 1\n").is_err());
    }
}
