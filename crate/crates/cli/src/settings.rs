//! The run configuration file and command-line overrides.
//!
//! A config file is TOML. Top-level keys pick the world, paratope and seeds;
//! the `[run]` table holds everything in [`RunConfig`] and `[protocol]` the
//! comparison settings. Overrides are applied to the parsed table before it
//! is deserialized, so a flag and the equivalent file key behave the same
//! and flags always win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use idionet_core::{Paratope, ParatopeMatrix, SelectionMode};
use idionet_experiment::{paratope_set, Protocol, RunConfig};
use idionet_sim::World;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// World file; the built-in maze when absent.
    pub world: Option<PathBuf>,
    /// Paratope file; generated from `paratope_seed` when absent.
    pub paratope: Option<PathBuf>,
    pub paratope_seed: u64,
    pub seed: u64,
    pub run: RunConfig,
    pub protocol: ProtocolSettings,
}

impl Default for Settings {
    fn default() -> Self {
        let p = Protocol::default();
        Self {
            world: None,
            paratope: None,
            paratope_seed: p.paratope_seed,
            seed: p.run_seed,
            run: RunConfig::default(),
            protocol: ProtocolSettings::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolSettings {
    pub systems: Vec<SelectionMode>,
    pub paratopes: usize,
    pub runs_per_paratope: usize,
    pub mirror: bool,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        let p = Protocol::default();
        Self {
            systems: p.systems,
            paratopes: p.paratopes,
            runs_per_paratope: p.runs_per_paratope,
            mirror: p.mirror,
        }
    }
}

impl Settings {
    /// Reads `file` (if any), applies `overrides` in order and validates.
    pub fn resolve(file: Option<&Path>, overrides: &[(String, Value)]) -> Result<Self> {
        let mut table = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                text.parse::<Table>()
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => Table::new(),
        };
        for (key, value) in overrides {
            set_path(&mut table, key, value.clone())?;
        }
        let settings: Settings = Value::Table(table)
            .try_into()
            .context("invalid configuration")?;
        settings.run.validate().context("invalid configuration")?;
        Ok(settings)
    }

    pub fn load_world(&self) -> Result<World> {
        match &self.world {
            Some(path) => {
                World::load(path).with_context(|| format!("loading world {}", path.display()))
            }
            None => Ok(World::maze()),
        }
    }

    /// The starting paratope and the id recorded with each run.
    pub fn load_paratope(&self) -> Result<(String, Paratope)> {
        match &self.paratope {
            Some(path) => {
                let p = ParatopeMatrix::load(path)
                    .with_context(|| format!("loading paratope {}", path.display()))?;
                let id = path
                    .file_stem()
                    .map_or_else(|| "paratope".to_string(), |s| s.to_string_lossy().into_owned());
                Ok((id, p))
            }
            None => Ok(paratope_set(1, self.paratope_seed).remove(0)),
        }
    }

    pub fn protocol(&self) -> Protocol {
        Protocol {
            base: self.run.clone(),
            systems: self.protocol.systems.clone(),
            paratopes: self.protocol.paratopes,
            runs_per_paratope: self.protocol.runs_per_paratope,
            paratope_seed: self.paratope_seed,
            run_seed: self.seed,
            mirror: self.protocol.mirror,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("settings serialize")
    }
}

/// Parses `key=value` where the value is a TOML literal. Bare words are
/// taken as strings so `run.system=S1` works without quoting.
pub fn parse_assignment(s: &str) -> Result<(String, Value)> {
    let Some((key, raw)) = s.split_once('=') else {
        bail!("expected key=value, got {s:?}");
    };
    let key = key.trim();
    if key.is_empty() {
        bail!("empty key in {s:?}");
    }
    Ok((key.to_string(), parse_value(raw.trim())))
}

pub fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn set_path(table: &mut Table, key: &str, value: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    let (last, parents) = parts.split_last().expect("split yields one part");
    let mut t = table;
    for part in parents {
        let entry = t
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        t = match entry {
            Value::Table(inner) => inner,
            _ => bail!("{key}: {part} is not a table"),
        };
    }
    t.insert(last.to_string(), value);
    Ok(())
}

/// The settings as `#` comment lines, for the head of CSV outputs.
pub fn comment_header(settings: &Settings) -> String {
    settings
        .to_toml()
        .lines()
        .map(|l| format!("# {l}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "seed = 4\n[run]\nk1 = 0.3\nsystem = \"S2\"\n").unwrap();
        let s = Settings::resolve(
            Some(&path),
            &[parse_assignment("run.k1=0.9").unwrap(), parse_assignment("run.system=S1").unwrap()],
        )
        .unwrap();
        assert_eq!(s.seed, 4);
        assert_eq!(s.run.k1, 0.9);
        assert_eq!(s.run.system, SelectionMode::S1);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = Settings::resolve(None, &[parse_assignment("run.kk1=1").unwrap()]).unwrap_err();
        assert!(format!("{err:#}").contains("kk1"), "{err:#}");
    }

    #[test]
    fn round_trips_through_toml() {
        let s = Settings::default();
        let back: Settings = toml::from_str(&s.to_toml()).unwrap();
        assert_eq!(back, s);
    }
}
