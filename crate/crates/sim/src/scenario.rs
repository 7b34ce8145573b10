use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vip_core::model::Palette;

use crate::engine::SessionConfig;
use crate::error::SimError;
use crate::world::WorldState;

/// Golden outputs, as paths relative to the scenario file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// Session document after the run.
    #[serde(default)]
    pub layout: Option<PathBuf>,
    /// Effect events of the run, as JSONL.
    #[serde(default)]
    pub effects: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub world: WorldState,
    #[serde(default = "Palette::standard")]
    pub palette: Palette,
    #[serde(default)]
    pub session: SessionConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl Scenario {
    pub fn new(world: WorldState) -> Self {
        Self {
            world,
            palette: Palette::standard(),
            session: SessionConfig::default(),
            expected: None,
        }
    }

    pub fn duration_ms(&self) -> u64 {
        self.world.duration_ms
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, SimError> {
        let sc: Scenario = serde_json::from_slice(bytes)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.world.validate()?;
        self.palette.validate()?;
        Ok(())
    }

    /// Resolves an expected-output path against the scenario's directory.
    pub fn resolve(scenario_path: &Path, relative: &Path) -> PathBuf {
        scenario_path
            .parent()
            .unwrap_or(Path::new("."))
            .join(relative)
    }
}
