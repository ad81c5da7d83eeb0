//! Rig configuration documents.
//!
//! JSON with human-friendly units (degrees, kPa). Values are kept as written so
//! that parse -> serialize -> parse is exact; conversion to SI happens in
//! [`RigConfig::to_assembly`].

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::assembly::{kinematic_map, Actuator, Assembly, DofSelection, Placement};
use crate::error::{Error, Result};
use crate::free::FreeDesign;

pub const PAPER_RIG_NAME: &str = "paper_rig";

/// Three-FREE rig: two contracting FREEs of opposite chirality and one extender.
pub const PAPER_RIG_JSON: &str = include_str!("../../configs/paper_rig.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeSpec {
    pub name: String,
    pub length_m: f64,
    pub radius_m: f64,
    pub fiber_angle_deg: f64,
    pub p_max_kpa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSpec {
    pub free: String,
    pub d_m: [f64; 3],
    pub axis: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformSpec {
    pub dofs: Vec<String>,
    #[serde(default = "default_map")]
    pub kinematic_map: String,
}

fn default_map() -> String {
    "coaxial".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigConfig {
    pub frees: Vec<FreeSpec>,
    pub placements: Vec<PlacementSpec>,
    pub platform: PlatformSpec,
}

impl FreeSpec {
    pub fn to_design(&self) -> Result<FreeDesign> {
        FreeDesign::new(
            self.name.clone(),
            self.length_m,
            self.radius_m,
            self.fiber_angle_deg.to_radians(),
            self.p_max_kpa * 1000.0,
        )
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RigConfig> {
    let config: RigConfig = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    config.to_assembly()?;
    Ok(config)
}

/// The shipped three-FREE rig.
pub fn paper_rig() -> RigConfig {
    parse_config(PAPER_RIG_JSON).expect("shipped config is valid")
}

impl RigConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn dofs(&self) -> Result<DofSelection> {
        let parsed = self
            .platform
            .dofs
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Validation(format!("platform.dofs: {e}")))?;
        DofSelection::new(parsed).map_err(|e| Error::Validation(format!("platform.dofs: {e}")))
    }

    /// Builds the SI assembly, FREEs in declaration order.
    pub fn to_assembly(&self) -> Result<Assembly> {
        for (i, p) in self.placements.iter().enumerate() {
            if !self.frees.iter().any(|f| f.name == p.free) {
                return Err(Error::Validation(format!(
                    "placements[{i}]: unknown FREE '{}'",
                    p.free
                )));
            }
        }
        let mut actuators = Vec::with_capacity(self.frees.len());
        for (i, f) in self.frees.iter().enumerate() {
            let design = f
                .to_design()
                .map_err(|e| Error::Validation(format!("frees[{i}]: {e}")))?;
            let mut matching = self.placements.iter().filter(|p| p.free == f.name);
            let spec = matching.next().ok_or_else(|| {
                Error::Validation(format!("frees[{i}]: FREE '{}' has no placement", f.name))
            })?;
            if matching.next().is_some() {
                return Err(Error::Validation(format!(
                    "frees[{i}]: FREE '{}' is placed more than once",
                    f.name
                )));
            }
            let placement = Placement::new(Vector3::from(spec.d_m), Vector3::from(spec.axis))
                .map_err(|e| Error::Validation(format!("placement of '{}': {e}", f.name)))?;
            actuators.push(Actuator { design, placement });
        }
        let map = kinematic_map(&self.platform.kinematic_map)
            .map_err(|e| Error::Validation(format!("platform.kinematic_map: {e}")))?;
        Assembly::with_kinematics(actuators, self.dofs()?, map)
            .map_err(|e| Error::Validation(e.to_string()))
    }
}
