//! Statics of parallel fiber-reinforced elastomeric enclosures (FREEs).
//!
//! A FREE's enclosed volume is a closed-form function of its extension and
//! twist; the gradient of that volume (its fluid Jacobian) maps pressure
//! linearly to force and moment. This crate composes those Jacobians across
//! FREEs mounted in parallel, builds the resulting force zonotope, solves for
//! pressures that reach a target wrench, and sweeps the platform workspace.
//!
//! ```
//! use fluidjac::{force_zonotope, io::paper_rig, DofSelection, PlatformState};
//!
//! let rig = paper_rig().to_assembly().unwrap();
//! let z = force_zonotope(&rig, PlatformState::ORIGIN, &DofSelection::axial()).unwrap();
//! assert_eq!(z.vertices().len(), 6);
//! assert!(z.has_full_authority());
//! ```

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod bvls;
pub mod error;
pub mod free;
pub mod hull;
pub mod io;
pub mod statics;
pub mod sweep;
pub mod zonotope;

pub use assembly::{
    kinematic_map, project_wrench, Actuator, Assembly, AssemblyJacobian, Coaxial, DofSelection,
    KinematicMap, Placement, PlatformState, Wrench6, WrenchComponent, WrenchTransform,
};
pub use error::{Error, Result};
pub use free::{
    force_moment_ratio, AxialWrench, Deformation, DerivedGeometry, FreeDesign, JacobianRow,
    Validity,
};
pub use statics::{solve_pressures, PressureSolution};
pub use sweep::{workspace_sweep, Collapse, GridSpec, SweepAxis, SweepReport};
pub use zonotope::{force_zonotope, full_authority, Zonotope};
