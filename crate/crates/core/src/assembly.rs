//! Parallel assemblies of FREEs sharing one end effector.
//!
//! Each FREE's axial wrench `[F, M]` is carried into the end-effector frame by
//! a 6x2 transform built from its attachment point `d` and axis `a`:
//!
//! ```text
//! force  = a F
//! moment = (d x a) F + a M
//! ```
//!
//! Summing over FREEs gives `f = J_x^T p`, where row `i` of `J_x` is the
//! FREE's fluid Jacobian pushed through its transform.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, Matrix6x2, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{check_pressure, Deformation, FreeDesign, Validity};

const UNIT_AXIS_TOL: f64 = 1e-9;

/// One of the six end-effector wrench components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WrenchComponent {
    Fx,
    Fy,
    Fz,
    Mx,
    My,
    Mz,
}

impl WrenchComponent {
    pub const ALL: [WrenchComponent; 6] = [
        WrenchComponent::Fx,
        WrenchComponent::Fy,
        WrenchComponent::Fz,
        WrenchComponent::Mx,
        WrenchComponent::My,
        WrenchComponent::Mz,
    ];

    /// Position in the `[Fx, Fy, Fz, Mx, My, Mz]` stacking.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_force(self) -> bool {
        self.index() < 3
    }

    pub fn name(self) -> &'static str {
        match self {
            WrenchComponent::Fx => "Fx",
            WrenchComponent::Fy => "Fy",
            WrenchComponent::Fz => "Fz",
            WrenchComponent::Mx => "Mx",
            WrenchComponent::My => "My",
            WrenchComponent::Mz => "Mz",
        }
    }

    /// Column name including the unit, e.g. `Fz_N` or `Mz_Nm`.
    pub fn column(self) -> String {
        let unit = if self.is_force() { "N" } else { "Nm" };
        format!("{}_{}", self.name(), unit)
    }

    pub fn unit(self) -> &'static str {
        if self.is_force() {
            "N"
        } else {
            "N·m"
        }
    }
}

impl fmt::Display for WrenchComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WrenchComponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WrenchComponent::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::parse("dofs", format!("unknown wrench component '{s}'")))
    }
}

/// Nonempty ordered selection of distinct wrench components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DofSelection(Vec<WrenchComponent>);

impl DofSelection {
    pub fn new(components: Vec<WrenchComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (i, c) in components.iter().enumerate() {
            if components[..i].contains(c) {
                return Err(Error::Validation(format!(
                    "wrench component {c} selected twice"
                )));
            }
        }
        Ok(Self(components))
    }

    /// The `[Fz, Mz]` pair used by a platform that slides along and twists about z.
    pub fn axial() -> Self {
        Self(vec![WrenchComponent::Fz, WrenchComponent::Mz])
    }

    pub fn all() -> Self {
        Self(WrenchComponent::ALL.to_vec())
    }

    /// Parses a comma separated list such as `Fz,Mz`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(WrenchComponent::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn components(&self) -> &[WrenchComponent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, c: WrenchComponent) -> Option<usize> {
        self.0.iter().position(|&x| x == c)
    }
}

impl fmt::Display for DofSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|c| c.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// Where a FREE meets the end effector, in end-effector coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    /// Attachment point relative to the end-effector origin, m.
    pub attachment: Vector3<f64>,
    /// Unit vector along the FREE axis.
    pub axis: Vector3<f64>,
}

impl Placement {
    pub fn new(attachment: Vector3<f64>, axis: Vector3<f64>) -> Result<Self> {
        let norm = axis.norm();
        if !attachment.iter().all(|v| v.is_finite()) || !((norm - 1.0).abs() <= UNIT_AXIS_TOL) {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Self { attachment, axis })
    }

    /// Builds the 6x2 map from `[F, M]` to an end-effector wrench.
    pub fn wrench_transform(&self) -> Result<WrenchTransform> {
        let norm = self.axis.norm();
        if !((norm - 1.0).abs() <= UNIT_AXIS_TOL) {
            return Err(Error::NonUnitAxis(norm));
        }
        let lever = cross_matrix(&self.attachment) * self.axis;
        let mut m = Matrix6x2::zeros();
        m.fixed_view_mut::<3, 1>(0, 0).copy_from(&self.axis);
        m.fixed_view_mut::<3, 1>(3, 0).copy_from(&lever);
        m.fixed_view_mut::<3, 1>(3, 1).copy_from(&self.axis);
        Ok(WrenchTransform(m))
    }
}

/// Skew-symmetric matrix with `cross_matrix(d) * v == d x v`.
pub fn cross_matrix(d: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -d.z, d.y, d.z, 0.0, -d.x, -d.y, d.x, 0.0)
}

/// Column 0 maps axial force, column 1 maps twisting moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrenchTransform(pub Matrix6x2<f64>);

impl WrenchTransform {
    pub fn matrix(&self) -> &Matrix6x2<f64> {
        &self.0
    }

    pub fn apply(&self, force: f64, moment: f64) -> Wrench6 {
        Wrench6::from_vector(self.0 * nalgebra::Vector2::new(force, moment))
    }
}

/// Force and moment about the end-effector origin, in end-effector coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench6 {
    pub force: Vector3<f64>,
    pub moment: Vector3<f64>,
}

impl Wrench6 {
    pub fn from_vector(v: Vector6<f64>) -> Self {
        Self {
            force: Vector3::new(v[0], v[1], v[2]),
            moment: Vector3::new(v[3], v[4], v[5]),
        }
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(
            self.force.x,
            self.force.y,
            self.force.z,
            self.moment.x,
            self.moment.y,
            self.moment.z,
        )
    }

    pub fn component(&self, c: WrenchComponent) -> f64 {
        self.to_vector()[c.index()]
    }
}

/// Extracts the selected components of a wrench in selection order.
pub fn project_wrench(wrench: &Wrench6, dofs: &[WrenchComponent]) -> Result<Vec<f64>> {
    if dofs.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(dofs.iter().map(|&c| wrench.component(c)).collect())
}

/// End-effector displacement of the default two-DOF platform.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlatformState {
    /// Extension along the end-effector z axis, m.
    pub dl: f64,
    /// Twist about the end-effector z axis, rad.
    pub dphi: f64,
}

impl PlatformState {
    pub const ORIGIN: PlatformState = PlatformState { dl: 0.0, dphi: 0.0 };

    pub fn new(dl: f64, dphi: f64) -> Self {
        Self { dl, dphi }
    }
}

/// Maps the platform state to the deformation of each FREE.
pub trait KinematicMap: Send + Sync {
    fn name(&self) -> &str;

    fn deformation(&self, placement: &Placement, state: PlatformState) -> Deformation;
}

/// Every FREE extends and twists exactly as the platform does. Matches a rig
/// whose FREE axes are all parallel to the platform's slide/twist axis.
#[derive(Debug, Clone, Copy, Default)]
pub struct Coaxial;

impl KinematicMap for Coaxial {
    fn name(&self) -> &str {
        "coaxial"
    }

    fn deformation(&self, _placement: &Placement, state: PlatformState) -> Deformation {
        Deformation::new(state.dl, state.dphi)
    }
}

/// Looks up a built-in kinematic map by identifier.
pub fn kinematic_map(name: &str) -> Result<Arc<dyn KinematicMap>> {
    match name {
        "coaxial" => Ok(Arc::new(Coaxial)),
        other => Err(Error::UnknownKinematicMap(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Actuator {
    pub design: FreeDesign,
    pub placement: Placement,
}

/// FREEs mounted in parallel between ground and a common end effector.
#[derive(Clone)]
pub struct Assembly {
    actuators: Vec<Actuator>,
    dofs: DofSelection,
    kinematics: Arc<dyn KinematicMap>,
}

impl fmt::Debug for Assembly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assembly")
            .field("actuators", &self.actuators)
            .field("dofs", &self.dofs)
            .field("kinematics", &self.kinematics.name())
            .finish()
    }
}

impl Assembly {
    /// Uses the coaxial kinematic map.
    pub fn new(actuators: Vec<Actuator>, dofs: DofSelection) -> Result<Self> {
        Self::with_kinematics(actuators, dofs, Arc::new(Coaxial))
    }

    pub fn with_kinematics(
        actuators: Vec<Actuator>,
        dofs: DofSelection,
        kinematics: Arc<dyn KinematicMap>,
    ) -> Result<Self> {
        if actuators.is_empty() {
            return Err(Error::EmptyAssembly);
        }
        for (i, a) in actuators.iter().enumerate() {
            a.design.validate()?;
            a.placement.wrench_transform()?;
            if actuators[..i]
                .iter()
                .any(|b| b.design.name == a.design.name)
            {
                return Err(Error::Validation(format!(
                    "FREE name '{}' is used twice",
                    a.design.name
                )));
            }
        }
        Ok(Self {
            actuators,
            dofs,
            kinematics,
        })
    }

    pub fn actuators(&self) -> &[Actuator] {
        &self.actuators
    }

    pub fn len(&self) -> usize {
        self.actuators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actuators.is_empty()
    }

    pub fn dofs(&self) -> &DofSelection {
        &self.dofs
    }

    pub fn kinematics(&self) -> &dyn KinematicMap {
        self.kinematics.as_ref()
    }

    pub fn p_max(&self) -> Vec<f64> {
        self.actuators.iter().map(|a| a.design.p_max).collect()
    }

    /// Same FREEs with a different reported DOF selection.
    pub fn with_dofs(&self, dofs: DofSelection) -> Self {
        Self {
            dofs,
            ..self.clone()
        }
    }

    /// Re-expresses the assembly about an end-effector origin moved by `shift`.
    pub fn with_origin_shift(&self, shift: Vector3<f64>) -> Self {
        let actuators = self
            .actuators
            .iter()
            .map(|a| Actuator {
                design: a.design.clone(),
                placement: Placement {
                    attachment: a.placement.attachment - shift,
                    axis: a.placement.axis,
                },
            })
            .collect();
        Self {
            actuators,
            ..self.clone()
        }
    }

    /// Per-FREE deformations, failing on the first FREE driven out of its valid range.
    pub fn map_platform_state(&self, state: PlatformState) -> Result<Vec<Deformation>> {
        self.actuators
            .iter()
            .enumerate()
            .map(|(index, a)| {
                let q = self.kinematics.deformation(&a.placement, state);
                match a.design.validate_deformation(q) {
                    Validity::Valid => Ok(q),
                    reason => Err(Error::KinematicsInvalid {
                        index,
                        name: a.design.name.clone(),
                        reason,
                    }),
                }
            })
            .collect()
    }

    pub fn assembly_jacobian(&self, state: PlatformState) -> Result<AssemblyJacobian> {
        let qs = self.map_platform_state(state)?;
        let rows = self
            .actuators
            .iter()
            .zip(qs)
            .map(|(a, q)| {
                let j = a.design.fluid_jacobian(q)?;
                let d = a.placement.wrench_transform()?;
                Ok(d.0 * nalgebra::Vector2::new(j.dv_dl, j.dv_dphi))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AssemblyJacobian { rows })
    }

    pub fn net_wrench(&self, state: PlatformState, pressures: &[f64]) -> Result<Wrench6> {
        self.check_pressures(pressures)?;
        let jac = self.assembly_jacobian(state)?;
        Ok(jac.wrench(pressures))
    }

    pub fn check_pressures(&self, pressures: &[f64]) -> Result<()> {
        if pressures.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: pressures.len(),
            });
        }
        for (i, (&p, a)) in pressures.iter().zip(&self.actuators).enumerate() {
            check_pressure(i, p, a.design.p_max)?;
        }
        Ok(())
    }
}

/// `n x 6` fluid Jacobian of an assembly in end-effector coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyJacobian {
    rows: Vec<Vector6<f64>>,
}

impl AssemblyJacobian {
    pub fn rows(&self) -> &[Vector6<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Vector6<f64> {
        &self.rows[i]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), 6, |i, j| self.rows[i][j])
    }

    /// `n x k` matrix keeping only the selected wrench columns.
    pub fn projected(&self, dofs: &DofSelection) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), dofs.len(), |i, j| {
            self.rows[i][dofs.components()[j].index()]
        })
    }

    /// `J_x^T p`, without pressure range checks.
    pub fn wrench(&self, pressures: &[f64]) -> Wrench6 {
        let v = self
            .rows
            .iter()
            .zip(pressures)
            .fold(Vector6::zeros(), |acc, (row, &p)| acc + row * p);
        Wrench6::from_vector(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn z_placement(x: f64, y: f64) -> Placement {
        Placement::new(Vector3::new(x, y, 0.0), Vector3::z()).unwrap()
    }

    fn rig() -> Assembly {
        let mk = |name: &str, deg: f64, x: f64, y: f64| Actuator {
            design: FreeDesign::new(name, 0.1, 0.005, f64::to_radians(deg), 103_400.0).unwrap(),
            placement: z_placement(x, y),
        };
        Assembly::new(
            vec![
                mk("a", 48.0, 0.013, 0.0),
                mk("b", -48.0, -0.006, 0.011),
                mk("c", -85.0, -0.006, -0.011),
            ],
            DofSelection::axial(),
        )
        .unwrap()
    }

    #[test]
    fn transform_matches_printed_matrices() {
        let t = z_placement(0.013, 0.0).wrench_transform().unwrap().0;
        let expect = Matrix6x2::from_column_slice(&[
            0.0, 0.0, 1.0, 0.0, -0.013, 0.0, //
            0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        ]);
        assert_eq!(t, expect);
        let t = z_placement(-0.006, 0.011).wrench_transform().unwrap().0;
        assert_eq!(t.column(0).as_slice(), &[0.0, 0.0, 1.0, 0.011, 0.006, 0.0]);
        let t = z_placement(0.0, 0.0).wrench_transform().unwrap().0;
        assert_eq!(t.column(0).as_slice(), &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.column(1).as_slice(), &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_non_unit_axis() {
        assert!(matches!(
            Placement::new(Vector3::zeros(), Vector3::new(0.0, 0.0, 1.1)),
            Err(Error::NonUnitAxis(_))
        ));
        let p = Placement {
            attachment: Vector3::zeros(),
            axis: Vector3::new(1.0, 1.0, 0.0),
        };
        assert!(matches!(p.wrench_transform(), Err(Error::NonUnitAxis(_))));
    }

    #[test]
    fn coaxial_mapping() {
        let rig = rig();
        assert!(rig
            .map_platform_state(PlatformState::ORIGIN)
            .unwrap()
            .iter()
            .all(|q| *q == Deformation::RELAXED));
        let qs = rig
            .map_platform_state(PlatformState::new(0.005, 20f64.to_radians()))
            .unwrap();
        for q in qs {
            assert_eq!(q.dl, 0.005);
            assert_relative_eq!(q.dphi, 0.349_066, epsilon = 1e-6);
        }
        assert!(matches!(
            rig.map_platform_state(PlatformState::new(0.06, 0.0)),
            Err(Error::KinematicsInvalid {
                index: 0,
                reason: Validity::OverExtended,
                ..
            })
        ));
    }

    #[test]
    fn jacobian_rows_for_rig() {
        let j = rig().assembly_jacobian(PlatformState::ORIGIN).unwrap();
        let r0 = j.row(0);
        assert_relative_eq!(r0[2], -4.880_895_26e-5, max_relative = 1e-8);
        assert_relative_eq!(r0[5], 7.071_756_83e-7, max_relative = 1e-8);
        assert_eq!(j.row(1)[2], r0[2]);
        assert_eq!(j.row(1)[5], -r0[5]);
        let p = j.projected(&DofSelection::axial());
        assert_eq!(p.shape(), (3, 2));
        assert_eq!(p[(0, 0)], r0[2]);
    }

    #[test]
    fn single_free_at_origin_only_axial_components() {
        let a = Assembly::new(
            vec![Actuator {
                design: FreeDesign::new("x", 0.1, 0.005, 0.7, 1e5).unwrap(),
                placement: z_placement(0.0, 0.0),
            }],
            DofSelection::all(),
        )
        .unwrap();
        let row = *a.assembly_jacobian(PlatformState::ORIGIN).unwrap().row(0);
        for (i, v) in row.iter().enumerate() {
            assert_eq!(*v != 0.0, i == 2 || i == 5, "component {i}");
        }
    }

    #[test]
    fn net_wrench_of_rig() {
        let rig = rig();
        let zero = rig.net_wrench(PlatformState::ORIGIN, &[0.0; 3]).unwrap();
        assert_eq!(zero.to_vector().abs(), Vector6::zeros());
        let w = rig
            .net_wrench(PlatformState::ORIGIN, &[103_400.0; 3])
            .unwrap();
        let fm = project_wrench(&w, rig.dofs().components()).unwrap();
        assert_relative_eq!(fm[0], -2.096_995_24, max_relative = 1e-8);
        assert_relative_eq!(fm[1], -7.104_969_25e-3, max_relative = 1e-7);
        assert!(matches!(
            rig.net_wrench(PlatformState::ORIGIN, &[0.0, -1.0, 0.0]),
            Err(Error::NegativePressure { index: 1, .. })
        ));
        assert!(matches!(
            rig.net_wrench(PlatformState::ORIGIN, &[0.0, 0.0, 2e5]),
            Err(Error::PressureLimit { index: 2, .. })
        ));
        assert!(matches!(
            rig.net_wrench(PlatformState::ORIGIN, &[0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projection() {
        let w = Wrench6::from_vector(Vector6::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0));
        assert_eq!(
            project_wrench(&w, DofSelection::axial().components()).unwrap(),
            vec![3.0, 6.0]
        );
        assert_eq!(
            project_wrench(&w, DofSelection::all().components()).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        );
        assert_eq!(project_wrench(&w, &[]), Err(Error::EmptySelection));
        assert_eq!(DofSelection::new(vec![]), Err(Error::EmptySelection));
        assert!(DofSelection::parse_list("Fz,Fz").is_err());
        assert_eq!(
            DofSelection::parse_list("Fz, Mz").unwrap(),
            DofSelection::axial()
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let a = Actuator {
            design: FreeDesign::new("x", 0.1, 0.005, 0.7, 1e5).unwrap(),
            placement: z_placement(0.0, 0.0),
        };
        assert!(Assembly::new(vec![a.clone(), a], DofSelection::axial()).is_err());
        assert_eq!(
            Assembly::new(vec![], DofSelection::axial()).unwrap_err(),
            Error::EmptyAssembly
        );
    }

    #[test]
    fn unknown_kinematic_map() {
        assert!(kinematic_map("coaxial").is_ok());
        assert!(matches!(
            kinematic_map("nope"),
            Err(Error::UnknownKinematicMap(_))
        ));
    }
}
