//! Ideal cylindrical FREE: fiber geometry, enclosed volume and fluid Jacobian.
//!
//! A FREE with inextensible fibers that stays a right cylinder has two
//! generalized coordinates, the axial extension `dl` and the twist `dphi`.
//! Fiber inextensibility fixes the radius as a function of both, so the
//! enclosed volume is a closed-form function of `(dl, dphi)` and the
//! pressure-driven generalized force is `[F, M] = p * dV/dq`.
//!
//! All quantities are SI: meters, radians, pascals, newtons.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relaxed geometry of one actuator plus its pressure rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeDesign {
    pub name: String,
    /// Relaxed length, m.
    pub length: f64,
    /// Relaxed radius, m.
    pub radius: f64,
    /// Relaxed fiber angle, rad. The sign encodes winding chirality.
    pub fiber_angle: f64,
    /// Maximum gauge pressure, Pa.
    pub p_max: f64,
}

/// Fiber constants derived from the relaxed geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedGeometry {
    /// Fiber length, m.
    pub fiber_length: f64,
    /// Signed number of fiber revolutions in the relaxed state.
    pub revolutions: f64,
}

/// Generalized deformation `q = [dl, dphi]` of one FREE.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Deformation {
    /// Axial length change, m.
    pub dl: f64,
    /// Axial twist, rad.
    pub dphi: f64,
}

impl Deformation {
    pub const RELAXED: Deformation = Deformation { dl: 0.0, dphi: 0.0 };

    pub fn new(dl: f64, dphi: f64) -> Self {
        Self { dl, dphi }
    }
}

/// Gradient of enclosed volume with respect to `[dl, dphi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianRow {
    /// dV/d(dl), m^2.
    pub dv_dl: f64,
    /// dV/d(dphi), m^3/rad.
    pub dv_dphi: f64,
}

/// Axial force and twisting moment produced by the fibers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialWrench {
    /// N, along the FREE axis.
    pub force: f64,
    /// N*m, about the FREE axis.
    pub moment: f64,
}

/// Outcome of checking a deformation against a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Validity {
    Valid,
    /// `L + dl <= 0`.
    ZeroLength,
    /// `L + dl >= B`: the fibers would have to stretch.
    OverExtended,
    /// `2*pi*N + dphi` is zero or has flipped sign.
    FiberUnwound,
}

impl Validity {
    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

impl FreeDesign {
    /// Builds a design after checking its invariants.
    pub fn new(
        name: impl Into<String>,
        length: f64,
        radius: f64,
        fiber_angle: f64,
        p_max: f64,
    ) -> Result<Self> {
        let design = Self {
            name: name.into(),
            length,
            radius,
            fiber_angle,
            p_max,
        };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.length, self.radius, self.fiber_angle, self.p_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidDesign(format!(
                "'{}' has a non-finite parameter",
                self.name
            )));
        }
        if self.length <= 0.0 {
            return Err(Error::InvalidDesign(format!(
                "'{}' length must be positive, got {}",
                self.name, self.length
            )));
        }
        if self.radius <= 0.0 {
            return Err(Error::InvalidDesign(format!(
                "'{}' radius must be positive, got {}",
                self.name, self.radius
            )));
        }
        if self.p_max <= 0.0 {
            return Err(Error::InvalidDesign(format!(
                "'{}' p_max must be positive, got {}",
                self.name, self.p_max
            )));
        }
        if !angle_in_range(self.fiber_angle) {
            return Err(Error::InvalidDesign(format!(
                "'{}' fiber angle must satisfy 0 < |angle| < pi/2, got {} rad",
                self.name, self.fiber_angle
            )));
        }
        Ok(())
    }

    /// Fiber length `B = |L / cos(angle)|` and revolutions `N = -L tan(angle) / (2 pi R)`.
    pub fn derived(&self) -> DerivedGeometry {
        DerivedGeometry {
            fiber_length: (self.length / self.fiber_angle.cos()).abs(),
            revolutions: -self.length / (2.0 * PI * self.radius) * self.fiber_angle.tan(),
        }
    }

    /// Same as [`FreeDesign::derived`] but re-checks the design first.
    pub fn derive_geometry(&self) -> Result<DerivedGeometry> {
        self.validate()?;
        Ok(self.derived())
    }

    pub fn validate_deformation(&self, q: Deformation) -> Validity {
        let geo = self.derived();
        let l = self.length + q.dl;
        let wind = 2.0 * PI * geo.revolutions;
        let wound = wind + q.dphi;
        if !(l > 0.0) {
            Validity::ZeroLength
        } else if !(l < geo.fiber_length) {
            Validity::OverExtended
        } else if !(wound != 0.0 && wound.signum() == wind.signum()) {
            Validity::FiberUnwound
        } else {
            Validity::Valid
        }
    }

    fn check(&self, q: Deformation) -> Result<DerivedGeometry> {
        match self.validate_deformation(q) {
            Validity::Valid => Ok(self.derived()),
            Validity::OverExtended => Err(Error::OverExtended {
                length: self.length + q.dl,
                fiber: self.derived().fiber_length,
            }),
            other => Err(Error::DegenerateState(other)),
        }
    }

    /// `l = L + dl`.
    pub fn deformed_length(&self, q: Deformation) -> Result<f64> {
        self.check(q)?;
        Ok(self.length + q.dl)
    }

    /// Radius enforced by the inextensible fibers.
    pub fn deformed_radius(&self, q: Deformation) -> Result<f64> {
        let geo = self.check(q)?;
        let b = geo.fiber_length;
        let wound = 2.0 * PI * geo.revolutions + q.dphi;
        let ratio = (self.length + q.dl) / b;
        Ok(b / wound.abs() * (1.0 - ratio * ratio).sqrt())
    }

    /// `V = pi l (B^2 - l^2) / (2 pi N + dphi)^2`.
    pub fn enclosed_volume(&self, q: Deformation) -> Result<f64> {
        let geo = self.check(q)?;
        let b = geo.fiber_length;
        let l = self.length + q.dl;
        let wound = 2.0 * PI * geo.revolutions + q.dphi;
        Ok(PI * l * (b * b - l * l) / (wound * wound))
    }

    /// Analytic gradient of [`FreeDesign::enclosed_volume`].
    pub fn fluid_jacobian(&self, q: Deformation) -> Result<JacobianRow> {
        let geo = self.check(q)?;
        let b2 = geo.fiber_length * geo.fiber_length;
        let l = self.length + q.dl;
        let wound = 2.0 * PI * geo.revolutions + q.dphi;
        let wound2 = wound * wound;
        Ok(JacobianRow {
            dv_dl: PI * (b2 - 3.0 * l * l) / wound2,
            dv_dphi: 2.0 * PI * l * (l * l - b2) / (wound2 * wound),
        })
    }

    /// Fiber wrench `[F, M] = J^T p` for a pressure in `[0, p_max]`.
    pub fn axial_wrench(&self, q: Deformation, pressure: f64) -> Result<AxialWrench> {
        check_pressure(0, pressure, self.p_max)?;
        let j = self.fluid_jacobian(q)?;
        Ok(j.scaled(pressure))
    }
}

impl JacobianRow {
    pub fn scaled(&self, pressure: f64) -> AxialWrench {
        AxialWrench {
            force: self.dv_dl * pressure,
            moment: self.dv_dphi * pressure,
        }
    }
}

pub(crate) fn check_pressure(index: usize, pressure: f64, p_max: f64) -> Result<()> {
    if pressure.is_nan() || pressure < 0.0 {
        return Err(Error::NegativePressure { index, pressure });
    }
    if pressure > p_max {
        return Err(Error::PressureLimit {
            index,
            pressure,
            p_max,
        });
    }
    Ok(())
}

fn angle_in_range(angle: f64) -> bool {
    angle != 0.0 && angle.abs() < FRAC_PI_2
}

/// Relaxed-state ratio `F R / M` as a function of the fiber angle alone:
/// `(1 - 2 cot^2) / (2 cot)`. Zero at `atan(sqrt 2)`, where the FREE switches
/// from contracting to extending.
pub fn force_moment_ratio(fiber_angle: f64) -> Result<f64> {
    if !fiber_angle.is_finite() || !angle_in_range(fiber_angle) {
        return Err(Error::InvalidAngle(fiber_angle));
    }
    let cot = 1.0 / fiber_angle.tan();
    Ok((1.0 - 2.0 * cot * cot) / (2.0 * cot))
}
