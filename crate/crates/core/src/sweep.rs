//! Workspace sweeps: how the force zonotope changes over platform states.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::assembly::{Assembly, DofSelection, PlatformState, WrenchComponent};
use crate::error::{Error, Result};
use crate::free::Validity;
use crate::zonotope::{force_zonotope, MAX_FREES};

/// Contraction force (N) at or above which the assembly can no longer pull.
pub const COLLAPSE_TOL: f64 = 1e-6;

/// Inclusive, evenly spaced samples of one platform coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count }
    }

    pub fn fixed(value: f64) -> Self {
        Self::new(value, value, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.end
                    } else {
                        self.start + (self.end - self.start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// Grid over `(dl, dphi)`; parsed from `dl=a:b:n,dphi=c:d:m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dl: AxisRange,
    pub dphi: AxisRange,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut dl = None;
        let mut dphi = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, range) = part.split_once('=').ok_or_else(|| {
                Error::parse("grid", format!("expected key=start:end:count in '{part}'"))
            })?;
            let fields: Vec<&str> = range.split(':').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    "grid",
                    format!("expected start:end:count in '{range}'"),
                ));
            }
            let num = |f: &str| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse("grid", format!("bad number '{f}'")))
            };
            let count = fields[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::parse("grid", format!("bad count '{}'", fields[2])))?;
            let axis = AxisRange::new(num(fields[0])?, num(fields[1])?, count);
            let slot = match key.trim() {
                "dl" => &mut dl,
                "dphi" => &mut dphi,
                other => return Err(Error::parse("grid", format!("unknown axis '{other}'"))),
            };
            if slot.replace(axis).is_some() {
                return Err(Error::parse(
                    "grid",
                    format!("axis '{}' given twice", key.trim()),
                ));
            }
        }
        if dl.is_none() && dphi.is_none() {
            return Err(Error::EmptyGrid("no axes given".into()));
        }
        Ok(GridSpec {
            dl: dl.unwrap_or(AxisRange::fixed(0.0)),
            dphi: dphi.unwrap_or(AxisRange::fixed(0.0)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Dl,
    Dphi,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Dl => "dl",
            SweepAxis::Dphi => "dphi",
        })
    }
}

/// Zonotope summary at one valid grid state.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample {
    /// Area for two DOFs, length or volume for one or three, `None` otherwise.
    pub measure: Option<f64>,
    /// `(min, max)` attainable value per selected DOF.
    pub extents: Vec<(f64, f64)>,
    /// Most negative attainable axial force `Fz`, N.
    pub contraction: f64,
    pub vertex_count: usize,
    pub full_authority: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Valid(SweepSample),
    /// A FREE was driven outside its valid deformation range.
    Invalid {
        free: String,
        reason: Validity,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub dl_index: usize,
    pub dphi_index: usize,
    pub state: PlatformState,
    pub outcome: SweepOutcome,
}

impl SweepPoint {
    pub fn sample(&self) -> Option<&SweepSample> {
        match &self.outcome {
            SweepOutcome::Valid(s) => Some(s),
            SweepOutcome::Invalid { .. } => None,
        }
    }

    pub fn collapsed(&self) -> bool {
        self.sample()
            .is_some_and(|s| s.contraction >= -COLLAPSE_TOL)
    }
}

/// Where contraction authority is lost while scanning one axis outward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collapse {
    pub axis: SweepAxis,
    /// Value of the other coordinate along this scan line.
    pub fixed: f64,
    /// -1 when scanning toward smaller values, +1 toward larger.
    pub direction: i8,
    /// First grid state reached that has collapsed.
    pub grid_state: PlatformState,
    /// Boundary refined by bisection between the last intact and first collapsed
    /// grid states.
    pub boundary: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub dofs: DofSelection,
    pub dl_values: Vec<f64>,
    pub dphi_values: Vec<f64>,
    /// Row-major over `(dl_index, dphi_index)`.
    pub points: Vec<SweepPoint>,
    pub collapses: Vec<Collapse>,
}

impl SweepReport {
    pub fn point(&self, dl_index: usize, dphi_index: usize) -> &SweepPoint {
        &self.points[dl_index * self.dphi_values.len() + dphi_index]
    }
}

/// Most negative attainable `Fz` over the full (unprojected) zonotope.
pub fn contraction_force(assembly: &Assembly, state: PlatformState) -> Result<f64> {
    let jac = assembly.assembly_jacobian(state)?;
    Ok(assembly
        .actuators()
        .iter()
        .zip(jac.rows())
        .map(|(a, row)| (row[WrenchComponent::Fz.index()] * a.design.p_max).min(0.0))
        .sum())
}

fn evaluate(
    assembly: &Assembly,
    state: PlatformState,
    dofs: &DofSelection,
) -> Result<SweepOutcome> {
    let zono = match force_zonotope(assembly, state, dofs) {
        Ok(z) => z,
        Err(Error::KinematicsInvalid { name, reason, .. }) => {
            return Ok(SweepOutcome::Invalid { free: name, reason })
        }
        Err(e) => return Err(e),
    };
    Ok(SweepOutcome::Valid(SweepSample {
        measure: zono.measure().ok(),
        extents: (0..zono.dim()).map(|c| zono.extent(c)).collect(),
        contraction: contraction_force(assembly, state)?,
        vertex_count: zono.vertices().len(),
        full_authority: zono.has_full_authority(),
    }))
}

/// Evaluates the zonotope over a grid and locates loss of contraction authority.
///
/// Grid states are evaluated in parallel; the report is assembled in grid
/// order so its contents do not depend on scheduling.
pub fn workspace_sweep(
    assembly: &Assembly,
    grid: &GridSpec,
    dofs: &DofSelection,
) -> Result<SweepReport> {
    if assembly.len() > MAX_FREES {
        return Err(Error::TooManyFrees(assembly.len()));
    }
    let dl_values = grid.dl.values();
    let dphi_values = grid.dphi.values();
    if dl_values.is_empty() || dphi_values.is_empty() {
        return Err(Error::EmptyGrid(
            "every axis needs at least one sample".into(),
        ));
    }
    let cols = dphi_values.len();
    let points = (0..dl_values.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / cols, idx % cols);
            let state = PlatformState::new(dl_values[i], dphi_values[j]);
            Ok(SweepPoint {
                dl_index: i,
                dphi_index: j,
                state,
                outcome: evaluate(assembly, state, dofs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = SweepReport {
        dofs: dofs.clone(),
        dl_values,
        dphi_values,
        points,
        collapses: Vec::new(),
    };
    report.collapses = find_collapses(assembly, &report);
    Ok(report)
}

fn closest_to_zero(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn find_collapses(assembly: &Assembly, report: &SweepReport) -> Vec<Collapse> {
    let mut out = Vec::new();
    let (nl, np) = (report.dl_values.len(), report.dphi_values.len());

    for axis in [SweepAxis::Dl, SweepAxis::Dphi] {
        let (len, lines) = match axis {
            SweepAxis::Dl => (nl, np),
            SweepAxis::Dphi => (np, nl),
        };
        if len < 2 {
            continue;
        }
        let values = match axis {
            SweepAxis::Dl => &report.dl_values,
            SweepAxis::Dphi => &report.dphi_values,
        };
        let home = closest_to_zero(values);
        for line in 0..lines {
            let at = |t: usize| match axis {
                SweepAxis::Dl => report.point(t, line),
                SweepAxis::Dphi => report.point(line, t),
            };
            let fixed = match axis {
                SweepAxis::Dl => report.dphi_values[line],
                SweepAxis::Dphi => report.dl_values[line],
            };
            for direction in [-1i8, 1] {
                let mut prev: Option<usize> = None;
                let mut t = home as isize;
                while (0..len as isize).contains(&t) {
                    let p = at(t as usize);
                    if p.sample().is_none() {
                        break;
                    }
                    if p.collapsed() {
                        // a line that starts collapsed has no transition to report
                        if let Some(q) = prev {
                            out.push(Collapse {
                                axis,
                                fixed,
                                direction,
                                grid_state: p.state,
                                boundary: refine(
                                    assembly,
                                    axis,
                                    fixed,
                                    values[q],
                                    values[t as usize],
                                ),
                            });
                        }
                        break;
                    }
                    prev = Some(t as usize);
                    t += direction as isize;
                }
            }
        }
    }
    out
}

/// Bisects between an intact coordinate `good` and a collapsed one `bad`.
fn refine(assembly: &Assembly, axis: SweepAxis, fixed: f64, mut good: f64, mut bad: f64) -> f64 {
    let state = |v: f64| match axis {
        SweepAxis::Dl => PlatformState::new(v, fixed),
        SweepAxis::Dphi => PlatformState::new(fixed, v),
    };
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        match contraction_force(assembly, state(mid)) {
            Ok(c) if c < -COLLAPSE_TOL => good = mid,
            _ => bad = mid,
        }
    }
    0.5 * (good + bad)
}
