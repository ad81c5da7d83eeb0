//! Force zonotopes: the set of wrenches reachable with boxed pressures.
//!
//! With generators `g_i = p_max_i * (projected row i of J_x)` the zonotope is
//! `{ sum a_i g_i : a_i in [0, 1] }`. It is built as the convex hull of the
//! `2^n` corner images, which is exact for the small `n` of a physical rig.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{Assembly, DofSelection, PlatformState};
use crate::bvls::solve_box_lsq;
use crate::error::{Error, Result};
use crate::hull::{self, convex_hull, distance_to_polygon, min_edge_clearance, Point2};

/// Largest assembly whose `2^n` corners are enumerated.
pub const MAX_FREES: usize = 20;

/// Relative tolerance applied to the largest generator norm.
pub const HULL_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    generators: Vec<Vec<f64>>,
    dofs: DofSelection,
    vertices: Vec<Vec<f64>>,
    vertex_corners: Vec<u32>,
    center: Vec<f64>,
    scale: f64,
}

/// Builds the force zonotope of an assembly at a platform state.
pub fn force_zonotope(
    assembly: &Assembly,
    state: PlatformState,
    dofs: &DofSelection,
) -> Result<Zonotope> {
    if assembly.len() > MAX_FREES {
        return Err(Error::TooManyFrees(assembly.len()));
    }
    let jac = assembly.assembly_jacobian(state)?.projected(dofs);
    let generators = assembly
        .actuators()
        .iter()
        .enumerate()
        .map(|(i, a)| jac.row(i).iter().map(|v| v * a.design.p_max).collect())
        .collect();
    Zonotope::from_generators(generators, dofs.clone())
}

impl Zonotope {
    /// Zonotope of an explicit generator list; each generator has `dofs.len()` entries.
    pub fn from_generators(generators: Vec<Vec<f64>>, dofs: DofSelection) -> Result<Self> {
        let k = dofs.len();
        let n = generators.len();
        if n > MAX_FREES {
            return Err(Error::TooManyFrees(n));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: g.len(),
            });
        }
        let scale = generators.iter().map(|g| l2(g)).fold(0.0, f64::max);
        let center = (0..k)
            .map(|c| 0.5 * generators.iter().map(|g| g[c]).sum::<f64>())
            .collect();
        let tol = HULL_REL_TOL * scale;

        let corners: Vec<Vec<f64>> = (0..1u32 << n)
            .map(|mask| corner_image(&generators, mask, k))
            .collect();

        let (vertices, vertex_corners) = match k {
            1 => {
                let (lo, hi) = corners.iter().enumerate().fold(
                    ((0usize, f64::INFINITY), (0usize, f64::NEG_INFINITY)),
                    |(lo, hi), (m, c)| {
                        (
                            if c[0] < lo.1 { (m, c[0]) } else { lo },
                            if c[0] > hi.1 { (m, c[0]) } else { hi },
                        )
                    },
                );
                if hi.1 - lo.1 <= tol {
                    (vec![vec![lo.1]], vec![lo.0 as u32])
                } else {
                    (vec![vec![lo.1], vec![hi.1]], vec![lo.0 as u32, hi.0 as u32])
                }
            }
            2 => {
                let pts: Vec<Point2> = corners.iter().map(|c| [c[0], c[1]]).collect();
                let hull = convex_hull(&pts, tol);
                let masks = hull
                    .iter()
                    .map(|v| pts.iter().position(|p| p == v).unwrap() as u32)
                    .collect();
                (hull.into_iter().map(|v| v.to_vec()).collect(), masks)
            }
            _ => {
                let mut verts: Vec<Vec<f64>> = Vec::new();
                let mut masks = Vec::new();
                for (m, c) in corners.into_iter().enumerate() {
                    if !verts.iter().any(|v| dist(v, &c) <= tol) {
                        verts.push(c);
                        masks.push(m as u32);
                    }
                }
                (verts, masks)
            }
        };

        Ok(Self {
            generators,
            dofs,
            vertices,
            vertex_corners,
            center,
            scale,
        })
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn dofs(&self) -> &DofSelection {
        &self.dofs
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    /// Hull vertices. Counterclockwise from the lexicographic minimum when
    /// `dim() == 2`; `[min, max]` when `dim() == 1`; deduplicated corner
    /// images otherwise.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// For each vertex, the pressure fractions (0 or 1 per FREE) producing it.
    pub fn vertex_fractions(&self) -> Vec<Vec<f64>> {
        self.vertex_corners
            .iter()
            .map(|&m| {
                (0..self.generators.len())
                    .map(|i| if m >> i & 1 == 1 { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Largest generator norm; tolerances are expressed relative to it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tolerance(&self) -> f64 {
        HULL_REL_TOL * self.scale
    }

    /// Image of the pressure fractions `alpha` (one per generator).
    pub fn image(&self, alpha: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|c| {
                self.generators
                    .iter()
                    .zip(alpha)
                    .map(|(g, a)| g[c] * a)
                    .sum()
            })
            .collect()
    }

    /// Smallest and largest attainable value of component `c`.
    pub fn extent(&self, c: usize) -> (f64, f64) {
        self.generators.iter().fold((0.0, 0.0), |(lo, hi), g| {
            (lo + g[c].min(0.0), hi + g[c].max(0.0))
        })
    }

    fn generator_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.generators.len(), |r, c| {
            self.generators[c][r]
        })
    }

    /// Euclidean distance from `point` to the zonotope; zero inside.
    pub fn distance(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        Ok(match self.dim() {
            1 => {
                let (lo, hi) = self.extent(0);
                (lo - point[0]).max(point[0] - hi).max(0.0)
            }
            2 => {
                let poly: Vec<Point2> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
                distance_to_polygon(&poly, [point[0], point[1]])
            }
            _ => {
                let n = self.generators.len();
                let g = self.generator_matrix();
                let b = DVector::from_column_slice(point);
                let sol = solve_box_lsq(&g, &b, &DVector::zeros(n), &DVector::from_element(n, 1.0));
                (&g * &sol.x - b).norm()
            }
        })
    }

    /// True if `point` lies within `tol` of the zonotope; the boundary counts as inside.
    pub fn contains(&self, point: &[f64], tol: f64) -> Result<bool> {
        Ok(self.distance(point)? <= tol)
    }

    /// Exact planar area `sum_{i<j} |det[g_i g_j]|`.
    pub fn area(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                got: self.dim(),
            });
        }
        let g = &self.generators;
        let mut area = 0.0;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                area += (g[i][0] * g[j][1] - g[i][1] * g[j][0]).abs();
            }
        }
        Ok(area)
    }

    /// Shoelace area of the computed hull, for cross-checking [`Zonotope::area`].
    pub fn hull_area(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                got: self.dim(),
            });
        }
        let poly: Vec<Point2> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
        Ok(hull::polygon_area(&poly))
    }

    /// Length, area or volume for `dim()` 1, 2 or 3.
    pub fn measure(&self) -> Result<f64> {
        let g = &self.generators;
        match self.dim() {
            1 => Ok(g.iter().map(|v| v[0].abs()).sum()),
            2 => self.area(),
            3 => {
                let mut vol = 0.0;
                for i in 0..g.len() {
                    for j in i + 1..g.len() {
                        for l in j + 1..g.len() {
                            let m = nalgebra::Matrix3::from_columns(&[
                                nalgebra::Vector3::from_column_slice(&g[i]),
                                nalgebra::Vector3::from_column_slice(&g[j]),
                                nalgebra::Vector3::from_column_slice(&g[l]),
                            ]);
                            vol += m.determinant().abs();
                        }
                    }
                }
                Ok(vol)
            }
            k => Err(Error::WrongDimension {
                expected: 3,
                got: k,
            }),
        }
    }

    /// True when every wrench direction admits a strictly positive attainable
    /// component, i.e. the generators positively span the projected space and
    /// the origin (zero pressure) sits strictly inside the zonotope.
    pub fn has_full_authority(&self) -> bool {
        let tol = self.tolerance();
        if self.scale == 0.0 {
            return false;
        }
        match self.dim() {
            1 => {
                let (lo, hi) = self.extent(0);
                lo < -tol && hi > tol
            }
            2 => {
                let poly: Vec<Point2> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
                poly.len() >= 3 && min_edge_clearance(&poly, [0.0, 0.0]) > tol
            }
            k => positively_spans(&self.generator_matrix(), k, tol),
        }
    }

    /// Every vertex has its reflection through the center among the vertices.
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        self.vertices.iter().all(|v| {
            let mirror: Vec<f64> = v
                .iter()
                .zip(&self.center)
                .map(|(x, c)| 2.0 * c - x)
                .collect();
            self.vertices.iter().any(|w| dist(w, &mirror) <= tol)
        })
    }
}

/// Generators span R^k and each `-g_i` is a nonnegative combination of the others.
fn positively_spans(g: &DMatrix<f64>, k: usize, tol: f64) -> bool {
    let n = g.ncols();
    let svd = g.clone().svd(false, false);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    if rank < k {
        return false;
    }
    (0..n).all(|i| {
        let gi = g.column(i).into_owned();
        if gi.norm() <= tol {
            return true;
        }
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let a = DMatrix::from_fn(k, others.len(), |r, c| g[(r, others[c])]);
        let m = others.len();
        let sol = solve_box_lsq(
            &a,
            &(-&gi),
            &DVector::zeros(m),
            &DVector::from_element(m, f64::INFINITY),
        );
        (&a * &sol.x + &gi).norm() <= tol
    })
}

/// `sum of g_i over the set bits of mask`.
fn corner_image(generators: &[Vec<f64>], mask: u32, k: usize) -> Vec<f64> {
    let mut out = vec![0.0; k];
    for (i, g) in generators.iter().enumerate() {
        if mask >> i & 1 == 1 {
            for (o, v) in out.iter_mut().zip(g) {
                *o += v;
            }
        }
    }
    out
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Convenience wrapper over [`force_zonotope`] and [`Zonotope::has_full_authority`].
pub fn full_authority(
    assembly: &Assembly,
    state: PlatformState,
    dofs: &DofSelection,
) -> Result<bool> {
    Ok(force_zonotope(assembly, state, dofs)?.has_full_authority())
}
