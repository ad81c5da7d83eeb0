//! Fixtures shared by the benchmarks.

use fluidjac::{Actuator, Assembly, DofSelection, FreeDesign, Placement};
use nalgebra::Vector3;

/// Attachment points evenly spaced on a circle in the xy-plane.
fn ring(n: usize, radius: f64) -> Vec<Vector3<f64>> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            Vector3::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect()
}

pub fn reference_rig() -> Assembly {
    fluidjac::io::paper_rig()
        .to_assembly()
        .expect("shipped rig")
}

/// `n` parallel FREEs on a 15 mm ring with fiber angles alternating in
/// chirality and sweeping from contracting to extending.
pub fn ring_assembly(n: usize) -> Assembly {
    let actuators = ring(n, 0.015)
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let magnitude = 30.0 + 55.0 * i as f64 / n.max(2) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            Actuator {
                design: FreeDesign::new(
                    format!("f{i}"),
                    0.1,
                    0.005,
                    (sign * magnitude).to_radians(),
                    103_400.0,
                )
                .expect("valid design"),
                placement: Placement::new(d, Vector3::z()).expect("unit axis"),
            }
        })
        .collect();
    Assembly::new(actuators, DofSelection::axial()).expect("valid assembly")
}
